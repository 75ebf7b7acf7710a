#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pgreuse/harness.hpp"

namespace pgreuse {

namespace {
// Shortest representation that round-trips a double; keeps CSV output
// byte-stable across reruns.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  double back;
  std::sscanf(buf, "%lg", &back);
  if (back == v) {
    for (int prec = 1; prec < 17; ++prec) {
      char shorter[32];
      std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
      std::sscanf(shorter, "%lg", &back);
      if (back == v) return shorter;
    }
  }
  return buf;
}
}  // namespace

void write_run_csv(std::ostream& out, const LearningCurve& curve) {
  out << "iteration,collected,used,mean_return,grad_norm,mean_alpha,mean_lambda,"
         "mean_dhat,likelihood_evals,seed\n";
  for (const IterationRecord& r : curve.rows) {
    out << r.iteration << ',' << r.collected << ',' << r.used << ','
        << fmt(r.mean_return) << ',' << fmt(r.grad_norm) << ',' << fmt(r.mean_alpha) << ','
        << fmt(r.mean_lambda) << ',' << fmt(r.mean_dhat) << ',' << r.likelihood_evals
        << ',' << curve.seed << '\n';
  }
  out << "# selection = " << to_string(curve.selection) << '\n';
  out << "# theta_out =";
  for (int i = 0; i < curve.theta_out.size(); ++i) out << ' ' << fmt(curve.theta_out[i]);
  out << '\n';
  if (curve.skipped_iterations > 0)
    out << "# skipped_iterations = " << curve.skipped_iterations << '\n';
}

void write_run_csv_file(const std::string& path, const LearningCurve& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Fault("cannot write " + path);
  write_run_csv(out, curve);
}

AggregateCurve aggregate_runs(const std::string& name,
                              const std::vector<LearningCurve>& curves) {
  if (curves.empty()) throw Fault("aggregate_runs: no curves");
  const size_t len = curves.front().rows.size();
  for (const auto& c : curves)
    if (c.rows.size() != len)
      throw Fault("aggregate_runs: curves disagree on iteration count");

  AggregateCurve agg;
  agg.name = name;
  agg.points.resize(len);
  const int n = static_cast<int>(curves.size());
  for (size_t i = 0; i < len; ++i) {
    double mean = 0.0;
    for (const auto& c : curves) mean += c.rows[i].mean_return;
    mean /= n;
    double var = 0.0;
    for (const auto& c : curves) {
      const double d = c.rows[i].mean_return - mean;
      var += d * d;
    }
    const double se = n > 1 ? std::sqrt(var / (n - 1) / n) : 0.0;
    AggregatePoint& p = agg.points[i];
    p.x = static_cast<double>(curves.front().rows[i].collected);
    p.mean = mean;
    p.se = se;
    p.lo = mean - 1.96 * se;
    p.hi = mean + 1.96 * se;
    p.n = n;
  }
  return agg;
}

void write_aggregate_csv(std::ostream& out, const AggregateCurve& curve) {
  out << "collected,n_seeds,mean_return,se,ci_lo,ci_hi\n";
  for (const AggregatePoint& p : curve.points)
    out << fmt(p.x) << ',' << p.n << ',' << fmt(p.mean) << ',' << fmt(p.se) << ','
        << fmt(p.lo) << ',' << fmt(p.hi) << '\n';
  out << "# series = " << curve.name << '\n';
}

void write_aggregate_csv_file(const std::string& path, const AggregateCurve& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Fault("cannot write " + path);
  write_aggregate_csv(out, curve);
}

AggregateCurve read_aggregate_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Fault("cannot open " + path);
  AggregateCurve curve;
  curve.name = path;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (line.find("series") != std::string::npos && eq != std::string::npos) {
        std::string name = line.substr(eq + 1);
        const auto b = name.find_first_not_of(' ');
        if (b != std::string::npos) curve.name = name.substr(b);
      }
      continue;
    }
    if (header) {
      header = false;
      continue;
    }
    AggregatePoint p;
    std::istringstream ss(line);
    char comma;
    if (!(ss >> p.x >> comma >> p.n >> comma >> p.mean >> comma >> p.se >> comma >>
          p.lo >> comma >> p.hi))
      throw Fault("malformed aggregate CSV row in " + path + ": " + line);
    curve.points.push_back(p);
  }
  if (curve.points.empty()) throw Fault("empty aggregate CSV: " + path);
  return curve;
}

}  // namespace pgreuse
