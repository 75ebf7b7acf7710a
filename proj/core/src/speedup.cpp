#include <algorithm>
#include <cmath>

#include "pgreuse/harness.hpp"

namespace pgreuse {

namespace {

// Piecewise-linear interpolation of (x, y(x)) samples at query q; the
// samples are strictly increasing in x.
double lerp_at(const std::vector<double>& xs, const std::vector<double>& ys, double q) {
  if (q <= xs.front()) return ys.front();
  if (q >= xs.back()) return ys.back();
  const auto it = std::upper_bound(xs.begin(), xs.end(), q);
  const size_t hi = static_cast<size_t>(it - xs.begin());
  const size_t lo = hi - 1;
  const double t = (q - xs[lo]) / (xs[hi] - xs[lo]);
  return ys[lo] + t * (ys[hi] - ys[lo]);
}

constexpr int kMinOverlapPoints = 5;

// Mean squared error between the fast curve with x stretched by s and the
// baseline, evaluated at baseline grid points inside the overlap.
double rescaled_mse(const std::vector<double>& fx, const std::vector<double>& fy,
                    const std::vector<double>& bx, const std::vector<double>& by,
                    double s) {
  const double lo = std::max(s * fx.front(), bx.front());
  const double hi = std::min(s * fx.back(), bx.back());
  if (hi <= lo) return std::numeric_limits<double>::infinity();
  double acc = 0.0;
  int n = 0;
  for (size_t i = 0; i < bx.size(); ++i) {
    if (bx[i] < lo || bx[i] > hi) continue;
    const double pred = lerp_at(fx, fy, bx[i] / s);
    const double d = pred - by[i];
    acc += d * d;
    ++n;
  }
  if (n < kMinOverlapPoints) return std::numeric_limits<double>::infinity();
  return acc / n;
}

struct GridSearch {
  double best_s = 0.0;
  double best_mse = std::numeric_limits<double>::infinity();
};

GridSearch search(const std::vector<double>& fx, const std::vector<double>& fy,
                  const std::vector<double>& bx, const std::vector<double>& by,
                  double s_min, double s_max, double step) {
  GridSearch g;
  const int n_steps = static_cast<int>(std::round((s_max - s_min) / step));
  for (int i = 0; i <= n_steps; ++i) {
    const double s = s_min + i * step;
    const double mse = rescaled_mse(fx, fy, bx, by, s);
    if (mse < g.best_mse) {
      g.best_mse = mse;
      g.best_s = s;
    }
  }
  return g;
}

}  // namespace

SpeedupResult speedup_factor(const AggregateCurve& fast, const AggregateCurve& baseline,
                             int omega) {
  if (omega < 1) throw Fault("speedup_factor: omega must be >= 1");
  if (fast.points.size() < 2 || baseline.points.size() < 2)
    throw Fault("speedup_factor: curves need at least two points");

  auto unpack = [](const AggregateCurve& c, double band) {
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const AggregatePoint& p : c.points) {
      out.first.push_back(p.x);
      out.second.push_back(band < 0 ? p.lo : (band > 0 ? p.hi : p.mean));
    }
    return out;
  };

  const auto [fx, fy] = unpack(fast, 0);
  const auto [bx, by] = unpack(baseline, 0);

  SpeedupResult res;
  res.grid_min = 0.5;
  res.grid_max = omega + 1.0;
  res.grid_step = 0.01;

  const GridSearch mean_fit = search(fx, fy, bx, by, res.grid_min, res.grid_max,
                                     res.grid_step);
  if (!std::isfinite(mean_fit.best_mse))
    throw Fault("speedup_factor: curves too short to overlap after rescaling");
  res.factor = mean_fit.best_s;
  res.mse = mean_fit.best_mse;

  // Pessimistic bound: the fast curve's lower band against the baseline's
  // upper band; optimistic bound the other way around. Degenerate fits fall
  // back to the mean estimate.
  const auto [flx, fly] = unpack(fast, -1);
  const auto [bhx, bhy] = unpack(baseline, +1);
  const GridSearch lo_fit = search(flx, fly, bhx, bhy, res.grid_min, res.grid_max,
                                   res.grid_step);
  const auto [fhx, fhy] = unpack(fast, +1);
  const auto [blx, bly] = unpack(baseline, -1);
  const GridSearch hi_fit = search(fhx, fhy, blx, bly, res.grid_min, res.grid_max,
                                   res.grid_step);
  res.lo = std::isfinite(lo_fit.best_mse) ? lo_fit.best_s : res.factor;
  res.hi = std::isfinite(hi_fit.best_mse) ? hi_fit.best_s : res.factor;
  if (res.lo > res.hi) std::swap(res.lo, res.hi);
  res.lo = std::min(res.lo, res.factor);
  res.hi = std::max(res.hi, res.factor);
  return res;
}

}  // namespace pgreuse
