#include <fstream>
#include <set>
#include <sstream>

#include "pgreuse/harness.hpp"

namespace pgreuse {

namespace {

struct Line {
  int number;
  std::string key;
  std::string value;
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(const std::string& origin, int line, const std::string& msg) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + msg);
}

double parse_double(const std::string& origin, const Line& l) {
  try {
    size_t pos = 0;
    const double v = std::stod(l.value, &pos);
    if (pos != l.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    fail(origin, l.number, "invalid number for '" + l.key + "': " + l.value);
  }
}

long parse_int(const std::string& origin, const Line& l) {
  try {
    size_t pos = 0;
    const long v = std::stol(l.value, &pos);
    if (pos != l.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    fail(origin, l.number, "invalid integer for '" + l.key + "': " + l.value);
  }
}

AlgoTag parse_algo(const std::string& origin, const Line& l) {
  if (l.value == "RPG") return AlgoTag::Rpg;
  if (l.value == "RPG-TH") return AlgoTag::RpgTh;
  if (l.value == "GPOMDP") return AlgoTag::Gpomdp;
  if (l.value == "MIW-PG") return AlgoTag::MiwPg;
  if (l.value == "BH-PG") return AlgoTag::BhPg;
  if (l.value == "PGPE-RPG") return AlgoTag::PgpeRpg;
  fail(origin, l.number, "unknown algo: " + l.value);
}

ScheduleTag parse_schedule(const std::string& origin, const Line& l) {
  if (l.value == "adaptive") return ScheduleTag::Adaptive;
  if (l.value == "theory") return ScheduleTag::Theory;
  if (l.value == "theory-simple") return ScheduleTag::TheorySimple;
  fail(origin, l.number, "unknown schedule: " + l.value);
}

}  // namespace

ExperimentSuite parse_config_text(const std::string& text, const std::string& origin) {
  ExperimentSuite suite;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;

  // Section -1 is the suite header; each [run NAME] opens a new config.
  int current = -1;
  std::vector<std::vector<Line>> run_lines;
  std::vector<std::string> run_names;
  std::vector<int> run_starts;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = trim(raw);
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = trim(line.substr(0, hash));
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') fail(origin, line_no, "unterminated section header");
      const std::string inner = trim(line.substr(1, line.size() - 2));
      if (inner.rfind("run", 0) != 0)
        fail(origin, line_no, "unknown section '" + inner + "' (expected [run NAME])");
      const std::string name = trim(inner.substr(3));
      if (name.empty()) fail(origin, line_no, "run section needs a name");
      run_names.push_back(name);
      run_lines.emplace_back();
      run_starts.push_back(line_no);
      current = static_cast<int>(run_lines.size()) - 1;
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(origin, line_no, "expected 'key = value'");
    Line l{line_no, trim(line.substr(0, eq)), trim(line.substr(eq + 1))};
    if (l.key.empty()) fail(origin, line_no, "empty key");

    if (current < 0) {
      if (l.key == "seeds") {
        std::istringstream ss(l.value);
        std::uint64_t s;
        while (ss >> s) suite.seeds.push_back(s);
        if (!ss.eof()) fail(origin, line_no, "invalid seed list: " + l.value);
        if (suite.seeds.empty()) fail(origin, line_no, "empty seed list");
      } else if (l.key == "out_dir") {
        suite.out_dir = l.value;
      } else if (l.key == "threads") {
        suite.threads = static_cast<int>(parse_int(origin, l));
      } else {
        fail(origin, line_no, "unknown suite key '" + l.key + "'");
      }
    } else {
      run_lines[current].push_back(l);
    }
  }

  if (suite.seeds.empty())
    throw ConfigError(origin + ": missing required suite key 'seeds'");
  if (run_names.empty()) throw ConfigError(origin + ": no [run ...] sections");

  for (size_t r = 0; r < run_names.size(); ++r) {
    RunConfig cfg;
    cfg.name = run_names[r];
    std::set<std::string> seen;
    bool horizon_given = false;
    for (const Line& l : run_lines[r]) {
      if (!seen.insert(l.key).second)
        fail(origin, l.number, "duplicate key '" + l.key + "'");
      if (l.key == "env") cfg.env = l.value;
      else if (l.key == "horizon") { cfg.horizon = static_cast<int>(parse_int(origin, l)); horizon_given = true; }
      else if (l.key == "gamma") cfg.gamma = parse_double(origin, l);
      else if (l.key == "sigma2") cfg.sigma2 = parse_double(origin, l);
      else if (l.key == "theta_init") cfg.theta_init = parse_double(origin, l);
      else if (l.key == "algo") cfg.algo = parse_algo(origin, l);
      else if (l.key == "iterations") cfg.iterations = static_cast<int>(parse_int(origin, l));
      else if (l.key == "batch") cfg.batch = static_cast<int>(parse_int(origin, l));
      else if (l.key == "window") cfg.window = static_cast<int>(parse_int(origin, l));
      else if (l.key == "schedule") cfg.schedule = parse_schedule(origin, l);
      else if (l.key == "D") cfg.divergence_bound = parse_double(origin, l);
      else if (l.key == "delta") cfg.delta = parse_double(origin, l);
      else if (l.key == "optimizer") {
        if (l.value == "adam") cfg.optimizer = OptimizerMode::Adam;
        else if (l.value == "constant") cfg.optimizer = OptimizerMode::Constant;
        else fail(origin, l.number, "unknown optimizer: " + l.value);
      }
      else if (l.key == "step") cfg.step = parse_double(origin, l);
      else if (l.key == "output") {
        if (l.value == "best") cfg.output = OutputSelection::Best;
        else if (l.value == "uniform") cfg.output = OutputSelection::UniformRandom;
        else fail(origin, l.number, "unknown output selection: " + l.value);
      }
      else if (l.key == "inner") {
        if (l.value == "gpomdp") cfg.inner = InnerEstimator::Gpomdp;
        else if (l.value == "reinforce") cfg.inner = InnerEstimator::Reinforce;
        else fail(origin, l.number, "unknown inner estimator: " + l.value);
      }
      else fail(origin, l.number, "unknown key '" + l.key + "'");
    }

    auto require = [&](const char* key) {
      if (!seen.count(key))
        fail(origin, run_starts[r],
             "run '" + cfg.name + "' is missing required key '" + std::string(key) + "'");
    };
    require("algo");
    require("iterations");
    require("batch");
    if (cfg.algo == AlgoTag::Gpomdp) {
      if (seen.count("window") && cfg.window != 1)
        fail(origin, run_starts[r], "GPOMDP runs are on-policy; window must be 1");
      cfg.window = 1;
    } else {
      require("window");
    }
    if (cfg.algo == AlgoTag::RpgTh || cfg.schedule != ScheduleTag::Adaptive) require("D");
    if (cfg.schedule == ScheduleTag::Theory) require("delta");
    if (!horizon_given && cfg.env == "quadbowl") cfg.horizon = 1;

    cfg.validate();
    suite.runs.push_back(cfg);
  }

  // Runs in one suite are compared on a common axis, so they must share the
  // environment and discount.
  for (const RunConfig& cfg : suite.runs) {
    if (cfg.env != suite.runs.front().env || cfg.gamma != suite.runs.front().gamma)
      throw ConfigError(origin + ": all runs in a suite must share env and gamma");
  }
  return suite;
}

ExperimentSuite parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace pgreuse
