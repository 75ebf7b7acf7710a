#ifndef PGREUSE_COMMON_HPP
#define PGREUSE_COMMON_HPP

#include <Eigen/Core>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

namespace pgreuse {

using Vec = Eigen::VectorXd;

/// Raised on numerical faults (overflowing importance weights, non-finite
/// states, exceeded enumeration budgets, ...). Carries a short context string.
class Fault : public std::runtime_error {
 public:
  explicit Fault(const std::string& what) : std::runtime_error(what) {}
};

/// Raised on invalid configuration files or malformed CLI input.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// SplitMix64 step, used to derive independent stream seeds from a master
// seed and a stream index without correlations between nearby indices.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d49bb133111ebULL;
  return x ^ (x >> 31);
}

/// A seeded random stream. Streams are derived from (master seed, indices)
/// so that work items can run concurrently yet reproduce bit-identically
/// regardless of scheduling.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(seed) {}

  static RngStream derive(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0) {
    std::uint64_t s = splitmix64(master ^ splitmix64(a ^ splitmix64(b ^ splitmix64(c))));
    return RngStream(s);
  }

  double uniform() { return unif_(gen_); }          // [0,1)
  double normal() { return norm_(gen_); }           // N(0,1)
  std::uint64_t bits() { return gen_(); }

  Vec normal_vec(int n) {
    Vec v(n);
    for (int i = 0; i < n; ++i) v[i] = normal();
    return v;
  }

  std::mt19937_64& generator() { return gen_; }

 private:
  std::mt19937_64 gen_;
  std::uniform_real_distribution<double> unif_{0.0, 1.0};
  std::normal_distribution<double> norm_{0.0, 1.0};
};

}  // namespace pgreuse

#endif  // PGREUSE_COMMON_HPP
