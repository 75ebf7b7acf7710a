#ifndef PGREUSE_BUFFER_HPP
#define PGREUSE_BUFFER_HPP

#include <map>
#include <optional>
#include <vector>

#include "pgreuse/policy.hpp"

namespace pgreuse {

/// What the sliding window retains besides trajectories.
///
/// TrajectoriesOnly: entries hold trajectories with their cached behavioral
/// log-densities; no past parameter vector is kept (the single live policy
/// belongs to the learner). This is all the power-mean and constant-beta
/// estimators need.
///
/// RetainPolicies: entries additionally keep the generating parameters and a
/// per-trajectory likelihood cache under every window policy, which the
/// balance-heuristic mixture requires. Costs one extra batch-sized round of
/// likelihood evaluations per iteration.
enum class BufferMode { TrajectoriesOnly, RetainPolicies };

/// Per-trajectory log-likelihoods under one target, aligned with entries.
using LoglikTable = std::vector<std::vector<double>>;

/// Sliding window over the most recent iterations' (parameters, batch)
/// pairs. Window length is min(capacity, pushes so far); capacity 0 means
/// unbounded (full reuse). Counts fresh per-trajectory likelihood
/// evaluations per iteration: the count is reset by push() and grows by one
/// for every (trajectory, policy) log-density actually computed.
class WindowBuffer {
 public:
  struct Entry {
    int iterate = 0;
    std::vector<Trajectory> batch;
    std::optional<Vec> policy_params;               // RetainPolicies only
    std::map<int, std::vector<double>> logliks_by_policy;  // RetainPolicies only
  };

  explicit WindowBuffer(int capacity, BufferMode mode = BufferMode::TrajectoriesOnly);

  /// Append an iterate. Evicts the oldest entry beyond capacity and resets
  /// the per-iteration evaluation counter. In RetainPolicies mode the fresh
  /// batch is immediately evaluated under every window policy (counted).
  void push(int iterate, const Policy& policy, std::vector<Trajectory> batch);

  /// log p_target(tau) for every stored trajectory (policy factors only).
  /// Charges one evaluation per trajectory. In RetainPolicies mode, when the
  /// target parameters equal the newest window policy, the freshly computed
  /// values also populate that policy's cache column at no extra charge.
  LoglikTable target_logliks(const Policy& target) const;

  /// log of the balance-heuristic mixture sum_l (N_l / M) p_l(tau) per
  /// stored trajectory. Requires RetainPolicies mode; any cache column still
  /// missing is computed on demand (counted).
  LoglikTable bh_mixture_logliks();

  const std::vector<Entry>& entries() const { return entries_; }
  BufferMode mode() const { return mode_; }
  int capacity() const { return capacity_; }
  int window_len() const { return static_cast<int>(entries_.size()); }
  int oldest_iterate() const;
  long total_trajectories() const;

  /// Fresh likelihood evaluations since the last push.
  long eval_count() const { return eval_count_; }
  /// Distinct parameter vectors alive for this window (the learner's own
  /// current policy counts as one).
  int policy_store_count() const;

 private:
  void ensure_mixture_columns();

  int capacity_;
  BufferMode mode_;
  std::vector<Entry> entries_;
  std::unique_ptr<Policy> prototype_;  // RetainPolicies: rebuilds policies from params
  mutable long eval_count_ = 0;
};

}  // namespace pgreuse

#endif  // PGREUSE_BUFFER_HPP
