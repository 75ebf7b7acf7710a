#include "pgreuse/buffer.hpp"

#include <cmath>

namespace pgreuse {

WindowBuffer::WindowBuffer(int capacity, BufferMode mode)
    : capacity_(capacity), mode_(mode) {
  if (capacity < 0) throw Fault("WindowBuffer: capacity must be >= 0 (0 = unbounded)");
}

int WindowBuffer::oldest_iterate() const {
  if (entries_.empty()) throw Fault("WindowBuffer: empty");
  return entries_.front().iterate;
}

long WindowBuffer::total_trajectories() const {
  long n = 0;
  for (const auto& e : entries_) n += static_cast<long>(e.batch.size());
  return n;
}

int WindowBuffer::policy_store_count() const {
  return mode_ == BufferMode::RetainPolicies ? window_len() : 1;
}

void WindowBuffer::push(int iterate, const Policy& policy, std::vector<Trajectory> batch) {
  if (batch.empty()) throw Fault("WindowBuffer::push: empty batch");
  if (!entries_.empty() && iterate != entries_.back().iterate + 1)
    throw Fault("WindowBuffer::push: iterate indices must be consecutive");
  eval_count_ = 0;

  Entry entry;
  entry.iterate = iterate;
  entry.batch = std::move(batch);
  if (mode_ == BufferMode::RetainPolicies) {
    entry.policy_params = policy.params();
    if (!prototype_) prototype_ = policy.with_params(policy.params());
  }
  entries_.push_back(std::move(entry));
  if (capacity_ > 0 && static_cast<int>(entries_.size()) > capacity_)
    entries_.erase(entries_.begin());

  if (mode_ == BufferMode::RetainPolicies) {
    // Drop cache columns of evicted policies, then score the fresh batch
    // under every policy in the window.
    const int oldest = entries_.front().iterate;
    for (auto& e : entries_) {
      auto it = e.logliks_by_policy.begin();
      while (it != e.logliks_by_policy.end() && it->first < oldest)
        it = e.logliks_by_policy.erase(it);
    }
    Entry& fresh = entries_.back();
    for (const auto& e : entries_) {
      auto pol = policy.with_params(*e.policy_params);
      std::vector<double> col(fresh.batch.size());
      for (size_t j = 0; j < fresh.batch.size(); ++j) {
        col[j] = traj_loglik(*pol, fresh.batch[j]);
        ++eval_count_;
      }
      fresh.logliks_by_policy[e.iterate] = std::move(col);
    }
  }
}

LoglikTable WindowBuffer::target_logliks(const Policy& target) const {
  if (entries_.empty()) throw Fault("WindowBuffer::target_logliks: empty buffer");
  LoglikTable table(entries_.size());
  for (size_t i = 0; i < entries_.size(); ++i) {
    table[i].resize(entries_[i].batch.size());
    for (size_t j = 0; j < entries_[i].batch.size(); ++j) {
      table[i][j] = traj_loglik(target, entries_[i].batch[j]);
      ++eval_count_;
    }
  }
  const auto same_params = [](const Vec& a, const Vec& b) {
    return a.size() == b.size() && (a.array() == b.array()).all();
  };
  if (mode_ == BufferMode::RetainPolicies &&
      same_params(target.params(), *entries_.back().policy_params)) {
    // Donate the freshly computed values to the newest policy's cache
    // column wherever it is still missing.
    const int newest = entries_.back().iterate;
    auto& self = const_cast<WindowBuffer&>(*this);
    for (size_t i = 0; i < entries_.size(); ++i) {
      auto& cols = self.entries_[i].logliks_by_policy;
      if (cols.find(newest) == cols.end()) cols[newest] = table[i];
    }
  }
  return table;
}

void WindowBuffer::ensure_mixture_columns() {
  // Columns are normally filled at push (fresh batch) or donated by
  // target_logliks on the newest policy; anything still missing (e.g. a
  // mixture request against an out-of-window target) is computed here.
  for (auto& e : entries_) {
    for (const auto& owner : entries_) {
      if (e.logliks_by_policy.count(owner.iterate)) continue;
      auto pol = prototype_->with_params(*owner.policy_params);
      std::vector<double> col(e.batch.size());
      for (size_t j = 0; j < e.batch.size(); ++j) {
        col[j] = traj_loglik(*pol, e.batch[j]);
        ++eval_count_;
      }
      e.logliks_by_policy[owner.iterate] = std::move(col);
    }
  }
}

LoglikTable WindowBuffer::bh_mixture_logliks() {
  if (mode_ != BufferMode::RetainPolicies)
    throw Fault("bh_mixture_logliks: buffer does not retain policies (not in BH mode)");
  if (entries_.empty()) throw Fault("bh_mixture_logliks: empty buffer");
  ensure_mixture_columns();

  const double m_total = static_cast<double>(total_trajectories());
  LoglikTable mix(entries_.size());
  for (size_t i = 0; i < entries_.size(); ++i) {
    const auto& e = entries_[i];
    mix[i].resize(e.batch.size());
    for (size_t j = 0; j < e.batch.size(); ++j) {
      // log sum_l (N_l/M) p_l(tau), max-shifted for stability.
      double max_log = -std::numeric_limits<double>::infinity();
      for (const auto& owner : entries_) {
        const double v = e.logliks_by_policy.at(owner.iterate)[j] +
                         std::log(owner.batch.size() / m_total);
        max_log = std::max(max_log, v);
      }
      double acc = 0.0;
      for (const auto& owner : entries_) {
        const double v = e.logliks_by_policy.at(owner.iterate)[j] +
                         std::log(owner.batch.size() / m_total);
        acc += std::exp(v - max_log);
      }
      mix[i][j] = max_log + std::log(acc);
    }
  }
  return mix;
}

}  // namespace pgreuse
