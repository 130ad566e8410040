#include "ce2/heisenberg.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace ce2 {

PartitionState PartitionState::from_depths(std::vector<int> ks) {
  for (int k : ks)
    if (k < 1) throw UsageError("mode depths must be positive");
  std::sort(ks.begin(), ks.end(), std::greater<>());
  PartitionState s;
  s.ks_ = std::move(ks);
  return s;
}

int PartitionState::weight() const { return std::accumulate(ks_.begin(), ks_.end(), 0); }

int PartitionState::multiplicity(int k) const {
  return static_cast<int>(std::count(ks_.begin(), ks_.end(), k));
}

PartitionState PartitionState::with(int k) const {
  if (k < 1) throw UsageError("mode depths must be positive");
  PartitionState s = *this;
  s.ks_.insert(std::upper_bound(s.ks_.begin(), s.ks_.end(), k, std::greater<>()), k);
  return s;
}

PartitionState PartitionState::without(int k) const {
  PartitionState s = *this;
  const auto it = std::find(s.ks_.begin(), s.ks_.end(), k);
  if (it == s.ks_.end()) throw UsageError("depth not present");
  s.ks_.erase(it);
  return s;
}

bool PartitionState::operator<(const PartitionState& o) const {
  const int w = weight(), wo = o.weight();
  if (w != wo) return w < wo;
  if (ks_.size() != o.ks_.size()) return ks_.size() < o.ks_.size();
  return ks_ > o.ks_;
}

std::vector<PartitionState> partitions_of(int weight, int P) {
  std::vector<PartitionState> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int left, int maxpart) {
    if (left == 0) {
      out.push_back(PartitionState::from_depths(cur));
      return;
    }
    if (static_cast<int>(cur.size()) == P) return;
    for (int k = std::min(left, maxpart); k >= 1; --k) {
      cur.push_back(k);
      rec(left - k, k);
      cur.pop_back();
    }
  };
  rec(weight, weight);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<PartitionState> partitions_up_to(int W, int P) {
  std::vector<PartitionState> out;
  for (int w = 0; w <= W; ++w) {
    const auto part = partitions_of(w, P);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace ce2
