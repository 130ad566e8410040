#pragma once
// Heisenberg vertex algebra M(0) in the monomial basis h(-k_1)...h(-k_p)1.
//
// Vectors are templated on the scalar so that the combinatorial identities
// can be checked in exact rational arithmetic.

#include <complex>
#include <map>
#include <vector>

#include "ce2/errors.hpp"
#include "ce2/series.hpp"

namespace ce2 {

// Weakly decreasing mode depths k_1 >= ... >= k_p >= 1.
class PartitionState {
 public:
  PartitionState() = default;
  static PartitionState from_depths(std::vector<int> ks);

  const std::vector<int>& depths() const { return ks_; }
  int particles() const { return static_cast<int>(ks_.size()); }
  int weight() const;
  int max_depth() const { return ks_.empty() ? 0 : ks_.front(); }
  int multiplicity(int k) const;

  PartitionState with(int k) const;
  PartitionState without(int k) const;  // one copy; k must be present

  bool operator==(const PartitionState& o) const { return ks_ == o.ks_; }
  // weight, then particle number, then depths
  bool operator<(const PartitionState& o) const;

 private:
  std::vector<int> ks_;
};

// All partitions of weight <= W with at most P parts, in canonical order.
std::vector<PartitionState> partitions_up_to(int W, int P);
std::vector<PartitionState> partitions_of(int weight, int P);

template <class S>
S conj_scalar(const S& x) {
  return x;
}
template <class T>
std::complex<T> conj_scalar(const std::complex<T>& x) {
  return std::conj(x);
}

template <class S>
class HeisenbergVectorT {
 public:
  using Table = std::map<PartitionState, S>;

  HeisenbergVectorT() = default;
  HeisenbergVectorT(int particles, int weight) : particles_(particles), weight_(weight) {
    if (particles < 0 || weight < 0) throw CutoffError("negative Heisenberg cutoff");
  }
  static HeisenbergVectorT vacuum(int particles, int weight) {
    HeisenbergVectorT v(particles, weight);
    v.add(PartitionState(), S(1));
    return v;
  }
  static HeisenbergVectorT basis(int particles, int weight, const PartitionState& s, S amp = S(1)) {
    HeisenbergVectorT v(particles, weight);
    v.add(s, amp);
    return v;
  }

  int particle_cutoff() const { return particles_; }
  int weight_cutoff() const { return weight_; }
  long dropped() const { return dropped_; }
  const Table& table() const { return amps_; }

  S amp(const PartitionState& s) const {
    const auto it = amps_.find(s);
    return it == amps_.end() ? S(0) : it->second;
  }

  // States outside the cutoffs are dropped and counted.
  void add(const PartitionState& s, const S& a) {
    if (s.particles() > particles_ || s.weight() > weight_) {
      ++dropped_;
      return;
    }
    if (a == S(0)) return;
    auto it = amps_.find(s);
    if (it == amps_.end()) {
      amps_.emplace(s, a);
      return;
    }
    it->second += a;
    if (it->second == S(0)) amps_.erase(it);
  }

  int max_depth() const {
    int d = 0;
    for (const auto& [s, a] : amps_) d = std::max(d, s.max_depth());
    return d;
  }

  HeisenbergVectorT& operator+=(const HeisenbergVectorT& o) {
    for (const auto& [s, a] : o.amps_) add(s, a);
    dropped_ += o.dropped_;
    return *this;
  }
  HeisenbergVectorT& operator-=(const HeisenbergVectorT& o) {
    for (const auto& [s, a] : o.amps_) add(s, -a);
    dropped_ += o.dropped_;
    return *this;
  }
  HeisenbergVectorT& operator*=(const S& k) {
    if (k == S(0)) amps_.clear();
    for (auto& [s, a] : amps_) a *= k;
    return *this;
  }
  friend HeisenbergVectorT operator+(HeisenbergVectorT a, const HeisenbergVectorT& b) { return a += b; }
  friend HeisenbergVectorT operator-(HeisenbergVectorT a, const HeisenbergVectorT& b) { return a -= b; }
  friend HeisenbergVectorT operator*(const S& k, HeisenbergVectorT a) { return a *= k; }

  bool operator==(const HeisenbergVectorT& o) const { return amps_ == o.amps_; }

 private:
  int particles_ = 0;
  int weight_ = 0;
  long dropped_ = 0;
  Table amps_;
};

using HeisenbergVector = HeisenbergVectorT<Complex>;

// h(n): creation for n < 0, n times the multiplicity of depth n for n > 0.
template <class S>
HeisenbergVectorT<S> mode_h(int n, const HeisenbergVectorT<S>& v) {
  HeisenbergVectorT<S> out(v.particle_cutoff(), v.weight_cutoff());
  if (n == 0) return out;
  for (const auto& [s, a] : v.table()) {
    if (n < 0) {
      out.add(s.with(-n), a);
    } else if (const int m = s.multiplicity(n); m > 0) {
      out.add(s.without(n), a * S(n * m));
    }
  }
  return out;
}

// L(n) = 1/2 ( sum_{k>=0} h(n-k)h(k) + sum_{k<0} h(k)h(n-k) ); only the
// finitely many terms whose first mode does not annihilate are visited.
template <class S>
HeisenbergVectorT<S> virasoro_L(int n, const HeisenbergVectorT<S>& v) {
  HeisenbergVectorT<S> acc(v.particle_cutoff(), v.weight_cutoff());
  const int d = v.max_depth();
  for (int k = 1; k <= d; ++k) acc += mode_h(n - k, mode_h(k, v));
  // k < n - d would make h(n-k) annihilate a depth above d
  for (int k = n - d; k <= -1; ++k) acc += mode_h(k, mode_h(n - k, v));
  acc *= S(1) / S(2);
  return acc;
}

template <class S>
S inner_norm_factor(const PartitionState& s) {
  S f(1);
  const auto& ks = s.depths();
  int run = 0;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    run = (i > 0 && ks[i] == ks[i - 1]) ? run + 1 : 1;
    f *= S(run) * S(ks[i]);
  }
  return f;
}

// (u, v)_M, conjugate-linear in u; diagonal with prod m! k^m.
template <class S>
S inner_M(const HeisenbergVectorT<S>& u, const HeisenbergVectorT<S>& v) {
  S acc(0);
  for (const auto& [s, a] : u.table()) {
    const S b = v.amp(s);
    if (b != S(0)) acc += conj_scalar(a) * b * inner_norm_factor<S>(s);
  }
  return acc;
}

// Vacuum coefficient of h(k_1)...h(k_p) v for the depths of s.
template <class S>
S annihilation_pairing(const PartitionState& s, const HeisenbergVectorT<S>& v) {
  HeisenbergVectorT<S> cur = v;
  for (int k : s.depths()) cur = mode_h(k, cur);
  return cur.amp(PartitionState());
}

// theta(h(-k_1)...h(-k_p)1) = (-1)^p times the conjugated state
template <class S>
HeisenbergVectorT<S> theta(const HeisenbergVectorT<S>& v) {
  HeisenbergVectorT<S> out(v.particle_cutoff(), v.weight_cutoff());
  for (const auto& [s, a] : v.table()) out.add(s, (s.particles() % 2 ? S(-1) : S(1)) * conj_scalar(a));
  return out;
}

// Invariant bilinear form on basis states, from h(n)^dagger = -h(-n).
template <class S>
S invariant_form(const PartitionState& a, const PartitionState& b, int particles, int weight) {
  const auto vb = HeisenbergVectorT<S>::basis(particles, weight, b);
  const S pair = annihilation_pairing(a, vb);
  return a.particles() % 2 ? -pair : pair;
}

template <class S>
HeisenbergVectorT<S> scale_L0(double t, const HeisenbergVectorT<S>& v) {
  if (!(t > 0.0)) throw DomainError("scale_L0 needs t > 0");
  HeisenbergVectorT<S> out(v.particle_cutoff(), v.weight_cutoff());
  for (const auto& [s, a] : v.table()) out.add(s, a * S(std::pow(t, s.weight())));
  return out;
}

}  // namespace ce2
