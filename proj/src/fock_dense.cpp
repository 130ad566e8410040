#include "ce2/fock_dense.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ce2 {

namespace {

long ipow(int b, int e) {
  long r = 1;
  for (int k = 0; k < e; ++k) r *= b;
  return r;
}

std::vector<int> digits(long flat, int N, int p) {
  std::vector<int> d(p);
  for (int k = p - 1; k >= 0; --k) {
    d[k] = static_cast<int>(flat % N);
    flat /= N;
  }
  return d;
}

long flatten(const std::vector<int>& d, int N) {
  long f = 0;
  for (int a : d) f = f * N + a;
  return f;
}

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// sqrt(prod nu! / p!): coefficient of each arrangement in e^_nu
double arrangement_weight(const OccupationIndex& idx) {
  return std::sqrt(idx.occupation_factorial() / factorial(idx.particles()));
}

void check_scale(int N, int p) {
  if (N > kDenseMaxModes || p > kDenseMaxRank)
    throw OracleScaleError("dense oracle limited to N <= " + std::to_string(kDenseMaxModes) + ", rank <= " +
                           std::to_string(kDenseMaxRank));
}

}  // namespace

DenseTensor::DenseTensor(int N, int p) : modes(N), rank(p) {
  check_scale(N, p);
  data = Eigen::VectorXcd::Zero(ipow(N, p));
}

Complex& DenseTensor::at(const std::vector<int>& idx) { return data(flatten(idx, modes)); }
Complex DenseTensor::at(const std::vector<int>& idx) const { return data(flatten(idx, modes)); }

DenseTensor dense_product(const std::vector<BergmanVector>& vs) {
  const int N = vs.empty() ? 1 : static_cast<int>(vs.front().size());
  DenseTensor t(N, static_cast<int>(vs.size()));
  for (long f = 0; f < t.data.size(); ++f) {
    const auto d = digits(f, N, t.rank);
    Complex x = 1.0;
    for (int k = 0; k < t.rank; ++k) x *= vs[k](d[k]);
    t.data(f) = x;
  }
  return t;
}

DenseTensor dense_tensor(const DenseTensor& a, const DenseTensor& b) {
  if (a.modes != b.modes) throw UsageError("dense_tensor: mode mismatch");
  DenseTensor t(a.modes, a.rank + b.rank);
  for (long i = 0; i < a.data.size(); ++i)
    for (long j = 0; j < b.data.size(); ++j) t.data(i * b.data.size() + j) = a.data(i) * b.data(j);
  return t;
}

DenseTensor dense_average(const DenseTensor& t) {
  DenseTensor out(t.modes, t.rank);
  std::vector<int> perm(t.rank);
  std::iota(perm.begin(), perm.end(), 0);
  int count = 0;
  do {
    ++count;
    for (long f = 0; f < t.data.size(); ++f) {
      const auto d = digits(f, t.modes, t.rank);
      std::vector<int> e(t.rank);
      for (int k = 0; k < t.rank; ++k) e[k] = d[perm[k]];
      out.data(flatten(e, t.modes)) += t.data(f);
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  out.data /= double(count);
  return out;
}

DenseTensor dense_from_fock(const FockVector& v, int p) {
  DenseTensor t(v.modes(), p);
  for (long f = 0; f < t.data.size(); ++f) {
    const auto idx = OccupationIndex::from_modes(digits(f, t.modes, p));
    t.data(f) = v.amp(idx) * arrangement_weight(idx);
  }
  return t;
}

FockVector dense_to_fock(const DenseTensor& t, int particle_cutoff) {
  FockVector v(t.modes, particle_cutoff);
  for (long f = 0; f < t.data.size(); ++f) {
    const auto idx = OccupationIndex::from_modes(digits(f, t.modes, t.rank));
    v.add(idx, arrangement_weight(idx) * t.data(f));
  }
  return v;
}

FockVector dense_symmetrize(const std::vector<BergmanVector>& vs, int particle_cutoff) {
  if (vs.size() > 4) throw OracleScaleError("dense_symmetrize limited to 4 factors");
  return dense_to_fock(dense_average(dense_product(vs)), particle_cutoff);
}

DenseTensor dense_lift(const Eigen::MatrixXcd& M, const DenseTensor& t) {
  DenseTensor cur = t;
  // apply M on one slot at a time
  for (int k = 0; k < t.rank; ++k) {
    DenseTensor next(t.modes, t.rank);
    for (long f = 0; f < cur.data.size(); ++f) {
      if (cur.data(f) == Complex(0.0)) continue;
      auto d = digits(f, t.modes, t.rank);
      const int a = d[k];
      for (int n = 0; n < t.modes; ++n) {
        d[k] = n;
        next.data(flatten(d, t.modes)) += M(n, a) * cur.data(f);
      }
    }
    cur = std::move(next);
  }
  return cur;
}

DenseTensor dense_pair_contract(const Eigen::MatrixXcd& c, const DenseTensor& t) {
  if (t.rank < 2) return DenseTensor(t.modes, std::max(0, t.rank - 2));
  DenseTensor out(t.modes, t.rank - 2);
  for (long f = 0; f < t.data.size(); ++f) {
    const auto d = digits(f, t.modes, t.rank);
    for (int i = 0; i < t.rank; ++i)
      for (int j = i + 1; j < t.rank; ++j) {
        std::vector<int> rest;
        for (int k = 0; k < t.rank; ++k)
          if (k != i && k != j) rest.push_back(d[k]);
        out.data(flatten(rest, t.modes)) += c(d[i], d[j]) * t.data(f);
      }
  }
  return out;
}

DenseTensor dense_cross_contract(const Eigen::MatrixXcd& c, const DenseTensor& t, int split) {
  DenseTensor out(t.modes, std::max(0, t.rank - 2));
  if (split < 1 || split >= t.rank) return out;
  for (long f = 0; f < t.data.size(); ++f) {
    const auto d = digits(f, t.modes, t.rank);
    for (int i = 0; i < split; ++i)
      for (int j = split; j < t.rank; ++j) {
        std::vector<int> rest;
        for (int k = 0; k < t.rank; ++k)
          if (k != i && k != j) rest.push_back(d[k]);
        out.data(flatten(rest, t.modes)) += c(d[i], d[j]) * t.data(f);
      }
  }
  return out;
}

SlotTensor dense_to_slots(const DenseTensor& t, int split) {
  SlotTensor s(2);
  for (long f = 0; f < t.data.size(); ++f) {
    const auto d = digits(f, t.modes, t.rank);
    const auto u = OccupationIndex::from_modes({d.begin(), d.begin() + split});
    const auto w = OccupationIndex::from_modes({d.begin() + split, d.end()});
    s.add({u, w}, arrangement_weight(u) * arrangement_weight(w) * t.data(f));
  }
  return s;
}

}  // namespace ce2
