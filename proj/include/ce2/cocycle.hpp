#pragma once
// The cocycles F_phi(z,w) and G_{phi,psi}(z,w), their Grunsky matrices and
// Hilbert-Schmidt diagnostics.

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "ce2/diskmap.hpp"

namespace ce2 {

enum class KernelSource { F, G };

template <class R>
struct GrunskyMatrix {
  int cutoff = 0;
  int valid_total_degree = -1;
  KernelSource source = KernelSource::F;
  std::vector<std::complex<R>> entries;  // row-major, untrusted entries are zero

  std::complex<R> operator()(int n, int m) const { return entries[static_cast<std::size_t>(n) * cutoff + m]; }
  std::complex<R>& operator()(int n, int m) { return entries[static_cast<std::size_t>(n) * cutoff + m]; }
  bool trusted(int n, int m) const { return n + m <= valid_total_degree; }

  Eigen::MatrixXcd to_matrix() const {
    Eigen::MatrixXcd out(cutoff, cutoff);
    for (int n = 0; n < cutoff; ++n)
      for (int m = 0; m < cutoff; ++m) {
        const auto v = (*this)(n, m);
        out(n, m) = Complex(double(v.real()), double(v.imag()));
      }
    return out;
  }
};

template <class R>
TruncatedSeries1<R> composed_series(const DiskMap& phi, const DiskMap& psi, int L);

template <class R>
TruncatedSeries2<R> cocycle_F_from_series(const TruncatedSeries1<R>& phi, int N);
template <class R>
TruncatedSeries2<R> cocycle_F(const DiskMap& phi, int N);

template <class R>
TruncatedSeries2<R> cocycle_G_from_series(const TruncatedSeries1<R>& phi, const TruncatedSeries1<R>& psi, int N);
template <class R>
TruncatedSeries2<R> cocycle_G_affine(const Affine& phi, const Affine& psi, int N);
template <class R>
TruncatedSeries2<R> cocycle_G(const DiskMap& phi, const DiskMap& psi, int N);

template <class R>
GrunskyMatrix<R> grunsky(const TruncatedSeries2<R>& p, KernelSource source);

template <class R>
R hs_norm_sq(const GrunskyMatrix<R>& g, int degree_bound);

template <class R>
std::vector<R> hs_partial_profile(const GrunskyMatrix<R>& g);

enum class HsVerdict { converged, diverging, inconclusive };
const char* to_string(HsVerdict v);

struct ProfileDiagnosis {
  HsVerdict verdict = HsVerdict::inconclusive;
  double ratio = 0.0;          // late geometric decay rate of anti-diagonal mass
  double tail_estimate = 0.0;  // geometric extrapolation of the missing mass
};

ProfileDiagnosis classify_profile(const std::vector<double>& partial_sums);

struct IdentityCheck {
  double max_abs_err = 0.0;
  double scale = 0.0;  // largest trusted entry of the left-hand side
  int valid_total_degree = -1;
};

template <class R>
IdentityCheck verify_F_cocycle(const DiskMap& f1, const DiskMap& f2, int N);

struct GCocycleReport {
  IdentityCheck outer;  // G_{f g1, f g2} = F_f(g1, g2) g1' g2' + G_{g1, g2}
  IdentityCheck inner;  // G_{g1 f1, g2 f2} = G_{g1, g2}(f1, f2) f1' f2'
};

template <class R>
GCocycleReport verify_G_cocycles(const DiskMap& f, const DiskMap& g1, const DiskMap& g2, const DiskMap& f1,
                                 const DiskMap& f2, int N);

// ---- template implementation ----

template <class R>
TruncatedSeries1<R> composed_series(const DiskMap& phi, const DiskMap& psi, int L) {
  using C = std::complex<R>;
  const auto inner = dm_to_series<R>(psi, L);
  if (phi.is_affine()) {
    const auto& b = phi.as_affine();
    auto out = C(R(b.r)) * inner;
    out[0] += C(R(b.a.real()), R(b.a.imag()));
    return out;
  }
  if (phi.is_mobius()) {
    const auto& m = phi.as_mobius();
    const C alpha(R(m.alpha.real()), R(m.alpha.imag()));
    auto num = inner;
    num[0] -= alpha;
    auto den = -std::conj(alpha) * inner;
    den[0] += C(1);
    return std::polar(R(1), R(m.theta)) * s_mul(num, s_reciprocal(den));
  }
  return s_compose(dm_to_series<R>(phi, L), inner);
}

template <class R>
TruncatedSeries2<R> cocycle_F_from_series(const TruncatedSeries1<R>& phi, int N) {
  if (N < 2) throw UsageError("cocycle_F needs cutoff >= 2");
  // Work on a (2N-1)-grid so that two divisions by (z-w) still leave the
  // full 2N-4 triangle of the N-grid trusted.
  const int G = 2 * N - 1, L = 2 * N;
  if (phi.cutoff() < L + 1) throw UsageError("cocycle_F: series too short for the requested cutoff");
  const auto s = phi.resized(L + 1);
  const auto q = divided_difference(s.resized(L), G);
  const auto dphi = s.derivative().resized(G);
  auto A = s2_mul_z(dphi, s2_mul_w(dphi, s2_reciprocal(s2_mul(q, q))));
  const R scale = A.max_abs();
  A(0, 0) -= std::complex<R>(1);
  TruncatedSeries2<R> F;
  try {
    F = divide_by_diag(divide_by_diag(A, R(1e-9), scale), R(1e-9), scale);
  } catch (const NotDivisibleError& e) {
    throw NotDivisibleError(std::string("F does not extend across the diagonal: ") + e.what());
  }
  auto out = F.cropped(N, 2 * N - 4);
  // The construction is symmetric in (z,w); make it exactly so.
  for (int n = 0; n < N; ++n)
    for (int m = n + 1; m < N; ++m) {
      const auto v = (out(n, m) + out(m, n)) / R(2);
      out(n, m) = v;
      out(m, n) = v;
    }
  return out;
}

template <class R>
TruncatedSeries2<R> cocycle_F(const DiskMap& phi, int N) {
  return cocycle_F_from_series(dm_to_series<R>(phi, 2 * N + 1), N);
}

template <class R>
TruncatedSeries2<R> cocycle_G_from_series(const TruncatedSeries1<R>& phi, const TruncatedSeries1<R>& psi, int N) {
  if (phi.cutoff() < N + 1 || psi.cutoff() < N + 1) throw UsageError("cocycle_G: series too short");
  const auto a = phi.resized(N + 1), b = psi.resized(N + 1);
  const auto D = TruncatedSeries2<R>::from_z(a.resized(N)) - TruncatedSeries2<R>::from_w(b.resized(N));
  if (D(0, 0) == std::complex<R>(0)) throw ConfigurationError("cocycle_G: phi(0) = psi(0)");
  const auto inv = s2_reciprocal(s2_mul(D, D));
  return s2_mul_z(a.derivative().resized(N), s2_mul_w(b.derivative().resized(N), inv));
}

template <class R>
TruncatedSeries2<R> cocycle_G_affine(const Affine& phi, const Affine& psi, int N) {
  using C = std::complex<R>;
  const C delta = C(R(phi.a.real()), R(phi.a.imag())) - C(R(psi.a.real()), R(psi.a.imag()));
  if (delta == C(0)) throw ConfigurationError("cocycle_G: coincident centres");
  const R r = R(phi.r), s = R(psi.r);
  const C u = -r / delta, v = s / delta, lead = r * s / (delta * delta);
  TruncatedSeries2<R> g(N);
  // t(n,m) = binom(n+m, n) u^n v^m
  C un(1);
  for (int n = 0; n < N; ++n) {
    C t = un;
    for (int m = 0; m < N; ++m) {
      if (m > 0) t *= v * R(n + m) / R(m);
      g(n, m) = lead * R(n + m + 1) * t;
    }
    un *= u;
  }
  return g;
}

template <class R>
TruncatedSeries2<R> cocycle_G(const DiskMap& phi, const DiskMap& psi, int N) {
  if (dm_disjoint(phi, psi, false).verdict == Disjointness::overlapping)
    throw ConfigurationError("cocycle_G: images overlap");
  if (phi.is_affine() && psi.is_affine()) return cocycle_G_affine<R>(phi.as_affine(), psi.as_affine(), N);
  return cocycle_G_from_series(dm_to_series<R>(phi, N + 1), dm_to_series<R>(psi, N + 1), N);
}

template <class R>
GrunskyMatrix<R> grunsky(const TruncatedSeries2<R>& p, KernelSource source) {
  GrunskyMatrix<R> g;
  g.cutoff = p.cutoff();
  g.valid_total_degree = p.valid_total_degree();
  g.source = source;
  g.entries.assign(static_cast<std::size_t>(g.cutoff) * g.cutoff, std::complex<R>(0));
  for (int n = 0; n < g.cutoff; ++n)
    for (int m = 0; m < g.cutoff; ++m)
      if (p.trusted(n, m)) g(n, m) = p(n, m) / std::sqrt(R(n + 1) * R(m + 1));
  return g;
}

template <class R>
R hs_norm_sq(const GrunskyMatrix<R>& g, int degree_bound) {
  if (degree_bound > g.valid_total_degree)
    throw UsageError("hs_norm_sq: degree bound " + std::to_string(degree_bound) + " exceeds trusted degree " +
                     std::to_string(g.valid_total_degree));
  R s(0);
  for (int n = 0; n < g.cutoff; ++n)
    for (int m = 0; m < g.cutoff && n + m <= degree_bound; ++m) s += std::norm(g(n, m));
  return s;
}

template <class R>
std::vector<R> hs_partial_profile(const GrunskyMatrix<R>& g) {
  // Anti-diagonals past cutoff-1 are only partly stored and would look like decay.
  const int K = std::min(g.valid_total_degree, g.cutoff - 1);
  std::vector<R> diag(std::max(K + 1, 0), R(0));
  for (int n = 0; n <= K; ++n)
    for (int m = 0; n + m <= K; ++m) diag[n + m] += std::norm(g(n, m));
  R acc(0);
  for (auto& x : diag) x = (acc += x);
  return diag;
}

namespace detail {

template <class R>
IdentityCheck compare(const TruncatedSeries2<R>& lhs, const TruncatedSeries2<R>& rhs) {
  IdentityCheck c;
  c.valid_total_degree = std::min(lhs.valid_total_degree(), rhs.valid_total_degree());
  for (int n = 0; n < lhs.cutoff(); ++n)
    for (int m = 0; m < lhs.cutoff() && n + m <= c.valid_total_degree; ++m) {
      c.max_abs_err = std::max(c.max_abs_err, double(std::abs(lhs(n, m) - rhs(n, m))));
      c.scale = std::max(c.scale, double(std::abs(lhs(n, m))));
    }
  return c;
}

}  // namespace detail

template <class R>
IdentityCheck verify_F_cocycle(const DiskMap& f1, const DiskMap& f2, int N) {
  const int L = 2 * N + 1;
  const auto lhs = cocycle_F_from_series(composed_series<R>(f1, f2, L), N);
  const auto s2 = dm_to_series<R>(f2, N + 1);
  const auto d2 = s2.derivative().resized(N);
  auto rhs = s2_mul_z(d2, s2_mul_w(d2, s2_substitute(cocycle_F<R>(f1, N), s2.resized(N), s2.resized(N))));
  rhs += cocycle_F<R>(f2, N);
  return detail::compare(lhs, rhs);
}

template <class R>
GCocycleReport verify_G_cocycles(const DiskMap& f, const DiskMap& g1, const DiskMap& g2, const DiskMap& f1,
                                 const DiskMap& f2, int N) {
  if (dm_disjoint(g1, g2, false).verdict == Disjointness::overlapping)
    throw ConfigurationError("verify_G_cocycles: g1 and g2 overlap");
  if (dm_disjoint(dm_compose(g1, f1), dm_compose(g2, f2), false).verdict == Disjointness::overlapping)
    throw ConfigurationError("verify_G_cocycles: g1 f1 and g2 f2 overlap");
  GCocycleReport rep;
  const auto G12 = cocycle_G<R>(g1, g2, N);
  {
    const auto lhs =
        cocycle_G_from_series(composed_series<R>(f, g1, N + 1), composed_series<R>(f, g2, N + 1), N);
    const auto a = dm_to_series<R>(g1, N + 1), b = dm_to_series<R>(g2, N + 1);
    auto rhs = s2_mul_z(a.derivative().resized(N),
                        s2_mul_w(b.derivative().resized(N), s2_substitute(cocycle_F<R>(f, N), a.resized(N), b.resized(N))));
    rhs += G12;
    rep.outer = detail::compare(lhs, rhs);
  }
  {
    const auto lhs =
        cocycle_G_from_series(composed_series<R>(g1, f1, N + 1), composed_series<R>(g2, f2, N + 1), N);
    const auto a = dm_to_series<R>(f1, N + 1), b = dm_to_series<R>(f2, N + 1);
    const auto rhs = s2_mul_z(a.derivative().resized(N),
                              s2_mul_w(b.derivative().resized(N), s2_substitute(G12, a.resized(N), b.resized(N))));
    rep.inner = detail::compare(lhs, rhs);
  }
  return rep;
}

}  // namespace ce2
