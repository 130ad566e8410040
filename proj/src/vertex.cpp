#include "ce2/vertex.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <functional>

namespace ce2 {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// A product term sqrt(k!) S(K_{i_1} x ... x h_{j_1} x ...) with its coefficient.
struct ExpansionTerm {
  std::vector<int> kernel_orders;  // sorted
  std::vector<int> h_indices;      // sorted
  bool operator<(const ExpansionTerm& o) const {
    return std::tie(kernel_orders, h_indices) < std::tie(o.kernel_orders, o.h_indices);
  }
};

// Sum over subsets S of v's parts and injections of S into w's parts.
void expand_pair(const PartitionState& a, const PartitionState& b, Complex zeta, Complex scale,
                 std::map<ExpansionTerm, Complex>& out) {
  std::vector<int> is, js;
  for (int k : a.depths()) is.push_back(k - 1);
  for (int k : b.depths()) js.push_back(k - 1);
  std::vector<bool> used(js.size(), false);
  std::vector<int> kernels;
  std::function<void(std::size_t, Complex)> rec = [&](std::size_t p, Complex coef) {
    if (p == is.size()) {
      ExpansionTerm t;
      t.kernel_orders = kernels;
      std::sort(t.kernel_orders.begin(), t.kernel_orders.end());
      for (std::size_t q = 0; q < js.size(); ++q)
        if (!used[q]) t.h_indices.push_back(js[q]);
      out[t] += coef;
      return;
    }
    kernels.push_back(is[p]);
    rec(p + 1, coef);
    kernels.pop_back();
    for (std::size_t q = 0; q < js.size(); ++q) {
      if (used[q]) continue;
      used[q] = true;
      rec(p + 1, coef * contraction_coefficient(is[p], js[q], zeta));
      used[q] = false;
    }
  };
  rec(0, scale);
}

// Factors as vectors on N truncated modes plus a few extra orthonormal
// directions spanning the tails of the kernel factors.
struct FactorBasis {
  int N = 0;
  int extra = 0;
  std::vector<Eigen::VectorXcd> kernels;  // length N + extra, index = order

  FactorBasis(Complex zeta, int max_order, int N_) : N(N_), extra(max_order + 1) {
    if (N + extra > kMaxModes) throw CutoffError("vertex_side: mode cutoff too large");
    const double az = std::abs(zeta);
    const int pad = static_cast<int>(std::min(20000.0, std::ceil(90.0 / -std::log10(std::max(az, 1e-3))) + 40));
    const int big = N + pad;
    Eigen::MatrixXcd tails(pad, extra);
    std::vector<Eigen::VectorXcd> full;
    for (int i = 0; i <= max_order; ++i) {
      full.push_back(kernel_derivative(zeta, i, big) / factorial(i));
      tails.col(i) = full.back().tail(pad);
    }
    const Eigen::MatrixXcd B = tails.adjoint() * tails;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(B);
    const Eigen::VectorXd d = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXcd& V = es.eigenvectors();
    for (int i = 0; i <= max_order; ++i) {
      Eigen::VectorXcd f(N + extra);
      f.head(N) = full[i].head(N);
      for (int l = 0; l < extra; ++l) f(N + l) = std::conj(V(i, l)) * d(l);
      kernels.push_back(std::move(f));
    }
  }
};

FockVector::Table product_polynomial(const ExpansionTerm& t, const FactorBasis& fb) {
  FockVector::Table poly;
  OccupationIndex base;
  Complex c0 = 1.0;
  for (int j : t.h_indices) {
    if (j >= fb.N) throw CutoffError("vertex_side: w has a depth beyond the mode cutoff");
    base = base.with(j);
    c0 *= std::sqrt(double(j + 1));
  }
  poly[base] = c0;
  for (int i : t.kernel_orders) {
    const auto& f = fb.kernels[i];
    FockVector::Table next;
    for (const auto& [idx, c] : poly)
      for (int n = 0; n < f.size(); ++n)
        if (f(n) != Complex(0.0)) next[idx.with(n)] += c * f(n);
    poly = std::move(next);
  }
  return poly;
}

}  // namespace

FockVector psi(const HeisenbergVector& v, int N) {
  FockVector out(N, kMaxParticles);
  for (const auto& [s, a] : v.table()) {
    std::vector<int> modes;
    double prod_k = 1.0;
    for (int k : s.depths()) {
      if (k > N) throw CutoffError("psi: depth " + std::to_string(k) + " exceeds mode cutoff");
      modes.push_back(k - 1);
      prod_k *= k;
    }
    const auto idx = OccupationIndex::from_modes(modes);
    out.add(idx, a * std::sqrt(idx.occupation_factorial() * prod_k));
  }
  return out;
}

Complex contraction_coefficient(int i, int j, Complex zeta) {
  if (zeta == Complex(0.0)) throw DomainError("contraction coefficient is singular at zeta = 0");
  const double comb = factorial(i + j + 1) / (factorial(i) * factorial(j));
  return (i % 2 ? -1.0 : 1.0) * comb * std::pow(zeta, -(i + j + 2));
}

VertexImage vertex_side_with_tail(const HeisenbergVector& v, const HeisenbergVector& w, Complex zeta, double r,
                                  double s, int N) {
  if (zeta == Complex(0.0)) throw DomainError("vertex_side needs zeta != 0");
  if (!(std::abs(zeta) < 1.0)) throw DomainError("vertex_side needs |zeta| < 1");
  std::map<ExpansionTerm, Complex> terms;
  int max_order = 0;
  for (const auto& [a, x] : v.table()) {
    max_order = std::max(max_order, a.max_depth() - 1);
    for (const auto& [b, y] : w.table())
      expand_pair(a, b, zeta, x * y * std::pow(r, a.weight()) * std::pow(s, b.weight()), terms);
  }
  const FactorBasis fb(zeta, max_order, N);

  FockVector::Table acc;
  for (const auto& [t, coef] : terms) {
    if (coef == Complex(0.0)) continue;
    for (const auto& [idx, c] : product_polynomial(t, fb))
      acc[idx] += coef * c * std::sqrt(idx.occupation_factorial());
  }
  VertexImage img{FockVector(N, kMaxParticles), 0.0};
  double tail2 = 0.0;
  for (const auto& [idx, a] : acc) {
    if (idx.max_mode() >= N)
      tail2 += std::norm(a);
    else
      img.coords.add(idx, a);
  }
  img.tail = std::sqrt(tail2);
  return img;
}

FockVector vertex_side(const HeisenbergVector& v, const HeisenbergVector& w, Complex zeta, double r, double s,
                       int N) {
  return vertex_side_with_tail(v, w, zeta, r, s, N).coords;
}

CorrespondenceResult correspondence(const HeisenbergVector& v, const HeisenbergVector& w, Complex zeta, double r,
                                    double s, int N) {
  const auto config = Configuration::make({DiskMap::affine(zeta, r), DiskMap::affine(0.0, s)});
  RhoOptions opt;
  opt.modes = N;
  opt.particles = kMaxParticles;
  CorrespondenceResult res;
  res.operadic = rho_n_normalized(config, {psi(v, N), psi(w, N)}, opt);
  auto img = vertex_side_with_tail(v, w, zeta, r, s, N);
  res.vertex = std::move(img.coords);
  res.tail = img.tail;
  res.coord_distance = distance(res.operadic, res.vertex);
  res.discrepancy = std::hypot(res.coord_distance, res.tail);
  res.dropped = res.operadic.dropped();
  return res;
}

ConvergenceProfile norm_convergence_profile(const HeisenbergVector& v, const HeisenbergVector& w, Complex zeta,
                                            int terms) {
  if (!(std::abs(zeta) > 0.0 && std::abs(zeta) < 1.0)) throw DomainError("profile needs 0 < |zeta| < 1");
  if (v.table().size() != 1 || v.table().begin()->first.particles() != 1)
    throw NotImplementedError("convergence profile supports v = c h(-k)1 only");
  const int k = v.table().begin()->first.max_depth();
  const Complex a = v.table().begin()->second;
  const int l = k - 1;

  // Room for every creation below.
  int pmax = 0, wmax = 0;
  for (const auto& [st, x] : w.table()) {
    pmax = std::max(pmax, st.particles());
    wmax = std::max(wmax, st.weight());
  }
  HeisenbergVector ww(pmax + 1, wmax + terms + k + 2);
  for (const auto& [st, x] : w.table()) ww.add(st, x);

  const int d = ww.max_depth();
  const int m_top = d > 0 ? l + d : l - 1;
  const double az2 = std::norm(zeta);
  ConvergenceProfile prof;
  double S = 0.0;
  for (int j = 0; j < terms; ++j) {
    const int m = m_top - j;
    const int n = m - l;
    // Y(h(-k)1, z) = (1/l!) d^l h(z), so v(m) = (a/l!) prod_{t=1}^{l} (-n-t) h(n)
    double c = 1.0 / factorial(l);
    for (int t = 1; t <= l; ++t) c *= double(-n - t);
    const auto vm = (a * c) * mode_h(n, ww);
    const double term = inner_M(vm, vm).real() * std::pow(az2, -m - 1);
    prof.modes.push_back(m);
    prof.terms.push_back(term);
    const double prev = S;
    S += term;
    if (S < prev) prof.monotone = false;
    prof.partial_sums.push_back(S);
  }
  for (int j = static_cast<int>(prof.terms.size()) - 1; j >= 1; --j)
    if (prof.terms[j] > 0.0 && prof.terms[j - 1] > 0.0) {
      prof.ratio = prof.terms[j] / prof.terms[j - 1];
      break;
    }
  return prof;
}

}  // namespace ce2
