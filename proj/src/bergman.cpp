#include "ce2/bergman.hpp"

#include <cmath>

namespace ce2 {

BergmanVector kernel_vector(Complex a, int N) { return kernel_derivative(a, 0, N); }

BergmanVector kernel_derivative(Complex a, int n, int N) {
  if (!(std::abs(a) < 1.0)) throw DomainError("kernel needs |a| < 1");
  if (n < 0) throw UsageError("kernel_derivative: negative order");
  BergmanVector v = BergmanVector::Zero(N);
  // coefficient of z^j is (j+1)!/(j-n)! a^{j-n}
  Complex apow = 1.0;
  for (int j = n; j < N; ++j) {
    double falling = 1.0;
    for (int t = j - n + 1; t <= j + 1; ++t) falling *= t;
    v(j) = falling * apow / std::sqrt(double(j + 1));
    apow *= a;
  }
  return v;
}

BergmanVector h_vector(int j, int N) {
  if (j >= N) throw CutoffError("h_vector: index beyond cutoff");
  BergmanVector v = BergmanVector::Zero(N);
  v(j) = std::sqrt(double(j + 1));
  return v;
}

BergmanVector from_monomials(const std::vector<Complex>& c, int N) {
  BergmanVector v = BergmanVector::Zero(N);
  for (int n = 0; n < N && n < static_cast<int>(c.size()); ++n) v(n) = c[n] / std::sqrt(double(n + 1));
  return v;
}

Complex bergman_inner(const BergmanVector& u, const BergmanVector& v) { return u.dot(v); }

Complex bergman_eval(const BergmanVector& v, Complex z) {
  Complex acc = 0.0;
  for (int n = static_cast<int>(v.size()) - 1; n >= 0; --n) acc = acc * z + v(n) * std::sqrt(double(n + 1));
  return acc;
}

ActionMatrix t_matrix(const DiskMap& phi, int N) {
  const auto s = dm_to_series<double>(phi, N + 1);
  const auto f = s.resized(N);
  const auto df = s.derivative().resized(N);
  ActionMatrix T;
  T.kind = ActionKind::T;
  T.entries = Eigen::MatrixXcd::Zero(N, N);
  auto col = df;  // phi' phi^m
  for (int m = 0; m < N; ++m) {
    if (m > 0) col = s_mul(col, f);
    const double k = std::sqrt(double(m + 1));
    for (int n = 0; n < N; ++n) T.entries(n, m) = col[n] * k / std::sqrt(double(n + 1));
  }
  return T;
}

ActionMatrix rho_cl_matrix(const DiskMap& phi, int N) {
  ActionMatrix M;
  M.kind = ActionKind::rho_cl;
  M.entries = t_matrix(dm_conjugate(phi), N).entries.adjoint();
  return M;
}

Eigen::MatrixXcd contraction_functional(const DiskMap& phi, int N) {
  // One extra row and column so the N x N block sits inside the trusted triangle.
  const auto g = grunsky(cocycle_F<double>(phi, N + 1), KernelSource::F);
  return g.to_matrix().topLeftCorner(N, N);
}

Eigen::MatrixXcd pair_functional(const DiskMap& phi, const DiskMap& psi, int N) {
  return grunsky(cocycle_G<double>(phi, psi, N), KernelSource::G).to_matrix();
}

}  // namespace ce2
