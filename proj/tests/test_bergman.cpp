#include <doctest.h>

#include <random>

#include "ce2/bergman.hpp"
#include "oracles.hpp"

using namespace ce2;

namespace {

DiskMap poly(double a1, Complex a2) {
  TruncatedSeries1<double> s(3);
  s[1] = a1;
  s[2] = a2;
  return DiskMap::series(s);
}

DiskMap quad_unchecked(Complex c) {
  TruncatedSeries1<double> s(3);
  s[1] = 1.0;
  s[2] = c;
  return DiskMap::series_unchecked(s);
}

double max_abs(const Eigen::MatrixXcd& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

TEST_SUITE("bergman") {
  TEST_CASE("kernels") {
    const auto e0 = kernel_vector(0.0, 6);
    CHECK(e0(0) == Complex(1.0));
    CHECK(e0.tail(5).norm() == 0.0);

    const Complex a(0.3, 0.2), b(-0.1, 0.4);
    const int N = 80;
    const Complex ip = bergman_inner(kernel_vector(a, N), kernel_vector(b, N));
    const Complex want = 1.0 / std::pow(1.0 - std::conj(a) * b, 2);
    CHECK(std::abs(ip - want) < 1e-12);

    // (E_a, z^2) = conj(a)^2
    const auto z2 = from_monomials({0.0, 0.0, 1.0}, 8);
    CHECK(std::abs(bergman_inner(kernel_vector(0.5, 8), z2) - 0.25) < 1e-15);

    CHECK_THROWS_AS(kernel_vector(1.0, 4), DomainError);
  }

  TEST_CASE("kernel derivatives") {
    const Complex a(0.2, -0.3);
    CHECK((kernel_derivative(a, 0, 10) - kernel_vector(a, 10)).norm() == 0.0);

    const auto d1 = kernel_derivative(0.0, 1, 5);
    CHECK(std::abs(d1(1) - 2.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(d1(0)) + std::abs(d1(2)) == 0.0);

    const auto z3 = from_monomials({0.0, 0.0, 0.0, 1.0}, 8);
    CHECK(std::abs(bergman_inner(kernel_derivative(0.4, 2, 8), z3) - 2.4) < 1e-14);
  }

  TEST_CASE("reproducing property") {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> G;
    BergmanVector v(12);
    for (int n = 0; n < 12; ++n) v(n) = {G(rng), G(rng)};
    for (const Complex a : {Complex(0.3, 0.1), Complex(-0.5, 0.2), Complex(0.0, 0.7)}) {
      const int N = 120;
      BergmanVector w = BergmanVector::Zero(N);
      w.head(12) = v;
      CHECK(std::abs(bergman_inner(kernel_vector(a, N), w) - bergman_eval(v, std::conj(a))) < 1e-12);
    }
  }

  TEST_CASE("action matrices") {
    const int N = 10;
    CHECK(max_abs(t_matrix(DiskMap::identity(), N).entries - Eigen::MatrixXcd::Identity(N, N)) < 1e-15);
    const auto T = t_matrix(DiskMap::affine(0.0, 0.6), N).entries;
    const auto R = rho_cl_matrix(DiskMap::affine(0.0, 0.6), N).entries;
    for (int n = 0; n < N; ++n) {
      CHECK(std::abs(T(n, n) - std::pow(0.6, n + 1)) < 1e-15);
      CHECK(std::abs(R(n, n) - std::pow(0.6, n + 1)) < 1e-15);
    }
    CHECK(max_abs(T - Eigen::MatrixXcd(T.diagonal().asDiagonal())) == 0.0);
  }

  TEST_CASE("T is a contraction") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
      const DiskMap phi = k % 2 ? DiskMap::mobius(6.0 * U(rng), std::polar(0.8 * U(rng), 6.0 * U(rng)))
                                : DiskMap::affine(std::polar(0.4 * U(rng), 6.0 * U(rng)), 0.1 + 0.5 * U(rng));
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(t_matrix(phi, 24).entries);
      CHECK(svd.singularValues()(0) <= 1.0 + 1e-9);
    }
  }

  TEST_CASE("T against quadrature") {
    const auto phi = poly(0.6, {0.1, 0.15});
    const int N = 6;
    const auto T = t_matrix(phi, N).entries;
    const oracle::DiskRule q;
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < N; ++m) {
        auto en = [n](Complex z) { return oracle::on_basis(n, z); };
        auto Te = [&](Complex z) { return dm_derivative(phi, z) * oracle::on_basis(m, dm_eval(phi, z)); };
        CHECK(std::abs(T(n, m) - oracle::bergman_inner(en, Te, q)) < 1e-12);
      }
  }

  TEST_CASE("rho_cl on kernels") {
    const int N = 60;
    const Complex a(0.4, 0.1);
    const double r = 0.3;
    const auto v = rho_cl_matrix(DiskMap::affine(a, r), N).entries.col(0);
    for (int k = 0; k < N; ++k) CHECK(std::abs(v(k) - r * std::sqrt(k + 1.0) * std::pow(a, k)) < 1e-15);

    const auto m = DiskMap::mobius(0.7, {0.2, -0.3});
    const Complex p = 0.2;
    const BergmanVector lhs = rho_cl_matrix(m, 200).entries * kernel_vector(p, 200);
    const BergmanVector rhs = dm_derivative(m, p) * kernel_vector(dm_eval(m, p), 200);
    CHECK((lhs - rhs).head(40).norm() < 1e-10);
  }

  TEST_CASE("Mobius maps preserve the kernel Gram matrix") {
    const auto m = DiskMap::mobius(-0.4, {0.1, 0.35});
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 25; ++k) {
      const Complex z = std::polar(0.9 * U(rng), 6.3 * U(rng)), w = std::polar(0.9 * U(rng), 6.3 * U(rng));
      const Complex lhs = dm_derivative(m, z) * std::conj(dm_derivative(m, w)) /
                          std::pow(1.0 - dm_eval(m, z) * std::conj(dm_eval(m, w)), 2);
      CHECK(std::abs(lhs - 1.0 / std::pow(1.0 - z * std::conj(w), 2)) < 1e-12);
    }
    const int N = 300;
    const auto R = rho_cl_matrix(m, N).entries;
    std::vector<BergmanVector> ks;
    for (int k = 0; k < 6; ++k) ks.push_back(kernel_vector(std::polar(0.3, 1.1 * k), N));
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) {
        const Complex before = bergman_inner(ks[i], ks[j]);
        const BergmanVector u = R * ks[i], v = R * ks[j];
        CHECK(std::abs(bergman_inner(u.head(150), v.head(150)) - before) < 1e-10);
      }
  }

  TEST_CASE("contraction functional") {
    CHECK(max_abs(contraction_functional(DiskMap::mobius(0.3, {0.4, 0.1}), 16)) < 1e-10);

    const Complex c(0.1, 0.05);
    const int N = 40;
    const auto cf = contraction_functional(quad_unchecked(c), N);
    CHECK(max_abs(cf - cf.transpose()) == 0.0);
    const Complex a = 0.2, b = -0.1;
    const Complex val = kernel_vector(a, N).transpose() * cf * kernel_vector(b, N);
    CHECK(std::abs(val - oracle::quadratic_F(c, a, b)) < 1e-8);
  }

  TEST_CASE("contraction functional against polar quadrature") {
    const int N = 6;
    {
      const Complex c(0.0, 0.2);
      const auto want = oracle::contraction_by_quadrature([c](Complex z, Complex w) { return oracle::quadratic_F(c, z, w); }, N);
      CHECK(max_abs(contraction_functional(quad_unchecked(c), N) - want) < 1e-10);
    }
    {
      const auto phi = poly(0.6, {0.15, 0.2});
      auto f = [&](Complex z) { return dm_eval(phi, z); };
      auto df = [&](Complex z) { return dm_derivative(phi, z); };
      const auto want =
          oracle::contraction_by_quadrature([&](Complex z, Complex w) { return oracle::direct_F(f, df, z, w); }, N);
      CHECK(max_abs(contraction_functional(phi, N) - want) < 1e-8);
    }
  }

  TEST_CASE("pair functional") {
    const auto p = pair_functional(DiskMap::affine(0.5, 0.2), DiskMap::affine(-0.3, 0.2), 6);
    CHECK(p(0, 0).real() == doctest::Approx(0.0625).epsilon(1e-14));

    // on h_n = sqrt(n+1) e_n the closed form with zeta = a - b
    const Complex zeta(0.5, 0.1);
    const double r = 0.2, s = 0.3;
    const int N = 8;
    const auto C = pair_functional(DiskMap::affine(zeta, r), DiskMap::affine(0.0, s), N);
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < N; ++m) {
        const Complex hat = C(n, m) * std::sqrt((n + 1.0) * (m + 1.0));
        const Complex want = (n % 2 ? -1.0 : 1.0) * std::pow(r, n + 1) * std::pow(s, m + 1) * oracle::factorial(n + m + 1) /
                             (oracle::factorial(n) * oracle::factorial(m)) * std::pow(zeta, -(n + m + 2));
        CHECK(std::abs(hat - want) < 1e-12 * std::max(1.0, std::abs(want)));
      }

    const auto f = DiskMap::affine({0.3, 0.2}, 0.25), g = DiskMap::affine(-0.4, 0.3);
    CHECK(max_abs(pair_functional(f, g, 10) - pair_functional(g, f, 10).transpose()) < 1e-15);
  }
}
