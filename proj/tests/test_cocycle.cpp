#include <doctest.h>

#include <random>

#include "ce2/cocycle.hpp"
#include "oracles.hpp"

using namespace ce2;

namespace {

DiskMap quad_unchecked(Complex c) {
  TruncatedSeries1<double> s(3);
  s[1] = 1.0;
  s[2] = c;
  return DiskMap::series_unchecked(s);
}

DiskMap poly(double a1, Complex a2) {
  TruncatedSeries1<double> s(3);
  s[1] = a1;
  s[2] = a2;
  return DiskMap::series(s);
}

template <class R>
double trusted_max(const TruncatedSeries2<R>& p) {
  double e = 0.0;
  for (int n = 0; n < p.cutoff(); ++n)
    for (int m = 0; m < p.cutoff() && n + m <= p.valid_total_degree(); ++m) e = std::max(e, double(std::abs(p(n, m))));
  return e;
}

std::vector<double> profile_of(const TruncatedSeries2<double>& p, KernelSource src) {
  return hs_partial_profile(grunsky(p, src));
}

}  // namespace

TEST_SUITE("cocycle") {
  TEST_CASE("linear fractional maps have zero F") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int k = 0; k < 10; ++k) {
      const auto m = DiskMap::mobius(2 * M_PI * U(rng), std::polar(0.9 * U(rng), 2 * M_PI * U(rng)));
      CHECK(trusted_max(cocycle_F<double>(m, 24)) < 1e-10);
    }
    CHECK(trusted_max(cocycle_F<double>(DiskMap::affine({0.1, 0.2}, 0.5), 24)) == 0.0);
  }

  TEST_CASE("quadratic closed form") {
    for (const Complex c : {Complex(0.1), Complex(0.0, 0.2), Complex(-0.3, 0.1)}) {
      const auto F = cocycle_F<double>(quad_unchecked(c), 24);
      CHECK(F.valid_total_degree() == 44);
      double e = 0.0;
      for (int n = 0; n < 24; ++n)
        for (int m = 0; m < 24 && n + m <= F.valid_total_degree(); ++m)
          e = std::max(e, std::abs(F(n, m) - oracle::quadratic_d(c, n, m)));
      CHECK(e < 1e-10);
    }
  }

  TEST_CASE("F is symmetric") {
    const auto F = cocycle_F<double>(poly(0.6, {0.1, 0.15}), 20);
    for (int n = 0; n < 20; ++n)
      for (int m = 0; m < 20; ++m) CHECK(F(n, m) == F(m, n));
  }

  TEST_CASE("diagonal sums give the Schwarzian over six") {
    const Complex c(0.15, -0.1);
    const auto F = cocycle_F<double>(quad_unchecked(c), 20);
    const auto want = oracle::quadratic_schwarzian_over_6(c, 19);
    for (int k = 0; k < 19; ++k) {
      Complex s = 0.0;
      for (int n = 0; n <= k; ++n) s += F(n, k - n);
      CHECK(std::abs(s - want[k]) < 1e-8);
    }
  }

  TEST_CASE("G for affine pairs") {
    const auto G = cocycle_G<double>(DiskMap::affine(0.5, 0.2), DiskMap::affine(-0.3, 0.2), 8);
    CHECK(G(0, 0).real() == doctest::Approx(0.0625).epsilon(1e-14));
    const Complex a(0.2, 0.3), b(-0.4, -0.1);
    const auto Gc = cocycle_G<double>(DiskMap::affine(a, 0.3), DiskMap::affine(b, 0.25), 10);
    for (int n = 0; n < 10; ++n)
      for (int m = 0; m < 10; ++m) CHECK(std::abs(Gc(n, m) - oracle::affine_g(a, 0.3, b, 0.25, n, m)) < 1e-12);

    CHECK_THROWS_AS(cocycle_G<double>(DiskMap::affine(0.1, 0.3), DiskMap::affine(0.0, 0.3), 8), ConfigurationError);
  }

  TEST_CASE("G: series path against closed form") {
    const Affine a{0.5, 0.2}, b{-0.3, 0.2};
    const int N = 24;
    const auto closed = cocycle_G_affine<double>(a, b, N);
    const auto series = cocycle_G_from_series(dm_to_series<double>(DiskMap::affine(a.a, a.r), N + 1),
                                              dm_to_series<double>(DiskMap::affine(b.a, b.r), N + 1), N);
    double e = 0.0;
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < N && n + m <= series.valid_total_degree(); ++m) e = std::max(e, std::abs(closed(n, m) - series(n, m)));
    CHECK(e < 1e-10);
  }

  TEST_CASE("grunsky scaling") {
    TruncatedSeries2<double> p(4);
    CHECK(trusted_max(TruncatedSeries2<double>(4)) == 0.0);
    p(0, 0) = 1.0;
    p(1, 2) = 6.0;
    const auto g = grunsky(p, KernelSource::F);
    CHECK(g(0, 0) == Complex(1.0));
    CHECK(std::abs(g(1, 2) - 6.0 / std::sqrt(6.0)) < 1e-15);
    CHECK(hs_norm_sq(g, 3) == doctest::Approx(1.0 + 6.0));
    CHECK_THROWS_AS(hs_norm_sq(g, 7), UsageError);
  }

  TEST_CASE("hs norm of the quadratic family") {
    const Complex c(0.1);
    const int N = 24;
    const auto g = grunsky(cocycle_F<double>(quad_unchecked(c), N), KernelSource::F);
    double want = 0.0, prev = -1.0;
    for (int K = 0; K <= 30; ++K) {
      const double v = hs_norm_sq(g, K);
      CHECK(v >= prev);
      prev = v;
    }
    for (int n = 0; n < N; ++n)
      for (int m = 0; m < N && n + m <= 30; ++m) want += std::norm(oracle::quadratic_d(c, n, m)) / ((n + 1.0) * (m + 1.0));
    CHECK(hs_norm_sq(g, 30) == doctest::Approx(want).epsilon(1e-10));
    CHECK(hs_norm_sq(grunsky(cocycle_F<double>(DiskMap::mobius(0.3, {0.2, 0.4}), N), KernelSource::F), 2 * N - 4) <
          1e-20);
  }

  TEST_CASE("partial profiles and verdicts") {
    const int N = 41;
    const auto p05 = profile_of(cocycle_G<double>(DiskMap::affine(0.4, 0.2), DiskMap::affine(-0.4, 0.2), N),
                                KernelSource::G);
    const auto p10 = profile_of(cocycle_G<double>(DiskMap::affine(0.4, 0.4), DiskMap::affine(-0.4, 0.4), N),
                                KernelSource::G);
    REQUIRE(p10.size() == 41u);
    for (int k = 1; 2 * k <= 40; ++k) {
      CHECK(p10[2 * k] - p10[k] > 1e-2);
      if (k >= 10) CHECK(p05[2 * k] - p05[k] < 1e-6);
    }

    CHECK(classify_profile(p05).verdict == HsVerdict::converged);
    CHECK(classify_profile(p10).verdict == HsVerdict::diverging);
    const auto zero = profile_of(TruncatedSeries2<double>(10), KernelSource::G);
    for (const double x : zero) CHECK(x == 0.0);
    CHECK(classify_profile(zero).verdict == HsVerdict::converged);
  }

  TEST_CASE("touching profile against brute-force summation") {
    // the G-Grunsky entries of the sigma = 1 pair from the closed form
    const int N = 30;
    const auto p = profile_of(cocycle_G<double>(DiskMap::affine(0.4, 0.4), DiskMap::affine(-0.4, 0.4), N),
                              KernelSource::G);
    double acc = 0.0;
    for (int k = 0; k < N; ++k) {
      for (int n = 0; n <= k; ++n) acc += std::norm(oracle::affine_g(0.4, 0.4, -0.4, 0.4, n, k - n)) / ((n + 1.0) * (k - n + 1.0));
      CHECK(p[k] == doctest::Approx(acc).epsilon(1e-12));
    }
  }

  TEST_CASE("F cocycle identity") {
    CHECK(verify_F_cocycle<double>(DiskMap::identity(), DiskMap::identity(), 16).max_abs_err == 0.0);
    CHECK(verify_F_cocycle<double>(DiskMap::affine(0.0, 0.5), DiskMap::affine(0.0, 0.7), 16).max_abs_err == 0.0);
    CHECK(verify_F_cocycle<double>(DiskMap::mobius(0.4, {0.3, -0.2}), poly(0.5, 0.1), 20).max_abs_err < 1e-9);
    CHECK(verify_F_cocycle<double>(quad_unchecked(0.2), poly(0.5, {0.0, 0.1}), 20).max_abs_err < 1e-9);
  }

  TEST_CASE("G cocycle identities") {
    const auto g1 = DiskMap::affine(0.5, 0.3), g2 = DiskMap::affine(-0.4, 0.3);
    const auto id = DiskMap::identity();
    const auto same = verify_G_cocycles<double>(id, g1, g2, id, id, 16);
    CHECK(same.outer.max_abs_err < 1e-14);
    CHECK(same.inner.max_abs_err < 1e-14);

    const auto mob = verify_G_cocycles<double>(DiskMap::mobius(0.3, {0.0, 0.2}), g1, g2, poly(0.5, 0.1),
                                               DiskMap::affine(0.0, 0.6), 20);
    CHECK(mob.outer.max_abs_err < 1e-9);
    CHECK(mob.inner.max_abs_err < 1e-9);

    // with f1 = f2 = B_{0,s} the inner identity is g_{n,m} s^{n+m+2}
    const double s = 0.6;
    const auto G = cocycle_G<double>(g1, g2, 12);
    const auto Gs = cocycle_G<double>(dm_compose(g1, DiskMap::affine(0.0, s)), dm_compose(g2, DiskMap::affine(0.0, s)), 12);
    for (int n = 0; n < 12; ++n)
      for (int m = 0; m < 12; ++m) CHECK(std::abs(Gs(n, m) - G(n, m) * std::pow(s, n + m + 2)) < 1e-12);
    const auto scal = verify_G_cocycles<double>(id, g1, g2, DiskMap::affine(0.0, s), DiskMap::affine(0.0, s), 20);
    CHECK(scal.inner.max_abs_err < 1e-9);

    CHECK_THROWS_AS(verify_G_cocycles<double>(id, g1, g1, id, id, 8), ConfigurationError);
  }

  TEST_CASE("F subadditivity") {
    const auto phi = poly(0.6, 0.15), psi = poly(0.5, {0.05, 0.1});
    const int N = 20, D = 2 * N - 4;
    auto norm = [&](const DiskMap& f) { return std::sqrt(hs_norm_sq(grunsky(cocycle_F<double>(f, N), KernelSource::F), D)); };
    CHECK(norm(dm_compose(phi, psi)) <= norm(phi) + norm(psi) + 1e-10);
  }

  TEST_CASE("extended precision agrees with double") {
    const auto phi = poly(0.6, {0.1, 0.15});
    const auto Fd = cocycle_F<double>(phi, 16);
    const auto Fl = cocycle_F<long double>(phi, 16);
    double e = 0.0;
    for (int n = 0; n < 16; ++n)
      for (int m = 0; m < 16 && n + m <= Fd.valid_total_degree(); ++m) {
        const auto x = Fl(n, m);
        e = std::max(e, std::abs(Fd(n, m) - Complex(double(x.real()), double(x.imag()))));
      }
    CHECK(e < 1e-12);
  }
}
