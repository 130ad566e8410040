#include <doctest.h>

#include <random>

#include "ce2/diskmap.hpp"

using namespace ce2;

namespace {

std::vector<Complex> sample_points(int n, double radius, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<Complex> zs;
  for (int i = 0; i < n; ++i) zs.push_back(std::polar(radius * std::sqrt(U(rng)), 2.0 * M_PI * U(rng)));
  return zs;
}

Complex mobius_closed(double theta, Complex alpha, Complex z) {
  return std::polar(1.0, theta) * (z - alpha) / (1.0 - std::conj(alpha) * z);
}

DiskMap quad(double a1, Complex a2) {
  TruncatedSeries1<double> s(3);
  s[1] = a1;
  s[2] = a2;
  return DiskMap::series(s);
}

}  // namespace

TEST_SUITE("diskmap") {
  TEST_CASE("evaluation") {
    CHECK(dm_eval(DiskMap::affine(0.5, 0.2), 0.0) == Complex(0.5));
    const Complex z(0.3, -0.4);
    CHECK(std::abs(dm_eval(DiskMap::mobius(0.0, 0.0), z) - z) < 1e-15);
    CHECK(std::abs(dm_eval(DiskMap::mobius(0.0, 0.3), 0.3)) < 1e-15);
    CHECK_THROWS_AS(dm_eval(DiskMap::identity(), 1.0), DomainError);
  }

  TEST_CASE("constructors reject maps leaving the disk") {
    CHECK_THROWS_AS(DiskMap::mobius(0.0, 1.0), DomainError);
    CHECK_THROWS_AS(DiskMap::affine(0.8, 0.3), DomainError);
    CHECK_THROWS_AS(DiskMap::affine(0.0, 0.0), DomainError);
    TruncatedSeries1<double> s(3);
    s[1] = 1.0;
    s[2] = 0.9;  // derivative vanishes at -1/1.8
    CHECK_THROWS_AS(DiskMap::series(s), DomainError);
  }

  TEST_CASE("composition") {
    const auto ab = dm_compose(DiskMap::affine({0.1, 0.2}, 0.5), DiskMap::affine(-0.3, 0.4));
    REQUIRE(ab.is_affine());
    CHECK(std::abs(ab.as_affine().a - Complex(0.1 - 0.15, 0.2)) < 1e-15);
    CHECK(ab.as_affine().r == doctest::Approx(0.2));

    const auto phi = quad(0.6, 0.15);
    const auto same = dm_compose(phi, DiskMap::identity());
    for (const auto z : sample_points(10, 0.95, 1)) CHECK(std::abs(dm_eval(same, z) - dm_eval(phi, z)) < 1e-12);

    const double t1 = 0.7, t2 = -1.1;
    const Complex a1(0.3, 0.1), a2(-0.2, 0.5);
    const auto mm = dm_compose(DiskMap::mobius(t1, a1), DiskMap::mobius(t2, a2));
    REQUIRE(mm.is_mobius());
    for (const auto z : sample_points(20, 0.99, 2))
      CHECK(std::abs(dm_eval(mm, z) - mobius_closed(t1, a1, mobius_closed(t2, a2, z))) < 1e-12);
  }

  TEST_CASE("composition is associative") {
    const auto a = DiskMap::mobius(0.4, {0.2, -0.1});
    const auto b = quad(0.6, 0.15);
    const auto c = DiskMap::affine({0.1, 0.1}, 0.5);
    const auto l = dm_compose(dm_compose(a, b), c), r = dm_compose(a, dm_compose(b, c));
    for (const auto z : sample_points(20, 0.9, 3)) CHECK(std::abs(dm_eval(l, z) - dm_eval(r, z)) < 1e-10);
  }

  TEST_CASE("conjugation") {
    const auto m = dm_conjugate(DiskMap::mobius(0.8, {0.3, 0.4}));
    REQUIRE(m.is_mobius());
    CHECK(m.as_mobius().theta == doctest::Approx(-0.8));
    CHECK(std::abs(m.as_mobius().alpha - Complex(0.3, -0.4)) < 1e-15);

    const auto a = dm_conjugate(DiskMap::affine({0.2, 0.3}, 0.4));
    CHECK(std::abs(a.as_affine().a - Complex(0.2, -0.3)) < 1e-15);
    CHECK(a.as_affine().r == 0.4);

    const auto phi = dm_compose(DiskMap::mobius(0.3, {0.1, 0.2}), quad(0.6, {0.1, 0.1}));
    const auto back = dm_conjugate(dm_conjugate(phi));
    for (const auto z : sample_points(10, 0.9, 4)) {
      CHECK(std::abs(dm_eval(back, z) - dm_eval(phi, z)) < 1e-14);
      CHECK(std::abs(dm_eval(dm_conjugate(phi), z) - std::conj(dm_eval(phi, std::conj(z)))) < 1e-12);
    }
  }

  TEST_CASE("conjugation respects composition") {
    const auto f = DiskMap::mobius(0.3, {0.1, 0.2});
    const auto g = quad(0.6, {0.1, 0.1});
    const auto l = dm_conjugate(dm_compose(f, g));
    const auto r = dm_compose(dm_conjugate(f), dm_conjugate(g));
    for (const auto z : sample_points(20, 0.9, 5)) CHECK(std::abs(dm_eval(l, z) - dm_eval(r, z)) < 1e-10);
  }

  TEST_CASE("series expansion") {
    const auto s = dm_to_series<double>(DiskMap::affine({0.1, 0.2}, 0.3), 5);
    CHECK(s[0] == Complex(0.1, 0.2));
    CHECK(s[1] == Complex(0.3));
    CHECK(s[2] == Complex(0.0));

    const auto id = dm_to_series<double>(DiskMap::identity(), 4);
    CHECK(id[0] == Complex(0.0));
    CHECK(id[1] == Complex(1.0));
    CHECK(id[2] == Complex(0.0));

    const auto m = DiskMap::mobius(0.0, 0.3);
    const auto ms = dm_to_series<double>(m, 60);
    for (const auto z : sample_points(10, 0.5, 6)) CHECK(std::abs(ms.eval(z) - dm_eval(m, z)) < 1e-14);
  }

  TEST_CASE("disjointness") {
    const auto a = DiskMap::affine(0.5, 0.2), b = DiskMap::affine(-0.3, 0.2);
    CHECK(dm_disjoint(a, b, true).verdict == Disjointness::disjoint);
    CHECK(dm_disjoint(a, b, true).evidence == Evidence::analytic);
    CHECK(dm_disjoint(DiskMap::affine(0.4, 0.4), DiskMap::affine(-0.4, 0.4), true).verdict ==
          Disjointness::touching);
    CHECK(dm_disjoint(a, a, false).verdict == Disjointness::overlapping);

    // a Mobius image is the whole disk
    CHECK(dm_disjoint(DiskMap::mobius(0.2, 0.1), a, false).verdict == Disjointness::overlapping);
  }

  TEST_CASE("separation") {
    CHECK(separation_sigma({0.4, 0.2}, {-0.4, 0.2}) == doctest::Approx(0.5));
    CHECK(separation_sigma({0.4, 0.4}, {-0.4, 0.4}) == doctest::Approx(1.0));
    CHECK(separation_sigma({0.25, 0.1}, {-0.25, 0.3}) == doctest::Approx(0.8));
    CHECK_THROWS_AS(separation_sigma({0.1, 0.2}, {0.1, 0.3}), ConfigurationError);
  }

  TEST_CASE("configurations") {
    const auto ok = Configuration::make({DiskMap::affine(0.5, 0.2), DiskMap::affine(-0.3, 0.2)});
    CHECK(ok.hs_certified());
    CHECK(ok.pairs().size() == 1);
    const auto touching = Configuration::make({DiskMap::affine(0.4, 0.4), DiskMap::affine(-0.4, 0.4)});
    CHECK_FALSE(touching.hs_certified());
    CHECK_THROWS_AS(Configuration::make({DiskMap::affine(0.1, 0.4), DiskMap::affine(-0.1, 0.4)}),
                    ConfigurationError);
    CHECK(Configuration::make({}).hs_certified());

    const auto tw = twist_J(Configuration::make({DiskMap::affine({0.5, 0.2}, 0.2), DiskMap::affine(-0.3, 0.2)}));
    CHECK(std::abs(tw.maps()[0].as_affine().a - Complex(0.5, -0.2)) < 1e-15);
  }

  TEST_CASE("schwarz bound on sampled maps") {
    const auto maps = {quad(0.6, 0.15), quad(0.5, {0.1, -0.1}), DiskMap::affine({0.1, 0.2}, 0.6)};
    for (const auto& phi : maps)
      for (const auto z : sample_points(200, 0.999, 9)) CHECK(std::abs(dm_eval(phi, z)) < 1.0);
  }
}
