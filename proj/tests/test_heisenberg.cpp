#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>
#include <random>
#include <set>

#include "ce2/heisenberg.hpp"
#include "ce2/vertex.hpp"

using namespace ce2;
using Rational = boost::multiprecision::cpp_rational;

namespace {

PartitionState part(std::vector<int> ks) { return PartitionState::from_depths(std::move(ks)); }

template <class S = Complex>
HeisenbergVectorT<S> state(std::vector<int> ks, int P = 8, int W = 16) {
  return HeisenbergVectorT<S>::basis(P, W, part(std::move(ks)));
}

Complex fock_inner(const FockVector& a, const FockVector& b) {
  Complex s = 0.0;
  for (const auto& [idx, x] : a.table()) s += std::conj(x) * b.amp(idx);
  return s;
}

std::set<int> sectors(const HeisenbergVectorT<Rational>& v) {
  std::set<int> out;
  for (const auto& [s, a] : v.table()) out.insert(s.particles());
  return out;
}

// Rational LDL^T; true when every pivot is positive.
bool positive_definite(std::vector<std::vector<Rational>> A) {
  const std::size_t n = A.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (A[k][k] <= 0) return false;
    for (std::size_t i = k + 1; i < n; ++i) {
      const Rational f = A[i][k] / A[k][k];
      for (std::size_t j = k; j < n; ++j) A[i][j] -= f * A[k][j];
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("heisenberg") {
  TEST_CASE("partitions") {
    const auto s = part({1, 3, 1});
    CHECK(s.depths() == std::vector<int>{3, 1, 1});
    CHECK(s.weight() == 5);
    CHECK(s.multiplicity(1) == 2);
    CHECK(s.with(2) == part({3, 2, 1, 1}));
    CHECK(s.without(1) == part({3, 1}));
    CHECK_THROWS_AS(part({0}), UsageError);
    CHECK_THROWS_AS(s.without(2), UsageError);

    // partitions of 4: 5 of them, 4 with at most 3 parts
    CHECK(partitions_of(4, 8).size() == 5);
    CHECK(partitions_of(4, 3).size() == 4);
    CHECK(partitions_up_to(4, 8).size() == 1 + 1 + 2 + 3 + 5);
    const auto all = partitions_up_to(6, 6);
    for (std::size_t i = 1; i < all.size(); ++i) CHECK(all[i - 1] < all[i]);
  }

  TEST_CASE("inner product") {
    CHECK(inner_M(state({2}), state({2})) == Complex(2.0));
    for (int p = 1; p <= 5; ++p) {
      const auto v = state<Rational>(std::vector<int>(p, 1));
      Rational f = 1;
      for (int k = 2; k <= p; ++k) f *= k;
      CHECK(inner_M(v, v) == f);
    }
    CHECK(inner_M(state({2}), state({1, 1})) == Complex(0.0));
    // m! k^m per depth
    CHECK(inner_M(state<Rational>({3, 3, 1}), state<Rational>({3, 3, 1})) == Rational(2 * 9 * 1));

    auto v = state({1}) + Complex(0.0, 2.0) * state({2});
    CHECK(inner_M(v, v) == Complex(1.0 + 4.0 * 2.0));
    CHECK(inner_M(state({1}), Complex(0.0, 1.0) * state({1})) == Complex(0.0, 1.0));
    CHECK(inner_M(Complex(0.0, 1.0) * state({1}), state({1})) == Complex(0.0, -1.0));
  }

  TEST_CASE("modes") {
    const auto vac = HeisenbergVector::vacuum(4, 8);
    CHECK(mode_h(1, mode_h(-1, vac)) == vac);
    for (int n = 0; n <= 3; ++n) CHECK(mode_h(n, vac).table().empty());
    CHECK(mode_h(-2, mode_h(-1, vac)) == state({2, 1}, 4, 8));
    CHECK(mode_h(2, state({2, 2}, 4, 8)) == Complex(4.0) * state({2}, 4, 8));

    // creation past the cutoff is dropped and counted
    const auto over = mode_h(-3, state({3, 3}, 4, 8));
    CHECK(over.table().empty());
    CHECK(over.dropped() == 1);
  }

  TEST_CASE("Virasoro modes") {
    const auto v = state<Rational>({2, 1});
    CHECK(virasoro_L(0, v) == Rational(3) * v);

    auto cur = state<Rational>({1});
    Rational fact = 1;
    for (int n = 1; n <= 5; ++n) {
      cur = virasoro_L(-1, cur);
      fact *= n;
      CHECK(cur == fact * state<Rational>({n + 1}));
    }

    CHECK(virasoro_L(2, state<Rational>({1, 1})) == HeisenbergVectorT<Rational>::vacuum(8, 16));
    CHECK(virasoro_L(1, HeisenbergVectorT<Rational>::vacuum(8, 16)).table().empty());
  }

  TEST_CASE("Virasoro bracket in exact arithmetic") {
    int checked = 0;
    for (const auto& s : partitions_up_to(5, 5)) {
      const auto v = HeisenbergVectorT<Rational>::basis(12, 12, s);
      for (int n = -2; n <= 2; ++n)
        for (int m = -2; m <= 2; ++m) {
          auto lhs = virasoro_L(n, virasoro_L(m, v)) - virasoro_L(m, virasoro_L(n, v));
          auto rhs = Rational(n - m) * virasoro_L(n + m, v);
          if (n + m == 0) rhs += Rational(n * n * n - n, 12) * v;
          CHECK(lhs == rhs);
          ++checked;
        }
    }
    CHECK(checked > 0);
  }

  TEST_CASE("particle sectors") {
    for (const auto& s : partitions_up_to(5, 4)) {
      const auto v = HeisenbergVectorT<Rational>::basis(12, 12, s);
      const int p = s.particles();
      for (int n : {-1, 0, 1})
        for (int q : sectors(virasoro_L(n, v))) CHECK(q == p);
      for (int n : {2, 3, 4})
        for (int q : sectors(virasoro_L(n, v))) CHECK((q == p || q == p - 2));
    }
  }

  TEST_CASE("L0 scaling") {
    const auto v = state({2, 1}) + state({1});
    CHECK(scale_L0(1.0, v) == v);
    CHECK(scale_L0(0.5, state({2, 1})).amp(part({2, 1})) == Complex(0.125));
    const auto a = state({3}), b = state({2, 1});
    CHECK(inner_M(scale_L0(0.3, a), scale_L0(0.7, b)) == Complex(0.0));
    CHECK_THROWS_AS(scale_L0(0.0, v), DomainError);
  }

  TEST_CASE("theta form is positive on every sector") {
    for (int w = 1; w <= 6; ++w)
      for (int p = 1; p <= 4; ++p) {
        std::vector<PartitionState> sector;
        for (const auto& s : partitions_of(w, p))
          if (s.particles() == p) sector.push_back(s);
        if (sector.empty()) continue;
        std::vector<std::vector<Rational>> G(sector.size(), std::vector<Rational>(sector.size()));
        for (std::size_t a = 0; a < sector.size(); ++a) {
          const auto ta = theta(HeisenbergVectorT<Rational>::basis(8, 8, sector[a]));
          for (std::size_t b = 0; b < sector.size(); ++b)
            for (const auto& [s, x] : ta.table()) G[a][b] += x * invariant_form<Rational>(s, sector[b], 8, 8);
        }
        CHECK(positive_definite(G));
        for (std::size_t a = 0; a < sector.size(); ++a) CHECK(G[a][a] == inner_norm_factor<Rational>(sector[a]));
      }
  }

  TEST_CASE("Psi") {
    const int N = 8;
    auto image = [&](std::vector<int> ks) { return psi(state(std::move(ks)), N); };
    CHECK(image({1}).amp(OccupationIndex::from_modes({0})) == Complex(1.0));
    CHECK(std::abs(image({1, 1}).amp(OccupationIndex::from_modes({0, 0})) - std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(image({2}).amp(OccupationIndex::from_modes({1})) - std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(image({2, 1}).amp(OccupationIndex::from_modes({0, 1})) - std::sqrt(2.0)) < 1e-15);
    CHECK(image({}).vacuum_amp() == Complex(1.0));
    CHECK_THROWS_AS(psi(state({9}), N), CutoffError);
  }

  TEST_CASE("Psi preserves the Gram matrix") {
    std::mt19937_64 rng(12);
    std::normal_distribution<double> G;
    const auto basis = partitions_up_to(6, 4);
    std::vector<HeisenbergVector> vs;
    for (int k = 0; k < 6; ++k) {
      HeisenbergVector v(4, 6);
      for (const auto& s : basis) v.add(s, {G(rng), G(rng)});
      vs.push_back(v);
    }
    for (const auto& u : vs)
      for (const auto& v : vs) {
        const Complex want = inner_M(u, v);
        CHECK(std::abs(fock_inner(psi(u, 6), psi(v, 6)) - want) < 1e-11 * std::max(1.0, std::abs(want)));
      }
  }

  TEST_CASE("vertex side") {
    const Complex zeta = 0.5;
    const double r = 0.2, s = 0.2;
    const int N = 40;
    const auto vac = HeisenbergVector::vacuum(8, 8);
    const auto h1 = state({1}, 8, 8);

    const auto one = vertex_side(vac, vac, zeta, r, s, N);
    CHECK(one.table().size() == 1);
    CHECK(one.vacuum_amp() == Complex(1.0));

    const auto kern = vertex_side(h1, vac, zeta, r, s, N);
    for (int n = 0; n < N; ++n)
      CHECK(std::abs(kern.amp(OccupationIndex::from_modes({n})) - r * std::sqrt(n + 1.0) * std::pow(zeta, n)) < 1e-15);

    const auto two = vertex_side(h1, h1, zeta, r, s, N);
    CHECK(std::abs(two.vacuum_amp() - 0.16) < 1e-14);
    CHECK(std::abs(two.amp(OccupationIndex::from_modes({0, 0})) - r * s * std::sqrt(2.0)) < 1e-15);
    for (int n = 1; n < N; ++n)
      CHECK(std::abs(two.amp(OccupationIndex::from_modes({0, n})) - r * s * std::sqrt(n + 1.0) * std::pow(zeta, n)) <
            1e-15);

    CHECK_THROWS_AS(vertex_side(h1, h1, 0.0, r, s, N), DomainError);
    CHECK(std::abs(contraction_coefficient(0, 0, zeta) - 4.0) < 1e-15);
    CHECK(std::abs(contraction_coefficient(1, 2, zeta) + 24.0 / 2.0 * std::pow(0.5, -5)) < 1e-12);
  }

  TEST_CASE("vertex tail is the norm cut by the mode cutoff") {
    const Complex zeta(0.3, 0.2);
    const auto h1 = state({1}, 8, 8), vac = HeisenbergVector::vacuum(8, 8);
    const int N = 10;
    const auto img = vertex_side_with_tail(h1, vac, zeta, 0.5, 0.5, N);
    // r E_zeta has squared norm r^2 / (1 - |zeta|^2)^2
    const double full = 0.25 / std::pow(1.0 - std::norm(zeta), 2);
    CHECK(std::abs(img.coords.norm() * img.coords.norm() + img.tail * img.tail - full) < 1e-13);
  }

  TEST_CASE("operadic and vertex sides agree") {
    const auto v = state({2}, 8, 8), w = state({1, 1}, 8, 8);
    const auto lo = correspondence(v, w, 0.5, 0.2, 0.2, 20);
    const auto hi = correspondence(v, w, 0.5, 0.2, 0.2, 40);
    CHECK(hi.discrepancy < 1e-8);
    CHECK(hi.discrepancy <= 0.5 * lo.discrepancy);
    CHECK(hi.dropped == 0);
  }

  TEST_CASE("norm convergence profile") {
    const auto vac = HeisenbergVector::vacuum(8, 8);
    const auto h1 = state({1}, 8, 8);
    const auto p0 = norm_convergence_profile(h1, vac, 0.5, 20);
    // h(-k)1 for every k >= 1 survives: sum k |zeta|^{2k-2} = 16/9, led by the k = 1 term
    CHECK(p0.partial_sums.back() == doctest::Approx(16.0 / 9.0).epsilon(1e-9));
    CHECK(p0.terms.front() == doctest::Approx(1.0));

    const auto p = norm_convergence_profile(h1, h1, 0.5, 40);
    CHECK(p.ratio < 1.0);
    CHECK(p.monotone);
    for (std::size_t k = 1; k < p.partial_sums.size(); ++k) CHECK(p.partial_sums[k] >= p.partial_sums[k - 1]);

    CHECK_THROWS_AS(norm_convergence_profile(state({1, 1}, 8, 8), h1, 0.5, 10), NotImplementedError);
    CHECK_THROWS_AS(norm_convergence_profile(h1, h1, 0.0, 10), DomainError);
  }
}
