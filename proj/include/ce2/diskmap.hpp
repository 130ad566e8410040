#pragma once
// Holomorphic embeddings of the unit disk into itself.

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ce2/series.hpp"

namespace ce2 {

// z -> e^{i theta} (z - alpha)/(1 - conj(alpha) z)
struct Mobius {
  double theta = 0.0;
  Complex alpha = 0.0;
};

// B_{a,r}(z) = r z + a
struct Affine {
  Complex a = 0.0;
  double r = 1.0;
};

struct SeriesMap {
  TruncatedSeries1<double> series;
  double margin = 0.0;         // sampled distance of the image from the unit circle
  bool geometry_checked = false;  // false: built for coefficient work only
};

class DiskMap {
 public:
  using Variant = std::variant<Mobius, Affine, SeriesMap>;

  static DiskMap identity() { return mobius(0.0, 0.0); }
  static DiskMap mobius(double theta, Complex alpha);
  static DiskMap affine(Complex a, double r);
  // Runs the sampled geometry checks and throws DomainError on failure.
  static DiskMap series(const TruncatedSeries1<double>& s);
  // Skips the geometry checks; the map is usable for coefficient
  // computations but is flagged as unchecked.
  static DiskMap series_unchecked(const TruncatedSeries1<double>& s);

  const Variant& data() const { return v_; }
  bool is_mobius() const { return std::holds_alternative<Mobius>(v_); }
  bool is_affine() const { return std::holds_alternative<Affine>(v_); }
  bool is_series() const { return std::holds_alternative<SeriesMap>(v_); }
  const Mobius& as_mobius() const { return std::get<Mobius>(v_); }
  const Affine& as_affine() const { return std::get<Affine>(v_); }
  const SeriesMap& as_series() const { return std::get<SeriesMap>(v_); }

  // Cutoff carried by a SeriesMap, 0 for parametric maps.
  int native_cutoff() const;
  std::string describe() const;

 private:
  friend DiskMap dm_compose(const DiskMap&, const DiskMap&, int);
  friend DiskMap dm_conjugate(const DiskMap&);
  explicit DiskMap(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

Complex dm_eval(const DiskMap& phi, Complex z);
Complex dm_derivative(const DiskMap& phi, Complex z);

constexpr int kDefaultComposeCutoff = 64;

// phi∘psi. Mixed pairs become a SeriesMap with cutoff
// max(operand cutoffs, cutoff).
DiskMap dm_compose(const DiskMap& phi, const DiskMap& psi, int cutoff = kDefaultComposeCutoff);
DiskMap dm_conjugate(const DiskMap& phi);

template <class R>
TruncatedSeries1<R> dm_to_series(const DiskMap& phi, int N);

enum class Disjointness { disjoint, touching, overlapping, unknown };
enum class Evidence { analytic, sampled, asserted };

struct DisjointDecision {
  Disjointness verdict;
  Evidence evidence;
};

const char* to_string(Disjointness d);
const char* to_string(Evidence e);

DisjointDecision dm_disjoint(const DiskMap& phi, const DiskMap& psi, bool closure);

double separation_sigma(const Affine& phi, const Affine& psi);

// Ordered list of maps with pairwise disjointness evidence.
class Configuration {
 public:
  struct PairRecord {
    int i, j;
    DisjointDecision decision;  // evaluated on closures
  };

  Configuration() = default;
  // Rejects overlapping pairs and pairs that could not be decided.
  static Configuration make(std::vector<DiskMap> maps);
  // Undecidable pairs are accepted on the caller's word and recorded as asserted.
  static Configuration assert_disjoint(std::vector<DiskMap> maps);

  const std::vector<DiskMap>& maps() const { return maps_; }
  const std::vector<PairRecord>& pairs() const { return pairs_; }
  std::size_t size() const { return maps_.size(); }

  // True when every pair has disjoint closures. Touching pairs are
  // representable but never certified.
  bool hs_certified() const;

 private:
  friend Configuration twist_J(const Configuration& c);
  static Configuration build(std::vector<DiskMap> maps, bool allow_unknown);
  std::vector<DiskMap> maps_;
  std::vector<PairRecord> pairs_;
};

// Every map conjugated; evidence is carried over unchanged.
Configuration twist_J(const Configuration& c);

// ---- template implementation ----

template <class R>
TruncatedSeries1<R> dm_to_series(const DiskMap& phi, int N) {
  using C = std::complex<R>;
  TruncatedSeries1<R> s(N);
  if (phi.is_affine()) {
    const auto& b = phi.as_affine();
    s[0] = C(R(b.a.real()), R(b.a.imag()));
    if (N > 1) s[1] = C(R(b.r));
  } else if (phi.is_mobius()) {
    const auto& m = phi.as_mobius();
    const C alpha(R(m.alpha.real()), R(m.alpha.imag()));
    const C rot = std::polar(R(1), R(m.theta));
    const C ab = std::conj(alpha);
    s[0] = -rot * alpha;
    C p(1);  // conj(alpha)^{n-1}
    const R scale = R(1) - std::norm(alpha);
    for (int n = 1; n < N; ++n) {
      s[n] = rot * p * scale;
      p *= ab;
    }
  } else {
    const auto& src = phi.as_series().series;
    for (int n = 0; n < std::min(N, src.cutoff()); ++n)
      s[n] = C(R(src[n].real()), R(src[n].imag()));
  }
  return s;
}

}  // namespace ce2
