#include "ce2/diskmap.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ce2 {

namespace {

constexpr double kBoundaryRadius = 1.0 - 1e-6;
constexpr int kBoundarySamples = 512;

std::vector<Complex> boundary_samples(const DiskMap& phi) {
  std::vector<Complex> pts;
  pts.reserve(kBoundarySamples);
  for (int k = 0; k < kBoundarySamples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / kBoundarySamples;
    pts.push_back(dm_eval(phi, std::polar(kBoundaryRadius, t)));
  }
  return pts;
}

struct SampledGeometry {
  bool ok = true;
  double margin = 0.0;
  std::string why;
};

SampledGeometry sample_geometry(const TruncatedSeries1<double>& s) {
  SampledGeometry g;
  const auto ds = s.derivative();
  double max_mod = 0.0;
  for (double rho : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99, kBoundaryRadius}) {
    const int count = rho == 0.0 ? 1 : kBoundarySamples;
    for (int k = 0; k < count; ++k) {
      const Complex z = std::polar(rho, 2.0 * std::numbers::pi * k / kBoundarySamples);
      max_mod = std::max(max_mod, std::abs(s.eval(z)));
      if (std::abs(ds.eval(z)) < 1e-12) {
        g.ok = false;
        g.why = "derivative vanishes near z = " + std::to_string(z.real()) + "+" + std::to_string(z.imag()) + "i";
      }
    }
  }
  g.margin = 1.0 - max_mod;
  if (max_mod >= 1.0) {
    g.ok = false;
    g.why = "sampled |phi| reaches " + std::to_string(max_mod);
  }
  return g;
}

bool is_identity(const DiskMap& m) {
  if (!m.is_mobius()) return false;
  const auto& mb = m.as_mobius();
  return std::remainder(mb.theta, 2.0 * std::numbers::pi) == 0.0 && mb.alpha == Complex(0.0);
}

bool geometry_trusted(const DiskMap& m) { return !m.is_series() || m.as_series().geometry_checked; }

// SU(1,1) representative [[p, q], [conj q, conj p]] of a Mobius map.
struct SU11 {
  Complex p, q;
};

SU11 to_su11(const Mobius& m) {
  const double k = 1.0 / std::sqrt(1.0 - std::norm(m.alpha));
  const Complex h = std::polar(1.0, m.theta / 2.0);
  return {h * k, -h * m.alpha * k};
}

Mobius from_su11(const SU11& g) {
  Mobius m;
  m.alpha = -g.q / g.p;
  m.theta = 2.0 * std::arg(g.p);
  return m;
}

// Convex hull by monotone chain, counter-clockwise.
std::vector<Complex> convex_hull(std::vector<Complex> pts) {
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  if (pts.size() < 3) return pts;
  auto cross = [](Complex o, Complex a, Complex b) {
    return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
  };
  std::vector<Complex> h(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 2], h[k - 1], pts[i]) <= 0) --k;
    h[k++] = pts[i];
  }
  h.resize(k - 1);
  return h;
}

// Largest gap between projections over the edge normals of both hulls;
// positive means the hulls are separated.
double hull_gap(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double best = -1e300;
  auto scan = [&](const std::vector<Complex>& h) {
    for (std::size_t i = 0; i < h.size(); ++i) {
      const Complex e = h[(i + 1) % h.size()] - h[i];
      if (std::abs(e) == 0.0) continue;
      const Complex n = Complex(e.imag(), -e.real()) / std::abs(e);
      double amin = 1e300, amax = -1e300, bmin = 1e300, bmax = -1e300;
      for (auto p : a) {
        const double d = p.real() * n.real() + p.imag() * n.imag();
        amin = std::min(amin, d);
        amax = std::max(amax, d);
      }
      for (auto p : b) {
        const double d = p.real() * n.real() + p.imag() * n.imag();
        bmin = std::min(bmin, d);
        bmax = std::max(bmax, d);
      }
      best = std::max(best, std::max(bmin - amax, amin - bmax));
    }
  };
  scan(a);
  scan(b);
  return best;
}

bool inside_polygon(Complex p, const std::vector<Complex>& poly) {
  bool in = false;
  for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
    const Complex a = poly[i], b = poly[j];
    if ((a.imag() > p.imag()) != (b.imag() > p.imag())) {
      const double x = a.real() + (p.imag() - a.imag()) * (b.real() - a.real()) / (b.imag() - a.imag());
      if (p.real() < x) in = !in;
    }
  }
  return in;
}

DisjointDecision sampled_disjoint(const DiskMap& phi, const DiskMap& psi) {
  const auto pa = boundary_samples(phi), pb = boundary_samples(psi);
  const double gap = hull_gap(convex_hull(pa), convex_hull(pb));
  if (gap > 1e-9) return {Disjointness::disjoint, Evidence::sampled};
  for (auto p : pa)
    if (inside_polygon(p, pb)) return {Disjointness::overlapping, Evidence::sampled};
  for (auto p : pb)
    if (inside_polygon(p, pa)) return {Disjointness::overlapping, Evidence::sampled};
  return {Disjointness::unknown, Evidence::sampled};
}

}  // namespace

DiskMap DiskMap::mobius(double theta, Complex alpha) {
  if (!(std::abs(alpha) < 1.0)) throw DomainError("Mobius map needs |alpha| < 1");
  return DiskMap(Mobius{theta, alpha});
}

DiskMap DiskMap::affine(Complex a, double r) {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("affine map needs 0 < r <= 1");
  if (std::abs(a) + r > 1.0 + 1e-12) throw DomainError("affine image leaves the closed disk: |a| + r > 1");
  return DiskMap(Affine{a, r});
}

DiskMap DiskMap::series(const TruncatedSeries1<double>& s) {
  const auto g = sample_geometry(s);
  if (!g.ok) throw DomainError("series map rejected: " + g.why);
  return DiskMap(SeriesMap{s, g.margin, true});
}

DiskMap DiskMap::series_unchecked(const TruncatedSeries1<double>& s) {
  return DiskMap(SeriesMap{s, 0.0, false});
}

int DiskMap::native_cutoff() const { return is_series() ? as_series().series.cutoff() : 0; }

std::string DiskMap::describe() const {
  std::ostringstream os;
  if (is_mobius())
    os << "mobius(theta=" << as_mobius().theta << ", alpha=" << as_mobius().alpha << ")";
  else if (is_affine())
    os << "affine(a=" << as_affine().a << ", r=" << as_affine().r << ")";
  else
    os << "series(cutoff=" << as_series().series.cutoff() << ")";
  return os.str();
}

Complex dm_eval(const DiskMap& phi, Complex z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("dm_eval needs |z| < 1");
  if (phi.is_affine()) return phi.as_affine().r * z + phi.as_affine().a;
  if (phi.is_mobius()) {
    const auto& m = phi.as_mobius();
    return std::polar(1.0, m.theta) * (z - m.alpha) / (1.0 - std::conj(m.alpha) * z);
  }
  return phi.as_series().series.eval(z);
}

Complex dm_derivative(const DiskMap& phi, Complex z) {
  if (!(std::abs(z) < 1.0)) throw DomainError("dm_derivative needs |z| < 1");
  if (phi.is_affine()) return phi.as_affine().r;
  if (phi.is_mobius()) {
    const auto& m = phi.as_mobius();
    const Complex d = 1.0 - std::conj(m.alpha) * z;
    return std::polar(1.0, m.theta) * (1.0 - std::norm(m.alpha)) / (d * d);
  }
  return phi.as_series().series.derivative().eval(z);
}

DiskMap dm_compose(const DiskMap& phi, const DiskMap& psi, int cutoff) {
  if (is_identity(psi)) return phi;
  if (is_identity(phi)) return psi;
  if (phi.is_affine() && psi.is_affine()) {
    const auto& f = phi.as_affine();
    const auto& g = psi.as_affine();
    return DiskMap::affine(f.r * g.a + f.a, f.r * g.r);
  }
  if (phi.is_mobius() && psi.is_mobius()) {
    const auto A = to_su11(phi.as_mobius()), B = to_su11(psi.as_mobius());
    // [[p q][q* p*]] product keeps the same shape.
    const SU11 C{A.p * B.p + A.q * std::conj(B.q), A.p * B.q + A.q * std::conj(B.p)};
    const auto m = from_su11(C);
    return DiskMap::mobius(m.theta, m.alpha);
  }
  const int C = std::max({cutoff, phi.native_cutoff(), psi.native_cutoff()});
  const auto inner = dm_to_series<double>(psi, C);
  TruncatedSeries1<double> out(C);
  if (phi.is_affine()) {
    out = phi.as_affine().r * inner;
    out[0] += phi.as_affine().a;
  } else if (phi.is_mobius()) {
    const auto& m = phi.as_mobius();
    auto num = inner;
    num[0] -= m.alpha;
    auto den = -std::conj(m.alpha) * inner;
    den[0] += 1.0;
    out = std::polar(1.0, m.theta) * s_mul(num, s_reciprocal(den));
  } else {
    out = s_compose(dm_to_series<double>(phi, C), inner);
  }
  if (geometry_trusted(phi) && geometry_trusted(psi)) {
    const auto g = sample_geometry(out);
    if (g.ok) return DiskMap(SeriesMap{out, g.margin, true});
  }
  return DiskMap::series_unchecked(out);
}

DiskMap dm_conjugate(const DiskMap& phi) {
  if (phi.is_affine()) return DiskMap::affine(std::conj(phi.as_affine().a), phi.as_affine().r);
  if (phi.is_mobius()) return DiskMap::mobius(-phi.as_mobius().theta, std::conj(phi.as_mobius().alpha));
  const auto& s = phi.as_series();
  return DiskMap(SeriesMap{s.series.conj(), s.margin, s.geometry_checked});
}

const char* to_string(Disjointness d) {
  switch (d) {
    case Disjointness::disjoint: return "disjoint";
    case Disjointness::touching: return "touching";
    case Disjointness::overlapping: return "overlapping";
    case Disjointness::unknown: return "unknown";
  }
  return "?";
}

const char* to_string(Evidence e) {
  switch (e) {
    case Evidence::analytic: return "analytic";
    case Evidence::sampled: return "sampled";
    case Evidence::asserted: return "asserted";
  }
  return "?";
}

DisjointDecision dm_disjoint(const DiskMap& phi, const DiskMap& psi, bool closure) {
  // A disk automorphism fills the whole disk.
  if (phi.is_mobius() || psi.is_mobius()) return {Disjointness::overlapping, Evidence::analytic};
  if (phi.is_affine() && psi.is_affine()) {
    const auto& f = phi.as_affine();
    const auto& g = psi.as_affine();
    const double d = std::abs(f.a - g.a), rs = f.r + g.r;
    const double tol = 1e-12 * std::max(1.0, rs);
    if (d > rs + tol) return {Disjointness::disjoint, Evidence::analytic};
    if (d >= rs - tol)
      return {closure ? Disjointness::touching : Disjointness::disjoint, Evidence::analytic};
    return {Disjointness::overlapping, Evidence::analytic};
  }
  return sampled_disjoint(phi, psi);
}

double separation_sigma(const Affine& phi, const Affine& psi) {
  const double d = std::abs(phi.a - psi.a);
  if (d == 0.0) throw ConfigurationError("separation_sigma: coincident centres");
  return (phi.r + psi.r) / d;
}

Configuration Configuration::build(std::vector<DiskMap> maps, bool allow_unknown) {
  Configuration c;
  for (int i = 0; i < static_cast<int>(maps.size()); ++i)
    for (int j = i + 1; j < static_cast<int>(maps.size()); ++j) {
      auto d = dm_disjoint(maps[i], maps[j], true);
      if (d.verdict == Disjointness::overlapping)
        throw ConfigurationError("maps " + std::to_string(i) + " and " + std::to_string(j) + " overlap");
      if (d.verdict == Disjointness::unknown) {
        if (!allow_unknown)
          throw ConfigurationError("disjointness of maps " + std::to_string(i) + " and " + std::to_string(j) +
                                   " could not be decided");
        d = {Disjointness::disjoint, Evidence::asserted};
      }
      c.pairs_.push_back({i, j, d});
    }
  c.maps_ = std::move(maps);
  return c;
}

Configuration Configuration::make(std::vector<DiskMap> maps) { return build(std::move(maps), false); }

Configuration Configuration::assert_disjoint(std::vector<DiskMap> maps) { return build(std::move(maps), true); }

bool Configuration::hs_certified() const {
  return std::all_of(pairs_.begin(), pairs_.end(),
                     [](const PairRecord& p) { return p.decision.verdict == Disjointness::disjoint; });
}

Configuration twist_J(const Configuration& c) {
  // Conjugation is an isometry of the plane, so the evidence carries over.
  Configuration out = c;
  for (auto& m : out.maps_) m = dm_conjugate(m);
  return out;
}

}  // namespace ce2
