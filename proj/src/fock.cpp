#include "ce2/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ce2 {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

using Entries = std::vector<std::pair<OccupationIndex, Complex>>;

struct Column {
  std::vector<std::pair<int, Complex>> nz;  // (row, value)
};

std::vector<Column> columns_of(const Eigen::MatrixXcd& M) {
  std::vector<Column> cols(M.cols());
  for (int i = 0; i < M.cols(); ++i)
    for (int n = 0; n < M.rows(); ++n)
      if (M(n, i) != Complex(0.0)) cols[i].nz.emplace_back(n, M(n, i));
  return cols;
}

// Substitute x_i -> sum_n M(n,i) x_n into sum_k b_k x^{mu_k}, where the
// range [b, e) of monomials is sorted and agrees on the first `depth`
// modes. Shared prefixes are expanded once.
FockVector::Table substitute(const Entries& e, std::size_t b, std::size_t end, int depth,
                             const std::vector<Column>& cols) {
  FockVector::Table out;
  if (e[b].first.particles() == depth) {
    Complex s = 0.0;
    for (std::size_t k = b; k < end; ++k) s += e[k].second;
    out[OccupationIndex()] = s;
    return out;
  }
  std::size_t g = b;
  while (g < end) {
    const int mode = e[g].first.mode(depth);
    std::size_t h = g;
    while (h < end && e[h].first.mode(depth) == mode) ++h;
    const auto child = substitute(e, g, h, depth + 1, cols);
    for (const auto& [key, c] : child)
      for (const auto& [n, m] : cols[mode].nz) out[key.with(n)] += c * m;
    g = h;
  }
  return out;
}

bool lex_modes(const OccupationIndex& a, const OccupationIndex& b) {
  const auto ma = a.modes(), mb = b.modes();
  return std::lexicographical_compare(ma.begin(), ma.end(), mb.begin(), mb.end());
}

}  // namespace

// ---- OccupationIndex ----

OccupationIndex OccupationIndex::from_modes(std::vector<int> modes) {
  if (static_cast<int>(modes.size()) > kMaxParticles)
    throw CutoffError("more than " + std::to_string(kMaxParticles) + " particles");
  std::sort(modes.begin(), modes.end());
  OccupationIndex idx;
  for (int m : modes) {
    if (m < 0 || m >= kMaxModes) throw CutoffError("mode index out of range: " + std::to_string(m));
    idx.modes_[idx.size_++] = static_cast<std::uint8_t>(m);
  }
  return idx;
}

OccupationIndex OccupationIndex::from_occupations(const std::vector<int>& nu) {
  std::vector<int> modes;
  for (int i = 0; i < static_cast<int>(nu.size()); ++i) {
    if (nu[i] < 0) throw UsageError("negative occupation number");
    for (int k = 0; k < nu[i]; ++k) modes.push_back(i);
  }
  return from_modes(std::move(modes));
}

std::vector<int> OccupationIndex::occupations(int N) const {
  std::vector<int> nu(N, 0);
  for (int k = 0; k < size_; ++k) {
    if (modes_[k] >= N) throw CutoffError("occupation index exceeds mode cutoff");
    ++nu[modes_[k]];
  }
  return nu;
}

int OccupationIndex::count(int mode) const {
  int c = 0;
  for (int k = 0; k < size_; ++k) c += modes_[k] == mode;
  return c;
}

double OccupationIndex::occupation_factorial() const {
  double f = 1.0;
  int run = 0;
  for (int k = 0; k < size_; ++k) {
    run = (k > 0 && modes_[k] == modes_[k - 1]) ? run + 1 : 1;
    f *= run;
  }
  return f;
}

OccupationIndex OccupationIndex::with(int mode) const {
  if (size_ >= kMaxParticles) throw CutoffError("particle capacity exceeded");
  OccupationIndex out = *this;
  int k = size_;
  while (k > 0 && out.modes_[k - 1] > mode) {
    out.modes_[k] = out.modes_[k - 1];
    --k;
  }
  out.modes_[k] = static_cast<std::uint8_t>(mode);
  ++out.size_;
  return out;
}

OccupationIndex OccupationIndex::without(int mode) const {
  OccupationIndex out;
  bool removed = false;
  for (int k = 0; k < size_; ++k) {
    if (!removed && modes_[k] == mode) {
      removed = true;
      continue;
    }
    out.modes_[out.size_++] = modes_[k];
  }
  if (!removed) throw UsageError("mode not occupied");
  return out;
}

OccupationIndex OccupationIndex::merged(const OccupationIndex& o) const {
  if (size_ + o.size_ > kMaxParticles) throw CutoffError("particle capacity exceeded");
  OccupationIndex out;
  std::merge(modes_.begin(), modes_.begin() + size_, o.modes_.begin(), o.modes_.begin() + o.size_,
             out.modes_.begin());
  out.size_ = static_cast<std::uint8_t>(size_ + o.size_);
  return out;
}

bool OccupationIndex::operator<(const OccupationIndex& o) const {
  if (size_ != o.size_) return size_ < o.size_;
  return std::lexicographical_compare(modes_.begin(), modes_.begin() + size_, o.modes_.begin(),
                                      o.modes_.begin() + o.size_);
}

std::size_t OccupationIndex::hash() const {
  std::size_t h = 1469598103934665603ull ^ size_;
  for (int k = 0; k < size_; ++k) {
    h ^= modes_[k];
    h *= 1099511628211ull;
  }
  return h;
}

// ---- FockVector ----

FockVector::FockVector(int modes, int particles) : modes_(modes), particles_(particles) {
  if (modes < 1 || modes > kMaxModes) throw CutoffError("mode cutoff out of range");
  if (particles < 0 || particles > kMaxParticles) throw CutoffError("particle cutoff out of range");
}

FockVector FockVector::vacuum(int modes, int particles) {
  FockVector v(modes, particles);
  v.add(OccupationIndex(), 1.0);
  return v;
}

FockVector FockVector::basis(int modes, int particles, const OccupationIndex& idx, Complex amp) {
  FockVector v(modes, particles);
  v.add(idx, amp);
  return v;
}

Complex FockVector::amp(const OccupationIndex& idx) const {
  const auto it = amps_.find(idx);
  return it == amps_.end() ? Complex(0.0) : it->second;
}

void FockVector::add(const OccupationIndex& idx, Complex a) {
  if (idx.particles() > particles_) throw CutoffError("state exceeds the particle cutoff");
  if (idx.max_mode() >= modes_) throw CutoffError("state exceeds the mode cutoff");
  amps_[idx] += a;
}

std::vector<std::pair<OccupationIndex, Complex>> FockVector::sorted() const {
  Entries e(amps_.begin(), amps_.end());
  std::sort(e.begin(), e.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return e;
}

double FockVector::norm() const {
  double s = 0.0;
  for (const auto& [k, a] : amps_) s += std::norm(a);
  return std::sqrt(s);
}

int FockVector::max_particles() const {
  int p = -1;
  for (const auto& [k, a] : amps_) p = std::max(p, k.particles());
  return p;
}

FockVector& FockVector::operator+=(const FockVector& o) {
  for (const auto& [k, a] : o.amps_) add(k, a);
  dropped_ += o.dropped_;
  return *this;
}

FockVector& FockVector::operator-=(const FockVector& o) {
  for (const auto& [k, a] : o.amps_) add(k, -a);
  dropped_ += o.dropped_;
  return *this;
}

FockVector& FockVector::operator*=(Complex k) {
  for (auto& [idx, a] : amps_) a *= k;
  return *this;
}

FockVector FockVector::pruned(double tol) const {
  FockVector out(modes_, particles_);
  out.dropped_ = dropped_;
  for (const auto& [k, a] : amps_)
    if (std::abs(a) > tol) out.amps_[k] = a;
  return out;
}

FockVector FockVector::recut(int modes, int particles) const {
  FockVector out(modes, particles);
  out.dropped_ = dropped_;
  for (const auto& [k, a] : amps_) {
    if (k.particles() > particles || k.max_mode() >= modes) continue;
    out.amps_[k] += a;
  }
  return out;
}

double distance(const FockVector& a, const FockVector& b) {
  double s = 0.0;
  for (const auto& [k, x] : a.table()) s += std::norm(x - b.amp(k));
  for (const auto& [k, y] : b.table())
    if (!a.table().count(k)) s += std::norm(y);
  return std::sqrt(s);
}

double monomial_factor(const OccupationIndex& idx) {
  return std::sqrt(factorial(idx.particles()) / idx.occupation_factorial());
}

double merge_factor(const OccupationIndex& nu, const OccupationIndex& mu) {
  const auto sum = nu.merged(mu);
  return monomial_factor(nu) * monomial_factor(mu) / monomial_factor(sum);
}

FockVector merge(const FockVector& u, const FockVector& w) {
  const int N = std::max(u.modes(), w.modes());
  const int P = std::min(u.particle_cutoff(), w.particle_cutoff());
  FockVector out(N, P);
  out.add_dropped(u.dropped() + w.dropped());
  long dropped = 0;
  for (const auto& [nu, a] : u.table())
    for (const auto& [mu, b] : w.table()) {
      if (nu.particles() + mu.particles() > P) {
        ++dropped;
        continue;
      }
      out.add(nu.merged(mu), merge_factor(nu, mu) * a * b);
    }
  out.add_dropped(dropped);
  return out;
}

FockVector lift_one_body(const Eigen::MatrixXcd& M, const FockVector& v) {
  const int N = v.modes();
  if (M.rows() != N || M.cols() != N) throw UsageError("lift_one_body: matrix size does not match mode cutoff");
  const auto cols = columns_of(M);
  FockVector out(N, v.particle_cutoff());
  out.add_dropped(v.dropped());
  // Monomial coordinates, grouped by sector and sorted by mode list.
  std::map<int, Entries> sectors;
  for (const auto& [idx, a] : v.table()) sectors[idx.particles()].emplace_back(idx, a * monomial_factor(idx));
  for (auto& [p, e] : sectors) {
    std::sort(e.begin(), e.end(), [](const auto& x, const auto& y) { return lex_modes(x.first, y.first); });
    const auto poly = substitute(e, 0, e.size(), 0, cols);
    for (const auto& [idx, b] : poly) out.add(idx, b / monomial_factor(idx));
  }
  return out;
}

FockVector pair_annihilate(const Eigen::MatrixXcd& c, const FockVector& v) {
  const int N = v.modes();
  if (c.rows() < N || c.cols() < N) throw UsageError("pair_annihilate: functional smaller than mode cutoff");
  FockVector out(N, v.particle_cutoff());
  out.add_dropped(v.dropped());
  for (const auto& [idx, a] : v.table()) {
    if (idx.particles() < 2) continue;
    const double f = monomial_factor(idx);
    const auto modes = idx.modes();
    std::vector<int> distinct = modes;
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    for (std::size_t s = 0; s < distinct.size(); ++s) {
      const int x = distinct[s];
      const int nx = idx.count(x);
      if (nx >= 2) {
        const auto rest = idx.without(x).without(x);
        out.add(rest, a * f / monomial_factor(rest) * (0.5 * nx * (nx - 1)) * c(x, x));
      }
      for (std::size_t t = s + 1; t < distinct.size(); ++t) {
        const int y = distinct[t];
        const auto rest = idx.without(x).without(y);
        const Complex cxy = 0.5 * (c(x, y) + c(y, x));
        out.add(rest, a * f / monomial_factor(rest) * double(nx * idx.count(y)) * cxy);
      }
    }
  }
  return out;
}

FockVector exp_pair_annihilate(const Eigen::MatrixXcd& c, const FockVector& v) {
  FockVector total = v;
  FockVector term = v;
  for (int k = 1; term.max_particles() >= 2; ++k) {
    term = pair_annihilate(c, term);
    term *= 1.0 / k;
    total += term;
  }
  return total;
}

// ---- slot tensors ----

SlotTensor SlotTensor::product(const std::vector<FockVector>& factors) {
  SlotTensor t(static_cast<int>(factors.size()));
  std::vector<std::pair<Key, Complex>> acc{{Key{}, Complex(1.0)}};
  for (const auto& f : factors) {
    std::vector<std::pair<Key, Complex>> next;
    for (const auto& [k, a] : acc)
      for (const auto& [idx, b] : f.sorted()) {
        auto k2 = k;
        k2.push_back(idx);
        next.emplace_back(std::move(k2), a * b);
      }
    acc = std::move(next);
  }
  for (const auto& [k, a] : acc) t.add(k, a);
  return t;
}

void SlotTensor::add(const Key& k, Complex a) {
  if (static_cast<int>(k.size()) != slots_) throw UsageError("slot tensor key has " + std::to_string(k.size()) + " slots, expected " + std::to_string(slots_));
  terms_[k] += a;
}

SlotTensor cross_annihilate(const Eigen::MatrixXcd& c, int i, int j, const SlotTensor& t) {
  SlotTensor out(t.slots());
  for (const auto& [key, a] : t.terms()) {
    const auto& u = key[i];
    const auto& w = key[j];
    if (u.particles() == 0 || w.particles() == 0) continue;
    const double fu = monomial_factor(u), fw = monomial_factor(w);
    auto mu = u.modes(), mw = w.modes();
    mu.erase(std::unique(mu.begin(), mu.end()), mu.end());
    mw.erase(std::unique(mw.begin(), mw.end()), mw.end());
    for (int x : mu)
      for (int y : mw) {
        auto k2 = key;
        k2[i] = u.without(x);
        k2[j] = w.without(y);
        const double mult = double(u.count(x) * w.count(y)) * fu * fw / (monomial_factor(k2[i]) * monomial_factor(k2[j]));
        out.add(k2, a * mult * c(x, y));
      }
  }
  return out;
}

// ---- the monoid action and n-ary products ----

namespace {

bool linear_fractional(const DiskMap& phi) { return phi.is_mobius() || phi.is_affine(); }

struct SlotAction {
  Eigen::MatrixXcd rho;
  Eigen::MatrixXcd contraction;
  bool has_contraction = false;
  std::map<OccupationIndex, FockVector> cache;

  SlotAction(const DiskMap& phi, int N) : rho(rho_cl_matrix(phi, N).entries) {
    if (!linear_fractional(phi)) {
      contraction = contraction_functional(phi, N);
      has_contraction = true;
    }
  }

  FockVector apply(const FockVector& v) const {
    return lift_one_body(rho, has_contraction ? exp_pair_annihilate(contraction, v) : v);
  }

  const FockVector& image(const OccupationIndex& idx, int N, int P) {
    auto it = cache.find(idx);
    if (it == cache.end()) it = cache.emplace(idx, apply(FockVector::basis(N, P, idx))).first;
    return it->second;
  }
};

using Term = std::pair<SlotTensor::Key, Complex>;

FockVector fold(const std::vector<Term>& terms, std::size_t b, std::size_t e, std::size_t slot,
                std::vector<SlotAction>& actions, int N, int P) {
  if (slot == actions.size()) {
    Complex s = 0.0;
    for (std::size_t k = b; k < e; ++k) s += terms[k].second;
    FockVector v(N, P);
    v.add(OccupationIndex(), s);
    return v;
  }
  FockVector out(N, P);
  std::size_t g = b;
  while (g < e) {
    const auto& head = terms[g].first[slot];
    std::size_t h = g;
    while (h < e && terms[h].first[slot] == head) ++h;
    const auto tail = fold(terms, g, h, slot + 1, actions, N, P);
    out += merge(actions[slot].image(head, N, P), tail);
    g = h;
  }
  return out;
}

}  // namespace

FockVector rho1(const DiskMap& phi, const FockVector& v) {
  SlotAction act(phi, v.modes());
  return act.apply(v);
}

FockVector rho_n(const Configuration& config, const std::vector<FockVector>& inputs, const RhoOptions& opt) {
  const int n = static_cast<int>(config.size());
  if (static_cast<int>(inputs.size()) != n)
    throw UsageError("rho_n: " + std::to_string(inputs.size()) + " inputs for " + std::to_string(n) + " maps");
  if (!config.hs_certified()) throw ConfigurationError("rho_n: configuration has touching or unproven pairs");
  const int N = opt.modes, P = opt.particles;
  if (n == 0) return FockVector::vacuum(N, P);
  std::vector<FockVector> ins;
  for (const auto& v : inputs) {
    if (v.modes() > N) throw CutoffError("rho_n: input carries more modes than the run cutoff");
    ins.push_back(v.recut(N, kMaxParticles));
  }

  SlotTensor total = SlotTensor::product(ins);
  {
    std::vector<std::tuple<int, int, Eigen::MatrixXcd>> pairs;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j, pair_functional(config.maps()[i], config.maps()[j], N));
    SlotTensor term = total;
    for (int k = 1;; ++k) {
      SlotTensor next(n);
      for (const auto& [i, j, c] : pairs) {
        const auto contracted = cross_annihilate(c, i, j, term);
        for (const auto& [key, a] : contracted.terms()) next.add(key, a / double(k));
      }
      if (next.terms().empty()) break;
      for (const auto& [key, a] : next.terms()) total.add(key, a);
      term = std::move(next);
    }
  }

  std::vector<SlotAction> actions;
  for (const auto& g : config.maps()) actions.emplace_back(g, N);
  const std::vector<Term> terms(total.terms().begin(), total.terms().end());
  // Slot images are computed with the full particle capacity; the cutoff P
  // applies to the merged result.
  auto out = fold(terms, 0, terms.size(), 0, actions, N, kMaxParticles);
  FockVector res(N, P);
  long dropped = out.dropped();
  for (const auto& [idx, a] : out.table()) {
    if (idx.particles() > P) {
      ++dropped;
      continue;
    }
    res.add(idx, a);
  }
  res.add_dropped(dropped);
  return res;
}

FockVector scale_by_sector_norm(const FockVector& v, int power) {
  FockVector out(v.modes(), v.particle_cutoff());
  out.add_dropped(v.dropped());
  for (const auto& [idx, a] : v.table()) out.add(idx, a * std::pow(std::sqrt(factorial(idx.particles())), power));
  return out;
}

FockVector rho_n_normalized(const Configuration& config, const std::vector<FockVector>& inputs,
                            const RhoOptions& opt) {
  std::vector<FockVector> ins;
  for (const auto& v : inputs) ins.push_back(scale_by_sector_norm(v, -1));
  return scale_by_sector_norm(rho_n(config, ins, opt), 1);
}

TraceReport dilation_trace(double r, int N, int P) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("dilation_trace needs 0 < r < 1");
  if (N < 1 || P < 0) throw UsageError("dilation_trace: bad cutoffs");
  // dp[p]: weighted count of states with p particles in the modes seen so far
  std::vector<double> dp(P + 1, 0.0);
  dp[0] = 1.0;
  for (int i = 0; i < N; ++i) {
    const double x = std::pow(r, i + 1);
    std::vector<double> next(P + 1, 0.0);
    for (int p = 0; p <= P; ++p) {
      double xk = 1.0;
      for (int k = 0; p + k <= P; ++k) {
        next[p + k] += dp[p] * xk;
        xk *= x;
      }
    }
    dp = std::move(next);
  }
  TraceReport rep;
  for (double d : dp) rep.sum += d;
  rep.product = 1.0;
  for (int n = 1; n <= N; ++n) rep.product /= 1.0 - std::pow(r, n);
  rep.gap = rep.product - rep.sum;
  // States with more than P particles, bounded by t^{-(P+1)} prod 1/(1 - t r^n)
  // for any 1 <= t < 1/r.
  double best = INFINITY;
  for (int k = 1; k < 2000; ++k) {
    const double t = 1.0 + (1.0 / r - 1.0) * k / 2000.0;
    double v = std::pow(t, -(P + 1));
    for (int n = 1; n <= N; ++n) v /= 1.0 - t * std::pow(r, n);
    best = std::min(best, v);
  }
  rep.tail_bound = best;
  return rep;
}

}  // namespace ce2
