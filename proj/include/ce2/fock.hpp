#pragma once
// Bosonic Fock space over the truncated Bergman modes.
//
// Basis: e^_nu = sqrt(p!/prod nu_i!) S(e_0^{nu_0} ... ), orthonormal.
// Internally several operators switch to "monomial" coordinates, where
// the state S(e_{i1} x ... x e_{ip}) is the monomial x_{i1}...x_{ip}; the
// conversion factor is sqrt(p!/prod nu_i!).

#include <array>
#include <cstdint>
#include <map>
#include <unordered_map>
#include <vector>

#include "ce2/bergman.hpp"

namespace ce2 {

constexpr int kMaxParticles = 16;
constexpr int kMaxModes = 255;

// Multiset of occupied modes, stored as an ascending list.
class OccupationIndex {
 public:
  OccupationIndex() { modes_.fill(0); }
  static OccupationIndex from_modes(std::vector<int> modes);
  static OccupationIndex from_occupations(const std::vector<int>& nu);

  int particles() const { return size_; }
  int mode(int k) const { return modes_[k]; }
  std::vector<int> modes() const { return {modes_.begin(), modes_.begin() + size_}; }
  std::vector<int> occupations(int N) const;
  int max_mode() const { return size_ ? modes_[size_ - 1] : -1; }
  int count(int mode) const;
  // prod nu_i!
  double occupation_factorial() const;

  OccupationIndex with(int mode) const;
  OccupationIndex without(int mode) const;  // removes one copy; mode must be present
  OccupationIndex merged(const OccupationIndex& o) const;

  bool operator==(const OccupationIndex& o) const { return size_ == o.size_ && modes_ == o.modes_; }
  // Canonical order: particle number, then lexicographic on occupation vectors.
  bool operator<(const OccupationIndex& o) const;

  std::size_t hash() const;

 private:
  std::array<std::uint8_t, kMaxParticles> modes_;
  std::uint8_t size_ = 0;
};

struct OccupationHash {
  std::size_t operator()(const OccupationIndex& i) const { return i.hash(); }
};

class FockVector {
 public:
  using Table = std::unordered_map<OccupationIndex, Complex, OccupationHash>;

  FockVector() = default;
  FockVector(int modes, int particles);
  static FockVector vacuum(int modes, int particles);
  static FockVector basis(int modes, int particles, const OccupationIndex& idx, Complex amp = 1.0);

  int modes() const { return modes_; }
  int particle_cutoff() const { return particles_; }
  long dropped() const { return dropped_; }
  void add_dropped(long n) { dropped_ += n; }

  const Table& table() const { return amps_; }
  Complex amp(const OccupationIndex& idx) const;
  Complex vacuum_amp() const { return amp(OccupationIndex()); }
  void add(const OccupationIndex& idx, Complex a);

  std::vector<std::pair<OccupationIndex, Complex>> sorted() const;
  double norm() const;
  int max_particles() const;

  FockVector& operator+=(const FockVector& o);
  FockVector& operator-=(const FockVector& o);
  FockVector& operator*=(Complex k);
  friend FockVector operator+(FockVector a, const FockVector& b) { return a += b; }
  friend FockVector operator-(FockVector a, const FockVector& b) { return a -= b; }
  friend FockVector operator*(Complex k, FockVector a) { return a *= k; }

  // Drop amplitudes with |a| <= tol.
  FockVector pruned(double tol = 0.0) const;
  // Same amplitudes on a different mode/particle cutoff; anything that no
  // longer fits is discarded.
  FockVector recut(int modes, int particles) const;

 private:
  int modes_ = 0;
  int particles_ = 0;
  long dropped_ = 0;
  Table amps_;
};

// 2-norm of the coordinate difference.
double distance(const FockVector& a, const FockVector& b);

// ON <-> monomial coordinate factor sqrt(p!/prod nu!).
double monomial_factor(const OccupationIndex& idx);

// e^_nu x e^_mu -> kappa(nu, mu) e^_{nu+mu}
double merge_factor(const OccupationIndex& nu, const OccupationIndex& mu);
FockVector merge(const FockVector& u, const FockVector& w);

FockVector lift_one_body(const Eigen::MatrixXcd& M, const FockVector& v);
inline FockVector lift_one_body(const ActionMatrix& M, const FockVector& v) { return lift_one_body(M.entries, v); }

// One-slot contraction: sum over unordered particle pairs.
FockVector pair_annihilate(const Eigen::MatrixXcd& c, const FockVector& v);

// Elements of A^{x n}: sums of products of basis states, one per slot.
class SlotTensor {
 public:
  using Key = std::vector<OccupationIndex>;
  SlotTensor() = default;
  explicit SlotTensor(int slots) : slots_(slots) {}
  static SlotTensor product(const std::vector<FockVector>& factors);

  int slots() const { return slots_; }
  const std::map<Key, Complex>& terms() const { return terms_; }
  void add(const Key& k, Complex a);

 private:
  int slots_ = 0;
  std::map<Key, Complex> terms_;
};

// Cross-slot contraction C^{i,j}: c is indexed (mode in slot i, mode in slot j).
SlotTensor cross_annihilate(const Eigen::MatrixXcd& c, int slot_i, int slot_j, const SlotTensor& t);

// exp of the one-slot contraction.
FockVector exp_pair_annihilate(const Eigen::MatrixXcd& c, const FockVector& v);

FockVector rho1(const DiskMap& phi, const FockVector& v);

struct RhoOptions {
  int modes = 48;
  int particles = 6;
};

FockVector rho_n(const Configuration& config, const std::vector<FockVector>& inputs, const RhoOptions& opt);
FockVector rho_n_normalized(const Configuration& config, const std::vector<FockVector>& inputs,
                            const RhoOptions& opt);

// Multiply each p-particle sector by sqrt(p!)^power.
FockVector scale_by_sector_norm(const FockVector& v, int power);

struct TraceReport {
  double sum = 0.0;        // truncated trace over occupation indices
  double product = 0.0;    // prod_{n=1}^{N} 1/(1 - r^n)
  double gap = 0.0;        // product - sum
  double tail_bound = 0.0; // bound on the states cut by the particle limit
};

TraceReport dilation_trace(double r, int N, int P);

}  // namespace ce2
