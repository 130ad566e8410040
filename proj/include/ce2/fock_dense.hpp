#pragma once
// Brute-force tensor model of the symmetric algebra. Small sizes only; used
// to pin down the combinatorial constants of the occupation-basis code.

#include "ce2/fock.hpp"

namespace ce2 {

constexpr int kDenseMaxModes = 6;
constexpr int kDenseMaxRank = 6;

// Full tensor in (C^N)^{x rank}; index of (a_0..a_{rank-1}) is sum a_k N^{rank-1-k}.
struct DenseTensor {
  int modes = 0;
  int rank = 0;
  Eigen::VectorXcd data;

  DenseTensor(int N, int p);
  Complex& at(const std::vector<int>& idx);
  Complex at(const std::vector<int>& idx) const;
};

DenseTensor dense_product(const std::vector<BergmanVector>& vs);
DenseTensor dense_tensor(const DenseTensor& a, const DenseTensor& b);
// Average over all rank! slot permutations.
DenseTensor dense_average(const DenseTensor& t);

// p-particle sector of a FockVector as a symmetric tensor.
DenseTensor dense_from_fock(const FockVector& v, int p);
// Coordinates <e^_nu, t> of a symmetric tensor.
FockVector dense_to_fock(const DenseTensor& t, int particle_cutoff);

// Symmetrized product of one-particle vectors in e^_nu coordinates.
FockVector dense_symmetrize(const std::vector<BergmanVector>& vs, int particle_cutoff = kMaxParticles);

DenseTensor dense_lift(const Eigen::MatrixXcd& M, const DenseTensor& t);
// sum over slot pairs i < j of c(a_i, a_j), remaining slots kept in order
DenseTensor dense_pair_contract(const Eigen::MatrixXcd& c, const DenseTensor& t);
// Slots [0, split) belong to the first factor, [split, rank) to the second;
// contracts one slot of each. The result has split - 1.
DenseTensor dense_cross_contract(const Eigen::MatrixXcd& c, const DenseTensor& t, int split);
// Two-slot coordinates <e^_nu x e^_mu, t> of a tensor symmetric within each factor.
SlotTensor dense_to_slots(const DenseTensor& t, int split);

}  // namespace ce2
