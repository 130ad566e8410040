#pragma once
// Bridge between the Heisenberg algebra and the Fock model: the isometry
// Psi, the normally ordered expansion of Y(r^{L0}v, z) s^{L0} w at z = zeta,
// and the comparison against the operadic product.

#include "ce2/fock.hpp"
#include "ce2/heisenberg.hpp"

namespace ce2 {

// Depth k goes to Bergman mode k-1.
FockVector psi(const HeisenbergVector& v, int N);

// (-1)^i (i+j+1)!/(i!j!) zeta^{-i-j-2}
Complex contraction_coefficient(int i, int j, Complex zeta);

FockVector vertex_side(const HeisenbergVector& v, const HeisenbergVector& w, Complex zeta, double r, double s,
                       int N);

struct VertexImage {
  FockVector coords;  // modes < N
  double tail = 0.0;  // norm of the part living on modes >= N
};

// Same expansion, plus the exact norm of everything the mode cutoff cuts away.
VertexImage vertex_side_with_tail(const HeisenbergVector& v, const HeisenbergVector& w, Complex zeta, double r,
                                  double s, int N);

struct CorrespondenceResult {
  FockVector operadic;
  FockVector vertex;
  double coord_distance = 0.0;
  double tail = 0.0;
  double discrepancy = 0.0;  // sqrt(coord_distance^2 + tail^2)
  long dropped = 0;
};

// Operadic side: normalized product over (B_{zeta,r}, B_{0,s}) of (Psi v, Psi w).
CorrespondenceResult correspondence(const HeisenbergVector& v, const HeisenbergVector& w, Complex zeta, double r,
                                    double s, int N);

struct ConvergenceProfile {
  std::vector<double> terms;         // ||v(m)w||^2 |zeta|^{-2m-2}, from the top mode down
  std::vector<double> partial_sums;
  std::vector<int> modes;            // m for each term
  double ratio = 0.0;                // last nonzero term over the one before
  bool monotone = true;
};

// Supported v: multiples of h(-k)1, which covers L(-1)^l h(-1)1 = l! h(-l-1)1.
ConvergenceProfile norm_convergence_profile(const HeisenbergVector& v, const HeisenbergVector& w, Complex zeta,
                                            int terms);

}  // namespace ce2
