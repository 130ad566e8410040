#pragma once
// One-particle space: coordinates in the orthonormal basis e_n = sqrt(n+1) z^n.

#include <Eigen/Dense>

#include "ce2/cocycle.hpp"

namespace ce2 {

using BergmanVector = Eigen::VectorXcd;

enum class ActionKind { T, rho_cl };

struct ActionMatrix {
  Eigen::MatrixXcd entries;
  ActionKind kind = ActionKind::T;
  int cutoff() const { return static_cast<int>(entries.rows()); }
};

BergmanVector kernel_vector(Complex a, int N);
// d^n/da^n E_a
BergmanVector kernel_derivative(Complex a, int n, int N);
// h_j = sqrt(j+1) e_j = (j+1) z^j
BergmanVector h_vector(int j, int N);

// Monomial coefficients <-> ON coordinates.
BergmanVector from_monomials(const std::vector<Complex>& c, int N);

// (u, v), conjugate-linear in u.
Complex bergman_inner(const BergmanVector& u, const BergmanVector& v);
// f(z) for f given in ON coordinates.
Complex bergman_eval(const BergmanVector& v, Complex z);

// f -> phi' (f∘phi); column m is the image of e_m.
ActionMatrix t_matrix(const DiskMap& phi, int N);
// rho_cl(phi) = T_{J(phi)}^*, truncate-then-adjoint.
ActionMatrix rho_cl_matrix(const DiskMap& phi, int N);

// c(n,m) = d(n,m)/sqrt((n+1)(m+1)) from F_phi; all N x N entries trusted.
Eigen::MatrixXcd contraction_functional(const DiskMap& phi, int N);
// c(n,m) = g(n,m)/sqrt((n+1)(m+1)) from G_{phi,psi}.
Eigen::MatrixXcd pair_functional(const DiskMap& phi, const DiskMap& psi, int N);

}  // namespace ce2
