// Pointwise hermitian linear algebra on fiber matrices: PSD tests, adjugate,
// Loewner order and the dual metric matrix.

#pragma once

#include "hermet/grid.hpp"

namespace hermet {

// Scale-invariant default: 1e-9 * (1 + |trace|).
double default_psd_tol(const MatC& a);

// Smallest eigenvalue of a hermitian matrix (input is symmetrized first;
// throws on non-finite entries).
double min_eigenvalue(const MatC& a);
double max_eigenvalue(const MatC& a);

bool is_psd(const MatC& a, double tol);
bool is_psd(const MatC& a);  // default tolerance

// Cofactor transpose; defined for singular matrices. Exact cofactors for
// r <= 4, LU determinant times a refined inverse beyond that.
MatC adjugate(const MatC& a);

// A <= B in the Loewner order: min_eigenvalue(B - A) >= -tol.
bool loewner_leq(const MatC& a, const MatC& b, double tol);

// Matrix of the induced metric on the dual frame, transpose(inverse(a)).
// For every covector xi (acting on vectors as xi(s) = sum xi_i s_i) and every
// vector s: |xi(s)|^2 <= ||xi||^2_dual * ||s||^2_a, with equality at
// s = a^{-1} xi^*; here ||xi||^2_dual = v^* D v with v = conj(xi).
MatC dual_matrix(const MatC& a, double floor_det);

// Largest eigenvalue of the pencil (a, b) with b positive definite,
// i.e. of b^{-1/2} a b^{-1/2}; a is symmetrized first.
double pencil_max_eigenvalue(const MatC& a, const MatC& b);

struct HermitianMatrix {
  MatC m;                   // symmetrized copy
  double herm_defect = 0.0; // Frobenius norm of the applied correction

  explicit HermitianMatrix(const MatC& a, double tol_rel = 1e-12);
};

}  // namespace hermet
