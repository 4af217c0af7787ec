#include "hermet/hermitian.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace hermet {

namespace {

void check_finite(const MatC& a) {
  if (!a.allFinite()) throw std::invalid_argument("hermitian: non-finite entries");
}

MatC symmetrized(const MatC& a) { return 0.5 * (a + a.adjoint()); }

}  // namespace

double default_psd_tol(const MatC& a) {
  return 1e-9 * (1.0 + std::abs(a.trace().real()));
}

double min_eigenvalue(const MatC& a) {
  check_finite(a);
  if (a.rows() != a.cols()) throw std::invalid_argument("min_eigenvalue: non-square");
  if (a.rows() == 1) return a(0, 0).real();
  if (a.rows() == 2) {
    // Closed form; this path runs once per grid node.
    const double tr = a(0, 0).real() + a(1, 1).real();
    const double det = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)).real();
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    return 0.5 * (tr - disc);
  }
  Eigen::SelfAdjointEigenSolver<MatC> es(symmetrized(a),
                                         Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_eigenvalue(const MatC& a) {
  check_finite(a);
  if (a.rows() == 1) return a(0, 0).real();
  if (a.rows() == 2) {
    const double tr = a(0, 0).real() + a(1, 1).real();
    const double det = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)).real();
    const double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
    return 0.5 * (tr + disc);
  }
  Eigen::SelfAdjointEigenSolver<MatC> es(symmetrized(a),
                                         Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

bool is_psd(const MatC& a, double tol) { return min_eigenvalue(a) >= -tol; }
bool is_psd(const MatC& a) { return is_psd(a, default_psd_tol(a)); }

namespace {

cxd det_recursive(const MatC& a) {
  const int r = static_cast<int>(a.rows());
  if (r == 1) return a(0, 0);
  if (r == 2) return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
  cxd acc(0.0, 0.0);
  for (int j = 0; j < r; ++j) {
    MatC minor(r - 1, r - 1);
    for (int rr = 1; rr < r; ++rr) {
      int cc = 0;
      for (int c = 0; c < r; ++c) {
        if (c == j) continue;
        minor(rr - 1, cc++) = a(rr, c);
      }
    }
    const cxd term = a(0, j) * det_recursive(minor);
    acc += (j % 2 == 0) ? term : -term;
  }
  return acc;
}

}  // namespace

MatC adjugate(const MatC& a) {
  check_finite(a);
  if (a.rows() != a.cols()) throw std::invalid_argument("adjugate: non-square");
  const int r = static_cast<int>(a.rows());
  if (r == 1) return MatC::Identity(1, 1);
  if (r <= 4) {
    MatC adj(r, r);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < r; ++j) {
        MatC minor(r - 1, r - 1);
        int rr = 0;
        for (int row = 0; row < r; ++row) {
          if (row == i) continue;
          int cc = 0;
          for (int col = 0; col < r; ++col) {
            if (col == j) continue;
            minor(rr, cc++) = a(row, col);
          }
          ++rr;
        }
        const cxd cof = det_recursive(minor);
        adj(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
      }
    }
    return adj;
  }
  // det * inverse with one Newton refinement of the inverse, so the identity
  // A * adj(A) = det(A) * I survives small determinants.
  Eigen::PartialPivLU<MatC> lu(a);
  const cxd det = lu.determinant();
  MatC inv = lu.inverse();
  inv = inv * (2.0 * MatC::Identity(a.rows(), a.cols()) - a * inv);
  return det * inv;
}

bool loewner_leq(const MatC& a, const MatC& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("loewner_leq: rank mismatch");
  return min_eigenvalue(b - a) >= -tol;
}

MatC dual_matrix(const MatC& a, double floor_det) {
  check_finite(a);
  if (!(floor_det > 0.0))
    throw std::invalid_argument("dual_matrix: floor must be positive");
  const cxd det = det_recursive(a);
  if (det.real() < floor_det)
    throw std::domain_error("dual_matrix: determinant below floor (singular metric)");
  return a.inverse().transpose();
}

double pencil_max_eigenvalue(const MatC& a, const MatC& b) {
  check_finite(a);
  check_finite(b);
  Eigen::GeneralizedSelfAdjointEigenSolver<MatC> es(symmetrized(a),
                                                    symmetrized(b),
                                                    Eigen::EigenvaluesOnly | Eigen::Ax_lBx);
  return es.eigenvalues().maxCoeff();
}

HermitianMatrix::HermitianMatrix(const MatC& a, double tol_rel) {
  check_finite(a);
  if (a.rows() != a.cols())
    throw std::invalid_argument("HermitianMatrix: non-square");
  const MatC corr = 0.5 * (a - a.adjoint());
  herm_defect = corr.norm();
  if (herm_defect > tol_rel * (1.0 + a.norm()))
    throw std::invalid_argument("HermitianMatrix: input exceeds hermitian tolerance");
  m = 0.5 * (a + a.adjoint());
}

}  // namespace hermet
