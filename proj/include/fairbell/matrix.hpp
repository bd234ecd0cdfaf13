// Copyright 2026 The fairbell authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Finite-dimensional complex linear algebra foundation: Hermitian operators,
// positivity checks, spectral and singular-value decompositions, and tensor
// products. Everything here is dense and small (dimension <= 8); values are
// immutable after construction and safe to share across threads.

#ifndef FAIRBELL_MATRIX_HPP_
#define FAIRBELL_MATRIX_HPP_

#include <algorithm>
#include <cmath>
#include <complex>
#include <initializer_list>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "fairbell/errors.hpp"

namespace fairbell {

using Cx = std::complex<double>;
using EigenMatrix = Eigen::MatrixXcd;
using EigenVector = Eigen::VectorXcd;

namespace ops {

// Tolerances shared across the library. Dimensions never exceed 8, so double
// precision leaves orders of magnitude of slack around each of these.
inline constexpr double kHermiticityTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;
inline constexpr double kSingularFloor = 1e-10;
inline constexpr double kDecompositionResidual = 1e-8;

// Dense complex matrix with validated finite entries. Thin value wrapper over
// the Eigen carrier; construction order for flat input is row-major.
class ComplexMatrix {
 public:
  ComplexMatrix(int rows, int cols, const std::vector<Cx>& row_major_entries)
      : m_(rows, cols) {
    if (rows <= 0 || cols <= 0) {
      throw DomainError("ComplexMatrix: dimensions must be positive");
    }
    if (static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) !=
        row_major_entries.size()) {
      throw DimensionMismatch("ComplexMatrix: rows*cols != entry count");
    }
    for (int i = 0; i < rows; ++i) {
      for (int j = 0; j < cols; ++j) {
        m_(i, j) = row_major_entries[static_cast<std::size_t>(i) * cols + j];
      }
    }
    check_finite();
  }

  explicit ComplexMatrix(EigenMatrix m) : m_(std::move(m)) {
    if (m_.rows() <= 0 || m_.cols() <= 0) {
      throw DomainError("ComplexMatrix: dimensions must be positive");
    }
    check_finite();
  }

  int rows() const { return static_cast<int>(m_.rows()); }
  int cols() const { return static_cast<int>(m_.cols()); }
  Cx entry(int i, int j) const { return m_(i, j); }
  const EigenMatrix& eigen() const { return m_; }

 private:
  void check_finite() const {
    for (int i = 0; i < m_.rows(); ++i) {
      for (int j = 0; j < m_.cols(); ++j) {
        if (!std::isfinite(m_(i, j).real()) || !std::isfinite(m_(i, j).imag())) {
          throw DomainError("ComplexMatrix: non-finite entry at (" +
                            std::to_string(i) + "," + std::to_string(j) + ")");
        }
      }
    }
  }

  EigenMatrix m_;
};

// Largest entrywise |.| over a matrix; scale reference for relative checks.
inline double max_abs(const EigenMatrix& m) {
  double best = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      best = std::max(best, std::abs(m(i, j)));
    }
  }
  return best;
}

// Square matrix with max|A - A^dag| <= herm_tol entrywise. The stored matrix
// is symmetrized on construction so downstream algebra sees an exactly
// Hermitian operand.
class HermitianOperator {
 public:
  explicit HermitianOperator(const ComplexMatrix& m,
                             double herm_tol = kHermiticityTol)
      : m_((m.eigen() + m.eigen().adjoint()) / 2.0) {
    if (m.rows() != m.cols()) {
      throw DimensionMismatch("HermitianOperator: matrix must be square");
    }
    const double residual = max_abs(m.eigen() - m.eigen().adjoint());
    if (residual > herm_tol) {
      throw DomainError("HermitianOperator: hermiticity residual " +
                        std::to_string(residual) + " exceeds tolerance");
    }
  }

  explicit HermitianOperator(const EigenMatrix& m,
                             double herm_tol = kHermiticityTol)
      : HermitianOperator(ComplexMatrix(m), herm_tol) {}

  int dim() const { return static_cast<int>(m_.rows()); }
  ComplexMatrix matrix() const { return ComplexMatrix(m_); }
  const EigenMatrix& eigen() const { return m_; }

 private:
  EigenMatrix m_;
};

// Eigendecomposition of a Hermitian operator. Columns of `vectors` are
// orthonormal, `values` is sorted descending. Ties (within 1e-12 of each
// other) are broken lexicographically on the phase-canonicalized eigenvector
// entries so that repeated runs and degenerate spectra order identically.
struct EigResult {
  Eigen::VectorXd values;
  EigenMatrix vectors;
};

namespace detail {

// Rotates a unit column so its first entry of magnitude > 1e-12 is real and
// positive. Eigen's eigenvector phases are otherwise arbitrary.
inline void canonicalize_phase(Eigen::Ref<EigenVector> v) {
  for (int i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > 1e-12) {
      const Cx phase = std::conj(v(i)) / mag;
      v *= phase;
      return;
    }
  }
}

inline bool lex_less(const EigenVector& a, const EigenVector& b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a(i).real() != b(i).real()) return a(i).real() < b(i).real();
    if (a(i).imag() != b(i).imag()) return a(i).imag() < b(i).imag();
  }
  return false;
}

}  // namespace detail

inline EigResult eig_hermitian(const HermitianOperator& op) {
  Eigen::SelfAdjointEigenSolver<EigenMatrix> solver(op.eigen());
  if (solver.info() != Eigen::Success) {
    throw NonConvergence("eig_hermitian: solver failed to converge");
  }
  const int n = op.dim();
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);

  EigenMatrix vecs = solver.eigenvectors();
  for (int i = 0; i < n; ++i) {
    detail::canonicalize_phase(vecs.col(i));
  }
  const Eigen::VectorXd& vals = solver.eigenvalues();
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    if (std::abs(vals(i) - vals(j)) > 1e-12) return vals(i) > vals(j);
    return detail::lex_less(vecs.col(i), vecs.col(j));
  });

  EigResult out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values(k) = vals(order[k]);
    out.vectors.col(k) = vecs.col(order[k]);
  }
  return out;
}

// Hermitian operator whose eigenvalues lie in [-psd_tol, 1 + psd_tol]: a
// POVM element (or a success operator, which is a sum of two of them).
class PovmElement {
 public:
  explicit PovmElement(HermitianOperator op, double psd_tol = kPsdTol)
      : op_(std::move(op)) {
    const EigResult eig = eig_hermitian(op_);
    const double lo = eig.values(op_.dim() - 1);
    const double hi = eig.values(0);
    if (lo < -psd_tol) {
      throw DomainError("PovmElement: eigenvalue " + std::to_string(lo) +
                        " below -psd tolerance");
    }
    if (hi > 1.0 + psd_tol) {
      throw DomainError("PovmElement: eigenvalue " + std::to_string(hi) +
                        " above 1 + psd tolerance");
    }
  }

  int dim() const { return op_.dim(); }
  const HermitianOperator& op() const { return op_; }
  const EigenMatrix& eigen() const { return op_.eigen(); }

 private:
  HermitianOperator op_;
};

// Kronecker product. Hermiticity is preserved exactly: conj(x*y) equals
// conj(x)*conj(y) under IEEE arithmetic, entry by entry.
inline HermitianOperator tensor_product(const HermitianOperator& a,
                                        const HermitianOperator& b) {
  const int da = a.dim();
  const int db = b.dim();
  EigenMatrix out(da * db, da * db);
  for (int i = 0; i < da; ++i) {
    for (int j = 0; j < da; ++j) {
      for (int k = 0; k < db; ++k) {
        for (int l = 0; l < db; ++l) {
          out(i * db + k, j * db + l) = a.eigen()(i, j) * b.eigen()(k, l);
        }
      }
    }
  }
  return HermitianOperator(ComplexMatrix(std::move(out)), 0.0);
}

// Singular value decomposition m = U diag(S) V^dag, S descending.
struct SvdResult {
  EigenMatrix u;
  Eigen::VectorXd s;
  EigenMatrix v;
};

inline SvdResult svd(const ComplexMatrix& m) {
  Eigen::JacobiSVD<EigenMatrix> solver(m.eigen(),
                                       Eigen::ComputeFullU | Eigen::ComputeFullV);
  SvdResult out;
  out.u = solver.matrixU();
  out.s = solver.singularValues();
  out.v = solver.matrixV();
  return out;
}

// Inverse square root of a strictly positive operator: X with X*op*X = I.
// Eigenvalues below `floor` signal complete loss in some direction and are
// rejected rather than regularized.
inline HermitianOperator psd_inv_sqrt(const PovmElement& op,
                                      double floor_value = kSingularFloor) {
  const EigResult eig = eig_hermitian(op.op());
  const int n = op.dim();
  Eigen::VectorXd inv_sqrt(n);
  for (int i = 0; i < n; ++i) {
    if (eig.values(i) < floor_value) {
      throw SingularOperator("psd_inv_sqrt: eigenvalue " +
                             std::to_string(eig.values(i)) + " below floor " +
                             std::to_string(floor_value));
    }
    inv_sqrt(i) = 1.0 / std::sqrt(eig.values(i));
  }
  EigenMatrix x =
      eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.adjoint();
  // Symmetrize away the O(eps) drift of the triple product.
  x = (x + x.adjoint()) / 2.0;
  return HermitianOperator(ComplexMatrix(std::move(x)), kHermiticityTol);
}

// Square root of a positive semidefinite operator; eigenvalues within psd
// tolerance below zero are clamped to zero, anything lower is rejected.
inline HermitianOperator psd_sqrt(const HermitianOperator& op,
                                  double psd_tol = kPsdTol) {
  const EigResult eig = eig_hermitian(op);
  const int n = op.dim();
  Eigen::VectorXd root(n);
  for (int i = 0; i < n; ++i) {
    if (eig.values(i) < -psd_tol) {
      throw DomainError("psd_sqrt: operator not positive semidefinite");
    }
    root(i) = std::sqrt(std::max(eig.values(i), 0.0));
  }
  EigenMatrix x = eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
  x = (x + x.adjoint()) / 2.0;
  return HermitianOperator(ComplexMatrix(std::move(x)), kHermiticityTol);
}

// Spectral sign V sign(diag) V^dag; eigenvalues within zero_tol of zero map
// to zero. This is the maximizer of Tr[V E] over Hermitian -I <= V <= I.
inline HermitianOperator spectral_sign(const HermitianOperator& op,
                                       double zero_tol = 1e-14) {
  const EigResult eig = eig_hermitian(op);
  const int n = op.dim();
  Eigen::VectorXd sign(n);
  for (int i = 0; i < n; ++i) {
    sign(i) = eig.values(i) > zero_tol ? 1.0
              : eig.values(i) < -zero_tol ? -1.0
                                          : 0.0;
  }
  EigenMatrix x = eig.vectors * sign.asDiagonal() * eig.vectors.adjoint();
  x = (x + x.adjoint()) / 2.0;
  return HermitianOperator(ComplexMatrix(std::move(x)), kHermiticityTol);
}

// Tr(a * rho). `rho` must be a state (trace 1, PSD is the caller's invariant);
// the imaginary residue must vanish within 1e-10 and is then discarded.
inline double expectation(const HermitianOperator& a,
                          const HermitianOperator& rho) {
  if (a.dim() != rho.dim()) {
    throw DimensionMismatch("expectation: operator dim " +
                            std::to_string(a.dim()) + " vs state dim " +
                            std::to_string(rho.dim()));
  }
  const Cx t = (a.eigen() * rho.eigen()).trace();
  if (std::abs(t.imag()) > 1e-10) {
    throw DomainError("expectation: imaginary residue " +
                      std::to_string(t.imag()));
  }
  return t.real();
}

// Trace over the first tensor factor of a (d1*d2)-dimensional operator.
inline EigenMatrix partial_trace_first(const EigenMatrix& m, int d1, int d2) {
  EigenMatrix out = EigenMatrix::Zero(d2, d2);
  for (int i = 0; i < d1; ++i) {
    for (int j = 0; j < d2; ++j) {
      for (int l = 0; l < d2; ++l) {
        out(j, l) += m(i * d2 + j, i * d2 + l);
      }
    }
  }
  return out;
}

// Trace over the second tensor factor.
inline EigenMatrix partial_trace_second(const EigenMatrix& m, int d1, int d2) {
  EigenMatrix out = EigenMatrix::Zero(d1, d1);
  for (int i = 0; i < d1; ++i) {
    for (int k = 0; k < d1; ++k) {
      for (int j = 0; j < d2; ++j) {
        out(i, k) += m(i * d2 + j, k * d2 + j);
      }
    }
  }
  return out;
}

// Convenience constructors used throughout the library and tests.

inline HermitianOperator identity_op(int n) {
  return HermitianOperator(ComplexMatrix(EigenMatrix::Identity(n, n)), 0.0);
}

inline HermitianOperator zero_op(int n) {
  return HermitianOperator(ComplexMatrix(EigenMatrix::Zero(n, n)), 0.0);
}

inline HermitianOperator diag_op(const std::vector<double>& d) {
  EigenMatrix m = EigenMatrix::Zero(static_cast<int>(d.size()),
                                    static_cast<int>(d.size()));
  for (std::size_t i = 0; i < d.size(); ++i) {
    m(static_cast<int>(i), static_cast<int>(i)) = d[i];
  }
  return HermitianOperator(ComplexMatrix(std::move(m)), 0.0);
}

inline HermitianOperator pauli_x() {
  return HermitianOperator(
      ComplexMatrix(2, 2, {Cx(0, 0), Cx(1, 0), Cx(1, 0), Cx(0, 0)}), 0.0);
}

inline HermitianOperator pauli_y() {
  return HermitianOperator(
      ComplexMatrix(2, 2, {Cx(0, 0), Cx(0, -1), Cx(0, 1), Cx(0, 0)}), 0.0);
}

inline HermitianOperator pauli_z() {
  return HermitianOperator(
      ComplexMatrix(2, 2, {Cx(1, 0), Cx(0, 0), Cx(0, 0), Cx(-1, 0)}), 0.0);
}

// |v><v| for a (not necessarily normalized) ket.
inline HermitianOperator projector(const EigenVector& v) {
  EigenMatrix m = v * v.adjoint();
  m = (m + m.adjoint()) / 2.0;
  return HermitianOperator(ComplexMatrix(std::move(m)), kHermiticityTol);
}

// Kronecker product of kets.
inline EigenVector kron_vec(const EigenVector& a, const EigenVector& b) {
  EigenVector out(a.size() * b.size());
  for (int i = 0; i < a.size(); ++i) {
    for (int j = 0; j < b.size(); ++j) {
      out(i * b.size() + j) = a(i) * b(j);
    }
  }
  return out;
}

}  // namespace ops
}  // namespace fairbell

#endif  // FAIRBELL_MATRIX_HPP_
