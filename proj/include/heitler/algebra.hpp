#pragma once

// Dense complex-matrix kernel shared by the model builders and the numeric
// oracle. Everything is templated on the real scalar so the same code runs in
// double or long double.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "heitler/errors.hpp"

namespace heitler {

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using CMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

using CMatrixd = CMatrix<double>;
using CVectord = CVector<double>;

/// Number of bosonic levels kept for the sensor mode.
struct FockTruncation {
  int n_max = 3;
};

inline void validate(const FockTruncation& trunc) {
  if (trunc.n_max < 2) {
    throw ConfigError("Fock truncation needs n_max >= 2, got " +
                      std::to_string(trunc.n_max));
  }
}

template <typename Real>
struct Ladder {
  CMatrix<Real> lower;
  CMatrix<Real> raise;
};

/// Pseudo-spin lowering/raising pair in the basis {|g>, |e>}.
template <typename Real = double>
Ladder<Real> sigma_ops() {
  CMatrix<Real> lower = CMatrix<Real>::Zero(2, 2);
  lower(0, 1) = Real(1);
  return {lower, lower.adjoint()};
}

/// Truncated bosonic ladder: a|n> = sqrt(n)|n-1> for n < n_max.
template <typename Real = double>
Ladder<Real> boson_ops(const FockTruncation& trunc) {
  validate(trunc);
  const int n = trunc.n_max;
  CMatrix<Real> lower = CMatrix<Real>::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    lower(k - 1, k) = std::sqrt(Real(k));
  }
  return {lower, lower.adjoint()};
}

template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * b.rows(),
                                                            a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  typename Eigen::NumTraits<typename Derived::Scalar>::Real tol) {
  if (m.rows() != m.cols()) return false;
  if (m.size() == 0) return true;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() < tol;
}

template <typename Real>
struct Jump {
  Real rate;
  CMatrix<Real> op;
};

/// Column-stacking vectorization: vec(X) stacks the columns of X, so
/// vec(A X B) = (B^T kron A) vec(X).
template <typename Derived>
CVector<typename Eigen::NumTraits<typename Derived::Scalar>::Real> vec(
    const Eigen::MatrixBase<Derived>& m) {
  using Real = typename Eigen::NumTraits<typename Derived::Scalar>::Real;
  CMatrix<Real> plain = m;
  return Eigen::Map<const CVector<Real>>(plain.data(), plain.size());
}

template <typename Real>
CMatrix<Real> unvec(const CVector<Real>& v, Eigen::Index dim) {
  if (v.size() != dim * dim) {
    throw DimensionError("unvec: vector of size " + std::to_string(v.size()) +
                         " is not a " + std::to_string(dim) + "x" +
                         std::to_string(dim) + " matrix");
  }
  return Eigen::Map<const CMatrix<Real>>(v.data(), dim, dim);
}

/// Lindblad generator in superoperator form. The dynamics is
///   d/dt rho = i[rho, H] + sum_k (rate_k / 2)(2 J rho J^+ - J^+J rho - rho J^+J),
/// and i[rho, H] is the same thing as the more common -i[H, rho].
template <typename Real>
CMatrix<Real> vectorize_superop(const CMatrix<Real>& hamiltonian,
                                const std::vector<Jump<Real>>& jumps) {
  const Eigen::Index d = hamiltonian.rows();
  if (hamiltonian.cols() != d) {
    throw DimensionError("vectorize_superop: Hamiltonian is not square");
  }
  const CMatrix<Real> id = CMatrix<Real>::Identity(d, d);
  const Complex<Real> i_unit(0, 1);

  CMatrix<Real> l = -i_unit * (kron(id, hamiltonian) - kron(hamiltonian.transpose(), id));
  for (const auto& jump : jumps) {
    if (jump.op.rows() != d || jump.op.cols() != d) {
      throw DimensionError("vectorize_superop: jump operator is " +
                           std::to_string(jump.op.rows()) + "x" +
                           std::to_string(jump.op.cols()) + ", expected " +
                           std::to_string(d) + "x" + std::to_string(d));
    }
    const CMatrix<Real> number = jump.op.adjoint() * jump.op;
    l += (jump.rate / Real(2)) *
         (Real(2) * kron(jump.op.conjugate(), jump.op) - kron(id, number) -
          kron(number.transpose(), id));
  }
  return l;
}

/// Trace of the matrix whose column-stacked vectorization is v.
template <typename Real>
Complex<Real> vec_trace(const CVector<Real>& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
  Complex<Real> tr(0);
  for (Eigen::Index k = 0; k < d; ++k) tr += v(k * d + k);
  return tr;
}

/// Kernel of a Liouvillian, returned as vec(rho) with unit trace.
///
/// Uses a full eigendecomposition. The eigenvalue closest to zero must lie
/// within tol * max(1, max|L_ij|) of the origin and must be the only one
/// there; otherwise the steady state does not exist or is not unique.
template <typename Real>
CVector<Real> null_space_vector(const CMatrix<Real>& liouvillian, Real tol = Real(1e-9)) {
  if (liouvillian.rows() != liouvillian.cols() || liouvillian.rows() == 0) {
    throw DimensionError("null_space_vector: Liouvillian must be square and non-empty");
  }
  Eigen::ComplexEigenSolver<CMatrix<Real>> solver(liouvillian, true);
  if (solver.info() != Eigen::Success) {
    throw NumericalError("null_space_vector: eigendecomposition failed");
  }
  const auto& values = solver.eigenvalues();
  const Real bound = tol * std::max(Real(1), liouvillian.cwiseAbs().maxCoeff());

  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < values.size(); ++k) {
    if (std::abs(values(k)) < std::abs(values(best))) best = k;
  }
  if (std::abs(values(best)) > bound) {
    throw NumericalError("no steady state: smallest |eigenvalue| is " +
                         std::to_string(double(std::abs(values(best)))));
  }
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    if (k != best && std::abs(values(k)) <= bound) {
      throw NumericalError("non-unique steady state: degenerate zero eigenvalue");
    }
  }

  CVector<Real> v = solver.eigenvectors().col(best);
  const Complex<Real> tr = vec_trace<Real>(v);
  if (std::abs(tr) == Real(0)) {
    throw NumericalError("null_space_vector: kernel vector is traceless");
  }
  return v / tr;
}

/// Diagonal change of basis |k> -> w_k |k>.
///
/// Steady states of weakly driven systems span many orders of magnitude
/// (sensor populations of order (g Omega)^2n). Writing rho = D rho' D with
/// D = diag(w) brings the unknowns to order one, so the kernel is resolved
/// to full relative precision in every entry. The transformed Liouvillian is
/// the similarity S^-1 L S with S = D kron D; its spectrum is unchanged.
template <typename Real>
class BasisScaling {
 public:
  explicit BasisScaling(RVector<Real> weights) : weights_(std::move(weights)) {
    if ((weights_.array() <= Real(0)).any()) {
      throw ConfigError("BasisScaling: weights must be positive");
    }
  }

  static BasisScaling identity(Eigen::Index dim) {
    return BasisScaling(RVector<Real>::Ones(dim));
  }

  Eigen::Index dim() const { return weights_.size(); }
  const RVector<Real>& weights() const { return weights_; }

  /// S^-1 L S for the superoperator acting on column-stacked vectors.
  CMatrix<Real> conjugate_superop(const CMatrix<Real>& l) const {
    const RVector<Real> s = superop_weights();
    if (l.rows() != s.size() || l.cols() != s.size()) {
      throw DimensionError("BasisScaling: superoperator dimension mismatch");
    }
    CMatrix<Real> out(l.rows(), l.cols());
    for (Eigen::Index j = 0; j < l.cols(); ++j) {
      for (Eigen::Index i = 0; i < l.rows(); ++i) {
        out(i, j) = l(i, j) * (s(j) / s(i));
      }
    }
    return out;
  }

  /// D^-1 A D: the operator that acts on scaled states like A acts on
  /// unscaled ones when sandwiched as A rho A^+.
  CMatrix<Real> conjugate_operator(const CMatrix<Real>& a) const {
    check(a);
    return weights_.cwiseInverse().asDiagonal() * a * weights_.asDiagonal();
  }

  /// D rho' D.
  CMatrix<Real> restore(const CMatrix<Real>& scaled) const {
    check(scaled);
    return weights_.asDiagonal() * scaled * weights_.asDiagonal();
  }

  /// D^-1 rho D^-1.
  CMatrix<Real> scale(const CMatrix<Real>& rho) const {
    check(rho);
    const RVector<Real> inv = weights_.cwiseInverse();
    return inv.asDiagonal() * rho * inv.asDiagonal();
  }

 private:
  RVector<Real> superop_weights() const {
    const Eigen::Index d = weights_.size();
    RVector<Real> s(d * d);
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index i = 0; i < d; ++i) s(j * d + i) = weights_(i) * weights_(j);
    }
    return s;
  }

  void check(const CMatrix<Real>& m) const {
    if (m.rows() != weights_.size() || m.cols() != weights_.size()) {
      throw DimensionError("BasisScaling: operator dimension mismatch");
    }
  }

  RVector<Real> weights_;
};

/// Smallest eigenvalue of the Hermitian part of rho.
template <typename Real>
Real min_eigenvalue(const CMatrix<Real>& rho) {
  const CMatrix<Real> herm = (rho + rho.adjoint()) / Real(2);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> solver(herm, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

/// Throws NumericalError unless rho is Hermitian, has unit trace and no
/// eigenvalue below -tol. Negative eigenvalues are reported, never clipped.
template <typename Real>
void check_density_matrix(const CMatrix<Real>& rho, Real tol = Real(1e-10)) {
  if (!is_hermitian(rho, tol)) {
    throw NumericalError("density matrix is not Hermitian");
  }
  if (std::abs(rho.trace() - Complex<Real>(1)) > tol) {
    throw NumericalError("density matrix trace deviates from one");
  }
  const Real lowest = min_eigenvalue(rho);
  if (lowest < -tol) {
    throw NumericalError("density matrix has negative eigenvalue " +
                         std::to_string(double(lowest)));
  }
}

/// exp(L t) via scaling-and-squaring Pade.
template <typename Real>
CMatrix<Real> propagator(const CMatrix<Real>& l, Real t) {
  const CMatrix<Real> lt = l * Complex<Real>(t);
  return lt.exp();
}

}  // namespace heitler
