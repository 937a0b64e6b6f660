#pragma once

#include <complex>

#include <Eigen/Dense>

namespace qdb {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

// Construction tolerances for the matrix value types below.
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kUnitaryTol = 1e-12;
inline constexpr double kStochasticTol = 1e-10;

// Sum of squared moduli. Rejects vectors with NaN/Inf entries.
double norm_squared(const ComplexVector& v);

// Square matrix with entry(i,j) == conj(entry(j,i)) within kHermitianTol.
// Construction is the single validation point: every operation that needs a
// Hermitian input takes this type.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(ComplexMatrix entries);

  const ComplexMatrix& entries() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

 private:
  ComplexMatrix entries_;
};

// Square matrix with U†U == I within kUnitaryTol (max-entry deviation).
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(ComplexMatrix entries);

  const ComplexMatrix& entries() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

 private:
  ComplexMatrix entries_;
};

// Real matrix of squared moduli of a unitary. Rows and columns each sum to 1
// within kStochasticTol.
class TransitionMatrix {
 public:
  explicit TransitionMatrix(RealMatrix entries);

  const RealMatrix& entries() const { return entries_; }
  Eigen::Index dim() const { return entries_.rows(); }

 private:
  RealMatrix entries_;
};

// e^{-iHt} computed from the self-adjoint eigendecomposition H = VΛV†:
// U = V diag(e^{-iλ_k t}) V†. Exact unitarity up to eigensolver round-off.
UnitaryMatrix matrix_exponential_unitary(const HermitianMatrix& h, double t);

// T(i,j) = |U(i,j)|², the outcome probabilities of u applied to basis states.
TransitionMatrix transition_matrix(const UnitaryMatrix& u);

}  // namespace qdb
