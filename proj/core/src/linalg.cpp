#include "qdb/linalg.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace qdb {

namespace {

bool all_finite(const ComplexMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

void require_square_nonempty(const ComplexMatrix& m, const char* who) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << who << ": expected a non-empty square matrix, got " << m.rows()
        << "x" << m.cols();
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

double norm_squared(const ComplexVector& v) {
  if (!(v.real().allFinite() && v.imag().allFinite())) {
    throw std::invalid_argument("norm_squared: vector has non-finite entries");
  }
  return v.squaredNorm();
}

HermitianMatrix::HermitianMatrix(ComplexMatrix entries)
    : entries_(std::move(entries)) {
  require_square_nonempty(entries_, "HermitianMatrix");
  if (!all_finite(entries_)) {
    throw std::invalid_argument("HermitianMatrix: non-finite entries");
  }
  const double deviation =
      (entries_ - entries_.adjoint().eval()).cwiseAbs().maxCoeff();
  if (deviation > kHermitianTol) {
    std::ostringstream msg;
    msg << "HermitianMatrix: entry(i,j) must equal conj(entry(j,i)); max "
           "deviation "
        << deviation << " exceeds " << kHermitianTol;
    throw std::invalid_argument(msg.str());
  }
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix entries)
    : entries_(std::move(entries)) {
  require_square_nonempty(entries_, "UnitaryMatrix");
  if (!all_finite(entries_)) {
    throw std::invalid_argument("UnitaryMatrix: non-finite entries");
  }
  const ComplexMatrix gram = entries_.adjoint() * entries_;
  const double deviation =
      (gram - ComplexMatrix::Identity(entries_.rows(), entries_.cols()))
          .cwiseAbs()
          .maxCoeff();
  if (deviation > kUnitaryTol) {
    std::ostringstream msg;
    msg << "UnitaryMatrix: U†U deviates from identity by " << deviation
        << ", exceeds " << kUnitaryTol;
    throw std::invalid_argument(msg.str());
  }
}

TransitionMatrix::TransitionMatrix(RealMatrix entries)
    : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw std::invalid_argument(
        "TransitionMatrix: expected a non-empty square matrix");
  }
  if (!entries_.allFinite()) {
    throw std::invalid_argument("TransitionMatrix: non-finite entries");
  }
  if (entries_.minCoeff() < -kStochasticTol ||
      entries_.maxCoeff() > 1.0 + kStochasticTol) {
    throw std::invalid_argument(
        "TransitionMatrix: entries must lie in [0, 1]");
  }
  const double row_dev = (entries_.rowwise().sum().array() - 1.0).abs().maxCoeff();
  const double col_dev = (entries_.colwise().sum().array() - 1.0).abs().maxCoeff();
  if (row_dev > kStochasticTol || col_dev > kStochasticTol) {
    std::ostringstream msg;
    msg << "TransitionMatrix: not doubly stochastic (row deviation " << row_dev
        << ", column deviation " << col_dev << ")";
    throw std::invalid_argument(msg.str());
  }
}

UnitaryMatrix matrix_exponential_unitary(const HermitianMatrix& h, double t) {
  if (!std::isfinite(t)) {
    throw std::invalid_argument("matrix_exponential_unitary: t must be finite");
  }
  const ComplexMatrix& m = h.entries();
  const Eigen::Index n = m.rows();

  const auto phases = [t](const Eigen::VectorXd& eigenvalues) {
    ComplexVector p(eigenvalues.size());
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k) {
      p(k) = std::polar(1.0, -eigenvalues(k) * t);
    }
    return p;
  };

  ComplexMatrix u(n, n);
  if (m.imag().cwiseAbs().maxCoeff() == 0.0) {
    // Every Hamiltonian in this model is real symmetric; the real solver is
    // faster and yields exactly real eigenvectors.
    Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m.real());
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error(
          "matrix_exponential_unitary: eigendecomposition failed");
    }
    const ComplexMatrix v = solver.eigenvectors().cast<Complex>();
    u = v * phases(solver.eigenvalues()).asDiagonal() * v.transpose();
  } else {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
    if (solver.info() != Eigen::Success) {
      throw std::runtime_error(
          "matrix_exponential_unitary: eigendecomposition failed");
    }
    const ComplexMatrix& v = solver.eigenvectors();
    u = v * phases(solver.eigenvalues()).asDiagonal() * v.adjoint();
  }
  return UnitaryMatrix(std::move(u));
}

TransitionMatrix transition_matrix(const UnitaryMatrix& u) {
  return TransitionMatrix(u.entries().cwiseAbs2());
}

}  // namespace qdb
