#pragma once

#include <Eigen/Dense>

namespace qdb::testing {

// Independent route to e^{-iHt}: truncated power series, no
// eigendecomposition. The series runs on the argument scaled by 2^-s, with s
// chosen so its infinity norm is at most 1, followed by s repeated squarings.
// 30 terms on the scaled argument keep the truncation error below round-off
// for ‖Ht‖ up to 20 and beyond.
Eigen::MatrixXcd series_exponential(const Eigen::MatrixXcd& hamiltonian,
                                    double t, int terms = 30);

}  // namespace qdb::testing
