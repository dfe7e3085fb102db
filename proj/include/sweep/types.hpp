#pragma once

#include <Eigen/Dense>

namespace sweep {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// A state in R^d. Entries are expected to be finite.
using Point = Vector;

inline bool all_finite(const Vector& v) { return v.allFinite(); }

/// Spectral norm of a dense matrix (largest singular value).
double spectral_norm(const Matrix& m);

}  // namespace sweep
