#include <Eigen/SVD>

#include "sweep/types.hpp"

namespace sweep {

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace sweep
