#pragma once

#include <cstddef>
#include <vector>

#include "prefboard/core/matrix.hpp"

namespace prefboard::clustering {

struct PcaResult {
  DenseMatrix projected;            // n x target_dim
  DenseMatrix components;           // target_dim x d, unit rows (zero rows when padded)
  std::vector<double> mean;         // d
  std::vector<double> eigenvalues;  // all covariance eigenvalues, descending
  std::size_t rank = 0;
};

/// Projects rows onto the top `target_dim` principal components of the sample
/// covariance (divisor n - 1). Each component is signed so its largest
/// magnitude loading is positive. When the data has fewer than `target_dim`
/// non-zero directions the missing components are zero and a warning is
/// logged. Requires rows >= target_dim + 1 and cols >= target_dim.
PcaResult pca(const DenseMatrix& rows, std::size_t target_dim = 5);

/// Projected coordinates only.
DenseMatrix reduce_dims(const DenseMatrix& rows, std::size_t target_dim = 5);

}  // namespace prefboard::clustering
