#include "prefboard/clustering/pca.hpp"

#include <spdlog/spdlog.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "prefboard/core/error.hpp"

namespace prefboard::clustering {

namespace {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index arg = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(arg))) arg = i;  // first index wins ties
  }
  if (v(arg) < 0.0) v = -v;
}

}  // namespace

PcaResult pca(const DenseMatrix& rows, std::size_t target_dim) {
  const auto n = rows.rows();
  const auto d = rows.cols();
  if (target_dim == 0) throw ValidationError("target_dim must be positive");
  if (n < target_dim + 1) {
    throw ValidationError("reduce_dims needs at least " + std::to_string(target_dim + 1) +
                          " vectors, got " + std::to_string(n));
  }
  if (d < target_dim) {
    throw ValidationError("input dimension " + std::to_string(d) + " is below target " +
                          std::to_string(target_dim));
  }

  Eigen::Map<const Matrix> x(rows.data().data(), static_cast<Eigen::Index>(n),
                             static_cast<Eigen::Index>(d));
  const Eigen::RowVectorXd mu = x.colwise().mean();
  const Matrix centered = x.rowwise() - mu;
  const double denom = static_cast<double>(n - 1);

  // Eigenpairs of the covariance, descending. With more dimensions than points
  // the n x n Gram matrix has the same non-zero spectrum and is cheaper.
  Eigen::VectorXd values;
  Matrix vectors;  // columns are unit eigenvectors in input space
  if (d <= n) {
    const Matrix cov = (centered.transpose() * centered) / denom;
    Eigen::SelfAdjointEigenSolver<Matrix> es(cov);
    values = es.eigenvalues().reverse();
    vectors = es.eigenvectors().rowwise().reverse();
  } else {
    const Matrix gram = (centered * centered.transpose()) / denom;
    Eigen::SelfAdjointEigenSolver<Matrix> es(gram);
    values = es.eigenvalues().reverse();
    const Matrix u = es.eigenvectors().rowwise().reverse();
    vectors = Matrix::Zero(static_cast<Eigen::Index>(d), values.size());
    for (Eigen::Index k = 0; k < values.size(); ++k) {
      if (values(k) <= 0.0) continue;
      vectors.col(k) = centered.transpose() * u.col(k) / std::sqrt(values(k) * denom);
    }
  }

  const double tol = std::max(1e-12, values.size() > 0 ? std::abs(values(0)) * 1e-10 : 0.0);
  PcaResult out;
  out.mean.assign(mu.data(), mu.data() + d);
  out.eigenvalues.resize(static_cast<std::size_t>(values.size()));
  for (Eigen::Index k = 0; k < values.size(); ++k) {
    out.eigenvalues[static_cast<std::size_t>(k)] = std::max(0.0, values(k));
    if (values(k) > tol) ++out.rank;
  }
  if (d > n) out.eigenvalues.resize(d, 0.0);

  out.components = DenseMatrix(target_dim, d);
  // With d == target_dim every eigenvector is kept so the projection is a
  // rotation; otherwise directions without variance become zero padding.
  const bool keep_all = d == target_dim && d <= n;
  for (std::size_t k = 0; k < target_dim; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    if (!keep_all && (kk >= values.size() || values(kk) <= tol)) continue;
    Eigen::VectorXd v = vectors.col(kk);
    fix_sign(v);
    std::copy(v.data(), v.data() + d, out.components.row(k).begin());
  }
  if (out.rank < target_dim) {
    spdlog::warn("reduce_dims: data rank {} is below target dimension {}", out.rank, target_dim);
  }

  Eigen::Map<const Matrix> comp(out.components.data().data(),
                                static_cast<Eigen::Index>(target_dim),
                                static_cast<Eigen::Index>(d));
  out.projected = DenseMatrix(n, target_dim);
  Eigen::Map<Matrix> proj(out.projected.data().data(), static_cast<Eigen::Index>(n),
                          static_cast<Eigen::Index>(target_dim));
  proj = centered * comp.transpose();
  return out;
}

DenseMatrix reduce_dims(const DenseMatrix& rows, std::size_t target_dim) {
  return pca(rows, target_dim).projected;
}

}  // namespace prefboard::clustering
