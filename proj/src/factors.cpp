#include "storychart/factors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "storychart/error.hpp"

namespace storychart::factors {

FeatureMatrix build_feature_matrix(std::span<const entities::Entity> entities,
                                   const corpus::Document& doc) {
  if (entities.size() < 2) {
    throw Error(ErrorCode::TooFewEntities,
                "factor analysis needs at least 2 entities, got " + std::to_string(entities.size()));
  }
  const std::size_t segments = doc.segment_count();
  FeatureMatrix matrix;
  matrix.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(entities.size()),
                                        static_cast<Eigen::Index>(segments));
  matrix.columns.resize(segments);
  std::iota(matrix.columns.begin(), matrix.columns.end(), std::size_t{0});
  const auto& tokens = doc.tokens();
  for (std::size_t i = 0; i < entities.size(); ++i) {
    for (const auto& m : entities[i].mentions) {
      const std::size_t t = std::min(doc.token_at(m.span.start), tokens.size() - 1);
      matrix.values(static_cast<Eigen::Index>(i),
                    static_cast<Eigen::Index>(tokens[t].segment_index)) += 1.0;
    }
  }
  return matrix;
}

FeatureMatrix standardize(const FeatureMatrix& matrix) {
  const Eigen::Index n = matrix.values.rows();
  if (n < 2) throw Error(ErrorCode::TooFewEntities, "standardization needs at least 2 rows");

  FeatureMatrix out;
  out.standardized = true;
  out.dropped_columns = matrix.dropped_columns;
  std::vector<Eigen::VectorXd> kept;
  for (Eigen::Index j = 0; j < matrix.values.cols(); ++j) {
    const Eigen::VectorXd col = matrix.values.col(j);
    const double mean = col.mean();
    const Eigen::VectorXd centered = col.array() - mean;
    const double variance = centered.squaredNorm() / static_cast<double>(n);
    const std::size_t segment = matrix.columns[static_cast<std::size_t>(j)];
    if (variance <= 1e-18) {
      out.dropped_columns.push_back(segment);
      continue;
    }
    kept.push_back(centered / std::sqrt(variance));
    out.columns.push_back(segment);
  }
  if (kept.empty()) {
    throw Error(ErrorCode::AllColumnsDegenerate, "every feature column has zero variance");
  }
  std::sort(out.dropped_columns.begin(), out.dropped_columns.end());
  out.values.resize(n, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t j = 0; j < kept.size(); ++j) out.values.col(static_cast<Eigen::Index>(j)) = kept[j];
  return out;
}

namespace {

double off_diagonal_norm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

}  // namespace

SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& symmetric, double tolerance,
                            std::size_t max_sweeps) {
  if (symmetric.rows() != symmetric.cols()) {
    throw Error(ErrorCode::InvalidArgument, "eigen decomposition needs a square matrix");
  }
  const Eigen::Index n = symmetric.rows();
  Eigen::MatrixXd a = symmetric;
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);

  std::size_t sweeps = 0;
  while (off_diagonal_norm(a) >= tolerance) {
    if (sweeps == max_sweeps) {
      throw Error(ErrorCode::ConvergenceFailure,
                  "Jacobi iteration did not converge in " + std::to_string(max_sweeps) + " sweeps");
    }
    ++sweeps;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  SymmetricEigen result;
  result.sweeps = sweeps;
  result.values.resize(n);
  result.vectors.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const Eigen::Index src = order[static_cast<std::size_t>(j)];
    result.values(j) = a(src, src);
    result.vectors.col(j) = v.col(src);
  }
  return result;
}

FactorModel pca(const FeatureMatrix& standardized, std::size_t k) {
  if (!standardized.standardized) {
    throw Error(ErrorCode::InvalidArgument, "PCA expects a standardized feature matrix");
  }
  const Eigen::Index p = standardized.values.cols();
  if (k < 1 || static_cast<Eigen::Index>(k) > p) {
    throw Error(ErrorCode::InvalidArgument, "number of factors must be in [1, " +
                                                std::to_string(p) + "], got " + std::to_string(k));
  }
  const auto& z = standardized.values;
  const Eigen::MatrixXd correlation = (z.transpose() * z) / static_cast<double>(z.rows());
  const SymmetricEigen eig = jacobi_eigen(correlation);

  FactorModel model;
  model.all_eigenvalues = eig.values.cwiseMax(0.0);
  const double total = model.all_eigenvalues.sum();
  const auto kk = static_cast<Eigen::Index>(k);
  model.eigenvalues = model.all_eigenvalues.head(kk);
  model.loadings = eig.vectors.leftCols(kk);
  for (Eigen::Index j = 0; j < kk; ++j) {
    Eigen::Index largest = 0;
    for (Eigen::Index i = 1; i < p; ++i) {
      if (std::abs(model.loadings(i, j)) > std::abs(model.loadings(largest, j))) largest = i;
    }
    if (model.loadings(largest, j) < 0.0) model.loadings.col(j) *= -1.0;
    model.explained_variance_ratio.push_back(total > 0.0 ? model.eigenvalues(j) / total : 0.0);
  }
  model.scores = z * model.loadings;
  return model;
}

}  // namespace storychart::factors
