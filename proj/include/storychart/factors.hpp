#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "storychart/corpus.hpp"
#include "storychart/entities.hpp"

namespace storychart::factors {

/// Entities (rows) by document segments (columns).
struct FeatureMatrix {
  Eigen::MatrixXd values;
  std::vector<std::size_t> columns;          // segment index of each column
  std::vector<std::size_t> dropped_columns;  // zero-variance segments removed by standardize
  bool standardized = false;
};

/// value(i, s) = mentions of entity i in segment s. Throws TooFewEntities.
FeatureMatrix build_feature_matrix(std::span<const entities::Entity> entities,
                                   const corpus::Document& doc);

/// Z-scores each column with the population variance and drops constant
/// columns. Throws AllColumnsDegenerate.
FeatureMatrix standardize(const FeatureMatrix& matrix);

struct SymmetricEigen {
  Eigen::VectorXd values;   // descending
  Eigen::MatrixXd vectors;  // column j pairs with values(j)
  std::size_t sweeps = 0;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
/// `tolerance`. Throws ConvergenceFailure after `max_sweeps`.
SymmetricEigen jacobi_eigen(const Eigen::MatrixXd& symmetric, double tolerance = 1e-12,
                            std::size_t max_sweeps = 100);

struct FactorModel {
  Eigen::MatrixXd loadings;                    // p x k, orthonormal columns
  Eigen::VectorXd eigenvalues;                 // k, descending, non-negative
  Eigen::VectorXd all_eigenvalues;             // p
  std::vector<double> explained_variance_ratio;  // k
  Eigen::MatrixXd scores;                      // n x k
};

/// Correlation PCA on a standardized matrix. The largest-magnitude entry of
/// each loading column is made positive.
FactorModel pca(const FeatureMatrix& standardized, std::size_t k);

/// splitmix64; the only randomness source in the project.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 bits of precision.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

struct ClusterAssignment {
  std::vector<std::size_t> cluster;  // point -> cluster id
  Eigen::MatrixXd centroids;         // k x d
  double sse = 0.0;
  std::vector<double> sse_history;   // after every centroid update
  std::size_t iterations = 0;
};

/// k-means++ seeding followed by Lloyd iterations (at most 100).
ClusterAssignment kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed);

}  // namespace storychart::factors
