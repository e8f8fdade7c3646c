#include <algorithm>
#include <limits>

#include "storychart/error.hpp"
#include "storychart/factors.hpp"

namespace storychart::factors {

namespace {

using Index = Eigen::Index;

std::vector<std::size_t> assign(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids) {
  std::vector<std::size_t> labels(static_cast<std::size_t>(points.rows()));
  for (Index i = 0; i < points.rows(); ++i) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_c = 0;
    for (Index c = 0; c < centroids.rows(); ++c) {
      const double d = (points.row(i) - centroids.row(c)).squaredNorm();
      if (d < best) {
        best = d;
        best_c = static_cast<std::size_t>(c);
      }
    }
    labels[static_cast<std::size_t>(i)] = best_c;
  }
  return labels;
}

double squared_error(const Eigen::MatrixXd& points, const Eigen::MatrixXd& centroids,
                     const std::vector<std::size_t>& labels) {
  double sse = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    sse += (points.row(i) - centroids.row(static_cast<Index>(labels[static_cast<std::size_t>(i)])))
               .squaredNorm();
  }
  return sse;
}

// Means of the members; an empty cluster takes the point farthest from its
// own centroid among clusters that can spare one.
void update_centroids(const Eigen::MatrixXd& points, std::vector<std::size_t>& labels,
                      Eigen::MatrixXd& centroids) {
  const Index k = centroids.rows();
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
  auto recompute = [&] {
    centroids.setZero();
    std::fill(sizes.begin(), sizes.end(), 0);
    for (Index i = 0; i < points.rows(); ++i) {
      const auto c = labels[static_cast<std::size_t>(i)];
      centroids.row(static_cast<Index>(c)) += points.row(i);
      ++sizes[c];
    }
    for (Index c = 0; c < k; ++c) {
      if (sizes[static_cast<std::size_t>(c)] > 0) {
        centroids.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);
      }
    }
  };
  recompute();
  for (Index c = 0; c < k; ++c) {
    if (sizes[static_cast<std::size_t>(c)] > 0) continue;
    Index farthest = -1;
    double best = -1.0;
    for (Index i = 0; i < points.rows(); ++i) {
      const auto owner = labels[static_cast<std::size_t>(i)];
      if (sizes[owner] < 2) continue;
      const double d = (points.row(i) - centroids.row(static_cast<Index>(owner))).squaredNorm();
      if (d > best) {
        best = d;
        farthest = i;
      }
    }
    if (farthest < 0) break;
    labels[static_cast<std::size_t>(farthest)] = static_cast<std::size_t>(c);
    recompute();
  }
}

}  // namespace

ClusterAssignment kmeans(const Eigen::MatrixXd& points, std::size_t k, std::uint64_t seed) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k < 1 || k > n) {
    throw Error(ErrorCode::InvalidArgument, "cluster count must be in [1, " + std::to_string(n) +
                                                "], got " + std::to_string(k));
  }
  SplitMix64 rng(seed);

  // k-means++ seeding.
  std::vector<std::size_t> chosen;
  chosen.push_back(std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(n)), n - 1));
  std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
  while (chosen.size() < k) {
    const Index last = static_cast<Index>(chosen.back());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], (points.row(static_cast<Index>(i)) - points.row(last)).squaredNorm());
      total += nearest[i];
    }
    std::size_t pick = n;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double cumulative = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (nearest[i] <= 0.0) continue;
        cumulative += nearest[i];
        pick = i;
        if (cumulative > target) break;
      }
    }
    if (pick == n) {
      for (std::size_t i = 0; i < n; ++i) {
        if (std::find(chosen.begin(), chosen.end(), i) == chosen.end()) {
          pick = i;
          break;
        }
      }
    }
    chosen.push_back(pick);
  }

  ClusterAssignment result;
  result.centroids.resize(static_cast<Index>(k), points.cols());
  for (std::size_t c = 0; c < k; ++c) {
    result.centroids.row(static_cast<Index>(c)) = points.row(static_cast<Index>(chosen[c]));
  }
  result.cluster = assign(points, result.centroids);

  bool converged = false;
  for (std::size_t iter = 0; iter < 100; ++iter) {
    ++result.iterations;
    update_centroids(points, result.cluster, result.centroids);
    result.sse_history.push_back(squared_error(points, result.centroids, result.cluster));
    auto next = assign(points, result.centroids);
    if (next == result.cluster) {
      converged = true;
      break;
    }
    result.cluster = std::move(next);
  }
  if (!converged) {
    update_centroids(points, result.cluster, result.centroids);
    result.sse_history.push_back(squared_error(points, result.centroids, result.cluster));
  }
  result.sse = result.sse_history.back();
  return result;
}

}  // namespace storychart::factors
