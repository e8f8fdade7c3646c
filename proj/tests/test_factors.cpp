#include <doctest.h>

#include <cmath>
#include <vector>

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "storychart/factors.hpp"
#include "test_util.hpp"

using namespace storychart;
using namespace storychart::factors;

namespace {

FeatureMatrix raw(const Eigen::MatrixXd& values) {
  FeatureMatrix m;
  m.values = values;
  for (Eigen::Index j = 0; j < values.cols(); ++j) m.columns.push_back(static_cast<std::size_t>(j));
  return m;
}

Eigen::MatrixXd random_matrix(SplitMix64& rng, Eigen::Index n, Eigen::Index p) {
  Eigen::MatrixXd m(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) m(i, j) = rng.uniform() * 10.0 - 5.0;
  }
  return m;
}

double sse_of(const Eigen::MatrixXd& points, const ClusterAssignment& a) {
  double sse = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    sse += (points.row(i) - a.centroids.row(static_cast<Eigen::Index>(a.cluster[i]))).squaredNorm();
  }
  return sse;
}

}  // namespace

TEST_SUITE("factors") {

TEST_CASE("feature matrix counts mentions per segment") {
  const auto doc = corpus::load_document("Ana Ana x. x x x. Bia x Ana.", 3);
  entities::Entity ana;
  ana.canonical = "Ana";
  for (std::size_t start : {0u, 4u, 24u}) {
    entities::EntityMention m;
    m.surface = "Ana";
    m.span = {start, start + 3};
    ana.mentions.push_back(m);
  }
  ana.reference_count = 3;
  entities::Entity bia;
  bia.canonical = "Bia";
  entities::EntityMention mb;
  mb.surface = "Bia";
  mb.span = {18, 21};
  bia.mentions.push_back(mb);
  bia.reference_count = 1;
  REQUIRE(doc.slice(ana.mentions[2].span) == "Ana");
  REQUIRE(doc.slice(mb.span) == "Bia");

  const std::vector<entities::Entity> ents{ana, bia};
  const auto fm = build_feature_matrix(ents, doc);
  Eigen::MatrixXd expected(2, 3);
  expected << 2, 0, 1, 0, 0, 1;
  CHECK(fm.values == expected);
  CHECK_FALSE(fm.standardized);
  CHECK(error_of([&] { build_feature_matrix(std::vector<entities::Entity>{ana}, doc); }) ==
        ErrorCode::TooFewEntities);
}

TEST_CASE("standardize examples") {
  Eigen::MatrixXd m(2, 2);
  m << 1, 5, 3, 5;
  const auto z = standardize(raw(m));
  CHECK(z.standardized);
  REQUIRE(z.values.cols() == 1);
  CHECK(z.values(0, 0) == -1.0);
  CHECK(z.values(1, 0) == 1.0);
  CHECK(z.columns == std::vector<std::size_t>{0});
  CHECK(z.dropped_columns == std::vector<std::size_t>{1});

  Eigen::MatrixXd flat(3, 2);
  flat << 1, 2, 1, 2, 1, 2;
  CHECK(error_of([&] { standardize(raw(flat)); }) == ErrorCode::AllColumnsDegenerate);
}

TEST_CASE("standardize is idempotent and yields unit columns") {
  SplitMix64 rng(4);
  for (int round = 0; round < 30; ++round) {
    const auto m = random_matrix(rng, 2 + rng.next() % 9, 1 + rng.next() % 6);
    const auto z = standardize(raw(m));
    for (Eigen::Index j = 0; j < z.values.cols(); ++j) {
      const double mean = z.values.col(j).mean();
      const double var = (z.values.col(j).array() - mean).square().mean();
      CHECK(std::abs(mean) <= 1e-9);
      CHECK(std::abs(var - 1.0) <= 1e-9);
    }
    const auto again = standardize(z);
    CHECK((again.values - z.values).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("pca on perfectly correlated and on uncorrelated columns") {
  Eigen::MatrixXd same(4, 2);
  same << 1, 2, 2, 4, 3, 6, 4, 8;
  const auto model = pca(standardize(raw(same)), 2);
  CHECK(std::abs(model.eigenvalues(0) - 2.0) <= 1e-12);
  CHECK(std::abs(model.eigenvalues(1)) <= 1e-12);
  CHECK(std::abs(model.explained_variance_ratio[0] - 1.0) <= 1e-12);

  Eigen::MatrixXd orth(4, 2);
  orth << 1, 1, 1, -1, -1, 1, -1, -1;
  const auto flat = pca(standardize(raw(orth)), 2);
  CHECK(std::abs(flat.explained_variance_ratio[0] - 0.5) <= 1e-12);
  CHECK(std::abs(flat.explained_variance_ratio[1] - 0.5) <= 1e-12);
}

TEST_CASE("pca argument checks") {
  Eigen::MatrixXd m(3, 2);
  m << 1, 2, 2, 1, 3, 3;
  CHECK(error_of([&] { pca(raw(m), 1); }) == ErrorCode::InvalidArgument);
  const auto z = standardize(raw(m));
  CHECK(error_of([&] { pca(z, 0); }) == ErrorCode::InvalidArgument);
  CHECK(error_of([&] { pca(z, 3); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("jacobi on a 3x3 matrix with known spectrum") {
  // Eigenvalues of [[2,1,0],[1,2,1],[0,1,2]] are 2+sqrt2, 2, 2-sqrt2.
  Eigen::MatrixXd a(3, 3);
  a << 2, 1, 0, 1, 2, 1, 0, 1, 2;
  const auto eig = jacobi_eigen(a);
  CHECK(std::abs(eig.values(0) - (2 + std::sqrt(2.0))) <= 1e-12);
  CHECK(std::abs(eig.values(1) - 2.0) <= 1e-12);
  CHECK(std::abs(eig.values(2) - (2 - std::sqrt(2.0))) <= 1e-12);
  CHECK((a * eig.vectors - eig.vectors * eig.values.asDiagonal()).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("pca agrees with an independent eigensolver") {
  SplitMix64 rng(8);
  for (int round = 0; round < 40; ++round) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.next() % 9);
    const Eigen::Index p = 1 + static_cast<Eigen::Index>(rng.next() % 6);
    const auto z = standardize(raw(random_matrix(rng, n, p)));
    const Eigen::Index q = z.values.cols();
    const auto model = pca(z, static_cast<std::size_t>(q));

    const Eigen::MatrixXd corr = z.values.transpose() * z.values / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> reference(corr);
    Eigen::VectorXd expected = reference.eigenvalues().reverse();
    for (Eigen::Index i = 0; i < q; ++i) {
      CHECK(std::abs(model.all_eigenvalues(i) - std::max(0.0, expected(i))) <= 1e-8);
      if (i > 0) CHECK(model.eigenvalues(i) <= model.eigenvalues(i - 1));
      CHECK(model.eigenvalues(i) >= 0.0);
    }

    const Eigen::MatrixXd gram = model.loadings.transpose() * model.loadings;
    CHECK((gram - Eigen::MatrixXd::Identity(q, q)).cwiseAbs().maxCoeff() <= 1e-8);
    double ratio_sum = 0.0;
    for (double r : model.explained_variance_ratio) ratio_sum += r;
    CHECK(std::abs(ratio_sum - 1.0) <= 1e-9);
    CHECK((model.scores * model.loadings.transpose() - z.values).cwiseAbs().maxCoeff() <= 1e-6);
    CHECK((model.scores - z.values * model.loadings).cwiseAbs().maxCoeff() <= 1e-12);
    for (Eigen::Index c = 0; c < q; ++c) {
      Eigen::Index arg = 0;
      model.loadings.col(c).cwiseAbs().maxCoeff(&arg);
      CHECK(model.loadings(arg, c) > 0.0);
    }
  }
}

TEST_CASE("k-means examples") {
  Eigen::MatrixXd pts(4, 2);
  pts << 0, 0, 0.1, 0, 10, 0, 10.1, 0;
  const auto two = kmeans(pts, 2, 42);
  CHECK(two.cluster[0] == two.cluster[1]);
  CHECK(two.cluster[2] == two.cluster[3]);
  CHECK(two.cluster[0] != two.cluster[2]);
  CHECK(std::abs(two.sse - 0.01) <= 1e-12);

  const auto one = kmeans(pts, 1, 42);
  CHECK((one.centroids.row(0) - pts.colwise().mean()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(std::abs(one.sse - (pts.rowwise() - pts.colwise().mean()).squaredNorm()) <= 1e-9);

  CHECK(kmeans(pts, 4, 42).sse == 0.0);
  CHECK(error_of([&] { kmeans(pts, 0, 1); }) == ErrorCode::InvalidArgument);
  CHECK(error_of([&] { kmeans(pts, 5, 1); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("k-means contracts on random inputs") {
  SplitMix64 rng(12);
  for (int round = 0; round < 60; ++round) {
    const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.next() % 30);
    const auto pts = random_matrix(rng, n, 1 + static_cast<Eigen::Index>(rng.next() % 4));
    const std::size_t k = 1 + rng.next() % static_cast<std::size_t>(n);
    const std::uint64_t seed = rng.next();
    const auto result = kmeans(pts, k, seed);

    for (std::size_t i = 1; i < result.sse_history.size(); ++i) {
      CHECK(result.sse_history[i] <= result.sse_history[i - 1]);
    }
    CHECK(std::abs(result.sse - sse_of(pts, result)) <= 1e-9);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double own = (pts.row(i) - result.centroids.row(static_cast<Eigen::Index>(result.cluster[i]))).squaredNorm();
      for (Eigen::Index c = 0; c < result.centroids.rows(); ++c) {
        CHECK(own <= (pts.row(i) - result.centroids.row(c)).squaredNorm());
      }
    }
    for (Eigen::Index c = 0; c < result.centroids.rows(); ++c) {
      Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(pts.cols());
      std::size_t members = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (result.cluster[i] == static_cast<std::size_t>(c)) {
          sum += pts.row(i);
          ++members;
        }
      }
      if (members > 0) {
        CHECK((sum / static_cast<double>(members) - result.centroids.row(c)).cwiseAbs().maxCoeff() <= 1e-9);
      }
    }
    const auto repeat = kmeans(pts, k, seed);
    CHECK(repeat.cluster == result.cluster);
    CHECK(repeat.sse == result.sse);
  }
}

TEST_CASE("splitmix64 reference values") {
  SplitMix64 rng(1234567);
  CHECK(rng.next() == 6457827717110365317ull);
  CHECK(rng.next() == 3203168211198807973ull);
}

}
