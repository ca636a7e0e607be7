#include <gtest/gtest.h>

#include "mpr/core.hpp"

#include <atomic>
#include <stdexcept>

using namespace mpr;

namespace {

// Squared distances computed one pair at a time.
Matrix pairwise_sq(const PointSet& p) {
  Matrix d(p.cols(), p.cols());
  for (Index i = 0; i < p.cols(); ++i)
    for (Index j = 0; j < p.cols(); ++j) d(i, j) = (p.col(i) - p.col(j)).squaredNorm();
  return d;
}

}  // namespace

TEST(Kappa, IdentityGram) {
  Matrix expected(2, 2);
  expected << 0, 2, 2, 0;
  EXPECT_TRUE(kappa_operator(Matrix::Identity(2, 2)).isApprox(expected));
}

TEST(Kappa, ZeroGram) { EXPECT_TRUE(kappa_operator(Matrix::Zero(4, 4)).isZero()); }

TEST(Kappa, RightTriangle) {
  PointSet p(2, 3);
  p << 0, 3, 0, 0, 0, 4;
  Matrix expected(3, 3);
  expected << 0, 9, 16, 9, 0, 25, 16, 25, 0;
  EXPECT_TRUE(kappa_operator(p.transpose() * p).isApprox(expected, 1e-14));
}

TEST(Kappa, RoundTripRandomPoints) {
  Rng rng(3);
  std::normal_distribution<double> g(0.0, 5.0);
  for (int t = 0; t < 50; ++t) {
    const Index q = 2 + t % 20;
    PointSet p(2, q);
    for (Index c = 0; c < q; ++c) p.col(c) = Eigen::Vector2d(g(rng), g(rng));
    const Matrix expected = pairwise_sq(p);
    const Matrix got = kappa_operator(p.transpose() * p);
    EXPECT_LE((got - expected).cwiseAbs().maxCoeff(), 1e-12 * std::max(1.0, expected.maxCoeff()));
  }
}

TEST(CenteredGram, ZeroMatrix) { EXPECT_TRUE(centered_gram(Matrix::Zero(3, 3)).isZero()); }

TEST(CenteredGram, TwoPoints) {
  Matrix d(2, 2);
  d << 0, 2, 2, 0;
  Matrix expected(2, 2);
  expected << 0.5, -0.5, -0.5, 0.5;
  EXPECT_TRUE(centered_gram(d).isApprox(expected, 1e-14));
}

TEST(CenteredGram, RankTwoReconstruction) {
  Matrix d(3, 3);
  d << 0, 9, 16, 9, 0, 25, 16, 25, 0;
  const Matrix g = centered_gram(d);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(g);
  const Matrix v = eig.eigenvectors().rightCols(2);
  const Matrix top = v * eig.eigenvalues().tail(2).asDiagonal() * v.transpose();
  EXPECT_LE((kappa_operator(top) - d).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(CenteredGram, RowsSumToZeroAndSymmetric) {
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  Matrix d(6, 6);
  for (Index i = 0; i < 6; ++i)
    for (Index j = i; j < 6; ++j) d(i, j) = d(j, i) = i == j ? 0.0 : u(rng);
  const Matrix g = centered_gram(d);
  EXPECT_LE(g.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_TRUE(g.isApprox(g.transpose()));
}

TEST(ReferenceSetTest, RejectsBadInput) {
  EXPECT_THROW(ReferenceSet({Vector::Zero(3)}), std::invalid_argument);
  EXPECT_THROW(ReferenceSet({Vector::Ones(3), Vector::Ones(3)}), std::invalid_argument);
  EXPECT_THROW(ReferenceSet({Vector::Ones(3), Vector::Zero(4)}), std::invalid_argument);
  EXPECT_NO_THROW(ReferenceSet({Vector::Ones(3), Vector::Zero(3)}));
}

TEST(ReferenceSetTest, LayoutPutsFrameFirst) {
  const ReferenceSet refs({Vector::Constant(2, 2.0), Vector::Zero(2)});
  EXPECT_EQ(refs.point_count(), 3);
  const Matrix l = refs.layout(Vector::Constant(2, 7.0));
  EXPECT_EQ(l.cols(), 3);
  EXPECT_DOUBLE_EQ(l(0, 0), 7.0);
  EXPECT_DOUBLE_EQ(l(1, 1), 2.0);
  EXPECT_DOUBLE_EQ(l(0, 2), 0.0);
}

TEST(FrameTest, Validation) {
  Vector v(3);
  v << 0, 1, 1;
  EXPECT_TRUE(is_binary(v));
  EXPECT_NO_THROW(validate_frame({v, 1}, 3, true));
  EXPECT_THROW(validate_frame({v, 1}, 4, false), std::invalid_argument);
  v(0) = 0.5;
  EXPECT_FALSE(is_binary(v));
  EXPECT_THROW(validate_frame({v, 1}, 3, true), std::invalid_argument);
  EXPECT_NO_THROW(validate_frame({v, 1}, 3, false));
}

TEST(Observation, Localizable) {
  DistanceObservation obs;
  obs.d2 = Matrix::Ones(4, 4) - Matrix::Identity(4, 4);
  obs.mask = Matrix::Ones(4, 4);
  EXPECT_TRUE(obs.localizable());
  EXPECT_EQ(obs.observed_pairs(), 6);
  obs.mask(0, 1) = obs.mask(1, 0) = obs.mask(0, 2) = obs.mask(2, 0) = 0;
  obs.d2(0, 1) = obs.d2(1, 0) = obs.d2(0, 2) = obs.d2(2, 0) = 0;
  EXPECT_FALSE(obs.localizable());
}

TEST(Seeds, DeriveSeedIsDeterministicAndSpread) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  EXPECT_NE(derive_seed(1, 2), derive_seed(1, 3));
  EXPECT_NE(derive_seed(1, 2), derive_seed(2, 2));
}

TEST(ParallelFor, VisitsEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(1000, [&](Index i) { hits[static_cast<std::size_t>(i)]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(10, [](Index i) {
                 if (i == 7) throw std::runtime_error("boom");
               }),
               std::runtime_error);
}
