#include <gtest/gtest.h>

#include "mpr/probe.hpp"
#include "mpr/solver.hpp"

#include <cmath>

using namespace mpr;

namespace {

PointSet random_points(Index q, Rng& rng, double scale = 3.0) {
  std::normal_distribution<double> g(0.0, scale);
  PointSet p(2, q);
  for (Index c = 0; c < q; ++c) p.col(c) = Eigen::Vector2d(g(rng), g(rng));
  return p;
}

DistanceObservation complete_observation(const PointSet& p) {
  DistanceObservation obs;
  obs.d2 = kappa_operator(p.transpose() * p);
  obs.mask = Matrix::Ones(p.cols(), p.cols());
  return obs;
}

void drop_pairs(DistanceObservation& obs, double fraction, Rng& rng) {
  std::bernoulli_distribution drop(fraction);
  for (Index j = 0; j < obs.size(); ++j)
    for (Index l = j + 1; l < obs.size(); ++l)
      if (drop(rng)) {
        obs.mask(j, l) = obs.mask(l, j) = 0.0;
        obs.d2(j, l) = obs.d2(l, j) = 0.0;
      }
}

Eigen::Matrix2d rotation(double theta) {
  Eigen::Matrix2d r;
  r << std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta);
  return r;
}

}  // namespace

TEST(Mds, RightTriangle) {
  Matrix d(3, 3);
  d << 0, 9, 16, 9, 0, 25, 16, 25, 0;
  DistanceObservation obs{d, Matrix::Ones(3, 3)};
  const PointSet p = classical_mds(obs);
  EXPECT_NEAR((p.col(0) - p.col(1)).norm(), 3.0, 1e-9);
  EXPECT_NEAR((p.col(0) - p.col(2)).norm(), 4.0, 1e-9);
  EXPECT_NEAR((p.col(1) - p.col(2)).norm(), 5.0, 1e-9);
}

TEST(Mds, ZeroMatrix) {
  DistanceObservation obs{Matrix::Zero(4, 4), Matrix::Ones(4, 4)};
  EXPECT_TRUE(classical_mds(obs).isZero());
}

TEST(Mds, RandomRoundTrip) {
  Rng rng(17);
  for (Index q = 3; q <= 30; ++q) {
    const PointSet truth = random_points(q, rng);
    const DistanceObservation obs = complete_observation(truth);
    const PointSet p = classical_mds(obs);
    const Matrix back = kappa_operator(p.transpose() * p);
    EXPECT_LE((back - obs.d2).norm(), 1e-8 * obs.d2.norm()) << "Q=" << q;
  }
}

TEST(Mds, Imputation) {
  Matrix d(3, 3);
  d << 0, 2, 0, 2, 0, 4, 0, 4, 0;
  Matrix w = Matrix::Ones(3, 3);
  w(0, 2) = w(2, 0) = 0.0;
  const DistanceObservation obs{d, w};
  EXPECT_DOUBLE_EQ(impute_missing(obs, Imputation::kObservedMean)(0, 2), 3.0);
  EXPECT_DOUBLE_EQ(impute_missing(obs, Imputation::kZero)(2, 0), 0.0);
}

TEST(Stress, ZeroAtExactPoints) {
  Rng rng(1);
  const PointSet p = random_points(6, rng);
  const StressEvaluation e = squared_stress(p, complete_observation(p));
  EXPECT_NEAR(e.value, 0.0, 1e-18);
  EXPECT_LE(e.gradient.cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Stress, EmptyMaskVanishes) {
  Rng rng(2);
  DistanceObservation obs = complete_observation(random_points(5, rng));
  obs.mask = Matrix::Identity(5, 5);
  EXPECT_DOUBLE_EQ(squared_stress(random_points(5, rng), obs).value, 0.0);
}

TEST(Stress, GradientMatchesFiniteDifferences) {
  Rng rng(3);
  for (int t = 0; t < 25; ++t) {
    const Index q = 4 + t % 8;
    DistanceObservation obs = complete_observation(random_points(q, rng));
    drop_pairs(obs, 0.3, rng);
    const PointSet z = random_points(q, rng);
    const StressEvaluation e = squared_stress(z, obs);
    PointSet fd(2, q);
    const double h = 1e-5;
    for (Index i = 0; i < z.size(); ++i) {
      PointSet zp = z, zm = z;
      zp.data()[i] += h;
      zm.data()[i] -= h;
      fd.data()[i] = (squared_stress_value(zp, obs) - squared_stress_value(zm, obs)) / (2 * h);
    }
    EXPECT_LE((fd - e.gradient).norm(), 1e-5 * e.gradient.norm());
  }
}

TEST(Gd, ExactInitUnchanged) {
  Rng rng(4);
  const PointSet p = random_points(7, rng);
  const RefineResult r = refine_gd(complete_observation(p), p);
  EXPECT_TRUE(r.points.isApprox(p));
}

TEST(Gd, MonotoneTrace) {
  Rng rng(5);
  const PointSet p = random_points(8, rng);
  std::normal_distribution<double> g(0.0, 0.01 * p.cwiseAbs().mean());
  PointSet init = p;
  for (Index i = 0; i < init.size(); ++i) init.data()[i] += g(rng);
  const RefineResult r = refine_gd(complete_observation(p), init);
  ASSERT_GE(r.stress_trace.size(), 2u);
  for (std::size_t i = 1; i < r.stress_trace.size(); ++i) EXPECT_LT(r.stress_trace[i], r.stress_trace[i - 1]);
}

TEST(Gd, MaskedNeverWorse) {
  Rng rng(6);
  for (int t = 0; t < 20; ++t) {
    DistanceObservation obs = complete_observation(random_points(10, rng));
    drop_pairs(obs, 0.3, rng);
    const PointSet init = classical_mds(obs);
    const RefineResult r = refine_gd(obs, init);
    EXPECT_LE(squared_stress_value(r.points, obs), squared_stress_value(init, obs));
  }
}

TEST(Gd, MultistartNeverWorseThanPlain) {
  Rng rng(7);
  for (int t = 0; t < 10; ++t) {
    DistanceObservation obs = complete_observation(random_points(9, rng));
    drop_pairs(obs, 0.4, rng);
    SolverConfig cfg;
    cfg.gd_restarts = 4;
    const PointSet init = classical_mds(obs);
    EXPECT_LE(refine_multistart(obs, init, cfg).stress_trace.back(), refine_gd(obs, init).stress_trace.back());
  }
}

TEST(Center, ShiftsLastColumnToOrigin) {
  PointSet p(2, 3);
  p << 3, 5, 1, 4, 0, -2;
  const PointSet c = center_to_origin(p);
  EXPECT_TRUE(c.col(2).isZero());
  EXPECT_TRUE(c.col(0).isApprox(Eigen::Vector2d(2, 6)));
  EXPECT_NEAR((c.col(0) - c.col(1)).norm(), (p.col(0) - p.col(1)).norm(), 1e-12);
  p.col(2).setZero();
  EXPECT_EQ(center_to_origin(p), p);
}

TEST(Procrustes, Identity) {
  Rng rng(8);
  const PointSet a = random_points(5, rng);
  EXPECT_TRUE(procrustes(a, a).rotation.isApprox(Eigen::Matrix2d::Identity(), 1e-12));
}

TEST(Procrustes, QuarterTurn) {
  Rng rng(9);
  const PointSet ref = random_points(5, rng);
  const PointSet cur = rotation(M_PI / 2) * ref;
  const ProcrustesResult r = procrustes(ref, cur);
  EXPECT_TRUE(r.rotation.isApprox(rotation(-M_PI / 2), 1e-12));
  EXPECT_LT((r.rotation * cur - ref).norm(), 1e-10);
}

TEST(Procrustes, Reflection) {
  Rng rng(10);
  const PointSet ref = random_points(5, rng);
  Eigen::Matrix2d flip;
  flip << 1, 0, 0, -1;
  const PointSet cur = flip * ref;
  const ProcrustesResult r = procrustes(ref, cur);
  EXPECT_NEAR(r.rotation.determinant(), -1.0, 1e-12);
  EXPECT_LT((r.rotation * cur - ref).norm(), 1e-10);
}

TEST(Procrustes, OrthogonalAndGridOptimal) {
  Rng rng(11);
  Eigen::Matrix2d flip;
  flip << 1, 0, 0, -1;
  for (int t = 0; t < 20; ++t) {
    const PointSet ref = random_points(6, rng);
    const PointSet cur = random_points(6, rng);
    const Eigen::Matrix2d r = procrustes(ref, cur).rotation;
    EXPECT_LE((r.transpose() * r - Eigen::Matrix2d::Identity()).norm(), 1e-12);
    const double cost = (r * cur - ref).squaredNorm();
    double best = std::numeric_limits<double>::infinity();
    for (double th = 0; th < 2 * M_PI; th += 1e-3)
      for (int f = 0; f < 2; ++f) {
        const Eigen::Matrix2d cand = f ? Eigen::Matrix2d(rotation(th) * flip) : rotation(th);
        best = std::min(best, (cand * cur - ref).squaredNorm());
      }
    EXPECT_LE(cost, best + 1e-9);
  }
}

TEST(Procrustes, DegenerateFlagged) {
  PointSet ref(2, 3), cur(2, 3);
  ref << 1, 2, 3, 0, 0, 0;
  cur << 0, 0, 0, 1, 2, 3;
  EXPECT_TRUE(procrustes(ref, cur).degenerate);
}

TEST(Srls, SymmetricCross) {
  Eigen::Matrix2Xd a(2, 4);
  a << 1, -1, 0, 0, 0, 0, 1, -1;
  const Eigen::Vector2d u = srls_localize(a, Vector::Ones(4));
  EXPECT_LT(u.norm(), 1e-6);
}

TEST(Srls, PlantedPoint) {
  Eigen::Matrix2Xd a(2, 3);
  a << 0, 4, 0, 0, 0, 3;
  Vector d(3);
  d << 5, std::sqrt(17.0), std::sqrt(10.0);
  const Eigen::Vector2d u = srls_localize(a, d);
  EXPECT_LT((u - Eigen::Vector2d(3, 4)).norm(), 1e-6);
}

TEST(Srls, NoisyBeatsPlantedAndMatchesGrid) {
  Rng rng(12);
  std::uniform_real_distribution<double> noise(-0.1, 0.1);
  for (int t = 0; t < 10; ++t) {
    const PointSet pts = random_points(5, rng);
    const Eigen::Matrix2Xd anchors = pts.rightCols(4);
    const Eigen::Vector2d truth = pts.col(0);
    Vector d(4);
    for (Index q = 0; q < 4; ++q) d(q) = std::max(0.0, (truth - anchors.col(q)).norm() + noise(rng));
    const Eigen::Vector2d u = srls_localize(anchors, d);
    const double f = srls_objective(anchors, d, u);
    EXPECT_LE(f, srls_objective(anchors, d, truth) + 1e-9);
    // Coarse grid then a fine grid around the coarse winner.
    Eigen::Vector2d best = Eigen::Vector2d::Zero();
    double best_f = std::numeric_limits<double>::infinity();
    const double span = 4.0 * (anchors.cwiseAbs().maxCoeff() + d.maxCoeff());
    for (double x = -span; x <= span; x += span / 200)
      for (double y = -span; y <= span; y += span / 200) {
        const double v = srls_objective(anchors, d, {x, y});
        if (v < best_f) best_f = v, best = {x, y};
      }
    const Eigen::Vector2d c = best;
    for (double x = c.x() - span / 100; x <= c.x() + span / 100; x += span / 20000)
      for (double y = c.y() - span / 100; y <= c.y() + span / 100; y += span / 20000)
        best_f = std::min(best_f, srls_objective(anchors, d, {x, y}));
    EXPECT_LE(f, best_f + 1e-9 * std::max(1.0, best_f));
  }
}

TEST(Srls, NeedsThreeAnchors) {
  Eigen::Matrix2Xd a(2, 2);
  a << 0, 1, 0, 0;
  EXPECT_THROW(srls_localize(a, Vector::Ones(2)), std::invalid_argument);
}

namespace {

struct Instance {
  TransmissionMatrix tm;
  ReferenceSet refs;
  std::vector<Frame> frames;
};

Instance make_instance(Index rows, Index n, Index anchors, std::uint64_t seed, std::vector<Vector> signals) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Vector> a;
  for (Index k = 0; k + 1 < anchors; ++k) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v(i) = g(rng);
    a.push_back(v);
  }
  a.push_back(Vector::Zero(n));
  std::vector<Frame> frames;
  for (std::size_t s = 0; s < signals.size(); ++s) frames.push_back({signals[s], static_cast<int>(s + 1)});
  return {draw_transmission_matrix(rows, n, derive_seed(seed, 1)), ReferenceSet(a), frames};
}

Vector gaussian(Index n, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

CameraConfig ideal_camera() {
  CameraConfig cam;
  cam.quantize = false;
  cam.sensitivity_threshold.reset();
  return cam;
}

}  // namespace

TEST(SolveMpr, NoiselessMagnitudes) {
  Rng rng(13);
  const Instance inst = make_instance(20, 64, 6, 13, {gaussian(64, rng)});
  const SimulatedOpu opu(inst.tm, ideal_camera());
  const RecoveredProjections rp = solve_mpr(probe_frames(opu, inst.frames, inst.refs));
  const ComplexVector truth = inst.tm.a * inst.frames[0].values.cast<std::complex<double>>();
  for (Index m = 0; m < 20; ++m) EXPECT_NEAR(std::abs(rp.y(m, 0)), std::abs(truth(m)), 1e-8 * std::abs(truth(m)));
}

TEST(SolveMpr, DuplicateFrames) {
  Rng rng(14);
  const Vector xi = gaussian(64, rng);
  const Instance inst = make_instance(20, 64, 6, 14, {xi, xi});
  const SimulatedOpu opu(inst.tm, ideal_camera());
  const RecoveredProjections rp = solve_mpr(probe_frames(opu, inst.frames, inst.refs));
  for (Index m = 0; m < 20; ++m) EXPECT_LT(std::abs(rp.y(m, 0) - rp.y(m, 1)), 1e-8 * std::abs(rp.y(m, 0)));
}

TEST(SolveMpr, NoiselessLinearity) {
  Rng rng(15);
  const Vector x1 = gaussian(64, rng), x2 = gaussian(64, rng);
  const Instance inst = make_instance(30, 64, 6, 15, {x1, x2, x1 + x2});
  const SimulatedOpu opu(inst.tm, ideal_camera());
  const RecoveredProjections rp = solve_mpr(probe_frames(opu, inst.frames, inst.refs));
  for (Index m = 0; m < 30; ++m)
    EXPECT_LT(std::abs(rp.y(m, 0) + rp.y(m, 1) - rp.y(m, 2)), 1e-6 * std::abs(rp.y(m, 2)));
}

TEST(SolveMpr, FlagsSmallAndUnlocalizableRows) {
  Rng rng(16);
  const Instance inst = make_instance(10, 32, 4, 16, {gaussian(32, rng)});
  CameraConfig cam = ideal_camera();
  cam.exposure_gain = 1e-6;  // every point collapses below the norm filter
  const SimulatedOpu opu(inst.tm, cam);
  auto obs = probe_frames(opu, inst.frames, inst.refs);
  obs[0][3].mask = Matrix::Identity(obs[0][3].size(), obs[0][3].size());
  obs[0][3].d2.setZero();
  const RecoveredProjections rp = solve_mpr(obs);
  for (Index m = 0; m < 10; ++m) EXPECT_TRUE(rp.flags[static_cast<std::size_t>(m)] & kRowSmallNorm);
  EXPECT_TRUE(rp.flags[3] & kRowUnlocalizable);
  EXPECT_FALSE(rp.retained(0));
}

TEST(SolverConfigTest, Validation) {
  SolverConfig cfg;
  cfg.gd_backtrack = 1.5;
  EXPECT_THROW(validate_solver_config(cfg), std::invalid_argument);
  cfg = {};
  cfg.gd_max_iters = -1;
  EXPECT_THROW(validate_solver_config(cfg), std::invalid_argument);
  cfg = {};
  cfg.gd_restarts = -2;
  EXPECT_THROW(validate_solver_config(cfg), std::invalid_argument);
}
