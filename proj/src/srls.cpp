#include "mpr/solver.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace mpr {

double srls_objective(const Eigen::Matrix2Xd& anchors, const Vector& distances,
                      const Eigen::Vector2d& point) {
  double f = 0.0;
  for (Index q = 0; q < anchors.cols(); ++q) {
    const double r = (point - anchors.col(q)).squaredNorm() - distances(q) * distances(q);
    f += r * r;
  }
  return f;
}

namespace {

// Generalized trust-region form: minimize ||A y - b||^2 subject to
// y^T D y + 2 f^T y = 0 with y = (u, ||u||^2), D = diag(1, 1, 0),
// f = (0, 0, -1/2). The optimum is y(lambda) = (A^T A + lambda D)^{-1}
// (A^T b - lambda f) where phi(lambda) = y^T D y + 2 f^T y crosses zero;
// phi is decreasing on the interval where A^T A + lambda D is positive definite.
std::optional<Eigen::Vector2d> srls_exact(const Eigen::Matrix2Xd& anchors, const Vector& distances) {
  const Index k = anchors.cols();
  Eigen::MatrixX3d a(k, 3);
  Vector b(k);
  for (Index q = 0; q < k; ++q) {
    a(q, 0) = -2.0 * anchors(0, q);
    a(q, 1) = -2.0 * anchors(1, q);
    a(q, 2) = 1.0;
    b(q) = distances(q) * distances(q) - anchors.col(q).squaredNorm();
  }
  const Eigen::Matrix3d ata = a.transpose() * a;
  const Eigen::Vector3d atb = a.transpose() * b;
  const Eigen::Matrix3d dmat = Eigen::Vector3d(1.0, 1.0, 0.0).asDiagonal();
  const Eigen::Vector3d fvec(0.0, 0.0, -0.5);

  Eigen::LDLT<Eigen::Matrix3d> base(ata);
  if (base.info() != Eigen::Success || base.rcond() < 1e-12) return std::nullopt;  // collinear anchors

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::Matrix3d> gen(dmat, ata);
  const double mu_max = gen.eigenvalues().maxCoeff();
  const double lower = -1.0 / mu_max;

  const auto y_of = [&](double lambda) -> Eigen::Vector3d {
    return (ata + lambda * dmat).ldlt().solve(atb - lambda * fvec);
  };
  const auto phi = [&](double lambda) {
    const Eigen::Vector3d y = y_of(lambda);
    return y.dot(dmat * y) + 2.0 * fvec.dot(y);
  };

  const double scale = std::max(1.0, std::abs(lower));
  double lo = lower + 1e-12 * scale;
  double hi = std::max(lower + scale, 1.0);
  if (!(phi(lo) > 0.0)) return std::nullopt;  // hard case; let the local search handle it
  for (int it = 0; it < 200 && phi(hi) > 0.0; ++it) hi = lower + 2.0 * (hi - lower);
  if (phi(hi) > 0.0) return std::nullopt;
  for (int it = 0; it < 300; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (phi(mid) > 0.0 ? lo : hi) = mid;
  }
  const Eigen::Vector3d y = y_of(0.5 * (lo + hi));
  if (!y.allFinite()) return std::nullopt;
  return Eigen::Vector2d(y(0), y(1));
}

// Damped Newton on the SR-LS objective from one start.
Eigen::Vector2d srls_local(const Eigen::Matrix2Xd& anchors, const Vector& distances,
                           Eigen::Vector2d x) {
  double f = srls_objective(anchors, distances, x);
  double damping = 1e-3;
  for (int it = 0; it < 200; ++it) {
    Eigen::Vector2d grad = Eigen::Vector2d::Zero();
    Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
    for (Index q = 0; q < anchors.cols(); ++q) {
      const Eigen::Vector2d diff = x - anchors.col(q);
      const double r = diff.squaredNorm() - distances(q) * distances(q);
      grad += 4.0 * r * diff;
      hess += 8.0 * diff * diff.transpose() + 4.0 * r * Eigen::Matrix2d::Identity();
    }
    bool improved = false;
    for (int tries = 0; tries < 60; ++tries) {
      const double shift = damping * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
      const Eigen::Matrix2d h = hess + shift * Eigen::Matrix2d::Identity();
      Eigen::LDLT<Eigen::Matrix2d> ldlt(h);
      Eigen::Vector2d step = Eigen::Vector2d::Zero();
      if (ldlt.info() == Eigen::Success && ldlt.isPositive()) step = ldlt.solve(grad);
      else step = grad / std::max(1.0, hess.norm());
      const Eigen::Vector2d trial = x - step;
      const double ft = srls_objective(anchors, distances, trial);
      if (ft < f) {
        const double rel = (f - ft) / std::max(f, std::numeric_limits<double>::min());
        x = trial;
        f = ft;
        damping = std::max(damping * 0.3, 1e-15);
        improved = rel > 1e-16;
        break;
      }
      damping *= 10.0;
    }
    if (!improved) break;
  }
  return x;
}

}  // namespace

Eigen::Vector2d srls_localize(const Eigen::Matrix2Xd& anchors, const Vector& distances) {
  if (anchors.cols() < 3) throw std::invalid_argument("SR-LS needs at least 3 anchors");
  if (distances.size() != anchors.cols())
    throw std::invalid_argument("SR-LS needs one distance per anchor");
  if ((distances.array() < 0.0).any()) throw std::invalid_argument("distances must be >= 0");

  std::vector<Eigen::Vector2d> starts;
  if (auto exact = srls_exact(anchors, distances)) starts.push_back(*exact);
  const Eigen::Vector2d centroid = anchors.rowwise().mean();
  const double spread = std::max(distances.maxCoeff(), 1e-12);
  starts.push_back(centroid);
  for (int k = 0; k < 8; ++k) {
    const double angle = 2.0 * M_PI * k / 8.0;
    starts.push_back(centroid + spread * Eigen::Vector2d(std::cos(angle), std::sin(angle)));
  }
  Eigen::Vector2d best = starts.front();
  double best_f = std::numeric_limits<double>::infinity();
  for (const auto& s : starts) {
    const Eigen::Vector2d x = srls_local(anchors, distances, s);
    const double f = srls_objective(anchors, distances, x);
    if (f < best_f) {
      best_f = f;
      best = x;
    }
  }
  return best;
}

}  // namespace mpr
