#include "mpr/metrics.hpp"

#include "mpr/opusim.hpp"

#include <cmath>
#include <stdexcept>

namespace mpr {

double linearity_error(const LinearityTriple& t) {
  return linearity_error(t, std::vector<bool>(static_cast<std::size_t>(t.v.size()), true));
}

double linearity_error(const LinearityTriple& t, const std::vector<bool>& retained) {
  if (t.y.size() != t.v.size() || t.z.size() != t.v.size() ||
      static_cast<Index>(retained.size()) != t.v.size())
    throw std::invalid_argument("linearity triple vectors must have equal lengths");
  double sum = 0.0;
  Index kept = 0;
  for (Index m = 0; m < t.v.size(); ++m) {
    if (!retained[static_cast<std::size_t>(m)]) continue;
    const double denom = std::abs(t.v(m));
    if (denom == 0.0) throw std::domain_error("linearity error undefined for a zero projection");
    sum += std::abs(t.y(m) + t.z(m) - t.v(m)) / denom;
    ++kept;
  }
  if (kept == 0) throw std::domain_error("linearity error undefined: every row was filtered");
  return sum / static_cast<double>(kept);
}

double good_bits(double true_sq_mag, double est_sq_mag, double cap) {
  if (!(true_sq_mag > 0.0)) throw std::domain_error("good bits need a positive true magnitude");
  const double rel = std::abs(true_sq_mag - est_sq_mag) / true_sq_mag;
  if (rel == 0.0) return cap;
  return std::min(cap, -(20.0 / 6.02) * std::log10(rel));
}

double snr_db(const ComplexVector& reference, const ComplexVector& estimate) {
  if (reference.size() != estimate.size()) throw std::invalid_argument("snr_db: size mismatch");
  const double signal = reference.squaredNorm();
  const double noise = (reference - estimate).squaredNorm();
  if (noise == 0.0 || 10.0 * std::log10(signal / noise) > 300.0) return 300.0;
  return 10.0 * std::log10(signal / noise);
}

namespace {

double scaling_trial(const ScalingConfig& cfg, Index anchors, std::uint64_t seed) {
  const Index q = anchors + 1;
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  PointSet truth(2, q);
  for (Index c = 0; c < q; ++c) truth.col(c) = Eigen::Vector2d(gauss(rng), gauss(rng));
  Matrix d = kappa_operator(truth.transpose() * truth);
  const double kappa = static_cast<double>((std::uint64_t{1} << cfg.bits) - 1);
  d *= kappa / d.maxCoeff();

  const UniformQuantizationNoise noise(cfg.bits, kappa);
  std::bernoulli_distribution keep(cfg.keep_probability);
  DistanceObservation obs;
  obs.row = static_cast<Index>(seed % 1000003u);
  obs.d2 = Matrix::Zero(q, q);
  obs.mask = Matrix::Identity(q, q);
  for (Index j = 0; j < q; ++j)
    for (Index l = j + 1; l < q; ++l) {
      const double e = cfg.noise ? noise(rng) : 0.0;
      const bool seen = keep(rng);
      obs.mask(j, l) = obs.mask(l, j) = seen ? 1.0 : 0.0;
      obs.d2(j, l) = obs.d2(l, j) = seen ? d(j, l) + e : 0.0;
    }

  PointSet est = classical_mds(obs, cfg.solver);
  if (cfg.solver.gd_max_iters > 0) est = refine_multistart(obs, est, cfg.solver).points;
  const Matrix d_hat = kappa_operator(est.transpose() * est);
  return (d_hat - d).norm() / static_cast<double>(anchors);
}

}  // namespace

std::vector<ScalingRow> edm_error_scaling(const ScalingConfig& cfg) {
  if (!(cfg.keep_probability > 0.0 && cfg.keep_probability <= 1.0))
    throw std::invalid_argument("keep probability must lie in (0, 1]");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (cfg.bits < 1 || cfg.bits > 62) throw std::invalid_argument("bits must be in [1, 62]");
  for (std::size_t i = 0; i < cfg.anchor_counts.size(); ++i) {
    if (cfg.anchor_counts[i] < 3) throw std::invalid_argument("anchor counts must be >= 3");
    if (i > 0 && cfg.anchor_counts[i] <= cfg.anchor_counts[i - 1])
      throw std::invalid_argument("anchor counts must be increasing");
  }

  std::vector<ScalingRow> rows;
  for (std::size_t i = 0; i < cfg.anchor_counts.size(); ++i) {
    const Index k = cfg.anchor_counts[i];
    Vector errors(cfg.trials);
    parallel_for(cfg.trials, [&](Index t) {
      errors(t) = scaling_trial(cfg, k, derive_seed(cfg.seed, static_cast<std::uint64_t>(k) * 1000003u +
                                                                  static_cast<std::uint64_t>(t)));
    });
    ScalingRow row;
    row.anchors = k;
    row.trials = cfg.trials;
    row.mean_error = errors.mean();
    if (cfg.trials > 1) {
      const double var = (errors.array() - row.mean_error).square().sum() / (cfg.trials - 1);
      row.std_error = std::sqrt(var / cfg.trials);
    }
    row.normalized = row.mean_error * std::sqrt(cfg.keep_probability * static_cast<double>(k));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mpr
