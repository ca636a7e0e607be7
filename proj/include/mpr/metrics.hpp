#pragma once

#include "mpr/core.hpp"
#include "mpr/solver.hpp"

#include <cstdint>
#include <vector>

namespace mpr {

/// Recovered projections of xi_1, xi_2 and xi_1 + xi_2.
struct LinearityTriple {
  ComplexVector y;
  ComplexVector z;
  ComplexVector v;
};

/// mean over rows of |(y + z) - v| / |v|. Rows with retained[m] == false are
/// skipped; throws std::domain_error if nothing is left or a kept v is zero.
double linearity_error(const LinearityTriple& t);
double linearity_error(const LinearityTriple& t, const std::vector<bool>& retained);

inline constexpr double kGoodBitsCap = 52.0;

/// -(20 / 6.02) log10(| |y|^2 - |y_hat|^2 | / |y|^2), capped at `cap`.
double good_bits(double true_sq_mag, double est_sq_mag, double cap = kGoodBitsCap);

/// SNR in dB of an estimate against a reference: 10 log10(sum |ref|^2 / sum |ref - est|^2),
/// capped at 300 dB for exact recovery.
double snr_db(const ComplexVector& reference, const ComplexVector& estimate);

struct ScalingConfig {
  double keep_probability = 1.0;
  int bits = 8;
  std::vector<Index> anchor_counts{10, 20, 40, 80};
  int trials = 50;
  std::uint64_t seed = 0;
  /// false switches the additive quantization noise off.
  bool noise = true;
  SolverConfig solver{.gd_restarts = 10};
};

struct ScalingRow {
  Index anchors = 0;
  double mean_error = 0.0;   // mean ||D_hat - D||_F / K
  double std_error = 0.0;    // standard error of that mean
  double normalized = 0.0;   // mean_error * sqrt(p K)
  int trials = 0;
};

/// Distance-recovery error versus anchor count under additive uniform
/// quantization noise and an iid Bernoulli(p) observation mask.
std::vector<ScalingRow> edm_error_scaling(const ScalingConfig& cfg);

}  // namespace mpr
