#include <gtest/gtest.h>

#include "mpr/metrics.hpp"

#include <cmath>

using namespace mpr;

TEST(Linearity, ExactSumIsZero) {
  ComplexVector y(2), z(2);
  y << std::complex<double>(1, 2), std::complex<double>(-3, 0.5);
  z << std::complex<double>(0.5, 0), std::complex<double>(1, 1);
  EXPECT_DOUBLE_EQ(linearity_error({y, z, y + z}), 0.0);
}

TEST(Linearity, SingleRow) {
  ComplexVector y(1), z(1), v(1);
  y << std::complex<double>(0.6, 0.5);
  z << std::complex<double>(0.5, 0.5);
  v << std::complex<double>(1, 1);
  EXPECT_NEAR(linearity_error({y, z, v}), 0.1 / std::sqrt(2.0), 1e-12);
}

TEST(Linearity, RetainedRowsOnly) {
  ComplexVector y = ComplexVector::Zero(2), z = ComplexVector::Zero(2), v(2);
  v << 1.0, 0.0;
  EXPECT_THROW(linearity_error({y, z, v}), std::domain_error);
  EXPECT_DOUBLE_EQ(linearity_error({y, z, v}, {true, false}), 1.0);
  EXPECT_THROW(linearity_error({y, z, v}, {false, false}), std::domain_error);
  EXPECT_THROW(linearity_error({y, z, v}, {true}), std::invalid_argument);
}

TEST(GoodBits, Formula) {
  EXPECT_NEAR(good_bits(1.0, 1.5), 1.0, 1e-3);
  EXPECT_NEAR(good_bits(100.0, 99.0), 6.645, 1e-3);
  EXPECT_DOUBLE_EQ(good_bits(3.0, 3.0), kGoodBitsCap);
  EXPECT_THROW(good_bits(0.0, 1.0), std::domain_error);
}

TEST(GoodBits, DecreasingInError) {
  double prev = good_bits(1.0, 1.0 + 1e-12);
  for (double rel = 1e-11; rel < 10; rel *= 1.7) {
    const double gb = good_bits(1.0, 1.0 + rel);
    EXPECT_LT(gb, prev);
    prev = gb;
  }
}

TEST(Snr, Values) {
  ComplexVector r(1), e(1);
  r << std::complex<double>(1, 0);
  e << std::complex<double>(1.1, 0);
  EXPECT_NEAR(snr_db(r, e), 20.0, 1e-9);
  EXPECT_DOUBLE_EQ(snr_db(r, r), 300.0);
}

TEST(Scaling, NoiselessCompleteIsExact) {
  ScalingConfig cfg;
  cfg.keep_probability = 1.0;
  cfg.noise = false;
  cfg.trials = 5;
  cfg.anchor_counts = {5, 10, 20};
  for (const auto& row : edm_error_scaling(cfg)) EXPECT_LT(row.mean_error, 1e-6);
}

TEST(Scaling, FewerObservationsHurt) {
  ScalingConfig a;
  a.keep_probability = 0.9;
  a.anchor_counts = {40};
  a.trials = 20;
  ScalingConfig b = a;
  b.keep_probability = 0.45;
  EXPECT_LT(edm_error_scaling(a).front().mean_error, edm_error_scaling(b).front().mean_error);
}

TEST(Scaling, NormalizedRoughlyFlatWhenWellObserved) {
  ScalingConfig cfg;
  cfg.keep_probability = 0.9;
  cfg.anchor_counts = {20, 40, 80};
  cfg.trials = 20;
  const auto rows = edm_error_scaling(cfg);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double ratio = rows[i].normalized / rows[i - 1].normalized;
    EXPECT_GT(ratio, 0.5);
    EXPECT_LT(ratio, 2.0);
  }
}

TEST(Scaling, RejectsBadConfig) {
  ScalingConfig cfg;
  cfg.anchor_counts = {10, 5};
  EXPECT_THROW(edm_error_scaling(cfg), std::invalid_argument);
  cfg.anchor_counts = {2};
  EXPECT_THROW(edm_error_scaling(cfg), std::invalid_argument);
  cfg.anchor_counts = {10};
  cfg.keep_probability = 0.0;
  EXPECT_THROW(edm_error_scaling(cfg), std::invalid_argument);
}
