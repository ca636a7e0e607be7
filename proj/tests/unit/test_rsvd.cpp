#include <gtest/gtest.h>

#include "mpr/experiments.hpp"
#include "mpr/rsvd.hpp"

using namespace mpr;

namespace {

double orthogonality_loss(const Matrix& q) {
  return (q.transpose() * q - Matrix::Identity(q.cols(), q.cols())).cwiseAbs().maxCoeff();
}

CameraConfig ideal_camera() {
  CameraConfig cam;
  cam.quantize = false;
  cam.sensitivity_threshold.reset();
  return cam;
}

}  // namespace

TEST(Prototype, RankOne) {
  Vector u(4), v(6);
  u << 1, 2, 3, 4;
  v << 1, -1, 0.5, 2, 0, 1;
  const Matrix b = u * v.transpose();
  const SvdFactors f = rsvd_prototype(b, 1, 3);
  EXPECT_NEAR(f.sigma(0), u.norm() * v.norm(), 1e-10);
  EXPECT_LT((f.truncated(1).reconstruct() - b).norm(), 1e-10);
}

TEST(Prototype, Identity) {
  const SvdFactors f = rsvd_prototype(Matrix::Identity(3, 3), 3, 1);
  ASSERT_EQ(f.sigma.size(), 3);
  for (Index i = 0; i < 3; ++i) EXPECT_NEAR(f.sigma(i), 1.0, 1e-12);
}

TEST(Prototype, PlantedSpectrum) {
  Vector spectrum = Vector::Constant(10, 1e-8);
  spectrum.head(3) << 1.0, 0.5, 0.25;
  const Matrix b = planted_spectrum_matrix(10, 100, spectrum, 5);
  Eigen::BDCSVD<Matrix> dense(b);
  EXPECT_LT((dense.singularValues().head(3) - spectrum.head(3)).cwiseAbs().maxCoeff(), 1e-12);
  const SvdFactors f = rsvd_prototype(b, 3, 6);
  EXPECT_LT((f.sigma.head(3) - spectrum.head(3)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(Prototype, OrthonormalFactorsAndSortedSpectrum) {
  const Matrix b = random_binary_matrix(40, 60, 0.5, 2);
  const SvdFactors f = rsvd_prototype(b, 8, 4);
  EXPECT_EQ(f.u.cols(), 16);
  EXPECT_LT(orthogonality_loss(f.u), 1e-10);
  EXPECT_LT(orthogonality_loss(f.v), 1e-10);
  for (Index i = 1; i < f.sigma.size(); ++i) EXPECT_LE(f.sigma(i), f.sigma(i - 1));
  EXPECT_THROW(rsvd_prototype(b, 0, 1), std::invalid_argument);
}

TEST(Stacking, WidthDoubles) {
  const ComplexMatrix y = ComplexMatrix::Random(3, 7);
  const Matrix p = stack_real_imag(y);
  EXPECT_EQ(p.rows(), 7);
  EXPECT_EQ(p.cols(), 6);
  EXPECT_DOUBLE_EQ(p(2, 4), -y(1, 2).imag());
}

TEST(Stacking, CovarianceMatchesRealGaussianSketch) {
  // Columns of [Re(Y*) Im(Y*)] with Y = A B^T behave like B times an iid real
  // Gaussian matrix, so P^T P / count approaches ||b||^2 I for a single row b.
  const Index n = 50, k = 20000;
  const Matrix b = random_binary_matrix(1, n, 0.5, 8);
  const TransmissionMatrix tm = draw_transmission_matrix(k, n, 9);
  const ComplexMatrix y = tm.a * b.transpose().cast<std::complex<double>>();
  const Matrix p = stack_real_imag(y);  // 1 x 2k
  const double expected = b.squaredNorm();
  const Vector re = p.leftCols(k).transpose(), im = p.rightCols(k).transpose();
  EXPECT_NEAR(re.squaredNorm() / k, expected, 0.05 * expected);
  EXPECT_NEAR(im.squaredNorm() / k, expected, 0.05 * expected);
  EXPECT_NEAR(re.dot(im) / k, 0.0, 0.05 * expected);
  EXPECT_NEAR(re.mean(), 0.0, 0.05 * std::sqrt(expected));
}

TEST(RsvdOpu, NoiselessMatchesPrototype) {
  Vector spectrum(10);
  for (Index i = 0; i < 10; ++i) spectrum(i) = 10.0 * std::pow(0.6, static_cast<double>(i));
  const Index k = 2;
  std::vector<double> opu_errs, proto_errs;
  for (std::uint64_t t = 0; t < 9; ++t) {
    const Matrix b = planted_spectrum_matrix(10, 200, spectrum, derive_seed(3, t));
    const SimulatedOpu opu(draw_transmission_matrix(k, 200, derive_seed(4, t)), ideal_camera());
    RsvdOpuOptions opts;
    opts.seed = derive_seed(5, t);
    const RsvdOpuResult res = rsvd_opu(b, k, opu, opts);
    EXPECT_EQ(res.sketch.cols(), 2 * k);
    opu_errs.push_back(mean_abs_reconstruction_error(b, res.factors));
    proto_errs.push_back(mean_abs_reconstruction_error(b, rsvd_prototype(b, k, derive_seed(6, t))));

    // Each sketch entry matches the ideal B A^T entry up to the row gauge.
    const ComplexMatrix y = opu.transmission().a * b.transpose().cast<std::complex<double>>();
    for (Index m = 0; m < b.rows(); ++m)
      for (Index j = 0; j < k; ++j) {
        const std::complex<double> got(res.sketch(m, j), res.sketch(m, j + k));
        EXPECT_NEAR(std::abs(got), std::abs(y(j, m)), 1e-6 * std::abs(y(j, m)));
      }
  }
  std::nth_element(opu_errs.begin(), opu_errs.begin() + 4, opu_errs.end());
  std::nth_element(proto_errs.begin(), proto_errs.begin() + 4, proto_errs.end());
  EXPECT_LT(opu_errs[4], 1.5 * proto_errs[4]);
}

TEST(RsvdOpu, DeviceShapeChecked) {
  const Matrix b = random_binary_matrix(4, 20, 0.5, 1);
  const SimulatedOpu opu(draw_transmission_matrix(3, 20, 2), ideal_camera());
  EXPECT_THROW(rsvd_opu(b, 2, opu), std::invalid_argument);
}

TEST(RsvdOpu, BinaryDeviceUsesNestedReferences) {
  const Matrix b = random_binary_matrix(6, 64, 0.3, 3);
  CameraConfig cam = ideal_camera();
  cam.binary_mode = true;
  const SimulatedOpu opu(draw_transmission_matrix(3, 64, 4), cam);
  RsvdOpuOptions opts;
  opts.seed = 8;
  const RsvdOpuResult res = rsvd_opu(b, 3, opu, opts);
  EXPECT_LT(mean_abs_reconstruction_error(b, res.factors), 1e-8);
}
