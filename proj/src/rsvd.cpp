#include "mpr/rsvd.hpp"

#include "mpr/probe.hpp"
#include "mpr/refdesign.hpp"

#include <stdexcept>
#include <string>

namespace mpr {

SvdFactors SvdFactors::truncated(Index rank) const {
  const Index r = std::min(rank, sigma.size());
  return {u.leftCols(r), sigma.head(r), v.leftCols(r)};
}

Matrix orthonormal_basis(const Matrix& sketch) {
  const Index width = std::min(sketch.rows(), sketch.cols());
  Eigen::HouseholderQR<Matrix> qr(sketch);
  return qr.householderQ() * Matrix::Identity(sketch.rows(), width);
}

SvdFactors svd_from_sketch(const Matrix& b, const Matrix& sketch) {
  if (sketch.rows() != b.rows()) throw std::invalid_argument("sketch must have one row per row of B");
  const Matrix q = orthonormal_basis(sketch);
  const Matrix c = q.transpose() * b;
  Eigen::BDCSVD<Matrix> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {q * svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

SvdFactors rsvd_prototype(const Matrix& b, Index k, std::uint64_t seed, int power_iters) {
  if (k < 1) throw std::invalid_argument("target rank must be >= 1");
  if (b.size() == 0) throw std::invalid_argument("rsvd needs a non-empty matrix");
  if (power_iters < 0) throw std::invalid_argument("power_iters must be >= 0");
  const Index width = std::min({2 * k, b.rows(), b.cols()});
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix omega(b.cols(), width);
  for (Index c = 0; c < width; ++c)
    for (Index r = 0; r < b.cols(); ++r) omega(r, c) = gauss(rng);
  Matrix sketch = b * omega;
  for (int it = 0; it < power_iters; ++it) {
    const Matrix q = orthonormal_basis(sketch);
    sketch = b * orthonormal_basis(b.transpose() * q);
  }
  return svd_from_sketch(b, sketch);
}

Matrix stack_real_imag(const ComplexMatrix& y) {
  const ComplexMatrix ystar = y.adjoint();
  Matrix p(ystar.rows(), 2 * ystar.cols());
  p.leftCols(ystar.cols()) = ystar.real();
  p.rightCols(ystar.cols()) = ystar.imag();
  return p;
}

namespace {

ReferenceSet gaussian_references(const Matrix& b, Index anchors, std::uint64_t seed) {
  // Scale anchors to the typical row norm of B so all distances share one range.
  const double row_norm = b.rowwise().norm().mean();
  const double scale = row_norm > 0.0 ? row_norm / std::sqrt(static_cast<double>(b.cols())) : 1.0;
  Rng rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vector> refs;
  for (Index k = 0; k + 1 < anchors; ++k) {
    Vector r(b.cols());
    for (Index n = 0; n < b.cols(); ++n) r(n) = scale * gauss(rng);
    refs.push_back(std::move(r));
  }
  refs.push_back(Vector::Zero(b.cols()));
  return ReferenceSet(std::move(refs));
}

}  // namespace

ReferenceSet make_rsvd_references(const Matrix& b, const RsvdOpuOptions& opts, bool binary_mode) {
  if (!binary_mode) return gaussian_references(b, opts.anchors, opts.seed);
  std::vector<Frame> frames;
  for (Index m = 0; m < b.rows(); ++m) frames.push_back({b.row(m).transpose(), static_cast<int>(m + 1)});
  ReferenceDesignConfig rc;
  rc.anchor_count = opts.anchors;
  rc.flip_probability = opts.flip_probability;
  rc.seed = opts.seed;
  return design_binary_references(frames, rc).references;
}

RsvdOpuResult rsvd_opu(const Matrix& b, Index k, const Opu& opu, const RsvdOpuOptions& opts) {
  if (k < 1) throw std::invalid_argument("target rank must be >= 1");
  if (opu.output_dim() != k)
    throw std::invalid_argument("the device must have K = " + std::to_string(k) + " output rows, has " +
                                std::to_string(opu.output_dim()));
  if (b.cols() != opu.input_dim()) throw std::invalid_argument("B width must match the device input size");
  if (opts.anchors < 2) throw std::invalid_argument("rsvd_opu needs at least 2 anchors");

  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(b.rows()));
  for (Index m = 0; m < b.rows(); ++m) frames.push_back({b.row(m).transpose(), static_cast<int>(m + 1)});

  const ReferenceSet refs =
      opts.references ? *opts.references : make_rsvd_references(b, opts, opu.binary_mode());

  RsvdOpuResult out;
  out.projections = solve_mpr(probe_frames(opu, frames, refs), opts.solver);
  for (Index row = 0; row < out.projections.rows(); ++row)
    if (out.projections.flags[static_cast<std::size_t>(row)] & kRowUnlocalizable)
      throw std::runtime_error("rsvd_opu: device row " + std::to_string(row + 1) +
                               " could not be localized for at least one row of B");
  out.sketch = stack_real_imag(out.projections.y);
  out.factors = svd_from_sketch(b, out.sketch);
  return out;
}

double mean_abs_reconstruction_error(const Matrix& b, const SvdFactors& f) {
  return (b - f.reconstruct()).cwiseAbs().mean();
}

}  // namespace mpr
