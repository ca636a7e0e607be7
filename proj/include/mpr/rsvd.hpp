#pragma once

#include "mpr/core.hpp"
#include "mpr/opusim.hpp"
#include "mpr/solver.hpp"

#include <cstdint>
#include <optional>

namespace mpr {

/// B ~= U diag(sigma) V^T; columns of U and V orthonormal, sigma nonincreasing.
struct SvdFactors {
  Matrix u;
  Vector sigma;
  Matrix v;

  Matrix reconstruct() const { return u * sigma.asDiagonal() * v.transpose(); }
  /// Leading `rank` triplets.
  SvdFactors truncated(Index rank) const;
};

/// Orthonormal basis of the column space of `sketch` (thin Householder QR).
Matrix orthonormal_basis(const Matrix& sketch);

/// Steps shared by both variants: Q = orth(sketch), C = Q^T B, C = U~ S V^T,
/// U = Q U~.
SvdFactors svd_from_sketch(const Matrix& b, const Matrix& sketch);

/// Randomized SVD with an N x 2K real Gaussian test matrix. The sketch width
/// is clipped to min(M, N). `power_iters` > 0 adds subspace iterations.
SvdFactors rsvd_prototype(const Matrix& b, Index k, std::uint64_t seed, int power_iters = 0);

struct RsvdOpuOptions {
  /// Anchor count including the origin.
  Index anchors = 5;
  std::uint64_t seed = 0;
  /// Used when the device is binary-only.
  double flip_probability = 0.2;
  SolverConfig solver{};
  /// Use these anchors instead of generating them.
  std::optional<ReferenceSet> references;
};

/// Anchors used by rsvd_opu: a nested binary chain for binary-only devices,
/// otherwise Gaussian vectors scaled to the mean row norm of B.
ReferenceSet make_rsvd_references(const Matrix& b, const RsvdOpuOptions& opts, bool binary_mode);

struct RsvdOpuResult {
  SvdFactors factors;
  Matrix sketch;  // P = [Re(Y*) Im(Y*)], M x 2K
  RecoveredProjections projections;
};

/// [Re(Y*) Im(Y*)] for Y in C^{K x M}.
Matrix stack_real_imag(const ComplexMatrix& y);

/// Randomized SVD where the sketch comes from phase-recovered device
/// projections of the rows of B. The device must have K output rows. Throws
/// std::runtime_error if any row/frame pair cannot be localized.
RsvdOpuResult rsvd_opu(const Matrix& b, Index k, const Opu& opu, const RsvdOpuOptions& opts = {});

/// Mean absolute entry of B - U S V^T.
double mean_abs_reconstruction_error(const Matrix& b, const SvdFactors& f);

}  // namespace mpr
