#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

namespace mpr {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// 2xQ real matrix; column q holds (Re, Im) of the q-th complex point.
using PointSet = Eigen::Matrix2Xd;

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive independent sub-seeds from one base seed.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream);

/// One signal of interest. `index` is 1-based to match frame numbering.
struct Frame {
  Vector values;
  int index = 1;
};

bool is_binary(const Vector& v);

/// Throws std::invalid_argument if the frame has the wrong length or, in
/// binary mode, a non-{0,1} entry.
void validate_frame(const Frame& frame, Index input_dim, bool binary_mode);

/// Anchors r_1..r_K. The last anchor is the origin, so a frame plus the
/// anchors gives Q = K + 1 points per row.
class ReferenceSet {
 public:
  explicit ReferenceSet(std::vector<Vector> anchors);

  Index anchor_count() const { return static_cast<Index>(anchors_.size()); }
  Index point_count() const { return anchor_count() + 1; }
  Index input_dim() const { return anchors_.front().size(); }
  const std::vector<Vector>& anchors() const { return anchors_; }
  const Vector& anchor(Index k) const { return anchors_[static_cast<std::size_t>(k)]; }

  /// N x Q column layout [xi, r_1, ..., r_K].
  Matrix layout(const Vector& frame) const;

 private:
  std::vector<Vector> anchors_;
};

/// Squared distances of the Q points of one row in one frame. `mask` holds
/// 0/1; masked entries of `d2` are zero and carry no information.
struct DistanceObservation {
  Matrix d2;
  Matrix mask;
  Index row = 0;
  int frame = 1;

  Index size() const { return d2.rows(); }
  Index observed_pairs() const;
  /// Q >= 3 and every point has at least two observed distances.
  bool localizable() const;
};

/// Throws std::invalid_argument if the observation breaks the symmetric,
/// zero-diagonal / unit-diagonal-mask layout.
void validate_observation(const DistanceObservation& obs);

enum RowFlag : std::uint8_t {
  kRowOk = 0,
  kRowUnlocalizable = 1u << 0,
  kRowSmallNorm = 1u << 1,
  kRowDegenerateAlignment = 1u << 2,
};

/// Output of the phase retrieval pipeline. Each row is defined only up to one
/// phase rotation and one conjugation shared by every frame of that row.
struct RecoveredProjections {
  ComplexMatrix y;                   // M x S
  std::vector<std::uint8_t> flags;   // per row, RowFlag bits

  Index rows() const { return y.rows(); }
  Index frames() const { return y.cols(); }
  bool retained(Index m) const { return flags[static_cast<std::size_t>(m)] == kRowOk; }
};

/// D = diag(G) 1^T - 2 G + 1 diag(G)^T
Matrix kappa_operator(const Matrix& gram);

/// -1/2 J D J with J = I - 11^T / Q.
Matrix centered_gram(const Matrix& d2);

inline std::complex<double> to_complex(const PointSet& points, Index q) {
  return {points(0, q), points(1, q)};
}

/// Runs body(i) for i in [0, n) on up to hardware_concurrency threads. Each
/// index is visited exactly once; body must not share mutable state.
template <typename Body>
void parallel_for(Index n, Body&& body) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const Index workers = std::min<Index>(static_cast<Index>(hw), n);
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (Index w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (Index i = w; i < n; i += workers) body(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace mpr
