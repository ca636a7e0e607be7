#include "mpr/core.hpp"

#include <stdexcept>
#include <string>

namespace mpr {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool is_binary(const Vector& v) {
  return (v.array() == 0.0 || v.array() == 1.0).all();
}

void validate_frame(const Frame& frame, Index input_dim, bool binary_mode) {
  if (frame.values.size() != input_dim)
    throw std::invalid_argument("frame " + std::to_string(frame.index) + " has length " +
                                std::to_string(frame.values.size()) + ", expected " +
                                std::to_string(input_dim));
  if (frame.index < 1) throw std::invalid_argument("frame index must be >= 1");
  if (binary_mode && !is_binary(frame.values))
    throw std::invalid_argument("frame " + std::to_string(frame.index) +
                                " is not binary but binary mode is set");
}

ReferenceSet::ReferenceSet(std::vector<Vector> anchors) : anchors_(std::move(anchors)) {
  if (anchors_.size() < 2)
    throw std::invalid_argument("a reference set needs at least 2 anchors (one is the origin)");
  const Index n = anchors_.front().size();
  if (n == 0) throw std::invalid_argument("anchors must be non-empty vectors");
  for (const auto& a : anchors_)
    if (a.size() != n) throw std::invalid_argument("anchors must share one length");
  if (!anchors_.back().isZero(0.0))
    throw std::invalid_argument("the last anchor must be the all-zeros origin");
}

Matrix ReferenceSet::layout(const Vector& frame) const {
  if (frame.size() != input_dim())
    throw std::invalid_argument("frame length does not match anchor length");
  Matrix x(input_dim(), point_count());
  x.col(0) = frame;
  for (Index k = 0; k < anchor_count(); ++k) x.col(k + 1) = anchor(k);
  return x;
}

Index DistanceObservation::observed_pairs() const {
  Index count = 0;
  for (Index j = 0; j < size(); ++j)
    for (Index l = j + 1; l < size(); ++l)
      if (mask(j, l) != 0.0) ++count;
  return count;
}

bool DistanceObservation::localizable() const {
  const Index q = size();
  if (q < 3) return false;
  for (Index j = 0; j < q; ++j) {
    Index seen = 0;
    for (Index l = 0; l < q; ++l)
      if (l != j && mask(j, l) != 0.0) ++seen;
    if (seen < 2) return false;
  }
  return true;
}

void validate_observation(const DistanceObservation& obs) {
  const Index q = obs.d2.rows();
  if (obs.d2.cols() != q || obs.mask.rows() != q || obs.mask.cols() != q)
    throw std::invalid_argument("distance and mask matrices must be square and equal-sized");
  for (Index j = 0; j < q; ++j) {
    if (obs.d2(j, j) != 0.0) throw std::invalid_argument("distance diagonal must be zero");
    if (obs.mask(j, j) != 1.0) throw std::invalid_argument("mask diagonal must be one");
    for (Index l = j + 1; l < q; ++l) {
      if (obs.d2(j, l) != obs.d2(l, j) || obs.mask(j, l) != obs.mask(l, j))
        throw std::invalid_argument("distance observation must be symmetric");
      if (obs.mask(j, l) != 0.0 && obs.mask(j, l) != 1.0)
        throw std::invalid_argument("mask entries must be 0 or 1");
      if (obs.mask(j, l) == 0.0 && obs.d2(j, l) != 0.0)
        throw std::invalid_argument("masked distances must be stored as zero");
      if (obs.d2(j, l) < 0.0) throw std::invalid_argument("squared distances must be >= 0");
    }
  }
}

Matrix kappa_operator(const Matrix& gram) {
  if (gram.rows() != gram.cols()) throw std::invalid_argument("kappa_operator: matrix is not square");
  const Index q = gram.rows();
  const Vector diag = gram.diagonal();
  const Vector ones = Vector::Ones(q);
  return diag * ones.transpose() - 2.0 * gram + ones * diag.transpose();
}

Matrix centered_gram(const Matrix& d2) {
  if (d2.rows() != d2.cols()) throw std::invalid_argument("centered_gram: matrix is not square");
  const Index q = d2.rows();
  if (q == 0) return Matrix(0, 0);
  // J D J without forming J: subtract row means, column means, add grand mean.
  const Vector row_mean = d2.rowwise().mean();
  const Eigen::RowVectorXd col_mean = d2.colwise().mean();
  const double grand = d2.mean();
  Matrix g = d2;
  g.colwise() -= row_mean;
  g.rowwise() -= col_mean;
  g.array() += grand;
  g *= -0.5;
  return 0.5 * (g + g.transpose());
}

}  // namespace mpr
