#include "mpr/probe.hpp"

#include <stdexcept>
#include <string>

namespace mpr {

ProbePlan make_probe_plan(const ReferenceSet& refs, const Vector& frame, bool binary_mode) {
  const Matrix x = refs.layout(frame);
  const Index q = x.cols();
  ProbePlan plan;
  plan.point_count = q;
  plan.inputs.resize(x.rows(), q * (q - 1) / 2);
  Index c = 0;
  for (Index j = 0; j < q; ++j)
    for (Index l = j + 1; l < q; ++l, ++c) {
      Vector diff = x.col(j) - x.col(l);
      if (binary_mode) {
        if (diff.minCoeff() < 0.0) diff = -diff;
        if (!is_binary(diff))
          throw std::invalid_argument("binary mode: difference of points " + std::to_string(j + 1) +
                                      " and " + std::to_string(l + 1) +
                                      " is not a {0,1} vector; references are not nested");
      }
      plan.inputs.col(c) = diff;
      plan.pairs.emplace_back(j, l);
    }
  return plan;
}

DistanceObservation build_distance_matrix(Index point_count, std::span<const double> readings,
                                          std::span<const double> mask, Index row, int frame) {
  const auto expected = static_cast<std::size_t>(point_count * (point_count - 1) / 2);
  if (point_count < 2 || readings.size() != expected || mask.size() != expected)
    throw std::invalid_argument("need Q(Q-1)/2 pair readings and masks");
  DistanceObservation obs;
  obs.row = row;
  obs.frame = frame;
  obs.d2 = Matrix::Zero(point_count, point_count);
  obs.mask = Matrix::Identity(point_count, point_count);
  std::size_t c = 0;
  for (Index j = 0; j < point_count; ++j)
    for (Index l = j + 1; l < point_count; ++l, ++c) {
      const bool keep = mask[c] != 0.0;
      if (keep && readings[c] < 0.0) throw std::invalid_argument("negative squared distance");
      const double value = keep ? readings[c] : 0.0;
      obs.d2(j, l) = obs.d2(l, j) = value;
      obs.mask(j, l) = obs.mask(l, j) = keep ? 1.0 : 0.0;
    }
  return obs;
}

std::vector<DistanceObservation> observations_from_record(const ProbePlan& plan,
                                                          const IntensityRecord& record,
                                                          int frame) {
  const auto npairs = static_cast<Index>(plan.pairs.size());
  if (record.intensities.cols() != npairs || record.mask.cols() != npairs)
    throw std::invalid_argument("device record does not match the probe plan");
  std::vector<DistanceObservation> out;
  out.reserve(static_cast<std::size_t>(record.intensities.rows()));
  Vector readings(npairs);
  Vector mask(npairs);
  for (Index m = 0; m < record.intensities.rows(); ++m) {
    readings = record.intensities.row(m).transpose();
    mask = record.mask.row(m).transpose();
    out.push_back(build_distance_matrix(plan.point_count,
                                        {readings.data(), static_cast<std::size_t>(npairs)},
                                        {mask.data(), static_cast<std::size_t>(npairs)}, m, frame));
  }
  return out;
}

std::vector<std::vector<DistanceObservation>> probe_frames(const Opu& opu,
                                                           std::span<const Frame> frames,
                                                           const ReferenceSet& refs) {
  std::vector<std::vector<DistanceObservation>> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    validate_frame(f, opu.input_dim(), opu.binary_mode());
    const ProbePlan plan = make_probe_plan(refs, f.values, opu.binary_mode());
    out.push_back(observations_from_record(plan, opu.measure(plan.inputs), f.index));
  }
  return out;
}

Matrix stacked_probe_inputs(std::span<const Frame> frames, const ReferenceSet& refs,
                            bool binary_mode) {
  std::vector<Matrix> parts;
  Index cols = 0;
  for (const auto& f : frames) {
    parts.push_back(make_probe_plan(refs, f.values, binary_mode).inputs);
    cols += parts.back().cols();
  }
  Matrix all(refs.input_dim(), cols);
  Index c = 0;
  for (const auto& p : parts) {
    all.middleCols(c, p.cols()) = p;
    c += p.cols();
  }
  return all;
}

}  // namespace mpr
