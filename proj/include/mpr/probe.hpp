#pragma once

#include "mpr/core.hpp"
#include "mpr/opusim.hpp"

#include <span>
#include <utility>
#include <vector>

namespace mpr {

/// The Q(Q-1)/2 input differences x_j - x_l (j < l, lexicographic) sent to
/// the device for one frame.
struct ProbePlan {
  Matrix inputs;  // N x Q(Q-1)/2
  std::vector<std::pair<Index, Index>> pairs;
  Index point_count = 0;
};

/// In binary mode each difference is submitted with the sign that makes it
/// nonnegative; |<a, x>|^2 does not see the sign. Throws if a difference has
/// entries of both signs.
ProbePlan make_probe_plan(const ReferenceSet& refs, const Vector& frame, bool binary_mode);

/// Squared-distance matrix for one row and frame from readings listed in
/// probe-plan pair order.
DistanceObservation build_distance_matrix(Index point_count, std::span<const double> readings,
                                          std::span<const double> mask, Index row = 0,
                                          int frame = 1);

/// Splits a device record for one probe plan into per-row observations.
std::vector<DistanceObservation> observations_from_record(const ProbePlan& plan,
                                                          const IntensityRecord& record,
                                                          int frame);

/// Probes every frame against the references. Result is indexed [frame][row].
std::vector<std::vector<DistanceObservation>> probe_frames(const Opu& opu,
                                                           std::span<const Frame> frames,
                                                           const ReferenceSet& refs);

/// All probe inputs for a set of frames side by side (for exposure setup).
Matrix stacked_probe_inputs(std::span<const Frame> frames, const ReferenceSet& refs,
                            bool binary_mode);

}  // namespace mpr
