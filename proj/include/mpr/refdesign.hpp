#pragma once

#include "mpr/core.hpp"
#include "mpr/opusim.hpp"

#include <iosfwd>
#include <span>
#include <stdexcept>

namespace mpr {

struct ReferenceDesignConfig {
  /// Probability of turning each remaining zero entry on at every chain step.
  double flip_probability = 0.2;
  /// K, including the trailing origin anchor.
  Index anchor_count = 9;
  std::uint64_t seed = 0;
  /// Fresh sub-seeded attempts after the first one fails.
  int max_retries = 10;
  /// From the second anchor on, force one new entry when a step flipped
  /// nothing, so consecutive anchors never coincide.
  bool ensure_growth = false;
};

/// An anchor of the nested chain became all-ones before the chain was complete.
class AnchorSaturated : public std::runtime_error {
 public:
  AnchorSaturated(Index anchor, const std::string& what)
      : std::runtime_error(what), anchor_(anchor) {}
  /// 1-based anchor index.
  Index anchor() const { return anchor_; }

 private:
  Index anchor_;
};

struct ReferenceDesign {
  ReferenceSet references;
  int retries = 0;  // failed attempts before the returned chain
};

/// Binary anchors with nested supports: r_1 covers the union of the frame
/// supports, each r_q covers r_{q-1}, and r_K = 0. Every difference between
/// two columns of [xi_s, r_1, ..., r_K] is then {0,1} up to sign.
ReferenceDesign design_binary_references(std::span<const Frame> frames,
                                         const ReferenceDesignConfig& cfg);

enum class ThresholdStatistic { kMin, kMode, kMean };

/// Projects the zero vector `repeats` times and summarizes every reading.
double estimate_sensitivity_threshold(const Opu& opu, int repeats,
                                      ThresholdStatistic statistic = ThresholdStatistic::kMode);

/// Plain text, one anchor per line as a string of '0'/'1' characters.
void write_reference_set(const ReferenceSet& refs, std::ostream& out);
ReferenceSet read_reference_set(std::istream& in);

}  // namespace mpr
