#include "mpr/refdesign.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <string>

namespace mpr {
namespace {

std::vector<Vector> build_chain(std::span<const Frame> frames, const ReferenceDesignConfig& cfg,
                                std::uint64_t seed) {
  const Index n = frames.front().values.size();
  const Index chain_length = cfg.anchor_count - 1;
  Rng rng(seed);
  std::bernoulli_distribution flip(cfg.flip_probability);

  Vector support = Vector::Zero(n);
  for (const auto& f : frames) support += f.values;

  std::vector<Vector> anchors;
  anchors.reserve(static_cast<std::size_t>(cfg.anchor_count));
  for (Index q = 1; q <= chain_length; ++q) {
    Vector r = (support.array() != 0.0).cast<double>();
    bool grew = false;
    for (Index i = 0; i < n; ++i)
      if (r(i) == 0.0 && flip(rng)) {
        r(i) = 1.0;
        grew = true;
      }
    if (!grew && cfg.ensure_growth && q > 1 && r.minCoeff() == 0.0) {
      std::vector<Index> zeros;
      for (Index i = 0; i < n; ++i)
        if (r(i) == 0.0) zeros.push_back(i);
      std::uniform_int_distribution<std::size_t> pick(0, zeros.size() - 1);
      r(zeros[pick(rng)]) = 1.0;
    }
    if (q < chain_length && r.minCoeff() == 1.0)
      throw AnchorSaturated(q, "anchor " + std::to_string(q) + " of " +
                                   std::to_string(cfg.anchor_count) +
                                   " became all-ones before the chain was complete");
    support += r;
    anchors.push_back(std::move(r));
  }
  anchors.push_back(Vector::Zero(n));
  return anchors;
}

}  // namespace

ReferenceDesign design_binary_references(std::span<const Frame> frames,
                                         const ReferenceDesignConfig& cfg) {
  if (frames.empty()) throw std::invalid_argument("reference design needs at least one frame");
  if (cfg.anchor_count < 2) throw std::invalid_argument("anchor_count must be >= 2");
  if (!(cfg.flip_probability > 0.0 && cfg.flip_probability < 1.0))
    throw std::invalid_argument("flip probability must lie in (0, 1)");
  if (cfg.max_retries < 0) throw std::invalid_argument("max_retries must be >= 0");
  const Index n = frames.front().values.size();
  for (const auto& f : frames) validate_frame(f, n, /*binary_mode=*/true);

  for (int attempt = 0;; ++attempt) {
    try {
      return {ReferenceSet(build_chain(frames, cfg, derive_seed(cfg.seed, static_cast<std::uint64_t>(attempt)))),
              attempt};
    } catch (const AnchorSaturated&) {
      if (attempt >= cfg.max_retries) throw;
    }
  }
}

double estimate_sensitivity_threshold(const Opu& opu, int repeats, ThresholdStatistic statistic) {
  if (repeats < 1) throw std::invalid_argument("repeats must be >= 1");
  const Matrix zeros = Matrix::Zero(opu.input_dim(), repeats);
  const Matrix readings = opu.measure(zeros).intensities;
  switch (statistic) {
    case ThresholdStatistic::kMin:
      return readings.minCoeff();
    case ThresholdStatistic::kMean:
      return readings.mean();
    case ThresholdStatistic::kMode: {
      std::map<double, Index> counts;
      for (Index i = 0; i < readings.size(); ++i) ++counts[readings.data()[i]];
      // Ties resolve to the smallest level.
      auto best = counts.begin();
      for (auto it = counts.begin(); it != counts.end(); ++it)
        if (it->second > best->second) best = it;
      return best->first;
    }
  }
  throw std::logic_error("unknown threshold statistic");
}

void write_reference_set(const ReferenceSet& refs, std::ostream& out) {
  for (const auto& a : refs.anchors()) {
    if (!is_binary(a)) throw std::invalid_argument("only binary reference sets can be written as text");
    std::string line(static_cast<std::size_t>(a.size()), '0');
    for (Index i = 0; i < a.size(); ++i)
      if (a(i) == 1.0) line[static_cast<std::size_t>(i)] = '1';
    out << line << '\n';
  }
}

ReferenceSet read_reference_set(std::istream& in) {
  std::vector<Vector> anchors;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Vector a(static_cast<Index>(line.size()));
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] != '0' && line[i] != '1')
        throw std::runtime_error("reference file line " + std::to_string(line_no) +
                                 ": unexpected character '" + line[i] + "'");
      a(static_cast<Index>(i)) = line[i] == '1' ? 1.0 : 0.0;
    }
    anchors.push_back(std::move(a));
  }
  return ReferenceSet(std::move(anchors));
}

}  // namespace mpr
