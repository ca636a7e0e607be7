#include "mpr/experiments.hpp"

#include "mpr/opusim.hpp"
#include "mpr/probe.hpp"
#include "mpr/refdesign.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mpr {

std::optional<double> threshold_from_setting(double tau) {
  if (tau < 0.0) return std::nullopt;
  return tau;
}

namespace {

Vector gaussian_vector(Index n, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = gauss(rng);
  return v;
}

// First K - 1 anchors of a longer chain plus the origin. Smaller anchor
// counts reuse a prefix so every count sees the same signals and camera.
ReferenceSet anchor_prefix(const std::vector<Vector>& pool, Index anchors) {
  if (anchors < 2 || anchors - 1 > static_cast<Index>(pool.size()))
    throw std::invalid_argument("anchor count out of range");
  std::vector<Vector> refs(pool.begin(), pool.begin() + (anchors - 1));
  refs.push_back(Vector::Zero(pool.front().size()));
  return ReferenceSet(std::move(refs));
}

CameraConfig make_camera(int bits, double tau, bool noiseless) {
  CameraConfig cam;
  cam.bits = bits;
  cam.quantize = !noiseless;
  cam.sensitivity_threshold = noiseless ? std::nullopt : threshold_from_setting(tau);
  return cam;
}

struct Summary {
  double mean = 0.0;
  double std_error = 0.0;
};

Summary summarize(const std::vector<double>& values) {
  Summary s;
  if (values.empty()) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std_error = std::sqrt(ss / static_cast<double>(values.size() - 1) / static_cast<double>(values.size()));
  }
  return s;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

Index max_of(const std::vector<Index>& v) {
  if (v.empty()) throw std::invalid_argument("empty anchor list");
  return *std::max_element(v.begin(), v.end());
}

void check_anchor_list(const std::vector<Index>& anchors, Index minimum) {
  if (anchors.empty()) throw std::invalid_argument("anchor list is empty");
  for (Index k : anchors)
    if (k < minimum) throw std::invalid_argument("anchor counts must be >= " + std::to_string(minimum));
}

SolverConfig with_iters(SolverConfig cfg, int iters) {
  cfg.gd_max_iters = iters;
  return cfg;
}

}  // namespace

std::vector<LinearityRow> run_linearity(const LinearityConfig& cfg) {
  check_anchor_list(cfg.anchors, 2);
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  const std::vector<double> taus = cfg.noiseless ? std::vector<double>{-1.0} : cfg.taus;
  const Index kmax = max_of(cfg.anchors);
  const SolverConfig methods[2] = {with_iters(cfg.solver, 0),
                                   with_iters(cfg.solver, std::max(cfg.solver.gd_max_iters, 1))};

  // errors[k][tau][method][trial]
  const std::size_t nk = cfg.anchors.size(), nt = taus.size();
  std::vector<double> errors(nk * nt * 2 * static_cast<std::size_t>(cfg.trials));
  std::vector<double> retained(errors.size());
  const auto slot = [&](std::size_t k, std::size_t t, std::size_t m, Index trial) {
    return ((k * nt + t) * 2 + m) * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(trial);
  };

  parallel_for(cfg.trials, [&](Index trial) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    const TransmissionMatrix tm = draw_transmission_matrix(cfg.rows, cfg.input_dim, derive_seed(seed, 0));
    Rng rng(derive_seed(seed, 1));
    const Vector xi1 = gaussian_vector(cfg.input_dim, rng);
    const Vector xi2 = gaussian_vector(cfg.input_dim, rng);
    std::vector<Vector> pool;
    for (Index k = 0; k + 1 < kmax; ++k) pool.push_back(gaussian_vector(cfg.input_dim, rng));
    const std::vector<Frame> frames{{xi1, 1}, {xi2, 2}, {xi1 + xi2, 3}};

    CameraConfig base = make_camera(cfg.bits, -1.0, cfg.noiseless);
    if (!cfg.noiseless)
      base.exposure_gain = auto_exposure(tm, stacked_probe_inputs(frames, anchor_prefix(pool, kmax), false),
                                         base, cfg.exposure_target);

    for (std::size_t ki = 0; ki < nk; ++ki) {
      const ReferenceSet refs = anchor_prefix(pool, cfg.anchors[ki]);
      for (std::size_t ti = 0; ti < nt; ++ti) {
        CameraConfig cam = base;
        if (!cfg.noiseless) cam.sensitivity_threshold = threshold_from_setting(taus[ti]);
        const SimulatedOpu opu(tm, cam);
        const auto obs = probe_frames(opu, frames, refs);
        for (std::size_t mi = 0; mi < 2; ++mi) {
          const RecoveredProjections rp = solve_mpr(obs, methods[mi]);
          std::vector<bool> keep(static_cast<std::size_t>(rp.rows()));
          Index kept = 0;
          for (Index m = 0; m < rp.rows(); ++m) {
            keep[static_cast<std::size_t>(m)] = rp.retained(m) && rp.y(m, 2) != 0.0;
            kept += keep[static_cast<std::size_t>(m)] ? 1 : 0;
          }
          const LinearityTriple triple{rp.y.col(0), rp.y.col(1), rp.y.col(2)};
          errors[slot(ki, ti, mi, trial)] = linearity_error(triple, keep);
          retained[slot(ki, ti, mi, trial)] = static_cast<double>(kept);
        }
      }
    }
  });

  std::vector<LinearityRow> rows;
  for (std::size_t ki = 0; ki < nk; ++ki)
    for (std::size_t ti = 0; ti < nt; ++ti)
      for (std::size_t mi = 0; mi < 2; ++mi) {
        const auto first = errors.begin() + static_cast<std::ptrdiff_t>(slot(ki, ti, mi, 0));
        const auto kept_first = retained.begin() + static_cast<std::ptrdiff_t>(slot(ki, ti, mi, 0));
        const Summary s = summarize({first, first + cfg.trials});
        const Summary r = summarize({kept_first, kept_first + cfg.trials});
        rows.push_back({cfg.anchors[ki], mi == 0 ? "MDS" : "MDS-GD", taus[ti], s.mean, s.std_error,
                        cfg.trials, r.mean});
      }
  return rows;
}

std::vector<GoodBitsRow> run_goodbits(const GoodBitsConfig& cfg) {
  check_anchor_list(cfg.anchors, 2);
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  const std::vector<double> taus = cfg.noiseless ? std::vector<double>{-1.0} : cfg.taus;
  const Index kmax = max_of(cfg.anchors);
  const SolverConfig mds = with_iters(cfg.solver, 0);
  const SolverConfig gd = with_iters(cfg.solver, std::max(cfg.solver.gd_max_iters, 1));

  const std::size_t nk = cfg.anchors.size(), nt = taus.size();
  // bits[k][tau][method: raw, MDS, MDS-GD][trial]
  std::vector<double> bits(nk * nt * 3 * static_cast<std::size_t>(cfg.trials));
  const auto slot = [&](std::size_t k, std::size_t t, std::size_t m, Index trial) {
    return ((k * nt + t) * 3 + m) * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(trial);
  };

  parallel_for(cfg.trials, [&](Index trial) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    const TransmissionMatrix tm = draw_transmission_matrix(1, cfg.input_dim, derive_seed(seed, 0));
    Rng rng(derive_seed(seed, 1));
    const Vector xi = gaussian_vector(cfg.input_dim, rng);
    std::vector<Vector> pool;
    for (Index k = 0; k + 1 < kmax; ++k) pool.push_back(gaussian_vector(cfg.input_dim, rng));
    const std::vector<Frame> frames{{xi, 1}};

    CameraConfig base = make_camera(cfg.bits, -1.0, cfg.noiseless);
    if (!cfg.noiseless)
      base.exposure_gain = auto_exposure(tm, stacked_probe_inputs(frames, anchor_prefix(pool, kmax), false),
                                         base, cfg.exposure_target);
    const double truth = base.exposure_gain * raw_intensity(tm, xi)(0, 0);

    for (std::size_t ki = 0; ki < nk; ++ki) {
      const ReferenceSet refs = anchor_prefix(pool, cfg.anchors[ki]);
      for (std::size_t ti = 0; ti < nt; ++ti) {
        CameraConfig cam = base;
        if (!cfg.noiseless) cam.sensitivity_threshold = threshold_from_setting(taus[ti]);
        const SimulatedOpu opu(tm, cam);
        const auto obs = probe_frames(opu, frames, refs);
        const double raw = obs[0][0].d2(0, obs[0][0].size() - 1);
        bits[slot(ki, ti, 0, trial)] = good_bits(truth, raw);
        bits[slot(ki, ti, 1, trial)] = good_bits(truth, std::norm(solve_mpr(obs, mds).y(0, 0)));
        bits[slot(ki, ti, 2, trial)] = good_bits(truth, std::norm(solve_mpr(obs, gd).y(0, 0)));
      }
    }
  });

  static const char* names[3] = {"raw", "MDS", "MDS-GD"};
  std::vector<GoodBitsRow> rows;
  for (std::size_t ki = 0; ki < nk; ++ki)
    for (std::size_t ti = 0; ti < nt; ++ti)
      for (std::size_t mi = 0; mi < 3; ++mi) {
        const auto first = bits.begin() + static_cast<std::ptrdiff_t>(slot(ki, ti, mi, 0));
        const Summary s = summarize({first, first + cfg.trials});
        rows.push_back({cfg.anchors[ki], names[mi], taus[ti], s.mean, s.std_error, cfg.trials});
      }
  return rows;
}

std::vector<SrlsRow> run_srls_vs_mds(const SrlsConfig& cfg) {
  check_anchor_list(cfg.anchors, 3);
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  const Index kmax = max_of(cfg.anchors);
  const std::size_t nk = cfg.anchors.size();
  std::vector<double> snr(nk * 2 * static_cast<std::size_t>(cfg.trials));
  const auto slot = [&](std::size_t k, std::size_t m, Index trial) {
    return (k * 2 + m) * static_cast<std::size_t>(cfg.trials) + static_cast<std::size_t>(trial);
  };

  parallel_for(cfg.trials, [&](Index trial) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
    const TransmissionMatrix tm = draw_transmission_matrix(1, cfg.input_dim, derive_seed(seed, 0));
    Rng rng(derive_seed(seed, 1));
    const Vector xi = gaussian_vector(cfg.input_dim, rng);
    std::vector<Vector> pool;
    for (Index k = 0; k + 1 < kmax; ++k) pool.push_back(gaussian_vector(cfg.input_dim, rng));
    const std::vector<Frame> frames{{xi, 1}};

    CameraConfig cam = make_camera(cfg.bits, cfg.tau, cfg.noiseless);
    if (!cfg.noiseless)
      cam.exposure_gain = auto_exposure(tm, stacked_probe_inputs(frames, anchor_prefix(pool, kmax), false),
                                        cam, cfg.exposure_target);
    const SimulatedOpu opu(tm, cam);
    const double root_gain = std::sqrt(cam.exposure_gain);
    const auto project = [&](const Vector& x) {
      return root_gain * (tm.a.row(0) * x.cast<std::complex<double>>())(0);
    };
    const std::complex<double> truth = project(xi);

    for (std::size_t ki = 0; ki < nk; ++ki) {
      const ReferenceSet refs = anchor_prefix(pool, cfg.anchors[ki]);
      const Index k = refs.anchor_count();
      Eigen::Matrix2Xd anchors(2, k);
      for (Index q = 0; q < k; ++q) {
        const auto a = project(refs.anchor(q));
        anchors.col(q) = Eigen::Vector2d(a.real(), a.imag());
      }
      const DistanceObservation obs = probe_frames(opu, frames, refs)[0][0];

      Vector dist(k);
      for (Index q = 0; q < k; ++q) dist(q) = std::sqrt(std::max(obs.d2(0, q + 1), 0.0));
      const Eigen::Vector2d srls = srls_localize(anchors, dist);
      snr[slot(ki, 0, trial)] =
          snr_db(ComplexVector::Constant(1, truth), ComplexVector::Constant(1, {srls(0), srls(1)}));

      const PointSet points = localize_frame(obs, cfg.solver);
      const ProcrustesResult align = procrustes(anchors, points.rightCols(k));
      const Eigen::Vector2d joint = align.rotation * points.col(0);
      snr[slot(ki, 1, trial)] =
          snr_db(ComplexVector::Constant(1, truth), ComplexVector::Constant(1, {joint(0), joint(1)}));
    }
  });

  std::vector<SrlsRow> rows;
  for (std::size_t ki = 0; ki < nk; ++ki)
    for (std::size_t mi = 0; mi < 2; ++mi) {
      const auto first = snr.begin() + static_cast<std::ptrdiff_t>(slot(ki, mi, 0));
      const Summary s = summarize({first, first + cfg.trials});
      rows.push_back({cfg.anchors[ki], mi == 0 ? "SR-LS-known-anchors" : "MDS-joint", s.mean, s.std_error,
                      cfg.trials});
    }
  return rows;
}

Matrix random_binary_matrix(Index rows, Index cols, double density, std::uint64_t seed) {
  Rng rng(seed);
  std::bernoulli_distribution on(density);
  Matrix b(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c) b(r, c) = on(rng) ? 1.0 : 0.0;
  return b;
}

Matrix planted_spectrum_matrix(Index rows, Index cols, const Vector& spectrum, std::uint64_t seed) {
  const Index rank = spectrum.size();
  if (rank > std::min(rows, cols)) throw std::invalid_argument("spectrum longer than min(rows, cols)");
  Rng rng(seed);
  Matrix gu(rows, rank), gv(cols, rank);
  for (Index c = 0; c < rank; ++c) {
    for (Index r = 0; r < rows; ++r) gu(r, c) = std::normal_distribution<double>(0.0, 1.0)(rng);
    for (Index r = 0; r < cols; ++r) gv(r, c) = std::normal_distribution<double>(0.0, 1.0)(rng);
  }
  const Matrix u = orthonormal_basis(gu);
  const Matrix v = orthonormal_basis(gv);
  return u * spectrum.asDiagonal() * v.transpose();
}

Matrix digit_like_matrix(Index count, std::uint64_t seed) {
  constexpr int side = 28;
  Rng rng(seed);
  std::uniform_real_distribution<double> pos(5.0, 22.0);
  std::uniform_int_distribution<int> strokes(2, 4);
  Matrix b = Matrix::Zero(count, side * side);
  for (Index i = 0; i < count; ++i) {
    const int n = strokes(rng);
    for (int s = 0; s < n; ++s) {
      const double x0 = pos(rng), y0 = pos(rng), x1 = pos(rng), y1 = pos(rng);
      for (int t = 0; t <= 40; ++t) {
        const double x = x0 + (x1 - x0) * t / 40.0;
        const double y = y0 + (y1 - y0) * t / 40.0;
        for (int dx = 0; dx <= 1; ++dx)
          for (int dy = 0; dy <= 1; ++dy) {
            const int px = std::clamp(static_cast<int>(x) + dx, 0, side - 1);
            const int py = std::clamp(static_cast<int>(y) + dy, 0, side - 1);
            b(i, py * side + px) = 1.0;
          }
      }
    }
  }
  return b;
}

RsvdRun run_rsvd(const RsvdConfig& cfg) {
  if (cfg.projections.empty()) throw std::invalid_argument("projection list is empty");
  if (cfg.trials < 1) throw std::invalid_argument("trials must be >= 1");
  const std::size_t np = cfg.projections.size();
  const auto nt = static_cast<std::size_t>(cfg.trials);
  std::vector<double> proto(np * nt), opu_err(np * nt);
  const Index largest = *std::max_element(cfg.projections.begin(), cfg.projections.end());
  RsvdRun run;

  for (std::size_t pi = 0; pi < np; ++pi) {
    const Index k = cfg.projections[pi];
    if (k < 1) throw std::invalid_argument("projection counts must be >= 1");
    for (Index trial = 0; trial < cfg.trials; ++trial) {
      const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
      Matrix b;
      if (cfg.planted_spectrum) {
        const Index rank = std::min(cfg.matrix_rows, cfg.matrix_cols);
        Vector spectrum(rank);
        for (Index i = 0; i < rank; ++i) spectrum(i) = 10.0 * std::pow(0.6, static_cast<double>(i));
        b = planted_spectrum_matrix(cfg.matrix_rows, cfg.matrix_cols, spectrum, derive_seed(seed, 0));
      } else {
        b = random_binary_matrix(cfg.matrix_rows, cfg.matrix_cols, 0.5, derive_seed(seed, 0));
      }
      const std::uint64_t kseed = derive_seed(seed, 100 + static_cast<std::uint64_t>(k));

      const SvdFactors pf = rsvd_prototype(b, k, derive_seed(kseed, 1));
      proto[pi * nt + static_cast<std::size_t>(trial)] = mean_abs_reconstruction_error(b, pf);

      RsvdOpuOptions opts;
      opts.anchors = cfg.anchors;
      opts.seed = derive_seed(kseed, 2);
      opts.solver = cfg.solver;
      opts.references = make_rsvd_references(b, opts, false);
      const TransmissionMatrix tm = draw_transmission_matrix(k, cfg.matrix_cols, derive_seed(kseed, 3));
      CameraConfig cam = make_camera(cfg.bits, cfg.tau, cfg.noiseless);
      if (!cfg.noiseless) {
        std::vector<Frame> frames;
        for (Index m = 0; m < b.rows(); ++m) frames.push_back({b.row(m).transpose(), static_cast<int>(m + 1)});
        cam.exposure_gain =
            auto_exposure(tm, stacked_probe_inputs(frames, *opts.references, false), cam, cfg.exposure_target);
      }
      const SimulatedOpu opu(tm, cam);
      const RsvdOpuResult res = rsvd_opu(b, k, opu, opts);
      opu_err[pi * nt + static_cast<std::size_t>(trial)] = mean_abs_reconstruction_error(b, res.factors);
      if (k == largest && trial == 0) {
        run.prototype_factors = pf;
        run.opu_factors = res.factors;
        run.opu_projections = res.projections;
        run.opu_camera = cam;
        run.opu_seed = kseed;
      }
    }
  }
  for (std::size_t pi = 0; pi < np; ++pi) {
    const std::vector<double> p(proto.begin() + static_cast<std::ptrdiff_t>(pi * nt),
                                proto.begin() + static_cast<std::ptrdiff_t>((pi + 1) * nt));
    const std::vector<double> o(opu_err.begin() + static_cast<std::ptrdiff_t>(pi * nt),
                                opu_err.begin() + static_cast<std::ptrdiff_t>((pi + 1) * nt));
    run.rows.push_back({cfg.projections[pi], "prototype", summarize(p).mean, median(p), cfg.trials});
    run.rows.push_back({cfg.projections[pi], "opu", summarize(o).mean, median(o), cfg.trials});
  }
  return run;
}

DigitSvdResult run_digit_svd(const DigitSvdConfig& cfg) {
  const Matrix b = digit_like_matrix(cfg.images, derive_seed(cfg.seed, 0));
  RsvdOpuOptions opts;
  opts.anchors = cfg.anchors;
  opts.seed = derive_seed(cfg.seed, 1);
  opts.flip_probability = cfg.flip_probability;
  opts.solver = cfg.solver;
  opts.references = make_rsvd_references(b, opts, true);

  std::vector<Frame> frames;
  for (Index m = 0; m < b.rows(); ++m) frames.push_back({b.row(m).transpose(), static_cast<int>(m + 1)});
  const TransmissionMatrix tm = draw_transmission_matrix(cfg.projections, b.cols(), derive_seed(cfg.seed, 2));
  CameraConfig cam = make_camera(cfg.bits, -1.0, false);
  cam.binary_mode = true;
  cam.exposure_gain = auto_exposure(tm, stacked_probe_inputs(frames, *opts.references, true), cam,
                                    cfg.exposure_target);
  const SimulatedOpu opu(tm, cam);
  const RsvdOpuResult res = rsvd_opu(b, cfg.projections, opu, opts);

  Eigen::BDCSVD<Matrix> dense(b, Eigen::ComputeThinV);
  const Index count = std::min({cfg.vectors, res.factors.sigma.size(), dense.singularValues().size()});
  DigitSvdResult out;
  out.opu_factors = res.factors;
  out.relative_errors.resize(count);
  for (Index i = 0; i < count; ++i) {
    const Vector ref = dense.matrixV().col(i);
    const Vector est = res.factors.v.col(i);
    out.relative_errors(i) = std::min((est - ref).norm(), (est + ref).norm()) / ref.norm();
  }
  return out;
}

std::vector<ScalingExperimentRow> run_scaling(const ScalingExperimentConfig& cfg) {
  std::vector<ScalingExperimentRow> out;
  for (std::size_t i = 0; i < cfg.keep_probabilities.size(); ++i) {
    ScalingConfig sc;
    sc.keep_probability = cfg.keep_probabilities[i];
    sc.bits = cfg.bits;
    sc.anchor_counts = cfg.anchors;
    sc.trials = cfg.trials;
    sc.seed = derive_seed(cfg.seed, i);
    sc.noise = !cfg.noiseless;
    sc.solver = cfg.solver;
    for (const auto& row : edm_error_scaling(sc)) out.push_back({sc.keep_probability, row});
  }
  return out;
}

bool references_nested(const ReferenceSet& refs) {
  const Index chain = refs.anchor_count() - 1;
  for (Index l = 0; l < chain; ++l)
    for (Index q = l + 1; q < chain; ++q)
      if (((refs.anchor(l).array() != 0.0) && (refs.anchor(q).array() == 0.0)).any()) return false;
  return true;
}

bool references_binary_differences(const ReferenceSet& refs, std::span<const Frame> frames) {
  const Index chain = refs.anchor_count() - 1;
  for (Index q = 0; q < chain; ++q) {
    for (const auto& f : frames)
      if (!is_binary(refs.anchor(q) - f.values)) return false;
    for (Index l = 0; l < q; ++l)
      if (!is_binary(refs.anchor(q) - refs.anchor(l))) return false;
  }
  return true;
}

DesignRefsRun run_design_refs(const DesignRefsConfig& cfg) {
  if (cfg.sets < 1) throw std::invalid_argument("sets must be >= 1");
  DesignRefsRun run;
  run.rows.resize(static_cast<std::size_t>(cfg.sets));
  std::vector<std::optional<ReferenceSet>> firsts(1);
  parallel_for(cfg.sets, [&](Index s) {
    const std::uint64_t seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(s));
    std::vector<Frame> frames;
    for (Index f = 0; f < cfg.frames; ++f)
      frames.push_back({random_binary_matrix(1, cfg.input_dim, cfg.frame_density, derive_seed(seed, f))
                            .row(0)
                            .transpose(),
                        static_cast<int>(f + 1)});
    ReferenceDesignConfig rc;
    rc.anchor_count = cfg.anchors;
    rc.flip_probability = cfg.flip_probability;
    rc.seed = derive_seed(seed, 1000);
    DesignRefsRow& row = run.rows[static_cast<std::size_t>(s)];
    row.set = static_cast<int>(s);
    try {
      const ReferenceDesign design = design_binary_references(frames, rc);
      row.ok = true;
      row.retries = design.retries;
      row.nested = references_nested(design.references);
      row.binary_differences = references_binary_differences(design.references, frames);
      if (s == 0) firsts[0] = design.references;
    } catch (const AnchorSaturated&) {
      row.retries = rc.max_retries + 1;
    }
  });
  run.first = firsts[0];
  return run;
}

}  // namespace mpr
