// Command-line driver for the simulation experiments.

#include "mpr/config.hpp"
#include "mpr/experiments.hpp"
#include "mpr/export.hpp"
#include "mpr/refdesign.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace mpr;

namespace {

struct CommonOptions {
  std::string config;
  std::string seed;
  std::vector<std::string> anchors;
  std::string bits;
  std::vector<std::string> tau;
  std::string trials;
  std::vector<std::string> set;
  std::string out = "results";
  bool full_scale = false;
  bool noiseless = false;
};

std::string join(const std::vector<std::string>& items) {
  std::string s;
  for (std::size_t i = 0; i < items.size(); ++i) s += (i ? "," : "") + items[i];
  return s;
}

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "key = value config file");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--anchors", o.anchors, "Anchor counts (including the origin)")->delimiter(',');
  cmd->add_option("--bits", o.bits, "Camera bit depth");
  cmd->add_option("--tau", o.tau, "Sensitivity thresholds; negative disables the mask")->delimiter(',');
  cmd->add_option("--trials", o.trials, "Trials per setting");
  cmd->add_option("--set", o.set, "Extra key=value overrides");
  cmd->add_option("--out", o.out, "Output directory");
  cmd->add_flag("--full-scale", o.full_scale, "Use the full-size experiment settings");
  cmd->add_flag("--noiseless", o.noiseless, "Ideal sensor: no quantization and no threshold");
}

KeyValueConfig resolve(const CommonOptions& o) {
  KeyValueConfig kv = o.config.empty() ? KeyValueConfig{} : load_config(o.config);
  if (!o.seed.empty()) kv.set("seed", o.seed);
  if (!o.anchors.empty()) kv.set("anchors", join(o.anchors));
  if (!o.bits.empty()) kv.set("bits", o.bits);
  if (!o.tau.empty()) kv.set("tau", join(o.tau));
  if (!o.trials.empty()) kv.set("trials", o.trials);
  if (o.noiseless) kv.set("noiseless", "1");
  for (const auto& item : o.set) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("command line", 0, "--set expects key=value, got '" + item + "'");
    kv.set(item.substr(0, eq), item.substr(eq + 1));
  }
  return kv;
}

std::string table_text(const Table& t, const ConfigMap& cfg) {
  std::ostringstream os;
  write_table(os, t, config_hash(cfg));
  return os.str();
}

void emit(const fs::path& path, const std::string& text) {
  write_text_file(path, text);
  std::cout << text;
  std::cerr << "wrote " << path.string() << '\n';
}

std::string matrix_text(const Matrix& m) {
  std::ostringstream os;
  write_matrix_csv(os, m);
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measurement phase retrieval simulations"};
  app.require_subcommand(1);

  CommonOptions lin, gb, sr, rs, sc, dr;
  bool digits = false;
  std::string projections;
  bool planted = false;

  auto* c_lin = app.add_subcommand("linearity", "Linearity error of recovered projections vs anchors");
  add_common(c_lin, lin);
  auto* c_gb = app.add_subcommand("goodbits", "Good bits of recovered magnitudes vs anchors");
  add_common(c_gb, gb);
  auto* c_sr = app.add_subcommand("srls-vs-mds", "Single-point localization with known vs jointly recovered anchors");
  add_common(c_sr, sr);
  auto* c_rs = app.add_subcommand("rsvd", "Randomized SVD with device projections");
  add_common(c_rs, rs);
  c_rs->add_option("--projections", projections, "Projection counts, comma separated");
  c_rs->add_flag("--planted", planted, "Planted-spectrum matrix instead of random binary");
  c_rs->add_flag("--digits", digits, "Also run the binary digit-image experiment");
  auto* c_sc = app.add_subcommand("scaling", "Distance recovery error vs anchor count");
  add_common(c_sc, sc);
  auto* c_dr = app.add_subcommand("design-refs", "Generate binary reference sets and check their invariants");
  add_common(c_dr, dr);

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_lin->parsed()) {
      const LinearityConfig cfg = linearity_config(resolve(lin), lin.full_scale);
      emit(fs::path(lin.out) / "linearity.csv", table_text(to_table(run_linearity(cfg)), describe(cfg)));
    } else if (c_gb->parsed()) {
      const GoodBitsConfig cfg = goodbits_config(resolve(gb), gb.full_scale);
      emit(fs::path(gb.out) / "goodbits.csv", table_text(to_table(run_goodbits(cfg)), describe(cfg)));
    } else if (c_sr->parsed()) {
      const SrlsConfig cfg = srls_config(resolve(sr), sr.full_scale);
      emit(fs::path(sr.out) / "srls_vs_mds.csv", table_text(to_table(run_srls_vs_mds(cfg)), describe(cfg)));
    } else if (c_rs->parsed()) {
      KeyValueConfig kv = resolve(rs);
      if (!projections.empty()) kv.set("projections", projections);
      if (planted) kv.set("planted", "1");
      const RsvdConfig cfg = rsvd_config(kv, rs.full_scale);
      const RsvdRun run = run_rsvd(cfg);
      const fs::path out(rs.out);
      emit(out / "rsvd.csv", table_text(to_table(run.rows), describe(cfg)));
      write_text_file(out / "rsvd_prototype_u.csv", matrix_text(run.prototype_factors.u));
      write_text_file(out / "rsvd_prototype_sigma.csv", matrix_text(run.prototype_factors.sigma));
      write_text_file(out / "rsvd_prototype_v.csv", matrix_text(run.prototype_factors.v));
      write_text_file(out / "rsvd_opu_u.csv", matrix_text(run.opu_factors.u));
      write_text_file(out / "rsvd_opu_sigma.csv", matrix_text(run.opu_factors.sigma));
      write_text_file(out / "rsvd_opu_v.csv", matrix_text(run.opu_factors.v));
      std::ostringstream proj;
      write_projections_csv(proj, run.opu_projections);
      write_text_file(out / "rsvd_opu_projections.csv", proj.str());
      const std::map<std::string, std::uint64_t> seeds{{"master", cfg.seed}, {"run", run.opu_seed}};
      write_text_file(out / "rsvd_opu_projections.json", projections_sidecar_json(cfg.solver, seeds));
      const Index largest = *std::max_element(cfg.projections.begin(), cfg.projections.end());
      write_text_file(out / "rsvd_manifest.json", rsvd_manifest_json(largest, cfg.anchors, run.opu_camera, seeds));
      if (digits) {
        const DigitSvdConfig dcfg = digit_svd_config(kv, rs.full_scale);
        const DigitSvdResult res = run_digit_svd(dcfg);
        Table t{{"vector", "relative_error"}, {}};
        for (Index i = 0; i < res.relative_errors.size(); ++i)
          t.rows.push_back({std::to_string(i + 1), format_number(res.relative_errors(i))});
        emit(out / "rsvd_digits.csv", table_text(t, describe(dcfg)));
        write_text_file(out / "rsvd_digits_v.csv", matrix_text(res.opu_factors.v));
      }
    } else if (c_sc->parsed()) {
      const ScalingExperimentConfig cfg = scaling_config(resolve(sc), sc.full_scale);
      emit(fs::path(sc.out) / "scaling.csv", table_text(to_table(run_scaling(cfg)), describe(cfg)));
    } else if (c_dr->parsed()) {
      const DesignRefsConfig cfg = design_refs_config(resolve(dr), dr.full_scale);
      const DesignRefsRun run = run_design_refs(cfg);
      const fs::path out(dr.out);
      write_text_file(out / "design_refs.csv", table_text(to_table(run.rows), describe(cfg)));
      if (run.first) {
        std::ostringstream refs;
        write_reference_set(*run.first, refs);
        write_text_file(out / "design_refs_first.txt", refs.str());
      }
      int failed = 0, invalid = 0;
      long retries = 0;
      for (const auto& r : run.rows) {
        failed += r.ok ? 0 : 1;
        invalid += (r.ok && !(r.nested && r.binary_differences)) ? 1 : 0;
        retries += r.ok ? r.retries : 0;
      }
      std::cout << fmt::format("sets={} failed={} invalid={} retries={} retry_rate={}\n", run.rows.size(), failed,
                               invalid, retries, static_cast<double>(retries) / static_cast<double>(run.rows.size()));
      if (failed || invalid) {
        std::cerr << "error: some reference sets failed or broke an invariant\n";
        return 2;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
