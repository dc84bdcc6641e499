#pragma once

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bilinrank/design.hpp"
#include "bilinrank/error.hpp"
#include "bilinrank/experiments.hpp"
#include "bilinrank/io.hpp"
#include "bilinrank/rank.hpp"
#include "bilinrank/sectors.hpp"
#include "bilinrank/svg.hpp"

namespace bilinrank::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitFailure = 3;

/// Environment variable naming the directory used when --out is omitted.
inline constexpr const char* kOutputDirEnv = "BILINRANK_OUTPUT_DIR";

inline std::filesystem::path output_path(const std::string& given, const char* default_name) {
  if (!given.empty()) return given;
  const char* dir = std::getenv(kOutputDirEnv);
  return std::filesystem::path(dir && *dir ? dir : ".") / default_name;
}

/// "start:stop:count", log-spaced, must be increasing.
inline ToleranceGrid parse_grid(const std::string& spec) {
  const auto parts = io::split(spec, ':');
  if (parts.size() != 3) throw InvalidInput("grid: expected start:stop:count, got '" + spec + "'");
  const double start = io::detail::parse_double(parts[0], "grid start");
  const double stop = io::detail::parse_double(parts[1], "grid stop");
  const std::size_t count = io::detail::parse_count(parts[2], "grid count");
  if (!(start < stop) && count > 1) throw InvalidInput("grid: start must be below stop (tolerances increase)");
  return ToleranceGrid::log_spaced(start, stop, count);
}

inline std::string weights_text(const SectorWeights& weights) {
  std::string out;
  if (!weights.defined()) return "nullspace is empty at this tolerance; sector weights undefined\n";
  for (std::size_t s = 0; s < weights.names.size(); ++s)
    out += weights.names[s] + " " + io::format_sci(weights.weights[s]) + "\n";
  const auto dom = dominant_sector(weights);
  out += "dominant " + dom.name + " " + io::format_sci(dom.weight) + (dom.tie ? " (tie)" : "") + "\n";
  return out;
}

/// Runs one command line. Output goes to `out`, diagnostics and usage to `err`.
/// Exit codes: 0 success, 2 invalid input or arguments, 3 numerical or I/O failure.
inline int cli_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Numerical rank, plateau and nullspace-sector diagnostics for bilinear observation designs",
               "bilinrank"};
  app.require_subcommand(1);

  std::string preset = "generic", config = "A", partition_spec, out_path, in_path, grid_spec = "1e-16:1e-2:29";
  std::string scheme = "two", profile_in, sectors_in, report_in;
  std::uint64_t seed = 1;
  std::size_t d = 4;
  double tol = 1e-12;

  auto* generate = app.add_subcommand("generate", "Sample a design bundle and write it as a bodf document");
  generate->add_option("--preset", preset, "generic | block-restricted | block-perturbed:<eps> | mixed:<dim>");
  generate->add_option("--config", config, "A (16x16 samples) | B | C (20x20 samples)");
  generate->add_option("--seed", seed, "RNG seed");
  generate->add_option("--partition", partition_spec, "blocks as '0,1/2,3' (default: two halves)");
  generate->add_option("--d", d, "Hilbert-space dimension");
  generate->add_option("--out", out_path, "output bundle path");

  auto* sweep_cmd = app.add_subcommand("sweep", "Rank and nullity over a tolerance grid");
  sweep_cmd->add_option("--in", in_path, "bundle path")->required();
  sweep_cmd->add_option("--grid", grid_spec, "start:stop:count, log-spaced");
  sweep_cmd->add_option("--out", out_path, "output CSV path");

  auto* plateaus_cmd = app.add_subcommand("plateaus", "Print the plateaus of a profile CSV");
  plateaus_cmd->add_option("--in", in_path, "profile CSV")->required();

  auto* sectors_cmd = app.add_subcommand("sectors", "Sector weights of the numerical nullspace");
  sectors_cmd->add_option("--in", in_path, "bundle path")->required();
  sectors_cmd->add_option("--tol", tol, "tolerance tau");
  sectors_cmd->add_option("--scheme", scheme, "two | four");
  sectors_cmd->add_option("--out", out_path, "output CSV path");

  auto* compare_cmd = app.add_subcommand("compare", "Refinement versus problem modification");
  compare_cmd->add_option("--in", in_path, "bundle path")->required();
  compare_cmd->add_option("--grid", grid_spec, "start:stop:count, log-spaced");
  compare_cmd->add_option("--tol", tol, "tolerance for the sector summary");
  compare_cmd->add_option("--scheme", scheme, "two | four");
  compare_cmd->add_option("--out", out_path, "output report path");

  auto* plot_cmd = app.add_subcommand("plot", "Render a profile, sector table or report as SVG");
  auto* plot_inputs = plot_cmd->add_option_group("input")->require_option(1);
  plot_inputs->add_option("--profile", profile_in, "profile CSV (rank staircase)");
  plot_inputs->add_option("--sectors", sectors_in, "sector CSV (weight bars)");
  plot_inputs->add_option("--report", report_in, "comparison report (procedure bars)");
  plot_cmd->add_option("--out", out_path, "output SVG path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInvalid;
  }

  try {
    if (generate->parsed()) {
      const ConfigLabel label = parse_config_label(config);
      DesignConfig cfg = label == ConfigLabel::Custom ? throw InvalidInput("--config must be A, B or C")
                                                      : DesignConfig::for_label(label, d);
      const BlockPartition partition =
          partition_spec.empty() ? BlockPartition::halves(d) : BlockPartition::parse(partition_spec);
      const DesignBundle bundle = sample_preset(cfg, partition, Preset::parse(preset), effective_seed(label, seed));
      const auto path = output_path(out_path, "bundle.bodf.json");
      io::save_bundle(bundle, path);
      out << "wrote " << path.string() << " (" << bundle.preset_label << ", config " << config << ", "
          << bundle.config.n_operators * bundle.config.n_states << "x" << bundle.config.ambient_dim() << " design)\n";
    } else if (sweep_cmd->parsed()) {
      const ToleranceGrid grid = parse_grid(grid_spec);
      const DesignBundle bundle = io::load_bundle(in_path);
      const RankProfile profile = sweep(assemble_design(bundle), grid, bundle.config.ambient_dim(), bundle.preset_label);
      const auto path = output_path(out_path, "profile.csv");
      io::export_profile(profile, path);
      out << "wrote " << path.string() << " (" << grid.size() << " tolerances)\n";
    } else if (plateaus_cmd->parsed()) {
      const RankProfile profile = io::import_profile(in_path);
      out << io::plateaus_to_text(profile, detect_plateaus(profile));
    } else if (sectors_cmd->parsed()) {
      check_tolerance(tol);
      const SectorMode mode = parse_sector_mode(scheme);
      const DesignBundle bundle = io::load_bundle(in_path);
      const NullspaceBasis basis = nullspace_basis(svd(assemble_design(bundle)), tol, bundle.preset_label);
      const SectorWeights weights = sector_weights(basis, build_sector_scheme(bundle.partition, bundle.config.d, mode));
      const auto path = output_path(out_path, "sectors.csv");
      io::export_sectors(weights, path);
      out << "nullspace dimension " << basis.dimension << " at tolerance " << io::format_sci(tol) << "\n"
          << weights_text(weights);
    } else if (compare_cmd->parsed()) {
      CompareOptions options{parse_grid(grid_spec), tol, parse_sector_mode(scheme)};
      check_tolerance(tol);
      const DesignBundle bundle = io::load_bundle(in_path);
      const ComparisonReport report =
          compare(bundle, default_refinements(bundle.seed), default_modifications(bundle.seed), options);
      const auto path = output_path(out_path, "report.json");
      io::export_report(report, path);
      out << "plateaus_preserved " << (report.plateaus_preserved ? "true" : "false") << "\n"
          << "baseline_max_rank " << report.baseline_profile.max_rank() << "\n"
          << "max_rank_after_modification " << report.max_rank_after_modification << "\n";
      if (!report.realification_mismatch_tolerances.empty())
        out << "realification doubling fails at " << report.realification_mismatch_tolerances.size()
            << " tolerance(s); see report\n";
      out << "wrote " << path.string() << "\n";
    } else if (plot_cmd->parsed()) {
      std::string doc;
      if (!profile_in.empty()) {
        doc = svg::rank_staircase({io::import_profile(profile_in)}, "Rank under tolerance variation");
      } else if (!sectors_in.empty()) {
        doc = svg::sector_bars(io::sectors_from_csv(io::read_file(sectors_in)), "Nullspace sector weights");
      } else {
        doc = svg::comparison_bars(io::report_from_text(io::read_file(report_in)), "Refinement versus modification");
      }
      const auto path = output_path(out_path, "plot.svg");
      io::write_file_atomic(path, doc);
      out << "wrote " << path.string() << "\n";
    }
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << "\n";
    return kExitFailure;
  } catch (const IoFailure& e) {
    err << "i/o failure: " << e.what() << "\n";
    return kExitFailure;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace bilinrank::cli
