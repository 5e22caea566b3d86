// Command line front end: simulate panels, fit the within-group estimator,
// run the influence analysis, and emit machine-readable reports and plots.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "paneldiag/csv.hpp"
#include "paneldiag/dgp.hpp"
#include "paneldiag/errors.hpp"
#include "paneldiag/estimator.hpp"
#include "paneldiag/influence.hpp"
#include "paneldiag/report.hpp"
#include "paneldiag/svg.hpp"

namespace {

namespace fs = std::filesystem;
using paneldiag::CsvSchema;
using paneldiag::DgpConfig;
using paneldiag::PanelDataset;

struct Options {
  // Input: exactly one of a CSV path or a generator seed.
  std::string input;
  CsvSchema schema;
  bool have_seed = false;
  std::uint64_t seed = 0;
  std::string preset;
  int n_units = 100;
  int n_periods = 20;
  double beta0 = 1.0;
  double beta1 = 0.5;
  // Analysis and output.
  std::string residual_norm = "global";
  std::string cutoff = "f_median";
  std::string out_dir = ".";
  std::vector<std::string> emit;
};

void add_generator_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--seed", opt.seed, "Generator seed")
      ->each([&](const std::string&) { opt.have_seed = true; });
  cmd->add_option("--preset", opt.preset,
                  "Contamination preset: figure or appendix");
  cmd->add_option("--n", opt.n_units, "Generated units (default 100)");
  cmd->add_option("--t", opt.n_periods, "Generated periods (default 20)");
  cmd->add_option("--beta0", opt.beta0, "Generator intercept (default 1)");
  cmd->add_option("--beta1", opt.beta1, "Generator slope (default 0.5)");
}

void add_input_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--input", opt.input, "Long-format panel CSV to analyse");
  cmd->add_option("--unit-col", opt.schema.unit_col,
                  "Unit id column (default unit)");
  cmd->add_option("--time-col", opt.schema.time_col,
                  "Period id column (default time)");
  cmd->add_option("--y-col", opt.schema.y_col,
                  "Response column (default y)");
  cmd->add_option("--x-cols", opt.schema.x_cols,
                  "Regressor columns, comma separated (default x)")
      ->delimiter(',');
  add_generator_flags(cmd, opt);
}

void add_analysis_flags(CLI::App* cmd, Options& opt) {
  cmd->add_option("--residual-norm", opt.residual_norm,
                  "Residual share normalization: global (default) or period")
      ->check(CLI::IsMember({"global", "period"}));
  cmd->add_option("--cutoff", opt.cutoff,
                  "Influence cutoff to annotate: f_median (default), unity, "
                  "four_over_n")
      ->check(CLI::IsMember({"f_median", "unity", "four_over_n"}));
}

void add_output_flags(CLI::App* cmd, Options& opt,
                      const std::string& default_emit) {
  cmd->add_option("--out", opt.out_dir, "Output directory (default .)");
  opt.emit.clear();
  cmd->add_option("--emit", opt.emit,
                  "Artifacts to write, comma separated subset of "
                  "{json,csv,svg} (default " + default_emit + ")")
      ->delimiter(',')
      ->check(CLI::IsMember({"json", "csv", "svg"}));
}

DgpConfig generator_config(const Options& opt) {
  DgpConfig config;
  config.n_units = opt.n_units;
  config.n_periods = opt.n_periods;
  config.beta0 = opt.beta0;
  config.beta1 = opt.beta1;
  config.seed = opt.seed;
  if (!opt.preset.empty()) config.contamination = paneldiag::preset(opt.preset);
  return config;
}

// Resolves the panel and, when generated, the config that produced it.
PanelDataset resolve_panel(const Options& opt,
                           std::optional<DgpConfig>* config_out = nullptr) {
  const bool have_input = !opt.input.empty();
  if (have_input == opt.have_seed)
    throw paneldiag::ValidationError(
        "report-cli", "exactly one input source required: pass --input PATH "
                      "or --seed N");
  if (have_input) {
    if (!opt.preset.empty())
      throw paneldiag::ValidationError(
          "report-cli", "--preset applies to generated panels, not --input");
    return paneldiag::load_csv(opt.input, opt.schema);
  }
  DgpConfig config = generator_config(opt);
  if (config_out) *config_out = config;
  return paneldiag::generate(config);
}

fs::path prepare_out_dir(const Options& opt) {
  fs::path dir(opt.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec)
    throw paneldiag::IoError("report-cli", "cannot create output directory " +
                                               dir.string() + ": " +
                                               ec.message());
  return dir;
}

bool emits(const Options& opt, const std::string& what,
           const std::vector<std::string>& defaults) {
  const std::vector<std::string>& list = opt.emit.empty() ? defaults : opt.emit;
  return std::find(list.begin(), list.end(), what) != list.end();
}

void write_panel_files(const PanelDataset& panel, const DgpConfig& config,
                       const fs::path& dir) {
  paneldiag::write_csv(panel, (dir / "panel.csv").string());
  paneldiag::write_text_file((dir / "manifest.json").string(),
                             paneldiag::dgp_manifest_to_json(config));
}

void write_report_files(const paneldiag::InfluenceReport& report,
                        const Options& opt, const fs::path& dir,
                        const std::vector<std::string>& default_emit) {
  if (emits(opt, "json", default_emit))
    paneldiag::write_text_file((dir / "report.json").string(),
                               paneldiag::report_to_json(report));
  if (emits(opt, "csv", default_emit)) {
    const auto& ids = report.index->unit_ids;
    paneldiag::write_text_file((dir / "units.csv").string(),
                               paneldiag::units_to_csv(report));
    paneldiag::write_text_file((dir / "joint.csv").string(),
                               paneldiag::matrix_to_csv(report.joint, ids));
    paneldiag::write_text_file(
        (dir / "joint_effect.csv").string(),
        paneldiag::matrix_to_csv(report.joint_effect, ids));
    paneldiag::write_text_file(
        (dir / "cond.csv").string(),
        paneldiag::matrix_to_csv(report.conditional, ids));
    paneldiag::write_text_file(
        (dir / "cond_effect.csv").string(),
        paneldiag::matrix_to_csv(report.conditional_effect, ids));
  }
  if (emits(opt, "svg", default_emit)) {
    const paneldiag::CutoffMode mode =
        paneldiag::cutoff_mode_from_name(opt.cutoff);
    const paneldiag::PlotArtifact scatter =
        paneldiag::leverage_residual_plot(report);
    paneldiag::write_text_file((dir / "lvr2.svg").string(), scatter.svg);
    const auto heats = paneldiag::influence_heat_plots(report, mode);
    const char* names[] = {"joint.svg", "joint_effect.svg", "cond.svg",
                           "cond_effect.svg"};
    for (std::size_t h = 0; h < heats.size(); ++h)
      paneldiag::write_text_file((dir / names[h]).string(), heats[h].svg);
  }
}

paneldiag::InfluenceReport analyse(const PanelDataset& panel,
                                   const Options& opt) {
  paneldiag::InfluenceOptions options;
  options.normalization = opt.residual_norm == "period"
                              ? paneldiag::ResidualNormalization::PerPeriod
                              : paneldiag::ResidualNormalization::Global;
  return paneldiag::compute_influence_report(panel, options);
}

int run_simulate(const Options& opt) {
  if (!opt.input.empty())
    throw paneldiag::ValidationError("report-cli",
                                     "simulate generates data; --input is not "
                                     "accepted");
  if (!opt.have_seed)
    throw paneldiag::ValidationError("report-cli", "simulate requires --seed");
  const DgpConfig config = generator_config(opt);
  const PanelDataset panel = paneldiag::generate(config);
  write_panel_files(panel, config, prepare_out_dir(opt));
  return 0;
}

int run_fit(const Options& opt) {
  const PanelDataset panel = resolve_panel(opt);
  const paneldiag::FixedEffectsFit fit = paneldiag::fit_within(panel);
  paneldiag::write_text_file((prepare_out_dir(opt) / "fit.json").string(),
                             paneldiag::fit_to_json(fit));
  return 0;
}

int run_influence(const Options& opt) {
  const PanelDataset panel = resolve_panel(opt);
  write_report_files(analyse(panel, opt), opt, prepare_out_dir(opt), {"json"});
  return 0;
}

int run_plot(const Options& opt) {
  const PanelDataset panel = resolve_panel(opt);
  write_report_files(analyse(panel, opt), opt, prepare_out_dir(opt), {"svg"});
  return 0;
}

int run_all(const Options& opt) {
  std::optional<DgpConfig> config;
  const PanelDataset panel = resolve_panel(opt, &config);
  const fs::path dir = prepare_out_dir(opt);
  if (config) write_panel_files(panel, *config, dir);
  const paneldiag::FixedEffectsFit fit = paneldiag::fit_within(panel);
  paneldiag::write_text_file((dir / "fit.json").string(),
                             paneldiag::fit_to_json(fit));
  write_report_files(analyse(panel, opt), opt, dir, {"json", "csv", "svg"});
  return 0;
}

int report_error(const char* kind, const std::string& module,
                 const std::string& message, int code) {
  nlohmann::ordered_json err;
  err["error"]["kind"] = kind;
  err["error"]["module"] = module;
  err["error"]["message"] = message;
  std::cerr << err.dump() << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Influence diagnostics for linear fixed-effects panel "
               "regressions"};
  app.require_subcommand(1);

  Options opt;
  CLI::App* simulate =
      app.add_subcommand("simulate", "Generate a synthetic panel CSV");
  add_generator_flags(simulate, opt);
  add_output_flags(simulate, opt, "csv");

  CLI::App* fit_cmd =
      app.add_subcommand("fit", "Fit the within-group estimator");
  add_input_flags(fit_cmd, opt);
  add_output_flags(fit_cmd, opt, "json");

  CLI::App* influence =
      app.add_subcommand("influence", "Full influence analysis report");
  add_input_flags(influence, opt);
  add_analysis_flags(influence, opt);
  add_output_flags(influence, opt, "json");

  CLI::App* plot = app.add_subcommand("plot", "Render diagnostic SVG plots");
  add_input_flags(plot, opt);
  add_analysis_flags(plot, opt);
  add_output_flags(plot, opt, "svg");

  CLI::App* all = app.add_subcommand(
      "all", "Simulate (or load), fit, analyse and plot in one run");
  add_input_flags(all, opt);
  add_analysis_flags(all, opt);
  add_output_flags(all, opt, "json,csv,svg");

  try {
    app.parse(argc, argv);
    if (simulate->parsed()) return run_simulate(opt);
    if (fit_cmd->parsed()) return run_fit(opt);
    if (influence->parsed()) return run_influence(opt);
    if (plot->parsed()) return run_plot(opt);
    if (all->parsed()) return run_all(opt);
    return 0;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return report_error("validation", "report-cli", e.what(), 2);
  } catch (const paneldiag::ValidationError& e) {
    return report_error(e.kind(), e.module(), e.what(), 2);
  } catch (const paneldiag::NumericalError& e) {
    return report_error(e.kind(), e.module(), e.what(), 3);
  } catch (const paneldiag::IoError& e) {
    return report_error(e.kind(), e.module(), e.what(), 4);
  } catch (const std::exception& e) {
    return report_error("internal", "report-cli", e.what(), 1);
  }
}
