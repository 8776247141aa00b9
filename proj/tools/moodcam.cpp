// moodcam: command-line front end for the mood-inference pipeline.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "moodcam/cli/commands.hpp"

namespace mc = moodcam;
namespace cli = moodcam::cli;

namespace {

void print_error(std::string_view code, std::string_view message) {
  cli::json record{{"error", {{"code", code}, {"message", message}}}};
  std::cerr << record.dump() << '\n';
}

struct overrides {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::string lags;
  std::string pca_scope;
  std::optional<unsigned> threads;
};

cli::run_config resolve(const overrides& o) {
  cli::run_config cfg;
  if (!o.config.empty()) {
    cfg = cli::load_config(o.config);
  } else {
    std::istringstream empty;
    cfg = cli::parse_config(empty, ".");
  }
  if (o.seed) {
    cfg.seed = *o.seed;
    cfg.cohort.seed = *o.seed;
  }
  if (!o.lags.empty()) {
    cfg.lags = cli::detail::parse_list<int>("--lags", o.lags);
    for (int l : cfg.lags)
      if (l != 1 && l != 2 && l != 4 && l != 8) throw mc::error(mc::errc::config_error, "--lags must be drawn from 1,2,4,8");
  }
  if (!o.pca_scope.empty()) {
    if (o.pca_scope == "global") cfg.scope = cli::pca_scope::global;
    else if (o.pca_scope == "per_fold") cfg.scope = cli::pca_scope::per_fold;
    else throw mc::error(mc::errc::config_error, "--pca-scope must be global or per_fold");
  }
  if (o.threads) cfg.threads = *o.threads == 0 ? 1 : *o.threads;
  if (!o.out.empty()) cfg.out_dir = o.out;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moodcam: facial-behaviour mood inference pipeline"};
  app.require_subcommand(0, 1);
  bool config_reference = false;
  app.add_flag("--config-reference", config_reference, "Print the configuration reference (markdown) and exit");

  overrides o;
  std::string report_in;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output directory (overrides [data] out_dir)");
    sub->add_option("--seed", o.seed, "Seed (overrides [model] seed)");
    sub->add_option("--threads", o.threads, "Worker threads (overrides [model] threads)");
  };
  auto add_pipeline = [&](CLI::App* sub) {
    add_common(sub);
    sub->add_option("--lags", o.lags, "Next-day lags, e.g. 1,2 or 1,2,4,8 (overrides [windows] lags)");
    sub->add_option("--pca-scope", o.pca_scope, "global or per_fold (overrides [features] pca_scope)");
  };

  auto* synth = app.add_subcommand("synth", "Generate a synthetic cohort (sessions.jsonl, surveys.csv, manifest.json)");
  add_common(synth);
  auto* featurize = app.add_subcommand("featurize", "Write per-session feature vectors");
  add_pipeline(featurize);
  auto* build = app.add_subcommand("build", "Write the labeled sample sets for every horizon");
  add_pipeline(build);
  auto* run = app.add_subcommand("run", "Evaluate every horizon with LOPO and write the main report");
  add_pipeline(run);
  auto* ablate = app.add_subcommand("ablate", "Run the feature-group ablation and write its report");
  add_pipeline(ablate);
  auto* report = app.add_subcommand("report", "Re-render a report JSON as markdown and text");
  report->add_option("--in", report_in, "report.json or ablation.json")->required()->check(CLI::ExistingFile);
  report->add_option("--out", o.out, "Output directory (default: next to the input)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    print_error("UsageError", e.what());
    return 2;
  }

  try {
    if (config_reference) {
      std::cout << cli::config_reference_markdown();
      return 0;
    }
    cli::written_files files;
    if (*report) {
      std::filesystem::path in(report_in);
      files = cli::cmd_report(in, o.out.empty() ? in.parent_path() : std::filesystem::path(o.out));
    } else {
      auto cfg = resolve(o);
      if (*synth) files = cli::cmd_synth(cfg, cfg.out_dir);
      else if (*featurize) files = cli::cmd_featurize(cfg, cfg.out_dir);
      else if (*build) files = cli::cmd_build(cfg, cfg.out_dir);
      else if (*run) files = cli::cmd_run(cfg, cfg.out_dir);
      else if (*ablate) files = cli::cmd_ablate(cfg, cfg.out_dir);
      else {
        std::cout << app.help();
        return 2;
      }
    }
    for (const auto& f : files) std::cout << f.string() << '\n';
    return 0;
  } catch (const mc::error& e) {
    print_error(mc::to_string(e.code()), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("InternalError", e.what());
    return 3;
  }
}
