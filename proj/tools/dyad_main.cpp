#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dyad/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dyadic co-manipulation toolkit"};
  app.require_subcommand(1);

  dyad::SimulateOptions sim;
  CLI::App* simulate = app.add_subcommand("simulate", "generate synthetic sessions");
  simulate->add_option("--out", sim.out_dir, "output directory")->required();
  simulate->add_option("--cell", sim.cell_specs,
                       "interaction cell, token or token=count (repeatable)");
  simulate->add_option("--count", sim.default_count, "sessions per --cell without a count")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--seed", sim.seed, "batch seed");
  simulate->add_option("--config", sim.config_path, "scene/noise/policy/batch config file")
      ->check(CLI::ExistingFile);
  simulate->add_option("--duration", sim.duration_s, "override session duration in seconds")
      ->check(CLI::PositiveNumber);
  simulate->add_flag("--noiseless", sim.noiseless, "disable all sensor noise");
  simulate->add_option("--threads", sim.threads, "worker threads (0 = default)");

  dyad::AnalyzeOptions an;
  CLI::App* analyze = app.add_subcommand("analyze", "run the pipeline on a session or batch");
  analyze->add_option("target", an.target, "session directory or batch root")
      ->required()
      ->check(CLI::ExistingDirectory);
  analyze->add_option("--config", an.config_path, "analysis config file")
      ->check(CLI::ExistingFile);
  analyze->add_option("--model", an.model_path, "intent model for goal classification")
      ->check(CLI::ExistingFile);

  dyad::StatsOptions st;
  CLI::App* stats = app.add_subcommand("stats", "negotiation statistics over an analyzed batch");
  stats->add_option("dataset", st.dataset_dir, "batch root directory")
      ->required()
      ->check(CLI::ExistingDirectory);

  dyad::IntentFitOptions fit;
  CLI::App* intent_fit =
      app.add_subcommand("intent-fit", "fit an intent model from labeled sessions");
  intent_fit->add_option("dataset", fit.dataset_dir, "analyzed session or batch root")
      ->required()
      ->check(CLI::ExistingDirectory);
  intent_fit->add_option("--model", fit.model_path, "output model path")->required();
  intent_fit->add_option("--min-iou", fit.min_label_iou, "label transfer overlap cutoff")
      ->check(CLI::Range(0.0, 1.0));

  dyad::PlotOptions pl;
  CLI::App* plot = app.add_subcommand("plot", "render session plots to SVG");
  plot->add_option("session", pl.session_dir, "analyzed session directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  plot->add_option("--kind", pl.kind, "power | projected | embedding | all")->required();
  plot->add_option("--model", pl.model_path, "intent model for the embedding plot")
      ->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? dyad::kExitOk : dyad::kExitUsage;
  }

  if (simulate->parsed()) return dyad::cmd_simulate(sim);
  if (analyze->parsed()) return dyad::cmd_analyze(an);
  if (stats->parsed()) return dyad::cmd_stats(st);
  if (intent_fit->parsed()) return dyad::cmd_intent_fit(fit);
  if (plot->parsed()) return dyad::cmd_plot(pl);
  return dyad::kExitUsage;
}
