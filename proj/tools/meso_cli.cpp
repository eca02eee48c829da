#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "meso/boruta.hpp"
#include "meso/csv.hpp"
#include "meso/dataset.hpp"
#include "meso/error.hpp"
#include "meso/experiment.hpp"
#include "meso/rng.hpp"
#include "meso/synth.hpp"

namespace {

void add_run_options(CLI::App* cmd, std::string& config_path,
                     std::vector<std::string>& assignments) {
  cmd->add_option("--config", config_path, "key=value config file");
  cmd->add_option("--set", assignments,
                  "override any config key, e.g. --set sgd.loss=logistic");
}

void apply_assignments(meso::ExperimentConfig& cfg,
                       const std::vector<std::string>& assignments) {
  for (const auto& a : assignments) {
    std::size_t eq = a.find('=');
    if (eq == std::string::npos)
      throw meso::Error("--set expects key=value, got '" + a + "'");
    meso::apply_config_entry(cfg, a.substr(0, eq), a.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-phase clinical classification experiments"};
  app.require_subcommand(1);

  // --- run
  auto* run = app.add_subcommand("run", "Cross-validate the model roster");
  std::string run_config;
  std::vector<std::string> run_sets;
  std::string data_path, out_dir = "out", class_column, models_csv, nominal_csv;
  int phase = 0;
  long long k = -1, threads = -1;
  unsigned long long seed = 0;
  bool seed_given = false, per_fold = false;
  double alpha = -1.0;
  run->add_option("--data", data_path, "input CSV");
  run->add_option("--phase", phase, "1 (all predictors) or 2 (pre-diagnosis)")
      ->check(CLI::Range(1, 2));
  run->add_option("--models", models_csv, "comma list of models");
  run->add_option("--k", k, "folds");
  run->add_option("--seed", seed, "master seed")->each([&](std::string) {
    seed_given = true;
  });
  run->add_option("--alpha", alpha, "t-test significance level");
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--per-fold-selection", per_fold,
                "run feature selection inside each training fold");
  run->add_option("--class-column", class_column, "class column name");
  run->add_option("--nominal", nominal_csv, "comma list of nominal columns");
  run->add_option("--threads", threads, "worker threads (0 = all cores)");
  add_run_options(run, run_config, run_sets);

  // --- profile
  auto* prof = app.add_subcommand("profile", "Per-attribute statistics");
  std::string prof_data, prof_out, prof_class = "class of diagnosis";
  std::string prof_nominal;
  prof->add_option("--data", prof_data, "input CSV")->required();
  prof->add_option("--out", prof_out, "output CSV (default: stdout)");
  prof->add_option("--class-column", prof_class, "class column name");
  prof->add_option("--nominal", prof_nominal, "comma list of nominal columns");

  // --- boruta
  auto* bor = app.add_subcommand("boruta", "All-relevant feature selection");
  std::string bor_data, bor_out = "boruta.csv", bor_class = "class of diagnosis";
  std::string bor_nominal;
  unsigned long long bor_seed = 1;
  int bor_phase = 2;
  bor->add_option("--data", bor_data, "input CSV")->required();
  bor->add_option("--seed", bor_seed, "seed");
  bor->add_option("--out", bor_out, "decision table CSV");
  bor->add_option("--phase", bor_phase, "predictor filter to apply first")
      ->check(CLI::Range(1, 2));
  bor->add_option("--class-column", bor_class, "class column name");
  bor->add_option("--nominal", bor_nominal, "comma list of nominal columns");

  // --- synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic table");
  std::string synth_schema, synth_out = "synthetic.csv";
  unsigned long long synth_seed = 1;
  long long synth_n = 324;
  synth->add_option("--schema", synth_schema,
                    "schema JSON (default: built-in clinical schema)");
  synth->add_option("--n", synth_n, "rows")->required();
  synth->add_option("--seed", synth_seed, "seed");
  synth->add_option("--out", synth_out, "output CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      meso::ExperimentConfig cfg;
      if (!run_config.empty()) meso::apply_config_file(cfg, run_config);
      apply_assignments(cfg, run_sets);
      if (!data_path.empty()) cfg.data_path = data_path;
      if (phase != 0)
        cfg.phase = phase == 1 ? meso::Phase::Phase1 : meso::Phase::Phase2;
      if (!models_csv.empty()) {
        cfg.models.clear();
        meso::apply_config_entry(cfg, "models", models_csv);
      }
      if (k > 0) cfg.k = static_cast<std::size_t>(k);
      if (seed_given) cfg.seed = seed;
      if (alpha > 0.0) cfg.alpha = alpha;
      if (run->count("--out")) cfg.out_dir = out_dir;
      if (per_fold) cfg.per_fold_selection = true;
      if (!class_column.empty()) cfg.class_column = class_column;
      if (!nominal_csv.empty()) meso::apply_config_entry(cfg, "nominal", nominal_csv);
      if (threads >= 0) cfg.threads = static_cast<int>(threads);
      if (cfg.data_path.empty()) throw meso::Error("run: --data is required");

      meso::RunReport report = meso::run_experiment(cfg);
      meso::emit_report(report, cfg, cfg.out_dir);
      std::cout << "wrote " << cfg.out_dir << "/report.md (and csv outputs)\n";
      for (const auto& r : report.reports)
        std::cout << r.model << ": accuracy " << 100.0 * r.accuracy << "%\n";
    } else if (prof->parsed()) {
      meso::LoadOptions opt;
      opt.class_column = prof_class;
      if (!prof_nominal.empty()) {
        meso::ExperimentConfig tmp;
        meso::apply_config_entry(tmp, "nominal", prof_nominal);
        opt.nominal_columns = tmp.nominal_columns;
      }
      auto d = meso::load_table(prof_data, opt);
      auto rep = meso::profile(d);
      if (prof_out.empty()) {
        std::cout << "Predictor,Mean,Deviation,Association\n";
        for (const auto& e : rep.entries) {
          std::cout << meso::csv::escape(e.name) << ','
                    << (std::isnan(e.mean) ? "NA" : meso::csv::format_double(e.mean))
                    << ','
                    << (std::isnan(e.deviation)
                            ? "NA"
                            : meso::csv::format_double(e.deviation))
                    << ',' << meso::csv::format_double(e.association) << '\n';
        }
      } else {
        meso::write_profile_csv(rep, prof_out);
        std::cout << "wrote " << prof_out << '\n';
      }
    } else if (bor->parsed()) {
      meso::LoadOptions opt;
      opt.class_column = bor_class;
      if (!bor_nominal.empty()) {
        meso::ExperimentConfig tmp;
        meso::apply_config_entry(tmp, "nominal", bor_nominal);
        opt.nominal_columns = tmp.nominal_columns;
      }
      auto d = meso::load_table(bor_data, opt);
      d = meso::impute_missing(d);
      d = meso::select_phase(
          d, bor_phase == 1 ? meso::Phase::Phase1 : meso::Phase::Phase2);
      meso::BorutaConfig bc;
      bc.seed = bor_seed;
      auto result = meso::boruta_run(d, bc);
      meso::write_boruta_csv(result, bor_out);
      std::cout << "wrote " << bor_out << " after " << result.iterations
                << " iterations\n";
      for (const auto& name : result.confirmed_names())
        std::cout << "confirmed: " << name << '\n';
    } else if (synth->parsed()) {
      meso::SynthSchema schema = synth_schema.empty()
                                     ? meso::clinical_schema()
                                     : meso::load_schema(synth_schema);
      auto d = meso::generate_synthetic(
          schema, static_cast<std::size_t>(synth_n), synth_seed);
      meso::save_table(d, synth_out);
      std::cout << "wrote " << synth_out << " (" << d.n_rows() << " rows)\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
