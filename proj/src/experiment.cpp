#include "meso/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "meso/csv.hpp"
#include "meso/error.hpp"
#include "meso/learners.hpp"
#include "meso/rng.hpp"

namespace meso {

namespace {

constexpr std::uint64_t kBorutaSeedStream = 0xb0;

std::vector<std::string> split_csv_list(const std::string& s) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    std::size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    std::string item = s.substr(pos, comma - pos);
    std::size_t b = item.find_first_not_of(" \t");
    if (b != std::string::npos) {
      std::size_t e = item.find_last_not_of(" \t");
      out.push_back(item.substr(b, e - b + 1));
    }
    pos = comma + 1;
  }
  return out;
}

/// Runs a batch of independent tasks on a bounded pool; rethrows the first
/// task failure.
void run_tasks(std::vector<std::function<void()>> tasks, int threads) {
  if (threads <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    threads = hw == 0 ? 2 : static_cast<int>(hw);
  }
  threads = std::min<int>(threads, static_cast<int>(tasks.size()));
  if (threads <= 1) {
    for (auto& t : tasks) t();
    return;
  }

  std::atomic<std::size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;
  auto worker = [&] {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      try {
        tasks[i]();
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

BorutaConfig boruta_config(const ExperimentConfig& cfg) {
  BorutaConfig bc;
  auto get = [&](const std::string& key, double fallback) {
    auto it = cfg.params.find(key);
    return it == cfg.params.end() ? fallback : std::stod(it->second);
  };
  bc.max_iterations = static_cast<int>(get("boruta.max_iterations", 100));
  bc.p_value = get("boruta.p_value", 0.01);
  bc.forest.trees = static_cast<int>(get("boruta.trees", 100));
  bc.seed = rng::derive(cfg.seed, kBorutaSeedStream);
  return bc;
}

std::string iso_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm_utc;
  gmtime_r(&t, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string fixed2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (k < 2) throw Error("config: k must be >= 2");
  if (alpha <= 0.0 || alpha >= 1.0) throw Error("config: alpha must be in (0,1)");
  const auto& roster = model_roster();
  for (const auto& m : models)
    if (std::find(roster.begin(), roster.end(), m) == roster.end())
      throw Error("config: unknown model '" + m + "'");
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key,
                        const std::string& value) {
  if (key == "data") cfg.data_path = value;
  else if (key == "phase") {
    if (value == "1" || value == "phase1") cfg.phase = Phase::Phase1;
    else if (value == "2" || value == "phase2") cfg.phase = Phase::Phase2;
    else throw Error("config: phase must be 1 or 2");
  } else if (key == "models") cfg.models = split_csv_list(value);
  else if (key == "k") cfg.k = std::stoul(value);
  else if (key == "seed") cfg.seed = std::stoull(value);
  else if (key == "alpha") cfg.alpha = std::stod(value);
  else if (key == "out") cfg.out_dir = value;
  else if (key == "per_fold_selection")
    cfg.per_fold_selection = value == "1" || value == "true";
  else if (key == "class_column") cfg.class_column = value;
  else if (key == "nominal") cfg.nominal_columns = split_csv_list(value);
  else if (key == "threads") cfg.threads = std::stoi(value);
  else if (key.find('.') != std::string::npos) cfg.params[key] = value;
  else throw Error("config: unknown key '" + key + "'");
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(line_no) +
                       ": expected key=value");
    auto trim = [](std::string s) {
      std::size_t x = s.find_first_not_of(" \t\r");
      if (x == std::string::npos) return std::string();
      std::size_t y = s.find_last_not_of(" \t\r");
      return s.substr(x, y - x + 1);
    };
    apply_config_entry(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::ostringstream canon;
  canon << "data=" << cfg.data_path << '\n'
        << "phase=" << (cfg.phase == Phase::Phase1 ? 1 : 2) << '\n';
  canon << "models=";
  for (const auto& m : cfg.models) canon << m << ',';
  canon << '\n'
        << "k=" << cfg.k << '\n'
        << "seed=" << cfg.seed << '\n'
        << "alpha=" << csv::format_double(cfg.alpha) << '\n'
        << "out=" << cfg.out_dir << '\n'
        << "per_fold_selection=" << cfg.per_fold_selection << '\n'
        << "class_column=" << cfg.class_column << '\n';
  canon << "nominal=";
  for (const auto& c : cfg.nominal_columns) canon << c << ',';
  canon << '\n' << "threads=" << cfg.threads << '\n';
  for (const auto& [key, value] : cfg.params)
    canon << key << '=' << value << '\n';

  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : canon.str()) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

RunReport run_experiment_on(const Dataset& raw, const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<std::string> roster =
      cfg.models.empty() ? model_roster() : cfg.models;

  RunReport report;
  report.seed = cfg.seed;
  report.config_fingerprint = config_hash(cfg);
  report.timestamp = iso_timestamp();

  Dataset imputed = [&] {
    try {
      return impute_missing(raw);
    } catch (const std::exception& e) {
      throw Error(std::string("impute: ") + e.what());
    }
  }();

  Dataset selected = [&] {
    try {
      return select_phase(imputed, cfg.phase);
    } catch (const std::exception& e) {
      throw Error(std::string("select_phase: ") + e.what());
    }
  }();

  FoldPlan plan = [&] {
    try {
      return stratified_folds(selected, cfg.k, cfg.seed);
    } catch (const std::exception& e) {
      throw Error(std::string("folds: ") + e.what());
    }
  }();

  report.positive_label = selected.majority_label();

  // phase-2 all-relevant selection
  Dataset cv_data = selected;
  std::vector<Dataset> per_fold_data;
  if (cfg.phase == Phase::Phase2) {
    try {
      BorutaConfig bc = boruta_config(cfg);
      if (!cfg.per_fold_selection) {
        report.boruta = boruta_run(selected, bc);
        report.boruta_ran = true;
        report.boruta_whitelist = report.boruta.confirmed_names();
        if (report.boruta_whitelist.empty()) {
          report.warnings.push_back(
              "selection confirmed no features; keeping all predictors");
        } else {
          cv_data = selected.keep_predictors(report.boruta_whitelist);
        }
      } else {
        per_fold_data.resize(cfg.k, selected);
        std::vector<std::function<void()>> tasks;
        for (std::size_t f = 0; f < cfg.k; ++f) {
          tasks.push_back([&, f] {
            BorutaConfig fold_bc = bc;
            fold_bc.seed = rng::derive(bc.seed, f + 1);
            Dataset train = selected.subset_rows(plan.train_rows(f));
            auto res = boruta_run(train, fold_bc);
            auto names = res.confirmed_names();
            if (!names.empty()) per_fold_data[f] = selected.keep_predictors(names);
          });
        }
        run_tasks(std::move(tasks), cfg.threads);
      }
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(std::string("selection: ") + e.what());
    }
  }

  // model-by-fold work items on a bounded pool
  std::vector<std::unique_ptr<Learner>> learners;
  for (const auto& name : roster)
    learners.push_back(make_learner(name, cfg.params, cfg.seed));

  std::vector<std::vector<FoldOutcome>> outcomes(roster.size());
  for (auto& v : outcomes) v.resize(cfg.k);
  {
    std::vector<std::function<void()>> tasks;
    for (std::size_t m = 0; m < roster.size(); ++m) {
      for (std::size_t f = 0; f < cfg.k; ++f) {
        tasks.push_back([&, m, f] {
          const Dataset& data =
              per_fold_data.empty() ? cv_data : per_fold_data[f];
          outcomes[m][f] =
              evaluate_fold(*learners[m], data, plan, f, report.positive_label);
        });
      }
    }
    try {
      run_tasks(std::move(tasks), cfg.threads);
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw Error(std::string("cross_validate: ") + e.what());
    }
  }

  for (std::size_t m = 0; m < roster.size(); ++m)
    report.reports.push_back(
        assemble_report(roster[m], plan, std::move(outcomes[m])));

  // pairwise corrected t-tests on per-fold accuracies
  double n = static_cast<double>(selected.n_rows());
  double n_test = n / static_cast<double>(cfg.k);
  double n_train = n - n_test;
  report.ttest.assign(roster.size(), std::vector<TTestResult>(roster.size()));
  for (std::size_t i = 0; i < roster.size(); ++i) {
    for (std::size_t j = i; j < roster.size(); ++j) {
      if (i == j) {
        TTestResult diag;
        diag.degrees_of_freedom = static_cast<int>(cfg.k) - 1;
        report.ttest[i][j] = diag;  // t = 0, p = 1, not significant
        continue;
      }
      TTestResult t = corrected_paired_ttest(report.reports[i].fold_accuracies,
                                             report.reports[j].fold_accuracies,
                                             n_train, n_test, cfg.alpha);
      report.ttest[i][j] = t;
      TTestResult mirrored = t;
      mirrored.t_statistic = -t.t_statistic;
      mirrored.mean_difference = -t.mean_difference;
      report.ttest[j][i] = mirrored;
    }
  }
  return report;
}

RunReport run_experiment(const ExperimentConfig& cfg) {
  LoadOptions options;
  options.class_column = cfg.class_column;
  options.nominal_columns = cfg.nominal_columns;
  Dataset raw = [&] {
    try {
      return load_table(cfg.data_path, options);
    } catch (const std::exception& e) {
      throw Error(std::string("load: ") + e.what());
    }
  }();
  return run_experiment_on(raw, cfg);
}

void emit_report(const RunReport& report, const ExperimentConfig& cfg,
                 const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);

  auto open = [&](const std::string& name) {
    std::ofstream out(out_dir + "/" + name);
    if (!out) throw ParseError("cannot write '" + out_dir + "/" + name + "'");
    return out;
  };

  const char* metric_names[] = {"Classification accuracy (%)",
                                "f-measure",
                                "Recall",
                                "Precision",
                                "ROC",
                                "PRC",
                                "RMSE"};
  auto metric_value = [](const EvalReport& r, int m) {
    switch (m) {
      case 0: return r.accuracy * 100.0;
      case 1: return r.f_measure;
      case 2: return r.recall;
      case 3: return r.precision;
      case 4: return r.roc_auc;
      case 5: return r.prc_auc;
      default: return r.rmse;
    }
  };

  {
    auto md = open("report.md");
    md << "# Model comparison\n\n";
    md << "| Metric |";
    for (const auto& r : report.reports) md << ' ' << r.model << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < report.reports.size(); ++i) md << "---|";
    md << '\n';
    for (int m = 0; m < 7; ++m) {
      md << "| " << metric_names[m] << " |";
      for (const auto& r : report.reports)
        md << ' ' << fixed2(metric_value(r, m)) << " |";
      md << '\n';
    }

    md << "\n## Paired t-tests (corrected), alpha = "
       << csv::format_double(cfg.alpha) << "\n\n";
    md << "t statistic of row minus column on per-fold accuracy; '*' marks "
          "significance.\n\n";
    md << "| |";
    for (const auto& r : report.reports) md << ' ' << r.model << " |";
    md << "\n|---|";
    for (std::size_t i = 0; i < report.reports.size(); ++i) md << "---|";
    md << '\n';
    for (std::size_t i = 0; i < report.reports.size(); ++i) {
      md << "| " << report.reports[i].model << " |";
      for (std::size_t j = 0; j < report.reports.size(); ++j) {
        const auto& t = report.ttest[i][j];
        md << ' ' << fixed2(t.t_statistic) << (t.significant ? "*" : "") << " |";
      }
      md << '\n';
    }
    if (report.boruta_ran) {
      md << "\n## Selected features\n\n";
      for (const auto& name : report.boruta_whitelist) md << "- " << name << '\n';
    }
    for (const auto& w : report.warnings) md << "\nwarning: " << w << '\n';
  }

  {
    auto csv_out = open("report.csv");
    csv_out << "model,metric,value\n";
    const char* keys[] = {"accuracy_pct", "f_measure", "recall", "precision",
                          "roc_auc",      "prc_auc",   "rmse"};
    for (const auto& r : report.reports)
      for (int m = 0; m < 7; ++m)
        csv_out << csv::escape(r.model) << ',' << keys[m] << ','
                << csv::format_double(metric_value(r, m)) << '\n';
  }

  {
    auto tt = open("ttest.csv");
    tt << "model_a,model_b,t,p,significant\n";
    for (std::size_t i = 0; i < report.reports.size(); ++i)
      for (std::size_t j = 0; j < report.reports.size(); ++j) {
        const auto& t = report.ttest[i][j];
        tt << csv::escape(report.reports[i].model) << ','
           << csv::escape(report.reports[j].model) << ','
           << csv::format_double(t.t_statistic) << ','
           << csv::format_double(t.p_value) << ','
           << (t.significant ? 1 : 0) << '\n';
      }
  }

  if (report.boruta_ran)
    write_boruta_csv(report.boruta, out_dir + "/boruta.csv");

  {
    auto prov = open("provenance.txt");
    prov << "seed=" << report.seed << '\n'
         << "config_hash=" << std::hex << report.config_fingerprint << std::dec
         << '\n'
         << "timestamp=" << report.timestamp << '\n'
         << "data=" << cfg.data_path << '\n'
         << "phase=" << (cfg.phase == Phase::Phase1 ? 1 : 2) << '\n'
         << "positive_label_index=" << report.positive_label << '\n';
    for (const auto& w : report.warnings) prov << "warning=" << w << '\n';
  }
}

}  // namespace meso
