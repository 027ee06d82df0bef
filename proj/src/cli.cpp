#include "imbreg/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "imbreg/csv.hpp"
#include "imbreg/error.hpp"
#include "imbreg/experiments.hpp"
#include "imbreg/serialize.hpp"
#include "imbreg/synth.hpp"

namespace imbreg {
namespace {

struct Global {
  std::uint64_t seed = 0;
  std::string out = ".";
  std::string format = "json";
};

struct DataFlags {
  std::string path;
  std::string target;
  std::vector<std::string> features;
  std::vector<std::string> categorical;
  bool no_header = false;

  void add(CLI::App* cmd, bool required) {
    auto* d = cmd->add_option("--data", path, "Input CSV file");
    if (required) d->required();
    cmd->add_option("--target", target, "Target column (name or zero-based index)");
    cmd->add_option("--features", features, "Feature columns (default: all but the target)")
        ->delimiter(',');
    cmd->add_option("--categorical", categorical, "Columns to one-hot encode")->delimiter(',');
    cmd->add_flag("--no-header", no_header, "First line is data, columns are named by index");
  }

  TabularData load() const {
    if (target.empty()) throw UsageError("--target is required with --data");
    CsvDatasetSpec spec;
    spec.target_column = target;
    if (!features.empty()) spec.feature_columns = features;
    spec.categorical_columns = categorical;
    return to_tabular(read_csv_file(path, !no_header), spec);
  }

  Json to_json() const {
    return {{"data", path},           {"target", target},       {"features", features},
            {"categorical", categorical}, {"no_header", no_header}};
  }
};

void add_mlp_flags(CLI::App* cmd, MlpConfig& mlp) {
  cmd->add_option("--epochs", mlp.epochs, "Training epochs")->capture_default_str();
  cmd->add_option("--lr", mlp.learning_rate, "Adam learning rate")->capture_default_str();
  cmd->add_option("--batch-size", mlp.batch_size, "Mini-batch size")->capture_default_str();
  cmd->add_option("--hidden", mlp.hidden, "Hidden layer widths")->delimiter(',');
}

std::optional<RelevanceMeasure> load_measure(const std::string& inline_json,
                                             const std::string& file) {
  std::string text = inline_json;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot open measure file '" + file + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  if (text.empty()) return std::nullopt;
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::exception& e) {
    throw UsageError(std::string("measure is not valid JSON: ") + e.what());
  }
  return measure_from_json(j);
}

std::filesystem::path prepare_out(const Global& g) {
  std::filesystem::path dir(g.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + g.out + "': " + ec.message());
  return dir;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write '" + path.string() + "'");
  f << content;
  if (!f) throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json with_provenance(const Global& g, const Json& config, Json body) {
  Json j{{"provenance", provenance(g.seed, config)}};
  for (auto& [k, v] : body.items()) j[k] = std::move(v);
  return j;
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string shape = "bimodal";
  BimodalSpec spec;
  std::size_t n = 4177;
  std::string file = "dataset.csv";
};

int cmd_generate(const Global& g, GenerateArgs a, std::ostream& out) {
  Dataset d;
  Json config;
  if (a.shape == "bimodal") {
    a.spec.seed = g.seed;
    d = generate_bimodal(a.spec);
    config = to_json(a.spec);
  } else if (a.shape == "skewed") {
    if (a.n < 10) throw UsageError("--n must be at least 10");
    d = generate_skewed(a.n, g.seed);
    config = {{"shape", "skewed"}, {"n", a.n}, {"seed", g.seed}};
  } else {
    throw UsageError("unknown --shape '" + a.shape + "' (bimodal or skewed)");
  }
  const auto path = prepare_out(g) / a.file;
  std::ostringstream csv;
  write_dataset_csv(csv, d);
  write_file(path, csv.str());
  const Json summary = with_provenance(
      g, config, {{"path", path.string()}, {"rows", d.size()}, {"feature_dim", d.dim()}});
  if (g.format == "json")
    out << dump(summary);
  else
    out << "wrote " << d.size() << " rows to " << path.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct AuditArgs {
  DataFlags data;
  std::string measure_json;
  std::string measure_file;
  std::size_t bins = 20;
  std::string predictions;
  bool fit = false;
  double test_fraction = 0.2;
  MlpConfig mlp;
};

PredictionSet load_predictions(const std::string& path) {
  const auto table = read_csv_file(path);
  const auto col = [&](const std::string& name, std::size_t fallback) {
    const auto it = std::find(table.header.begin(), table.header.end(), name);
    if (it != table.header.end()) return static_cast<std::size_t>(it - table.header.begin());
    if (fallback >= table.header.size())
      throw DataError("predictions CSV needs columns y_true and y_pred");
    return fallback;
  };
  const std::size_t ct = col("y_true", 0);
  const std::size_t cp = col("y_pred", 1);
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  Vector yt(n), yp(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    const auto t = parse_number(row[ct]);
    const auto p = parse_number(row[cp]);
    if (!t || !p)
      throw DataError("line " + std::to_string(table.lines[static_cast<std::size_t>(i)]) +
                      ": predictions must be numeric");
    yt[i] = *t;
    yp[i] = *p;
  }
  if (n < 1) throw DataError("predictions CSV has no rows");
  return PredictionSet(std::move(yt), std::move(yp));
}

std::string audit_text(const AuditReport& r) {
  std::ostringstream os;
  os << "n_samples      " << r.imbalance.n_samples << "\n"
     << "measure        " << measure_to_json(r.imbalance.measure).dump() << "\n"
     << "kolmogorov     " << format_fixed(r.imbalance.kolmogorov, 6) << "\n"
     << "wasserstein    " << format_fixed(r.imbalance.wasserstein, 6) << "\n"
     << "mu-balanced    " << (r.balance.balanced ? "yes" : "no") << " (epsilon "
     << format_fixed(r.balance.epsilon, 4) << ", " << r.balance.violations.size()
     << " violations)\n";
  if (r.overall_mae) os << "overall MAE    " << format_fixed(*r.overall_mae, 6) << "\n";
  return os.str();
}

int cmd_audit(const Global& g, AuditArgs a, std::ostream& out) {
  if (!a.predictions.empty() && a.fit)
    throw UsageError("--predictions and --fit are mutually exclusive");
  if (a.bins < 1) throw UsageError("--bins must be at least 1");
  const auto measure = load_measure(a.measure_json, a.measure_file);
  const TabularData table = a.data.load();

  Vector audited = table.targets;
  std::optional<PredictionSet> predictions;
  Json config = a.data.to_json();
  config["bins"] = a.bins;
  config["measure"] = measure ? measure_to_json(*measure) : Json("data-histogram");
  config["predictions"] = a.predictions;
  config["fit"] = a.fit;
  if (!a.predictions.empty()) predictions = load_predictions(a.predictions);
  if (a.fit) {
    const Dataset d = make_dataset(table.features, table.targets);
    const auto [train_set, test_set] =
        train_test_split_by_target(d, a.test_fraction, derive_seed(g.seed, 1));
    a.mlp.loss = Loss::MeanAbsoluteError;
    a.mlp.seed = derive_seed(g.seed, 3);
    Vector pred = fit_predict(train_set, test_set, a.mlp);
    predictions = PredictionSet(test_set.targets, std::move(pred));
    audited = train_set.targets;
    config["mlp"] = to_json(a.mlp);
    config["test_fraction"] = a.test_fraction;
  }

  const RelevanceMeasure mu =
      measure ? *measure : as_measure(build_histogram(Sample(audited), a.bins));
  const AuditReport report = audit_binned(audited, mu, predictions, a.bins);

  const auto dir = prepare_out(g);
  const Json j = with_provenance(g, config, to_json(report));
  const std::string tsv =
      report.binned ? binned_tsv(*report.binned) : histogram_tsv(report.histogram);
  write_file(dir / "audit.json", dump(j));
  write_file(dir / "audit.tsv", tsv);
  if (g.format == "json")
    out << dump(j);
  else if (g.format == "tsv")
    out << tsv;
  else
    out << audit_text(report);
  return kExitOk;
}

// ---------------------------------------------------------------------------

std::string degeneration_tsv(const DegenerationReport& r) {
  std::string s = "imbalance_factor\tmetric\tmean\tstd\n";
  for (const auto& row : r.rows) {
    const std::pair<const char*, MeanStd> cells[] = {
        {"accuracy", row.accuracy}, {"tnr", row.tnr}, {"tpr", row.tpr},
        {"f1", row.f1},             {"mae", row.mae}, {"mae_mode0", row.mae_mode0},
        {"mae_mode1", row.mae_mode1}};
    for (const auto& [name, v] : cells)
      s += format_number(row.imbalance_factor) + "\t" + name + "\t" + format_number(v.mean) +
           "\t" + format_number(v.std) + "\n";
  }
  return s;
}

int cmd_degeneration(const Global& g, DegenerationConfig c, std::ostream& out) {
  c.seed = g.seed;
  const auto report = run_degeneration(c);
  const Json j = with_provenance(g, to_json(c), to_json(report));
  const auto dir = prepare_out(g);
  const std::string table = degeneration_table(report);
  write_file(dir / "degeneration.json", dump(j));
  write_file(dir / "degeneration.txt", table);
  if (g.format == "json")
    out << dump(j);
  else if (g.format == "tsv")
    out << degeneration_tsv(report);
  else
    out << table;
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct CorrelateArgs {
  DataFlags data;
  std::string preset;
  std::optional<double> endpoint_mean;
  std::optional<double> endpoint_std;
  std::size_t n = 4177;
  CorrelationConfig config;
};

int cmd_correlate(const Global& g, CorrelateArgs a, std::ostream& out) {
  if (!a.preset.empty()) {
    if (a.endpoint_mean || a.endpoint_std)
      throw UsageError("--preset cannot be combined with --endpoint-mean/--endpoint-std");
    const auto e = endpoint_preset(a.preset);
    if (!e) throw UsageError("unknown preset '" + a.preset + "' (abalone, warfarin, parkinson)");
    a.config.endpoint = *e;
  } else if (a.endpoint_mean && a.endpoint_std) {
    a.config.endpoint = {*a.endpoint_mean, *a.endpoint_std};
  } else {
    throw UsageError("give --preset or both --endpoint-mean and --endpoint-std");
  }
  a.config.seed = g.seed;

  Dataset d;
  Json source;
  if (!a.data.path.empty()) {
    const TabularData t = a.data.load();
    d = make_dataset(t.features, t.targets);
    source = a.data.to_json();
  } else {
    if (a.n < 10) throw UsageError("--n must be at least 10");
    d = generate_skewed(a.n, derive_seed(g.seed, 0x5E));
    source = {{"synthetic", "skewed"}, {"n", a.n}};
  }
  const auto report = run_correlation(d, a.config);
  Json config = to_json(a.config);
  config["source"] = source;
  Json body = to_json(report);
  body["source"] = source;
  const Json j = with_provenance(g, config, std::move(body));

  const auto dir = prepare_out(g);
  const std::string table = correlation_table(report);
  write_file(dir / "correlation.json", dump(j));
  write_file(dir / "correlation.txt", table);
  if (g.format == "json") {
    out << dump(j);
  } else if (g.format == "tsv") {
    out << "imbalance_metric\teval_metric\tr\n";
    for (const auto& p : report.pearson)
      out << p.imbalance_metric << "\t" << p.eval_metric << "\t"
          << (p.r ? format_number(*p.r) : std::string("null")) << "\n";
  } else {
    out << table;
  }
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Imbalance metrics and degeneration experiments for regression targets", "imbreg"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--seed", g.seed, "Base random seed")->capture_default_str();
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  app.add_option("--format", g.format, "Console output format")
      ->check(CLI::IsMember({"json", "tsv", "text"}))
      ->capture_default_str();

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic dataset as CSV");
  generate->fallthrough();
  generate->add_option("--shape", gen.shape, "bimodal or skewed")->capture_default_str();
  generate->add_option("--imbalance", gen.spec.imbalance_factor, "Majority/minority ratio I >= 1")
      ->capture_default_str();
  generate->add_option("--n-minority", gen.spec.n_minority, "Rows in the minority mode")
      ->capture_default_str();
  generate->add_option("--mode-std", gen.spec.mode_std, "Target std within a mode")
      ->capture_default_str();
  generate->add_option("--feature-dim", gen.spec.feature_dim, "Feature dimension")
      ->capture_default_str();
  generate->add_option("--spread", gen.spec.feature_cluster_spread, "Feature cluster std")
      ->capture_default_str();
  generate->add_option("--n", gen.n, "Rows for the skewed shape")->capture_default_str();
  generate->add_option("--file", gen.file, "File name inside --out")->capture_default_str();

  AuditArgs aud;
  auto* audit = app.add_subcommand("audit", "Imbalance scores and per-bin error of a dataset");
  audit->fallthrough();
  aud.data.add(audit, true);
  auto* mj = audit->add_option("--measure-json", aud.measure_json, "Relevance measure as JSON");
  audit->add_option("--measure-file", aud.measure_file, "Relevance measure JSON file")
      ->excludes(mj);
  audit->add_option("--bins", aud.bins, "Histogram bins")->capture_default_str();
  audit->add_option("--predictions", aud.predictions, "CSV with y_true,y_pred columns");
  audit->add_flag("--fit", aud.fit, "Train a regressor on a stratified split and audit its test error");
  audit->add_option("--test-fraction", aud.test_fraction, "Test share for --fit")
      ->capture_default_str();
  add_mlp_flags(audit, aud.mlp);

  DegenerationConfig deg;
  auto* degeneration = app.add_subcommand("degeneration", "Minority-mode degeneration vs imbalance");
  degeneration->fallthrough();
  degeneration->add_option("--imbalance", deg.imbalance_factors, "Imbalance factors")
      ->delimiter(',');
  degeneration->add_option("--runs", deg.runs, "Runs per factor")->capture_default_str();
  degeneration->add_option("--n-minority", deg.data.n_minority, "Rows in the minority mode")
      ->capture_default_str();
  degeneration->add_option("--mode-std", deg.data.mode_std, "Target std within a mode")
      ->capture_default_str();
  degeneration->add_option("--feature-dim", deg.data.feature_dim, "Feature dimension")
      ->capture_default_str();
  degeneration->add_option("--spread", deg.data.feature_cluster_spread, "Feature cluster std")
      ->capture_default_str();
  degeneration->add_option("--test-fraction", deg.test_fraction, "Test share")
      ->capture_default_str();
  degeneration->add_option("--threads", deg.threads, "Worker threads (0: all cores)");
  add_mlp_flags(degeneration, deg.mlp);

  CorrelateArgs cor;
  auto* correlate = app.add_subcommand("correlate", "Correlate imbalance and evaluation metrics");
  correlate->fallthrough();
  cor.data.add(correlate, false);
  correlate->add_option("--preset", cor.preset, "Endpoint preset: abalone, warfarin, parkinson");
  correlate->add_option("--endpoint-mean", cor.endpoint_mean, "Sweep endpoint mean");
  correlate->add_option("--endpoint-std", cor.endpoint_std, "Sweep endpoint std");
  correlate->add_option("--runs", cor.config.runs, "Runs per sweep point")->capture_default_str();
  correlate->add_option("--points", cor.config.n_points, "Sweep points")->capture_default_str();
  correlate->add_option("--t-rel", cor.config.t_rel, "Relevance threshold")->capture_default_str();
  correlate->add_option("--t-err", cor.config.t_err, "Error threshold")->capture_default_str();
  correlate->add_option("--beta", cor.config.beta, "F-score beta")->capture_default_str();
  correlate->add_option("--test-fraction", cor.config.test_fraction, "Test share")
      ->capture_default_str();
  correlate->add_option("--n", cor.n, "Rows of the synthetic stand-in without --data")
      ->capture_default_str();
  correlate->add_option("--threads", cor.config.threads, "Worker threads (0: all cores)");
  add_mlp_flags(correlate, cor.config.mlp);

  try {
    std::vector<std::string> args;
    for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
    app.parse(std::move(args));
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (generate->parsed()) return cmd_generate(g, gen, out);
    if (audit->parsed()) return cmd_audit(g, aud, out);
    if (degeneration->parsed()) return cmd_degeneration(g, deg, out);
    if (correlate->parsed()) return cmd_correlate(g, cor, out);
    err << "no subcommand given\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const TrainingError& e) {
    err << "training error: " << e.what() << "\n";
    return kExitRuntime;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
}

}  // namespace imbreg
