#include "imbreg/serialize.hpp"

#include <charconv>
#include <iomanip>
#include <sstream>
#include <system_error>

#include "imbreg/error.hpp"

namespace imbreg {
namespace {

Json optional_number(const std::optional<double>& v) {
  return v ? Json(*v) : Json(nullptr);
}

Json mean_std(const MeanStd& m) { return Json{{"mean", m.mean}, {"std", m.std}}; }

std::vector<double> number_array(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array())
    throw UsageError(std::string("measure field '") + key + "' must be an array");
  std::vector<double> out;
  for (const auto& v : j.at(key)) {
    if (!v.is_number()) throw UsageError(std::string("measure field '") + key + "' must hold numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

double number_field(const Json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number())
    throw UsageError(std::string("measure field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::string cell(const MeanStd& m) {
  return format_fixed(m.mean, 3) + "±" + format_fixed(m.std, 3);
}

// Pads by code points so "±" counts as one column.
std::string pad(const std::string& s, std::size_t width) {
  std::size_t cols = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++cols;
  return cols >= width ? s : s + std::string(width - cols, ' ');
}

std::string render_table(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> widths;
  for (const auto& row : rows)
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::size_t cols = 0;
      for (unsigned char ch : row[c])
        if ((ch & 0xC0) != 0x80) ++cols;
      if (widths.size() <= c) widths.push_back(0);
      widths[c] = std::max(widths[c], cols);
    }
  std::string out;
  for (const auto& row : rows) {
    std::string line;
    for (std::size_t c = 0; c < row.size(); ++c) {
      line += c + 1 < row.size() ? pad(row[c], widths[c] + 2) : row[c];
    }
    out += line + "\n";
  }
  return out;
}

Json matrix_json(const Mlp<double>::Mat& m) {
  Json arr = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) arr.push_back(m(r, c));
  return arr;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::fixed, decimals);
  if (res.ec != std::errc()) return format_number(value);
  return std::string(buf, res.ptr);
}

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << value;
  return os.str();
}

Json provenance(std::uint64_t seed, const Json& config) {
  return Json{{"version", kVersion}, {"seed", seed}, {"config_hash", hex64(fnv1a(config.dump()))}};
}

RelevanceMeasure measure_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string())
    throw UsageError("measure JSON needs a string field 'kind'");
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "normal") return NormalRelevance(number_field(j, "mean"), number_field(j, "std"));
  if (kind == "uniform") {
    const double d = j.contains("density") ? number_field(j, "density") : 1.0;
    return UniformRelevance(number_field(j, "lo"), number_field(j, "hi"), d);
  }
  if (kind == "histogram")
    return HistogramRelevance(number_array(j, "edges"), number_array(j, "masses"));
  if (kind == "pointmass")
    return PointMassRelevance(number_array(j, "locations"), number_array(j, "masses"));
  throw UsageError("unknown measure kind '" + kind + "'");
}

Json measure_to_json(const RelevanceMeasure& m) {
  return std::visit(
      [](const auto& x) -> Json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, NormalRelevance>)
          return {{"kind", "normal"}, {"mean", x.mean()}, {"std", x.stddev()}};
        else if constexpr (std::is_same_v<T, UniformRelevance>) {
          Json j{{"kind", "uniform"}, {"lo", x.lo()}, {"hi", x.hi()}};
          if (x.density() != 1.0) j["density"] = x.density();
          return j;
        }
        else if constexpr (std::is_same_v<T, HistogramRelevance>)
          return {{"kind", "histogram"}, {"edges", x.edges()}, {"masses", x.masses()}};
        else
          return {{"kind", "pointmass"}, {"locations", x.locations()}, {"masses", x.masses()}};
      },
      m);
}

Json to_json(const MlpConfig& c) {
  return {{"input_dim", c.input_dim},   {"hidden", c.hidden},
          {"loss", loss_name(c.loss)},  {"learning_rate", c.learning_rate},
          {"epochs", c.epochs},         {"batch_size", c.batch_size}};
}

Json to_json(const BimodalSpec& s) {
  return {{"n_minority", s.n_minority},
          {"imbalance_factor", s.imbalance_factor},
          {"mode_centers", {0.0, 1.0}},
          {"mode_std", s.mode_std},
          {"feature_dim", s.feature_dim},
          {"feature_cluster_spread", s.feature_cluster_spread},
          {"seed", s.seed}};
}

Json to_json(const DegenerationConfig& c) {
  Json data = to_json(c.data);
  data.erase("imbalance_factor");
  data.erase("seed");
  return {{"imbalance_factors", c.imbalance_factors},
          {"runs", c.runs},
          {"data", data},
          {"mlp", to_json(c.mlp)},
          {"test_fraction", c.test_fraction},
          {"seed", c.seed}};
}

Json to_json(const CorrelationConfig& c) {
  return {{"endpoint", mean_std(c.endpoint)},
          {"runs", c.runs},
          {"n_points", c.n_points},
          {"mlp", to_json(c.mlp)},
          {"test_fraction", c.test_fraction},
          {"t_rel", c.t_rel},
          {"t_err", c.t_err},
          {"beta", c.beta},
          {"k", c.k},
          {"density_bins", c.density_bins},
          {"seed", c.seed}};
}

Json to_json(const ImbalanceReport& r) {
  return {{"kolmogorov", r.kolmogorov},
          {"wasserstein", r.wasserstein},
          {"wasserstein_truncation_bound", r.wasserstein_truncation_bound},
          {"n_samples", r.n_samples},
          {"measure", measure_to_json(r.measure)}};
}

Json to_json(const BalanceCheckResult& r) {
  Json violations = Json::array();
  for (const auto& v : r.violations)
    violations.push_back({{"s", v.s},
                          {"s_prime", v.s_prime},
                          {"mu_s", v.mu_s},
                          {"mu_s_prime", v.mu_s_prime},
                          {"p_s", v.p_s},
                          {"p_s_prime", v.p_s_prime}});
  return {{"balanced", r.balanced},
          {"epsilon", r.epsilon},
          {"epsilon_is_default", r.epsilon_is_default},
          {"edges", r.edges},
          {"n_violations", r.violations.size()},
          {"violations", violations}};
}

Json to_json(const HistogramDensity& h) {
  Json density = Json::array();
  for (std::size_t b = 0; b < h.bins(); ++b)
    density.push_back(h.n() == 0 ? 0.0
                                 : static_cast<double>(h.counts()[b]) /
                                       (static_cast<double>(h.n()) * h.width(b)));
  return {{"edges", h.edges()},
          {"counts", h.counts()},
          {"density", density},
          {"n", h.n()},
          {"out_of_range", h.out_of_range()}};
}

Json to_json(const BinnedReport& r) {
  Json centers = Json::array();
  Json mae = Json::array();
  for (std::size_t b = 0; b < r.bins(); ++b) {
    centers.push_back(r.center(b));
    mae.push_back(optional_number(r.mae[b]));
  }
  return {{"edges", r.edges}, {"bin_centers", centers}, {"counts", r.counts}, {"mae", mae}};
}

Json to_json(const RegPRReport& r) {
  return {{"precision", optional_number(r.precision)},
          {"recall", optional_number(r.recall)},
          {"f_beta", optional_number(r.f_beta)},
          {"t_rel", r.t_rel},
          {"t_err", r.t_err},
          {"beta", r.beta}};
}

Json to_json(const DegenerationReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json runs = Json::array();
    for (const auto& run : row.runs)
      runs.push_back({{"accuracy", run.accuracy},
                      {"tnr", run.tnr},
                      {"tpr", run.tpr},
                      {"f1", run.f1},
                      {"mae", run.mae},
                      {"mae_mode0", run.mae_mode0},
                      {"mae_mode1", run.mae_mode1}});
    rows.push_back({{"imbalance_factor", row.imbalance_factor},
                    {"accuracy", mean_std(row.accuracy)},
                    {"tnr", mean_std(row.tnr)},
                    {"tpr", mean_std(row.tpr)},
                    {"f1", mean_std(row.f1)},
                    {"mae", mean_std(row.mae)},
                    {"mae_mode0", mean_std(row.mae_mode0)},
                    {"mae_mode1", mean_std(row.mae_mode1)},
                    {"runs", runs}});
  }
  return {{"config", to_json(r.config)}, {"rows", rows}};
}

Json to_json(const CorrelationReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"point", row.point},
                    {"run", row.run},
                    {"measure", mean_std(row.measure)},
                    {"kolmogorov", row.kolmogorov},
                    {"wasserstein", row.wasserstein},
                    {"weighted_mae", row.weighted_mae},
                    {"precision", optional_number(row.precision)},
                    {"recall", optional_number(row.recall)},
                    {"f1", optional_number(row.f1)}});
  Json pearson = Json::array();
  for (const auto& p : r.pearson)
    pearson.push_back({{"imbalance_metric", p.imbalance_metric},
                       {"eval_metric", p.eval_metric},
                       {"r", optional_number(p.r)},
                       {"used_rows", p.used_rows},
                       {"excluded_rows", p.excluded_rows}});
  return {{"config", to_json(r.config)},
          {"start", mean_std(r.start)},
          {"n_train", r.n_train},
          {"n_test", r.n_test},
          {"pearson", pearson},
          {"rows", rows}};
}

Json to_json(const AuditReport& r) {
  Json j{{"histogram", to_json(r.histogram)},
         {"imbalance", to_json(r.imbalance)},
         {"balance", to_json(r.balance)}};
  j["binned"] = r.binned ? to_json(*r.binned) : Json(nullptr);
  j["overall_mae"] = optional_number(r.overall_mae);
  return j;
}

std::string binned_tsv(const BinnedReport& r) {
  std::string out = "bin_center\tcount\tmae\n";
  for (std::size_t b = 0; b < r.bins(); ++b) {
    out += format_number(r.center(b)) + "\t" + std::to_string(r.counts[b]) + "\t" +
           (r.mae[b] ? format_number(*r.mae[b]) : std::string("null")) + "\n";
  }
  return out;
}

std::string histogram_tsv(const HistogramDensity& h) {
  std::string out = "bin_center\tcount\tdensity\n";
  for (std::size_t b = 0; b < h.bins(); ++b) {
    const double d = h.n() == 0 ? 0.0
                                : static_cast<double>(h.counts()[b]) /
                                      (static_cast<double>(h.n()) * h.width(b));
    out += format_number(h.center(b)) + "\t" + std::to_string(h.counts()[b]) + "\t" +
           format_number(d) + "\n";
  }
  return out;
}

std::string degeneration_table(const DegenerationReport& r) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"metric"};
  for (const auto& row : r.rows) header.push_back("I=" + format_number(row.imbalance_factor));
  rows.push_back(header);
  const std::pair<const char*, MeanStd DegenerationRow::*> metrics[] = {
      {"accuracy", &DegenerationRow::accuracy}, {"TNR", &DegenerationRow::tnr},
      {"TPR", &DegenerationRow::tpr},           {"F1", &DegenerationRow::f1},
      {"MAE", &DegenerationRow::mae},           {"MAE0", &DegenerationRow::mae_mode0},
      {"MAE1", &DegenerationRow::mae_mode1}};
  for (const auto& [name, field] : metrics) {
    std::vector<std::string> line{name};
    for (const auto& row : r.rows) line.push_back(cell(row.*field));
    rows.push_back(line);
  }
  return render_table(rows);
}

std::string correlation_table(const CorrelationReport& r) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> header{"imbalance"};
  for (const char* em : kEvalMetrics) header.emplace_back(em);
  rows.push_back(header);
  for (const char* im : kImbalanceMetrics) {
    std::vector<std::string> line{im};
    for (const char* em : kEvalMetrics) {
      const auto v = r.r(im, em);
      line.push_back(v ? format_fixed(*v, 4) : "n/a");
    }
    rows.push_back(line);
  }
  return render_table(rows);
}

Json mlp_to_json(const Mlp<double>& net) {
  Json layers = Json::array();
  for (const auto& layer : net.layers())
    layers.push_back({{"rows", layer.weights.rows()},
                      {"cols", layer.weights.cols()},
                      {"weights", matrix_json(layer.weights)},
                      {"bias", std::vector<double>(layer.bias.data(),
                                                   layer.bias.data() + layer.bias.size())}});
  return {{"version", kVersion}, {"loss", loss_name(net.loss())}, {"layers", layers}};
}

Mlp<double> mlp_from_json(const Json& j) {
  try {
    std::vector<Mlp<double>::Layer> layers;
    for (const auto& l : j.at("layers")) {
      const auto rows = l.at("rows").get<Eigen::Index>();
      const auto cols = l.at("cols").get<Eigen::Index>();
      const auto w = l.at("weights").get<std::vector<double>>();
      const auto b = l.at("bias").get<std::vector<double>>();
      if (rows < 1 || cols < 1 || static_cast<Eigen::Index>(w.size()) != rows * cols ||
          static_cast<Eigen::Index>(b.size()) != rows)
        throw UsageError("model layer arrays do not match their declared shape");
      Mlp<double>::Layer layer{Mlp<double>::Mat(rows, cols), Mlp<double>::Vec(rows)};
      for (Eigen::Index r = 0; r < rows; ++r) {
        layer.bias[r] = b[static_cast<std::size_t>(r)];
        for (Eigen::Index c = 0; c < cols; ++c)
          layer.weights(r, c) = w[static_cast<std::size_t>(r * cols + c)];
      }
      layers.push_back(std::move(layer));
    }
    return Mlp<double>(std::move(layers), loss_from_name(j.at("loss").get<std::string>()));
  } catch (const Json::exception& e) {
    throw UsageError(std::string("malformed model JSON: ") + e.what());
  }
}

}  // namespace imbreg
