#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "json.hpp"

#include "imbreg/evaluation.hpp"
#include "imbreg/experiments.hpp"
#include "imbreg/imbalance.hpp"
#include "imbreg/learner.hpp"
#include "imbreg/measures.hpp"

namespace imbreg {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "0.1.0";

/// Locale-independent, 17 significant digits.
std::string format_number(double value);
/// Locale-independent fixed notation.
std::string format_fixed(double value, int decimals);

/// 64-bit FNV-1a, used for config fingerprints.
std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t value);

/// {"version", "seed", "config_hash"} where the hash covers `config.dump()`.
Json provenance(std::uint64_t seed, const Json& config);

Json to_json(const MlpConfig& c);
Json to_json(const BimodalSpec& s);
Json to_json(const DegenerationConfig& c);
Json to_json(const CorrelationConfig& c);

/// {"kind": "normal"|"uniform"|"histogram"|"pointmass", ...}. Field names:
/// normal {mean, std}; uniform {lo, hi[, density]}; histogram {edges, masses};
/// pointmass {locations, masses}. Throws UsageError on malformed input.
RelevanceMeasure measure_from_json(const Json& j);
Json measure_to_json(const RelevanceMeasure& m);

Json to_json(const ImbalanceReport& r);
Json to_json(const BalanceCheckResult& r);
Json to_json(const HistogramDensity& h);
Json to_json(const BinnedReport& r);
Json to_json(const RegPRReport& r);
Json to_json(const DegenerationReport& r);
Json to_json(const CorrelationReport& r);
Json to_json(const AuditReport& r);

/// bin_center <TAB> count <TAB> mae, one row per bin; empty bins print "null".
std::string binned_tsv(const BinnedReport& r);
/// bin_center <TAB> count <TAB> density for a histogram without error data.
std::string histogram_tsv(const HistogramDensity& h);

/// Metrics x imbalance factor, "mean±std" cells.
std::string degeneration_table(const DegenerationReport& r);
/// Imbalance metric x evaluation metric Pearson table.
std::string correlation_table(const CorrelationReport& r);

/// Layer shapes plus flat row-major parameter arrays.
Json mlp_to_json(const Mlp<double>& net);
Mlp<double> mlp_from_json(const Json& j);

}  // namespace imbreg
