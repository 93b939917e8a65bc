#ifndef KLJN_RECORD_HPP_
#define KLJN_RECORD_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace kljn {

/// One reported metric; statistical metrics carry a 95% confidence interval.
struct Metric {
  double value = 0.0;
  std::optional<std::pair<double, double>> ci95;
};

/// Machine-readable result of one experiment run. Metrics keep insertion
/// order so serialized output is stable.
struct ResultRecord {
  std::string experiment_id;
  nlohmann::ordered_json config_echo;
  std::uint64_t seed = 0;
  double wall_time_s = 0.0;
  std::vector<std::pair<std::string, Metric>> metrics;

  void set(const std::string& name, double value);
  void set(const std::string& name, double value, double ci_low,
           double ci_high);
  const Metric* find(const std::string& name) const;

  nlohmann::ordered_json to_json() const;
  /// Flat CSV (one header, one row); interval metrics expand into
  /// name,name_ci_low,name_ci_high columns.
  std::string csv_header() const;
  std::string csv_row() const;
};

/// Serializes records one JSON object per line.
std::string to_json_lines(const std::vector<ResultRecord>& records);

/// Serializes records as one CSV table (shared header from the first record).
std::string to_csv(const std::vector<ResultRecord>& records);

}  // namespace kljn

#endif  // KLJN_RECORD_HPP_
