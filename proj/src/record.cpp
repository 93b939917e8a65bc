#include "kljn/record.hpp"

#include <cstdio>
#include <sstream>

namespace kljn {

namespace {

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void ResultRecord::set(const std::string& name, double value) {
  metrics.emplace_back(name, Metric{value, std::nullopt});
}

void ResultRecord::set(const std::string& name, double value, double ci_low,
                       double ci_high) {
  metrics.emplace_back(name, Metric{value, std::make_pair(ci_low, ci_high)});
}

const Metric* ResultRecord::find(const std::string& name) const {
  for (const auto& [k, m] : metrics)
    if (k == name) return &m;
  return nullptr;
}

nlohmann::ordered_json ResultRecord::to_json() const {
  nlohmann::ordered_json j;
  j["experiment"] = experiment_id;
  j["seed"] = seed;
  nlohmann::ordered_json jm;
  for (const auto& [name, m] : metrics) {
    if (m.ci95.has_value()) {
      jm[name] = {{"value", m.value},
                  {"ci95_low", m.ci95->first},
                  {"ci95_high", m.ci95->second}};
    } else {
      jm[name] = {{"value", m.value}};
    }
  }
  j["metrics"] = std::move(jm);
  j["config"] = config_echo;
  j["wall_time_s"] = wall_time_s;
  return j;
}

std::string ResultRecord::csv_header() const {
  std::ostringstream out;
  out << "experiment,seed";
  for (const auto& [name, m] : metrics) {
    out << ',' << name;
    if (m.ci95.has_value())
      out << ',' << name << "_ci_low," << name << "_ci_high";
  }
  return out.str();
}

std::string ResultRecord::csv_row() const {
  std::ostringstream out;
  out << experiment_id << ',' << seed;
  for (const auto& [name, m] : metrics) {
    out << ',' << format_double(m.value);
    if (m.ci95.has_value())
      out << ',' << format_double(m.ci95->first) << ','
          << format_double(m.ci95->second);
  }
  return out.str();
}

std::string to_json_lines(const std::vector<ResultRecord>& records) {
  std::ostringstream out;
  for (const ResultRecord& r : records) out << r.to_json().dump() << '\n';
  return out.str();
}

std::string to_csv(const std::vector<ResultRecord>& records) {
  std::ostringstream out;
  if (records.empty()) return "";
  out << records.front().csv_header() << '\n';
  for (const ResultRecord& r : records) out << r.csv_row() << '\n';
  return out.str();
}

}  // namespace kljn
