#ifndef KLJN_EXPERIMENTS_HPP_
#define KLJN_EXPERIMENTS_HPP_

#include <string>
#include <vector>

#include "kljn/config.hpp"
#include "kljn/record.hpp"

namespace kljn {

/// Runs one key exchange and reports fidelity, kept fraction and alarms.
ResultRecord exchange_experiment(const RunConfig& config);

/// Runs the named attack (config.attack_name unless overridden) and reports
/// Eve's statistics. Exit-status semantics: a successful run of a successful
/// attack is still a successful run.
ResultRecord attack_experiment(const RunConfig& config,
                               const std::string& attack_override = "");

/// One attack experiment per sweep value; point seeds derive from the base
/// seed, the parameter name and the point index.
std::vector<ResultRecord> sweep_experiment(const RunConfig& config);

/// Builds the chain, teleclones random bits end to end and reports delivery
/// and transcript statistics.
ResultRecord chain_experiment(const RunConfig& config);

/// Empirical vs analytic channel-voltage PSD in the configured loop state.
struct PsdTable {
  std::vector<double> frequency_hz;
  std::vector<double> empirical_psd;
  std::vector<double> analytic_psd;

  std::string to_csv() const;
  std::string to_json_lines() const;
};

PsdTable psd_experiment(const RunConfig& config);

/// Summary record for the PSD run (in-band empirical/analytic ratio).
ResultRecord psd_summary(const RunConfig& config, const PsdTable& table);

}  // namespace kljn

#endif  // KLJN_EXPERIMENTS_HPP_
