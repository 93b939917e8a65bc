#include "kljn/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>

#include "kljn/chain.hpp"
#include "kljn/errors.hpp"
#include "kljn/seed.hpp"
#include "kljn/stats.hpp"

namespace kljn {

namespace {

class WallClock {
 public:
  double elapsed_s() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

void fill_attack_metrics(ResultRecord& rec, const AttackReport& rep) {
  rec.set("n_bits", static_cast<double>(rep.n_bits));
  rec.set("p_correct", rep.p_correct, rep.wilson95.low, rep.wilson95.high);
  rec.set("leak_fraction", rep.leak_fraction);
  rec.set("detected", rep.detected ? 1.0 : 0.0);
  rec.set("detection_sample", rep.detection_sample.has_value()
                                  ? static_cast<double>(*rep.detection_sample)
                                  : -1.0);
  rec.set("compromised_kept_bits",
          static_cast<double>(rep.compromised_kept_bits));
}

}  // namespace

ResultRecord exchange_experiment(const RunConfig& config) {
  if (config.n_periods < 1)
    throw config_error("exchange: n_periods must be >= 1");
  WallClock clock;
  const ExchangeResult ex =
      run_exchange(config.protocol, config.n_periods, config.seed);

  ResultRecord rec;
  rec.experiment_id = "exchange";
  rec.seed = config.seed;
  rec.config_echo = config.echo_json();
  rec.set("n_periods", static_cast<double>(ex.n_periods));
  const auto kept_ci =
      stats::wilson_interval(ex.kept_count, ex.n_periods, stats::kZ95);
  rec.set("kept_fraction", ex.kept_fraction(), kept_ci.low, kept_ci.high);
  rec.set("kept_count", static_cast<double>(ex.kept_count));
  const std::size_t agree = static_cast<std::size_t>(
      std::llround(ex.fidelity() * static_cast<double>(ex.kept_count)));
  const auto fid_ci =
      stats::wilson_interval(agree, std::max<std::size_t>(ex.kept_count, 1),
                             stats::kZ95);
  rec.set("fidelity", ex.fidelity(), fid_ci.low, fid_ci.high);
  rec.set("alarm_count", static_cast<double>(ex.alarm_count));
  rec.wall_time_s = clock.elapsed_s();
  return rec;
}

ResultRecord attack_experiment(const RunConfig& config,
                               const std::string& attack_override) {
  const std::string name =
      attack_override.empty() ? config.attack_name : attack_override;
  const auto& known = known_attack_names();
  if (std::find(known.begin(), known.end(), name) == known.end()) {
    std::ostringstream msg;
    msg << "unknown attack '" << name << "'; valid attacks:";
    for (const auto& n : known) msg << ' ' << n;
    throw config_error(msg.str());
  }

  WallClock clock;
  AttackReport rep;
  const std::uint64_t seed = derive_seed(config.seed, "attack:" + name, 0);
  if (name == "inject") {
    rep = attack_inject(config.protocol, config.injection, config.n_periods,
                        seed);
  } else if (name == "mitm") {
    rep = attack_mitm(config.protocol, seed);
  } else {
    PassiveAttack attack = PassiveAttack::correlation;
    if (name == "wire_resistance") attack = PassiveAttack::wire_resistance;
    if (name == "temperature_mismatch")
      attack = PassiveAttack::temperature_mismatch;
    if (name == "resistor_mismatch") attack = PassiveAttack::resistor_mismatch;
    if (name == "higher_moment") attack = PassiveAttack::higher_moment;
    rep = evaluate_passive_attack(config.protocol, attack, config.n_periods,
                                  seed);
  }

  ResultRecord rec;
  rec.experiment_id = "attack:" + name;
  rec.seed = config.seed;
  rec.config_echo = config.echo_json();
  fill_attack_metrics(rec, rep);
  rec.wall_time_s = clock.elapsed_s();
  return rec;
}

std::vector<ResultRecord> sweep_experiment(const RunConfig& config) {
  if (config.sweep.values.empty())
    throw config_error("sweep: value list must not be empty");
  if (config.sweep.parameter.empty())
    throw config_error("sweep: parameter name required");
  if (config.attack_name.empty())
    throw config_error("sweep: attack name required");

  std::vector<ResultRecord> records;
  for (std::size_t i = 0; i < config.sweep.values.size(); ++i) {
    RunConfig point = config;
    apply_sweep_value(point.protocol, config.sweep.parameter,
                      config.sweep.values[i]);
    point.protocol.validate();
    point.seed = derive_seed(config.seed, "sweep:" + config.sweep.parameter, i);
    ResultRecord rec = attack_experiment(point);
    rec.experiment_id = "sweep:" + config.sweep.parameter;
    // Prepend the axis columns so sweep CSVs read naturally.
    std::vector<std::pair<std::string, Metric>> metrics;
    metrics.emplace_back("point_index",
                         Metric{static_cast<double>(i), std::nullopt});
    metrics.emplace_back(config.sweep.parameter,
                         Metric{config.sweep.values[i], std::nullopt});
    for (auto& m : rec.metrics) metrics.push_back(std::move(m));
    rec.metrics = std::move(metrics);
    records.push_back(std::move(rec));
  }
  return records;
}

ResultRecord chain_experiment(const RunConfig& config) {
  if (config.chain.n_agents < 2)
    throw config_error("chain: n_agents must be >= 2");
  if (config.chain.n_bits < 1)
    throw config_error("chain: n_bits must be >= 1");

  WallClock clock;
  std::size_t periods = config.chain.periods_per_link;
  if (periods == 0) {
    // Kept fraction is ~1/2; leave headroom so honest runs do not exhaust
    // their pads.
    periods = std::max<std::size_t>(
        64, static_cast<std::size_t>(
                std::llround(2.4 * static_cast<double>(config.chain.n_bits))));
  }
  Chain chain = build_chain(config.chain.n_agents, config.protocol, periods,
                            derive_seed(config.seed, "chain-links", 0));

  std::mt19937_64 bit_rng(derive_seed(config.seed, "chain-bits", 0));
  std::vector<std::uint8_t> source(config.chain.n_bits);
  for (auto& b : source) b = static_cast<std::uint8_t>(bit_rng() >> 63);

  PublicTranscript transcript;
  const std::vector<std::uint8_t> delivered =
      teleclone_sequence(chain, 0, source, transcript);

  std::size_t errors = 0;
  for (std::size_t i = 0; i < source.size(); ++i)
    errors += delivered[i] != source[i];

  std::size_t transcript_ones = 0;
  for (const auto& r : transcript.records) transcript_ones += r.broadcast_bit;

  ResultRecord rec;
  rec.experiment_id = "chain";
  rec.seed = config.seed;
  rec.config_echo = config.echo_json();
  rec.set("n_agents", static_cast<double>(config.chain.n_agents));
  rec.set("bits_delivered", static_cast<double>(delivered.size()));
  rec.set("delivery_errors", static_cast<double>(errors));
  rec.set("key_bits_consumed", static_cast<double>(chain.consumed_key_bits()));
  rec.set("key_bits_per_bit",
          static_cast<double>(chain.consumed_key_bits()) /
              static_cast<double>(delivered.size()));
  rec.set("transcript_ones_fraction",
          transcript.records.empty()
              ? 0.0
              : static_cast<double>(transcript_ones) /
                    static_cast<double>(transcript.records.size()));
  if (source.size() >= 10000) {
    const auto hops = transcript_independence_test(transcript, source);
    double max_abs = 0.0;
    bool all_secure = true;
    for (const auto& h : hops) {
      max_abs = std::max(max_abs, std::abs(h.correlation));
      all_secure = all_secure && h.secure;
    }
    rec.set("max_abs_hop_correlation", max_abs);
    rec.set("all_hops_independent", all_secure ? 1.0 : 0.0);
  }
  rec.wall_time_s = clock.elapsed_s();
  return rec;
}

namespace {

Bit bit_of(char c) { return c == 'H' || c == 'h' ? Bit::H : Bit::L; }

}  // namespace

PsdTable psd_experiment(const RunConfig& config) {
  if (config.n_periods < 1) throw config_error("psd: n_periods must be >= 1");
  if (config.psd.state.size() != 2 ||
      (config.psd.state.find_first_not_of("LHlh") != std::string::npos))
    throw config_error("psd: state must be one of LL, LH, HL, HH");
  const Bit alice_bit = bit_of(config.psd.state[0]);
  const Bit bob_bit = bit_of(config.psd.state[1]);
  const ProtocolConfig& pc = config.protocol;
  pc.validate();

  const Endpoint a = pc.effective_endpoint(pc.alice);
  const Endpoint b = pc.effective_endpoint(pc.bob);
  const double analytic = two_temperature_voltage_psd(
      a.resistance(alice_bit), a.temperature(alice_bit),
      b.resistance(bob_bit), b.temperature(bob_bit));

  PsdTable table;
  for (std::size_t p = 0; p < config.n_periods; ++p) {
    const PeriodOutcome out = run_period_seeded(
        pc, alice_bit, bob_bit, derive_seed(config.seed, "noise-alice", p),
        derive_seed(config.seed, "noise-bob", p));
    const PsdEstimate est = estimate_psd(out.waveforms.u_alice_end, 1);
    if (table.frequency_hz.empty()) {
      table.frequency_hz = est.frequency_hz;
      table.empirical_psd.assign(est.psd.size(), 0.0);
      table.analytic_psd.assign(est.psd.size(), 0.0);
      for (std::size_t j = 0; j < est.frequency_hz.size(); ++j)
        table.analytic_psd[j] =
            est.frequency_hz[j] <= pc.bandwidth_hz ? analytic : 0.0;
    }
    for (std::size_t j = 0; j < est.psd.size(); ++j)
      table.empirical_psd[j] += est.psd[j];
  }
  for (double& v : table.empirical_psd)
    v /= static_cast<double>(config.n_periods);
  return table;
}

ResultRecord psd_summary(const RunConfig& config, const PsdTable& table) {
  ResultRecord rec;
  rec.experiment_id = "psd";
  rec.seed = config.seed;
  rec.config_echo = config.echo_json();
  double emp = 0.0, ana = 0.0;
  std::size_t n = 0;
  for (std::size_t j = 0; j < table.frequency_hz.size(); ++j) {
    if (table.analytic_psd[j] > 0.0 && table.frequency_hz[j] > 0.0) {
      emp += table.empirical_psd[j];
      ana += table.analytic_psd[j];
      ++n;
    }
  }
  rec.set("in_band_bins", static_cast<double>(n));
  rec.set("in_band_ratio", ana > 0.0 ? emp / ana : 0.0);
  return rec;
}

namespace {

std::string format_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string PsdTable::to_csv() const {
  std::ostringstream out;
  out << "frequency_hz,empirical_psd,analytic_psd\n";
  for (std::size_t j = 0; j < frequency_hz.size(); ++j)
    out << format_g(frequency_hz[j]) << ',' << format_g(empirical_psd[j])
        << ',' << format_g(analytic_psd[j]) << '\n';
  return out.str();
}

std::string PsdTable::to_json_lines() const {
  std::ostringstream out;
  for (std::size_t j = 0; j < frequency_hz.size(); ++j) {
    nlohmann::ordered_json rec;
    rec["frequency_hz"] = frequency_hz[j];
    rec["empirical_psd"] = empirical_psd[j];
    rec["analytic_psd"] = analytic_psd[j];
    out << rec.dump() << '\n';
  }
  return out.str();
}

}  // namespace kljn
