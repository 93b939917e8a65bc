// kljnsim: command-line front end for the KLJN key-exchange simulator.
//
// Subcommands: exchange, attack, sweep, chain, psd. Every run is a pure
// function of (config, seed); repeated runs emit identical metrics.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kljn/errors.hpp"
#include "kljn/experiments.hpp"

namespace {

struct GlobalArgs {
  std::string config_path;
  std::string out_path;
  std::string format = "json-lines";
  std::uint64_t seed = 0;
  bool seed_set = false;
};

void write_output(const GlobalArgs& args, const std::string& payload) {
  if (args.out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream out(args.out_path);
  if (!out) throw kljn::config_error("cannot open output file: " + args.out_path);
  out << payload;
}

kljn::RunConfig load_config(const GlobalArgs& args) {
  if (args.config_path.empty())
    throw kljn::config_error("--config PATH is required");
  kljn::RunConfig rc = kljn::RunConfig::from_file(args.config_path);
  if (args.seed_set) rc.seed = args.seed;
  return rc;
}

std::string render(const GlobalArgs& args,
                   const std::vector<kljn::ResultRecord>& records) {
  if (args.format == "csv") return kljn::to_csv(records);
  return kljn::to_json_lines(records);
}

void add_global_flags(CLI::App* cmd, GlobalArgs& args) {
  cmd->add_option("--config", args.config_path, "Path to the JSON run config")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", args.seed, "Override the config seed")
      ->each([&args](const std::string&) { args.seed_set = true; });
  cmd->add_option("--out", args.out_path,
                  "Output file (stdout when omitted)");
  cmd->add_option("--format", args.format, "Output format")
      ->check(CLI::IsMember({"csv", "json-lines"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-time simulator of the KLJN secure key exchange"};
  app.require_subcommand(1);

  GlobalArgs args;
  std::string attack_override;

  CLI::App* cmd_exchange =
      app.add_subcommand("exchange", "Run one key exchange");
  add_global_flags(cmd_exchange, args);

  CLI::App* cmd_attack =
      app.add_subcommand("attack", "Run an eavesdropping attack");
  add_global_flags(cmd_attack, args);
  cmd_attack->add_option("name", attack_override,
                         "Attack name (overrides the config)");

  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "Run an attack over a parameter sweep");
  add_global_flags(cmd_sweep, args);

  CLI::App* cmd_chain =
      app.add_subcommand("chain", "Run the chain-network key relay");
  add_global_flags(cmd_chain, args);

  CLI::App* cmd_psd =
      app.add_subcommand("psd", "Emit empirical vs analytic channel PSD data");
  add_global_flags(cmd_psd, args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_exchange->parsed()) {
      const auto rec = kljn::exchange_experiment(load_config(args));
      write_output(args, render(args, {rec}));
    } else if (cmd_attack->parsed()) {
      const auto rec =
          kljn::attack_experiment(load_config(args), attack_override);
      write_output(args, render(args, {rec}));
    } else if (cmd_sweep->parsed()) {
      GlobalArgs sweep_args = args;
      if (sweep_args.format.empty()) sweep_args.format = "csv";
      const auto records = kljn::sweep_experiment(load_config(args));
      write_output(args, render(sweep_args, records));
    } else if (cmd_chain->parsed()) {
      const auto rec = kljn::chain_experiment(load_config(args));
      write_output(args, render(args, {rec}));
    } else if (cmd_psd->parsed()) {
      const kljn::RunConfig rc = load_config(args);
      const kljn::PsdTable table = kljn::psd_experiment(rc);
      write_output(args,
                   args.format == "csv" ? table.to_csv() : table.to_json_lines());
    }
  } catch (const kljn::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const kljn::resource_error& e) {
    std::cerr << "resource error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
