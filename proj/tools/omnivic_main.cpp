// Command-line front end: collect banks, probe retrieval, run evaluation
// suites, and inspect bank files. One JSON config file drives everything;
// a handful of flags override individual fields for quick experiments.
#include <exception>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "omnivic/bank.hpp"
#include "omnivic/commands.hpp"
#include "omnivic/controllers.hpp"
#include "omnivic/run_config.hpp"
#include "omnivic/sim.hpp"

namespace {

using omnivic::cli::exit_code::kConfig;
using omnivic::cli::exit_code::kIo;

omnivic::cli::RunConfig make_config(const std::string& config_path) {
  if (config_path.empty()) {
    return omnivic::cli::default_config();
  }
  return omnivic::cli::load_config(config_path);
}

// Parses "a,b,c,d,e,f" into six doubles; throws std::invalid_argument.
omnivic::Vector6 parse_vec6(const std::string& text) {
  omnivic::Vector6 v;
  std::istringstream in(text);
  std::string cell;
  int i = 0;
  while (std::getline(in, cell, ',')) {
    if (i >= 6) throw std::invalid_argument("expected 6 comma-separated numbers");
    std::size_t used = 0;
    v[i] = std::stod(cell, &used);
    if (used != cell.size()) {
      throw std::invalid_argument("bad number '" + cell + "'");
    }
    ++i;
  }
  if (i != 6) throw std::invalid_argument("expected 6 comma-separated numbers");
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"variable impedance control with retrieval-augmented "
               "in-context parameter generation"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file")
      ->check(CLI::ExistingFile);

  // collect
  auto* collect = app.add_subcommand(
      "collect", "run knowledge-base episodes and save the experience bank");
  std::string collect_bank = "bank.jsonl";
  std::optional<std::uint64_t> collect_seed;
  std::optional<std::string> collect_backend;
  collect->add_option("--bank", collect_bank, "output bank file");
  collect->add_option("--seed", collect_seed, "base seed override");
  collect->add_option("--backend", collect_backend,
                      "generator backend: heuristic or remote");

  // retrieve
  auto* retrieve = app.add_subcommand(
      "retrieve", "print the ranked exemplar table for one query");
  std::string retrieve_bank;
  std::string q_instruction;
  std::string q_phase = "FreeMotion";
  std::string q_twist = "0,0,0,0,0,0";
  std::string q_wrench = "0,0,0,0,0,0";
  retrieve->add_option("--bank", retrieve_bank, "bank file to query")
      ->required();
  retrieve->add_option("--instruction", q_instruction, "query instruction text")
      ->required();
  retrieve->add_option("--phase", q_phase,
                       "FreeMotion, Approaching, Contact, or Retreat");
  retrieve->add_option("--twist", q_twist, "vx,vy,vz,wx,wy,wz");
  retrieve->add_option("--wrench", q_wrench, "fx,fy,fz,tx,ty,tz");

  // run
  auto* run = app.add_subcommand(
      "run", "evaluate the configured methods and write traces + metrics");
  std::optional<std::string> run_bank;
  std::optional<std::string> run_method;
  std::optional<int> run_episodes;
  std::optional<std::uint64_t> run_seed;
  std::optional<std::string> run_out;
  std::optional<std::string> run_backend;
  run->add_option("--bank", run_bank, "experience bank file (omitted: empty bank)");
  run->add_option("--method", run_method,
                  "restrict to one method: baseline, omnivic, or rag-only");
  run->add_option("--episodes", run_episodes, "episodes per (env, method) cell");
  run->add_option("--seed", run_seed, "base seed override");
  run->add_option("--out", run_out, "output directory");
  run->add_option("--backend", run_backend,
                  "generator backend: heuristic or remote");

  // bank-stats
  auto* stats = app.add_subcommand("bank-stats", "print bank summary counts");
  std::string stats_bank;
  stats->add_option("--bank", stats_bank, "bank file")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    omnivic::cli::RunConfig config = make_config(config_path);

    if (collect->parsed()) {
      if (collect_seed) config.seed = *collect_seed;
      if (collect_backend) {
        config.settings.backend = omnivic::sim::backend_from_string(*collect_backend);
      }
      return omnivic::cli::cmd_collect(config, collect_bank, std::cout);
    }
    if (retrieve->parsed()) {
      omnivic::cli::RetrieveQuery query;
      query.instruction = q_instruction;
      query.phase = omnivic::phase_from_string(q_phase);
      query.twist = parse_vec6(q_twist);
      query.wrench = parse_vec6(q_wrench);
      return omnivic::cli::cmd_retrieve(retrieve_bank, query, config, std::cout);
    }
    if (run->parsed()) {
      if (run_method) {
        config.methods = {omnivic::sim::method_from_string(*run_method)};
      }
      if (run_episodes) config.episodes = *run_episodes;
      if (run_seed) config.seed = *run_seed;
      if (run_out) config.out_dir = *run_out;
      if (run_backend) {
        config.settings.backend = omnivic::sim::backend_from_string(*run_backend);
      }
      std::optional<std::filesystem::path> bank_path;
      if (run_bank) bank_path = *run_bank;
      return omnivic::cli::cmd_run(config, bank_path, std::cout);
    }
    if (stats->parsed()) {
      return omnivic::cli::cmd_bank_stats(stats_bank, config, std::cout);
    }
  } catch (const omnivic::cli::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const omnivic::BankIoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const omnivic::sim::TraceIoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIo;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
