#include "omnivic/commands.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <system_error>

#include "omnivic/collect.hpp"
#include "omnivic/controllers.hpp"
#include "omnivic/embedding.hpp"
#include "omnivic/fixtures.hpp"
#include "omnivic/retrieval.hpp"
#include "omnivic/sim.hpp"

namespace omnivic::cli {

namespace {

std::string fixed4(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4f", v);
  return buf;
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string pad(const std::string& s, std::size_t width) {
  if (s.size() >= width) return s;
  return s + std::string(width - s.size(), ' ');
}

std::string lpad(const std::string& s, std::size_t width) {
  if (s.size() >= width) return s;
  return std::string(width - s.size(), ' ') + s;
}

// Episode trace files are named after the suite cell so a directory of runs
// stays self-describing: trace_<env>_<method>_ep<N>.csv.
std::filesystem::path trace_path(const std::filesystem::path& dir,
                                 const std::string& env_name,
                                 sim::MethodKind method, int episode) {
  return dir / ("trace_" + env_name + "_" + std::string(to_string(method)) +
                "_ep" + std::to_string(episode) + ".csv");
}

std::string metrics_table(const sim::SuiteResult& suite) {
  std::ostringstream table;
  table << pad("env", 14) << pad("method", 10) << lpad("episodes", 10)
        << lpad("successes", 11) << lpad("violations", 12)
        << lpad("success_rate", 14) << lpad("violation_rate", 16)
        << lpad("mean_peak_N", 13) << '\n';
  for (const auto& cell : suite.cells) {
    table << pad(cell.env_name, 14) << pad(cell.method, 10)
          << lpad(std::to_string(cell.episodes), 10)
          << lpad(std::to_string(cell.successes), 11)
          << lpad(std::to_string(cell.violations), 12)
          << lpad(fixed4(cell.success_rate), 14)
          << lpad(fixed4(cell.violation_rate), 16)
          << lpad(fixed2(cell.mean_peak_force), 13) << '\n';
  }
  return table.str();
}

}  // namespace

int cmd_collect(const RunConfig& config, const std::filesystem::path& bank_path,
                std::ostream& out) {
  Bank bank(config.bank, config.seed);
  const HashEmbedder embedder(config.bank.embedding_dim);
  const std::vector<sim::NamedEnv> tasks = config.resolve_envs(config.collect_tasks);

  sim::CollectConfig cc;
  cc.quota_per_pair = config.collect_quota_per_pair;
  cc.episodes_per_task = config.collect_episodes_per_task;
  cc.seed = config.seed;
  cc.jitter = config.jitter;
  cc.settings = config.settings;
  cc.thresholds = config.thresholds;

  const sim::CollectReport report = sim::collect_into_bank(bank, tasks, cc, embedder);

  out << "episodes run: " << report.episodes_run
      << ", successes: " << report.successes << '\n';
  out << pad("instruction", 64) << pad("phase", 12) << lpad("count", 5) << '\n';
  for (const auto& pair : report.pair_counts) {
    out << pad(pair.instruction, 64) << pad(to_string(pair.phase), 12)
        << lpad(std::to_string(pair.count), 5) << '\n';
  }

  try {
    bank.save(bank_path);
  } catch (const BankIoError& e) {
    out << "error: " << e.what() << '\n';
    return exit_code::kIo;
  }
  out << "bank saved to " << bank_path.string() << " (" << bank.records().size()
      << " records)\n";

  if (report.successes == 0) {
    out << "warning: no successful episodes; the bank is empty\n";
    return exit_code::kNoData;
  }
  if (report.degraded_backend) {
    out << "warning: remote backend degraded; heuristic fallback was used\n";
    return exit_code::kDegraded;
  }
  return exit_code::kOk;
}

int cmd_retrieve(const std::filesystem::path& bank_path,
                 const RetrieveQuery& query, const RunConfig& config,
                 std::ostream& out) {
  Bank bank = Bank::load(bank_path, config.bank, config.seed);
  const HashEmbedder embedder(config.bank.embedding_dim);

  QueryContext ctx;
  ctx.instruction_text = query.instruction;
  ctx.instruction_embedding = embedder.embed(query.instruction);
  ctx.phase = query.phase;
  ctx.twist.linear = query.twist.head<3>();
  ctx.twist.angular = query.twist.tail<3>();
  ctx.twist.frame = Frame::World;
  ctx.wrench.force = query.wrench.head<3>();
  ctx.wrench.torque = query.wrench.tail<3>();
  ctx.wrench.frame = Frame::World;
  ctx.wrench.gravity_compensated = true;

  const std::vector<Exemplar> ranked =
      retrieve(bank, ctx, config.settings.retrieval);

  out << pad("rank", 6) << pad("id", 6) << pad("phase", 12)
      << lpad("force", 8) << lpad("torque", 8) << lpad("linvel", 8)
      << lpad("angvel", 8) << lpad("aggregate", 11) << "  "
      << pad("k", 24) << "instruction" << '\n';
  int rank = 1;
  for (const auto& ex : ranked) {
    std::string k_cell = "[" + fixed2(ex.record.k_trans.x()) + ", " +
                         fixed2(ex.record.k_trans.y()) + ", " +
                         fixed2(ex.record.k_trans.z()) + "]";
    out << pad(std::to_string(rank++), 6)
        << pad(std::to_string(ex.record.record_id), 6)
        << pad(to_string(ex.record.phase), 12) << lpad(fixed4(ex.force_sim), 8)
        << lpad(fixed4(ex.torque_sim), 8) << lpad(fixed4(ex.linvel_sim), 8)
        << lpad(fixed4(ex.angvel_sim), 8) << lpad(fixed4(ex.aggregate), 11)
        << "  " << pad(k_cell, 24) << ex.record.instruction_text << '\n';
  }
  if (ranked.empty()) {
    out << "(no matching records)\n";
  }
  return exit_code::kOk;
}

int cmd_run(const RunConfig& config,
            const std::optional<std::filesystem::path>& bank_path,
            std::ostream& out) {
  Bank bank = bank_path ? Bank::load(*bank_path, config.bank, config.seed)
                        : Bank(config.bank, config.seed);
  const HashEmbedder embedder(config.bank.embedding_dim);
  const std::vector<sim::NamedEnv> envs = config.resolve_envs(config.eval_envs);

  std::error_code ec;
  std::filesystem::create_directories(config.out_dir, ec);
  if (ec) {
    out << "error: cannot create output directory '" << config.out_dir.string()
        << "': " << ec.message() << '\n';
    return exit_code::kIo;
  }

  const auto sink = [&](const std::string& env_name, sim::MethodKind method,
                        int episode, const sim::EpisodeResult& result) {
    sim::write_trace_csv(trace_path(config.out_dir, env_name, method, episode),
                         result);
  };

  sim::SuiteResult suite;
  try {
    suite = sim::evaluate_suite(envs, config.methods, config.episodes,
                                config.seed, bank, embedder, config.settings,
                                config.thresholds, config.jitter, sink);
  } catch (const sim::TraceIoError& e) {
    out << "error: " << e.what() << '\n';
    return exit_code::kIo;
  }

  const std::string table = metrics_table(suite);
  out << table;

  const std::filesystem::path metrics_file = config.out_dir / "metrics.txt";
  std::ofstream metrics(metrics_file);
  if (!metrics) {
    out << "error: cannot write '" << metrics_file.string() << "'\n";
    return exit_code::kIo;
  }
  metrics << table;
  if (suite.degraded_backend) {
    metrics << "backend: degraded (heuristic fallback used)\n";
  }
  metrics.close();
  out << "metrics written to " << metrics_file.string() << '\n';

  if (suite.degraded_backend) {
    out << "warning: remote backend degraded; heuristic fallback was used\n";
    return exit_code::kDegraded;
  }
  return exit_code::kOk;
}

int cmd_bank_stats(const std::filesystem::path& bank_path,
                   const RunConfig& config, std::ostream& out) {
  const Bank bank = Bank::load(bank_path, config.bank, config.seed);
  const BankStats stats = bank.stats();
  out << "records: " << stats.size << '\n';
  out << "distinct instructions: " << stats.distinct_instructions << '\n';
  static constexpr Phase kPhases[] = {Phase::FreeMotion, Phase::Approaching,
                                      Phase::Contact, Phase::Retreat};
  for (std::size_t i = 0; i < 4; ++i) {
    out << pad(to_string(kPhases[i]), 12) << stats.per_phase[i] << '\n';
  }
  return exit_code::kOk;
}

}  // namespace omnivic::cli
