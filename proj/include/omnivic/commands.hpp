#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "omnivic/run_config.hpp"

namespace omnivic::cli {

// Process exit statuses. Config problems, I/O problems, degraded-backend
// completion, and empty collection are distinguishable by code so scripts
// can branch without scraping output.
namespace exit_code {
inline constexpr int kOk = 0;
inline constexpr int kConfig = 2;
inline constexpr int kIo = 3;
inline constexpr int kDegraded = 4;
inline constexpr int kNoData = 5;
}  // namespace exit_code

// Query fields for the retrieval probe, as parsed from flags.
struct RetrieveQuery {
  std::string instruction;
  Phase phase{Phase::FreeMotion};
  Vector6 twist{Vector6::Zero()};   // [v; w], world frame
  Vector6 wrench{Vector6::Zero()};  // [f; tau], world frame, compensated
};

// Runs knowledge-base episodes, harvests records from the successes, and
// saves the bank file. Prints the per-(instruction, phase) count table.
// Returns kNoData when every episode failed, kDegraded when remote calls
// fell back to the heuristic, kIo when the bank file cannot be written.
int cmd_collect(const RunConfig& config, const std::filesystem::path& bank_path,
                std::ostream& out);

// Loads the bank and prints the ranked exemplar table for one query: the
// four per-channel scores, the aggregate, and the stored gains, in rank
// order. An empty table is still a success.
int cmd_retrieve(const std::filesystem::path& bank_path,
                 const RetrieveQuery& query, const RunConfig& config,
                 std::ostream& out);

// Evaluates every configured method on every configured environment, writes
// one trace file per episode plus metrics.txt under the output directory,
// and prints the metrics table. The exit status reflects completion, not
// success rates; a degraded backend maps to kDegraded.
int cmd_run(const RunConfig& config,
            const std::optional<std::filesystem::path>& bank_path,
            std::ostream& out);

// Prints bank size, distinct instruction count, and per-phase counts.
int cmd_bank_stats(const std::filesystem::path& bank_path,
                   const RunConfig& config, std::ostream& out);

}  // namespace omnivic::cli
