#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "omnivic/geometry.hpp"

namespace omnivic {

enum class Phase { FreeMotion, Approaching, Contact, Retreat };

const char* to_string(Phase phase);
Phase phase_from_string(const std::string& text);  // strict, throws

enum class OutcomeLabel { Success, FailureForce, FailureTimeout };

const char* to_string(OutcomeLabel label);

// Classifies a finished episode from its per-step force magnitudes.
// FailureForce wins if any run of `consecutive` samples sits strictly above
// f_max; otherwise FailureTimeout if the episode used more than t_max steps;
// otherwise Success.
OutcomeLabel label_outcome(std::span<const double> force_trace,
                           long step_count, double f_max, long t_max,
                           int consecutive);

// One stored experience: what was asked, what the interaction looked like,
// and which gains were in effect. Twist is world-frame; wrench is
// world-frame and gravity-compensated; the embedding is unit-norm.
struct RagRecord {
  std::uint64_t record_id{0};
  std::string instruction_text;
  Eigen::VectorXd instruction_embedding;
  Phase phase{Phase::FreeMotion};
  Twist twist;
  Wrench wrench;
  Vector3 k_trans{Vector3::Zero()};
  Vector3 d_trans{Vector3::Zero()};
};

struct BankConfig {
  std::size_t capacity_b{200};
  int embedding_dim{256};
};

struct InsertReport {
  bool added{false};
  std::uint64_t record_id{0};  // id assigned to the new record when added
  std::optional<std::uint64_t> evicted_id;
};

struct BankStats {
  std::size_t size{0};
  std::size_t distinct_instructions{0};
  std::array<std::size_t, 4> per_phase{};  // indexed by Phase order
};

struct BankIoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fixed-capacity store of successful experiences. At capacity, an insert
// pools the incoming record with the stored records that share its
// instruction (all records when none do), finds the most mutually similar
// pair by aggregate interaction similarity, and discards one of that pair at
// random. Readers see a consistent snapshot as long as no insert runs
// concurrently; interleaving inserts with reads is the caller's bug.
class Bank {
 public:
  explicit Bank(BankConfig config, std::uint64_t eviction_seed = 0);

  // Offers one experience. Only Success-labeled experiences are accepted;
  // anything else throws, as do records violating the stored-record
  // invariants (dimension, unit norm, positive gains, frames).
  InsertReport insert(const RagRecord& record, OutcomeLabel label);

  const std::vector<RagRecord>& records() const { return records_; }
  const BankConfig& config() const { return config_; }
  BankStats stats() const;

  // Line-oriented persistence, one record per line in insertion order.
  // Saving then loading then saving again produces byte-identical files.
  void save(const std::filesystem::path& path) const;
  static Bank load(const std::filesystem::path& path, const BankConfig& config,
                   std::uint64_t eviction_seed = 0);

 private:
  BankConfig config_;
  std::vector<RagRecord> records_;
  std::uint64_t next_id_{1};
  std::mt19937_64 rng_;
};

}  // namespace omnivic
