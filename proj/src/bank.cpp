#include "omnivic/bank.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include <json.hpp>

#include "omnivic/number_format.hpp"
#include "omnivic/similarity.hpp"

namespace omnivic {

namespace {

constexpr double kUnitNormTol = 1e-6;

void validate_record(const RagRecord& r, const BankConfig& cfg) {
  if (r.instruction_text.empty()) {
    throw std::invalid_argument("bank record: empty instruction text");
  }
  if (r.instruction_embedding.size() != cfg.embedding_dim) {
    throw std::invalid_argument("bank record: embedding dimension mismatch");
  }
  if (!r.instruction_embedding.allFinite() ||
      std::abs(r.instruction_embedding.norm() - 1.0) > kUnitNormTol) {
    throw std::invalid_argument("bank record: embedding must be unit-norm");
  }
  if (r.twist.frame != Frame::World || !is_finite(r.twist)) {
    throw std::invalid_argument("bank record: twist must be finite and world-frame");
  }
  if (r.wrench.frame != Frame::World || !r.wrench.gravity_compensated ||
      !is_finite(r.wrench)) {
    throw std::invalid_argument(
        "bank record: wrench must be finite, world-frame, compensated");
  }
  if (!r.k_trans.allFinite() || !r.d_trans.allFinite() ||
      (r.k_trans.array() <= 0.0).any() || (r.d_trans.array() <= 0.0).any()) {
    throw std::invalid_argument("bank record: gains must be positive");
  }
}

double pair_aggregate(const RagRecord& a, const RagRecord& b) {
  return signal_scores(a.twist, a.wrench, b.twist, b.wrench).aggregate();
}

void append_array(std::string& out, const double* v, int n, int digits) {
  out += '[';
  for (int i = 0; i < n; ++i) {
    if (i) out += ',';
    out += format_sig(v[i], digits);
  }
  out += ']';
}

}  // namespace

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::FreeMotion: return "FreeMotion";
    case Phase::Approaching: return "Approaching";
    case Phase::Contact: return "Contact";
    case Phase::Retreat: return "Retreat";
  }
  throw std::invalid_argument("to_string: bad Phase value");
}

Phase phase_from_string(const std::string& text) {
  if (text == "FreeMotion") return Phase::FreeMotion;
  if (text == "Approaching") return Phase::Approaching;
  if (text == "Contact") return Phase::Contact;
  if (text == "Retreat") return Phase::Retreat;
  throw std::invalid_argument("phase_from_string: unknown phase '" + text + "'");
}

const char* to_string(OutcomeLabel label) {
  switch (label) {
    case OutcomeLabel::Success: return "Success";
    case OutcomeLabel::FailureForce: return "FailureForce";
    case OutcomeLabel::FailureTimeout: return "FailureTimeout";
  }
  throw std::invalid_argument("to_string: bad OutcomeLabel value");
}

OutcomeLabel label_outcome(std::span<const double> force_trace, long step_count,
                           double f_max, long t_max, int consecutive) {
  if (consecutive < 1 || f_max < 0.0 || t_max < 0) {
    throw std::invalid_argument("label_outcome: bad thresholds");
  }
  int run = 0;
  for (double f : force_trace) {
    if (f > f_max) {
      if (++run >= consecutive) {
        return OutcomeLabel::FailureForce;
      }
    } else {
      run = 0;
    }
  }
  if (step_count > t_max) {
    return OutcomeLabel::FailureTimeout;
  }
  return OutcomeLabel::Success;
}

Bank::Bank(BankConfig config, std::uint64_t eviction_seed)
    : config_(config), rng_(eviction_seed) {
  if (config_.capacity_b == 0 || config_.embedding_dim <= 0) {
    throw std::invalid_argument("BankConfig: capacity and dimension must be positive");
  }
}

InsertReport Bank::insert(const RagRecord& record, OutcomeLabel label) {
  if (label != OutcomeLabel::Success) {
    throw std::invalid_argument("Bank::insert: only Success experiences are stored");
  }
  validate_record(record, config_);

  // The persisted format carries embeddings at 9 significant digits; store
  // the canonical values up front so load(save(b)) is the exact identity and
  // retrieval scores never shift across a persistence cycle.
  RagRecord canon = record;
  for (Eigen::Index i = 0; i < canon.instruction_embedding.size(); ++i) {
    canon.instruction_embedding[i] =
        std::stod(format_sig(canon.instruction_embedding[i], 9));
  }

  if (records_.size() < config_.capacity_b) {
    records_.push_back(canon);
    records_.back().record_id = next_id_;
    return {true, next_id_++, std::nullopt};
  }

  // At capacity: pool the newcomer with stored records sharing its
  // instruction; with no such records the pool degenerates to the whole bank.
  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < records_.size(); ++i) {
    if (records_[i].instruction_text == canon.instruction_text) {
      pool.push_back(i);
    }
  }
  if (pool.empty()) {
    pool.resize(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) pool[i] = i;
  }

  // Pairwise aggregate similarity over the pool plus the newcomer. The
  // newcomer is addressed by index == records_.size() and carries a
  // tentative id above every stored id. Ties prefer the pair with the larger
  // (max id, min id), which always selects a pair containing the newcomer
  // when one ties for the maximum.
  const std::size_t kNew = records_.size();
  auto id_of = [&](std::size_t idx) {
    return idx == kNew ? next_id_ : records_[idx].record_id;
  };
  auto rec_of = [&](std::size_t idx) -> const RagRecord& {
    return idx == kNew ? canon : records_[idx];
  };

  std::vector<std::size_t> members = pool;
  members.push_back(kNew);

  double best = -std::numeric_limits<double>::infinity();
  std::uint64_t best_hi = 0, best_lo = 0;
  std::size_t best_a = 0, best_b = 0;
  for (std::size_t i = 0; i + 1 < members.size(); ++i) {
    for (std::size_t j = i + 1; j < members.size(); ++j) {
      const double agg = pair_aggregate(rec_of(members[i]), rec_of(members[j]));
      std::uint64_t lo = id_of(members[i]);
      std::uint64_t hi = id_of(members[j]);
      if (lo > hi) std::swap(lo, hi);
      if (std::tie(agg, hi, lo) > std::tie(best, best_hi, best_lo)) {
        best = agg;
        best_hi = hi;
        best_lo = lo;
        best_a = members[i];
        best_b = members[j];
      }
    }
  }

  const std::size_t victim = (rng_() & 1u) ? best_b : best_a;
  if (victim == kNew) {
    return {false, 0, std::nullopt};
  }
  const std::uint64_t evicted = records_[victim].record_id;
  records_.erase(records_.begin() + static_cast<std::ptrdiff_t>(victim));
  records_.push_back(canon);
  records_.back().record_id = next_id_;
  return {true, next_id_++, evicted};
}

BankStats Bank::stats() const {
  BankStats s;
  s.size = records_.size();
  std::unordered_set<std::string> instructions;
  for (const auto& r : records_) {
    instructions.insert(r.instruction_text);
    s.per_phase[static_cast<std::size_t>(r.phase)]++;
  }
  s.distinct_instructions = instructions.size();
  return s;
}

void Bank::save(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw BankIoError("bank save: cannot open '" + path.string() + "'");
  }
  std::string line;
  for (const auto& r : records_) {
    line.clear();
    line += "{\"id\":";
    line += std::to_string(r.record_id);
    line += ",\"instruction\":";
    line += nlohmann::json(r.instruction_text).dump();
    line += ",\"embedding\":";
    append_array(line, r.instruction_embedding.data(),
                 static_cast<int>(r.instruction_embedding.size()), 9);
    line += ",\"phase\":\"";
    line += to_string(r.phase);
    line += "\",\"twist\":";
    double tw[6] = {r.twist.linear.x(),  r.twist.linear.y(),
                    r.twist.linear.z(),  r.twist.angular.x(),
                    r.twist.angular.y(), r.twist.angular.z()};
    append_array(line, tw, 6, 17);
    line += ",\"wrench\":";
    double wr[6] = {r.wrench.force.x(),  r.wrench.force.y(),
                    r.wrench.force.z(),  r.wrench.torque.x(),
                    r.wrench.torque.y(), r.wrench.torque.z()};
    append_array(line, wr, 6, 17);
    line += ",\"wrench_compensated\":";
    line += r.wrench.gravity_compensated ? "true" : "false";
    line += ",\"k\":";
    append_array(line, r.k_trans.data(), 3, 17);
    line += ",\"d\":";
    append_array(line, r.d_trans.data(), 3, 17);
    line += "}\n";
    out << line;
  }
  if (!out) {
    throw BankIoError("bank save: write failed for '" + path.string() + "'");
  }
}

Bank Bank::load(const std::filesystem::path& path, const BankConfig& config,
                std::uint64_t eviction_seed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw BankIoError("bank load: cannot open '" + path.string() + "'");
  }
  Bank bank(config, eviction_seed);
  std::unordered_set<std::uint64_t> seen_ids;
  std::string text;
  long line_no = 0;
  while (std::getline(in, text)) {
    ++line_no;
    if (text.empty()) {
      continue;
    }
    const std::string where = "bank load: line " + std::to_string(line_no);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
      throw BankIoError(where + ": " + e.what());
    }
    try {
      RagRecord r;
      r.record_id = j.at("id").get<std::uint64_t>();
      r.instruction_text = j.at("instruction").get<std::string>();
      const auto& emb = j.at("embedding");
      r.instruction_embedding.resize(static_cast<Eigen::Index>(emb.size()));
      for (std::size_t i = 0; i < emb.size(); ++i) {
        r.instruction_embedding[static_cast<Eigen::Index>(i)] =
            emb.at(i).get<double>();
      }
      r.phase = phase_from_string(j.at("phase").get<std::string>());
      const auto& tw = j.at("twist");
      const auto& wr = j.at("wrench");
      if (tw.size() != 6 || wr.size() != 6) {
        throw std::invalid_argument("twist/wrench must have 6 entries");
      }
      r.twist.linear = Vector3(tw.at(0).get<double>(), tw.at(1).get<double>(),
                               tw.at(2).get<double>());
      r.twist.angular = Vector3(tw.at(3).get<double>(), tw.at(4).get<double>(),
                                tw.at(5).get<double>());
      r.twist.frame = Frame::World;
      r.wrench.force = Vector3(wr.at(0).get<double>(), wr.at(1).get<double>(),
                               wr.at(2).get<double>());
      r.wrench.torque = Vector3(wr.at(3).get<double>(), wr.at(4).get<double>(),
                                wr.at(5).get<double>());
      r.wrench.frame = Frame::World;
      r.wrench.gravity_compensated = j.at("wrench_compensated").get<bool>();
      const auto& k = j.at("k");
      const auto& d = j.at("d");
      if (k.size() != 3 || d.size() != 3) {
        throw std::invalid_argument("k/d must have 3 entries");
      }
      for (int i = 0; i < 3; ++i) {
        r.k_trans[i] = k.at(static_cast<std::size_t>(i)).get<double>();
        r.d_trans[i] = d.at(static_cast<std::size_t>(i)).get<double>();
      }
      if (r.record_id == 0) {
        throw std::invalid_argument("record id must be positive");
      }
      if (!seen_ids.insert(r.record_id).second) {
        throw std::invalid_argument("duplicate record id");
      }
      validate_record(r, config);
      if (bank.records_.size() >= config.capacity_b) {
        throw std::invalid_argument("more records than the configured capacity");
      }
      bank.records_.push_back(std::move(r));
      bank.next_id_ = std::max(bank.next_id_, bank.records_.back().record_id + 1);
    } catch (const BankIoError&) {
      throw;
    } catch (const std::exception& e) {
      throw BankIoError(where + ": " + e.what());
    }
  }
  return bank;
}

}  // namespace omnivic
