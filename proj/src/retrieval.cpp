#include "omnivic/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

namespace omnivic {

void RetrievalConfig::validate() const {
  if (!(m_percent > 0.0) || m_percent > 100.0 || top_n < 1) {
    throw std::invalid_argument(
        "RetrievalConfig: require 0 < m_percent <= 100 and top_n >= 1");
  }
}

std::vector<std::string> step1_instruction_filter(
    const Bank& bank, const Eigen::VectorXd& query_embedding,
    double m_percent) {
  if (!(m_percent > 0.0) || m_percent > 100.0) {
    throw std::invalid_argument(
        "step1_instruction_filter: require 0 < m_percent <= 100");
  }
  if (bank.records().empty()) {
    return {};
  }

  // Representative embedding per instruction: the lowest-id record's.
  struct Entry {
    const RagRecord* rep;
  };
  std::map<std::string, Entry> by_instruction;
  for (const auto& r : bank.records()) {
    auto [it, inserted] = by_instruction.try_emplace(r.instruction_text, Entry{&r});
    if (!inserted && r.record_id < it->second.rep->record_id) {
      it->second.rep = &r;
    }
  }

  struct Scored {
    double sim;
    std::uint64_t rep_id;
    const std::string* text;
  };
  std::vector<Scored> scored;
  scored.reserve(by_instruction.size());
  for (const auto& [text, entry] : by_instruction) {
    scored.push_back({cosine_sim(query_embedding, entry.rep->instruction_embedding),
                      entry.rep->record_id, &text});
  }
  std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
    if (a.sim != b.sim) return a.sim > b.sim;
    return a.rep_id < b.rep_id;
  });

  const auto keep = std::max<std::size_t>(
      1, static_cast<std::size_t>(
             std::ceil(m_percent / 100.0 * static_cast<double>(scored.size()))));
  std::vector<std::string> out;
  out.reserve(std::min(keep, scored.size()));
  for (std::size_t i = 0; i < scored.size() && i < keep; ++i) {
    out.push_back(*scored[i].text);
  }
  return out;
}

std::vector<const RagRecord*> step2_phase_filter(
    const std::vector<const RagRecord*>& candidates, Phase phase) {
  std::vector<const RagRecord*> out;
  out.reserve(candidates.size());
  for (const RagRecord* r : candidates) {
    if (r->phase == phase) {
      out.push_back(r);
    }
  }
  return out;
}

SignalScores step3_scores(const QueryContext& query, const RagRecord& record) {
  return signal_scores(query.twist, query.wrench, record.twist, record.wrench);
}

std::vector<Exemplar> retrieve(const Bank& bank, const QueryContext& query,
                               const RetrievalConfig& config) {
  config.validate();
  if (query.instruction_embedding.size() != bank.config().embedding_dim) {
    throw std::invalid_argument("retrieve: query embedding dimension mismatch");
  }

  const auto kept =
      step1_instruction_filter(bank, query.instruction_embedding, config.m_percent);

  std::vector<const RagRecord*> candidates;
  for (const auto& r : bank.records()) {
    if (std::find(kept.begin(), kept.end(), r.instruction_text) != kept.end()) {
      candidates.push_back(&r);
    }
  }
  candidates = step2_phase_filter(candidates, query.phase);

  std::vector<Exemplar> scored;
  scored.reserve(candidates.size());
  for (const RagRecord* r : candidates) {
    const SignalScores s = step3_scores(query, *r);
    Exemplar e;
    e.record = *r;
    e.force_sim = s.force_sim;
    e.torque_sim = s.torque_sim;
    e.linvel_sim = s.linvel_sim;
    e.angvel_sim = s.angvel_sim;
    e.aggregate = s.aggregate();
    scored.push_back(std::move(e));
  }
  std::sort(scored.begin(), scored.end(), [](const Exemplar& a, const Exemplar& b) {
    if (a.aggregate != b.aggregate) return a.aggregate > b.aggregate;
    return a.record.record_id < b.record.record_id;
  });
  if (scored.size() > static_cast<std::size_t>(config.top_n)) {
    scored.resize(static_cast<std::size_t>(config.top_n));
  }
  return scored;
}

}  // namespace omnivic
