#pragma once

#include <string>
#include <vector>

#include "omnivic/bank.hpp"
#include "omnivic/similarity.hpp"

namespace omnivic {

// Everything known about the current step that retrieval conditions on.
struct QueryContext {
  std::string instruction_text;
  Eigen::VectorXd instruction_embedding;  // unit-norm
  Phase phase{Phase::FreeMotion};
  Twist twist;    // world-frame
  Wrench wrench;  // world-frame, compensated
};

struct RetrievalConfig {
  double m_percent{20.0};  // instruction prefilter keeps ceil(M% of distinct)
  int top_n{5};

  void validate() const;  // throws unless 0 < m_percent <= 100 and top_n >= 1
};

// A retrieved record together with the scores that ranked it.
struct Exemplar {
  RagRecord record;
  double force_sim{0.0};
  double torque_sim{0.0};
  double linvel_sim{0.0};
  double angvel_sim{0.0};
  double aggregate{0.0};
};

// Stage one: ranks distinct instructions by embedding cosine against the
// query and keeps the top ceil(m_percent% ) of them, never fewer than one
// (given a non-empty bank). Each instruction is represented by the embedding
// of its lowest-id record; ties rank the instruction with the smaller lowest
// record id first. Returned in rank order.
std::vector<std::string> step1_instruction_filter(
    const Bank& bank, const Eigen::VectorXd& query_embedding, double m_percent);

// Stage two: keeps candidates whose phase matches the query phase.
std::vector<const RagRecord*> step2_phase_filter(
    const std::vector<const RagRecord*>& candidates, Phase phase);

// Stage three: per-channel cosines between the query state and one record.
SignalScores step3_scores(const QueryContext& query, const RagRecord& record);

// Full pipeline: instruction prefilter, phase filter, per-channel scoring,
// then the top_n records by aggregate score (ties broken by smaller
// record_id). May return fewer than top_n; empty when nothing survives the
// filters.
std::vector<Exemplar> retrieve(const Bank& bank, const QueryContext& query,
                               const RetrievalConfig& config);

// Reference implementation used to cross-check retrieve(). Re-derives every
// stage from the definitions with its own arithmetic; shares no ranking code
// with the production path.
std::vector<Exemplar> brute_force_retrieve(const Bank& bank,
                                           const QueryContext& query,
                                           const RetrievalConfig& config);

}  // namespace omnivic
