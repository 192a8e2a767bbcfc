// Reference retrieval used only to cross-check the production pipeline. It
// re-derives every stage from the written definitions with local arithmetic
// and a different selection strategy on purpose; do not "deduplicate" this
// against retrieval.cpp.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "omnivic/retrieval.hpp"

namespace omnivic {

namespace {

double bf_cosine(const double* a, const double* b, long n) {
  double dot = 0.0, na2 = 0.0, nb2 = 0.0;
  for (long i = 0; i < n; ++i) {
    dot += a[i] * b[i];
    na2 += a[i] * a[i];
    nb2 += b[i] * b[i];
  }
  const double na = std::sqrt(na2);
  const double nb = std::sqrt(nb2);
  if (na < 1e-12 || nb < 1e-12) {
    return 0.0;
  }
  double v = dot / (na * nb);
  if (v > 1.0) v = 1.0;
  if (v < -1.0) v = -1.0;
  return v;
}

double bf_cosine3(const Vector3& a, const Vector3& b) {
  return bf_cosine(a.data(), b.data(), 3);
}

}  // namespace

std::vector<Exemplar> brute_force_retrieve(const Bank& bank,
                                           const QueryContext& query,
                                           const RetrievalConfig& config) {
  if (!(config.m_percent > 0.0) || config.m_percent > 100.0 ||
      config.top_n < 1) {
    throw std::invalid_argument("brute_force_retrieve: bad config");
  }
  if (query.instruction_embedding.size() != bank.config().embedding_dim) {
    throw std::invalid_argument(
        "brute_force_retrieve: query embedding dimension mismatch");
  }
  const auto& records = bank.records();
  if (records.empty()) {
    return {};
  }

  // Distinct instructions, each represented by its lowest-id record.
  std::vector<const RagRecord*> reps;
  for (const auto& r : records) {
    bool found = false;
    for (auto& rep : reps) {
      if (rep->instruction_text == r.instruction_text) {
        if (r.record_id < rep->record_id) rep = &r;
        found = true;
        break;
      }
    }
    if (!found) reps.push_back(&r);
  }

  // Keep the ceil(m%) best instructions by embedding cosine, at least one.
  std::size_t keep = static_cast<std::size_t>(std::ceil(
      config.m_percent / 100.0 * static_cast<double>(reps.size())));
  if (keep < 1) keep = 1;
  if (keep > reps.size()) keep = reps.size();

  std::vector<double> rep_sim(reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i) {
    rep_sim[i] = bf_cosine(query.instruction_embedding.data(),
                           reps[i]->instruction_embedding.data(),
                           query.instruction_embedding.size());
  }
  std::vector<bool> rep_taken(reps.size(), false);
  std::vector<const RagRecord*> kept;
  for (std::size_t round = 0; round < keep; ++round) {
    std::size_t best = reps.size();
    for (std::size_t i = 0; i < reps.size(); ++i) {
      if (rep_taken[i]) continue;
      if (best == reps.size() || rep_sim[i] > rep_sim[best] ||
          (rep_sim[i] == rep_sim[best] &&
           reps[i]->record_id < reps[best]->record_id)) {
        best = i;
      }
    }
    rep_taken[best] = true;
    kept.push_back(reps[best]);
  }

  // Candidates: records of kept instructions in the query phase.
  std::vector<const RagRecord*> candidates;
  for (const auto& r : records) {
    if (r.phase != query.phase) continue;
    for (const auto* k : kept) {
      if (k->instruction_text == r.instruction_text) {
        candidates.push_back(&r);
        break;
      }
    }
  }

  // Score and select the top_n by aggregate, smaller id first on ties.
  std::vector<Exemplar> scored;
  scored.reserve(candidates.size());
  for (const auto* r : candidates) {
    Exemplar e;
    e.record = *r;
    e.force_sim = bf_cosine3(query.wrench.force, r->wrench.force);
    e.torque_sim = bf_cosine3(query.wrench.torque, r->wrench.torque);
    e.linvel_sim = bf_cosine3(query.twist.linear, r->twist.linear);
    e.angvel_sim = bf_cosine3(query.twist.angular, r->twist.angular);
    e.aggregate = e.force_sim + e.torque_sim + e.linvel_sim + e.angvel_sim;
    scored.push_back(std::move(e));
  }

  std::vector<Exemplar> out;
  std::vector<bool> taken(scored.size(), false);
  const std::size_t want =
      std::min(scored.size(), static_cast<std::size_t>(config.top_n));
  for (std::size_t round = 0; round < want; ++round) {
    std::size_t best = scored.size();
    for (std::size_t i = 0; i < scored.size(); ++i) {
      if (taken[i]) continue;
      if (best == scored.size() || scored[i].aggregate > scored[best].aggregate ||
          (scored[i].aggregate == scored[best].aggregate &&
           scored[i].record.record_id < scored[best].record.record_id)) {
        best = i;
      }
    }
    taken[best] = true;
    out.push_back(scored[best]);
  }
  return out;
}

}  // namespace omnivic
