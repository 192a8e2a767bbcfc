#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "omnivic/embedding.hpp"
#include "omnivic/retrieval.hpp"

using namespace omnivic;

namespace {

constexpr int kDim = 32;

RagRecord make_record(const std::string& instruction, Phase phase,
                      const Vector3& vel, const Vector3& angvel,
                      const Vector3& force, const Vector3& torque) {
  RagRecord r;
  r.instruction_text = instruction;
  r.instruction_embedding = HashEmbedder(kDim).embed(instruction);
  r.phase = phase;
  r.twist = Twist{vel, angvel, Frame::World};
  r.wrench = Wrench{force, torque, Frame::World, true};
  r.k_trans = Vector3(100, 110, 120);
  r.d_trans = Vector3(10, 11, 12);
  return r;
}

QueryContext make_query(const std::string& instruction, Phase phase,
                        const Vector3& vel, const Vector3& force) {
  QueryContext q;
  q.instruction_text = instruction;
  q.instruction_embedding = HashEmbedder(kDim).embed(instruction);
  q.phase = phase;
  q.twist = Twist{vel, Vector3::Zero(), Frame::World};
  q.wrench = Wrench{force, Vector3::Zero(), Frame::World, true};
  return q;
}

Eigen::VectorXd random_vec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> d(0.0, 1.0);
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = d(rng);
  return v;
}

}  // namespace

TEST_CASE("cosine_sim hand values") {
  Eigen::Vector3d a(1, 1, 0), x(1, 0, 0), y(0, 1, 0);
  CHECK(cosine_sim(x, x) == doctest::Approx(1.0));
  CHECK(cosine_sim(x, y) == doctest::Approx(0.0));
  CHECK(cosine_sim(a, x) == doctest::Approx(0.70710678));
  CHECK(cosine_sim(x, -x) == doctest::Approx(-1.0));
}

TEST_CASE("cosine_sim zero-norm rule and dimension check") {
  Eigen::Vector3d zero = Eigen::Vector3d::Zero();
  Eigen::Vector3d x(1, 0, 0);
  CHECK(cosine_sim(zero, x) == 0.0);
  CHECK(cosine_sim(x, zero) == 0.0);
  CHECK(cosine_sim(zero, zero) == 0.0);
  // Below the norm epsilon counts as zero too.
  Eigen::Vector3d tiny(1e-13, 0, 0);
  CHECK(cosine_sim(tiny, x) == 0.0);

  Eigen::VectorXd long_vec = Eigen::VectorXd::Ones(4);
  CHECK_THROWS_AS(cosine_sim(long_vec, x), std::invalid_argument);
}

TEST_CASE("cosine_sim properties on random vectors") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> scale(0.1, 50.0);
  for (int i = 0; i < 500; ++i) {
    Eigen::VectorXd a = random_vec(rng, 8);
    Eigen::VectorXd b = random_vec(rng, 8);
    const double s = cosine_sim(a, b);
    CHECK(std::abs(s) <= 1.0);
    CHECK(cosine_sim(b, a) == doctest::Approx(s).epsilon(1e-12));
    CHECK(cosine_sim(scale(rng) * a, b) == doctest::Approx(s).epsilon(1e-9));
  }
}

TEST_CASE("hash embedder basics") {
  HashEmbedder embed(kDim);
  Eigen::VectorXd a = embed.embed("push the plate");
  Eigen::VectorXd b = embed.embed("push the plate");
  CHECK(a.size() == kDim);
  CHECK(a.norm() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(cosine_sim(a, b) == doctest::Approx(1.0));

  // Case/punctuation folding: the token stream is identical.
  CHECK(cosine_sim(embed.embed("Push the  plate!"), a) == doctest::Approx(1.0));

  // Disjoint vocabularies land in disjoint buckets for these strings.
  Eigen::VectorXd c = HashEmbedder(256).embed("zq xv wk");
  Eigen::VectorXd d = HashEmbedder(256).embed("mf gj pt");
  CHECK(cosine_sim(c, d) == doctest::Approx(0.0));

  CHECK_THROWS_AS(embed.embed(""), std::invalid_argument);
  // No alphanumeric tokens still embeds to a unit vector.
  CHECK(embed.embed("!?!").norm() == doctest::Approx(1.0));
}

TEST_CASE("step1 keeps ceil(M% of distinct instructions) with a floor of one") {
  Bank bank(BankConfig{64, kDim});
  for (int i = 0; i < 10; ++i) {
    std::string name = "task number " + std::to_string(i);
    bank.insert(make_record(name, Phase::Contact, Vector3(0.1 * (i + 1), 0, 0),
                            Vector3::Zero(), Vector3(1, 0, 0), Vector3::Zero()),
                OutcomeLabel::Success);
  }
  Eigen::VectorXd q = HashEmbedder(kDim).embed("task number 3");

  CHECK(step1_instruction_filter(bank, q, 20.0).size() == 2);
  CHECK(step1_instruction_filter(bank, q, 100.0).size() == 10);
  CHECK(step1_instruction_filter(bank, q, 1.0).size() == 1);

  // The query's own instruction ranks first (cosine 1 is maximal).
  auto kept = step1_instruction_filter(bank, q, 20.0);
  CHECK(kept[0] == "task number 3");

  Bank empty(BankConfig{8, kDim});
  CHECK(step1_instruction_filter(empty, q, 20.0).empty());
}

TEST_CASE("step2 filters by phase") {
  std::vector<RagRecord> records;
  records.push_back(make_record("a", Phase::Contact, Vector3(1, 0, 0),
                                Vector3::Zero(), Vector3(1, 0, 0),
                                Vector3::Zero()));
  records.push_back(make_record("a", Phase::Approaching, Vector3(1, 0, 0),
                                Vector3::Zero(), Vector3(1, 0, 0),
                                Vector3::Zero()));
  records.push_back(make_record("a", Phase::Contact, Vector3(0, 1, 0),
                                Vector3::Zero(), Vector3(0, 1, 0),
                                Vector3::Zero()));
  std::vector<const RagRecord*> ptrs;
  for (const auto& r : records) ptrs.push_back(&r);

  CHECK(step2_phase_filter(ptrs, Phase::Contact).size() == 2);
  CHECK(step2_phase_filter(ptrs, Phase::Approaching).size() == 1);
  CHECK(step2_phase_filter(ptrs, Phase::Retreat).empty());
}

TEST_CASE("step3 per-channel scores") {
  QueryContext q = make_query("a", Phase::Contact, Vector3(0.2, 0, 0),
                              Vector3(1, 0, 0));

  SUBCASE("self-similarity is all ones where signals are nonzero") {
    RagRecord r = make_record("a", Phase::Contact, q.twist.linear,
                              Vector3::Zero(), q.wrench.force, Vector3::Zero());
    SignalScores s = step3_scores(q, r);
    CHECK(s.force_sim == doctest::Approx(1.0));
    CHECK(s.linvel_sim == doctest::Approx(1.0));
    CHECK(s.torque_sim == 0.0);  // zero-vector rule on both sides
    CHECK(s.angvel_sim == 0.0);
    CHECK(s.aggregate() == doctest::Approx(2.0));
  }

  SUBCASE("rest query scores zero everywhere") {
    QueryContext rest = make_query("a", Phase::Contact, Vector3::Zero(),
                                   Vector3::Zero());
    RagRecord r = make_record("a", Phase::Contact, Vector3(1, 2, 3),
                              Vector3(1, 0, 0), Vector3(4, 5, 6),
                              Vector3(0, 1, 0));
    SignalScores s = step3_scores(rest, r);
    CHECK(s.force_sim == 0.0);
    CHECK(s.torque_sim == 0.0);
    CHECK(s.linvel_sim == 0.0);
    CHECK(s.angvel_sim == 0.0);
  }

  SUBCASE("antiparallel force") {
    RagRecord r = make_record("a", Phase::Contact, q.twist.linear,
                              Vector3::Zero(), -q.wrench.force, Vector3::Zero());
    CHECK(step3_scores(q, r).force_sim == doctest::Approx(-1.0));
  }
}

TEST_CASE("retrieve ranks by aggregate and respects top_n and phase") {
  Bank bank(BankConfig{64, kDim});
  // Same instruction, Contact phase, graded alignment with the query.
  bank.insert(make_record("close the drawer", Phase::Contact, Vector3(1, 0, 0),
                          Vector3::Zero(), Vector3(1, 0, 0), Vector3::Zero()),
              OutcomeLabel::Success);
  bank.insert(make_record("close the drawer", Phase::Contact, Vector3(1, 1, 0),
                          Vector3::Zero(), Vector3(1, 1, 0), Vector3::Zero()),
              OutcomeLabel::Success);
  bank.insert(make_record("close the drawer", Phase::Contact, Vector3(0, 1, 0),
                          Vector3::Zero(), Vector3(0, 1, 0), Vector3::Zero()),
              OutcomeLabel::Success);
  bank.insert(make_record("close the drawer", Phase::Approaching,
                          Vector3(1, 0, 0), Vector3::Zero(), Vector3(1, 0, 0),
                          Vector3::Zero()),
              OutcomeLabel::Success);

  QueryContext q = make_query("close the drawer", Phase::Contact,
                              Vector3(1, 0, 0), Vector3(1, 0, 0));
  RetrievalConfig cfg{100.0, 2};
  auto top = retrieve(bank, q, cfg);
  REQUIRE(top.size() == 2);
  CHECK(top[0].record.record_id == 1);  // exact signal match
  CHECK(top[0].aggregate == doctest::Approx(2.0));
  CHECK(top[1].record.record_id == 2);  // cos 45 deg on two channels
  CHECK(top[1].aggregate == doctest::Approx(2.0 * std::cos(0.25 * 3.14159265)));
  for (const auto& ex : top) {
    CHECK(ex.record.phase == Phase::Contact);
    CHECK(ex.aggregate == doctest::Approx(ex.force_sim + ex.torque_sim +
                                          ex.linvel_sim + ex.angvel_sim));
  }

  SUBCASE("absent phase gives an empty list") {
    q.phase = Phase::Retreat;
    CHECK(retrieve(bank, q, cfg).empty());
  }

  SUBCASE("singleton bank returns the single matching record") {
    Bank one(BankConfig{4, kDim});
    one.insert(make_record("close the drawer", Phase::Contact,
                           Vector3(1, 0, 0), Vector3::Zero(), Vector3(1, 0, 0),
                           Vector3::Zero()),
               OutcomeLabel::Success);
    auto got = retrieve(one, q, cfg);
    REQUIRE(got.size() == 1);
    CHECK(got[0].record.record_id == 1);
  }
}

TEST_CASE("retrieve validates the query") {
  Bank bank(BankConfig{8, kDim});
  bank.insert(make_record("a", Phase::Contact, Vector3(1, 0, 0),
                          Vector3::Zero(), Vector3(1, 0, 0), Vector3::Zero()),
              OutcomeLabel::Success);
  QueryContext q = make_query("a", Phase::Contact, Vector3(1, 0, 0),
                              Vector3(1, 0, 0));
  q.instruction_embedding = Eigen::VectorXd::Zero(kDim + 1);
  q.instruction_embedding[0] = 1.0;
  RetrievalConfig cfg;
  CHECK_THROWS_AS(retrieve(bank, q, cfg), std::invalid_argument);

  RetrievalConfig bad{0.0, 5};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  RetrievalConfig bad2{20.0, 0};
  CHECK_THROWS_AS(bad2.validate(), std::invalid_argument);
}

TEST_CASE("retrieve agrees with the brute-force oracle on random banks") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> pick_instr(0, 9);
  std::uniform_int_distribution<int> pick_phase(0, 3);

  for (int trial = 0; trial < 200; ++trial) {
    Bank bank(BankConfig{200, kDim}, trial);
    for (int i = 0; i < 120; ++i) {
      RagRecord r = make_record(
          "task " + std::to_string(pick_instr(rng)),
          static_cast<Phase>(pick_phase(rng)),
          Vector3(u(rng), u(rng), u(rng)), Vector3(u(rng), u(rng), u(rng)),
          Vector3(u(rng), u(rng), u(rng)), Vector3(u(rng), u(rng), u(rng)));
      bank.insert(r, OutcomeLabel::Success);
    }
    QueryContext q = make_query("task " + std::to_string(pick_instr(rng)),
                                static_cast<Phase>(pick_phase(rng)),
                                Vector3(u(rng), u(rng), u(rng)),
                                Vector3(u(rng), u(rng), u(rng)));
    RetrievalConfig cfg{20.0, 5};

    auto fast = retrieve(bank, q, cfg);
    auto slow = brute_force_retrieve(bank, q, cfg);
    REQUIRE(fast.size() == slow.size());
    for (std::size_t i = 0; i < fast.size(); ++i) {
      CHECK(fast[i].record.record_id == slow[i].record.record_id);
      CHECK(fast[i].aggregate ==
            doctest::Approx(slow[i].aggregate).epsilon(1e-12));
    }
  }
}
