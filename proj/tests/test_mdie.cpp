// Inverse-entailment learner tests: saturation against pinned bottom
// clauses, clause search cross-checked by a brute-force subset oracle, and
// the greedy cover loop.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <climits>
#include <set>
#include <string>
#include <vector>

#include "signlp/defaults.hpp"
#include "signlp/mdie.hpp"
#include "signlp/solve.hpp"
#include "signlp/text.hpp"

using namespace signlp;
using logic::Atom;
using logic::Clause;
using logic::Program;
using logic::Term;

namespace {

std::vector<mdie::ModeDecl> default_modes() {
  return text::parse_modes(defaults::kModes);
}

Atom example(const std::string& id) {
  return Atom{"traffic_sign", {Term::constant(id), Term::constant("stop_sign")}};
}

const char* kP1Bk =
    "color(p1,red). color(p1,white). shape(p1,octagon). "
    "has_word(p1,p1_w1). closely_match(p1_w1,stop). "
    "sign(p1). known_word(stop). known_word(yield).";

const char* kN1Bk =
    "color(n1,red). color(n1,white). shape(n1,circle). "
    "number(n1,n1_d1). digits(n1_d1,30). "
    "sign(n1). known_word(stop). known_word(yield).";

// Stop-sign facts for one positive id.
std::string pos_facts(const std::string& id) {
  return "color(" + id + ",red). color(" + id + ",white). shape(" + id +
         ",octagon). has_word(" + id + "," + id + "_w1). closely_match(" + id +
         "_w1,stop). sign(" + id + "). ";
}

// An 8-positive / 8-negative task on which the only maximal clause is the
// two-literal word-matching rule: every single literal (red, white, octagon,
// has_word) and every other two-literal combination covers the octagonal
// worded negative n8 or one of the other negatives.
struct BaseTask {
  Program bk;
  logic::ExampleSet examples;
};

BaseTask base_task() {
  std::string src;
  for (int i = 1; i <= 8; ++i) src += pos_facts("p" + std::to_string(i));
  src +=
      "color(n1,red). color(n1,white). shape(n1,circle). number(n1,n1_d1). "
      "digits(n1_d1,30). sign(n1). "
      "color(n2,red). color(n2,white). shape(n2,circle). number(n2,n2_d1). "
      "digits(n2_d1,45). sign(n2). "
      "color(n3,red). color(n3,white). shape(n3,circle). number(n3,n3_d1). "
      "digits(n3_d1,60). sign(n3). "
      "color(n4,red). color(n4,white). shape(n4,triangle). sign(n4). "
      "color(n5,yellow). color(n5,black). shape(n5,diamond). sign(n5). "
      "color(n6,blue). color(n6,white). shape(n6,rectangle). "
      "has_word(n6,n6_w1). sign(n6). "
      "color(n7,yellow). color(n7,black). shape(n7,diamond). sign(n7). "
      "color(n8,red). color(n8,white). shape(n8,octagon). "
      "has_word(n8,n8_w1). sign(n8). "
      "known_word(stop). known_word(yield).";
  BaseTask t;
  t.bk = text::parse_program(src);
  for (int i = 1; i <= 8; ++i) t.examples.positives.push_back(example("p" + std::to_string(i)));
  for (int i = 1; i <= 8; ++i) t.examples.negatives.push_back(example("n" + std::to_string(i)));
  return t;
}

// Brute-force oracle over chain-valid increasing-index subsets of the bottom
// body: returns the best score and every clause attaining it.
struct OracleResult {
  long best_score = LONG_MIN;
  std::set<Clause> best_clauses;  // canonicalized
};

OracleResult subset_oracle(const mdie::BottomClause& bottom, const Program& bk,
                           const logic::ExampleSet& es, std::size_t max_lits,
                           long noise) {
  OracleResult out;
  const std::size_t n = bottom.body.size();
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    std::vector<std::size_t> chosen;
    for (std::size_t i = 0; i < n; ++i)
      if (mask & (1ull << i)) chosen.push_back(i);
    if (chosen.size() > max_lits) continue;
    // Chain validity: every input variable is a head input or an output of an
    // earlier chosen literal.
    std::set<std::string> avail(bottom.head_input_vars.begin(),
                                bottom.head_input_vars.end());
    bool valid = true;
    for (std::size_t i : chosen) {
      for (const auto& iv : bottom.body[i].in_vars)
        if (!avail.count(iv)) valid = false;
      if (!valid) break;
      for (const auto& ov : bottom.body[i].out_vars) avail.insert(ov);
    }
    if (!valid) continue;
    Clause cand;
    cand.head = bottom.head;
    for (std::size_t i : chosen) cand.body.push_back(bottom.body[i].lifted);
    long pos = 0, neg = 0;
    for (const Atom& e : es.positives)
      if (logic::covers(bk, {cand}, e)) ++pos;
    for (const Atom& e : es.negatives)
      if (logic::covers(bk, {cand}, e)) ++neg;
    if (pos < 1 || neg > noise) continue;
    const long score = pos - neg - static_cast<long>(cand.body.size());
    if (score > out.best_score) {
      out.best_score = score;
      out.best_clauses.clear();
    }
    if (score == out.best_score) out.best_clauses.insert(logic::canonicalize_vars(cand));
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// saturate
// ---------------------------------------------------------------------------

TEST_CASE("saturating the p1 seed yields the pinned bottom clause") {
  const Program bk = text::parse_program(kP1Bk);
  const auto bottom = mdie::saturate(example("p1"), bk, default_modes());
  const Clause expected = text::parse_clauses(
      "traffic_sign(A,stop_sign) :- color(A,red), color(A,white), "
      "shape(A,octagon), has_word(A,B), closely_match(B,stop).")[0];
  CHECK(logic::alpha_equivalent(bottom.to_clause(), expected));
}

TEST_CASE("saturating n1 chains digits through number") {
  const Program bk = text::parse_program(kN1Bk);
  const auto bottom = mdie::saturate(example("n1"), bk, default_modes());
  const Clause expected = text::parse_clauses(
      "traffic_sign(A,stop_sign) :- color(A,red), color(A,white), "
      "shape(A,circle), number(A,B), digits(B,30).")[0];
  CHECK(logic::alpha_equivalent(bottom.to_clause(), expected));
}

TEST_CASE("saturating against an empty background yields an empty body") {
  const Program bk;
  const auto bottom = mdie::saturate(example("p1"), bk, default_modes());
  CHECK(bottom.body.empty());
  CHECK(bottom.head.pred == "traffic_sign");
}

TEST_CASE("bottom clause literals are ground-true in the background") {
  // Soundness: re-grounding each lifted literal through the bottom clause's
  // own chaining must stay provable.
  const Program bk = text::parse_program(kP1Bk);
  const auto bottom = mdie::saturate(example("p1"), bk, default_modes());
  const Clause whole = bottom.to_clause();
  // The fully saturated clause must cover its own seed.
  CHECK(logic::covers(bk, {whole}, example("p1")));
}

TEST_CASE("missing head mode raises NoHeadMode") {
  const Program bk = text::parse_program(kP1Bk);
  const auto modes = text::parse_modes("modeb(*,color(+sign,#color)).");
  CHECK_THROWS_AS(mdie::saturate(example("p1"), bk, modes), mdie::NoHeadMode);
}

TEST_CASE("non-ground seed raises SeedNotGround") {
  const Program bk = text::parse_program(kP1Bk);
  const Atom seed{"traffic_sign", {Term::var("X"), Term::constant("stop_sign")}};
  CHECK_THROWS_AS(mdie::saturate(seed, bk, default_modes()), mdie::SeedNotGround);
}

TEST_CASE("recall bound caps instantiations per mode") {
  const Program bk = text::parse_program(kP1Bk);
  const auto modes = text::parse_modes(
      "modeh(1,traffic_sign(+sign,#class)).\nmodeb(1,color(+sign,#color)).\n");
  const auto bottom = mdie::saturate(example("p1"), bk, modes);
  // Two color facts exist for p1; recall 1 keeps only the first.
  REQUIRE(bottom.body.size() == 1);
  CHECK(bottom.body[0].lifted.pred == "color");
}

// ---------------------------------------------------------------------------
// search_clause
// ---------------------------------------------------------------------------

TEST_CASE("eight positives and negatives select the word-matching rule") {
  const BaseTask t = base_task();
  const auto bottom = mdie::saturate(t.examples.positives[0], t.bk, default_modes());
  const auto best = mdie::search_clause(bottom, t.bk, t.examples);
  CHECK(best.pos_covered == 8);
  CHECK(best.neg_covered == 0);
  CHECK(best.score == 8 - 0 - 2);
  const Clause expected = text::parse_clauses(
      "traffic_sign(A,stop_sign) :- has_word(A,B), closely_match(B,stop).")[0];
  CHECK(logic::alpha_equivalent(logic::canonicalize_vars(best.clause),
                                logic::canonicalize_vars(expected)));
}

TEST_CASE("empty bottom body yields the bare head clause") {
  const Program bk;
  logic::ExampleSet es;
  es.positives = {example("p1")};
  const auto bottom = mdie::saturate(example("p1"), bk, default_modes());
  const auto best = mdie::search_clause(bottom, bk, es);
  CHECK(best.clause.body.empty());
  CHECK(best.pos_covered == 1);
  CHECK(best.score == 1);
}

TEST_CASE("search matches the brute-force subset oracle on a crafted task") {
  const Program bk = text::parse_program(
      "color(p1,red). shape(p1,octagon). has_word(p1,p1_w1). "
      "closely_match(p1_w1,stop). sign(p1). "
      "color(p2,red). shape(p2,octagon). has_word(p2,p2_w1). "
      "closely_match(p2_w1,stop). sign(p2). "
      "color(n1,red). shape(n1,circle). sign(n1). "
      "color(n2,red). shape(n2,octagon). has_word(n2,n2_w1). sign(n2). "
      "known_word(stop).");
  logic::ExampleSet es;
  es.positives = {example("p1"), example("p2")};
  es.negatives = {example("n1"), example("n2")};
  const auto bottom = mdie::saturate(es.positives[0], bk, default_modes());
  mdie::SearchConfig cfg;
  const auto best = mdie::search_clause(bottom, bk, es, cfg);
  const OracleResult oracle =
      subset_oracle(bottom, bk, es, cfg.max_body_literals, cfg.noise);
  CHECK(best.score == oracle.best_score);
  CHECK(oracle.best_clauses.count(logic::canonicalize_vars(best.clause)) == 1);
}

TEST_CASE("oracle agreement holds across noise settings") {
  const Program bk = text::parse_program(
      "color(p1,red). sign(p1). color(p2,red). sign(p2). "
      "color(n1,red). sign(n1).");
  logic::ExampleSet es;
  es.positives = {example("p1"), example("p2")};
  es.negatives = {example("n1")};
  const auto bottom = mdie::saturate(es.positives[0], bk, default_modes());

  // noise 0: every candidate covers the identically-colored negative.
  CHECK_THROWS_AS(mdie::search_clause(bottom, bk, es), mdie::NoConsistentClause);

  // noise 1 admits it.
  mdie::SearchConfig noisy;
  noisy.noise = 1;
  const auto best = mdie::search_clause(bottom, bk, es, noisy);
  CHECK(best.pos_covered == 2);
  CHECK(best.neg_covered == 1);
  const OracleResult oracle =
      subset_oracle(bottom, bk, es, noisy.max_body_literals, noisy.noise);
  CHECK(best.score == oracle.best_score);
}

TEST_CASE("search trace records coverage and score per expanded clause") {
  const BaseTask t = base_task();
  const auto bottom = mdie::saturate(t.examples.positives[0], t.bk, default_modes());
  std::vector<mdie::SearchNode> nodes;
  const auto best = mdie::search_clause(
      bottom, t.bk, t.examples, {}, [&](const mdie::SearchNode& n) {
        nodes.push_back(n);
      });
  CHECK_FALSE(nodes.empty());
  bool saw_best = false;
  for (const auto& n : nodes) {
    CHECK(n.score ==
          n.pos_covered - n.neg_covered - static_cast<long>(n.clause.body.size()));
    if (logic::canonicalize_vars(n.clause) == logic::canonicalize_vars(best.clause))
      saw_best = true;
  }
  CHECK(saw_best);
}

// ---------------------------------------------------------------------------
// cover_loop
// ---------------------------------------------------------------------------

TEST_CASE("cover loop solves the base task with a single clause") {
  const BaseTask t = base_task();
  const auto hyp = mdie::cover_loop(t.bk, t.examples, default_modes());
  REQUIRE(hyp.clauses.size() == 1);
  CHECK(hyp.uncovered_positives.empty());
  for (const Atom& p : t.examples.positives)
    CHECK(logic::covers(t.bk, hyp.clauses, p));
  for (const Atom& n : t.examples.negatives)
    CHECK_FALSE(logic::covers(t.bk, hyp.clauses, n));
}

TEST_CASE("cover loop with no positives returns an empty hypothesis") {
  const BaseTask t = base_task();
  logic::ExampleSet es;
  es.negatives = t.examples.negatives;
  const auto hyp = mdie::cover_loop(t.bk, es, default_modes());
  CHECK(hyp.clauses.empty());
  CHECK(hyp.uncovered_positives.empty());
}

TEST_CASE("two disjoint positive clusters produce a two-clause hypothesis") {
  // Cluster one: worded signs that are not octagons. Cluster two: octagons
  // with no word facts. No single clause covers both.
  const Program bk = text::parse_program(
      "color(p1,red). shape(p1,circle). has_word(p1,p1_w1). "
      "closely_match(p1_w1,stop). sign(p1). "
      "color(p2,red). shape(p2,circle). has_word(p2,p2_w1). "
      "closely_match(p2_w1,stop). sign(p2). "
      "color(p3,red). shape(p3,octagon). sign(p3). "
      "color(p4,red). shape(p4,octagon). sign(p4). "
      "color(n1,red). shape(n1,triangle). sign(n1). "
      "color(n2,blue). shape(n2,rectangle). has_word(n2,n2_w1). sign(n2). "
      "known_word(stop).");
  logic::ExampleSet es;
  es.positives = {example("p1"), example("p2"), example("p3"), example("p4")};
  es.negatives = {example("n1"), example("n2")};
  const auto hyp = mdie::cover_loop(bk, es, default_modes());
  REQUIRE(hyp.clauses.size() == 2);
  CHECK(hyp.uncovered_positives.empty());
  for (const Atom& p : es.positives) CHECK(logic::covers(bk, hyp.clauses, p));
  for (const Atom& n : es.negatives) CHECK_FALSE(logic::covers(bk, hyp.clauses, n));
}

TEST_CASE("uncoverable positives are reported, not raised") {
  // p2 is indistinguishable from the negative n1, so no consistent clause
  // exists for it; p1 remains coverable.
  const Program bk = text::parse_program(
      "color(p1,red). shape(p1,octagon). sign(p1). "
      "color(p2,red). shape(p2,circle). sign(p2). "
      "color(n1,red). shape(n1,circle). sign(n1). "
      "known_word(stop).");
  logic::ExampleSet es;
  es.positives = {example("p1"), example("p2")};
  es.negatives = {example("n1")};
  const auto hyp = mdie::cover_loop(bk, es, default_modes());
  REQUIRE(hyp.clauses.size() == 1);
  REQUIRE(hyp.uncovered_positives.size() == 1);
  CHECK(hyp.uncovered_positives[0] == example("p2"));
}

TEST_CASE("noise-free hypotheses cover zero negatives on the crafted tasks") {
  const BaseTask t = base_task();
  const auto hyp = mdie::cover_loop(t.bk, t.examples, default_modes());
  for (const Atom& n : t.examples.negatives)
    CHECK_FALSE(logic::covers(t.bk, hyp.clauses, n));
}

TEST_CASE("deadline raises Timeout") {
  const BaseTask t = base_task();
  mdie::SearchConfig cfg;
  cfg.deadline = std::chrono::steady_clock::now() - std::chrono::seconds(1);
  CHECK_THROWS_AS(mdie::cover_loop(t.bk, t.examples, default_modes(), cfg),
                  mdie::Timeout);
}
