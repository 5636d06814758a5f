// Core term/unification/resolution tests: pinned examples, randomized
// property checks, and a cross-validation of the SLD prover against an
// independent bottom-up least-fixpoint evaluator on random function-free
// programs.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>
#include <string>
#include <vector>

#include "signlp/rng.hpp"
#include "signlp/solve.hpp"
#include "signlp/term.hpp"
#include "signlp/text.hpp"
#include "signlp/unify.hpp"
#include "support.hpp"

using namespace signlp;
using logic::Atom;
using logic::Clause;
using logic::Program;
using logic::Subst;
using logic::Term;
using testsupport::Fixpoint;
using testsupport::least_fixpoint;
using testsupport::random_program;
using testsupport::random_term;
using testsupport::RandomProgram;

namespace {

Term v(const std::string& n) { return Term::var(n); }
Term c(const std::string& n) { return Term::constant(n); }
Term f(const std::string& n, std::vector<Term> args) {
  return Term::compound(n, std::move(args));
}

}  // namespace

// ---------------------------------------------------------------------------
// Terms, programs, canonicalization
// ---------------------------------------------------------------------------

TEST_CASE("term construction and printing") {
  CHECK(to_string(v("X")) == "X");
  CHECK(to_string(c("red")) == "red");
  CHECK(to_string(f("f", {v("X"), c("a")})) == "f(X,a)");
  CHECK(v("X").is_var());
  CHECK(c("a").ground());
  CHECK_FALSE(f("f", {v("X")}).ground());
  CHECK(f("f", {c("a"), c("b")}).ground());
}

TEST_CASE("clause printing includes period and neck") {
  Clause fact{Atom{"color", {c("p1"), c("red")}}, {}};
  CHECK(logic::to_string(fact) == "color(p1,red).");
  Clause rule{Atom{"p", {v("A")}}, {Atom{"q", {v("A")}}, Atom{"r", {v("A")}}}};
  CHECK(logic::to_string(rule) == "p(A) :- q(A), r(A).");
}

TEST_CASE("canonicalize_vars renames in first-occurrence order") {
  const Clause cl = text::parse_clauses("p(Foo,Bar) :- q(Bar,Foo,Baz).")[0];
  const Clause canon = logic::canonicalize_vars(cl);
  CHECK(logic::to_string(canon) == "p(A,B) :- q(B,A,C).");
}

TEST_CASE("alpha_equivalent is renaming-invariant and injective") {
  const Clause a = text::parse_clauses("p(X,Y) :- q(X,Z), r(Z,Y).")[0];
  const Clause b = text::parse_clauses("p(U,V) :- q(U,W), r(W,V).")[0];
  const Clause bad = text::parse_clauses("p(X,Y) :- q(X,X), r(X,Y).")[0];
  CHECK(logic::alpha_equivalent(a, b));
  CHECK_FALSE(logic::alpha_equivalent(a, bad));
  // Non-injective renaming (two vars mapping to one) must not count.
  const Clause merged = text::parse_clauses("p(X,X) :- q(X,X), r(X,X).")[0];
  CHECK_FALSE(logic::alpha_equivalent(a, merged));
}

TEST_CASE("program candidate indexing matches a linear scan") {
  Program p = text::parse_program(
      "color(p1,red). color(p1,white). color(n1,red). shape(p1,octagon). "
      "reach(X,Y) :- edge(X,Y). edge(a,b).");
  // Constant first argument over a facts-only predicate: index narrows.
  auto cand = p.candidates(Atom{"color", {c("p1"), v("C")}});
  CHECK(cand.size() == 2);
  // Variable first argument: all clauses of the predicate, program order.
  cand = p.candidates(Atom{"color", {v("S"), c("red")}});
  CHECK(cand.size() == 3);
  // Mixed rule/fact predicate resolves through the full list.
  cand = p.candidates(Atom{"reach", {c("a"), v("Y")}});
  CHECK(cand.size() == 1);
  CHECK(p.has_fact(Atom{"edge", {c("a"), c("b")}}));
  CHECK_FALSE(p.has_fact(Atom{"edge", {c("b"), c("a")}}));
  CHECK(p.predicates().size() == 4);
}

// ---------------------------------------------------------------------------
// Unification: pinned examples
// ---------------------------------------------------------------------------

TEST_CASE("unify variable against constant binds it") {
  auto s = logic::unify(v("X"), c("red"));
  REQUIRE(s.has_value());
  CHECK(s->apply(v("X")) == c("red"));
  CHECK(s->size() == 1);
}

TEST_CASE("unify identical ground terms yields empty substitution") {
  auto s = logic::unify(f("f", {c("a")}), f("f", {c("a")}));
  REQUIRE(s.has_value());
  CHECK(s->empty());
}

TEST_CASE("unify clash through shared variable fails") {
  // f(X,X) vs f(a,b): X cannot be both a and b.
  auto s = logic::unify(f("f", {v("X"), v("X")}), f("f", {c("a"), c("b")}));
  CHECK_FALSE(s.has_value());
}

TEST_CASE("occurs check rejects X against f(X)") {
  CHECK_FALSE(logic::unify(v("X"), f("f", {v("X")})).has_value());
  CHECK_FALSE(logic::unify(f("f", {v("X")}), v("X")).has_value());
  // ... also through a chain: X = Y, Y = f(X).
  Subst s0;
  auto s1 = logic::unify(v("X"), v("Y"), s0);
  REQUIRE(s1.has_value());
  CHECK_FALSE(logic::unify(v("Y"), f("f", {v("X")}), *s1).has_value());
}

TEST_CASE("unify atoms requires same predicate and arity") {
  CHECK(logic::unify(Atom{"p", {v("X")}}, Atom{"p", {c("a")}}).has_value());
  CHECK_FALSE(logic::unify(Atom{"p", {v("X")}}, Atom{"q", {c("a")}}).has_value());
  CHECK_FALSE(
      logic::unify(Atom{"p", {v("X")}}, Atom{"p", {c("a"), c("b")}}).has_value());
}

TEST_CASE("standardize_apart produces fresh non-colliding names") {
  long counter = 0;
  const Clause cl = text::parse_clauses("p(X,Y) :- q(Y,X).")[0];
  const Clause r1 = logic::standardize_apart(cl, counter);
  const Clause r2 = logic::standardize_apart(cl, counter);
  std::vector<std::string> v1, v2;
  logic::collect_vars(r1, v1);
  logic::collect_vars(r2, v2);
  CHECK(v1.size() == 2);
  for (const auto& name : v1)
    CHECK(std::find(v2.begin(), v2.end(), name) == v2.end());
  CHECK(logic::alpha_equivalent(r1, cl));
}

// ---------------------------------------------------------------------------
// Unification: randomized properties (idempotence, symmetry, occurs check)
// ---------------------------------------------------------------------------

TEST_CASE("randomized MGU properties over 1000 term pairs") {
  Rng rng(42);
  int unified = 0;
  for (int i = 0; i < 1000; ++i) {
    const Term a = random_term(rng, 2);
    const Term b = random_term(rng, 2);
    const auto ab = logic::unify(a, b);
    const auto ba = logic::unify(b, a);
    // Unifiability is symmetric.
    CHECK(ab.has_value() == ba.has_value());
    if (ab) {
      ++unified;
      // The MGU equalizes both sides ...
      const Term ua = ab->apply(a);
      const Term ub = ab->apply(b);
      CHECK(ua == ub);
      // ... and applying it is idempotent.
      CHECK(ab->apply(ua) == ua);
      CHECK(ba->apply(ba->apply(a)) == ba->apply(a));
    }
  }
  // Sanity: the generator must exercise both outcomes.
  CHECK(unified > 100);
  CHECK(unified < 900);
}

TEST_CASE("randomized occurs-check: X never unifies with a term containing X") {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    Term inner = random_term(rng, 1);
    const Term wrapped = f("f", {v("X"), inner});
    CHECK_FALSE(logic::unify(v("X"), wrapped).has_value());
  }
}

// ---------------------------------------------------------------------------
// SLD resolution: pinned behavior
// ---------------------------------------------------------------------------

namespace {
const char* kSignBk =
    "color(p1,red). color(p1,white). shape(p1,octagon). "
    "has_word(p1,p1_w1). closely_match(p1_w1,stop). "
    "color(n1,red). color(n1,white). shape(n1,circle). "
    "number(n1,n1_d1). digits(n1_d1,30). "
    "sign(p1). sign(n1). known_word(stop). known_word(yield).";
}

TEST_CASE("prove enumerates answers in program order") {
  const Program bk = text::parse_program(kSignBk);
  const auto answers =
      logic::prove(bk, {Atom{"color", {c("p1"), v("C")}}}, 100);
  REQUIRE(answers.size() == 2);
  CHECK(answers[0].apply(v("C")) == c("red"));
  CHECK(answers[1].apply(v("C")) == c("white"));
}

TEST_CASE("prove conjunction binds across goals") {
  const Program bk = text::parse_program(kSignBk);
  const auto answers = logic::prove(
      bk, {Atom{"has_word", {v("S"), v("W")}}, Atom{"closely_match", {v("W"), c("stop")}}},
      100);
  REQUIRE(answers.size() == 1);
  CHECK(answers[0].apply(v("S")) == c("p1"));
}

TEST_CASE("covers accepts the word rule for p1 and rejects n1") {
  const Program bk = text::parse_program(kSignBk);
  const auto hyp = text::parse_clauses(
      "traffic_sign(A,stop_sign) :- has_word(A,B), closely_match(B,stop).");
  CHECK(logic::covers(bk, hyp, Atom{"traffic_sign", {c("p1"), c("stop_sign")}}));
  CHECK_FALSE(logic::covers(bk, hyp, Atom{"traffic_sign", {c("n1"), c("stop_sign")}}));
}

TEST_CASE("max_answers stops the enumeration early") {
  const Program bk = text::parse_program(kSignBk);
  const auto answers = logic::prove(bk, {Atom{"sign", {v("S")}}}, 100, 1);
  CHECK(answers.size() == 1);
}

TEST_CASE("depth bound limits resolution steps, not tree height") {
  // chain of length 5: nat(z), nat(s(X)) :- nat(X)-style counting.
  Program p = text::parse_program("n(z). n(s(X)) :- n(X).");
  const Atom goal{"n", {f("s", {f("s", {f("s", {c("z")})})})}};
  // 4 resolution steps needed (3 rule + 1 fact).
  CHECK(logic::prove(p, {goal}, 4).size() == 1);
  CHECK(logic::prove(p, {goal}, 3).empty());
}

TEST_CASE("left-recursive program terminates under the bound with no answers") {
  Program p = text::parse_program("loop(X) :- loop(X).");
  CHECK(logic::prove(p, {Atom{"loop", {c("a")}}}, 50).empty());
}

TEST_CASE("solve early exit via yield return value") {
  const Program bk = text::parse_program(kSignBk);
  int seen = 0;
  logic::solve(bk, {Atom{"known_word", {v("W")}}}, 100, [&](const Subst&) {
    ++seen;
    return true;  // stop after the first answer
  });
  CHECK(seen == 1);
}

TEST_CASE("recursive reachability proves transitive goals") {
  Program p = text::parse_program(
      "edge(a,b). edge(b,c). edge(c,d). "
      "reach(X,Y) :- edge(X,Y). reach(X,Y) :- edge(X,Z), reach(Z,Y).");
  CHECK(logic::prove(p, {Atom{"reach", {c("a"), c("d")}}}, 100).size() == 1);
  CHECK(logic::prove(p, {Atom{"reach", {c("d"), c("a")}}}, 100).empty());
}

// ---------------------------------------------------------------------------
// SLD prover vs bottom-up least-fixpoint oracle on random programs
// ---------------------------------------------------------------------------

TEST_CASE("prove agrees with the least-fixpoint oracle on 200 random programs") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const RandomProgram rp = random_program(rng);
    const Fixpoint fp = least_fixpoint(rp.program, rp.consts);
    long max_cost = 1;
    for (const auto& [atom, cost] : fp.cost) max_cost = std::max(max_cost, cost);
    // Any derivable atom has an SLD derivation within its fixpoint cost; the
    // bound below is therefore safe for every query in this program.
    const long bound = max_cost;

    // Check every ground atom over the signature, derivable or not.
    for (const auto& [pred, arity] : rp.preds) {
      std::vector<std::size_t> idx(arity, 0);
      while (true) {
        std::vector<Term> args;
        for (std::size_t i = 0; i < arity; ++i) args.push_back(c(rp.consts[idx[i]]));
        const Atom query{pred, args};
        const bool oracle_true = fp.cost.count(query) != 0;
        const bool sld_true = !logic::prove(rp.program, {query}, bound, 1).empty();
        INFO("trial ", trial, " query ", logic::to_string(query));
        CHECK(sld_true == oracle_true);
        std::size_t k = 0;
        for (; k < idx.size(); ++k) {
          if (++idx[k] < rp.consts.size()) break;
          idx[k] = 0;
        }
        if (k == idx.size()) break;
      }
    }
  }
}
