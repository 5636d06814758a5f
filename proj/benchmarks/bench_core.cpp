// Micro-benchmarks for the hot paths: unification, SLD proof search, bottom
// clause saturation, and end-to-end learning on a small sign task.

#include <benchmark/benchmark.h>

#include "signlp/defaults.hpp"
#include "signlp/mdie.hpp"
#include "signlp/mil.hpp"
#include "signlp/solve.hpp"
#include "signlp/text.hpp"
#include "signlp/unify.hpp"

namespace {

using namespace signlp;

const char* kBk = R"(
color(p1,red). color(p1,white). shape(p1,octagon).
has_word(p1,p1_w1). closely_match(p1_w1,stop).
color(p2,red). color(p2,white). shape(p2,octagon).
has_word(p2,p2_w1). closely_match(p2_w1,stop).
color(n1,red). color(n1,white). shape(n1,circle).
number(n1,n1_n1). digits(n1_n1,30).
color(n2,blue). color(n2,white). shape(n2,rectangle).
has_word(n2,n2_w1).
sign(p1). sign(p2). sign(n1). sign(n2).
known_word(stop). known_word(yield).
)";

const char* kExamples = R"(
pos(traffic_sign(p1,stop_sign)).
pos(traffic_sign(p2,stop_sign)).
neg(traffic_sign(n1,stop_sign)).
neg(traffic_sign(n2,stop_sign)).
)";

void BM_Unify(benchmark::State& state) {
  using logic::Term;
  const Term a = Term::compound(
      "f", {Term::var("X"), Term::compound("g", {Term::var("Y"), Term::constant("c")}),
            Term::var("X")});
  const Term b = Term::compound(
      "f", {Term::compound("g", {Term::constant("a"), Term::constant("c")}),
            Term::var("Z"), Term::var("W")});
  for (auto _ : state) {
    logic::Subst s;
    benchmark::DoNotOptimize(logic::unify(a, b, s));
  }
}
BENCHMARK(BM_Unify);

void BM_Prove(benchmark::State& state) {
  const logic::Program bk = text::parse_program(kBk);
  const logic::Atom goal{"has_word",
                         {logic::Term::var("S"), logic::Term::var("W")}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(logic::prove(bk, {goal}, 100));
  }
}
BENCHMARK(BM_Prove);

void BM_Saturate(benchmark::State& state) {
  const logic::Program bk = text::parse_program(kBk);
  const auto modes = text::parse_modes(defaults::kModes);
  const logic::Atom seed{"traffic_sign",
                         {logic::Term::constant("p1"),
                          logic::Term::constant("stop_sign")}};
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdie::saturate(seed, bk, modes));
  }
}
BENCHMARK(BM_Saturate);

void BM_MilLearn(benchmark::State& state) {
  const logic::Program bk = text::parse_program(kBk);
  const logic::ExampleSet examples = text::parse_examples(kExamples);
  const auto rules = text::parse_metarules(defaults::kMetarules);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mil::mil_learn(bk, examples, rules));
  }
}
BENCHMARK(BM_MilLearn);

void BM_MdieCoverLoop(benchmark::State& state) {
  const logic::Program bk = text::parse_program(kBk);
  const logic::ExampleSet examples = text::parse_examples(kExamples);
  const auto modes = text::parse_modes(defaults::kModes);
  for (auto _ : state) {
    benchmark::DoNotOptimize(mdie::cover_loop(bk, examples, modes));
  }
}
BENCHMARK(BM_MdieCoverLoop);

}  // namespace

BENCHMARK_MAIN();
