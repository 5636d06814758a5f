// Experiment-harness tests: dataset extraction, the learning-curve protocol,
// CSV reporting, the SVG plot, and fixed-hypothesis robustness evaluation.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "signlp/experiment.hpp"
#include "signlp/scene.hpp"
#include "signlp/solve.hpp"
#include "signlp/text.hpp"

using namespace signlp;
using experiment::Engine;

namespace {

const std::vector<std::string> kLexicon = {"stop", "yield"};

experiment::Dataset small_dataset(int pos = 8, int neg = 8, std::uint64_t seed = 7) {
  scene::DatasetConfig cfg;
  cfg.positives = pos;
  cfg.negatives = neg;
  cfg.seed = seed;
  return experiment::extract_dataset(scene::generate_dataset(cfg), kLexicon);
}

int count_lines(const std::string& s, const std::string& needle) {
  int n = 0;
  std::istringstream is(s);
  std::string line;
  while (std::getline(is, line))
    if (line.find(needle) != std::string::npos) ++n;
  return n;
}

}  // namespace

TEST_CASE("engine names round-trip") {
  CHECK(experiment::to_string(Engine::Mil) == "mil");
  CHECK(experiment::to_string(Engine::Mdie) == "mdie");
  CHECK(experiment::engine_from_string("mil") == Engine::Mil);
  CHECK(experiment::engine_from_string("mdie") == Engine::Mdie);
  CHECK_FALSE(experiment::engine_from_string("prolog").has_value());
}

TEST_CASE("extract_dataset packages per-sign facts plus shared lexicon") {
  const auto data = small_dataset(4, 4);
  REQUIRE(data.signs.size() == 8);
  CHECK(data.shared == text::parse_clauses("known_word(stop). known_word(yield)."));
  int pos = 0;
  for (const auto& rec : data.signs) {
    pos += rec.positive ? 1 : 0;
    bool has_sign_fact = false, has_color = false;
    for (const auto& c : rec.facts) {
      if (c.head.pred == "sign") has_sign_fact = true;
      if (c.head.pred == "color") has_color = true;
    }
    CHECK(has_sign_fact);
    CHECK(has_color);
  }
  CHECK(pos == 4);
}

TEST_CASE("learning_curve produces one run per engine, size, and repeat") {
  const auto data = small_dataset();
  experiment::ExperimentConfig cfg;
  cfg.train_sizes = {1, 2};
  cfg.repeats = 3;
  cfg.workers = 2;
  const auto out = experiment::learning_curve(cfg, data);
  REQUIRE(out.runs.size() == 2 * 2 * 3);
  for (const auto& r : out.runs) {
    CHECK(r.accuracy >= 0.0);
    CHECK(r.accuracy <= 1.0);
    CHECK_FALSE(r.timed_out);
    CHECK_FALSE(r.hypothesis.empty());
  }
  // Runs arrive sorted by (engine, size, repeat).
  for (std::size_t i = 1; i < out.runs.size(); ++i) {
    const auto& a = out.runs[i - 1];
    const auto& b = out.runs[i];
    CHECK(std::tuple(static_cast<int>(a.engine), a.train_size, a.repeat_index) <
          std::tuple(static_cast<int>(b.engine), b.train_size, b.repeat_index));
  }
}

TEST_CASE("word-rule learning is perfect for the meta-interpretive engine") {
  const auto data = small_dataset();
  experiment::ExperimentConfig cfg;
  cfg.engines = {Engine::Mil};
  cfg.train_sizes = {1};
  cfg.repeats = 5;
  cfg.workers = 2;
  for (const auto& r : experiment::learning_curve(cfg, data).runs)
    CHECK(r.accuracy == 1.0);
}

TEST_CASE("accuracy can be recounted from the prediction log") {
  const auto data = small_dataset();
  experiment::ExperimentConfig cfg;
  cfg.train_sizes = {2};
  cfg.repeats = 2;
  cfg.workers = 2;
  const auto out = experiment::learning_curve(cfg, data);
  for (const auto& run : out.runs) {
    long total = 0, correct = 0;
    for (const auto& p : out.predictions) {
      if (p.engine != run.engine || p.train_size != run.train_size ||
          p.repeat_index != run.repeat_index)
        continue;
      ++total;
      if (p.actual == p.predicted) ++correct;
    }
    // Held-out size: everything not sampled for training.
    CHECK(total == static_cast<long>(data.signs.size()) - 2 * run.train_size);
    CHECK(run.accuracy ==
          doctest::Approx(static_cast<double>(correct) / total));
  }
}

TEST_CASE("curve runs are byte-reproducible") {
  const auto data = small_dataset();
  experiment::ExperimentConfig cfg;
  cfg.train_sizes = {1, 2};
  cfg.repeats = 2;
  cfg.workers = 4;
  const auto a = experiment::learning_curve(cfg, data);
  const auto b = experiment::learning_curve(cfg, data);
  // time_ms jitters between runs; compare everything else via the prediction
  // log and per-run accuracies.
  CHECK(experiment::prediction_csv(a.predictions) ==
        experiment::prediction_csv(b.predictions));
  REQUIRE(a.runs.size() == b.runs.size());
  for (std::size_t i = 0; i < a.runs.size(); ++i) {
    CHECK(a.runs[i].accuracy == b.runs[i].accuracy);
    CHECK(a.runs[i].hypothesis == b.runs[i].hypothesis);
  }
}

TEST_CASE("oversized training requests raise InsufficientData") {
  const auto data = small_dataset(4, 4);
  experiment::ExperimentConfig cfg;
  cfg.train_sizes = {4};  // leaves no held-out signs
  cfg.repeats = 1;
  CHECK_THROWS_AS(experiment::learning_curve(cfg, data), experiment::InsufficientData);
  cfg.train_sizes = {5};  // more than one class holds
  CHECK_THROWS_AS(experiment::learning_curve(cfg, data), experiment::InsufficientData);
  cfg.train_sizes = {1};
  cfg.repeats = 0;
  CHECK_THROWS_AS(experiment::learning_curve(cfg, data), experiment::InsufficientData);
}

TEST_CASE("curve csv carries runs plus mean and stddev summaries") {
  const auto data = small_dataset();
  experiment::ExperimentConfig cfg;
  cfg.train_sizes = {1};
  cfg.repeats = 2;
  cfg.workers = 2;
  const auto out = experiment::learning_curve(cfg, data);
  const std::string csv = experiment::curve_csv(out.runs);
  CHECK(csv.rfind("engine,n,repeat,accuracy,time_ms,timed_out,hypothesis\n", 0) == 0);
  CHECK(count_lines(csv, ",mean,") == 2);    // one per engine
  CHECK(count_lines(csv, ",stddev,") == 2);
  CHECK(count_lines(csv, "mil,1,") >= 2);
}

TEST_CASE("plot renders one polyline per engine plus the chance baseline") {
  const auto data = small_dataset();
  experiment::ExperimentConfig cfg;
  cfg.train_sizes = {1, 2};
  cfg.repeats = 2;
  cfg.workers = 2;
  const std::string csv = experiment::curve_csv(experiment::learning_curve(cfg, data).runs);
  const std::string svg = experiment::plot(csv);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(count_lines(svg, "<polyline") == 3);
  CHECK(svg.find("mil") != std::string::npos);
  CHECK(svg.find("mdie") != std::string::npos);
  // Deterministic output.
  CHECK(experiment::plot(csv) == svg);
}

TEST_CASE("plot rejects malformed csv") {
  CHECK_THROWS_AS(experiment::plot(""), experiment::MalformedCsv);
  CHECK_THROWS_AS(experiment::plot("a,b,c\n1,2,3\n"), experiment::MalformedCsv);
  CHECK_THROWS_AS(
      experiment::plot("engine,n,repeat,accuracy,time_ms,timed_out,hypothesis\n"),
      experiment::MalformedCsv);
  CHECK_THROWS_AS(
      experiment::plot("engine,n,repeat,accuracy,time_ms,timed_out,hypothesis\n"
                       "mil,1,0,not_a_number,3,0,h\n"),
      experiment::MalformedCsv);
}

TEST_CASE("learn_once runs either engine over explicit inputs") {
  const auto data = small_dataset(2, 2);
  logic::Program bk;
  bk.add_all(data.shared);
  for (const auto& rec : data.signs) bk.add_all(rec.facts);
  logic::ExampleSet es;
  for (const auto& rec : data.signs) {
    const logic::Atom e{"traffic_sign",
                        {logic::Term::constant(rec.id),
                         logic::Term::constant("stop_sign")}};
    (rec.positive ? es.positives : es.negatives).push_back(e);
  }
  for (Engine engine : {Engine::Mil, Engine::Mdie}) {
    const auto hyp = experiment::learn_once(engine, bk, es, 100, 10000);
    REQUIRE(hyp.has_value());
    for (const auto& e : es.positives) CHECK(logic::covers(bk, *hyp, e));
    for (const auto& e : es.negatives) CHECK_FALSE(logic::covers(bk, *hyp, e));
  }
}

TEST_CASE("robustness evaluation scores a fixed hypothesis per variant") {
  const auto hyp = text::parse_clauses(
      "traffic_sign(A,stop_sign) :- has_word(A,B), closely_match(B,stop).");
  std::map<std::string, std::vector<scene::DatasetItem>> variants;
  for (auto variant : {scene::Variant::Base, scene::Variant::Rp2Graffiti}) {
    scene::DatasetConfig cfg;
    cfg.positives = 3;
    cfg.negatives = 3;
    cfg.variant = variant;
    cfg.seed = 11;
    variants[scene::to_string(variant)] = scene::generate_dataset(cfg);
  }
  const auto shared = text::parse_clauses("known_word(stop). known_word(yield).");
  const auto reports = experiment::robustness_eval(hyp, shared, variants, kLexicon);
  REQUIRE(reports.size() == 2);
  for (const auto& r : reports) {
    CHECK(r.items == 6);
    CHECK(r.correct == 6);
    CHECK(r.accuracy == doctest::Approx(1.0));
  }
  const std::string csv = experiment::robustness_csv(reports);
  CHECK(csv.rfind("variant,items,correct,accuracy\n", 0) == 0);
  CHECK(count_lines(csv, "base,") == 1);
  CHECK(count_lines(csv, "rp2_graffiti,") == 1);
}
