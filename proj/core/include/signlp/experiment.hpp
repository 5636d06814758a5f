#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "signlp/scene.hpp"
#include "signlp/term.hpp"

namespace signlp::experiment {

class InsufficientData : public std::runtime_error {
 public:
  explicit InsufficientData(const std::string& what) : std::runtime_error(what) {}
};

class MalformedCsv : public std::runtime_error {
 public:
  explicit MalformedCsv(const std::string& what) : std::runtime_error(what) {}
};

enum class Engine { Mil, Mdie };
std::string to_string(Engine e);
std::optional<Engine> engine_from_string(const std::string& s);

// One sign's extracted ground facts plus its label.
struct SignRecord {
  std::string id;
  bool positive = false;
  std::vector<logic::Clause> facts;
};

struct Dataset {
  std::vector<SignRecord> signs;
  std::vector<logic::Clause> shared;  // lexicon facts shared across signs
};

// Runs the extractor over rendered items and packages per-sign fact sets.
Dataset extract_dataset(const std::vector<scene::DatasetItem>& items,
                        const std::vector<std::string>& lexicon);

struct ExperimentConfig {
  std::vector<Engine> engines{Engine::Mil, Engine::Mdie};
  std::vector<int> train_sizes{1, 2, 4, 8};
  int repeats = 100;
  std::uint64_t seed = 0;
  long depth_bound = 100;
  int timeout_ms = 10000;
  int workers = 0;  // 0 = hardware concurrency
};

struct RunResult {
  Engine engine = Engine::Mil;
  int train_size = 0;
  int repeat_index = 0;
  double accuracy = 0;  // correct / held-out total; 0.5 when timed out
  long time_ms = 0;
  bool timed_out = false;
  std::string hypothesis;  // learned clauses on one line
};

struct PredictionRow {
  Engine engine = Engine::Mil;
  int train_size = 0;
  int repeat_index = 0;
  std::string sign_id;
  bool actual = false;
  bool predicted = false;
};

struct CurveOutput {
  std::vector<RunResult> runs;             // sorted (engine, size, repeat)
  std::vector<PredictionRow> predictions;  // per held-out item
};

// Fig.-4-style protocol: per engine, train size, and repeat, sample n
// positives + n negatives (repeat i reseeds at base seed + i), learn under a
// wall-clock timeout, and score on every remaining sign. Timed-out repeats
// score the 0.5 majority baseline and are flagged.
CurveOutput learning_curve(const ExperimentConfig& cfg, const Dataset& data);

// CSV with one row per run plus mean/stddev summary rows per (engine, n).
std::string curve_csv(const std::vector<RunResult>& runs);
std::string prediction_csv(const std::vector<PredictionRow>& rows);

struct VariantReport {
  std::string variant;
  long items = 0;
  long correct = 0;
  double accuracy = 0;
};

// Accuracy of a fixed hypothesis per perturbation variant: extract facts from
// each image and test covers() for the stop class.
std::vector<VariantReport> robustness_eval(
    const std::vector<logic::Clause>& hypothesis,
    const std::vector<logic::Clause>& shared,
    const std::map<std::string, std::vector<scene::DatasetItem>>& variants,
    const std::vector<std::string>& lexicon, long depth_bound = 100);

std::string robustness_csv(const std::vector<VariantReport>& reports);

// Deterministic SVG line chart from curve_csv output: one mean-accuracy
// polyline per engine plus the 0.5 baseline.
std::string plot(const std::string& csv);

// Learn with one engine over explicit BK and examples; used by the CLI.
// Throws on timeout; returns nullopt when no consistent hypothesis exists.
std::optional<std::vector<logic::Clause>> learn_once(
    Engine engine, const logic::Program& bk, const logic::ExampleSet& examples,
    long depth_bound, int timeout_ms);

}  // namespace signlp::experiment
