// Command-line front end: sign rendering, feature extraction, rule learning,
// and the learning-curve / robustness experiment harness.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 learning failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "signlp/defaults.hpp"
#include "signlp/experiment.hpp"
#include "signlp/facts.hpp"
#include "signlp/mdie.hpp"
#include "signlp/mil.hpp"
#include "signlp/scene.hpp"
#include "signlp/text.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace signlp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitLearning = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LearningError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> default_lexicon() {
  return {std::begin(defaults::kLexicon), std::end(defaults::kLexicon)};
}

scene::Variant parse_variant(const std::string& s) {
  if (auto v = scene::variant_from_string(s)) return *v;
  throw UsageError("unknown variant '" + s +
                   "' (expected base|rp2_subtle|rp2_graffiti|rp2_art|advcam)");
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  text::write_file(path, content);
}

// --- generate ---------------------------------------------------------------

struct GenerateArgs {
  int pos = 20;
  int neg = 20;
  std::string variant = "base";
  std::uint64_t seed = 0;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  scene::DatasetConfig cfg;
  cfg.positives = a.pos;
  cfg.negatives = a.neg;
  cfg.variant = parse_variant(a.variant);
  cfg.seed = a.seed;
  const std::vector<scene::DatasetItem> items = scene::generate_dataset(cfg);
  scene::save_dataset(a.out, items);
  std::cout << "wrote " << items.size() << " images + manifest.json to "
            << a.out << "\n";
  return kExitOk;
}

// --- extract ----------------------------------------------------------------

struct ExtractArgs {
  std::string in;
  std::string manifest = "manifest.json";
  std::string out;
};

int run_extract(const ExtractArgs& a) {
  if (fs::path(a.manifest).filename() != "manifest.json" &&
      !fs::exists(fs::path(a.in) / a.manifest))
    throw std::runtime_error("manifest not found: " + a.manifest);
  const std::vector<scene::DatasetItem> items = scene::load_dataset(a.in);
  const std::vector<std::string> lexicon = default_lexicon();
  std::vector<logic::Clause> all;
  for (const scene::DatasetItem& it : items) {
    const facts::Extraction ex = facts::extract(it.raster);
    for (logic::Clause& c : facts::emit_facts(it.spec.sign_id, ex, lexicon))
      all.push_back(std::move(c));
    all.push_back(facts::sign_fact(it.spec.sign_id));
  }
  for (logic::Clause& c : facts::lexicon_facts(lexicon))
    all.push_back(std::move(c));
  write_output(a.out, text::serialize(all));
  return kExitOk;
}

// --- learn ------------------------------------------------------------------

struct LearnArgs {
  std::string engine = "mil";
  std::string bk;
  std::string examples;
  std::string modes;
  std::string metarules;
  std::string out;
  std::string trace;
  long depth_bound = 100;
  int timeout_ms = 10000;
};

int run_learn(const LearnArgs& a) {
  const auto engine = experiment::engine_from_string(a.engine);
  if (!engine) throw UsageError("unknown engine '" + a.engine + "'");
  const logic::Program bk = text::parse_program(text::read_file(a.bk));
  const logic::ExampleSet examples =
      text::parse_examples(text::read_file(a.examples));
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::milliseconds(a.timeout_ms);

  std::vector<logic::Clause> hypothesis;
  try {
    if (*engine == experiment::Engine::Mil) {
      const std::vector<mil::Metarule> rules = text::parse_metarules(
          a.metarules.empty() ? defaults::kMetarules
                              : text::read_file(a.metarules));
      mil::MILConfig cfg;
      cfg.depth_bound = a.depth_bound;
      cfg.deadline = deadline;
      auto h = mil::mil_learn(bk, examples, rules, cfg);
      if (!h) throw LearningError("no consistent hypothesis found");
      hypothesis = std::move(*h);
    } else {
      const std::vector<mdie::ModeDecl> modes = text::parse_modes(
          a.modes.empty() ? defaults::kModes : text::read_file(a.modes));
      mdie::SearchConfig cfg;
      cfg.depth_bound = a.depth_bound;
      cfg.deadline = deadline;
      std::ofstream trace_out;
      mdie::TraceSink sink;
      if (!a.trace.empty()) {
        trace_out.open(a.trace);
        if (!trace_out) throw std::runtime_error("cannot write " + a.trace);
        sink = [&trace_out](const mdie::SearchNode& n) {
          trace_out << json{{"clause", logic::to_string(n.clause)},
                            {"pos", n.pos_covered},
                            {"neg", n.neg_covered},
                            {"score", n.score}}
                           .dump()
                    << '\n';
        };
      }
      mdie::Hypothesis h = mdie::cover_loop(bk, examples, modes, cfg, sink);
      if (h.clauses.empty())
        throw LearningError("no consistent hypothesis found");
      if (!h.uncovered_positives.empty())
        std::cerr << "warning: " << h.uncovered_positives.size()
                  << " positive example(s) left uncovered\n";
      hypothesis = std::move(h.clauses);
    }
  } catch (const mil::Timeout&) {
    throw LearningError("learning timed out");
  } catch (const mdie::Timeout&) {
    throw LearningError("learning timed out");
  } catch (const mdie::NoConsistentClause&) {
    throw LearningError("no consistent hypothesis found");
  }
  write_output(a.out, text::serialize(hypothesis));
  return kExitOk;
}

// --- curve ------------------------------------------------------------------

struct CurveArgs {
  std::string config;
  std::string out;
  std::string predictions;
  std::string svg;
};

int run_curve(const CurveArgs& a) {
  json cfg_json;
  try {
    std::ifstream in(a.config);
    if (!in) throw std::runtime_error("cannot read " + a.config);
    in >> cfg_json;
  } catch (const json::exception& e) {
    throw std::runtime_error("malformed config JSON: " + std::string(e.what()));
  }

  experiment::ExperimentConfig cfg;
  if (cfg_json.contains("engines")) {
    cfg.engines.clear();
    for (const auto& e : cfg_json.at("engines")) {
      auto eng = experiment::engine_from_string(e.get<std::string>());
      if (!eng) throw std::runtime_error("unknown engine in config");
      cfg.engines.push_back(*eng);
    }
  }
  cfg.train_sizes = cfg_json.value("train_sizes", cfg.train_sizes);
  cfg.repeats = cfg_json.value("repeats", cfg.repeats);
  cfg.seed = cfg_json.value("seed", cfg.seed);
  cfg.depth_bound = cfg_json.value("depth_bound", cfg.depth_bound);
  cfg.timeout_ms = cfg_json.value("timeout_ms", cfg.timeout_ms);
  cfg.workers = cfg_json.value("workers", cfg.workers);

  experiment::Dataset data;
  const std::vector<std::string> lexicon = default_lexicon();
  if (cfg_json.contains("data_dir")) {
    data = experiment::extract_dataset(
        scene::load_dataset(cfg_json.at("data_dir").get<std::string>()),
        lexicon);
  } else {
    scene::DatasetConfig dc;
    const json d = cfg_json.value("dataset", json::object());
    dc.positives = d.value("positives", 20);
    dc.negatives = d.value("negatives", 20);
    dc.seed = d.value("seed", std::uint64_t{7});
    data = experiment::extract_dataset(scene::generate_dataset(dc), lexicon);
  }

  const experiment::CurveOutput out = experiment::learning_curve(cfg, data);
  const std::string csv = experiment::curve_csv(out.runs);
  write_output(a.out.empty() ? cfg_json.value("out_csv", "") : a.out, csv);
  const std::string pred_path = a.predictions.empty()
                                    ? cfg_json.value("predictions_csv", "")
                                    : a.predictions;
  if (!pred_path.empty())
    text::write_file(pred_path, experiment::prediction_csv(out.predictions));
  const std::string svg_path =
      a.svg.empty() ? cfg_json.value("svg", "") : a.svg;
  if (!svg_path.empty()) text::write_file(svg_path, experiment::plot(csv));
  return kExitOk;
}

// --- robust -----------------------------------------------------------------

struct RobustArgs {
  std::string hypothesis;
  std::string data;
  std::string out;
  long depth_bound = 100;
};

int run_robust(const RobustArgs& a) {
  const std::vector<logic::Clause> hypothesis =
      text::parse_clauses(text::read_file(a.hypothesis));
  if (hypothesis.empty()) throw std::runtime_error("empty hypothesis");

  std::map<std::string, std::vector<scene::DatasetItem>> variants;
  if (fs::exists(fs::path(a.data) / "manifest.json")) {
    const auto items = scene::load_dataset(a.data);
    variants[fs::path(a.data).filename().string()] = items;
  } else {
    std::vector<fs::path> dirs;
    if (fs::is_directory(a.data))
      for (const auto& entry : fs::directory_iterator(a.data))
        if (entry.is_directory() &&
            fs::exists(entry.path() / "manifest.json"))
          dirs.push_back(entry.path());
    if (dirs.empty())
      throw std::runtime_error("no dataset manifests under " + a.data);
    std::sort(dirs.begin(), dirs.end());
    for (const fs::path& d : dirs)
      variants[d.filename().string()] = scene::load_dataset(d.string());
  }

  const auto reports = experiment::robustness_eval(
      hypothesis, facts::lexicon_facts(default_lexicon()), variants,
      default_lexicon(), a.depth_bound);
  write_output(a.out, experiment::robustness_csv(reports));
  return kExitOk;
}

// --- plot -------------------------------------------------------------------

struct PlotArgs {
  std::string csv;
  std::string out;
};

int run_plot(const PlotArgs& a) {
  write_output(a.out, experiment::plot(text::read_file(a.csv)));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"traffic-sign rule learning toolkit"};
  app.require_subcommand(1);

  GenerateArgs gen;
  CLI::App* c_gen = app.add_subcommand("generate", "render a labeled sign corpus");
  c_gen->add_option("--pos", gen.pos, "positive (stop sign) count");
  c_gen->add_option("--neg", gen.neg, "negative sign count");
  c_gen->add_option("--variant", gen.variant,
                    "base|rp2_subtle|rp2_graffiti|rp2_art|advcam");
  c_gen->add_option("--seed", gen.seed, "corpus seed");
  c_gen->add_option("--out", gen.out, "output directory")->required();

  ExtractArgs ext;
  CLI::App* c_ext = app.add_subcommand("extract", "extract facts from a corpus");
  c_ext->add_option("--in", ext.in, "dataset directory")->required();
  c_ext->add_option("--manifest", ext.manifest, "manifest file name");
  c_ext->add_option("--out", ext.out, "facts output (.lp), '-' for stdout");

  LearnArgs lrn;
  CLI::App* c_lrn = app.add_subcommand("learn", "induce a hypothesis");
  c_lrn->add_option("--engine", lrn.engine, "mil|mdie");
  c_lrn->add_option("--bk", lrn.bk, "background knowledge (.lp)")->required();
  c_lrn->add_option("--examples", lrn.examples, "examples (.ex)")->required();
  c_lrn->add_option("--modes", lrn.modes, "mode declarations (.modes, mdie)");
  c_lrn->add_option("--metarules", lrn.metarules, "metarules (.mrules, mil)");
  c_lrn->add_option("--out", lrn.out, "hypothesis output (.lp)");
  c_lrn->add_option("--trace", lrn.trace, "JSON-lines search trace (mdie)");
  c_lrn->add_option("--depth-bound", lrn.depth_bound, "resolution step bound");
  c_lrn->add_option("--timeout-ms", lrn.timeout_ms, "learning timeout");

  CurveArgs crv;
  CLI::App* c_crv = app.add_subcommand("curve", "run the learning-curve protocol");
  c_crv->add_option("--config", crv.config, "JSON config")->required();
  c_crv->add_option("--out", crv.out, "curve CSV output");
  c_crv->add_option("--predictions", crv.predictions, "per-item prediction CSV");
  c_crv->add_option("--svg", crv.svg, "SVG plot output");

  RobustArgs rob;
  CLI::App* c_rob = app.add_subcommand("robust", "evaluate attack variants");
  c_rob->add_option("--hypothesis", rob.hypothesis, "hypothesis (.lp)")->required();
  c_rob->add_option("--data", rob.data, "dataset dir or dir of variant dirs")
      ->required();
  c_rob->add_option("--out", rob.out, "report CSV output");
  c_rob->add_option("--depth-bound", rob.depth_bound, "resolution step bound");

  PlotArgs plt;
  CLI::App* c_plt = app.add_subcommand("plot", "render a curve CSV as SVG");
  c_plt->add_option("--csv", plt.csv, "curve CSV")->required();
  c_plt->add_option("--out", plt.out, "SVG output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (c_gen->parsed()) return run_generate(gen);
    if (c_ext->parsed()) return run_extract(ext);
    if (c_lrn->parsed()) return run_learn(lrn);
    if (c_crv->parsed()) return run_curve(crv);
    if (c_rob->parsed()) return run_robust(rob);
    if (c_plt->parsed()) return run_plot(plt);
    std::cerr << "error: no subcommand\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LearningError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitLearning;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
