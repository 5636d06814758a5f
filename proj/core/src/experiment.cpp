#include "signlp/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <thread>

#include "signlp/defaults.hpp"
#include "signlp/facts.hpp"
#include "signlp/mdie.hpp"
#include "signlp/mil.hpp"
#include "signlp/rng.hpp"
#include "signlp/solve.hpp"
#include "signlp/text.hpp"

namespace signlp::experiment {

namespace {

constexpr const char* kStopClass = "stop_sign";

const std::vector<mil::Metarule>& default_metarules() {
  static const std::vector<mil::Metarule> rules =
      text::parse_metarules(defaults::kMetarules);
  return rules;
}

const std::vector<mdie::ModeDecl>& default_modes() {
  static const std::vector<mdie::ModeDecl> modes =
      text::parse_modes(defaults::kModes);
  return modes;
}

logic::Atom stop_example(const std::string& sign_id) {
  return logic::Atom{"traffic_sign",
                     {logic::Term::constant(sign_id),
                      logic::Term::constant(kStopClass)}};
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

// Minimal CSV row splitter understanding double-quoted fields.
std::vector<std::string> csv_split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(std::move(cur));
  return out;
}

std::string format_double(double v, int digits = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string hypothesis_text(const std::vector<logic::Clause>& clauses) {
  std::string out;
  for (const logic::Clause& c : clauses) {
    if (!out.empty()) out += ' ';
    out += logic::to_string(c);
  }
  return out;
}

struct Job {
  Engine engine;
  int train_size;
  int repeat;
};

struct JobOutput {
  RunResult run;
  std::vector<PredictionRow> predictions;
};

JobOutput run_job(const Job& job, const ExperimentConfig& cfg,
                  const Dataset& data) {
  // Repeat i reseeds at base seed + i; both engines draw the same split.
  Rng rng(cfg.seed + static_cast<std::uint64_t>(job.repeat));
  std::vector<std::size_t> pos, neg;
  for (std::size_t i = 0; i < data.signs.size(); ++i)
    (data.signs[i].positive ? pos : neg).push_back(i);
  rng.shuffle(pos);
  rng.shuffle(neg);

  const std::size_t n = static_cast<std::size_t>(job.train_size);
  std::vector<char> in_train(data.signs.size(), 0);
  logic::Program bk;
  bk.add_all(data.shared);
  logic::ExampleSet examples;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t idx : {pos[i], neg[i]}) {
      in_train[idx] = 1;
      bk.add_all(data.signs[idx].facts);
    }
    examples.positives.push_back(stop_example(data.signs[pos[i]].id));
    examples.negatives.push_back(stop_example(data.signs[neg[i]].id));
  }

  JobOutput out;
  out.run.engine = job.engine;
  out.run.train_size = job.train_size;
  out.run.repeat_index = job.repeat;

  const auto t0 = std::chrono::steady_clock::now();
  const auto deadline = t0 + std::chrono::milliseconds(cfg.timeout_ms);
  std::vector<logic::Clause> hypothesis;
  bool timed_out = false;
  try {
    if (job.engine == Engine::Mil) {
      mil::MILConfig mc;
      mc.depth_bound = cfg.depth_bound;
      mc.deadline = deadline;
      if (auto h = mil_learn(bk, examples, default_metarules(), mc))
        hypothesis = std::move(*h);
    } else {
      mdie::SearchConfig sc;
      sc.depth_bound = cfg.depth_bound;
      sc.deadline = deadline;
      hypothesis =
          mdie::cover_loop(bk, examples, default_modes(), sc).clauses;
    }
  } catch (const mil::Timeout&) {
    timed_out = true;
  } catch (const mdie::Timeout&) {
    timed_out = true;
  }
  out.run.time_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
  out.run.timed_out = timed_out;
  out.run.hypothesis = hypothesis_text(hypothesis);

  if (timed_out) {
    out.run.accuracy = 0.5;  // majority-class baseline for flagged runs
    return out;
  }

  long correct = 0, total = 0;
  for (std::size_t i = 0; i < data.signs.size(); ++i) {
    if (in_train[i]) continue;
    const SignRecord& sr = data.signs[i];
    logic::Program eval_bk;
    eval_bk.add_all(data.shared);
    eval_bk.add_all(sr.facts);
    const bool predicted =
        !hypothesis.empty() &&
        logic::covers(eval_bk, hypothesis, stop_example(sr.id), cfg.depth_bound);
    if (predicted == sr.positive) ++correct;
    ++total;
    out.predictions.push_back({job.engine, job.train_size, job.repeat, sr.id,
                               sr.positive, predicted});
  }
  out.run.accuracy =
      total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0;
  return out;
}

}  // namespace

std::string to_string(Engine e) { return e == Engine::Mil ? "mil" : "mdie"; }

std::optional<Engine> engine_from_string(const std::string& s) {
  if (s == "mil") return Engine::Mil;
  if (s == "mdie") return Engine::Mdie;
  return std::nullopt;
}

Dataset extract_dataset(const std::vector<scene::DatasetItem>& items,
                        const std::vector<std::string>& lexicon) {
  Dataset out;
  out.shared = facts::lexicon_facts(lexicon);
  for (const scene::DatasetItem& it : items) {
    const facts::Extraction ex = facts::extract(it.raster);
    std::vector<logic::Clause> fs =
        facts::emit_facts(it.spec.sign_id, ex, lexicon);
    fs.push_back(facts::sign_fact(it.spec.sign_id));
    out.signs.push_back({it.spec.sign_id, it.positive, std::move(fs)});
  }
  return out;
}

CurveOutput learning_curve(const ExperimentConfig& cfg, const Dataset& data) {
  if (cfg.repeats < 1) throw InsufficientData("repeats must be >= 1");
  if (cfg.train_sizes.empty())
    throw InsufficientData("at least one train size required");
  std::size_t pos = 0, neg = 0;
  for (const SignRecord& s : data.signs) (s.positive ? pos : neg)++;
  for (int n : cfg.train_sizes) {
    if (n < 1) throw InsufficientData("train sizes must be >= 1");
    const auto un = static_cast<std::size_t>(n);
    if (un > pos || un > neg || pos + neg <= 2 * un)
      throw InsufficientData("need " + std::to_string(n) +
                             " examples per class plus a held-out remainder (" +
                             std::to_string(pos) + " pos, " +
                             std::to_string(neg) + " neg available)");
  }

  std::vector<Job> jobs;
  for (Engine e : cfg.engines)
    for (int n : cfg.train_sizes)
      for (int r = 0; r < cfg.repeats; ++r) jobs.push_back({e, n, r});

  std::vector<JobOutput> outputs(jobs.size());
  std::atomic<std::size_t> next{0};
  unsigned workers = cfg.workers > 0
                         ? static_cast<unsigned>(cfg.workers)
                         : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= jobs.size()) return;
      outputs[i] = run_job(jobs[i], cfg, data);
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  CurveOutput out;
  for (JobOutput& jo : outputs) {
    out.runs.push_back(std::move(jo.run));
    out.predictions.insert(out.predictions.end(),
                           std::make_move_iterator(jo.predictions.begin()),
                           std::make_move_iterator(jo.predictions.end()));
  }
  return out;
}

std::string curve_csv(const std::vector<RunResult>& runs) {
  std::ostringstream os;
  os << "engine,n,repeat,accuracy,time_ms,timed_out,hypothesis\n";
  std::map<std::pair<std::string, int>, std::vector<double>> by_cell;
  for (const RunResult& r : runs) {
    os << to_string(r.engine) << ',' << r.train_size << ',' << r.repeat_index
       << ',' << format_double(r.accuracy) << ',' << r.time_ms << ','
       << (r.timed_out ? 1 : 0) << ',' << csv_quote(r.hypothesis) << '\n';
    by_cell[{to_string(r.engine), r.train_size}].push_back(r.accuracy);
  }
  for (const auto& [key, accs] : by_cell) {
    const double mean =
        std::accumulate(accs.begin(), accs.end(), 0.0) / accs.size();
    double var = 0;
    for (double a : accs) var += (a - mean) * (a - mean);
    const double stddev = std::sqrt(var / accs.size());
    os << key.first << ',' << key.second << ",mean," << format_double(mean)
       << ",,,\n";
    os << key.first << ',' << key.second << ",stddev," << format_double(stddev)
       << ",,,\n";
  }
  return os.str();
}

std::string prediction_csv(const std::vector<PredictionRow>& rows) {
  std::ostringstream os;
  os << "engine,n,repeat,sign_id,actual,predicted\n";
  for (const PredictionRow& r : rows)
    os << to_string(r.engine) << ',' << r.train_size << ',' << r.repeat_index
       << ',' << r.sign_id << ',' << (r.actual ? "pos" : "neg") << ','
       << (r.predicted ? "pos" : "neg") << '\n';
  return os.str();
}

std::vector<VariantReport> robustness_eval(
    const std::vector<logic::Clause>& hypothesis,
    const std::vector<logic::Clause>& shared,
    const std::map<std::string, std::vector<scene::DatasetItem>>& variants,
    const std::vector<std::string>& lexicon, long depth_bound) {
  std::vector<VariantReport> out;
  for (const auto& [variant, items] : variants) {
    VariantReport rep;
    rep.variant = variant;
    for (const scene::DatasetItem& it : items) {
      const facts::Extraction ex = facts::extract(it.raster);
      logic::Program bk;
      bk.add_all(shared);
      bk.add_all(facts::emit_facts(it.spec.sign_id, ex, lexicon));
      bk.add(facts::sign_fact(it.spec.sign_id));
      const bool predicted =
          !hypothesis.empty() &&
          logic::covers(bk, hypothesis, stop_example(it.spec.sign_id),
                        depth_bound);
      if (predicted == it.positive) ++rep.correct;
      ++rep.items;
    }
    rep.accuracy = rep.items > 0 ? static_cast<double>(rep.correct) /
                                       static_cast<double>(rep.items)
                                 : 0;
    out.push_back(std::move(rep));
  }
  return out;
}

std::string robustness_csv(const std::vector<VariantReport>& reports) {
  std::ostringstream os;
  os << "variant,items,correct,accuracy\n";
  for (const VariantReport& r : reports)
    os << r.variant << ',' << r.items << ',' << r.correct << ','
       << format_double(r.accuracy) << '\n';
  return os.str();
}

std::string plot(const std::string& csv) {
  std::istringstream is(csv);
  std::string line;
  if (!std::getline(is, line)) throw MalformedCsv("empty CSV");
  const std::vector<std::string> header = csv_split(line);
  if (header.size() < 4 || header[0] != "engine" || header[1] != "n" ||
      header[3] != "accuracy")
    throw MalformedCsv("unexpected header: " + line);

  // Means per (engine, n) from the per-repeat rows.
  std::map<std::string, std::map<int, std::pair<double, long>>> sums;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> f = csv_split(line);
    if (f.size() < 4) throw MalformedCsv("short row: " + line);
    if (f[2] == "mean" || f[2] == "stddev") continue;  // summary rows
    int n = 0;
    double acc = 0;
    try {
      n = std::stoi(f[1]);
      acc = std::stod(f[3]);
    } catch (const std::exception&) {
      throw MalformedCsv("non-numeric row: " + line);
    }
    auto& cell = sums[f[0]][n];
    cell.first += acc;
    cell.second += 1;
  }
  if (sums.empty()) throw MalformedCsv("no data rows");

  int nmin = INT32_MAX, nmax = INT32_MIN;
  for (const auto& [eng, by_n] : sums)
    for (const auto& [n, cell] : by_n) {
      nmin = std::min(nmin, n);
      nmax = std::max(nmax, n);
    }

  const double left = 60, right = 620, top = 20, bottom = 400;
  auto xpos = [&](int n) {
    if (nmax == nmin) return (left + right) / 2;
    return left + (right - left) * (n - nmin) / static_cast<double>(nmax - nmin);
  };
  auto ypos = [&](double acc) { return bottom - (bottom - top) * acc; };
  auto fmt = [](double v) { return format_double(v, 1); };

  static const std::map<std::string, std::string> palette = {
      {"mil", "#1f77b4"}, {"mdie", "#d62728"}};
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"460\" "
        "viewBox=\"0 0 640 460\">\n";
  os << "<rect width=\"640\" height=\"460\" fill=\"white\"/>\n";
  os << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(bottom) << "\" x2=\""
     << fmt(right) << "\" y2=\"" << fmt(bottom)
     << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  os << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\""
     << fmt(left) << "\" y2=\"" << fmt(bottom)
     << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
  for (double acc : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    os << "<text x=\"" << fmt(left - 8) << "\" y=\"" << fmt(ypos(acc) + 4)
       << "\" font-size=\"12\" text-anchor=\"end\">" << format_double(acc, 2)
       << "</text>\n";
  }
  std::vector<int> xs;
  for (const auto& [eng, by_n] : sums)
    for (const auto& [n, cell] : by_n) xs.push_back(n);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  for (int n : xs)
    os << "<text x=\"" << fmt(xpos(n)) << "\" y=\"" << fmt(bottom + 18)
       << "\" font-size=\"12\" text-anchor=\"middle\">" << n << "</text>\n";
  os << "<text x=\"" << fmt((left + right) / 2) << "\" y=\"" << fmt(bottom + 38)
     << "\" font-size=\"13\" text-anchor=\"middle\">training examples per "
        "class</text>\n";

  // Baseline.
  os << "<polyline fill=\"none\" stroke=\"#888888\" stroke-width=\"1\" "
        "stroke-dasharray=\"6,4\" points=\""
     << fmt(left) << ',' << fmt(ypos(0.5)) << ' ' << fmt(right) << ','
     << fmt(ypos(0.5)) << "\"/>\n";

  double legend_y = top + 14;
  for (const auto& [eng, by_n] : sums) {
    std::string color = "#2ca02c";
    if (auto it = palette.find(eng); it != palette.end()) color = it->second;
    os << "<polyline fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"2\" points=\"";
    bool first = true;
    for (const auto& [n, cell] : by_n) {
      if (!first) os << ' ';
      first = false;
      os << fmt(xpos(n)) << ',' << fmt(ypos(cell.first / cell.second));
    }
    os << "\"/>\n";
    os << "<text x=\"" << fmt(right - 100) << "\" y=\"" << fmt(legend_y)
       << "\" font-size=\"13\" fill=\"" << color << "\">" << eng << "</text>\n";
    legend_y += 18;
  }
  os << "</svg>\n";
  return os.str();
}

std::optional<std::vector<logic::Clause>> learn_once(
    Engine engine, const logic::Program& bk, const logic::ExampleSet& examples,
    long depth_bound, int timeout_ms) {
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  if (engine == Engine::Mil) {
    mil::MILConfig mc;
    mc.depth_bound = depth_bound;
    mc.deadline = deadline;
    return mil_learn(bk, examples, default_metarules(), mc);
  }
  mdie::SearchConfig sc;
  sc.depth_bound = depth_bound;
  sc.deadline = deadline;
  mdie::Hypothesis h = mdie::cover_loop(bk, examples, default_modes(), sc);
  if (h.clauses.empty()) return std::nullopt;
  return h.clauses;
}

}  // namespace signlp::experiment
