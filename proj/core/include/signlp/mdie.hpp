#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <stdexcept>

#include "signlp/modes.hpp"
#include "signlp/solve.hpp"

namespace signlp::mdie {

class NoHeadMode : public std::runtime_error {
 public:
  explicit NoHeadMode(const std::string& pred);
};

class SeedNotGround : public std::runtime_error {
 public:
  explicit SeedNotGround(const std::string& atom);
};

class NoConsistentClause : public std::runtime_error {
 public:
  NoConsistentClause();
};

class Timeout : public std::runtime_error {
 public:
  Timeout() : std::runtime_error("learning timed out") {}
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

struct SearchConfig {
  std::size_t max_body_literals = 4;
  long noise = 0;            // tolerated covered negatives
  std::size_t max_nodes = 5000;
  int variable_depth = 2;
  long depth_bound = logic::kDefaultDepthBound;
  Deadline deadline;
};

// One saturated body literal with its variable chaining roles.
struct BottomLiteral {
  logic::Atom lifted;
  std::vector<std::string> in_vars;
  std::vector<std::string> out_vars;
};

// Most specific clause for a seed under the modes: every body literal,
// grounded by the saturation bindings, is true in the background knowledge.
struct BottomClause {
  logic::Atom head;
  std::vector<std::string> head_input_vars;
  std::vector<BottomLiteral> body;
  std::map<std::string, std::string> var_types;
  std::map<std::string, int> depth_of;

  logic::Clause to_clause() const;
};

// One record per clause evaluated by the search, for the JSON-lines trace.
struct SearchNode {
  logic::Clause clause;
  long pos_covered = 0;
  long neg_covered = 0;
  long score = 0;
};
using TraceSink = std::function<void(const SearchNode&)>;

struct ScoredClause {
  logic::Clause clause;
  long pos_covered = 0;
  long neg_covered = 0;
  long score = 0;
};

struct Hypothesis {
  std::vector<logic::Clause> clauses;
  std::vector<logic::Atom> uncovered_positives;
};

// Saturates a ground seed into its bottom clause: per body mode and
// permissible input binding at depth <= variable_depth, up to `recall` ground
// instantiations true in bk, lifted to variables (+/-) and constants (#).
// Literal order is deterministic: mode order, then BK fact order.
BottomClause saturate(const logic::Atom& seed, const logic::Program& bk,
                      const std::vector<ModeDecl>& modes,
                      const SearchConfig& config = {});

// Best-first search over chain-valid ordered subsets of the bottom body.
// Score = pos covered - neg covered - literal count; ties broken by fewer
// literals, then generation order. Throws NoConsistentClause when every
// candidate covers more than `noise` negatives or no positive.
ScoredClause search_clause(const BottomClause& bottom, const logic::Program& bk,
                           const logic::ExampleSet& examples,
                           const SearchConfig& config = {},
                           const TraceSink& trace = nullptr);

// Greedy cover removal over the positives, in example order. Positives for
// which no consistent clause exists are reported, not raised.
Hypothesis cover_loop(const logic::Program& bk, const logic::ExampleSet& examples,
                      const std::vector<ModeDecl>& modes,
                      const SearchConfig& config = {},
                      const TraceSink& trace = nullptr);

}  // namespace signlp::mdie
