#pragma once

#include <chrono>
#include <optional>
#include <stdexcept>

#include "signlp/metarule.hpp"
#include "signlp/solve.hpp"

namespace signlp::mil {

class UnboundSecondOrderVariable : public std::runtime_error {
 public:
  explicit UnboundSecondOrderVariable(const std::string& var);
};

class Timeout : public std::runtime_error {
 public:
  Timeout() : std::runtime_error("learning timed out") {}
};

using Deadline = std::optional<std::chrono::steady_clock::time_point>;

struct MILConfig {
  int max_clauses = 4;          // iterative deepening limit
  long depth_bound = logic::kDefaultDepthBound;  // resolution steps per derivation
  bool enable_invention = false;
  std::string invented_prefix;  // defaults to "<target>_"
  Deadline deadline;            // throws Timeout when exceeded
};

// Projects completed metarule instantiations onto first-order clauses,
// ordered by metarule name then bindings.
std::vector<logic::Clause> project(const std::vector<MetaSub>& metasubs,
                                   const std::vector<Metarule>& metarules);

// Meta-interpretive learner. Iteratively deepens over the number of clauses;
// returns the first hypothesis such that bk + H proves every positive and no
// negative, or nullopt. Deterministic given input order.
//
// When every example is a binary atom with the same constant second argument
// (traffic_sign(X, stop_sign) style), learning runs over an internal monadic
// target and the result is re-expressed with the original binary head.
std::optional<std::vector<logic::Clause>> mil_learn(
    const logic::Program& bk, const logic::ExampleSet& examples,
    const std::vector<Metarule>& metarules, const MILConfig& config = {});

// Abductive proof of a single goal: each solution pairs an answer
// substitution with a store of at most `remaining` newly abduced metarule
// instantiations (plus whatever `store` already held). Exposed for tests;
// mil_learn drives it over full example sets.
struct MetaProofResult {
  logic::Subst subst;
  std::vector<MetaSub> store;
};
std::vector<MetaProofResult> meta_prove(const logic::Atom& goal,
                                        const logic::Program& bk,
                                        const std::vector<Metarule>& metarules,
                                        const std::vector<MetaSub>& store,
                                        int remaining,
                                        const MILConfig& config = {},
                                        std::size_t max_solutions = 64);

}  // namespace signlp::mil
