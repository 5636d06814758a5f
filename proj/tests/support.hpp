// Shared test helpers: a bottom-up least-fixpoint evaluator used as an
// independent oracle for the SLD prover, plus random program/term
// generators.

#pragma once

#include <map>
#include <string>
#include <vector>

#include "signlp/rng.hpp"
#include "signlp/term.hpp"
#include "signlp/unify.hpp"

namespace testsupport {

using signlp::Rng;
using signlp::logic::Atom;
using signlp::logic::Clause;
using signlp::logic::Program;
using signlp::logic::Subst;
using signlp::logic::Term;

// Ground-truth closure for function-free definite programs. Per derived
// atom, `cost` records the minimum number of resolution steps any SLD
// derivation of it needs (1 for the clause plus the cost of each body atom),
// which yields a safe depth bound for the top-down prover.
struct Fixpoint {
  std::map<Atom, long> cost;
};

inline Fixpoint least_fixpoint(const Program& p,
                               const std::vector<std::string>& consts) {
  Fixpoint fp;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Clause& cl : p.clauses()) {
      std::vector<std::string> vars;
      signlp::logic::collect_vars(cl, vars);
      std::vector<std::size_t> idx(vars.size(), 0);
      while (true) {
        Subst s;
        for (std::size_t i = 0; i < vars.size(); ++i)
          s.bind(vars[i], Term::constant(consts[idx[i]]));
        const Clause g = s.apply(cl);
        long body_cost = 0;
        bool all_true = true;
        for (const Atom& b : g.body) {
          auto it = fp.cost.find(b);
          if (it == fp.cost.end()) {
            all_true = false;
            break;
          }
          body_cost += it->second;
        }
        if (all_true) {
          const long total = 1 + body_cost;
          auto it = fp.cost.find(g.head);
          if (it == fp.cost.end() || total < it->second) {
            fp.cost[g.head] = total;
            changed = true;
          }
        }
        std::size_t k = 0;
        for (; k < idx.size(); ++k) {
          if (++idx[k] < consts.size()) break;
          idx[k] = 0;
        }
        if (k == idx.size()) break;
      }
    }
  }
  return fp;
}

// Random function-free program: up to 3 predicates (arity 1-2), up to 4
// constants, up to 6 clauses with 0-2 body literals.
struct RandomProgram {
  Program program;
  std::vector<std::string> consts;
  std::vector<std::pair<std::string, std::size_t>> preds;
};

inline RandomProgram random_program(Rng& rng) {
  static const std::vector<std::string> pred_names = {"p", "q", "r"};
  static const std::vector<std::string> var_names = {"X", "Y", "Z"};
  RandomProgram rp;
  const int n_preds = static_cast<int>(rng.range(1, 3));
  const int n_consts = static_cast<int>(rng.range(1, 4));
  for (int i = 0; i < n_preds; ++i)
    rp.preds.emplace_back(pred_names[i], static_cast<std::size_t>(rng.range(1, 2)));
  for (int i = 0; i < n_consts; ++i) rp.consts.push_back(std::string(1, char('a' + i)));

  auto random_arg = [&](bool allow_var) -> Term {
    if (allow_var && rng.below(2) == 0)
      return Term::var(var_names[rng.below(var_names.size())]);
    return Term::constant(rp.consts[rng.below(rp.consts.size())]);
  };
  auto random_atom = [&](bool allow_var) -> Atom {
    const auto& [name, arity] = rp.preds[rng.below(rp.preds.size())];
    std::vector<Term> args;
    for (std::size_t i = 0; i < arity; ++i) args.push_back(random_arg(allow_var));
    return Atom{name, std::move(args)};
  };

  const int n_clauses = static_cast<int>(rng.range(1, 6));
  for (int i = 0; i < n_clauses; ++i) {
    Clause cl;
    cl.head = random_atom(true);
    const int n_body = static_cast<int>(rng.range(0, 2));
    for (int b = 0; b < n_body; ++b) cl.body.push_back(random_atom(true));
    rp.program.add(std::move(cl));
  }
  return rp;
}

// Random term over a small signature, depth <= `depth`.
inline Term random_term(Rng& rng, int depth) {
  static const std::vector<std::string> vars = {"X", "Y", "Z"};
  static const std::vector<std::string> consts = {"a", "b", "c"};
  static const std::vector<std::string> funs = {"f", "g"};
  const std::uint64_t pick = rng.below(depth > 0 ? 3 : 2);
  if (pick == 0) return Term::var(vars[rng.below(vars.size())]);
  if (pick == 1) return Term::constant(consts[rng.below(consts.size())]);
  const std::string& fn = funs[rng.below(funs.size())];
  const int arity = static_cast<int>(rng.range(1, 2));
  std::vector<Term> args;
  for (int i = 0; i < arity; ++i) args.push_back(random_term(rng, depth - 1));
  return Term::compound(fn, std::move(args));
}

}  // namespace testsupport
