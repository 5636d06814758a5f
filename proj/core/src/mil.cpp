#include "signlp/mil.hpp"

#include <algorithm>

namespace signlp::mil {

using logic::Atom;
using logic::Clause;
using logic::Program;
using logic::Subst;
using logic::Term;

UnboundSecondOrderVariable::UnboundSecondOrderVariable(const std::string& var)
    : std::runtime_error("unbound second-order variable: " + var) {}

namespace {

struct PredRef {
  std::string name;
  std::size_t arity;
};

// Binary examples whose second argument is one shared constant are learned
// through a monadic internal target; the class constant comes back in the
// head at projection time.
struct Adaptation {
  bool monadic = false;
  std::string outer_pred;      // traffic_sign
  std::string class_constant;  // stop_sign
  std::string inner_pred;      // internal monadic target name
};

std::optional<Adaptation> detect_adaptation(const std::vector<Atom>& atoms,
                                            const Program& bk) {
  if (atoms.empty()) return std::nullopt;
  const std::string& pred = atoms[0].pred;
  if (atoms[0].arity() != 2) return std::nullopt;
  const Term& cls = atoms[0].args[1];
  if (!cls.is_const()) return std::nullopt;
  for (const Atom& a : atoms) {
    if (a.pred != pred || a.arity() != 2 || a.args[1] != cls) return std::nullopt;
  }
  Adaptation ad;
  ad.monadic = true;
  ad.outer_pred = pred;
  ad.class_constant = cls.name;
  ad.inner_pred = cls.name;
  for (const auto& [p, ar] : bk.predicates()) {
    if (p == ad.inner_pred && ar == 1) {
      ad.inner_pred += "_target";
      break;
    }
  }
  return ad;
}

struct Searcher {
  const Program& bk;
  const std::vector<Metarule>& metarules;
  const MILConfig& cfg;
  std::string target;
  std::size_t target_arity;
  std::vector<PredRef> bk_preds;          // declaration order
  std::vector<std::string> curried_pool;  // constants of unary ground BK facts
  int max_clauses_now = 1;
  long fresh = 0;
  long tick = 0;

  void check_deadline() {
    if (cfg.deadline && (tick++ & 0xfff) == 0 &&
        std::chrono::steady_clock::now() > *cfg.deadline)
      throw Timeout();
  }

  int rank(const std::string& pred) const {
    if (pred == target) return 100000;
    if (!cfg.invented_prefix.empty() && pred.rfind(cfg.invented_prefix, 0) == 0) {
      int k = std::atoi(pred.c_str() + cfg.invented_prefix.size());
      if (k > 0) return 100000 - k;
    }
    return 0;  // background predicate
  }

  const Metarule& rule_named(const std::string& name) const {
    for (const Metarule& m : metarules)
      if (m.name == name) return m;
    throw std::runtime_error("unknown metarule: " + name);
  }

  bool curried_form(const Metarule& m, std::size_t goal_arity) const {
    return goal_arity == 1 && m.head.fo_vars.size() == 2;
  }

  // Projects one metasub to a clause with fresh first-order variables; the
  // curried head variable, when present, is shared (not renamed) so every
  // use of the clause agrees on its eventual constant.
  Clause instantiate(const MetaSub& ms) {
    const Metarule& m = rule_named(ms.metarule);
    bool curried = ms.curried.has_value();
    std::map<std::string, Term> vars;
    const std::string& cvar = curried ? m.head.fo_vars[1] : "";
    auto term_for = [&](const std::string& fo) -> Term {
      if (curried && fo == cvar) return *ms.curried;
      auto it = vars.find(fo);
      if (it == vars.end())
        it = vars.emplace(fo, Term::var("_" + std::to_string(fresh++))).first;
      return it->second;
    };
    auto fill = [&](const AtomTemplate& t, bool is_head) -> Atom {
      auto it = ms.preds.find(t.so_var);
      if (it == ms.preds.end()) throw UnboundSecondOrderVariable(t.so_var);
      Atom a{it->second, {}};
      std::size_t n = t.fo_vars.size();
      if (is_head && curried) n = 1;
      for (std::size_t i = 0; i < n; ++i) a.args.push_back(term_for(t.fo_vars[i]));
      return a;
    };
    Clause c;
    c.head = fill(m.head, true);
    for (const AtomTemplate& b : m.body) c.body.push_back(fill(b, false));
    return c;
  }

  using Yield = std::function<bool(const Subst&, const std::vector<MetaSub>&, int)>;

  // Abduce a new metasub for the goal: enumerate body second-order bindings
  // over BK predicates (declaration order), the target, existing invented
  // symbols, and at most one new invented symbol.
  bool abduce(const Atom& goal, const std::vector<Atom>& goals, std::size_t next,
              const Subst& s, const std::vector<MetaSub>& store, int invented,
              long depth_left, const Yield& yield) {
    for (const Metarule& m : metarules) {
      bool curried;
      if (goal.arity() == m.head.fo_vars.size())
        curried = false;
      else if (curried_form(m, goal.arity()))
        curried = true;
      else
        continue;

      // Distinct body second-order variables needing a binding.
      std::vector<const AtomTemplate*> slots;
      std::vector<std::string> todo;
      for (const AtomTemplate& b : m.body) {
        if (b.so_var == m.head.so_var) continue;
        if (std::find(todo.begin(), todo.end(), b.so_var) == todo.end()) {
          todo.push_back(b.so_var);
          slots.push_back(&b);
        }
      }
      MetaSub ms;
      ms.metarule = m.name;
      ms.preds[m.head.so_var] = goal.pred;
      if (curried) ms.curried = Term::var("_" + std::to_string(fresh++));

      if (assign_sovars(m, ms, slots, 0, curried, goal, goals, next, s, store,
                        invented, depth_left, yield))
        return true;
    }
    return false;
  }

  bool assign_sovars(const Metarule& m, MetaSub& ms,
                     const std::vector<const AtomTemplate*>& slots, std::size_t si,
                     bool curried, const Atom& goal, const std::vector<Atom>& goals,
                     std::size_t next, const Subst& s,
                     const std::vector<MetaSub>& store, int invented, long depth_left,
                     const Yield& yield) {
    if (si == slots.size()) {
      for (const MetaSub& prev : store)
        if (prev.metarule == ms.metarule && prev.preds == ms.preds &&
            prev.curried == ms.curried)
          return false;
      std::vector<MetaSub> store2 = store;
      store2.push_back(ms);
      Clause c = instantiate(ms);
      auto s2 = logic::unify(goal, c.head, s);
      if (!s2) return false;
      std::vector<Atom> rest = c.body;
      rest.insert(rest.end(), goals.begin() + static_cast<long>(next) + 1, goals.end());
      return run(rest, 0, *s2, store2, invented, depth_left - 1, yield);
    }
    const AtomTemplate& slot = *slots[si];
    const std::size_t want_arity = slot.fo_vars.size();
    const int head_rank = rank(goal.pred);
    auto try_pred = [&](const std::string& pred, int inv2) -> bool {
      ms.preds[slot.so_var] = pred;
      bool stop = assign_sovars(m, ms, slots, si + 1, curried, goal, goals, next, s,
                                store, inv2, depth_left, yield);
      ms.preds.erase(slot.so_var);
      return stop;
    };
    for (const PredRef& p : bk_preds) {
      if (p.arity != want_arity) continue;
      if (try_pred(p.name, invented)) return true;
    }
    if (want_arity == target_arity && rank(target) < head_rank) {
      if (try_pred(target, invented)) return true;
    }
    for (int k = 1; k <= invented; ++k) {
      std::string name = cfg.invented_prefix + std::to_string(k);
      if (rank(name) < head_rank && want_arity == 2) {
        if (try_pred(name, invented)) return true;
      }
    }
    if (cfg.enable_invention && invented < max_clauses_now && want_arity == 2) {
      std::string name = cfg.invented_prefix + std::to_string(invented + 1);
      if (rank(name) < head_rank) {
        if (try_pred(name, invented + 1)) return true;
      }
    }
    return false;
  }

  bool run(const std::vector<Atom>& goals, std::size_t next, const Subst& s,
           const std::vector<MetaSub>& store, int invented, long depth_left,
           const Yield& yield) {
    check_deadline();
    if (next == goals.size()) return yield(s, store, invented);
    if (depth_left <= 0) return false;
    const Atom goal = s.apply(goals[next]);

    // (a) background clauses
    for (std::size_t idx : bk.candidates(goal)) {
      const Clause& c = bk.clauses()[idx];
      Clause renamed =
          c.is_fact() && c.head.ground() ? c : logic::standardize_apart(c, fresh);
      auto s2 = logic::unify(goal, renamed.head, s);
      if (!s2) continue;
      std::vector<Atom> rest = renamed.body;
      rest.insert(rest.end(), goals.begin() + static_cast<long>(next) + 1, goals.end());
      if (run(rest, 0, *s2, store, invented, depth_left - 1, yield)) return true;
    }

    // (b) clauses already abduced (no budget cost beyond the resolution step)
    for (const MetaSub& ms : store) {
      Clause c = instantiate(ms);
      auto s2 = logic::unify(goal, c.head, s);
      if (!s2) continue;
      std::vector<Atom> rest = c.body;
      rest.insert(rest.end(), goals.begin() + static_cast<long>(next) + 1, goals.end());
      if (run(rest, 0, *s2, store, invented, depth_left - 1, yield)) return true;
    }

    // (c) a new abduction, while budget remains
    if (static_cast<int>(store.size()) < max_clauses_now && rank(goal.pred) > 0) {
      if (abduce(goal, goals, next, s, store, invented, depth_left, yield))
        return true;
    }
    return false;
  }

  // Grounds the curried constants of a store under the proof substitution.
  // Rejects stores whose curried slot stays unbound or falls outside the
  // declared constant vocabulary.
  std::optional<std::vector<MetaSub>> materialize(const std::vector<MetaSub>& store,
                                                  const Subst& s) const {
    std::vector<MetaSub> out;
    for (const MetaSub& ms : store) {
      MetaSub g = ms;
      if (g.curried) {
        Term t = s.apply(*g.curried);
        if (!t.is_const()) return std::nullopt;
        if (std::find(curried_pool.begin(), curried_pool.end(), t.name) ==
            curried_pool.end())
          return std::nullopt;
        g.curried = t;
      }
      if (std::find(out.begin(), out.end(), g) == out.end()) out.push_back(g);
    }
    return out;
  }
};

std::vector<PredRef> bk_predicates(const Program& bk) {
  std::vector<PredRef> out;
  for (const auto& [p, ar] : bk.predicates()) out.push_back({p, ar});
  return out;
}

std::vector<std::string> unary_constants(const Program& bk) {
  std::vector<std::string> out;
  for (const Clause& c : bk.clauses()) {
    if (c.is_fact() && c.head.arity() == 1 && c.head.args[0].is_const()) {
      const std::string& v = c.head.args[0].name;
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
  }
  return out;
}

std::string metasub_sort_key(const MetaSub& ms) {
  std::string k = ms.metarule;
  for (const auto& [so, pred] : ms.preds) k += "|" + so + "=" + pred;
  if (ms.curried) k += "|" + logic::to_string(*ms.curried);
  return k;
}

}  // namespace

std::vector<Clause> project(const std::vector<MetaSub>& metasubs,
                            const std::vector<Metarule>& metarules) {
  std::vector<MetaSub> sorted = metasubs;
  std::sort(sorted.begin(), sorted.end(), [](const MetaSub& a, const MetaSub& b) {
    return metasub_sort_key(a) < metasub_sort_key(b);
  });
  static const Program empty_bk;
  static const MILConfig empty_cfg;
  Searcher sr{empty_bk, metarules, empty_cfg};
  std::vector<Clause> out;
  for (const MetaSub& ms : sorted) {
    Clause c = sr.instantiate(ms);
    if (ms.curried && ms.curried->is_var())
      throw UnboundSecondOrderVariable("curried constant of " + ms.metarule);
    out.push_back(logic::canonicalize_vars(c));
  }
  return out;
}

namespace {

// Rewrites internal monadic clauses back to the caller's binary target.
std::vector<Clause> de_adapt(std::vector<Clause> clauses, const Adaptation& ad) {
  bool inner_called = false;
  for (const Clause& c : clauses)
    for (const Atom& b : c.body)
      if (b.pred == ad.inner_pred) inner_called = true;
  if (!inner_called) {
    for (Clause& c : clauses) {
      if (c.head.pred == ad.inner_pred && c.head.arity() == 1) {
        c.head = Atom{ad.outer_pred,
                      {c.head.args[0], Term::constant(ad.class_constant)}};
      }
      c = logic::canonicalize_vars(c);
    }
    return clauses;
  }
  Clause bridge;
  bridge.head = Atom{ad.outer_pred, {Term::var("A"), Term::constant(ad.class_constant)}};
  bridge.body = {Atom{ad.inner_pred, {Term::var("A")}}};
  clauses.insert(clauses.begin(), bridge);
  return clauses;
}

struct LearnDriver {
  Searcher& sr;
  const std::vector<Atom>& positives;
  const std::vector<Atom>& negatives;
  const Program& bk;
  std::vector<MetaSub> found;
  bool ok = false;

  bool negatives_clear(const std::vector<MetaSub>& store) {
    std::vector<Clause> hyp;
    for (const MetaSub& ms : store) hyp.push_back(sr.instantiate(ms));
    for (const Atom& neg : negatives) {
      if (logic::covers(bk, hyp, neg, sr.cfg.depth_bound)) return false;
    }
    return true;
  }

  bool try_positive(std::size_t i, const std::vector<MetaSub>& store, int invented) {
    if (i == positives.size()) {
      found = store;
      ok = true;
      return true;
    }
    return sr.run({positives[i]}, 0, Subst{}, store, invented, sr.cfg.depth_bound,
                  [&](const Subst& s, const std::vector<MetaSub>& st, int inv) {
                    auto grounded = sr.materialize(st, s);
                    if (!grounded) return false;
                    if (!negatives_clear(*grounded)) return false;
                    return try_positive(i + 1, *grounded, inv);
                  });
  }
};

}  // namespace

std::optional<std::vector<Clause>> mil_learn(const Program& bk,
                                             const logic::ExampleSet& examples,
                                             const std::vector<Metarule>& metarules,
                                             const MILConfig& config) {
  if (examples.positives.empty()) return std::nullopt;
  for (const Atom& p : examples.positives)
    for (const Atom& n : examples.negatives)
      if (p == n) return std::nullopt;  // contradictory example set

  std::vector<Atom> all = examples.positives;
  all.insert(all.end(), examples.negatives.begin(), examples.negatives.end());
  auto ad = detect_adaptation(all, bk);

  std::vector<Atom> pos = examples.positives;
  std::vector<Atom> neg = examples.negatives;
  std::string target;
  std::size_t target_arity;
  if (ad) {
    for (Atom& a : pos) a = Atom{ad->inner_pred, {a.args[0]}};
    for (Atom& a : neg) a = Atom{ad->inner_pred, {a.args[0]}};
    target = ad->inner_pred;
    target_arity = 1;
  } else {
    target = examples.positives[0].pred;
    target_arity = examples.positives[0].arity();
  }

  MILConfig cfg = config;
  if (cfg.invented_prefix.empty()) cfg.invented_prefix = target + "_";

  Searcher sr{bk, metarules, cfg, target, target_arity, bk_predicates(bk),
              unary_constants(bk)};
  for (int n = 1; n <= cfg.max_clauses; ++n) {
    sr.max_clauses_now = n;
    LearnDriver driver{sr, pos, neg, bk};
    driver.try_positive(0, {}, 0);
    if (driver.ok) {
      std::vector<Clause> clauses = project(driver.found, metarules);
      if (ad) clauses = de_adapt(std::move(clauses), *ad);
      return clauses;
    }
  }
  return std::nullopt;
}

std::vector<MetaProofResult> meta_prove(const Atom& goal, const Program& bk,
                                        const std::vector<Metarule>& metarules,
                                        const std::vector<MetaSub>& store,
                                        int remaining, const MILConfig& config,
                                        std::size_t max_solutions) {
  auto ad = detect_adaptation({goal}, bk);
  Atom g = goal;
  std::string target;
  std::size_t target_arity;
  if (ad && bk.candidates(goal).empty()) {
    g = Atom{ad->inner_pred, {goal.args[0]}};
    target = ad->inner_pred;
    target_arity = 1;
  } else {
    target = goal.pred;
    target_arity = goal.arity();
  }
  MILConfig cfg = config;
  if (cfg.invented_prefix.empty()) cfg.invented_prefix = target + "_";
  Searcher sr{bk, metarules, cfg, target, target_arity, bk_predicates(bk),
              unary_constants(bk)};
  sr.max_clauses_now = static_cast<int>(store.size()) + remaining;

  std::vector<MetaProofResult> out;
  sr.run({g}, 0, Subst{}, store, 0, cfg.depth_bound,
         [&](const Subst& s, const std::vector<MetaSub>& st, int) {
           auto grounded = sr.materialize(st, s);
           if (!grounded) return false;
           out.push_back({s, *grounded});
           return out.size() >= max_solutions;
         });
  return out;
}

}  // namespace signlp::mil
