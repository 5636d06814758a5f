#include "signlp/mdie.hpp"

#include <algorithm>
#include <set>

namespace signlp::mdie {

using logic::Atom;
using logic::Clause;
using logic::Program;
using logic::Term;

NoHeadMode::NoHeadMode(const std::string& pred)
    : std::runtime_error("no head mode for predicate: " + pred) {}

SeedNotGround::SeedNotGround(const std::string& atom)
    : std::runtime_error("seed example is not ground: " + atom) {}

NoConsistentClause::NoConsistentClause()
    : std::runtime_error("no clause within the noise bound covers a positive") {}

namespace {

constexpr std::size_t kMaxBottomLiterals = 256;
constexpr std::size_t kUnboundedRecallCap = 64;

std::string nth_var(std::size_t i) {
  std::string name(1, static_cast<char>('A' + i % 26));
  if (i >= 26) name += std::to_string(i / 26);
  return name;
}

void check_deadline(const SearchConfig& cfg, long& tick) {
  if (cfg.deadline && (tick++ & 0xff) == 0 &&
      std::chrono::steady_clock::now() > *cfg.deadline)
    throw Timeout();
}

}  // namespace

Clause BottomClause::to_clause() const {
  Clause c;
  c.head = head;
  for (const BottomLiteral& l : body) c.body.push_back(l.lifted);
  return c;
}

BottomClause saturate(const Atom& seed, const Program& bk,
                      const std::vector<ModeDecl>& modes, const SearchConfig& config) {
  if (!seed.ground()) throw SeedNotGround(logic::to_string(seed));
  const ModeDecl* head_mode = nullptr;
  for (const ModeDecl& m : modes) {
    if (m.is_head && m.pred == seed.pred && m.arity() == seed.arity()) {
      head_mode = &m;
      break;
    }
  }
  if (!head_mode) throw NoHeadMode(seed.pred);

  BottomClause bottom;
  // (constant, type) -> variable; insertion order drives variable naming.
  std::map<std::pair<std::string, std::string>, std::string> var_of;
  struct Avail {
    std::string constant;
    std::string type;
    std::string var;
    int depth;
  };
  std::vector<Avail> available;
  auto lift = [&](const std::string& constant, const std::string& type,
                  int depth) -> std::string {
    auto key = std::make_pair(constant, type);
    auto it = var_of.find(key);
    if (it != var_of.end()) return it->second;
    std::string v = nth_var(var_of.size());
    var_of[key] = v;
    bottom.var_types[v] = type;
    bottom.depth_of[v] = depth;
    available.push_back({constant, type, v, depth});
    return v;
  };

  bottom.head.pred = seed.pred;
  for (std::size_t i = 0; i < head_mode->slots.size(); ++i) {
    const Placemarker& pm = head_mode->slots[i];
    const Term& arg = seed.args[i];
    if (pm.pol == Placemarker::Pol::Constant) {
      bottom.head.args.push_back(arg);
    } else {
      std::string v = lift(arg.name, pm.type, 0);
      bottom.head.args.push_back(Term::var(v));
      if (pm.pol == Placemarker::Pol::Input) bottom.head_input_vars.push_back(v);
    }
  }

  std::set<Atom> seen_literals;
  std::set<std::pair<std::size_t, std::vector<std::string>>> tried;
  long tick = 0;

  for (int depth = 1; depth <= config.variable_depth; ++depth) {
    for (std::size_t mi = 0; mi < modes.size(); ++mi) {
      const ModeDecl& mode = modes[mi];
      if (mode.is_head) continue;

      // Enumerate assignments of input slots to available constants of the
      // right type, seen at an earlier depth.
      std::vector<std::size_t> input_slots;
      for (std::size_t i = 0; i < mode.slots.size(); ++i)
        if (mode.slots[i].pol == Placemarker::Pol::Input) input_slots.push_back(i);

      std::vector<std::size_t> choice(input_slots.size(), 0);
      std::vector<const Avail*> binding(input_slots.size(), nullptr);
      std::function<void(std::size_t)> enumerate = [&](std::size_t k) {
        if (bottom.body.size() >= kMaxBottomLiterals) return;
        check_deadline(config, tick);
        if (k == input_slots.size()) {
          std::vector<std::string> combo;
          for (const Avail* a : binding) combo.push_back(a->constant);
          if (!tried.insert({mi, combo}).second) return;

          Atom query{mode.pred, {}};
          int qv = 0;
          for (std::size_t i = 0, in = 0; i < mode.slots.size(); ++i) {
            if (mode.slots[i].pol == Placemarker::Pol::Input)
              query.args.push_back(Term::constant(binding[in++]->constant));
            else
              query.args.push_back(Term::var("_Q" + std::to_string(qv++)));
          }
          std::size_t cap = mode.recall == kRecallUnbounded
                                ? kUnboundedRecallCap
                                : static_cast<std::size_t>(mode.recall);
          auto answers = logic::prove(bk, {query}, config.depth_bound, cap);
          for (const logic::Subst& s : answers) {
            Atom ground = s.apply(query);
            if (!ground.ground()) continue;
            BottomLiteral lit;
            lit.lifted.pred = mode.pred;
            for (std::size_t i = 0; i < mode.slots.size(); ++i) {
              const Placemarker& pm = mode.slots[i];
              const std::string& c = ground.args[i].name;
              switch (pm.pol) {
                case Placemarker::Pol::Constant:
                  lit.lifted.args.push_back(Term::constant(c));
                  break;
                case Placemarker::Pol::Input: {
                  std::string v = lift(c, pm.type, depth);
                  lit.lifted.args.push_back(Term::var(v));
                  lit.in_vars.push_back(v);
                  break;
                }
                case Placemarker::Pol::Output: {
                  std::string v = lift(c, pm.type, depth);
                  lit.lifted.args.push_back(Term::var(v));
                  lit.out_vars.push_back(v);
                  break;
                }
              }
            }
            if (seen_literals.insert(lit.lifted).second &&
                bottom.body.size() < kMaxBottomLiterals)
              bottom.body.push_back(std::move(lit));
          }
          return;
        }
        const std::string& want = mode.slots[input_slots[k]].type;
        std::size_t n = available.size();  // snapshot; new vars belong to later depths
        for (std::size_t ai = 0; ai < n; ++ai) {
          if (available[ai].type != want || available[ai].depth > depth - 1) continue;
          binding[k] = &available[ai];
          enumerate(k + 1);
        }
      };
      enumerate(0);
    }
  }
  return bottom;
}

namespace {

struct Node {
  std::vector<std::size_t> lits;
  long pos = 0;
  long neg = 0;
  long score = 0;
  std::size_t gen = 0;

  // Ordering for both the frontier and the final tie-break: higher score
  // first, then fewer literals, then earlier generation.
  bool better_than(const Node& o) const {
    if (score != o.score) return score > o.score;
    if (lits.size() != o.lits.size()) return lits.size() < o.lits.size();
    return gen < o.gen;
  }
};

}  // namespace

ScoredClause search_clause(const BottomClause& bottom, const Program& bk,
                           const logic::ExampleSet& examples,
                           const SearchConfig& config, const TraceSink& trace) {
  long tick = 0;
  std::size_t evaluated = 0;

  auto make_clause = [&](const std::vector<std::size_t>& lits) {
    Clause c;
    c.head = bottom.head;
    for (std::size_t i : lits) c.body.push_back(bottom.body[i].lifted);
    return c;
  };

  auto evaluate = [&](Node& n) {
    check_deadline(config, tick);
    Clause c = make_clause(n.lits);
    Program p = bk;
    p.add(c);
    n.pos = n.neg = 0;
    for (const Atom& e : examples.positives) {
      bool hit = false;
      logic::solve(p, {e}, config.depth_bound, [&](const logic::Subst&) {
        hit = true;
        return true;
      });
      if (hit) ++n.pos;
    }
    for (const Atom& e : examples.negatives) {
      bool hit = false;
      logic::solve(p, {e}, config.depth_bound, [&](const logic::Subst&) {
        hit = true;
        return true;
      });
      if (hit) ++n.neg;
    }
    n.score = n.pos - n.neg - static_cast<long>(n.lits.size());
    ++evaluated;
    if (trace) trace({c, n.pos, n.neg, n.score});
  };

  auto chain_valid = [&](const std::vector<std::size_t>& lits,
                         std::size_t extra) -> bool {
    std::set<std::string> provided(bottom.head_input_vars.begin(),
                                   bottom.head_input_vars.end());
    for (std::size_t i : lits)
      for (const std::string& v : bottom.body[i].out_vars) provided.insert(v);
    for (const std::string& v : bottom.body[extra].in_vars)
      if (!provided.count(v)) return false;
    return true;
  };

  std::vector<Node> frontier;
  std::size_t gen = 0;

  Node root;
  root.gen = gen++;
  evaluate(root);
  frontier.push_back(root);

  std::optional<Node> best;
  auto consider = [&](const Node& n) {
    if (n.pos >= 1 && n.neg <= config.noise) {
      if (!best || n.better_than(*best)) best = n;
    }
  };
  consider(root);

  while (!frontier.empty() && evaluated < config.max_nodes) {
    auto it = std::min_element(frontier.begin(), frontier.end(),
                               [](const Node& a, const Node& b) { return a.better_than(b); });
    Node cur = *it;
    frontier.erase(it);

    if (cur.lits.size() >= config.max_body_literals) continue;
    std::size_t start = cur.lits.empty() ? 0 : cur.lits.back() + 1;
    for (std::size_t i = start; i < bottom.body.size(); ++i) {
      if (!chain_valid(cur.lits, i)) continue;
      if (evaluated >= config.max_nodes) break;
      Node child;
      child.lits = cur.lits;
      child.lits.push_back(i);
      child.gen = gen++;
      evaluate(child);
      consider(child);
      frontier.push_back(child);
    }
  }

  if (!best) throw NoConsistentClause();
  return {make_clause(best->lits), best->pos, best->neg, best->score};
}

Hypothesis cover_loop(const Program& bk, const logic::ExampleSet& examples,
                      const std::vector<ModeDecl>& modes, const SearchConfig& config,
                      const TraceSink& trace) {
  Hypothesis hyp;
  std::vector<Atom> remaining = examples.positives;

  while (!remaining.empty()) {
    const Atom seed = remaining.front();
    logic::ExampleSet current{remaining, examples.negatives};
    std::optional<ScoredClause> sc;
    try {
      BottomClause bottom = saturate(seed, bk, modes, config);
      sc = search_clause(bottom, bk, current, config, trace);
    } catch (const NoConsistentClause&) {
    } catch (const NoHeadMode&) {
    }
    if (!sc) {
      hyp.uncovered_positives.push_back(seed);
      remaining.erase(remaining.begin());
      continue;
    }
    hyp.clauses.push_back(logic::canonicalize_vars(sc->clause));
    std::vector<Atom> still;
    for (const Atom& p : remaining)
      if (!logic::covers(bk, {sc->clause}, p, config.depth_bound)) still.push_back(p);
    if (still.size() == remaining.size()) {
      // The accepted clause must cover its seed; guard against stalls anyway.
      hyp.uncovered_positives.push_back(seed);
      still.erase(std::find(still.begin(), still.end(), seed));
    }
    remaining = std::move(still);
  }
  return hyp;
}

}  // namespace signlp::mdie
