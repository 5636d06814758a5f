#include "signlp/solve.hpp"

namespace signlp::logic {

namespace {

struct Engine {
  const Program& program;
  const std::function<bool(const Subst&)>& yield;
  const std::vector<std::string>& goal_vars;
  long fresh = 0;

  // Returns true when enumeration should stop.
  bool run(const std::vector<Atom>& goals, std::size_t next, const Subst& s,
           long depth_left) {
    if (next == goals.size()) return yield(s.project(goal_vars));
    if (depth_left <= 0) return false;
    const Atom goal = s.apply(goals[next]);
    for (std::size_t idx : program.candidates(goal)) {
      const Clause& c = program.clauses()[idx];
      Clause renamed = c.is_fact() && c.head.ground() ? c : standardize_apart(c, fresh);
      auto s2 = unify(goal, renamed.head, s);
      if (!s2) continue;
      if (renamed.body.empty()) {
        if (run(goals, next + 1, *s2, depth_left - 1)) return true;
      } else {
        std::vector<Atom> rest;
        rest.reserve(renamed.body.size() + goals.size() - next - 1);
        rest.insert(rest.end(), renamed.body.begin(), renamed.body.end());
        rest.insert(rest.end(), goals.begin() + static_cast<long>(next) + 1,
                    goals.end());
        if (run(rest, 0, *s2, depth_left - 1)) return true;
      }
    }
    return false;
  }
};

}  // namespace

void solve(const Program& program, const std::vector<Atom>& goals, long depth_bound,
           const std::function<bool(const Subst&)>& yield) {
  std::vector<std::string> vars;
  for (const Atom& g : goals) collect_vars(g, vars);
  Engine e{program, yield, vars};
  e.run(goals, 0, Subst{}, depth_bound);
}

std::vector<Subst> prove(const Program& program, const std::vector<Atom>& goals,
                         long depth_bound, std::size_t max_answers) {
  std::vector<Subst> answers;
  solve(program, goals, depth_bound, [&](const Subst& s) {
    answers.push_back(s);
    return answers.size() >= max_answers;
  });
  return answers;
}

bool covers(const Program& bk, const std::vector<Clause>& hypothesis,
            const Atom& example, long depth_bound) {
  const Program* p = &bk;
  Program combined;
  if (!hypothesis.empty()) {
    combined = bk;
    combined.add_all(hypothesis);
    p = &combined;
  }
  bool found = false;
  solve(*p, {example}, depth_bound, [&](const Subst&) {
    found = true;
    return true;
  });
  return found;
}

}  // namespace signlp::logic
