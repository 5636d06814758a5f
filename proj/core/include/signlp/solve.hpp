#pragma once

#include <functional>

#include "signlp/unify.hpp"

namespace signlp::logic {

inline constexpr long kDefaultDepthBound = 100;

// Depth-bounded SLD resolution, top-down, clauses tried in program order and
// body goals left to right. The bound counts resolution steps along one
// derivation, not proof-tree height. Enumeration is deterministic; goals
// unprovable within the bound simply yield no answers.
//
// `yield` receives each answer substitution projected onto the goal
// variables; returning true stops the enumeration early.
void solve(const Program& program, const std::vector<Atom>& goals, long depth_bound,
           const std::function<bool(const Subst&)>& yield);

// Collects up to max_answers answers.
std::vector<Subst> prove(const Program& program, const std::vector<Atom>& goals,
                         long depth_bound,
                         std::size_t max_answers = static_cast<std::size_t>(-1));

// True iff bk + hypothesis proves the ground example within the bound.
bool covers(const Program& bk, const std::vector<Clause>& hypothesis,
            const Atom& example, long depth_bound = kDefaultDepthBound);

}  // namespace signlp::logic
