#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "signlp/term.hpp"

namespace signlp::mil {

// One atom schema inside a metarule: a second-order variable in predicate
// position plus first-order argument variables. Arity is 1 or 2.
struct AtomTemplate {
  std::string so_var;                // P, Q, R, ...
  std::vector<std::string> fo_vars;  // x, y, z, ...

  bool operator==(const AtomTemplate&) const = default;
};

// Second-order clause template. `recursive` marks templates whose body
// reuses the head predicate variable (Table-2-style Recursion).
struct Metarule {
  std::string name;
  AtomTemplate head;
  std::vector<AtomTemplate> body;

  bool recursive() const {
    for (const auto& b : body)
      if (b.so_var == head.so_var) return true;
    return false;
  }

  // Distinct second-order variables in occurrence order.
  std::vector<std::string> so_vars() const {
    std::vector<std::string> out{head.so_var};
    for (const auto& b : body)
      if (std::find(out.begin(), out.end(), b.so_var) == out.end())
        out.push_back(b.so_var);
    return out;
  }

  bool operator==(const Metarule&) const = default;
};

// Predicate-symbol bindings for one metarule instance. When the target is
// monadic and the template head is dyadic, the dropped head variable is
// captured as `curried`: a constant in a completed hypothesis, possibly a
// still-unbound variable mid-search.
struct MetaSub {
  std::string metarule;
  std::map<std::string, std::string> preds;  // second-order var -> predicate
  std::optional<logic::Term> curried;

  bool operator==(const MetaSub&) const = default;
};

}  // namespace signlp::mil
