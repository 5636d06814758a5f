#pragma once

#include <functional>
#include <optional>

#include "signlp/term.hpp"

namespace signlp::logic {

// Variable bindings. Stored in triangular form; apply() resolves chains
// fully, so the applied result is idempotent.
class Subst {
 public:
  Subst() = default;

  bool bound(const std::string& var) const { return b_.count(var) != 0; }
  void bind(const std::string& var, Term t);

  // Follows variable chains until a non-variable or unbound variable.
  const Term& walk(const Term& t) const;

  Term apply(const Term& t) const;
  Atom apply(const Atom& a) const;
  Clause apply(const Clause& c) const;

  const std::map<std::string, Term>& bindings() const { return b_; }
  std::size_t size() const { return b_.size(); }
  bool empty() const { return b_.empty(); }

  // Restriction to the given variables, fully resolved.
  Subst project(const std::vector<std::string>& vars) const;

  bool operator==(const Subst&) const = default;

 private:
  std::map<std::string, Term> b_;
};

// Most general unifier, extending `s`. Occurs check enabled: X never unifies
// with a compound containing X.
std::optional<Subst> unify(const Term& a, const Term& b, Subst s = {});
std::optional<Subst> unify(const Atom& a, const Atom& b, Subst s = {});

// Renames every variable in the clause to a fresh "_<n>" name drawn from the
// counter. Counters increase monotonically within a proof, so renamed
// clauses never collide.
Clause standardize_apart(const Clause& c, long& counter);

}  // namespace signlp::logic
