#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace signlp::logic {

// First-order term: variable, constant, or compound. Arity is part of a
// compound's identity; constants (including integers, which carry no
// arithmetic) are plain symbols.
struct Term {
  enum class Kind { Var, Const, Compound };

  Kind kind = Kind::Const;
  std::string name;        // variable name, constant symbol, or functor
  std::vector<Term> args;  // Compound only, arity >= 1

  static Term var(std::string n) { return Term{Kind::Var, std::move(n), {}}; }
  static Term constant(std::string n) { return Term{Kind::Const, std::move(n), {}}; }
  static Term compound(std::string f, std::vector<Term> a) {
    return Term{Kind::Compound, std::move(f), std::move(a)};
  }

  bool is_var() const { return kind == Kind::Var; }
  bool is_const() const { return kind == Kind::Const; }
  bool is_compound() const { return kind == Kind::Compound; }
  bool ground() const;

  bool operator==(const Term&) const = default;
  bool operator<(const Term& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (name != o.name) return name < o.name;
    return std::lexicographical_compare(args.begin(), args.end(), o.args.begin(),
                                        o.args.end());
  }
};

struct Atom {
  std::string pred;
  std::vector<Term> args;

  std::size_t arity() const { return args.size(); }
  bool ground() const;

  bool operator==(const Atom&) const = default;
  bool operator<(const Atom& o) const {
    if (pred != o.pred) return pred < o.pred;
    return std::lexicographical_compare(args.begin(), args.end(), o.args.begin(),
                                        o.args.end());
  }
};

// Definite clause: exactly one head atom, no negation in the body. A fact is
// a clause with an empty body.
struct Clause {
  Atom head;
  std::vector<Atom> body;

  bool is_fact() const { return body.empty(); }
  bool operator==(const Clause&) const = default;
  bool operator<(const Clause& o) const {
    if (!(head == o.head)) return head < o.head;
    return std::lexicographical_compare(body.begin(), body.end(), o.body.begin(),
                                        o.body.end());
  }
};

std::string to_string(const Term& t);
std::string to_string(const Atom& a);
std::string to_string(const Clause& c);  // includes the trailing period

// Collects variable names in first-occurrence order.
void collect_vars(const Term& t, std::vector<std::string>& out);
void collect_vars(const Atom& a, std::vector<std::string>& out);
void collect_vars(const Clause& c, std::vector<std::string>& out);

// Renames a clause's variables to A, B, C, ... in first-occurrence order.
Clause canonicalize_vars(const Clause& c);

// True when the clauses are identical up to a consistent variable renaming.
bool alpha_equivalent(const Clause& a, const Clause& b);

// Clause store with deterministic iteration order. Ground facts are
// additionally indexed by (predicate, arity, first-argument constant).
class Program {
 public:
  Program() = default;

  void add(Clause c);
  void add_all(const std::vector<Clause>& cs);

  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }

  // Head predicates in first-occurrence order.
  const std::vector<std::pair<std::string, std::size_t>>& predicates() const {
    return pred_order_;
  }

  // Indices of clauses whose head may resolve with the goal, in program
  // order. Uses the fact index when the goal's first argument is a constant
  // and every matching clause is a ground fact.
  std::vector<std::size_t> candidates(const Atom& goal) const;

  bool has_fact(const Atom& a) const;

 private:
  using PredKey = std::pair<std::string, std::size_t>;
  std::vector<Clause> clauses_;
  std::vector<PredKey> pred_order_;
  std::map<PredKey, std::vector<std::size_t>> by_pred_;
  std::map<PredKey, bool> facts_only_;
  std::map<std::tuple<std::string, std::size_t, std::string>, std::vector<std::size_t>>
      fact_index_;
};

// Ground positive/negative example atoms; the two sets are disjoint.
struct ExampleSet {
  std::vector<Atom> positives;
  std::vector<Atom> negatives;
};

}  // namespace signlp::logic
