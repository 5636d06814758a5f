#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "signlp/metarule.hpp"
#include "signlp/modes.hpp"
#include "signlp/term.hpp"

namespace signlp::text {

// Position-carrying parse failure; line and column are 1-based and point
// into the original source.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, std::string expected,
             std::string found);

  std::size_t line;
  std::size_t column;
  std::string expected;
  std::string found;
};

class UnknownPlacemarker : public ParseError {
 public:
  using ParseError::ParseError;
};

class DuplicateMetarule : public std::runtime_error {
 public:
  explicit DuplicateMetarule(const std::string& name);
};

// Grammar shared by all file kinds: `%` comments to end of line,
// whitespace-insensitive, identifiers starting uppercase (or `_`) are
// variables, lowercase- or digit-initial are constants. Every declaration
// ends with a period.

// `.lp`: facts, rules, and hypotheses.
logic::Program parse_program(const std::string& src);
std::vector<logic::Clause> parse_clauses(const std::string& src);
std::string serialize(const logic::Program& p);
std::string serialize(const std::vector<logic::Clause>& cs);

// `.ex`: lines of `pos(atom).` / `neg(atom).`
logic::ExampleSet parse_examples(const std::string& src);
std::string serialize(const logic::ExampleSet& es);

// `.modes`: `modeh(recall, scheme).` / `modeb(recall, scheme).`
std::vector<mdie::ModeDecl> parse_modes(const std::string& src);
std::string serialize(const std::vector<mdie::ModeDecl>& modes);

// `.mrules`: `name: P(x,y) :- Q(x,z), R(z,y).` Uppercase identifiers in
// predicate position are second-order variables.
std::vector<mil::Metarule> parse_metarules(const std::string& src);
std::string serialize(const std::vector<mil::Metarule>& rules);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace signlp::text
