#include "signlp/text.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace signlp::text {

ParseError::ParseError(std::size_t line_, std::size_t column_, std::string expected_,
                       std::string found_)
    : std::runtime_error("parse error at " + std::to_string(line_) + ":" +
                         std::to_string(column_) + ": expected " + expected_ +
                         ", found " + found_),
      line(line_),
      column(column_),
      expected(std::move(expected_)),
      found(std::move(found_)) {}

DuplicateMetarule::DuplicateMetarule(const std::string& name)
    : std::runtime_error("duplicate metarule name: " + name) {}

namespace {

struct Token {
  enum class Kind { Ident, Var, Int, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  std::size_t line = 1;
  std::size_t col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) { advance(); }

  const Token& peek() const { return tok_; }

  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& expected) const {
    std::string found = tok_.kind == Token::Kind::End ? "end of input" : "'" + tok_.text + "'";
    throw ParseError(tok_.line, tok_.col, expected, found);
  }

  Token expect_punct(const std::string& p) {
    if (tok_.kind != Token::Kind::Punct || tok_.text != p) fail("'" + p + "'");
    return take();
  }

  bool at_punct(const std::string& p) const {
    return tok_.kind == Token::Kind::Punct && tok_.text == p;
  }

  bool done() const { return tok_.kind == Token::Kind::End; }

 private:
  void advance() {
    skip_ws();
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= src_.size()) {
      tok_.kind = Token::Kind::End;
      tok_.text.clear();
      return;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string s;
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
        s += get();
      tok_ = {Token::Kind::Int, s, tok_.line, tok_.col};
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string s;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
        s += get();
      bool var = std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_';
      tok_ = {var ? Token::Kind::Var : Token::Kind::Ident, s, tok_.line, tok_.col};
      return;
    }
    if (c == ':' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '-') {
      get();
      get();
      tok_ = {Token::Kind::Punct, ":-", tok_.line, tok_.col};
      return;
    }
    static const std::string singles = "().,:*+-#";
    if (singles.find(c) != std::string::npos) {
      tok_ = {Token::Kind::Punct, std::string(1, get()), tok_.line, tok_.col};
      return;
    }
    throw ParseError(line_, col_, "token", "'" + std::string(1, c) + "'");
  }

  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '%') {
        while (pos_ < src_.size() && src_[pos_] != '\n') get();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        get();
      } else {
        break;
      }
    }
  }

  char get() {
    char c = src_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  const std::string& src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  Token tok_;
};

logic::Term parse_term(Lexer& lx);

std::vector<logic::Term> parse_arglist(Lexer& lx) {
  lx.expect_punct("(");
  std::vector<logic::Term> args;
  args.push_back(parse_term(lx));
  while (lx.at_punct(",")) {
    lx.take();
    args.push_back(parse_term(lx));
  }
  lx.expect_punct(")");
  return args;
}

logic::Term parse_term(Lexer& lx) {
  const Token& t = lx.peek();
  switch (t.kind) {
    case Token::Kind::Var:
      return logic::Term::var(lx.take().text);
    case Token::Kind::Int:
      return logic::Term::constant(lx.take().text);
    case Token::Kind::Ident: {
      std::string name = lx.take().text;
      if (lx.at_punct("(")) return logic::Term::compound(name, parse_arglist(lx));
      return logic::Term::constant(name);
    }
    default:
      lx.fail("term");
  }
}

logic::Atom parse_atom(Lexer& lx) {
  if (lx.peek().kind != Token::Kind::Ident) lx.fail("predicate");
  std::string pred = lx.take().text;
  logic::Atom a{pred, {}};
  if (lx.at_punct("(")) a.args = parse_arglist(lx);
  return a;
}

logic::Clause parse_clause(Lexer& lx) {
  logic::Clause c;
  c.head = parse_atom(lx);
  if (lx.at_punct(":-")) {
    lx.take();
    c.body.push_back(parse_atom(lx));
    while (lx.at_punct(",")) {
      lx.take();
      c.body.push_back(parse_atom(lx));
    }
  }
  lx.expect_punct(".");
  return c;
}

long parse_recall(Lexer& lx) {
  if (lx.at_punct("*")) {
    lx.take();
    return mdie::kRecallUnbounded;
  }
  if (lx.peek().kind == Token::Kind::Int) {
    Token t = lx.take();
    long r = std::stol(t.text);
    if (r < 1) throw ParseError(t.line, t.col, "recall >= 1 or *", "'" + t.text + "'");
    return r;
  }
  lx.fail("recall >= 1 or *");
}

mdie::Placemarker parse_placemarker(Lexer& lx) {
  mdie::Placemarker pm;
  const Token& t = lx.peek();
  if (lx.at_punct("+"))
    pm.pol = mdie::Placemarker::Pol::Input;
  else if (lx.at_punct("-"))
    pm.pol = mdie::Placemarker::Pol::Output;
  else if (lx.at_punct("#"))
    pm.pol = mdie::Placemarker::Pol::Constant;
  else
    throw UnknownPlacemarker(t.line, t.col, "placemarker +, - or #",
                             "'" + t.text + "'");
  lx.take();
  if (lx.peek().kind != Token::Kind::Ident) lx.fail("type name");
  pm.type = lx.take().text;
  return pm;
}

mil::AtomTemplate parse_atom_template(Lexer& lx) {
  if (lx.peek().kind != Token::Kind::Var) lx.fail("second-order variable");
  mil::AtomTemplate t;
  t.so_var = lx.take().text;
  lx.expect_punct("(");
  while (true) {
    if (lx.peek().kind != Token::Kind::Ident) lx.fail("first-order variable");
    t.fo_vars.push_back(lx.take().text);
    if (!lx.at_punct(",")) break;
    lx.take();
  }
  lx.expect_punct(")");
  return t;
}

}  // namespace

logic::Program parse_program(const std::string& src) {
  logic::Program p;
  p.add_all(parse_clauses(src));
  return p;
}

std::vector<logic::Clause> parse_clauses(const std::string& src) {
  Lexer lx(src);
  std::vector<logic::Clause> out;
  while (!lx.done()) out.push_back(parse_clause(lx));
  return out;
}

std::string serialize(const logic::Program& p) {
  std::ostringstream os;
  for (const logic::Clause& c : p.clauses()) os << logic::to_string(c) << '\n';
  return os.str();
}

std::string serialize(const std::vector<logic::Clause>& cs) {
  std::ostringstream os;
  for (const logic::Clause& c : cs) os << logic::to_string(c) << '\n';
  return os.str();
}

logic::ExampleSet parse_examples(const std::string& src) {
  Lexer lx(src);
  logic::ExampleSet es;
  while (!lx.done()) {
    const Token& t = lx.peek();
    logic::Clause c = parse_clause(lx);
    if (!c.body.empty() || c.head.arity() != 1 || !c.head.args[0].is_compound())
      throw ParseError(t.line, t.col, "pos(atom). or neg(atom).",
                       "'" + logic::to_string(c) + "'");
    const logic::Term& inner = c.head.args[0];
    logic::Atom a{inner.name, inner.args};
    if (!a.ground())
      throw ParseError(t.line, t.col, "ground example atom", logic::to_string(a));
    if (c.head.pred == "pos")
      es.positives.push_back(std::move(a));
    else if (c.head.pred == "neg")
      es.negatives.push_back(std::move(a));
    else
      throw ParseError(t.line, t.col, "pos or neg", "'" + c.head.pred + "'");
  }
  return es;
}

std::string serialize(const logic::ExampleSet& es) {
  std::ostringstream os;
  for (const logic::Atom& a : es.positives) os << "pos(" << logic::to_string(a) << ").\n";
  for (const logic::Atom& a : es.negatives) os << "neg(" << logic::to_string(a) << ").\n";
  return os.str();
}

std::vector<mdie::ModeDecl> parse_modes(const std::string& src) {
  Lexer lx(src);
  std::vector<mdie::ModeDecl> out;
  while (!lx.done()) {
    if (lx.peek().kind != Token::Kind::Ident) lx.fail("modeh or modeb");
    Token kw = lx.take();
    mdie::ModeDecl m;
    if (kw.text == "modeh")
      m.is_head = true;
    else if (kw.text == "modeb")
      m.is_head = false;
    else
      throw ParseError(kw.line, kw.col, "modeh or modeb", "'" + kw.text + "'");
    lx.expect_punct("(");
    m.recall = parse_recall(lx);
    lx.expect_punct(",");
    if (lx.peek().kind != Token::Kind::Ident) lx.fail("scheme predicate");
    m.pred = lx.take().text;
    lx.expect_punct("(");
    m.slots.push_back(parse_placemarker(lx));
    while (lx.at_punct(",")) {
      lx.take();
      m.slots.push_back(parse_placemarker(lx));
    }
    lx.expect_punct(")");
    lx.expect_punct(")");
    lx.expect_punct(".");
    out.push_back(std::move(m));
  }
  return out;
}

std::string serialize(const std::vector<mdie::ModeDecl>& modes) {
  std::ostringstream os;
  for (const mdie::ModeDecl& m : modes) {
    os << (m.is_head ? "modeh(" : "modeb(");
    if (m.recall == mdie::kRecallUnbounded)
      os << '*';
    else
      os << m.recall;
    os << ',' << m.pred << '(';
    for (std::size_t i = 0; i < m.slots.size(); ++i) {
      if (i) os << ',';
      switch (m.slots[i].pol) {
        case mdie::Placemarker::Pol::Input: os << '+'; break;
        case mdie::Placemarker::Pol::Output: os << '-'; break;
        case mdie::Placemarker::Pol::Constant: os << '#'; break;
      }
      os << m.slots[i].type;
    }
    os << ")).\n";
  }
  return os.str();
}

std::vector<mil::Metarule> parse_metarules(const std::string& src) {
  Lexer lx(src);
  std::vector<mil::Metarule> out;
  while (!lx.done()) {
    if (lx.peek().kind != Token::Kind::Ident) lx.fail("metarule name");
    mil::Metarule r;
    r.name = lx.take().text;
    for (const mil::Metarule& prev : out)
      if (prev.name == r.name) throw DuplicateMetarule(r.name);
    lx.expect_punct(":");
    r.head = parse_atom_template(lx);
    if (lx.at_punct(":-")) {
      lx.take();
      r.body.push_back(parse_atom_template(lx));
      while (lx.at_punct(",")) {
        lx.take();
        r.body.push_back(parse_atom_template(lx));
      }
    }
    lx.expect_punct(".");
    out.push_back(std::move(r));
  }
  return out;
}

std::string serialize(const std::vector<mil::Metarule>& rules) {
  std::ostringstream os;
  auto write_tmpl = [&](const mil::AtomTemplate& t) {
    os << t.so_var << '(';
    for (std::size_t i = 0; i < t.fo_vars.size(); ++i) {
      if (i) os << ',';
      os << t.fo_vars[i];
    }
    os << ')';
  };
  for (const mil::Metarule& r : rules) {
    os << r.name << ": ";
    write_tmpl(r.head);
    if (!r.body.empty()) {
      os << " :- ";
      for (std::size_t i = 0; i < r.body.size(); ++i) {
        if (i) os << ", ";
        write_tmpl(r.body[i]);
      }
    }
    os << ".\n";
  }
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

}  // namespace signlp::text
