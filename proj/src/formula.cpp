#include "gltl/formula.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "gltl/error.hpp"

namespace gltl {

struct Formula::Node {
  Op op;
  std::string name;
  double mu = 0.0;
  std::vector<Formula> children;
};

namespace {

void check_mu(double mu) {
  if (!(mu > 0.0 && mu < 1.0)) {
    throw Error(ErrorCode::kMuRange,
                "window parameter must lie strictly between 0 and 1, got " + format_mu(mu));
  }
}

bool is_reserved(std::string_view name) {
  return name == "true" || name == "false" || name == "U" || name == "F" || name == "G";
}

}  // namespace

bool is_valid_atom_name(std::string_view name) {
  if (name.empty() || is_reserved(name)) return false;
  const char first = name.front();
  if (!(std::islower(static_cast<unsigned char>(first)) || first == '_')) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  });
}

Formula Formula::atom(std::string name) {
  if (!is_valid_atom_name(name)) {
    throw Error(ErrorCode::kInvalidArgument, "invalid atom name '" + name + "'");
  }
  return Formula(std::make_shared<const Node>(Node{Op::kAtom, std::move(name), 0.0, {}}));
}

Formula Formula::truth() { return Formula(std::make_shared<const Node>(Node{Op::kTrue, {}, 0.0, {}})); }

Formula Formula::falsity() {
  return Formula(std::make_shared<const Node>(Node{Op::kFalse, {}, 0.0, {}}));
}

Formula Formula::negation(Formula child) {
  return Formula(std::make_shared<const Node>(Node{Op::kNot, {}, 0.0, {std::move(child)}}));
}

Formula Formula::conjunction(Formula left, Formula right) {
  return Formula(std::make_shared<const Node>(
      Node{Op::kAnd, {}, 0.0, {std::move(left), std::move(right)}}));
}

Formula Formula::disjunction(Formula left, Formula right) {
  return Formula(std::make_shared<const Node>(
      Node{Op::kOr, {}, 0.0, {std::move(left), std::move(right)}}));
}

Formula Formula::until(double mu, Formula left, Formula right) {
  check_mu(mu);
  return Formula(std::make_shared<const Node>(
      Node{Op::kUntil, {}, mu, {std::move(left), std::move(right)}}));
}

Formula Formula::eventually(double mu, Formula child) {
  check_mu(mu);
  return Formula(
      std::make_shared<const Node>(Node{Op::kEventually, {}, mu, {std::move(child)}}));
}

Formula Formula::always(double mu, Formula child) {
  check_mu(mu);
  return Formula(std::make_shared<const Node>(Node{Op::kAlways, {}, mu, {std::move(child)}}));
}

Op Formula::op() const { return node_->op; }
const std::string& Formula::name() const { return node_->name; }
double Formula::mu() const { return node_->mu; }

const Formula& Formula::left() const {
  if (node_->children.empty()) throw Error(ErrorCode::kInvalidArgument, "node has no operands");
  return node_->children.front();
}

const Formula& Formula::right() const {
  if (node_->children.size() < 2) throw Error(ErrorCode::kInvalidArgument, "node is not binary");
  return node_->children[1];
}

bool Formula::is_temporal() const {
  return op() == Op::kUntil || op() == Op::kEventually || op() == Op::kAlways;
}

std::size_t Formula::depth() const {
  std::size_t d = 0;
  for (const auto& c : node_->children) d = std::max(d, c.depth());
  return node_->children.empty() ? 0 : d + 1;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.op == y.op && x.name == y.name && x.mu == y.mu && x.children == y.children;
}

std::string format_mu(double mu) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, mu);
  if (ec != std::errc()) return std::to_string(mu);
  return std::string(buf, end);
}

// ---------------------------------------------------------------------------
// Parser

namespace {

enum class Tok { kIdent, kTrue, kFalse, kNot, kAnd, kOr, kUntil, kEventually, kAlways,
                 kLParen, kRParen, kLBrace, kRBrace, kNumber, kEnd };

struct Token {
  Tok kind;
  std::size_t offset;
  std::string_view text;
};

const char* describe(Tok t) {
  switch (t) {
    case Tok::kIdent: return "identifier";
    case Tok::kTrue: return "'true'";
    case Tok::kFalse: return "'false'";
    case Tok::kNot: return "'!'";
    case Tok::kAnd: return "'&'";
    case Tok::kOr: return "'|'";
    case Tok::kUntil: return "'U'";
    case Tok::kEventually: return "'F'";
    case Tok::kAlways: return "'G'";
    case Tok::kLParen: return "'('";
    case Tok::kRParen: return "')'";
    case Tok::kLBrace: return "'{'";
    case Tok::kRBrace: return "'}'";
    case Tok::kNumber: return "number";
    case Tok::kEnd: return "end of input";
  }
  return "token";
}

[[noreturn]] void syntax_error(std::size_t offset, const std::string& msg) {
  throw ParseError(ErrorCode::kSyntax, offset, msg);
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  bool in_window = false;
  while (i < text.size()) {
    const char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t start = i;
    if (in_window && c != '}') {
      while (i < text.size() && text[i] != '}' && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      out.push_back({Tok::kNumber, start, text.substr(start, i - start)});
      continue;
    }
    switch (c) {
      case '!': out.push_back({Tok::kNot, start, text.substr(i, 1)}); ++i; continue;
      case '&': out.push_back({Tok::kAnd, start, text.substr(i, 1)}); ++i; continue;
      case '|': out.push_back({Tok::kOr, start, text.substr(i, 1)}); ++i; continue;
      case '(': out.push_back({Tok::kLParen, start, text.substr(i, 1)}); ++i; continue;
      case ')': out.push_back({Tok::kRParen, start, text.substr(i, 1)}); ++i; continue;
      case '{':
        out.push_back({Tok::kLBrace, start, text.substr(i, 1)});
        ++i;
        in_window = true;
        continue;
      case '}':
        out.push_back({Tok::kRBrace, start, text.substr(i, 1)});
        ++i;
        in_window = false;
        continue;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < text.size() &&
             (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) {
        ++i;
      }
      const auto word = text.substr(start, i - start);
      Tok kind = Tok::kIdent;
      if (word == "true") kind = Tok::kTrue;
      else if (word == "false") kind = Tok::kFalse;
      else if (word == "U") kind = Tok::kUntil;
      else if (word == "F") kind = Tok::kEventually;
      else if (word == "G") kind = Tok::kAlways;
      else if (!is_valid_atom_name(word)) {
        syntax_error(start, "invalid atom name '" + std::string(word) +
                                "' (atoms start with a lowercase letter or '_')");
      }
      out.push_back({kind, start, word});
      continue;
    }
    syntax_error(start, std::string("unexpected character '") + c + "'");
  }
  out.push_back({Tok::kEnd, text.size(), {}});
  return out;
}

class Parser {
 public:
  Parser(std::string_view text, std::optional<double> default_mu)
      : tokens_(lex(text)), default_mu_(default_mu) {}

  Formula parse_all() {
    Formula f = parse_or();
    if (peek().kind != Tok::kEnd) {
      syntax_error(peek().offset, std::string("expected operator or end of input, found ") +
                                      describe(peek().kind));
    }
    return f;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& advance() { return tokens_[pos_++]; }

  void expect(Tok kind) {
    if (peek().kind != kind) {
      syntax_error(peek().offset, std::string("expected ") + describe(kind) + ", found " +
                                      describe(peek().kind));
    }
    ++pos_;
  }

  Formula parse_or() {
    Formula left = parse_and();
    if (peek().kind == Tok::kOr) {
      advance();
      return Formula::disjunction(std::move(left), parse_or());
    }
    return left;
  }

  Formula parse_and() {
    Formula left = parse_temp();
    if (peek().kind == Tok::kAnd) {
      advance();
      return Formula::conjunction(std::move(left), parse_and());
    }
    return left;
  }

  Formula parse_temp() {
    const Tok k = peek().kind;
    if (k == Tok::kEventually || k == Tok::kAlways) {
      advance();
      const double mu = parse_window();
      Formula operand = parse_temp();
      return k == Tok::kEventually ? Formula::eventually(mu, std::move(operand))
                                   : Formula::always(mu, std::move(operand));
    }
    Formula left = parse_neg();
    if (peek().kind == Tok::kUntil) {
      advance();
      const double mu = parse_window();
      return Formula::until(mu, std::move(left), parse_temp());
    }
    return left;
  }

  Formula parse_neg() {
    if (peek().kind == Tok::kNot) {
      advance();
      return Formula::negation(parse_neg());
    }
    return parse_primary();
  }

  Formula parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::kIdent: advance(); return Formula::atom(std::string(t.text));
      case Tok::kTrue: advance(); return Formula::truth();
      case Tok::kFalse: advance(); return Formula::falsity();
      case Tok::kLParen: {
        advance();
        Formula inner = parse_or();
        expect(Tok::kRParen);
        return inner;
      }
      default:
        syntax_error(t.offset, std::string("expected atom, 'true', 'false' or '(', found ") +
                                   describe(t.kind));
    }
  }

  // Called just past U/F/G.
  double parse_window() {
    if (peek().kind != Tok::kLBrace) {
      if (!default_mu_) {
        throw ParseError(ErrorCode::kMissingMu, tokens_[pos_ - 1].offset,
                         "temporal operator has no {mu} window and no default mu is set");
      }
      return *default_mu_;
    }
    advance();
    const Token& num = peek();
    if (num.kind != Tok::kNumber) {
      syntax_error(num.offset, std::string("expected number, found ") + describe(num.kind));
    }
    advance();
    double mu = 0.0;
    const char* first = num.text.data();
    const char* last = first + num.text.size();
    auto [ptr, ec] = std::from_chars(first, last, mu);
    if (ec == std::errc::result_out_of_range) {
      throw ParseError(ErrorCode::kMuRange, num.offset, "window value out of range");
    }
    if (ec != std::errc() || ptr != last) {
      syntax_error(num.offset, "malformed number '" + std::string(num.text) + "'");
    }
    if (!(mu > 0.0 && mu < 1.0)) {
      throw ParseError(ErrorCode::kMuRange, num.offset,
                       "window value " + std::string(num.text) +
                           " outside the open interval (0, 1)");
    }
    expect(Tok::kRBrace);
    return mu;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::optional<double> default_mu_;
};

void format_into(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::kAtom: out += f.name(); return;
    case Op::kTrue: out += "true"; return;
    case Op::kFalse: out += "false"; return;
    case Op::kNot:
      out += "(!";
      format_into(f.child(), out);
      out += ')';
      return;
    case Op::kAnd:
    case Op::kOr:
      out += '(';
      format_into(f.left(), out);
      out += f.op() == Op::kAnd ? " & " : " | ";
      format_into(f.right(), out);
      out += ')';
      return;
    case Op::kUntil:
      out += '(';
      format_into(f.left(), out);
      out += " U{" + format_mu(f.mu()) + "} ";
      format_into(f.right(), out);
      out += ')';
      return;
    case Op::kEventually:
    case Op::kAlways:
      out += f.op() == Op::kEventually ? "(F{" : "(G{";
      out += format_mu(f.mu()) + "} ";
      format_into(f.child(), out);
      out += ')';
      return;
  }
}

void sexpr_into(const Formula& f, std::string& out) {
  switch (f.op()) {
    case Op::kAtom: out += "(atom " + f.name() + ")"; return;
    case Op::kTrue: out += "(true)"; return;
    case Op::kFalse: out += "(false)"; return;
    case Op::kNot:
      out += "(not ";
      sexpr_into(f.child(), out);
      out += ')';
      return;
    case Op::kAnd:
    case Op::kOr:
      out += f.op() == Op::kAnd ? "(and " : "(or ";
      sexpr_into(f.left(), out);
      out += ' ';
      sexpr_into(f.right(), out);
      out += ')';
      return;
    case Op::kUntil:
      out += "(until " + format_mu(f.mu()) + " ";
      sexpr_into(f.left(), out);
      out += ' ';
      sexpr_into(f.right(), out);
      out += ')';
      return;
    case Op::kEventually:
    case Op::kAlways:
      out += f.op() == Op::kEventually ? "(eventually " : "(always ";
      out += format_mu(f.mu()) + " ";
      sexpr_into(f.child(), out);
      out += ')';
      return;
  }
}

void collect_atoms(const Formula& f, std::set<std::string>& out) {
  switch (f.op()) {
    case Op::kAtom: out.insert(f.name()); return;
    case Op::kTrue:
    case Op::kFalse: return;
    case Op::kNot:
    case Op::kEventually:
    case Op::kAlways: collect_atoms(f.child(), out); return;
    default:
      collect_atoms(f.left(), out);
      collect_atoms(f.right(), out);
  }
}

}  // namespace

Formula parse(std::string_view text, std::optional<double> default_mu) {
  if (default_mu && !(*default_mu > 0.0 && *default_mu < 1.0)) {
    throw ParseError(ErrorCode::kMuRange, 0,
                     "default mu " + format_mu(*default_mu) + " outside the open interval (0, 1)");
  }
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) syntax_error(0, "empty formula");
  return Parser(text, default_mu).parse_all();
}

std::string format(const Formula& f) {
  std::string out;
  format_into(f, out);
  return out;
}

std::string to_sexpr(const Formula& f) {
  std::string out;
  sexpr_into(f, out);
  return out;
}

std::vector<std::string> atomic_props(const Formula& f) {
  std::set<std::string> atoms;
  collect_atoms(f, atoms);
  return {atoms.begin(), atoms.end()};
}

}  // namespace gltl
