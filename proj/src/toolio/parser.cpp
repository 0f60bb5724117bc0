#include "bdcone/toolio/parser.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

namespace bdcone {

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message)
    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                         message),
      line_(line),
      column_(column),
      message_(message) {}

namespace {

const std::set<std::string, std::less<>> kKeywords = {"vars", "minimize", "maximize", "st", "box", "option"};

enum class Tok { Ident, Number, Op, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::size_t col = 0;
};

class Lexer {
 public:
  Lexer(std::string_view line, std::size_t lineno) : s_(line), line_(lineno) { advance(); }

  const Token& peek() const { return cur_; }
  std::size_t line() const { return line_; }

  Token next() {
    Token t = cur_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const Token& at, const std::string& msg) const {
    throw ParseError(line_, at.col, msg);
  }

  void expect_op(std::string_view op) {
    if (cur_.kind != Tok::Op || cur_.text != op) {
      fail(cur_, "expected '" + std::string(op) + "', found " + describe(cur_));
    }
    advance();
  }

  void expect_end() {
    if (cur_.kind != Tok::End) fail(cur_, "unexpected " + describe(cur_));
  }

  static std::string describe(const Token& t) {
    return t.kind == Tok::End ? "end of line" : "'" + t.text + "'";
  }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    cur_ = Token{};
    cur_.col = pos_ + 1;
    if (pos_ >= s_.size() || s_[pos_] == '#') {
      cur_.kind = Tok::End;
      return;
    }
    const char c = s_[pos_];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t b = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      cur_.kind = Tok::Ident;
      cur_.text = std::string(s_.substr(b, pos_ - b));
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const std::size_t b = pos_;
      while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.')) ++pos_;
      if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
        std::size_t q = pos_ + 1;
        if (q < s_.size() && (s_[q] == '+' || s_[q] == '-')) ++q;
        if (q < s_.size() && std::isdigit(static_cast<unsigned char>(s_[q]))) {
          pos_ = q;
          while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        }
      }
      cur_.kind = Tok::Number;
      cur_.text = std::string(s_.substr(b, pos_ - b));
      return;
    }
    for (std::string_view op : {">=", "<=", "=="}) {
      if (s_.substr(pos_, 2) == op) {
        cur_.kind = Tok::Op;
        cur_.text = std::string(op);
        pos_ += 2;
        return;
      }
    }
    if (std::string_view("+-*^():,").find(c) != std::string_view::npos) {
      cur_.kind = Tok::Op;
      cur_.text = std::string(1, c);
      ++pos_;
      return;
    }
    throw ParseError(line_, cur_.col, std::string("unexpected character '") + c + "'");
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
  Token cur_;
};

double to_number(Lexer& lx, const Token& t) {
  double v = 0.0;
  const auto* first = t.text.data();
  const auto* last = first + t.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) lx.fail(t, "invalid number '" + t.text + "'");
  return v;
}

class ExprParser {
 public:
  ExprParser(Lexer& lx, const std::vector<std::string>& vars) : lx_(lx), vars_(vars) {}

  Polynomial expr() {
    Polynomial acc = term();
    while (lx_.peek().kind == Tok::Op && (lx_.peek().text == "+" || lx_.peek().text == "-")) {
      const bool minus = lx_.next().text == "-";
      Polynomial t = term();
      if (minus) {
        acc -= t;
      } else {
        acc += t;
      }
    }
    return acc;
  }

 private:
  Polynomial term() {
    Polynomial acc = unary();
    while (lx_.peek().kind == Tok::Op && lx_.peek().text == "*") {
      lx_.next();
      acc = acc * unary();
    }
    return acc;
  }

  Polynomial unary() {
    if (lx_.peek().kind == Tok::Op && (lx_.peek().text == "-" || lx_.peek().text == "+")) {
      const bool minus = lx_.next().text == "-";
      Polynomial p = unary();
      return minus ? -p : p;
    }
    return power();
  }

  Polynomial power() {
    Polynomial base = primary();
    if (lx_.peek().kind == Tok::Op && lx_.peek().text == "^") {
      lx_.next();
      const Token t = lx_.next();
      if (t.kind != Tok::Number) lx_.fail(t, "expected an integer exponent, found " + Lexer::describe(t));
      if (t.text.find_first_not_of("0123456789") != std::string::npos) {
        lx_.fail(t, "non-integer exponent '" + t.text + "'");
      }
      int e = 0;
      const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), e);
      if (ec != std::errc() || e > 1000) lx_.fail(t, "exponent too large '" + t.text + "'");
      if (lx_.peek().kind == Tok::Op && lx_.peek().text == "^") {
        lx_.fail(lx_.peek(), "chained '^' needs parentheses");
      }
      return bdcone::power(base, e);
    }
    return base;
  }

  Polynomial primary() {
    const Token t = lx_.next();
    const std::size_t n = vars_.size();
    switch (t.kind) {
      case Tok::Number: return Polynomial::constant(n, to_number(lx_, t));
      case Tok::Ident: {
        const auto it = std::find(vars_.begin(), vars_.end(), t.text);
        if (it == vars_.end()) lx_.fail(t, "undeclared identifier '" + t.text + "'");
        return Polynomial::variable(n, static_cast<std::size_t>(it - vars_.begin()));
      }
      case Tok::Op:
        if (t.text == "(") {
          Polynomial p = expr();
          lx_.expect_op(")");
          return p;
        }
        break;
      case Tok::End: break;
    }
    lx_.fail(t, "expected a number, variable or '(', found " + Lexer::describe(t));
  }

  Lexer& lx_;
  const std::vector<std::string>& vars_;
};

std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> out;
  std::size_t b = 0;
  while (b <= text.size()) {
    std::size_t e = text.find('\n', b);
    if (e == std::string_view::npos) e = text.size();
    std::string_view line = text.substr(b, e - b);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    out.push_back(line);
    b = e + 1;
  }
  return out;
}

Token expect_ident(Lexer& lx, const std::string& what) {
  const Token t = lx.next();
  if (t.kind != Tok::Ident) lx.fail(t, "expected " + what + ", found " + Lexer::describe(t));
  return t;
}

double signed_number(Lexer& lx) {
  bool minus = false;
  if (lx.peek().kind == Tok::Op && (lx.peek().text == "-" || lx.peek().text == "+")) {
    minus = lx.next().text == "-";
  }
  const Token t = lx.next();
  if (t.kind != Tok::Number) lx.fail(t, "expected a number, found " + Lexer::describe(t));
  const double v = to_number(lx, t);
  return minus ? -v : v;
}

int integer_value(Lexer& lx, const Token& t) {
  int v = 0;
  const auto [ptr, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
  if (t.kind != Tok::Number || ec != std::errc() || ptr != t.text.data() + t.text.size()) {
    lx.fail(t, "expected an integer, found " + Lexer::describe(t));
  }
  return v;
}

bool natural_less(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (std::isdigit(static_cast<unsigned char>(a[i])) && std::isdigit(static_cast<unsigned char>(b[j]))) {
      std::size_t i2 = i, j2 = j;
      while (i2 < a.size() && std::isdigit(static_cast<unsigned char>(a[i2]))) ++i2;
      while (j2 < b.size() && std::isdigit(static_cast<unsigned char>(b[j2]))) ++j2;
      const auto da = a.substr(i, i2 - i), db = b.substr(j, j2 - j);
      if (da.size() != db.size()) return da.size() < db.size();
      if (da != db) return da < db;
      i = i2;
      j = j2;
    } else {
      if (a[i] != b[j]) return a[i] < b[j];
      ++i;
      ++j;
    }
  }
  return a.size() - i < b.size() - j;
}

}  // namespace

ProblemSource parse_problem(std::string_view text) {
  ProblemSource src;
  bool have_vars = false, have_objective = false;
  const auto lines = split_lines(text);
  for (std::size_t li = 0; li < lines.size(); ++li) {
    Lexer lx(lines[li], li + 1);
    if (lx.peek().kind == Tok::End) continue;
    const Token head = expect_ident(lx, "a statement");
    if (head.text == "vars") {
      if (have_vars) lx.fail(head, "duplicate 'vars' line");
      while (lx.peek().kind != Tok::End) {
        const Token v = expect_ident(lx, "a variable name");
        if (kKeywords.count(v.text)) lx.fail(v, "keyword '" + v.text + "' used as a variable");
        if (std::find(src.vars.begin(), src.vars.end(), v.text) != src.vars.end()) {
          lx.fail(v, "variable '" + v.text + "' declared twice");
        }
        src.vars.push_back(v.text);
      }
      if (src.vars.empty()) lx.fail(lx.peek(), "'vars' needs at least one variable");
      have_vars = true;
      src.objective = Polynomial(src.vars.size());
      continue;
    }
    if (!have_vars) lx.fail(head, "expected 'vars' before '" + head.text + "'");
    const std::size_t n = src.vars.size();
    if (head.text == "minimize" || head.text == "maximize") {
      if (have_objective) lx.fail(head, "duplicate objective");
      lx.expect_op(":");
      src.maximize = head.text == "maximize";
      src.objective = ExprParser(lx, src.vars).expr();
      lx.expect_end();
      have_objective = true;
      continue;
    }
    if (!have_objective) lx.fail(head, "expected an objective before '" + head.text + "'");
    if (head.text == "st") {
      lx.expect_op(":");
      SourceConstraint c;
      c.lhs = ExprParser(lx, src.vars).expr();
      const Token op = lx.next();
      if (op.kind != Tok::Op || (op.text != ">=" && op.text != "<=" && op.text != "==")) {
        lx.fail(op, "expected '>=', '<=' or '==', found " + Lexer::describe(op));
      }
      c.rel = op.text == ">=" ? Relation::GreaterEq : op.text == "<=" ? Relation::LessEq : Relation::Equal;
      c.rhs = ExprParser(lx, src.vars).expr();
      lx.expect_end();
      src.constraints.push_back(std::move(c));
    } else if (head.text == "box") {
      const Token v = expect_ident(lx, "a variable name");
      const auto it = std::find(src.vars.begin(), src.vars.end(), v.text);
      if (it == src.vars.end()) lx.fail(v, "undeclared identifier '" + v.text + "'");
      SourceBox b;
      b.var = static_cast<std::size_t>(it - src.vars.begin());
      const Token lo_at = lx.peek();
      b.lo = signed_number(lx);
      b.hi = signed_number(lx);
      if (b.lo > b.hi) lx.fail(lo_at, "empty box: lower bound exceeds upper bound");
      lx.expect_end();
      src.boxes.push_back(b);
    } else if (head.text == "option") {
      const Token name = expect_ident(lx, "an option name");
      auto& o = src.options;
      if (name.text == "M") {
        const Token at = lx.peek();
        o.M = signed_number(lx);
        if (!(*o.M > 0.0)) lx.fail(at, "M must be positive");
      } else if (name.text == "k") {
        const Token t = lx.next();
        o.k = integer_value(lx, t);
      } else if (name.text == "r") {
        const Token t = lx.next();
        o.r = integer_value(lx, t);
        if (*o.r < 0 || *o.r % 2 != 0) lx.fail(t, "r must be a nonnegative even integer");
      } else if (name.text == "split") {
        const Token a = lx.next();
        const int n1 = integer_value(lx, a);
        lx.expect_op(",");
        const Token b = lx.next();
        const int n2 = integer_value(lx, b);
        if (n1 < 0 || n2 < 0 || static_cast<std::size_t>(n1 + n2) != n) {
          lx.fail(a, "split must be two nonnegative counts summing to " + std::to_string(n));
        }
        o.split = std::make_pair(static_cast<std::size_t>(n1), static_cast<std::size_t>(n2));
      } else {
        lx.fail(name, "unknown option '" + name.text + "'");
      }
      lx.expect_end();
    } else {
      lx.fail(head, "unknown statement '" + head.text + "'");
    }
  }
  if (!have_vars) throw ParseError(1, 1, "missing 'vars' line");
  if (!have_objective) throw ParseError(lines.size(), 1, "missing objective");
  return src;
}

Polynomial parse_polynomial(std::string_view text, const std::vector<std::string>& vars) {
  if (text.find('\n') != std::string_view::npos) throw ParseError(1, text.find('\n') + 1, "expression spans lines");
  Lexer lx(text, 1);
  Polynomial p = ExprParser(lx, vars).expr();
  lx.expect_end();
  return p;
}

std::vector<std::string> expression_variables(std::string_view text) {
  std::vector<std::string> out;
  for (const auto line : split_lines(text)) {
    Lexer lx(line, 1);
    while (lx.peek().kind != Tok::End) {
      const Token t = lx.next();
      if (t.kind == Tok::Ident && std::find(out.begin(), out.end(), t.text) == out.end()) out.push_back(t.text);
    }
  }
  std::sort(out.begin(), out.end(), natural_less);
  return out;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string format_polynomial(const Polynomial& f, const std::vector<std::string>& vars) {
  if (f.is_zero()) return "0";
  std::string out;
  bool first = true;
  // Highest degree first, basis order within a degree.
  std::vector<std::pair<Exponent, double>> terms(f.terms().begin(), f.terms().end());
  std::stable_sort(terms.begin(), terms.end(),
                   [](const auto& a, const auto& b) { return a.first.degree() > b.first.degree(); });
  for (const auto& [e, c] : terms) {
    const bool neg = c < 0;
    const double a = std::abs(c);
    if (first) {
      if (neg) out += "-";
    } else {
      out += neg ? " - " : " + ";
    }
    first = false;
    std::string mono;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!mono.empty()) mono += "*";
      mono += vars.at(i);
      if (e[i] > 1) mono += "^" + std::to_string(e[i]);
    }
    if (mono.empty()) {
      out += format_double(a);
    } else if (a == 1.0) {
      out += mono;
    } else {
      out += format_double(a) + "*" + mono;
    }
  }
  return out;
}

std::string print_problem(const ProblemSource& s) {
  std::ostringstream os;
  os << "vars";
  for (const auto& v : s.vars) os << ' ' << v;
  os << '\n' << (s.maximize ? "maximize: " : "minimize: ") << format_polynomial(s.objective, s.vars) << '\n';
  for (const auto& c : s.constraints) {
    const char* rel = c.rel == Relation::GreaterEq ? ">=" : c.rel == Relation::LessEq ? "<=" : "==";
    os << "st: " << format_polynomial(c.lhs, s.vars) << ' ' << rel << ' ' << format_polynomial(c.rhs, s.vars)
       << '\n';
  }
  for (const auto& b : s.boxes) {
    os << "box " << s.vars[b.var] << ' ' << format_double(b.lo) << ' ' << format_double(b.hi) << '\n';
  }
  const auto& o = s.options;
  if (o.M) os << "option M " << format_double(*o.M) << '\n';
  if (o.k) os << "option k " << *o.k << '\n';
  if (o.r) os << "option r " << *o.r << '\n';
  if (o.split) os << "option split " << o.split->first << ',' << o.split->second << '\n';
  return os.str();
}

ProblemData to_problem_data(const ProblemSource& s) {
  const std::size_t n = s.vars.size();
  ProblemData data;
  data.names = s.vars;
  data.f = s.maximize ? -s.objective : s.objective;
  for (const auto& c : s.constraints) {
    if (c.rel != Relation::LessEq) data.g.push_back(c.lhs - c.rhs);
    if (c.rel != Relation::GreaterEq) data.g.push_back(c.rhs - c.lhs);
  }
  Box box{std::vector<double>(n, -INFINITY), std::vector<double>(n, INFINITY)};
  std::vector<bool> seen(n, false);
  for (const auto& b : s.boxes) {
    data.g.push_back(Polynomial::variable(n, b.var) - Polynomial::constant(n, b.lo));
    data.g.push_back(Polynomial::constant(n, b.hi) - Polynomial::variable(n, b.var));
    box.lo[b.var] = std::max(box.lo[b.var], b.lo);
    box.hi[b.var] = std::min(box.hi[b.var], b.hi);
    seen[b.var] = true;
  }
  if (n > 0 && std::all_of(seen.begin(), seen.end(), [](bool x) { return x; })) data.box = box;
  if (s.options.M) data.M = *s.options.M;
  return data;
}

HierarchyConfig config_from_options(const ProblemSource& s) {
  HierarchyConfig cfg;
  const std::size_t n = s.vars.size();
  cfg.k = s.options.k.value_or(1);
  const int d = s.objective.degree();
  cfg.r = s.options.r.value_or(std::max(2, d + (d % 2)));
  if (s.options.split) {
    cfg.n1 = s.options.split->first;
    cfg.n2 = s.options.split->second;
  } else {
    cfg.n1 = 0;
    cfg.n2 = n;
  }
  return cfg;
}

}  // namespace bdcone
