#include "kinkcheck/parse.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <string_view>

#include "kinkcheck/errors.hpp"

namespace kinkcheck {

namespace {

// ---------------------------------------------------------------------------
// expression parsing

// What identifiers an expression may reference.
struct ExprScope {
  int num_primal = 0;  // t1..t{num_primal}
  int num_abs = 0;     // abs(z1)..abs(z{num_abs}); 0 forbids abs entirely
  bool abs_allowed = false;
  int triangular_row = -1;  // >=0: inside definition of z_{row+1}
  // MPCC mode: u/v identifiers map into the flat variable vector.
  bool mpcc = false;
  int mpcc_x = 0;
  int mpcc_pairs = 0;
};

class ExprParser {
 public:
  ExprParser(std::string_view s, int line, int col0, const ExprScope& scope)
      : s_(s), line_(line), col0_(col0), scope_(scope) {}

  ExprPtr parse_all() {
    ExprPtr e = parse_expr();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line_, col0_ + static_cast<int>(pos_) + 1);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    for (;;) {
      if (eat('+'))
        e = Expr::add(e, parse_term());
      else if (eat('-'))
        e = Expr::sub(e, parse_term());
      else
        return e;
    }
  }

  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    for (;;) {
      if (eat('*'))
        e = Expr::mul(e, parse_factor());
      else if (eat('/'))
        e = Expr::div(e, parse_factor());
      else
        return e;
    }
  }

  ExprPtr parse_factor() {
    if (eat('-')) return Expr::neg(parse_factor());
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_atom();
    if (eat('^')) return Expr::pow(base, parse_int_exponent());
    return base;
  }

  int parse_int_exponent() {
    skip_ws();
    bool parens = eat('(');
    skip_ws();
    bool negative = eat('-');
    skip_ws();
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected integer exponent");
    if (pos_ < s_.size() && (s_[pos_] == '.' || s_[pos_] == 'e' || s_[pos_] == 'E'))
      fail("exponent must be an integer");
    int k = 0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, k);
    if (res.ec != std::errc()) fail("invalid integer exponent");
    if (parens && !eat(')')) fail("expected ')' after exponent");
    return negative ? -k : k;
  }

  ExprPtr parse_atom() {
    skip_ws();
    if (pos_ >= s_.size()) fail("unexpected end of expression");
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.')
      return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    if (c == '(') {
      ++pos_;
      ExprPtr e = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr parse_number() {
    size_t start = pos_;
    while (pos_ < s_.size() &&
           (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.'))
      ++pos_;
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      size_t mark = pos_++;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) ++pos_;
      if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        while (pos_ < s_.size() &&
               std::isdigit(static_cast<unsigned char>(s_[pos_])))
          ++pos_;
      } else {
        pos_ = mark;  // 'e' belonged to something else
      }
    }
    double v = 0.0;
    auto res = std::from_chars(s_.data() + start, s_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != s_.data() + pos_)
      fail("invalid numeric literal");
    return Expr::constant(v);
  }

  ExprPtr parse_ident() {
    size_t start = pos_;
    while (pos_ < s_.size() &&
           std::isalpha(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    std::string word(s_.substr(start, pos_ - start));
    if (word == "sin" || word == "cos" || word == "exp" || word == "log") {
      if (!eat('(')) fail("expected '(' after " + word);
      ExprPtr arg = parse_expr();
      if (!eat(')')) fail("expected ')'");
      if (word == "sin") return Expr::sin(arg);
      if (word == "cos") return Expr::cos(arg);
      if (word == "exp") return Expr::exp(arg);
      return Expr::log(arg);
    }
    if (word == "abs") return parse_abs_ref();
    int idx = parse_trailing_index(word);
    if (word == "t") {
      if (idx < 1 || idx > scope_.num_primal)
        fail("variable t" + std::to_string(idx) + " out of range (n=" +
             std::to_string(scope_.num_primal) + ")");
      return Expr::var(idx - 1);
    }
    if (scope_.mpcc && (word == "u" || word == "v")) {
      if (idx < 1 || idx > scope_.mpcc_pairs)
        fail("variable " + word + std::to_string(idx) +
             " out of range (pairs=" + std::to_string(scope_.mpcc_pairs) + ")");
      int base = word == "u" ? scope_.mpcc_x : scope_.mpcc_x + scope_.mpcc_pairs;
      return Expr::var(base + idx - 1);
    }
    fail("unknown identifier '" + word + (idx >= 0 ? std::to_string(idx) : "") +
         "'");
  }

  // digits directly following an identifier word, or -1
  int parse_trailing_index(const std::string& word) {
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (pos_ == start) {
      if (word == "t" || word == "u" || word == "v" || word == "z")
        fail("expected index after '" + word + "'");
      return -1;
    }
    int idx = 0;
    std::from_chars(s_.data() + start, s_.data() + pos_, idx);
    return idx;
  }

  ExprPtr parse_abs_ref() {
    if (!scope_.abs_allowed)
      fail("abs(...) is not allowed in this expression");
    if (!eat('(')) fail("expected '(' after abs");
    skip_ws();
    if (pos_ >= s_.size() || s_[pos_] != 'z')
      fail("abs(...) may only wrap a switching variable z<i>");
    ++pos_;
    size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_])))
      ++pos_;
    if (pos_ == start) fail("expected index after 'z'");
    int idx = 0;
    std::from_chars(s_.data() + start, s_.data() + pos_, idx);
    if (!eat(')')) fail("expected ')'");
    if (scope_.triangular_row >= 0 && idx - 1 >= scope_.triangular_row)
      fail("z" + std::to_string(scope_.triangular_row + 1) +
           " may only reference abs(z" + "j) with j < " +
           std::to_string(scope_.triangular_row + 1) + " (triangularity)");
    if (idx < 1 || idx > scope_.num_abs)
      fail("switching variable z" + std::to_string(idx) + " out of range (s=" +
           std::to_string(scope_.num_abs) + ")");
    return Expr::abs_ref(idx - 1);
  }

  std::string_view s_;
  size_t pos_ = 0;
  int line_;
  int col0_;
  ExprScope scope_;
};

ExprPtr parse_expression(std::string_view text, int line, int col0,
                         const ExprScope& scope) {
  return ExprParser(text, line, col0, scope).parse_all();
}

// ---------------------------------------------------------------------------
// line scanning

struct Line {
  int number = 0;
  std::string text;  // comment-stripped, trimmed
  int indent = 0;    // original column of first non-blank character
};

std::vector<Line> scan_lines(const std::string& text) {
  std::vector<Line> out;
  int number = 0;
  std::istringstream in(text);
  std::string raw;
  while (std::getline(in, raw)) {
    ++number;
    if (auto hash = raw.find('#'); hash != std::string::npos)
      raw.erase(hash);
    size_t b = raw.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    size_t e = raw.find_last_not_of(" \t\r");
    out.push_back({number, raw.substr(b, e - b + 1), static_cast<int>(b)});
  }
  return out;
}

// "<head><ws><rest>" split at the first whitespace run
std::pair<std::string, std::string> split_head(const std::string& s) {
  size_t i = 0;
  while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  size_t j = i;
  while (j < s.size() && std::isspace(static_cast<unsigned char>(s[j]))) ++j;
  return {s.substr(0, i), s.substr(j)};
}

// parse "<prefix>[<positive int>]" as in "t[3]" / "z[1]"
int parse_bracket_dim(const std::string& s, char prefix, int line) {
  std::string expect;
  expect += prefix;
  if (s.size() < 3 || s[0] != prefix || s[1] != '[' || s.back() != ']')
    throw ParseError("expected " + expect + "[<dim>]", line, 1);
  int dim = -1;
  auto res = std::from_chars(s.data() + 2, s.data() + s.size() - 1, dim);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() - 1 || dim < 0)
    throw ParseError("invalid dimension in " + expect + "[...]", line, 1);
  return dim;
}

struct FileParser {
  std::vector<Line> lines;
  size_t cursor = 0;

  const Line* peek() const {
    return cursor < lines.size() ? &lines[cursor] : nullptr;
  }
  const Line* next() {
    return cursor < lines.size() ? &lines[cursor++] : nullptr;
  }

  [[noreturn]] void fail(const std::string& msg, int line) const {
    throw ParseError(msg, line, 1);
  }

  int last_line() const { return lines.empty() ? 1 : lines.back().number; }
};

ParsedProblem parse_any_impl(const std::string& text) {
  FileParser fp{scan_lines(text)};

  const Line* ln = fp.next();
  if (!ln) throw ParseError("empty problem file", 1, 1);
  auto [head, rest] = split_head(ln->text);
  if (head != "problem" || rest.empty())
    fp.fail("expected 'problem <name>'", ln->number);
  std::string name = rest;

  ln = fp.next();
  if (!ln) throw ParseError("expected 'vars t[<n>]'", fp.last_line(), 1);
  std::tie(head, rest) = split_head(ln->text);
  if (head != "vars") fp.fail("expected 'vars t[<n>]'", ln->number);
  int num_vars = parse_bracket_dim(rest, 't', ln->number);

  int num_switch = 0;
  std::vector<ExprPtr> switch_rows;
  bool is_mpcc = false;
  int num_pairs = 0;

  if (const Line* l = fp.peek(); l) {
    auto [h, r] = split_head(l->text);
    if (h == "switch") {
      fp.next();
      num_switch = parse_bracket_dim(r, 'z', l->number);
      for (int i = 0; i < num_switch; ++i) {
        const Line* row = fp.next();
        std::string want = "z" + std::to_string(i + 1);
        if (!row)
          fp.fail("expected '" + want + " = <expr>'", fp.last_line());
        auto [rh, rr] = split_head(row->text);
        if (rh != want) {
          // also accept "z1= expr" with no space before '='
          if (rh.rfind(want + "=", 0) == 0) {
            rr = row->text.substr(want.size() + 1);
            rh = want;
          } else {
            fp.fail("expected definition of '" + want + "' (rows in order)",
                    row->number);
          }
        } else {
          if (rr.empty() || rr[0] != '=')
            fp.fail("expected '=' in switching definition", row->number);
          rr = rr.substr(1);
        }
        ExprScope scope;
        scope.num_primal = num_vars;
        scope.num_abs = num_switch;
        scope.abs_allowed = true;
        scope.triangular_row = i;
        switch_rows.push_back(
            parse_expression(rr, row->number, 0, scope));
      }
    } else if (h == "mpcc") {
      fp.next();
      if (!r.empty()) fp.fail("unexpected text after 'mpcc'", l->number);
      is_mpcc = true;
      while (const Line* pl = fp.peek()) {
        auto [ph, pr] = split_head(pl->text);
        if (ph != "pair:") break;
        fp.next();
        std::string want_u = "u" + std::to_string(num_pairs + 1);
        std::string want_v = "v" + std::to_string(num_pairs + 1);
        auto [pu, pv] = split_head(pr);
        if (pu != want_u || pv != want_v)
          fp.fail("expected 'pair: " + want_u + " " + want_v + "'",
                  pl->number);
        ++num_pairs;
      }
      if (num_pairs == 0)
        fp.fail("mpcc section declares no pairs", l->number);
    }
  }

  ExprScope body_scope;
  body_scope.num_primal = num_vars;
  body_scope.num_abs = num_switch;
  body_scope.abs_allowed = !is_mpcc && num_switch > 0;
  body_scope.mpcc = is_mpcc;
  body_scope.mpcc_x = num_vars;
  body_scope.mpcc_pairs = num_pairs;

  ExprScope obj_scope;  // objective references x only
  obj_scope.num_primal = num_vars;

  ln = fp.next();
  if (!ln) throw ParseError("expected 'obj: <expr>'", fp.last_line(), 1);
  std::tie(head, rest) = split_head(ln->text);
  if (head != "obj:") fp.fail("expected 'obj: <expr>'", ln->number);
  ExprPtr objective = parse_expression(rest, ln->number, 0, obj_scope);

  std::vector<ExprPtr> eq_rows, ineq_rows;
  while (const Line* l = fp.next()) {
    auto [h, r] = split_head(l->text);
    if (h == "eq:")
      eq_rows.push_back(parse_expression(r, l->number, 0, body_scope));
    else if (h == "ineq:")
      ineq_rows.push_back(parse_expression(r, l->number, 0, body_scope));
    else
      fp.fail("expected 'eq:' or 'ineq:' line, got '" + h + "'", l->number);
  }

  if (is_mpcc) {
    MpccProblem mp;
    mp.name = name;
    mp.num_x = num_vars;
    mp.num_pairs = num_pairs;
    mp.num_t = num_vars;
    int dim = mp.var_dim();
    mp.objective = {dim, 0, {objective}};
    mp.eq = {dim, 0, eq_rows};
    mp.ineq = {dim, 0, ineq_rows};
    mp.validate();
    return mp;
  }

  AbsNormalProblem p;
  p.name = name;
  p.num_primal = num_vars;
  p.num_switching = num_switch;
  p.objective = {num_vars, 0, {objective}};
  p.eq = {num_vars, num_switch, eq_rows};
  p.ineq = {num_vars, num_switch, ineq_rows};
  p.switching = {num_vars, num_switch, switch_rows};
  p.validate();
  return p;
}

// ---------------------------------------------------------------------------
// serialization

// How variable indices render back to names.
struct VarNamer {
  bool mpcc = false;
  int num_x = 0;
  int num_pairs = 0;

  std::string var(int i) const {
    if (mpcc && i >= num_x) {
      int k = i - num_x;
      if (k < num_pairs) return "u" + std::to_string(k + 1);
      return "v" + std::to_string(k - num_pairs + 1);
    }
    return "t" + std::to_string(i + 1);
  }
  std::string abs(int j) const { return "abs(z" + std::to_string(j + 1) + ")"; }
};

// Print precedence; parenthesization must reproduce the exact tree on
// reparse, so right operands at equal precedence get parentheses.
int print_prec(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Add:
    case ExprKind::Sub:
      return 1;
    case ExprKind::Mul:
    case ExprKind::Div:
      return 2;
    case ExprKind::Pow:
      return 3;
    case ExprKind::Constant:
      return std::signbit(e.value) ? 2 : 4;
    default:
      return 4;
  }
}

bool is_unary_minus(const Expr& e) {
  return e.kind == ExprKind::Sub && e.a->kind == ExprKind::Constant &&
         e.a->value == 0.0 && !std::signbit(e.a->value) &&
         e.b->kind != ExprKind::Constant;
}

void print_expr(const Expr& e, const VarNamer& nm, int parent_prec,
                std::string& out);

void print_child(const ExprPtr& e, const VarNamer& nm, int parent_prec,
                 std::string& out) {
  print_expr(*e, nm, parent_prec, out);
}

void print_expr(const Expr& e, const VarNamer& nm, int parent_prec,
                std::string& out) {
  int prec = is_unary_minus(e) ? 2 : print_prec(e);
  bool parens = prec < parent_prec;
  if (parens) out += '(';
  switch (e.kind) {
    case ExprKind::Constant:
      out += format_double(e.value);
      break;
    case ExprKind::Var:
      out += nm.var(e.index);
      break;
    case ExprKind::AbsRef:
      out += nm.abs(e.index);
      break;
    case ExprKind::Add:
      print_child(e.a, nm, 1, out);
      out += " + ";
      print_child(e.b, nm, 2, out);
      break;
    case ExprKind::Sub:
      if (is_unary_minus(e)) {
        out += '-';
        print_child(e.b, nm, 3, out);
      } else {
        print_child(e.a, nm, 1, out);
        out += " - ";
        print_child(e.b, nm, 2, out);
      }
      break;
    case ExprKind::Mul:
      print_child(e.a, nm, 2, out);
      out += " * ";
      print_child(e.b, nm, 3, out);
      break;
    case ExprKind::Div:
      print_child(e.a, nm, 2, out);
      out += " / ";
      print_child(e.b, nm, 3, out);
      break;
    case ExprKind::Pow:
      print_child(e.a, nm, 4, out);
      out += '^';
      if (e.exponent < 0)
        out += "(" + std::to_string(e.exponent) + ")";
      else
        out += std::to_string(e.exponent);
      break;
    case ExprKind::Sin:
    case ExprKind::Cos:
    case ExprKind::Exp:
    case ExprKind::Log: {
      const char* f = e.kind == ExprKind::Sin   ? "sin"
                      : e.kind == ExprKind::Cos ? "cos"
                      : e.kind == ExprKind::Exp ? "exp"
                                                : "log";
      out += f;
      out += '(';
      print_child(e.a, nm, 0, out);
      out += ')';
      break;
    }
  }
  if (parens) out += ')';
}

std::string expr_to_string(const ExprPtr& e, const VarNamer& nm) {
  std::string out;
  print_expr(*e, nm, 0, out);
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

ParsedProblem parse_any(const std::string& text) {
  return parse_any_impl(text);
}

AbsNormalProblem parse_problem(const std::string& text) {
  ParsedProblem p = parse_any(text);
  if (auto* anf = std::get_if<AbsNormalProblem>(&p)) return std::move(*anf);
  throw ParseError("expected an abs-normal problem, found an mpcc section", 1,
                   1);
}

MpccProblem parse_mpcc(const std::string& text) {
  ParsedProblem p = parse_any(text);
  if (auto* mp = std::get_if<MpccProblem>(&p)) return std::move(*mp);
  throw ParseError("expected an mpcc problem (no mpcc section found)", 1, 1);
}

std::string serialize_problem(const AbsNormalProblem& p) {
  VarNamer nm;
  std::string out = "problem " + p.name + "\n";
  out += "vars t[" + std::to_string(p.num_primal) + "]\n";
  if (p.num_switching > 0) {
    out += "switch z[" + std::to_string(p.num_switching) + "]\n";
    for (int i = 0; i < p.num_switching; ++i)
      out += "  z" + std::to_string(i + 1) + " = " +
             expr_to_string(p.switching.rows[i], nm) + "\n";
  }
  out += "obj: " + expr_to_string(p.objective.rows[0], nm) + "\n";
  for (const auto& r : p.eq.rows) out += "eq: " + expr_to_string(r, nm) + "\n";
  for (const auto& r : p.ineq.rows)
    out += "ineq: " + expr_to_string(r, nm) + "\n";
  return out;
}

std::string serialize_mpcc(const MpccProblem& p) {
  VarNamer nm{true, p.num_x, p.num_pairs};
  std::string out = "problem " + p.name + "\n";
  out += "vars t[" + std::to_string(p.num_x) + "]\n";
  out += "mpcc\n";
  for (int i = 0; i < p.num_pairs; ++i)
    out += "  pair: u" + std::to_string(i + 1) + " v" + std::to_string(i + 1) +
           "\n";
  out += "obj: " + expr_to_string(p.objective.rows[0], nm) + "\n";
  for (const auto& r : p.eq.rows) out += "eq: " + expr_to_string(r, nm) + "\n";
  for (const auto& r : p.ineq.rows)
    out += "ineq: " + expr_to_string(r, nm) + "\n";
  return out;
}

}  // namespace kinkcheck
