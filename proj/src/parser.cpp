#include "parser.hpp"

#include <algorithm>
#include <cctype>

namespace pqn {

namespace {

struct Parser {
  const std::string& s;
  size_t pos = 0;
  bool allowSlot;

  explicit Parser(const std::string& text, bool slot) : s(text), allowSlot(slot) {}

  [[noreturn]] void failAt(size_t where, const std::string& msg) const {
    throw Error("parse", "syntax error at position " + std::to_string(where) +
                             ": " + msg);
  }

  [[noreturn]] void fail(const std::string& msg) const { failAt(pos, msg); }

  void skipWs() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool peek(char c) {
    skipWs();
    return pos < s.size() && s[pos] == c;
  }

  bool accept(char c) {
    if (peek(c)) {
      ++pos;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  bool atEnd() {
    skipWs();
    return pos >= s.size();
  }

  Rational integer() {
    skipWs();
    size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected a number");
    return Rational(s.substr(start, pos - start));
  }

  std::string ident() {
    skipWs();
    size_t start = pos;
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    return s.substr(start, pos - start);
  }

  Expr expr() {
    skipWs();
    bool neg = false;
    if (accept('-')) neg = true;
    else accept('+');
    Expr acc = term();
    if (neg) acc = -acc;
    while (true) {
      if (accept('+'))
        acc += term();
      else if (accept('-'))
        acc -= term();
      else
        break;
    }
    return acc;
  }

  Expr term() {
    Expr acc = factor();
    while (true) {
      if (accept('*'))
        acc *= factor();
      else if (accept('/')) {
        Expr d = factor();
        if (d.isZero()) fail("division by zero");
        acc /= d;
      } else
        break;
    }
    return acc;
  }

  Expr factor() {
    Expr b = base();
    if (accept('^')) {
      bool neg = accept('-');
      Rational e = integer();
      if (e.get_den() != 1) fail("integer exponent expected");
      long k = e.get_num().get_si();
      if (neg) k = -k;
      if (k < 0 && b.isZero()) fail("zero to a negative power");
      b = b.pow(static_cast<int>(k));
    }
    return b;
  }

  Expr base() {
    skipWs();
    if (pos >= s.size()) fail("unexpected end of input");
    char c = s[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) return Expr(integer());
    if (c == '(') {
      ++pos;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected character");
    size_t identPos = pos;
    std::string name = ident();

    // Coordinates: q<digits>, p<digits>.
    if ((name[0] == 'q' || name[0] == 'p') && name.size() > 1 &&
        std::all_of(name.begin() + 1, name.end(),
                    [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
      int idx = std::stoi(name.substr(1));
      if (idx < 1) {
        pos = identPos;
        fail("coordinate indices start at 1");
      }
      return name[0] == 'q' ? Expr::q(idx) : Expr::p(idx);
    }

    if (allowSlot && name == "x") return Expr(Atom::slot());

    if (name == "exp") {
      expect('(');
      Expr inner = expr();
      expect(')');
      return Expr::expLinear(linearCombo(inner, /*halves=*/true, identPos));
    }

    // Formal function with optional derivative ticks.
    int order = 0;
    while (pos < s.size() && s[pos] == '\'') {
      ++order;
      ++pos;
    }
    if (!peek('(')) {
      pos = identPos;
      fail("unknown identifier '" + name + "'");
    }
    expect('(');
    Expr inner = expr();
    expect(')');
    LinearForm arg;
    for (const auto& [idx, coeff] : linearCombo(inner, /*halves=*/false, identPos))
      arg.addTerm(idx, coeff.get_num().get_si());
    if (arg.empty()) {
      pos = identPos;
      fail("formal function argument must be a nonzero combination of q's");
    }
    return Expr(Atom::formal(internFunctionName(name), order, arg));
  }

  // Checks that e is a linear combination of q's and extracts coefficients.
  std::vector<std::pair<int, Rational>> linearCombo(const Expr& e, bool halves,
                                                    size_t where) {
    if (!e.den().isConstant()) failAt(where, "argument must be linear in q's");
    std::vector<std::pair<int, Rational>> combo;
    for (const auto& [m, c] : e.num().terms()) {
      if (m.factors.size() != 1 || m.factors[0].second != 1 ||
          m.factors[0].first.kind != AtomKind::CoordQ)
        failAt(where, "argument must be a linear combination of q's");
      Rational coeff = c / e.den().leading().second;
      if (halves) {
        Rational doubled = coeff * 2;
        if (doubled.get_den() != 1)
          failAt(where, "exponential coefficients must be multiples of 1/2");
      } else if (coeff.get_den() != 1) {
        failAt(where, "formal function arguments need integer coefficients");
      }
      combo.push_back({m.factors[0].first.index, coeff});
    }
    std::sort(combo.begin(), combo.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return combo;
  }
};

}  // namespace

Expr parseExpr(const std::string& text, bool allowSlot) {
  Parser p(text, allowSlot);
  Expr e = p.expr();
  if (!p.atEnd()) p.fail("trailing input");
  return e;
}

Potential Potential::parse(const std::string& text) {
  if (text.empty() || text == "V" || text == "formal") return Potential::formal();
  if (text == "exp") return Potential::exponential();
  if (text == "1/x") return Potential::reciprocal();
  if (text == "1/x^2") return Potential::inverseSquare();
  return Potential::custom(parseExpr(text, /*allowSlot=*/true));
}

}  // namespace pqn
