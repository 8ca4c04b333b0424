#include "expr.hpp"

#include <algorithm>
#include <cmath>

namespace pqn {

std::string rationalStr(const Rational& r) { return r.get_str(); }

Expr::Expr(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  normalize();
}

void Expr::normalize() {
  if (den_.isZero())
    throw Error("divzero", "division by identically zero expression");
  if (num_.isZero()) {
    den_ = Poly(Rational(1));
    return;
  }
  if (!den_.isConstant()) {
    Poly g = polyGcd(num_, den_);
    if (!g.isConstant()) {
      num_ = exactDivide(num_, g);
      den_ = exactDivide(den_, g);
    }
  }
  // Monic denominator: scale both sides by 1/lc(den).
  const Rational& lc = den_.leading().second;
  if (lc != 1) {
    Rational inv = Rational(1) / lc;
    num_ = num_ * inv;
    den_ = den_ * inv;
  }
}

Expr Expr::expLinear(const std::vector<std::pair<int, Rational>>& combo) {
  Monomial mn, md;
  std::vector<std::pair<Atom, int>> factors;
  for (const auto& [idx, c] : combo) {
    Rational doubled = c * 2;
    if (doubled.get_den() != 1)
      throw Error("bad-exponent",
                  "exponential argument must have half-integer coefficients");
    long e = doubled.get_num().get_si();
    if (e != 0) factors.push_back({Atom::expHalf(idx), static_cast<int>(e)});
  }
  std::sort(factors.begin(), factors.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (const auto& [a, e] : factors) {
    if (e > 0)
      mn = mn * Monomial::atom(a, e);
    else
      md = md * Monomial::atom(a, -e);
  }
  return Expr(Poly(Rational(1)) * mn, Poly(Rational(1)) * md);
}

Expr Expr::operator-() const {
  Expr out = *this;
  out.num_ = -out.num_;
  return out;
}

Expr& Expr::operator+=(const Expr& o) {
  if (den_ == o.den_) {
    num_ += o.num_;
    normalize();
    return *this;
  }
  if (!den_.isConstant() && !o.den_.isConstant()) {
    // Use the denominator gcd so repeated sums do not pile up spurious
    // factors that the final reduction would have to strip again.
    Poly g = polyGcd(den_, o.den_);
    if (!g.isConstant()) {
      Poly mine = exactDivide(den_, g);
      Poly theirs = exactDivide(o.den_, g);
      num_ = num_ * theirs + o.num_ * mine;
      den_ = den_ * theirs;
      normalize();
      return *this;
    }
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

Expr& Expr::operator-=(const Expr& o) {
  *this += -o;
  return *this;
}

Expr& Expr::operator*=(const Expr& o) {
  if (isZero() || o.isZero()) {
    *this = Expr();
    return *this;
  }
  // Cross-reduce before multiplying to keep intermediates small.
  Poly a = num_, b = den_, c = o.num_, d = o.den_;
  if (!d.isConstant()) {
    Poly g = polyGcd(a, d);
    if (!g.isConstant()) {
      a = exactDivide(a, g);
      d = exactDivide(d, g);
    }
  }
  if (!b.isConstant()) {
    Poly g = polyGcd(c, b);
    if (!g.isConstant()) {
      c = exactDivide(c, g);
      b = exactDivide(b, g);
    }
  }
  num_ = a * c;
  den_ = b * d;
  normalize();
  return *this;
}

Expr& Expr::operator/=(const Expr& o) {
  if (o.isZero()) throw Error("divzero", "division by zero expression");
  Expr inv(o.den_, o.num_);
  *this *= inv;
  return *this;
}

Expr operator+(Expr a, const Expr& b) { a += b; return a; }
Expr operator-(Expr a, const Expr& b) { a -= b; return a; }
Expr operator*(Expr a, const Expr& b) { a *= b; return a; }
Expr operator/(Expr a, const Expr& b) { a /= b; return a; }

Expr Expr::pow(int k) const {
  if (k == 0) return Expr(1L);
  Expr base = *this;
  if (k < 0) {
    if (isZero()) throw Error("divzero", "zero to a negative power");
    base = Expr(den_, num_);
    k = -k;
  }
  Expr acc(1L);
  while (k > 0) {
    if (k & 1) acc *= base;
    base = (k >>= 1) ? base * base : base;
  }
  return acc;
}

namespace {

// Chain-rule polynomial derivative: d(atom)/dx expanded for each generator.
Poly polyDiff(const Poly& p, const Atom& x) {
  Poly out;
  for (const Atom& a : p.atoms()) {
    Poly base;  // da/dx as a polynomial multiplier pattern
    if (a == x) {
      out += p.derivativeByGenerator(a);
      continue;
    }
    if (a.kind == AtomKind::ExpHalf && x.kind == AtomKind::CoordQ &&
        a.index == x.index) {
      // d/dq_i e^{q_i/2} = (1/2) e^{q_i/2}
      out += (p.derivativeByGenerator(a) * Monomial::atom(a)) * Rational(1, 2);
      continue;
    }
    if (a.kind == AtomKind::Formal && x.kind == AtomKind::CoordQ) {
      long long c = 0;
      for (const auto& [idx, coeff] : a.arg.terms)
        if (idx == x.index) c = coeff;
      if (c != 0) {
        Atom up = Atom::formal(a.fn, a.deriv + 1, a.arg);
        out += (p.derivativeByGenerator(a) * Monomial::atom(up)) *
               Rational(static_cast<long>(c));
      }
      continue;
    }
    (void)base;
  }
  return out;
}

}  // namespace

Expr Expr::diff(const Atom& x) const {
  if (x.kind != AtomKind::CoordQ && x.kind != AtomKind::CoordP &&
      x.kind != AtomKind::Slot)
    throw Error("bad-arg", "diff expects a coordinate or the slot variable");
  Poly dn = polyDiff(num_, x);
  Poly dd = polyDiff(den_, x);
  if (dd.isZero()) return Expr(dn, den_);
  // (P' Q - P Q') / Q^2
  return Expr(dn * den_ - num_ * dd, den_ * den_);
}

Expr Expr::substituteAtom(const Atom& a, const Expr& value) const {
  auto substPoly = [&](const Poly& p) -> Expr {
    Expr acc;
    for (const auto& [m, c] : p.terms()) {
      Expr term{Rational(c)};
      int e = 0;
      Monomial rest;
      for (const auto& f : m.factors) {
        if (f.first == a)
          e = f.second;
        else
          rest.factors.push_back(f);
      }
      term *= Expr(Poly(Rational(1)) * rest, Poly(Rational(1)));
      if (e != 0) term *= value.pow(e);
      acc += term;
    }
    return acc;
  };
  Expr n = substPoly(num_);
  Expr d = substPoly(den_);
  return n / d;
}

bool Expr::hasTranscendentalAtoms() const {
  for (const Atom& a : atoms())
    if (a.kind == AtomKind::ExpHalf || a.kind == AtomKind::Formal ||
        a.kind == AtomKind::Slot)
      return true;
  return false;
}

std::vector<Atom> Expr::atoms() const {
  std::vector<Atom> v;
  num_.collectAtoms(v);
  den_.collectAtoms(v);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

namespace {

double evalAtomDouble(const Atom& a, const Point& pt) {
  switch (a.kind) {
    case AtomKind::CoordQ:
    case AtomKind::CoordP: {
      std::string name = (a.kind == AtomKind::CoordQ ? "q" : "p") +
                         std::to_string(a.index);
      auto it = pt.find(name);
      if (it == pt.end())
        throw Error("eval-missing", "point does not cover coordinate " + name);
      return it->second;
    }
    case AtomKind::ExpHalf: {
      std::string name = "q" + std::to_string(a.index);
      auto it = pt.find(name);
      if (it == pt.end())
        throw Error("eval-missing", "point does not cover coordinate " + name);
      return std::exp(0.5 * it->second);
    }
    default:
      throw Error("eval-formal",
                  "cannot evaluate unsubstituted formal atom " + a.str());
  }
}

double evalPolyDouble(const Poly& p, const Point& pt) {
  double acc = 0;
  for (const auto& [m, c] : p.terms()) {
    double t = c.get_d();
    for (const auto& [a, e] : m.factors) t *= std::pow(evalAtomDouble(a, pt), e);
    acc += t;
  }
  return acc;
}

Rational evalAtomRational(const Atom& a, const RationalPoint& pt) {
  if (a.kind != AtomKind::CoordQ && a.kind != AtomKind::CoordP)
    throw Error("eval-formal",
                "exact evaluation requires a rational-valued atom, got " + a.str());
  std::string name =
      (a.kind == AtomKind::CoordQ ? "q" : "p") + std::to_string(a.index);
  auto it = pt.find(name);
  if (it == pt.end())
    throw Error("eval-missing", "point does not cover coordinate " + name);
  return it->second;
}

Rational ratPow(Rational base, int e) {
  Rational acc(1);
  for (int i = 0; i < e; ++i) acc *= base;
  return acc;
}

Rational evalPolyRational(const Poly& p, const RationalPoint& pt) {
  Rational acc(0);
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    for (const auto& [a, e] : m.factors) t *= ratPow(evalAtomRational(a, pt), e);
    acc += t;
  }
  return acc;
}

}  // namespace

double Expr::evalDouble(const Point& pt) const {
  double d = evalPolyDouble(den_, pt);
  if (d == 0.0) throw Error("eval-singular", "denominator vanishes at point");
  return evalPolyDouble(num_, pt) / d;
}

Rational Expr::evalRational(const RationalPoint& pt) const {
  Rational d = evalPolyRational(den_, pt);
  if (d == 0) throw Error("eval-singular", "denominator vanishes at point");
  return evalPolyRational(num_, pt) / d;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

std::string linearQStr(const std::vector<std::pair<int, Rational>>& terms) {
  std::string out;
  auto emit = [&](int idx, const Rational& c) {
    if (!out.empty()) out += c > 0 ? "+" : "-";
    else if (c < 0) out += "-";
    Rational a = abs(c);
    if (a != 1) out += rationalStr(a) + "*";
    out += "q" + std::to_string(idx);
  };
  for (const auto& [idx, c] : terms)
    if (c > 0) emit(idx, c);
  for (const auto& [idx, c] : terms)
    if (c < 0) emit(idx, c);
  if (out.empty()) out = "0";
  return out;
}

// One monomial with its |coefficient|; exponential factors merge into exp().
std::string monomialStr(const Monomial& m, const Rational& absCoeff) {
  std::vector<std::string> parts;
  if (absCoeff != 1 || m.isOne()) parts.push_back(rationalStr(absCoeff));
  std::vector<std::pair<int, Rational>> expCombo;
  for (const auto& [a, e] : m.factors) {
    if (a.kind == AtomKind::ExpHalf) {
      Rational half(e, 2);
      half.canonicalize();
      expCombo.push_back({a.index, half});
      continue;
    }
    std::string s = a.str();
    if (e != 1) s += "^" + std::to_string(e);
    parts.push_back(s);
  }
  if (!expCombo.empty()) parts.push_back("exp(" + linearQStr(expCombo) + ")");
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += "*";
    out += parts[i];
  }
  return out;
}

std::string polyStr(const Poly& p) {
  if (p.isZero()) return "0";
  std::string out;
  for (const auto& [m, c] : p.terms()) {
    if (out.empty())
      out += c < 0 ? "-" : "";
    else
      out += c < 0 ? " - " : " + ";
    out += monomialStr(m, abs(c));
  }
  return out;
}

bool needsParens(const Poly& p) {
  if (p.terms().size() != 1) return true;
  return false;
}

}  // namespace

std::string Expr::str() const {
  if (den_.isConstant()) return polyStr(num_);
  std::string n = polyStr(num_);
  if (needsParens(num_)) n = "(" + n + ")";
  std::string d = polyStr(den_);
  const auto& dt = den_.terms()[0];
  bool dparen = den_.terms().size() > 1;
  if (!dparen) {
    // single term: needs parens when it has several factors or a coefficient
    int groups = 0;
    bool sawExp = false;
    for (const auto& [a, e] : dt.first.factors) {
      if (a.kind == AtomKind::ExpHalf) {
        if (!sawExp) ++groups;
        sawExp = true;
      } else {
        ++groups;
      }
    }
    if (dt.second != 1 || groups > 1) dparen = true;
  }
  if (dparen) d = "(" + d + ")";
  return n + "/" + d;
}

// ---------------------------------------------------------------------------
// Potentials

Potential Potential::custom(const Expr& ruleInSlot) {
  return Potential(Kind::Custom, ruleInSlot);
}

std::string Potential::name() const {
  switch (kind_) {
    case Kind::Formal: return "V";
    case Kind::Exp: return "exp";
    case Kind::Reciprocal: return "1/x";
    case Kind::InverseSquare: return "1/x^2";
    case Kind::Custom: return rule_.str();
  }
  return "?";
}

static Expr linearFormExpr(const LinearForm& arg) {
  Expr e;
  for (const auto& [idx, c] : arg.terms)
    e += Expr::q(idx) * Expr(Rational(static_cast<long>(c)));
  return e;
}

Expr Potential::derivativeAt(int k, const LinearForm& arg) const {
  switch (kind_) {
    case Kind::Formal:
      throw Error("bad-arg", "formal potential has no concrete derivatives");
    case Kind::Exp: {
      std::vector<std::pair<int, Rational>> combo;
      for (const auto& [idx, c] : arg.terms)
        combo.push_back({idx, Rational(static_cast<long>(c))});
      return Expr::expLinear(combo);
    }
    case Kind::Reciprocal: {
      // d^k/dx^k (1/x) = (-1)^k k! / x^{k+1}
      Rational c(1);
      for (int i = 2; i <= k; ++i) c *= i;
      if (k % 2) c = -c;
      return Expr(c) / linearFormExpr(arg).pow(k + 1);
    }
    case Kind::InverseSquare: {
      // d^k/dx^k (1/x^2) = (-1)^k (k+1)! / x^{k+2}
      Rational c(1);
      for (int i = 2; i <= k + 1; ++i) c *= i;
      if (k % 2) c = -c;
      return Expr(c) / linearFormExpr(arg).pow(k + 2);
    }
    case Kind::Custom: {
      while (static_cast<int>(derivCache_.size()) <= k) {
        if (derivCache_.empty())
          derivCache_.push_back(rule_);
        else
          derivCache_.push_back(derivCache_.back().diff(Atom::slot()));
      }
      return derivCache_[static_cast<size_t>(k)].substituteAtom(
          Atom::slot(), linearFormExpr(arg));
    }
  }
  throw Error("internal", "unreachable potential kind");
}

Expr substituteFormal(const Expr& e, const std::string& fnName,
                      const Potential& rule) {
  int fnId = internFunctionName(fnName);
  Expr out = e;
  while (true) {
    std::optional<Atom> target;
    for (const Atom& a : out.atoms())
      if (a.kind == AtomKind::Formal && a.fn == fnId) {
        target = a;
        break;
      }
    if (!target) break;
    out = out.substituteAtom(*target, rule.derivativeAt(target->deriv, target->arg));
  }
  return out;
}

}  // namespace pqn
