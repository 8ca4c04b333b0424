#include "poly.hpp"

#include <algorithm>
#include <optional>

namespace pqn {

int Monomial::degree() const {
  int d = 0;
  for (const auto& [a, e] : factors) d += e;
  return d;
}

int Monomial::degreeIn(const Atom& a) const {
  for (const auto& [at, e] : factors)
    if (at == a) return e;
  return 0;
}

Monomial Monomial::atom(const Atom& a, int e) {
  Monomial m;
  if (e != 0) m.factors.push_back({a, e});
  return m;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.factors.reserve(a.factors.size() + b.factors.size());
  size_t i = 0, j = 0;
  while (i < a.factors.size() && j < b.factors.size()) {
    if (a.factors[i].first == b.factors[j].first) {
      int e = a.factors[i].second + b.factors[j].second;
      if (e != 0) out.factors.push_back({a.factors[i].first, e});
      ++i, ++j;
    } else if (a.factors[i].first < b.factors[j].first) {
      out.factors.push_back(a.factors[i++]);
    } else {
      out.factors.push_back(b.factors[j++]);
    }
  }
  for (; i < a.factors.size(); ++i) out.factors.push_back(a.factors[i]);
  for (; j < b.factors.size(); ++j) out.factors.push_back(b.factors[j]);
  return out;
}

bool monomialDivides(const Monomial& a, const Monomial& b) {
  size_t j = 0;
  for (const auto& [at, e] : a.factors) {
    while (j < b.factors.size() && b.factors[j].first < at) ++j;
    if (j >= b.factors.size() || !(b.factors[j].first == at) ||
        b.factors[j].second < e)
      return false;
  }
  return true;
}

Monomial monomialQuotient(const Monomial& b, const Monomial& a) {
  Monomial out;
  size_t i = 0;
  for (const auto& [at, e] : b.factors) {
    int sub = 0;
    while (i < a.factors.size() && a.factors[i].first < at) ++i;
    if (i < a.factors.size() && a.factors[i].first == at) sub = a.factors[i].second;
    int r = e - sub;
    if (r < 0) throw Error("internal", "monomialQuotient: not divisible");
    if (r > 0) out.factors.push_back({at, r});
  }
  return out;
}

Monomial monomialGcd(const Monomial& a, const Monomial& b) {
  Monomial out;
  size_t j = 0;
  for (const auto& [at, e] : a.factors) {
    while (j < b.factors.size() && b.factors[j].first < at) ++j;
    if (j < b.factors.size() && b.factors[j].first == at)
      out.factors.push_back({at, std::min(e, b.factors[j].second)});
  }
  return out;
}

bool monomialLess(const Monomial& a, const Monomial& b) {
  size_t i = 0, j = 0;
  while (i < a.factors.size() && j < b.factors.size()) {
    const auto& fa = a.factors[i];
    const auto& fb = b.factors[j];
    if (fa.first == fb.first) {
      if (fa.second != fb.second) return fa.second < fb.second;
      ++i, ++j;
    } else if (fa.first < fb.first) {
      return false;  // a has a positive power where b has zero: a is larger
    } else {
      return true;
    }
  }
  if (i < a.factors.size()) return false;
  if (j < b.factors.size()) return true;
  return false;
}

Poly::Poly(const Rational& c) {
  if (c != 0) terms_.push_back({Monomial::one(), c});
}

Poly::Poly(const Atom& a) { terms_.push_back({Monomial::atom(a), Rational(1)}); }

Poly Poly::fromTerms(std::map<Monomial, Rational, MonomialLess> acc) {
  Poly p;
  p.terms_.reserve(acc.size());
  for (auto it = acc.rbegin(); it != acc.rend(); ++it)
    if (it->second != 0) p.terms_.push_back({it->first, it->second});
  return p;
}

bool Poly::isConstant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_[0].first.isOne());
}

int Poly::totalDegree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

int Poly::degreeIn(const Atom& a) const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degreeIn(a));
  return d;
}

Poly Poly::operator-() const {
  Poly out = *this;
  for (auto& [m, c] : out.terms_) c = -c;
  return out;
}

namespace {
// Merge two descending term lists.
std::vector<Poly::Term> mergeTerms(const std::vector<Poly::Term>& a,
                                   const std::vector<Poly::Term>& b, bool sub) {
  std::vector<Poly::Term> out;
  out.reserve(a.size() + b.size());
  size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first == b[j].first) {
      Rational c = sub ? Rational(a[i].second - b[j].second)
                       : Rational(a[i].second + b[j].second);
      if (c != 0) out.push_back({a[i].first, c});
      ++i, ++j;
    } else if (monomialLess(b[j].first, a[i].first)) {
      out.push_back(a[i++]);
    } else {
      out.push_back({b[j].first, sub ? -b[j].second : b[j].second});
      ++j;
    }
  }
  for (; i < a.size(); ++i) out.push_back(a[i]);
  for (; j < b.size(); ++j) out.push_back({b[j].first, sub ? -b[j].second : b[j].second});
  return out;
}
}  // namespace

Poly& Poly::operator+=(const Poly& o) {
  terms_ = mergeTerms(terms_, o.terms_, false);
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  terms_ = mergeTerms(terms_, o.terms_, true);
  return *this;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out = a;
  out += b;
  return out;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly out = a;
  out -= b;
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  if (a.isZero() || b.isZero()) return Poly();
  if (b.terms().size() == 1) {
    const auto& [bm, bc] = b.terms()[0];
    Poly out;
    std::map<Monomial, Rational, MonomialLess> acc;
    for (const auto& [m, c] : a.terms()) acc[m * bm] = c * bc;
    return Poly::fromTerms(std::move(acc));
  }
  std::map<Monomial, Rational, MonomialLess> acc;
  for (const auto& [am, ac] : a.terms())
    for (const auto& [bm, bc] : b.terms()) {
      Monomial m = am * bm;
      auto it = acc.find(m);
      if (it == acc.end())
        acc.emplace(std::move(m), ac * bc);
      else
        it->second += ac * bc;
    }
  return Poly::fromTerms(std::move(acc));
}

Poly operator*(const Poly& a, const Rational& c) {
  if (c == 0) return Poly();
  Poly out = a;
  for (auto& [m, coeff] : out.terms_) coeff *= c;
  return out;
}

Poly operator*(const Poly& a, const Monomial& m) {
  std::map<Monomial, Rational, MonomialLess> acc;
  for (const auto& [am, ac] : a.terms()) acc[am * m] = ac;
  return Poly::fromTerms(std::move(acc));
}

bool tryExactDivide(const Poly& a, const Poly& b, Poly& quotient) {
  if (b.isZero()) return false;
  if (a.isZero()) {
    quotient = Poly();
    return true;
  }
  Poly rem = a;
  std::map<Monomial, Rational, MonomialLess> quot;
  const auto& lb = b.leading();
  while (!rem.isZero()) {
    const auto& la = rem.leading();
    if (!monomialDivides(lb.first, la.first)) return false;
    Monomial qm = monomialQuotient(la.first, lb.first);
    Rational qc = la.second / lb.second;
    quot[qm] += qc;
    std::map<Monomial, Rational, MonomialLess> tacc;
    tacc[qm] = qc;
    rem -= b * Poly::fromTerms(std::move(tacc));
  }
  quotient = Poly::fromTerms(std::move(quot));
  return true;
}

void Poly::collectAtoms(std::vector<Atom>& out) const {
  for (const auto& [m, c] : terms_)
    for (const auto& [a, e] : m.factors) out.push_back(a);
}

std::vector<Atom> Poly::atoms() const {
  std::vector<Atom> v;
  collectAtoms(v);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Poly Poly::derivativeByGenerator(const Atom& a) const {
  std::map<Monomial, Rational, MonomialLess> acc;
  for (const auto& [m, c] : terms_) {
    for (size_t t = 0; t < m.factors.size(); ++t) {
      if (!(m.factors[t].first == a)) continue;
      int e = m.factors[t].second;
      Monomial red = m;
      if (e == 1)
        red.factors.erase(red.factors.begin() + static_cast<long>(t));
      else
        red.factors[t].second = e - 1;
      acc[red] += c * e;
    }
  }
  return Poly::fromTerms(std::move(acc));
}

Poly exactDivide(const Poly& a, const Poly& b) {
  if (b.isZero()) throw Error("internal", "exactDivide by zero");
  if (a.isZero()) return Poly();
  Poly rem = a;
  std::map<Monomial, Rational, MonomialLess> quot;
  const auto& lb = b.leading();
  while (!rem.isZero()) {
    const auto& la = rem.leading();
    if (!monomialDivides(lb.first, la.first))
      throw Error("internal", "exactDivide: remainder");
    Monomial qm = monomialQuotient(la.first, lb.first);
    Rational qc = la.second / lb.second;
    quot[qm] += qc;
    Poly t;
    std::map<Monomial, Rational, MonomialLess> tacc;
    tacc[qm] = qc;
    rem -= b * Poly::fromTerms(std::move(tacc));
  }
  return Poly::fromTerms(std::move(quot));
}

namespace {

// Rational content: factor making the polynomial integer and primitive with a
// positive leading coefficient.
Rational rationalContent(const Poly& p) {
  if (p.isZero()) return Rational(1);
  mpz_class num = 0, den = 1;
  for (const auto& [m, c] : p.terms()) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), num.get_mpz_t(), c.get_num().get_mpz_t());
    num = g;
    mpz_lcm(g.get_mpz_t(), den.get_mpz_t(), c.get_den().get_mpz_t());
    den = g;
  }
  Rational content(num, den);
  content.canonicalize();
  if (p.leading().second < 0) content = -content;
  return content;
}

Poly makePrimitive(const Poly& p) {
  if (p.isZero()) return p;
  Rational c = rationalContent(p);
  return p * (Rational(1) / c);
}

// Recursive view of a polynomial as univariate in `x` with Poly coefficients.
std::map<int, Poly> univariateIn(const Poly& p, const Atom& x) {
  std::map<int, Poly> out;
  std::map<int, std::map<Monomial, Rational, MonomialLess>> acc;
  for (const auto& [m, c] : p.terms()) {
    int e = 0;
    Monomial rest;
    rest.factors.reserve(m.factors.size());
    for (const auto& f : m.factors) {
      if (f.first == x)
        e = f.second;
      else
        rest.factors.push_back(f);
    }
    acc[e][rest] += c;
  }
  for (auto& [e, terms] : acc) {
    Poly coeff = Poly::fromTerms(std::move(terms));
    if (!coeff.isZero()) out[e] = std::move(coeff);
  }
  return out;
}

Poly fromUnivariate(const std::map<int, Poly>& u, const Atom& x) {
  Poly out;
  for (const auto& [e, coeff] : u) out += coeff * Monomial::atom(x, e);
  return out;
}

int uniDegree(const std::map<int, Poly>& u) {
  return u.empty() ? -1 : u.rbegin()->first;
}

// Content of p with respect to x: gcd of the coefficient polynomials.
Poly contentIn(const Poly& p, const Atom& x) {
  auto u = univariateIn(p, x);
  Poly g;
  for (const auto& [e, coeff] : u) {
    g = polyGcd(g, coeff);
    if (g.isConstant() && !g.isZero()) break;
  }
  return g;
}

// ---------------------------------------------------------------------------
// Heuristic GCD by integer substitution (division-verified, with the
// pseudo-remainder sequence as fallback). Operates on integer-primitive
// polynomials.

mpz_class polyHeight(const Poly& p) {
  mpz_class h = 0;
  for (const auto& [m, c] : p.terms()) {
    mpz_class a = abs(c.get_num());
    if (a > h) h = a;
  }
  return h;
}

// Evaluate x := xi (a large integer), keeping the other atoms symbolic.
Poly evalAtInteger(const Poly& p, const Atom& x, const mpz_class& xi) {
  std::map<Monomial, Rational, MonomialLess> acc;
  for (const auto& [m, c] : p.terms()) {
    int e = 0;
    Monomial rest;
    rest.factors.reserve(m.factors.size());
    for (const auto& f : m.factors) {
      if (f.first == x)
        e = f.second;
      else
        rest.factors.push_back(f);
    }
    Rational v = c;
    if (e > 0) {
      mpz_class pw;
      mpz_pow_ui(pw.get_mpz_t(), xi.get_mpz_t(), static_cast<unsigned long>(e));
      v *= Rational(pw);
    }
    acc[rest] += v;
  }
  return Poly::fromTerms(std::move(acc));
}

// Interpret g as a base-xi expansion in x with balanced digits.
Poly reconstructFromBase(Poly g, const Atom& x, const mpz_class& xi) {
  Poly out;
  int e = 0;
  mpz_class halfXi = xi / 2;
  while (!g.isZero()) {
    // digit = g symmetric-mod xi, applied coefficient-wise
    std::map<Monomial, Rational, MonomialLess> digit;
    for (const auto& [m, c] : g.terms()) {
      mpz_class r;
      mpz_mod(r.get_mpz_t(), c.get_num().get_mpz_t(), xi.get_mpz_t());
      if (r > halfXi) r -= xi;
      if (r != 0) digit[m] = Rational(r);
    }
    Poly digitPoly = Poly::fromTerms(std::move(digit));
    out += digitPoly * Monomial::atom(x, e);
    g = (g - digitPoly) * Rational(Rational(1) / Rational(xi));
    ++e;
    if (e > 4096) throw Error("internal", "heuristic gcd reconstruction ran away");
  }
  return out;
}

bool integerCoefficients(const Poly& p) {
  for (const auto& [m, c] : p.terms())
    if (c.get_den() != 1) return false;
  return true;
}

// Exact division over Z[atoms]: quotient must have integer coefficients.
bool dividesOverZ(const Poly& a, const Poly& g) {
  Poly q;
  return tryExactDivide(a, g, q) && integerCoefficients(q);
}

// Substitution heuristic on integer-coefficient polynomials. Integer content
// is deliberately carried through the recursion: at inner levels it encodes
// the evaluated images of factors living in the outer variables. nullopt =
// retry/fallback.
std::optional<Poly> gcdHeuristic(const Poly& a, const Poly& b,
                                 const std::vector<Atom>& vars) {
  if (vars.empty()) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), a.leading().second.get_num().get_mpz_t(),
            b.leading().second.get_num().get_mpz_t());
    return Poly(Rational(g));
  }
  const Atom& x = vars.back();
  std::vector<Atom> rest(vars.begin(), vars.end() - 1);
  mpz_class ha = polyHeight(a), hb = polyHeight(b);
  mpz_class xi = 2 * (ha < hb ? ha : hb) + 29;
  int degBound = std::max(a.degreeIn(x), b.degreeIn(x)) + 1;
  for (int attempt = 0; attempt < 6; ++attempt) {
    if (mpz_sizeinbase(xi.get_mpz_t(), 2) * static_cast<size_t>(degBound) >
        200000)
      break;  // digits would blow up; let the remainder sequence handle it
    Poly ea = evalAtInteger(a, x, xi);
    Poly eb = evalAtInteger(b, x, xi);
    if (!ea.isZero() && !eb.isZero()) {
      std::vector<Atom> sub;
      for (const Atom& v : rest)
        if (ea.degreeIn(v) > 0 || eb.degreeIn(v) > 0) sub.push_back(v);
      std::optional<Poly> g = gcdHeuristic(ea, eb, sub);
      if (g && !g->isZero()) {
        Poly cand = reconstructFromBase(*g, x, xi);
        if (!cand.isZero() && dividesOverZ(a, cand) && dividesOverZ(b, cand))
          return cand;
      }
    }
    xi = xi * 73794 / 27011 + 47;
  }
  return std::nullopt;
}

Poly gcdCore(const Poly& ra, const Poly& rb);

// Pseudo-remainder of a by b in the main variable x.
Poly pseudoRemainder(const Poly& a, const Poly& b, const Atom& x) {
  auto ua = univariateIn(a, x);
  auto ub = univariateIn(b, x);
  int db = uniDegree(ub);
  Poly lcB = ub.rbegin()->second;
  Poly rem = a;
  int da = uniDegree(ua);
  while (true) {
    auto ur = univariateIn(rem, x);
    int dr = uniDegree(ur);
    if (dr < db || rem.isZero()) break;
    Poly lcR = ur.rbegin()->second;
    // rem <- lcB*rem - lcR*x^(dr-db)*b
    rem = lcB * rem - (lcR * Monomial::atom(x, dr - db)) * b;
    if (uniDegree(univariateIn(rem, x)) >= dr && !rem.isZero())
      throw Error("internal", "pseudoRemainder failed to reduce degree");
  }
  (void)da;
  return rem;
}

// Content of p with respect to the complement of keep: group the terms by
// their monomial in atoms outside `keep` and take the gcd of the coefficient
// polynomials. The gcd of p with any polynomial supported inside `keep`
// divides this content.
Poly contentOverVars(const Poly& p, const std::vector<Atom>& keep) {
  std::map<Monomial, std::map<Monomial, Rational, MonomialLess>, MonomialLess> groups;
  for (const auto& [m, c] : p.terms()) {
    Monomial inside, outside;
    for (const auto& f : m.factors) {
      if (std::binary_search(keep.begin(), keep.end(), f.first,
                             [](const Atom& x, const Atom& y) { return x < y; }))
        inside.factors.push_back(f);
      else
        outside.factors.push_back(f);
    }
    groups[outside][inside] += c;
  }
  Poly g;
  for (auto& [outside, terms] : groups) {
    g = polyGcd(g, Poly::fromTerms(std::move(terms)));
    if (g.isConstant() && !g.isZero()) return Poly(Rational(1));
  }
  return g;
}

// GCD of monomial-content-free, integer-primitive polynomials: cheap shapes,
// support reduction, the substitution heuristic, then the primitive
// pseudo-remainder sequence as the guaranteed fallback.
Poly gcdCore(const Poly& ra0, const Poly& rb0) {
  Poly ra = ra0, rb = rb0;
  if (ra.isConstant() || rb.isConstant()) return Poly(Rational(1));
  if (ra == rb) return ra;

  std::vector<Atom> aa = ra.atoms(), ab = rb.atoms();
  std::vector<Atom> common;
  std::set_intersection(aa.begin(), aa.end(), ab.begin(), ab.end(),
                        std::back_inserter(common),
                        [](const Atom& x, const Atom& y) { return x < y; });
  if (common.empty()) return Poly(Rational(1));

  // The gcd lives inside the common support: shrink either side that uses
  // extra atoms to its content over the shared ones. This keeps the variable
  // count low (fraction denominators typically involve few atoms) and exits
  // early for coprime inputs.
  if (aa != common) {
    ra = makePrimitive(contentOverVars(ra, common));
    if (ra.isConstant()) return Poly(Rational(1));
  }
  if (ab != common) {
    rb = makePrimitive(contentOverVars(rb, common));
    if (rb.isConstant()) return Poly(Rational(1));
  }
  if (aa != common || ab != common) return polyGcd(ra, rb);

  Poly quotient;
  if (tryExactDivide(ra, rb, quotient)) return rb;
  if (tryExactDivide(rb, ra, quotient)) return ra;

  if (std::optional<Poly> h = gcdHeuristic(ra, rb, common)) return *h;

  // Primitive pseudo-remainder sequence in the smallest shared variable.
  const Atom& x = common.front();
  Poly contA = contentIn(ra, x);
  Poly contB = contentIn(rb, x);
  Poly contG = polyGcd(contA, contB);
  Poly f = exactDivide(ra, contA);
  Poly g = exactDivide(rb, contB);
  if (f.degreeIn(x) < g.degreeIn(x)) std::swap(f, g);
  Poly core;
  while (true) {
    Poly r = pseudoRemainder(f, g, x);
    if (r.isZero()) {
      core = g;
      break;
    }
    if (r.degreeIn(x) == 0) {
      core = Poly(Rational(1));
      break;
    }
    f = g;
    g = makePrimitive(exactDivide(r, contentIn(r, x)));
  }
  if (!core.isConstant()) core = exactDivide(core, contentIn(core, x));
  return makePrimitive(core * contG);
}

}  // namespace

Poly polyGcd(const Poly& a, const Poly& b) {
  if (a.isZero()) return makePrimitive(b);
  if (b.isZero()) return makePrimitive(a);

  // Split off the monomial content first; it covers the common cases cheaply.
  Monomial ma = a.terms().front().first;
  for (const auto& [m, c] : a.terms()) ma = monomialGcd(ma, m);
  Monomial mb = b.terms().front().first;
  for (const auto& [m, c] : b.terms()) mb = monomialGcd(mb, m);
  Monomial mg = monomialGcd(ma, mb);

  // Reduce both by their monomial content.
  Poly ra, rb;
  {
    std::map<Monomial, Rational, MonomialLess> acc;
    for (const auto& [m, c] : a.terms()) acc[monomialQuotient(m, ma)] = c;
    ra = makePrimitive(Poly::fromTerms(std::move(acc)));
  }
  {
    std::map<Monomial, Rational, MonomialLess> acc;
    for (const auto& [m, c] : b.terms()) acc[monomialQuotient(m, mb)] = c;
    rb = makePrimitive(Poly::fromTerms(std::move(acc)));
  }

  Poly core = gcdCore(ra, rb);
  return makePrimitive(core * mg);
}

}  // namespace pqn
