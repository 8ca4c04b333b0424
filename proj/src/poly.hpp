#pragma once

#include <gmpxx.h>

#include <functional>
#include <map>
#include <vector>

#include "atom.hpp"

namespace pqn {

using Rational = mpq_class;

/// Product of atom powers; factors sorted by atom order, exponents >= 1.
/// Negative exponents never appear here: Laurent behaviour of exponentials is
/// realised through the fraction field (Expr).
struct Monomial {
  std::vector<std::pair<Atom, int>> factors;

  bool isOne() const { return factors.empty(); }
  int degree() const;
  int degreeIn(const Atom& a) const;
  bool operator==(const Monomial& o) const { return factors == o.factors; }
  static Monomial one() { return {}; }
  static Monomial atom(const Atom& a, int e = 1);
};

Monomial operator*(const Monomial& a, const Monomial& b);
bool monomialDivides(const Monomial& a, const Monomial& b);      // a | b
Monomial monomialQuotient(const Monomial& b, const Monomial& a); // b / a
Monomial monomialGcd(const Monomial& a, const Monomial& b);

/// Lexicographic monomial order over the canonical atom sequence; total,
/// multiplicative, with 1 as the least element.
bool monomialLess(const Monomial& a, const Monomial& b);

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return monomialLess(a, b);
  }
};

/// Sparse multivariate polynomial over Q, terms in descending monomial order.
class Poly {
public:
  using Term = std::pair<Monomial, Rational>;

  Poly() = default;
  explicit Poly(const Rational& c);
  explicit Poly(const Atom& a);
  static Poly fromTerms(std::map<Monomial, Rational, MonomialLess> acc);

  bool isZero() const { return terms_.empty(); }
  bool isConstant() const;
  bool isMonomialTimesConstant() const { return terms_.size() <= 1; }
  const std::vector<Term>& terms() const { return terms_; }
  const Term& leading() const { return terms_.front(); }
  int totalDegree() const;
  int degreeIn(const Atom& a) const;
  bool operator==(const Poly& o) const { return terms_ == o.terms_; }

  Poly operator-() const;
  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);

  /// Every atom occurring in the polynomial, in canonical order.
  std::vector<Atom> atoms() const;
  void collectAtoms(std::vector<Atom>& out) const;

  /// Partial derivative with respect to one atom treated as an independent
  /// generator (no chain rule; Expr applies the chain rule on top of this).
  Poly derivativeByGenerator(const Atom& a) const;

private:
  std::vector<Term> terms_;
  friend Poly operator*(const Poly& a, const Rational& c);
};

Poly operator+(const Poly& a, const Poly& b);
Poly operator-(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Poly& b);
Poly operator*(const Poly& a, const Rational& c);
Poly operator*(const Poly& a, const Monomial& m);

/// Exact division; throws Error("internal") if the division has a remainder.
Poly exactDivide(const Poly& a, const Poly& b);

/// Exact division that reports failure instead of throwing.
bool tryExactDivide(const Poly& a, const Poly& b, Poly& quotient);

/// GCD over Q[atoms], returned primitive with positive integer leading
/// coefficient (1 for coprime inputs).
Poly polyGcd(const Poly& a, const Poly& b);

}  // namespace pqn
