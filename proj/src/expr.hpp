#pragma once

#include <map>
#include <optional>
#include <string>

#include "poly.hpp"

namespace pqn {

/// Numeric evaluation point: coordinate name ("q1", "p2") -> value.
using Point = std::map<std::string, double>;
using RationalPoint = std::map<std::string, Rational>;

/// Exact scalar: GCD-reduced fraction of sparse polynomials over Q with a
/// monic denominator; zero is 0/1 and equality is structural.
class Expr {
public:
  Expr() : num_(), den_(Rational(1)) {}
  explicit Expr(long v) : num_(Rational(v)), den_(Rational(1)) {}
  explicit Expr(const Rational& c) : num_(c), den_(Rational(1)) {}
  explicit Expr(const Atom& a) : num_(a), den_(Rational(1)) {}
  Expr(Poly num, Poly den);  // normalizes

  static Expr q(int i) { return Expr(Atom::q(i)); }
  static Expr p(int i) { return Expr(Atom::p(i)); }
  /// e^{sum c_i q_i} for rational c_i with denominator dividing 2.
  static Expr expLinear(const std::vector<std::pair<int, Rational>>& combo);

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  bool isZero() const { return num_.isZero(); }
  bool isConstant() const { return num_.isConstant() && den_.isConstant(); }
  bool operator==(const Expr& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const Expr& o) const { return !(*this == o); }

  Expr operator-() const;
  Expr& operator+=(const Expr& o);
  Expr& operator-=(const Expr& o);
  Expr& operator*=(const Expr& o);
  Expr& operator/=(const Expr& o);
  Expr pow(int k) const;

  /// Partial derivative with the chain rule for exponentials and formal
  /// function atoms; x must be a q/p coordinate or the potential slot.
  Expr diff(const Atom& x) const;

  /// Replace one generator atom by an arbitrary expression.
  Expr substituteAtom(const Atom& a, const Expr& value) const;

  double evalDouble(const Point& pt) const;
  Rational evalRational(const RationalPoint& pt) const;
  /// True if the expression contains exponential or formal/slot atoms, in
  /// which case exact rational evaluation is unavailable.
  bool hasTranscendentalAtoms() const;

  std::vector<Atom> atoms() const;
  std::string str() const;

private:
  void normalize();
  Poly num_, den_;
};

Expr operator+(Expr a, const Expr& b);
Expr operator-(Expr a, const Expr& b);
Expr operator*(Expr a, const Expr& b);
Expr operator/(Expr a, const Expr& b);

/// Concrete rule for a formal unary function.
class Potential {
public:
  enum class Kind { Formal, Exp, Reciprocal, InverseSquare, Custom };

  static Potential formal() { return Potential(Kind::Formal, Expr()); }
  static Potential exponential() { return Potential(Kind::Exp, Expr()); }
  static Potential reciprocal() { return Potential(Kind::Reciprocal, Expr()); }
  static Potential inverseSquare() { return Potential(Kind::InverseSquare, Expr()); }
  static Potential custom(const Expr& ruleInSlot);
  /// Accepts "V" (formal), "exp", "1/x", "1/x^2", or an expression in x.
  static Potential parse(const std::string& text);

  Kind kind() const { return kind_; }
  std::string name() const;
  bool isFormal() const { return kind_ == Kind::Formal; }

  /// k-th derivative of the rule evaluated at the linear argument.
  Expr derivativeAt(int k, const LinearForm& arg) const;

private:
  Potential(Kind k, Expr rule) : kind_(k), rule_(std::move(rule)) {}
  Kind kind_;
  Expr rule_;
  mutable std::vector<Expr> derivCache_;  // Custom only, guarded by caller use
};

/// Replace every derivative atom of the named formal function by the
/// corresponding derivative of the rule, then normalize.
Expr substituteFormal(const Expr& e, const std::string& fnName, const Potential& rule);

std::string rationalStr(const Rational& r);

}  // namespace pqn
