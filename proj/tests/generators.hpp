#pragma once

// Deterministic random generators shared by the property tests and the
// acceptance suite. Everything is seeded explicitly so failures reproduce.

#include <random>

#include "models.hpp"
#include "parser.hpp"

namespace pqn::testgen {

class Gen {
public:
  explicit Gen(unsigned seed) : rng_(seed) {}

  int range(int lo, int hi) {  // inclusive
    return lo + static_cast<int>(rng_() % static_cast<unsigned>(hi - lo + 1));
  }

  Rational smallRational() {
    int num = range(-3, 3);
    if (num == 0) num = 1;
    int den = range(1, 2);
    Rational r(num, den);
    r.canonicalize();
    return r;
  }

  /// Small polynomial in the chart coordinates; optionally with exponential
  /// factors e^{q_i - q_j} and formal V atoms.
  Expr expr(const Chart& c, bool withExp = true, bool withFormal = false) {
    Expr e;
    int terms = range(1, 3);
    for (int t = 0; t < terms; ++t) {
      Expr term{smallRational()};
      int factors = range(0, 2);
      for (int f = 0; f < factors; ++f)
        term = term * Expr(c.coordAtom(range(0, c.dim() - 1)));
      if (withExp && range(0, 2) == 0) {
        int i = range(1, c.n), j = range(1, c.n);
        if (i != j)
          term = term * Expr::expLinear({{i, Rational(1)}, {j, Rational(-1)}});
      }
      if (withFormal && range(0, 2) == 0) {
        LinearForm arg;
        int i = range(1, c.n), j = range(1, c.n);
        if (i != j) {
          arg.addTerm(i, 1);
          arg.addTerm(j, -1);
          term = term * Expr(Atom::formal(internFunctionName("V"), range(0, 2), arg));
        }
      }
      e += term;
    }
    return e;
  }

  /// Rational function: polynomial, or polynomial over a small denominator.
  Expr rationalExpr(const Chart& c) {
    Expr num = expr(c, true, false);
    if (range(0, 2) == 0) {
      Expr den = Expr(c.coordAtom(range(0, c.dim() - 1))) + Expr(Rational(range(1, 3)));
      return num / den;
    }
    return num;
  }

  TensorField form(const Chart& c, int k, bool withExp = true) {
    if (k == 0) return TensorField::function(c, expr(c, withExp));
    TensorField f = TensorField::form(c, k);
    int comps = range(1, 2);
    for (int t = 0; t < comps; ++t) {
      std::vector<int> idx;
      for (int s = 0; s < k; ++s) idx.push_back(range(0, c.dim() - 1));
      int sign = sortSign(idx);
      if (sign == 0) continue;
      Expr v = expr(c, withExp);
      if (sign < 0) v = -v;
      f.add(idx, v);
    }
    return f;
  }

  TensorField multivector(const Chart& c, int k, bool withExp = true) {
    if (k == 0) return TensorField::function(c, expr(c, withExp));
    TensorField f = k == 1 ? TensorField::vectorField(c)
                           : TensorField::multivector(c, k);
    int comps = range(1, 2);
    for (int t = 0; t < comps; ++t) {
      std::vector<int> idx;
      for (int s = 0; s < k; ++s) idx.push_back(range(0, c.dim() - 1));
      int sign = sortSign(idx);
      if (sign == 0) continue;
      Expr v = expr(c, withExp);
      if (sign < 0) v = -v;
      f.add(idx, v);
    }
    return f;
  }

  TensorField vectorField(const Chart& c, bool withExp = true) {
    return multivector(c, 1, withExp);
  }

  RationalPoint rationalPoint(const Chart& c) {
    RationalPoint pt;
    for (int i = 0; i < c.dim(); ++i) {
      Rational r(range(-9, 9), range(1, 3));
      r.canonicalize();
      pt[c.coordName(i)] = r;
    }
    return pt;
  }

private:
  std::mt19937 rng_;
};

/// Builds a tensor field from (index..., expression-text) rows; indices are
/// 1-based, matching ordinary matrix notation.
inline TensorField formFixture(const Chart& c, int degree,
                               const std::vector<std::pair<std::vector<int>, std::string>>& rows) {
  TensorField f = degree == 0 ? TensorField::function(c, Expr())
                              : TensorField::form(c, degree);
  for (const auto& [idx1, text] : rows) {
    std::vector<int> idx;
    for (int i : idx1) idx.push_back(i - 1);
    f.add(idx, parseExpr(text));
  }
  return f;
}

inline TensorField multivectorFixture(
    const Chart& c, int degree,
    const std::vector<std::pair<std::vector<int>, std::string>>& rows) {
  TensorField f = TensorField::multivector(c, degree);
  for (const auto& [idx1, text] : rows) {
    std::vector<int> idx;
    for (int i : idx1) idx.push_back(i - 1);
    f.add(idx, parseExpr(text));
  }
  return f;
}

inline ExprMatrix matrixFixture(const std::vector<std::vector<std::string>>& rows) {
  ExprMatrix m(static_cast<int>(rows.size()),
               static_cast<int>(rows.empty() ? 0 : rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < rows[i].size(); ++j)
      m.at(static_cast<int>(i), static_cast<int>(j)) = parseExpr(rows[i][j]);
  return m;
}

}  // namespace pqn::testgen
