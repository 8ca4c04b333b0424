#include <doctest.h>

#include "generators.hpp"

using namespace pqn;
using pqn::testgen::Gen;
using pqn::testgen::formFixture;
using pqn::testgen::matrixFixture;
using pqn::testgen::multivectorFixture;

namespace {

ExprMatrix closedTodaN4() {
  return matrixFixture({
      {"p1", "0", "0", "0", "0", "1", "1", "1"},
      {"0", "p2", "0", "0", "-1", "0", "1", "1"},
      {"0", "0", "p3", "0", "-1", "-1", "0", "1"},
      {"0", "0", "0", "p4", "-1", "-1", "-1", "0"},
      {"0", "-exp(q1-q2)", "0", "-exp(q4-q1)", "p1", "0", "0", "0"},
      {"exp(q1-q2)", "0", "-exp(q2-q3)", "0", "0", "p2", "0", "0"},
      {"0", "exp(q2-q3)", "0", "-exp(q3-q4)", "0", "0", "p3", "0"},
      {"exp(q4-q1)", "0", "exp(q3-q4)", "0", "0", "0", "0", "p4"},
  });
}

ExprMatrix openTodaN4() {
  return matrixFixture({
      {"p1", "0", "0", "0", "0", "1", "1", "1"},
      {"0", "p2", "0", "0", "-1", "0", "1", "1"},
      {"0", "0", "p3", "0", "-1", "-1", "0", "1"},
      {"0", "0", "0", "p4", "-1", "-1", "-1", "0"},
      {"0", "-exp(q1-q2)", "0", "0", "p1", "0", "0", "0"},
      {"exp(q1-q2)", "0", "-exp(q2-q3)", "0", "0", "p2", "0", "0"},
      {"0", "exp(q2-q3)", "0", "-exp(q3-q4)", "0", "0", "p3", "0"},
      {"0", "0", "exp(q3-q4)", "0", "0", "0", "0", "p4"},
  });
}

ExprMatrix closedTodaPiPrime4() {
  return matrixFixture({
      {"0", "-1", "-1", "-1", "p1", "0", "0", "0"},
      {"1", "0", "-1", "-1", "0", "p2", "0", "0"},
      {"1", "1", "0", "-1", "0", "0", "p3", "0"},
      {"1", "1", "1", "0", "0", "0", "0", "p4"},
      {"-p1", "0", "0", "0", "0", "-exp(q1-q2)", "0", "-exp(q4-q1)"},
      {"0", "-p2", "0", "0", "exp(q1-q2)", "0", "-exp(q2-q3)", "0"},
      {"0", "0", "-p3", "0", "0", "exp(q2-q3)", "0", "-exp(q3-q4)"},
      {"0", "0", "0", "-p4", "exp(q4-q1)", "0", "exp(q3-q4)", "0"},
  });
}

ExprMatrix openTodaPiPrime4() {
  return matrixFixture({
      {"0", "-1", "-1", "-1", "p1", "0", "0", "0"},
      {"1", "0", "-1", "-1", "0", "p2", "0", "0"},
      {"1", "1", "0", "-1", "0", "0", "p3", "0"},
      {"1", "1", "1", "0", "0", "0", "0", "p4"},
      {"-p1", "0", "0", "0", "0", "-exp(q1-q2)", "0", "0"},
      {"0", "-p2", "0", "0", "exp(q1-q2)", "0", "-exp(q2-q3)", "0"},
      {"0", "0", "-p3", "0", "0", "exp(q2-q3)", "0", "-exp(q3-q4)"},
      {"0", "0", "0", "-p4", "0", "0", "exp(q3-q4)", "0"},
  });
}

ExprMatrix vClassNFixture() {
  return matrixFixture({
      {"p1", "0", "0", "0", "1", "1"},
      {"0", "p2", "0", "-1", "0", "1"},
      {"0", "0", "p3", "-1", "-1", "0"},
      {"0", "-V(q1-q2)", "-V(q3-q1)", "p1", "0", "0"},
      {"V(q1-q2)", "0", "-V(q2-q3)", "0", "p2", "0"},
      {"V(q3-q1)", "V(q2-q3)", "0", "0", "0", "p3"},
  });
}

ExprMatrix vClassPiPrimeFixture() {
  return matrixFixture({
      {"0", "-1", "-1", "p1", "0", "0"},
      {"1", "0", "-1", "0", "p2", "0"},
      {"1", "1", "0", "0", "0", "p3"},
      {"-p1", "0", "0", "0", "-V(q1-q2)", "-V(q3-q1)"},
      {"0", "-p2", "0", "V(q1-q2)", "0", "-V(q2-q3)"},
      {"0", "0", "-p3", "V(q3-q1)", "V(q2-q3)", "0"},
  });
}

ExprMatrix laxFixture4() {
  return matrixFixture({
      {"p1", "exp((q1-q2)/2)", "0", "exp((q4-q1)/2)"},
      {"exp((q1-q2)/2)", "p2", "exp((q2-q3)/2)", "0"},
      {"0", "exp((q2-q3)/2)", "p3", "exp((q3-q4)/2)"},
      {"exp((q4-q1)/2)", "0", "exp((q3-q4)/2)", "p4"},
  });
}

// The wrap contribution to the torsion, fixed by the bracket definition:
// e^{q4-q1} ( d/dp4 (x) dq1 ^ dI_1 - d/dp1 (x) dq4 ^ dI_1 + X_1 (x) dq1 ^ dq4 ).
TensorField torsionFixture4(const Chart& c) {
  TensorField t = TensorField::tensor12(c);
  Expr e = parseExpr("exp(q4-q1)");
  for (int m = 0; m < 4; ++m) {
    t.add({7, 0, 4 + m}, Expr(2L) * e);   // d/dp4 (x) dq1 ^ dI_1
    t.add({4, 3, 4 + m}, Expr(-2L) * e);  // - d/dp1 (x) dq4 ^ dI_1
    t.add({m, 0, 3}, Expr(2L) * e);       // X_1 (x) dq1 ^ dq4
  }
  return t;
}

}  // namespace

TEST_CASE("closed lattice matches its reference tensors at n=4") {
  TodaModel m = closedToda(4);
  CHECK(m.structure.nMatrix() == closedTodaN4());
  CHECK(m.structure.piPrimeMatrix() == closedTodaPiPrime4());
  CHECK(m.structure.torsion() == torsionFixture4(m.structure.chart()));
  // phi = e^{q4-q1} dI_1 ^ dq1 ^ dq4
  TensorField phi = formFixture(m.structure.chart(), 3,
                                {{{1, 4, 5}, "2*exp(q4-q1)"},
                                 {{1, 4, 6}, "2*exp(q4-q1)"},
                                 {{1, 4, 7}, "2*exp(q4-q1)"},
                                 {{1, 4, 8}, "2*exp(q4-q1)"}});
  CHECK(m.structure.phi() == phi);
  // Omega = e^{q4-q1} dq4 ^ dq1
  TensorField omega = formFixture(m.structure.chart(), 2, {{{1, 4}, "-exp(q4-q1)"}});
  CHECK(m.omega == omega);
  CHECK(checkPqn(m.structure).passed());
}

TEST_CASE("open lattice matches its reference tensors at n=4") {
  TodaModel m = openToda(4);
  CHECK(m.structure.nMatrix() == openTodaN4());
  CHECK(m.structure.piPrimeMatrix() == openTodaPiPrime4());
  CHECK(m.structure.torsion().isZero());
  CHECK(checkPn(m.structure.pi(), m.structure.n()).passed());
}

TEST_CASE("wrap difference tensor") {
  for (int n : {3, 4, 5}) {
    TodaModel closed = closedToda(n, 1);
    TodaModel open = openToda(n, 1);
    // N_closed = N_open + DeltaN
    CHECK(closed.structure.n() - open.structure.n() == closed.deltaN);
    // DeltaN = e^{q_n-q_1}(d/dp_n (x) dq_1 - d/dp_1 (x) dq_n)
    TensorField expect = TensorField::tensor11(closed.structure.chart());
    Expr e = parseExpr("exp(q" + std::to_string(n) + "-q1)");
    expect.set({2 * n - 1, 0}, e);
    expect.set({n, n - 1}, -e);
    CHECK(closed.deltaN == expect);
    // pi'_closed - pi'_open = e^{q_n-q_1} d/dp_n ^ d/dp_1
    TensorField diff = closed.structure.piPrime() - open.structure.piPrime();
    TensorField expectBi = TensorField::multivector(closed.structure.chart(), 2);
    expectBi.set({n, 2 * n - 1}, -e);  // d/dp_n ^ d/dp_1 = -(d/dp_1 ^ d/dp_n)
    CHECK(diff == expectBi);
    // DeltaN = pi Omega^b under the library flat/sharp orientation
    CHECK(piOmegaFlat(closed.structure.pi(), closed.omega) == closed.deltaN);
  }
}

TEST_CASE("torsion splits through the wrap data for n = 3, 4, 5") {
  for (int n : {3, 4, 5}) {
    TodaModel m = closedToda(n, 1);
    const Chart& c = m.structure.chart();
    TensorField dI1 = exteriorD(
        TensorField::function(c, traceInvariants(m.structure.n(), 1)[0]));
    TensorField x1 = sharp(m.structure.pi(), dI1);
    for (int a = 0; a < c.dim(); ++a) {
      for (int b = a + 1; b < c.dim(); ++b) {
        TensorField ea = TensorField::basisVector(c, a);
        TensorField eb = TensorField::basisVector(c, b);
        // T(X,Y) = <dI1,Y> DeltaN(X) - <dI1,X> DeltaN(Y) - Omega(X,Y) X_1
        TensorField expect = applyN(m.deltaN, ea).scaled(contract(dI1, eb)) -
                             applyN(m.deltaN, eb).scaled(contract(dI1, ea)) -
                             x1.scaled(evalForm(m.omega, {ea, eb}));
        TensorField actual = TensorField::vectorField(c);
        for (const auto& [idx, v] : m.structure.torsion().comp)
          if (idx[1] == a && idx[2] == b) actual.add({idx[0]}, v);
        CHECK(actual == expect);
      }
    }
  }
}

TEST_CASE("lattice structures are translation invariant") {
  for (int n : {3, 4}) {
    TodaModel m = closedToda(n, 1);
    const TensorField& x1 = m.structure.hierarchyField(1);
    CHECK(lieDerivative(x1, m.structure.n()).isZero());
    CHECK(schouten(x1, m.structure.pi()).isZero());
    CHECK(lieDerivative(x1, m.structure.phi()).isZero());
  }
}

TEST_CASE("model guards") {
  CHECK_THROWS_AS(closedToda(2), Error);
  CHECK_THROWS_AS(openToda(1), Error);
  CHECK(openToda(2, 1).structure.torsion().isZero());
}

TEST_CASE("potential family on R^6") {
  SUBCASE("reference tensors") {
    VClassModel m = vClass(Potential::formal());
    CHECK(m.structure.nMatrix() == vClassNFixture());
    CHECK(m.structure.piPrimeMatrix() == vClassPiPrimeFixture());
    // the reference 3-form
    TensorField phi = formFixture(
        m.structure.chart(), 3,
        {{{1, 2, 4}, "V(q1-q2) - V'(q1-q2)"},
         {{1, 2, 5}, "V(q1-q2) - V'(q1-q2)"},
         {{2, 3, 5}, "V(q2-q3) - V'(q2-q3)"},
         {{2, 3, 6}, "V(q2-q3) - V'(q2-q3)"},
         {{1, 3, 4}, "V(q3-q1) + V'(q3-q1)"},
         {{1, 3, 6}, "V(q3-q1) + V'(q3-q1)"},
         {{1, 3, 5}, "2*V'(q3-q1)"}});
    CHECK(m.structure.phi() == phi);
    CHECK(checkPqn(m.structure).passed());
  }
  SUBCASE("Hamiltonians and their brackets") {
    VClassModel m = vClass(Potential::formal());
    CHECK(m.hamiltonian(1) == parseExpr("p1+p2+p3"));
    CHECK(m.hamiltonian(2) ==
          parseExpr("1/2*(p1^2+p2^2+p3^2) + V(q1-q2)+V(q2-q3)+V(q3-q1)"));
    CHECK(m.hamiltonian(3) ==
          parseExpr("1/3*(p1^3+p2^3+p3^3) + p1*(V(q1-q2)+V(q3-q1)) + "
                    "p2*(V(q2-q3)+V(q1-q2)) + p3*(V(q3-q1)+V(q2-q3))"));
    const TensorField& pi = m.structure.pi();
    CHECK(poissonBracket(pi, m.hamiltonian(1), m.hamiltonian(2)).isZero());
    CHECK(poissonBracket(pi, m.hamiltonian(1), m.hamiltonian(3)).isZero());
    Expr b23 = poissonBracket(pi, m.hamiltonian(2), m.hamiltonian(3));
    Expr closedForm = parseExpr(
        "V(q1-q2)*(V'(q2-q3)-V'(q3-q1)) + V(q2-q3)*(V'(q3-q1)-V'(q1-q2)) + "
        "V(q3-q1)*(V'(q1-q2)-V'(q2-q3))");
    CHECK(b23 == closedForm);
    CHECK_FALSE(b23.isZero());
  }
  SUBCASE("exponential potential reproduces the 3-particle closed lattice") {
    VClassModel m = vClass(Potential::exponential());
    TodaModel t = closedToda(3, 3);
    CHECK(m.structure.n() == t.structure.n());
    CHECK(m.structure.phi() == t.structure.phi());
    CHECK(poissonBracket(m.structure.pi(), m.hamiltonian(2), m.hamiltonian(3))
              .isZero());
  }
  SUBCASE("reciprocal potential breaks involutivity at a concrete point") {
    VClassModel m = vClass(Potential::reciprocal());
    Expr b23 = poissonBracket(m.structure.pi(), m.hamiltonian(2), m.hamiltonian(3));
    CHECK_FALSE(b23.isZero());
    RationalPoint pt{{"q1", Rational(1)}, {"q2", Rational(2)}, {"q3", Rational(4)},
                     {"p1", Rational(0)}, {"p2", Rational(0)}, {"p3", Rational(0)}};
    // Independent arithmetic: plug V(x)=1/x, V'(x)=-1/x^2 into the closed-form
    // bracket at q=(1,2,4) by hand:
    //   V12=-1, V23=-1/2, V31=1/3, V'12=-1, V'23=-1/4, V'31=-1/9
    //   -> (-1)(-1/4+1/9) + (-1/2)(-1/9+1) + (1/3)(-1+1/4) = -5/9.
    Rational expect(-5, 9);
    CHECK(b23.evalRational(pt) == expect);
  }
  SUBCASE("inverse-square potential is involutive") {
    VClassModel m = vClass(Potential::inverseSquare());
    CHECK(poissonBracket(m.structure.pi(), m.hamiltonian(2), m.hamiltonian(3))
              .isZero());
  }
}

TEST_CASE("Lax matrix") {
  TodaModel m = closedToda(4);
  CHECK(m.lax == laxFixture4());
  CHECK(laxMatrix(4) == laxFixture4());
  SUBCASE("traces reproduce the Hamiltonians") {
    Expr h1 = m.structure.traceInvariant(1) / Expr(2L);
    CHECK(m.lax.trace() == h1);
    Expr h2 = m.structure.traceInvariant(2) / Expr(2L);
    CHECK((m.lax * m.lax).trace() / Expr(2L) == h2);
  }
  SUBCASE("fourth trace agrees up to a constant") {
    Expr h4 = m.structure.traceInvariant(4) / Expr(2L);
    Expr trl4 = m.lax.pow(4).trace() * Expr(Rational(1, 4));
    Expr diff = h4 - trl4;
    CHECK_FALSE(diff.isZero());  // the constant offset is real
    TensorField d = exteriorD(TensorField::function(m.structure.chart(), diff));
    CHECK(d.isZero());
  }
  SUBCASE("symmetry for several sizes") {
    for (int n : {3, 5}) {
      ExprMatrix l = laxMatrix(n);
      CHECK(l == l.transpose());
    }
  }
}

TEST_CASE("identity suite passes for n = 3, 4, 5") {
  for (int n : {3, 4, 5}) {
    TodaModel m = closedToda(n);
    Check suite = todaIdentitySuite(m, n);
    CHECK(suite.passed());
  }
  TodaModel open = openToda(3);
  CHECK_THROWS_AS(todaIdentitySuite(open, 3), Error);
}
