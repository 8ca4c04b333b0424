#include <doctest.h>

#include "generators.hpp"
#include "twist.hpp"

using namespace pqn;
using pqn::testgen::Gen;

TEST_CASE("deformation residual") {
  TodaModel m = closedToda(4);
  SUBCASE("the wrap form with the correct sign solves the condition") {
    CHECK(maurerCartanResidual(m.structure, -m.omega).isZero());
  }
  SUBCASE("the opposite sign does not") {
    TensorField r = maurerCartanResidual(m.structure, m.omega);
    CHECK_FALSE(r.isZero());
  }
  SUBCASE("zero form against a torsionless structure") {
    TodaModel open = openToda(4, 1);
    TensorField zero2 = TensorField::form(open.structure.chart(), 2);
    CHECK(maurerCartanResidual(open.structure, zero2).isZero());
  }
  SUBCASE("non-closed forms are rejected") {
    TensorField w = TensorField::form(m.structure.chart(), 2);
    w.set({0, 4}, parseExpr("q2"));  // d(q2 dq1^dp1) != 0
    CHECK_THROWS_AS(maurerCartanResidual(m.structure, w), Error);
  }
}

TEST_CASE("twisting the closed lattice yields the open one") {
  for (int n : {3, 4, 5}) {
    TodaModel closed = closedToda(n, 2);
    TwistResult tw = twistStructure(closed.structure, -closed.omega);
    REQUIRE(tw.applied);
    CHECK(tw.report.passed());
    TodaModel open = openToda(n, 1);
    CHECK(tw.nPrime == open.structure.n());
    CHECK(nijenhuisTorsion(tw.nPrime).isZero());
  }
}

TEST_CASE("twist refuses when the residual is nonzero") {
  TodaModel m = closedToda(4, 1);
  TwistResult tw = twistStructure(m.structure, m.omega);
  CHECK_FALSE(tw.applied);
  CHECK_FALSE(tw.report.passed());
  CHECK(tw.nPrime.comp.empty());
}

TEST_CASE("zero twist is the identity on a torsionless structure") {
  TodaModel open = openToda(4, 1);
  TensorField zero2 = TensorField::form(open.structure.chart(), 2);
  TwistResult tw = twistStructure(open.structure, zero2);
  REQUIRE(tw.applied);
  CHECK(tw.nPrime == open.structure.n());
}

TEST_CASE("un-twisting the open lattice rebuilds the closed one") {
  for (int n : {3, 4, 5}) {
    TodaModel open = openToda(n, 1);
    TodaModel closed = closedToda(n, 1);
    // part 2 with the wrap form: condition [d_N w, w]_pi = 0
    TwistResult tw = untwistPn(open.structure.pi(), open.structure.n(),
                               open.omega, 2);
    REQUIRE(tw.applied);
    CHECK(tw.report.passed());
    CHECK(tw.nPrime == closed.structure.n());
    CHECK(tw.phiPrime == closed.structure.phi());
  }
}

TEST_CASE("round trip: twist then un-twist restores the structure") {
  for (int n : {3, 4, 5}) {
    TodaModel closed = closedToda(n, 1);
    TwistResult down = twistStructure(closed.structure, -closed.omega);
    REQUIRE(down.applied);
    TwistResult up = untwistPn(closed.structure.pi(), down.nPrime, closed.omega, 2);
    REQUIRE(up.applied);
    CHECK(up.nPrime == closed.structure.n());
    CHECK(up.phiPrime == closed.structure.phi());
  }
}

TEST_CASE("un-twist part 1 with a complementary 2-form") {
  Chart c(2);
  TensorField pi = canonicalPoisson(c);
  TensorField id = fromMatrix(c, ExprMatrix::identity(c.dim()));
  TensorField w = wedge(TensorField::basisForm(c, 0), TensorField::basisForm(c, 1));
  // constant coefficients: dw = 0 and [w,w]_pi = 0
  REQUIRE(exteriorD(w).isZero());
  REQUIRE(koszul(pi, w, w).isZero());
  TwistResult tw = untwistPn(pi, id, w, 1);
  REQUIRE(tw.applied);
  CHECK(tw.report.passed());
  // the induced bivector N' pi is Poisson and compatible with pi
  ExprMatrix ppm = toMatrix(tw.nPrime) * bivectorMatrix(pi);
  TensorField pp = TensorField::multivector(c, 2);
  for (int i = 0; i < c.dim(); ++i)
    for (int j = i + 1; j < c.dim(); ++j)
      if (!ppm.at(i, j).isZero()) pp.set({i, j}, ppm.at(i, j));
  CHECK(schouten(pp, pp).isZero());
  CHECK(schouten(pi, pp).isZero());
}

TEST_CASE("un-twist with the zero form returns the input") {
  TodaModel open = openToda(3, 1);
  TensorField zero2 = TensorField::form(open.structure.chart(), 2);
  for (int part : {1, 2}) {
    TwistResult tw = untwistPn(open.structure.pi(), open.structure.n(), zero2, part);
    REQUIRE(tw.applied);
    CHECK(tw.nPrime == open.structure.n());
    if (part == 2) CHECK(tw.phiPrime.isZero());
    CHECK(tw.report.passed());
  }
  CHECK_THROWS_AS(untwistPn(open.structure.pi(), open.structure.n(), zero2, 3), Error);
}

TEST_CASE("deformed-differential operator identity") {
  // d_{pi w^b} = -[w, .]_pi on functions and 1-forms, for closed 2-forms.
  Gen gen(401);
  TodaModel m = closedToda(3, 1);
  const Chart& c = m.structure.chart();
  const TensorField& pi = m.structure.pi();
  std::vector<TensorField> omegas;
  omegas.push_back(m.omega);
  // a constant-coefficient closed 2-form
  TensorField constant = TensorField::form(c, 2);
  constant.set({0, 4}, Expr(3L));
  constant.set({1, 2}, Expr(-2L));
  omegas.push_back(constant);
  for (const TensorField& w : omegas) {
    REQUIRE(exteriorD(w).isZero());
    TensorField pof = piOmegaFlat(pi, w);
    for (int t = 0; t < 8; ++t) {
      TensorField f = TensorField::function(c, gen.expr(c));
      CHECK((dN(pof, f) + koszul(pi, w, f)).isZero());
      TensorField a = gen.form(c, 1);
      CHECK((dN(pof, a) + koszul(pi, w, a)).isZero());
    }
  }
}

TEST_CASE("every successful twist produces a flat deformed differential") {
  Gen gen(409);
  TodaModel closed = closedToda(3, 1);
  TwistResult tw = twistStructure(closed.structure, -closed.omega);
  REQUIRE(tw.applied);
  CHECK(nijenhuisTorsion(tw.nPrime).isZero());
  for (int t = 0; t < 10; ++t) {
    TensorField eta = gen.form(closed.structure.chart(), gen.range(0, 2));
    CHECK(dN(tw.nPrime, dN(tw.nPrime, eta)).isZero());
  }
}

TEST_CASE("wrap orientation bookkeeping is reported") {
  TodaModel m = closedToda(4, 1);
  Check c = wrapOrientationChecks(m);
  CHECK(c.passed());
  REQUIRE_FALSE(c.children.empty());
  CHECK(c.children[0].status == CheckStatus::ExactPass);
}
