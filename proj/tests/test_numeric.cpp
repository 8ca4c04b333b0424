#include <doctest.h>

#include "generators.hpp"
#include "numeric.hpp"

using namespace pqn;

TEST_CASE("compiled expressions match map-based evaluation") {
  Chart c(2);
  Expr e = parseExpr("p1^2/2 + exp(q1-q2)*q2 - 3/(p2+7)");
  CompiledExpr ce(e, c);
  double state[4] = {0.3, -0.2, 0.7, 1.1};
  Point pt{{"q1", 0.3}, {"q2", -0.2}, {"p1", 0.7}, {"p2", 1.1}};
  CHECK(ce.eval(state) == doctest::Approx(e.evalDouble(pt)).epsilon(1e-12));
  CHECK_THROWS_AS(CompiledExpr(parseExpr("V(q1-q2)"), c), Error);
}

TEST_CASE("finite-difference Lie check") {
  Chart c(2);
  SampleConfig cfg;
  TensorField x = TensorField::basisVector(c, 0);
  double r = fdLieFunctionCheck(x, parseExpr("exp(q1-q2)"), cfg);
  CHECK(r < cfg.tol);
  SUBCASE("negative control: a zeroed derivative is far from the difference") {
    CompiledExpr f(parseExpr("exp(q1-q2)"), c);
    Sampler s(0);
    std::vector<double> pt = s.state(c, cfg);
    std::vector<double> dir{1.0, 0.0, 0.0, 0.0};
    double fd = directionalDifference(f, pt, dir, cfg.h);
    CHECK(std::abs(fd - 0.0) > 100 * cfg.tol);  // stubbing d/dq1 -> 0 fails
  }
  SUBCASE("halving the step shrinks the error about fourfold") {
    // compare against the exact derivative on a case with third derivatives
    CompiledExpr f(parseExpr("exp(q1-q2)"), c);
    CompiledExpr df(parseExpr("exp(q1-q2)"), c);
    Sampler s(7);
    double worst1 = 0, worst2 = 0;
    for (int t = 0; t < 50; ++t) {
      std::vector<double> pt = s.state(c, cfg);
      std::vector<double> dir{1.0, 0.0, 0.0, 0.0};
      double h = 1e-3;
      double e1 = std::abs(directionalDifference(f, pt, dir, h) - df.eval(pt.data()));
      double e2 = std::abs(directionalDifference(f, pt, dir, h / 2) - df.eval(pt.data()));
      worst1 = std::max(worst1, e1);
      worst2 = std::max(worst2, e2);
    }
    double ratio = worst1 / worst2;
    CHECK(ratio > 2.0);
    CHECK(ratio < 8.0);
  }
}

TEST_CASE("weak exterior-derivative check") {
  TodaModel m = closedToda(4, 1);
  SampleConfig cfg;
  CHECK(fdExteriorWeakCheck(m.structure.phi(), cfg) < cfg.tol);
}

TEST_CASE("bracket sampling") {
  SampleConfig cfg;
  TodaModel m = closedToda(4);
  Expr h2 = m.structure.traceInvariant(2) / Expr(2L);
  Expr h3 = m.structure.traceInvariant(3) / Expr(2L);
  CHECK(bracketSampleCheck(m.structure.pi(), h2, h3, cfg) < cfg.tol);
  CHECK(bracketSampleCheck(m.structure.pi(), h2, h2, cfg) < cfg.tol);  // {f,f}=0
  SUBCASE("reciprocal potential bracket is visibly nonzero") {
    VClassModel v = vClass(Potential::reciprocal());
    Expr b = poissonBracket(v.structure.pi(), v.hamiltonian(2), v.hamiltonian(3));
    CompiledExpr cb(b, v.structure.chart());
    double state[6] = {1.0, 2.0, 4.0, 0.3, -0.4, 0.2};
    CHECK(std::abs(cb.eval(state)) > 10 * cfg.tol);
    CHECK(cb.eval(state) == doctest::Approx(-5.0 / 9.0).epsilon(1e-12));
  }
}

TEST_CASE("flow integration") {
  SUBCASE("the first invariant's flow is a rigid translation") {
    TodaModel m = closedToda(4, 1);
    std::vector<double> x0 = defaultInitialState(4);
    Trajectory t = integrateToda(m, x0, 1e-2, 1.0, 1, /*hamiltonian=*/1);
    REQUIRE_FALSE(t.aborted);
    const std::vector<double>& last = t.states.back();
    for (int i = 0; i < 4; ++i) {
      // dq_i/dt = dH1/dp_i = 1, p_i constant
      CHECK(last[static_cast<size_t>(i)] ==
            doctest::Approx(x0[static_cast<size_t>(i)] + 1.0).epsilon(1e-9));
      CHECK(last[static_cast<size_t>(4 + i)] ==
            doctest::Approx(x0[static_cast<size_t>(4 + i)]).epsilon(1e-12));
    }
  }
  SUBCASE("invariants are conserved along the main flow") {
    for (bool closed : {true, false}) {
      TodaModel m = closed ? closedToda(4) : openToda(4);
      Trajectory t = integrateToda(m, defaultInitialState(4), 1e-3, 10.0, 4);
      REQUIRE_FALSE(t.aborted);
      CHECK(t.maxDrift() < 1e-6);
    }
  }
  SUBCASE("drift scales like the fourth power of the step") {
    // steps chosen inside the asymptotic regime but well above roundoff
    TodaModel m = closedToda(4);
    Trajectory coarse = integrateToda(m, defaultInitialState(4), 5e-3, 10.0, 4);
    Trajectory fine = integrateToda(m, defaultInitialState(4), 2.5e-3, 10.0, 4);
    double ratio = coarse.maxDrift() / fine.maxDrift();
    CHECK(ratio > 8.0);
    CHECK(ratio < 32.0);
  }
  SUBCASE("argument validation") {
    TodaModel m = closedToda(3, 1);
    CHECK_THROWS_AS(integrateToda(m, {0, 0, 0}, 1e-3, 1.0, 1), Error);
    CHECK_THROWS_AS(integrateToda(m, defaultInitialState(3), -1.0, 1.0, 1), Error);
  }
  SUBCASE("csv export carries the chart and invariant columns") {
    TodaModel m = closedToda(3, 1);
    Trajectory t = integrateToda(m, defaultInitialState(3), 1e-2, 0.1, 1);
    std::string csv = t.toCsv(m.structure.chart());
    CHECK(csv.substr(0, csv.find('\n')) == "t,q1,q2,q3,p1,p2,p3,I1");
  }
}

TEST_CASE("numeric oracle battery") {
  SampleConfig cfg;
  cfg.samples = 40;
  for (int n : {3, 4}) {
    TodaModel m = closedToda(n);
    Check r = numericOracleReport(m.structure, cfg);
    CHECK(r.passed());
  }
  TodaModel open = openToda(3);
  CHECK(numericOracleReport(open.structure, cfg).passed());
}

TEST_CASE("sampling avoids configured singular separations") {
  Chart c(3);
  SampleConfig cfg;
  cfg.minSeparation = 0.1;
  Sampler s(5);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> x = s.state(c, cfg);
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        CHECK(std::abs(x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)]) >= 0.1);
  }
}
