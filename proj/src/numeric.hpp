#pragma once

#include <random>

#include "twist.hpp"

namespace pqn {

struct SampleConfig {
  unsigned seed = 0;
  int samples = 100;
  double qLo = -1.0, qHi = 1.0, pLo = -1.0, pHi = 1.0;
  double h = 1e-5;
  double tol = 1e-6;
  /// Reject samples with |q_i - q_j| below this (singular potentials).
  double minSeparation = 0.0;
};

/// Expression compiled against a flat state vector (q1..qn, p1..pn) for fast
/// repeated evaluation; rejects formal atoms at compile time.
class CompiledExpr {
public:
  CompiledExpr() = default;
  CompiledExpr(const Expr& e, const Chart& chart);
  double eval(const double* state) const;

private:
  struct Factor {
    int coord;  // flat coordinate index
    int exp;
    bool half;  // exponential-of-half-coordinate factor
  };
  struct Term {
    double coeff;
    std::vector<Factor> factors;
  };
  std::vector<Term> num_, den_;
  double evalTerms(const std::vector<Term>& terms, const double* state) const;
};

/// Deterministic sampler: identical points for identical seeds on any
/// platform (no reliance on distribution internals).
class Sampler {
public:
  explicit Sampler(unsigned seed) : rng_(seed) {}
  double uniform(double lo, double hi);
  std::vector<double> state(const Chart& chart, const SampleConfig& cfg);

private:
  std::mt19937 rng_;
};

/// max over samples of the relative gap between the symbolic Lie derivative
/// L_X f and its central-difference value along X.
double fdLieFunctionCheck(const TensorField& x, const Expr& f,
                          const SampleConfig& cfg);

/// Weak exterior-derivative check: d(eta) evaluated on random constant
/// vectors versus central differences of eta's evaluations.
double fdExteriorWeakCheck(const TensorField& eta, const SampleConfig& cfg);

/// max over samples of |{f,g}_symbolic - {f,g}_finite-difference| (relative).
double bracketSampleCheck(const TensorField& pi, const Expr& f, const Expr& g,
                          const SampleConfig& cfg);

/// Directional central difference (f(x+hv)-f(x-hv))/(2h); exposed for the
/// negative-control tests.
double directionalDifference(const CompiledExpr& f, const std::vector<double>& x,
                             const std::vector<double>& v, double h);

struct Trajectory {
  std::vector<double> times;
  std::vector<std::vector<double>> states;      // sampled states (chart dim)
  std::vector<std::vector<double>> invariants;  // I_1..I_kmax at sample times
  std::vector<double> drift;                    // max |I_k(t) - I_k(0)|
  bool aborted = false;
  double lastValidTime = 0.0;
  double maxDrift() const;
  std::string toCsv(const Chart& chart) const;
};

/// Classic fourth-order Runge-Kutta integration of the Hamiltonian flow of
/// H = I_hamiltonianIndex / 2, recording trace-invariant drift. Aborts at the
/// last finite state if the flow blows up.
Trajectory integrateToda(const TodaModel& model, std::vector<double> x0, double dt,
                         double tEnd, int kmax, int hamiltonianIndex = 2);

/// Default initial condition: q = 0, p cycling (1, 0, -1, 0, ...).
std::vector<double> defaultInitialState(int n);

/// Numeric re-verification of the structural identities through double
/// arithmetic and finite differences (independent of the symbolic zero).
/// Works for any structure with compilable components (no formal atoms).
Check numericOracleReport(const PqnStructure& s, const SampleConfig& cfg);

}  // namespace pqn
