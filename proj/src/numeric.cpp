#include "numeric.hpp"

#include <cmath>
#include <sstream>

namespace pqn {

CompiledExpr::CompiledExpr(const Expr& e, const Chart& chart) {
  auto compileTerms = [&](const Poly& p, std::vector<Term>& out) {
    for (const auto& [m, c] : p.terms()) {
      Term t;
      t.coeff = c.get_d();
      for (const auto& [a, exp] : m.factors) {
        Factor f;
        f.exp = exp;
        switch (a.kind) {
          case AtomKind::CoordQ:
            f.coord = a.index - 1;
            f.half = false;
            break;
          case AtomKind::CoordP:
            f.coord = chart.n + a.index - 1;
            f.half = false;
            break;
          case AtomKind::ExpHalf:
            f.coord = a.index - 1;
            f.half = true;
            break;
          default:
            throw Error("eval-formal",
                        "cannot compile unsubstituted formal atom " + a.str());
        }
        if (f.coord < 0 || f.coord >= chart.dim())
          throw Error("eval-missing", "atom outside chart: " + a.str());
        t.factors.push_back(f);
      }
      out.push_back(std::move(t));
    }
  };
  compileTerms(e.num(), num_);
  if (!e.den().isConstant()) compileTerms(e.den(), den_);
  else if (!e.den().isZero() && !(e.den().leading().second == 1))
    throw Error("internal", "denormalized denominator");
}

double CompiledExpr::evalTerms(const std::vector<Term>& terms,
                               const double* state) const {
  double acc = 0.0;
  for (const Term& t : terms) {
    double v = t.coeff;
    for (const Factor& f : t.factors) {
      if (f.half)
        v *= std::exp(0.5 * f.exp * state[f.coord]);
      else
        v *= std::pow(state[f.coord], f.exp);
    }
    acc += v;
  }
  return acc;
}

double CompiledExpr::eval(const double* state) const {
  double n = evalTerms(num_, state);
  if (den_.empty()) return n;
  double d = evalTerms(den_, state);
  if (d == 0.0) throw Error("eval-singular", "denominator vanished at sample");
  return n / d;
}

double Sampler::uniform(double lo, double hi) {
  // fixed 32-bit mapping keeps the stream identical across platforms
  double u = static_cast<double>(rng_()) / 4294967296.0;
  return lo + (hi - lo) * u;
}

std::vector<double> Sampler::state(const Chart& chart, const SampleConfig& cfg) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<double> x(static_cast<size_t>(chart.dim()));
    for (int i = 0; i < chart.n; ++i) x[static_cast<size_t>(i)] = uniform(cfg.qLo, cfg.qHi);
    for (int i = 0; i < chart.n; ++i)
      x[static_cast<size_t>(chart.n + i)] = uniform(cfg.pLo, cfg.pHi);
    if (cfg.minSeparation > 0) {
      bool ok = true;
      for (int i = 0; i < chart.n && ok; ++i)
        for (int j = i + 1; j < chart.n && ok; ++j)
          if (std::abs(x[static_cast<size_t>(i)] - x[static_cast<size_t>(j)]) <
              cfg.minSeparation)
            ok = false;
      if (!ok) continue;
    }
    return x;
  }
  throw Error("eval-singular", "could not sample away from the singular locus");
}

double directionalDifference(const CompiledExpr& f, const std::vector<double>& x,
                             const std::vector<double>& v, double h) {
  std::vector<double> plus = x, minus = x;
  for (size_t i = 0; i < x.size(); ++i) {
    plus[i] += h * v[i];
    minus[i] -= h * v[i];
  }
  return (f.eval(plus.data()) - f.eval(minus.data())) / (2.0 * h);
}

namespace {

double relGap(double a, double b) { return std::abs(a - b) / (1.0 + std::abs(a)); }

// Residual for identities that cancel a sum of large terms: normalized by the
// magnitude of the summands so the check is meaningful near steep potentials.
double cancellationGap(double sym, double num, double termScale) {
  return std::abs(sym - num) / (1.0 + std::abs(sym) + termScale);
}

std::vector<CompiledExpr> compileVector(const TensorField& v, const Chart& c) {
  std::vector<CompiledExpr> out(static_cast<size_t>(c.dim()));
  for (const auto& [idx, val] : v.comp)
    out[static_cast<size_t>(idx[0])] = CompiledExpr(val, c);
  return out;
}

}  // namespace

double fdLieFunctionCheck(const TensorField& x, const Expr& f,
                          const SampleConfig& cfg) {
  const Chart& c = x.chart;
  TensorField lie = lieDerivative(x, TensorField::function(c, f));
  CompiledExpr cf(f, c), clie(lie.get({}), c);
  std::vector<CompiledExpr> cx = compileVector(x, c);
  Sampler sampler(cfg.seed);
  double worst = 0.0;
  for (int s = 0; s < cfg.samples; ++s) {
    std::vector<double> pt = sampler.state(c, cfg);
    std::vector<double> dir(pt.size());
    for (size_t i = 0; i < dir.size(); ++i)
      dir[i] = cx[i].eval(pt.data());
    double sym = clie.eval(pt.data());
    double num = directionalDifference(cf, pt, dir, cfg.h);
    worst = std::max(worst, relGap(sym, num));
  }
  return worst;
}

double fdExteriorWeakCheck(const TensorField& eta, const SampleConfig& cfg) {
  const Chart& c = eta.chart;
  int k = eta.valence == Valence::Function ? 0 : eta.degree;
  Sampler sampler(cfg.seed + 1);
  // constant test vectors
  std::vector<TensorField> vs;
  std::vector<std::vector<double>> dirs;
  for (int t = 0; t <= k; ++t) {
    TensorField v = TensorField::vectorField(c);
    std::vector<double> d(static_cast<size_t>(c.dim()));
    for (int i = 0; i < c.dim(); ++i) {
      double val = sampler.uniform(-1, 1);
      d[static_cast<size_t>(i)] = val;
      // rationalize deterministically to keep the symbolic side exact
      Rational r(static_cast<long>(std::lround(val * 1024)), 1024L);
      r.canonicalize();
      v.add({i}, Expr(r));
      d[static_cast<size_t>(i)] = r.get_d();
    }
    vs.push_back(v);
    dirs.push_back(d);
  }
  TensorField dEta = exteriorD(eta);
  CompiledExpr dSym(evalForm(dEta, vs), c);
  // scalar functions eta(V_0,...,^t,...,V_k)
  std::vector<CompiledExpr> faces;
  for (int t = 0; t <= k; ++t) {
    std::vector<TensorField> rest;
    for (int r = 0; r <= k; ++r)
      if (r != t) rest.push_back(vs[static_cast<size_t>(r)]);
    Expr face = (k == 0) ? eta.get({}) : evalForm(eta, rest);
    faces.emplace_back(face, c);
  }
  double worst = 0.0;
  for (int s = 0; s < cfg.samples; ++s) {
    std::vector<double> pt = sampler.state(c, cfg);
    double num = 0.0, scale = 0.0;
    for (int t = 0; t <= k; ++t) {
      double d = directionalDifference(faces[static_cast<size_t>(t)], pt,
                                       dirs[static_cast<size_t>(t)], cfg.h);
      num += (t % 2 ? -d : d);
      scale += std::abs(d);
    }
    double sym = dSym.eval(pt.data());
    worst = std::max(worst, cancellationGap(sym, num, scale));
  }
  return worst;
}

double bracketSampleCheck(const TensorField& pi, const Expr& f, const Expr& g,
                          const SampleConfig& cfg) {
  const Chart& c = pi.chart;
  Expr sym = poissonBracket(pi, f, g);
  CompiledExpr cs(sym, c), cf(f, c), cg(g, c);
  std::vector<std::tuple<int, int, CompiledExpr>> piComp;
  for (const auto& [idx, val] : pi.comp)
    piComp.emplace_back(idx[0], idx[1], CompiledExpr(val, c));
  Sampler sampler(cfg.seed + 2);
  int dim = c.dim();
  double worst = 0.0;
  for (int s = 0; s < cfg.samples; ++s) {
    std::vector<double> pt = sampler.state(c, cfg);
    // finite-difference gradients
    std::vector<double> gf(static_cast<size_t>(dim)), gg(static_cast<size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      std::vector<double> e(static_cast<size_t>(dim), 0.0);
      e[static_cast<size_t>(i)] = 1.0;
      gf[static_cast<size_t>(i)] = directionalDifference(cf, pt, e, cfg.h);
      gg[static_cast<size_t>(i)] = directionalDifference(cg, pt, e, cfg.h);
    }
    double num = 0.0, scale = 0.0;
    for (const auto& [a, b, cexp] : piComp) {
      double v = cexp.eval(pt.data());
      double t1 = v * gf[static_cast<size_t>(a)] * gg[static_cast<size_t>(b)];
      double t2 = v * gf[static_cast<size_t>(b)] * gg[static_cast<size_t>(a)];
      num += t1 - t2;
      scale += std::abs(t1) + std::abs(t2);
    }
    worst = std::max(worst, cancellationGap(cs.eval(pt.data()), num, scale));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// Flow integration

double Trajectory::maxDrift() const {
  double m = 0.0;
  for (double d : drift) m = std::max(m, d);
  return m;
}

std::string Trajectory::toCsv(const Chart& chart) const {
  std::ostringstream os;
  os << "t";
  for (int i = 0; i < chart.dim(); ++i) os << "," << chart.coordName(i);
  for (size_t k = 0; k < drift.size(); ++k) os << ",I" << (k + 1);
  os << "\n";
  os.setf(std::ios::scientific);
  os.precision(12);
  for (size_t s = 0; s < times.size(); ++s) {
    os << times[s];
    for (double v : states[s]) os << "," << v;
    for (double v : invariants[s]) os << "," << v;
    os << "\n";
  }
  return os.str();
}

std::vector<double> defaultInitialState(int n) {
  std::vector<double> x(static_cast<size_t>(2 * n), 0.0);
  const double pattern[4] = {1.0, 0.0, -1.0, 0.0};
  for (int i = 0; i < n; ++i) x[static_cast<size_t>(n + i)] = pattern[i % 4];
  return x;
}

Trajectory integrateToda(const TodaModel& model, std::vector<double> x0, double dt,
                         double tEnd, int kmax, int hamiltonianIndex) {
  countOp("integrate_toda");
  const Chart& c = model.structure.chart();
  if (static_cast<int>(x0.size()) != c.dim())
    throw Error("bad-arg", "initial state has wrong dimension");
  if (dt <= 0 || tEnd <= 0) throw Error("bad-arg", "dt and T must be positive");
  if (kmax > model.structure.kmax())
    throw Error("bad-arg", "kmax exceeds structure cache");

  Expr h = model.structure.traceInvariant(hamiltonianIndex) / Expr(2L);
  TensorField field = sharp(model.structure.pi(),
                            exteriorD(TensorField::function(c, h)));
  std::vector<CompiledExpr> f = compileVector(field, c);
  std::vector<CompiledExpr> inv;
  for (int k = 1; k <= kmax; ++k)
    inv.emplace_back(model.structure.traceInvariant(k), c);

  int dim = c.dim();
  auto rhs = [&](const std::vector<double>& x, std::vector<double>& out) {
    for (int i = 0; i < dim; ++i) out[static_cast<size_t>(i)] = f[static_cast<size_t>(i)].eval(x.data());
  };

  long steps = std::lround(tEnd / dt);
  long stride = std::max(1L, steps / 200);
  Trajectory traj;
  traj.drift.assign(static_cast<size_t>(kmax), 0.0);
  std::vector<double> i0;
  for (const auto& ci : inv) i0.push_back(ci.eval(x0.data()));

  auto record = [&](double t, const std::vector<double>& x) {
    traj.times.push_back(t);
    traj.states.push_back(x);
    std::vector<double> iv;
    for (size_t k = 0; k < inv.size(); ++k) {
      double v = inv[k].eval(x.data());
      iv.push_back(v);
      traj.drift[k] = std::max(traj.drift[k], std::abs(v - i0[k]));
    }
    traj.invariants.push_back(iv);
  };

  std::vector<double> x = std::move(x0);
  std::vector<double> k1(static_cast<size_t>(dim)), k2(k1), k3(k1), k4(k1), tmp(k1);
  record(0.0, x);
  traj.lastValidTime = 0.0;
  for (long s = 1; s <= steps; ++s) {
    rhs(x, k1);
    for (int i = 0; i < dim; ++i) tmp[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] + 0.5 * dt * k1[static_cast<size_t>(i)];
    rhs(tmp, k2);
    for (int i = 0; i < dim; ++i) tmp[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] + 0.5 * dt * k2[static_cast<size_t>(i)];
    rhs(tmp, k3);
    for (int i = 0; i < dim; ++i) tmp[static_cast<size_t>(i)] = x[static_cast<size_t>(i)] + dt * k3[static_cast<size_t>(i)];
    rhs(tmp, k4);
    bool finite = true;
    for (int i = 0; i < dim; ++i) {
      x[static_cast<size_t>(i)] += dt / 6.0 *
                                   (k1[static_cast<size_t>(i)] + 2 * k2[static_cast<size_t>(i)] +
                                    2 * k3[static_cast<size_t>(i)] + k4[static_cast<size_t>(i)]);
      if (!std::isfinite(x[static_cast<size_t>(i)])) finite = false;
    }
    if (!finite) {
      traj.aborted = true;
      break;
    }
    double t = static_cast<double>(s) * dt;
    traj.lastValidTime = t;
    if (s % stride == 0 || s == steps) record(t, x);
  }
  return traj;
}

// ---------------------------------------------------------------------------
// Oracle battery

namespace {

// Numeric torsion column T(e_a, e_b) at a state, all derivatives replaced by
// central differences of the compiled entries of N.
class NumericTorsion {
public:
  NumericTorsion(const TensorField& n, const Chart& c, double h)
      : chart_(c), h_(h), dim_(c.dim()),
        entries_(static_cast<size_t>(dim_ * dim_)) {
    ExprMatrix m = toMatrix(n);
    for (int i = 0; i < dim_; ++i)
      for (int j = 0; j < dim_; ++j)
        entries_[static_cast<size_t>(i * dim_ + j)] = CompiledExpr(m.at(i, j), c);
  }

  double entry(int i, int j, const double* x) const {
    return entries_[static_cast<size_t>(i * dim_ + j)].eval(x);
  }

  // d(N^i_j)/dx_c by central difference
  double dEntry(int i, int j, int cIdx, const std::vector<double>& x) const {
    std::vector<double> plus = x, minus = x;
    plus[static_cast<size_t>(cIdx)] += h_;
    minus[static_cast<size_t>(cIdx)] -= h_;
    return (entry(i, j, plus.data()) - entry(i, j, minus.data())) / (2 * h_);
  }

  // T(e_a, e_b)^i = sum_c [ N^c_a d_c N^i_b - N^c_b d_c N^i_a ]
  //              + sum_c N^i_c ( d_b N^c_a - d_a N^c_b )
  // `scale` collects the magnitude of the summands for cancellation-aware
  // residuals.
  std::vector<double> column(int a, int b, const std::vector<double>& x,
                             double& scale) const {
    std::vector<double> out(static_cast<size_t>(dim_), 0.0);
    for (int i = 0; i < dim_; ++i) {
      double acc = 0.0;
      for (int cc = 0; cc < dim_; ++cc) {
        double nca = entry(cc, a, x.data());
        double ncb = entry(cc, b, x.data());
        if (nca != 0.0) {
          double t = nca * dEntry(i, b, cc, x);
          acc += t;
          scale += std::abs(t);
        }
        if (ncb != 0.0) {
          double t = ncb * dEntry(i, a, cc, x);
          acc -= t;
          scale += std::abs(t);
        }
        double inner = dEntry(cc, a, b, x) - dEntry(cc, b, a, x);
        if (inner != 0.0) {
          double t = entry(i, cc, x.data()) * inner;
          acc += t;
          scale += std::abs(t);
        }
      }
      out[static_cast<size_t>(i)] = acc;
    }
    return out;
  }

private:
  Chart chart_;
  double h_;
  int dim_;
  std::vector<CompiledExpr> entries_;
};

}  // namespace

Check numericOracleReport(const PqnStructure& s, const SampleConfig& cfg) {
  countOp("numeric_oracle");
  const Chart& c = s.chart();
  Check root = Check::group("numeric oracle (seed " + std::to_string(cfg.seed) +
                            ", " + std::to_string(cfg.samples) + " samples)");

  // Pairwise invariant brackets through finite-difference gradients.
  for (int k = 2; k <= s.kmax(); ++k)
    for (int j = 1; j < k; ++j) {
      double r = bracketSampleCheck(s.pi(), s.traceInvariant(k),
                                    s.traceInvariant(j), cfg);
      root.addChild(Check::numeric(
          "{I" + std::to_string(k) + ",I" + std::to_string(j) +
              "} agrees with finite-difference sampling",
          r, cfg.tol));
    }

  // d phi = 0 weakly (skipped when the structure has no 3-form).
  if (!s.phi().isZero()) {
    double r = fdExteriorWeakCheck(s.phi(), cfg);
    root.addChild(Check::numeric("d phi = 0 weakly at samples", r, cfg.tol));
  }

  // Torsion against the structure 3-form through numeric derivatives.
  {
    NumericTorsion nt(s.n(), c, cfg.h);
    std::vector<std::vector<CompiledExpr>> phiC;  // compiled sharp(pi, i_{ab} phi)
    std::vector<std::pair<int, int>> pairs;
    for (int a = 0; a < c.dim(); ++a)
      for (int b = a + 1; b < c.dim(); ++b) pairs.push_back({a, b});
    for (auto [a, b] : pairs) {
      TensorField oneForm = interior(TensorField::basisVector(c, b),
                                     interior(TensorField::basisVector(c, a), s.phi()));
      TensorField v = sharp(s.pi(), oneForm);
      std::vector<CompiledExpr> col(static_cast<size_t>(c.dim()));
      for (const auto& [idx, val] : v.comp)
        col[static_cast<size_t>(idx[0])] = CompiledExpr(val, c);
      phiC.push_back(std::move(col));
    }
    Sampler sampler(cfg.seed + 3);
    double worst = 0.0;
    int nSamples = std::min(cfg.samples, 25);
    for (int smp = 0; smp < nSamples; ++smp) {
      std::vector<double> x = sampler.state(c, cfg);
      for (size_t pi = 0; pi < pairs.size(); ++pi) {
        double scale = 0.0;
        std::vector<double> tn =
            nt.column(pairs[pi].first, pairs[pi].second, x, scale);
        for (int i = 0; i < c.dim(); ++i) {
          double rhs = phiC[pi][static_cast<size_t>(i)].eval(x.data());
          worst = std::max(worst,
                           cancellationGap(rhs, tn[static_cast<size_t>(i)], scale));
        }
      }
    }
    Check ck = Check::numeric("T_N = pi(i_{X^Y} phi) with numeric derivatives",
                              worst, cfg.tol * 10);
    ck.note = "central differences on N entries; tolerance relaxed 10x for the "
              "second-order stencil";
    root.addChild(ck);
  }

  root.setGroupStatus();
  return root;
}

}  // namespace pqn
