#include "pqn/pqn.h"

#include <cstdlib>
#include <cstring>

#include "parser.hpp"
#include "verify.hpp"

using namespace pqn;

struct pqn_model {
  AnyModel model;
};

struct pqn_report {
  Report report;
};

namespace {

thread_local std::string t_lastError;

char* dupString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

pqn_status statusOf(const Error& e) {
  const std::string& c = e.code();
  if (c == "parse") return PQN_ERR_PARSE;
  if (c == "schema") return PQN_ERR_SCHEMA;
  if (c == "eval-formal" || c == "eval-missing" || c == "eval-singular")
    return PQN_ERR_EVAL;
  if (c == "omega-not-closed" || c == "not-poisson" || c == "not-compatible" ||
      c == "refused")
    return PQN_ERR_REFUSED;
  if (c == "internal") return PQN_ERR_INTERNAL;
  return PQN_ERR_INVALID_ARG;
}

template <typename Fn>
pqn_status guarded(Fn&& fn) {
  try {
    fn();
    t_lastError.clear();
    return PQN_OK;
  } catch (const Error& e) {
    t_lastError = e.what();
    return statusOf(e);
  } catch (const std::exception& e) {
    t_lastError = e.what();
    return PQN_ERR_INTERNAL;
  } catch (...) {
    t_lastError = "unknown failure";
    return PQN_ERR_INTERNAL;
  }
}

const TodaModel& requireToda(const AnyModel& m) {
  if (!m.toda) throw Error("bad-arg", "operation requires a lattice model");
  return *m.toda;
}

TensorField omegaFromSpec(const TodaModel& toda, const std::string& spec) {
  if (spec == "minus-Omega") return -toda.omega;
  if (spec == "plus-Omega") return toda.omega;
  if (spec == "zero") return TensorField::form(toda.structure.chart(), 2);
  throw Error("bad-arg",
              "omega spec must be minus-Omega, plus-Omega or zero, got '" + spec + "'");
}

pqn_report* wrapReport(Report r) { return new pqn_report{std::move(r)}; }

}  // namespace

extern "C" {

const char* pqn_version(void) { return "1.0.0"; }

const char* pqn_last_error(void) { return t_lastError.c_str(); }

void pqn_string_free(char* s) { std::free(s); }

pqn_status pqn_model_create(const char* name, int n, const char* potential,
                            int kmax, pqn_model** out) {
  return guarded([&] {
    if (!name || !out) throw Error("bad-arg", "name and out must be non-null");
    Potential pot = Potential::parse(potential ? potential : "");
    auto* m = new pqn_model{makeModel(name, n, pot, kmax)};
    *out = m;
  });
}

pqn_status pqn_model_from_json(const char* json, int kmax, pqn_model** out) {
  return guarded([&] {
    if (!json || !out) throw Error("bad-arg", "json and out must be non-null");
    StructureFile f = StructureFile::fromJson(json);
    AnyModel m;
    m.name = f.model;
    if (f.model == "closed-toda" || f.model == "open-toda") {
      // Rebuild the lattice wrappers so lattice-only operations stay available.
      m = makeModel(f.model, f.chart.n, Potential::formal(), kmax);
      // The file still defines the structure; verify it matches canonically.
      PqnStructure fromFile = f.toStructure(kmax < 0 ? f.chart.n : kmax);
      if (!(fromFile.n() == m.structure().n() && fromFile.pi() == m.structure().pi() &&
            fromFile.phi() == m.structure().phi()))
        throw Error("schema", "structure file disagrees with the named model");
    } else if (f.model == "v-class") {
      m = makeModel("v-class", 3, Potential::parse(f.potential), kmax);
      PqnStructure fromFile = f.toStructure(kmax < 0 ? 3 : kmax);
      if (!(fromFile.n() == m.structure().n()))
        throw Error("schema", "structure file disagrees with the named model");
    } else {
      throw Error("schema", "custom structure files need a known model tag");
    }
    *out = new pqn_model{std::move(m)};
  });
}

pqn_status pqn_model_to_json(const pqn_model* model, char** json_out) {
  return guarded([&] {
    if (!model || !json_out) throw Error("bad-arg", "null argument");
    *json_out = dupString(toStructureFile(model->model).toJson());
  });
}

void pqn_model_destroy(pqn_model* model) { delete model; }

pqn_status pqn_check(const pqn_model* model, int force_pn, pqn_report** out) {
  return guarded([&] {
    if (!model || !out) throw Error("bad-arg", "null argument");
    Report r = checkModel(model->model, force_pn != 0);
    r.root = timed([&] { return std::move(r.root); });
    *out = wrapReport(std::move(r));
  });
}

pqn_status pqn_involution(const pqn_model* model, int kmax, pqn_report** out) {
  return guarded([&] {
    if (!model || !out) throw Error("bad-arg", "null argument");
    *out = wrapReport(involutionReport(model->model, kmax));
  });
}

pqn_status pqn_toda_suite(const pqn_model* model, int kmax, pqn_report** out) {
  return guarded([&] {
    if (!model || !out) throw Error("bad-arg", "null argument");
    const TodaModel& toda = requireToda(model->model);
    Report r;
    r.invocation = "toda-suite";
    r.root = todaIdentitySuite(toda, kmax < 0 ? toda.structure.kmax() : kmax);
    *out = wrapReport(std::move(r));
  });
}

pqn_status pqn_twist(const pqn_model* model, const char* omega_spec,
                     pqn_report** out) {
  return guarded([&] {
    if (!model || !omega_spec || !out) throw Error("bad-arg", "null argument");
    const TodaModel& toda = requireToda(model->model);
    TensorField omega = omegaFromSpec(toda, omega_spec);
    TwistResult tw = twistStructure(toda.structure, omega);
    Report r;
    r.invocation = std::string("twist ") + omega_spec;
    r.root = Check::group("twist");
    r.root.addChild(wrapOrientationChecks(toda));
    r.root.addChild(tw.report);
    if (tw.applied && std::string(omega_spec) == "minus-Omega" &&
        toda.flavor == TodaFlavor::Closed) {
      TodaModel open = openToda(toda.n, 1);
      TensorField diff = tw.nPrime - open.structure.n();
      r.root.addChild(Check::exact("deformed tensor equals the open lattice",
                                   diff.isZero(), diff.describeWitness()));
    }
    r.root.setGroupStatus();
    *out = wrapReport(std::move(r));
  });
}

pqn_status pqn_untwist(const pqn_model* model, const char* omega_spec, int part,
                       pqn_report** out) {
  return guarded([&] {
    if (!model || !omega_spec || !out) throw Error("bad-arg", "null argument");
    const TodaModel& toda = requireToda(model->model);
    TensorField omega = omegaFromSpec(toda, omega_spec);
    TwistResult tw =
        untwistPn(toda.structure.pi(), toda.structure.n(), omega, part);
    Report r;
    r.invocation = std::string("untwist ") + omega_spec;
    r.root = tw.report;
    if (tw.applied && part == 2 && toda.flavor == TodaFlavor::Open &&
        std::string(omega_spec) == "plus-Omega" && toda.n >= 3) {
      TodaModel closed = closedToda(toda.n, 1);
      TensorField dn = tw.nPrime - closed.structure.n();
      TensorField dp = tw.phiPrime - closed.structure.phi();
      r.root.addChild(Check::exact("deformed tensor equals the closed lattice",
                                   dn.isZero(), dn.describeWitness()));
      r.root.addChild(Check::exact("produced 3-form equals the closed-lattice one",
                                   dp.isZero(), dp.describeWitness()));
      r.root.setGroupStatus();
    }
    *out = wrapReport(std::move(r));
  });
}

pqn_status pqn_flow(const pqn_model* model, double dt, double t_end, int kmax,
                    int hamiltonian, const double* x0, size_t x0_len,
                    double tol, char** csv_out, pqn_report** out) {
  return guarded([&] {
    if (!model || !out) throw Error("bad-arg", "null argument");
    const TodaModel& toda = requireToda(model->model);
    int n = toda.n;
    std::vector<double> state;
    if (x0) {
      if (x0_len != static_cast<size_t>(2 * n))
        throw Error("bad-arg", "x0 must have length 2n");
      state.assign(x0, x0 + x0_len);
    } else {
      state = defaultInitialState(n);
    }
    if (kmax < 0) kmax = toda.structure.kmax();
    Trajectory traj = integrateToda(toda, state, dt, t_end, kmax, hamiltonian);
    Report r;
    r.invocation = "flow";
    r.root = Check::group("Hamiltonian flow");
    if (traj.aborted)
      r.root.addChild(Check::exact(
          "flow stayed finite", false,
          "aborted at t = " + std::to_string(traj.lastValidTime)));
    for (int k = 1; k <= kmax; ++k)
      r.root.addChild(Check::numeric("drift of I_" + std::to_string(k),
                                     traj.drift[static_cast<size_t>(k - 1)], tol));
    r.root.setGroupStatus();
    if (csv_out) *csv_out = dupString(traj.toCsv(toda.structure.chart()));
    *out = wrapReport(std::move(r));
  });
}

pqn_status pqn_oracle(const pqn_model* model, unsigned seed, int samples,
                      double h, double tol, pqn_report** out) {
  return guarded([&] {
    if (!model || !out) throw Error("bad-arg", "null argument");
    SampleConfig cfg;
    cfg.seed = seed;
    if (samples > 0) cfg.samples = samples;
    if (h > 0) cfg.h = h;
    if (tol > 0) cfg.tol = tol;
    if (model->model.vclass) {
      Potential::Kind k = model->model.vclass->potential.kind();
      if (k == Potential::Kind::Formal)
        throw Error("eval-formal",
                    "numeric sampling needs a concrete potential, not a formal one");
      // keep samples away from the collision locus of singular potentials
      if (k != Potential::Kind::Exp) cfg.minSeparation = 0.1;
    }
    Report r;
    r.invocation = "oracle";
    r.root = numericOracleReport(model->model.structure(), cfg);
    *out = wrapReport(std::move(r));
  });
}

pqn_status pqn_verify_all(const pqn_model* model, int kmax, unsigned seed,
                          double tol, pqn_report** out) {
  return guarded([&] {
    if (!model || !out) throw Error("bad-arg", "null argument");
    SampleConfig cfg;
    cfg.seed = seed;
    if (tol > 0) cfg.tol = tol;
    *out = wrapReport(verifyAll(model->model, kmax, cfg));
  });
}

int pqn_report_passed(const pqn_report* report) {
  return report && report->report.passed() ? 1 : 0;
}

pqn_status pqn_report_render(const pqn_report* report, int as_json,
                             int with_timings, char** out) {
  return guarded([&] {
    if (!report || !out) throw Error("bad-arg", "null argument");
    *out = dupString(as_json ? report->report.renderJson(with_timings != 0)
                             : report->report.renderText());
  });
}

void pqn_report_destroy(pqn_report* report) { delete report; }

pqn_status pqn_expr_canonical(const char* text, char** out) {
  return guarded([&] {
    if (!text || !out) throw Error("bad-arg", "null argument");
    *out = dupString(parseExpr(text).str());
  });
}

}  // extern "C"
