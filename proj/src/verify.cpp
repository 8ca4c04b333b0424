#include "verify.hpp"

namespace pqn {

const PqnStructure& AnyModel::structure() const {
  if (toda) return toda->structure;
  if (vclass) return vclass->structure;
  throw Error("internal", "empty model");
}

AnyModel makeModel(const std::string& name, int n, const Potential& potential,
                   int kmax) {
  AnyModel m;
  m.name = name;
  if (name == "closed-toda") {
    m.toda = closedToda(n, kmax);
  } else if (name == "open-toda") {
    m.toda = openToda(n, kmax);
  } else if (name == "v-class") {
    m.vclass = vClass(potential, kmax < 0 ? 3 : kmax);
  } else {
    throw Error("bad-arg", "unknown model '" + name +
                               "' (expected closed-toda, open-toda or v-class)");
  }
  return m;
}

StructureFile toStructureFile(const AnyModel& model) {
  const PqnStructure& s = model.structure();
  StructureFile f;
  f.model = model.name;
  f.chart = s.chart();
  f.tensors.emplace("pi", s.pi());
  f.tensors.emplace("N", s.n());
  if (!s.phi().isZero()) f.tensors.emplace("phi", s.phi());
  if (model.toda) {
    f.tensors.emplace("Omega", model.toda->omega);
    f.tensors.emplace("DeltaN", model.toda->deltaN);
  }
  if (model.vclass) f.potential = model.vclass->potential.name();
  return f;
}

Report checkModel(const AnyModel& model, bool forcePn) {
  const PqnStructure& s = model.structure();
  Report r;
  bool pqnMode = !s.phi().isZero() && !forcePn;
  r.invocation = "check " + model.name;
  r.root = pqnMode ? checkPqn(s) : checkPn(s.pi(), s.n());
  return r;
}

Report involutionReport(const AnyModel& model, int kmax) {
  const PqnStructure& s = model.structure();
  if (kmax < 0) kmax = s.kmax();
  Report r;
  r.invocation = "involution " + model.name;
  r.root = Check::group("trace invariants in involution (kmax=" +
                        std::to_string(kmax) + ")");
  Check recursion = Check::group("recursion residuals");
  InvolutionMatrix m = involutionMatrix(s, kmax, &recursion);
  for (const auto& [kj, v] : m.brackets)
    r.root.addChild(Check::exact("{I" + std::to_string(kj.first) + ",I" +
                                     std::to_string(kj.second) + "} = 0",
                                 v.isZero(), v.str()));
  recursion.setGroupStatus();
  r.root.addChild(recursion);
  r.root.setGroupStatus();
  return r;
}

Check lenardChecks(const PqnStructure& s) {
  Check root = Check::group("generalized recursion relations");
  for (int k = 2; k <= s.kmax(); ++k) {
    TensorField d = lenardDefect(s, k);
    root.addChild(Check::exact(
        "dI_" + std::to_string(k + 1) + " = N* dI_" + std::to_string(k) +
            " - phi_" + std::to_string(k - 1),
        d.isZero(), d.describeWitness()));
  }
  TensorField d1 = lenardDefect(s, 1);
  root.addChild(Check::info(
      "k=1 analogue dI_2 - N* dI_1 + phi_0",
      d1.isZero() ? "holds as well (not asserted)" : "nonzero: " + d1.describeWitness()));
  root.setGroupStatus();
  return root;
}

Report verifyAll(const AnyModel& model, int kmax, const SampleConfig& cfg) {
  const PqnStructure& s = model.structure();
  if (kmax < 0) kmax = s.kmax();
  Report r;
  r.invocation = "verify-all " + model.name;
  r.root = Check::group("full verification: " + model.name);

  // Axioms.
  bool pqnMode = !s.phi().isZero();
  r.root.addChild(timed([&] { return pqnMode ? checkPqn(s) : checkPn(s.pi(), s.n()); }));

  // Involutivity and recursion residuals.
  {
    Check inv = Check::group("involution matrix");
    Check recursion = Check::group("recursion residuals");
    InvolutionMatrix m = involutionMatrix(s, kmax, &recursion);
    inv.addChild(Check::exact("all pairwise brackets vanish", m.allZero(),
                              m.witness()));
    recursion.setGroupStatus();
    inv.addChild(recursion);
    inv.setGroupStatus();
    r.root.addChild(inv);
  }

  r.root.addChild(lenardChecks(s));

  if (model.toda) {
    const TodaModel& toda = *model.toda;
    if (toda.flavor == TodaFlavor::Closed) {
      r.root.addChild(timed([&] { return todaIdentitySuite(toda, kmax); }));
      r.root.addChild(wrapOrientationChecks(toda));

      // Deformation round trip: closed --(-Omega)--> open --(+Omega)--> closed.
      Check twistGroup = Check::group("deformation by the wrap form");
      TwistResult tw = twistStructure(s, -toda.omega);
      twistGroup.addChild(tw.report);
      if (tw.applied) {
        TodaModel open = openToda(toda.n, kmax);
        TensorField diff = tw.nPrime - open.structure.n();
        twistGroup.addChild(Check::exact("deformed tensor equals the open lattice",
                                         diff.isZero(), diff.describeWitness()));
        TwistResult back = untwistPn(s.pi(), tw.nPrime, toda.omega, 2);
        twistGroup.addChild(back.report);
        if (back.applied) {
          TensorField dn = back.nPrime - s.n();
          TensorField dp = back.phiPrime - s.phi();
          twistGroup.addChild(Check::exact("round trip restores N", dn.isZero(),
                                           dn.describeWitness()));
          twistGroup.addChild(Check::exact("round trip restores phi", dp.isZero(),
                                           dp.describeWitness()));
        }
      }
      twistGroup.setGroupStatus();
      r.root.addChild(twistGroup);

      // Lax consistency.
      Check laxGroup = Check::group("Lax matrix consistency");
      ExprMatrix lax = laxMatrix(toda.n);
      laxGroup.addChild(Check::exact("constructor and model Lax matrices agree",
                                     lax == toda.lax));
      Expr h1 = s.traceInvariant(1) / Expr(2L);
      laxGroup.addChild(Check::exact("tr L = H_1", (lax.trace() - h1).isZero()));
      Expr h2 = s.traceInvariant(2) / Expr(2L);
      Expr trl2 = (lax * lax).trace() / Expr(2L);
      laxGroup.addChild(Check::exact("tr L^2 / 2 = H_2", (trl2 - h2).isZero()));
      if (toda.n == 4 && s.kmax() >= 4) {
        Expr h4 = s.traceInvariant(4) / Expr(2L);
        Expr trl4 = lax.pow(4).trace() * Expr(Rational(1, 4));
        TensorField dDiff =
            exteriorD(TensorField::function(s.chart(), h4 - trl4));
        laxGroup.addChild(Check::exact("d(H_4 - tr L^4 / 4) = 0", dDiff.isZero(),
                                       dDiff.describeWitness()));
      }
      laxGroup.setGroupStatus();
      r.root.addChild(laxGroup);
    }

    // Numeric oracle and a short flow.
    r.root.addChild(timed([&] { return numericOracleReport(s, cfg); }));
    {
      Trajectory traj = integrateToda(toda, defaultInitialState(toda.n), 1e-3, 1.0,
                                      std::min(kmax, s.kmax()));
      Check flow = Check::numeric("invariant drift along the H_2 flow (T=1)",
                                  traj.maxDrift(), cfg.tol);
      r.root.addChild(flow);
    }
  }

  if (model.vclass) {
    const VClassModel& v = *model.vclass;
    Check vGroup = Check::group("potential-family brackets");
    Expr h1 = v.hamiltonian(1), h2 = v.hamiltonian(2), h3 = v.hamiltonian(3);
    Expr b12 = poissonBracket(s.pi(), h1, h2);
    Expr b13 = poissonBracket(s.pi(), h1, h3);
    vGroup.addChild(Check::exact("{H_1,H_2} = 0", b12.isZero(), b12.str()));
    vGroup.addChild(Check::exact("{H_1,H_3} = 0", b13.isZero(), b13.str()));
    Expr b23 = poissonBracket(s.pi(), h2, h3);
    vGroup.addChild(Check::info("{H_2,H_3}", b23.isZero() ? "0" : b23.str()));
    vGroup.setGroupStatus();
    r.root.addChild(vGroup);
  }

  r.root.setGroupStatus();
  return r;
}

}  // namespace pqn
