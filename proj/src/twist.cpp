#include "twist.hpp"

namespace pqn {

TensorField maurerCartanResidual(const PqnStructure& s, const TensorField& omega) {
  countOp("maurer_cartan_residual");
  if (!(omega.valence == Valence::Form && omega.degree == 2))
    throw Error("valence", "twisting form must be a 2-form");
  TensorField dOmega = exteriorD(omega);
  if (!dOmega.isZero())
    throw Error("omega-not-closed",
                "twisting 2-form is not closed: " + dOmega.describeWitness());
  TensorField half = koszul(s.pi(), omega, omega).scaled(Expr(Rational(1, 2)));
  return dN(s.n(), omega) + half + s.phi();
}

namespace {

TensorField deformedTensor(const TensorField& pi, const TensorField& n,
                           const TensorField& omega) {
  return n + piOmegaFlat(pi, omega);
}

}  // namespace

TwistResult twistStructure(const PqnStructure& s, const TensorField& omega) {
  countOp("twist");
  TwistResult out;
  out.report = Check::group("twist by closed 2-form");
  TensorField residual = maurerCartanResidual(s, omega);
  out.report.addChild(Check::exact("deformation residual d_N w + (1/2)[w,w]_pi + phi = 0",
                                   residual.isZero(), residual.describeWitness()));
  if (!residual.isZero()) {
    out.applied = false;
    out.report.addChild(
        Check::info("refused", "residual nonzero; no deformed tensor emitted"));
    out.report.setGroupStatus();
    return out;
  }
  out.applied = true;
  out.nPrime = deformedTensor(s.pi(), s.n(), omega);
  out.report.addChild(
      Check::info("orientation", "deformed tensor N' = N + pi w^b"));
  out.report.addChild(checkPn(s.pi(), out.nPrime));
  out.report.setGroupStatus();
  return out;
}

TwistResult untwistPn(const TensorField& pi, const TensorField& n,
                      const TensorField& omega, int part) {
  countOp("untwist_pn");
  if (part != 1 && part != 2)
    throw Error("bad-arg", "untwist part must be 1 or 2 (selected explicitly)");
  TwistResult out;
  out.report = Check::group("un-twist of a torsionless pair (part " +
                            std::to_string(part) + ")");
  out.report.addChild(checkPn(pi, n));

  TensorField dOmega = exteriorD(omega);
  out.report.addChild(
      Check::exact("d w = 0", dOmega.isZero(), dOmega.describeWitness()));
  if (!dOmega.isZero()) {
    out.report.setGroupStatus();
    return out;
  }

  TensorField dnOmega = dN(n, omega);
  TensorField half = koszul(pi, omega, omega).scaled(Expr(Rational(1, 2)));
  if (part == 1) {
    TensorField residual = dnOmega + half;
    out.report.addChild(Check::exact("d_N w + (1/2)[w,w]_pi = 0",
                                     residual.isZero(), residual.describeWitness()));
    if (!residual.isZero()) {
      out.report.setGroupStatus();
      return out;
    }
    out.applied = true;
    out.nPrime = deformedTensor(pi, n, omega);
    out.report.addChild(checkPn(pi, out.nPrime));
  } else {
    TensorField cond = koszul(pi, dnOmega, omega);
    out.report.addChild(Check::exact("[d_N w, w]_pi = 0", cond.isZero(),
                                     cond.describeWitness()));
    if (!cond.isZero()) {
      out.report.setGroupStatus();
      return out;
    }
    out.applied = true;
    out.nPrime = deformedTensor(pi, n, omega);
    out.phiPrime = dnOmega + half;
    PqnStructure deformed =
        PqnStructure::build(pi.chart, pi, out.nPrime, out.phiPrime, 1);
    out.report.addChild(checkPqn(deformed));
  }
  out.report.setGroupStatus();
  return out;
}

Check wrapOrientationChecks(const TodaModel& model) {
  const PqnStructure& s = model.structure;
  Check root = Check::group("wrap-form orientation bookkeeping");
  TensorField pof = piOmegaFlat(s.pi(), model.omega);
  TensorField plus = pof - model.deltaN;
  TensorField minus = pof + model.deltaN;
  root.addChild(Check::exact("pi Omega^b = DeltaN under the library flat/sharp",
                             plus.isZero(), plus.describeWitness()));
  root.addChild(Check::info(
      "pi Omega^b = -DeltaN",
      minus.isZero() ? "holds (degenerate)" : "does not hold under this orientation"));
  root.addChild(Check::info(
      "consequence",
      "with w = -Omega the deformed tensor N + pi w^b removes the wrap term"));
  root.setGroupStatus();
  return root;
}

}  // namespace pqn
