#include "structure.hpp"

namespace pqn {

namespace {

// N pi as a bivector when the matrix is antisymmetric.
bool matrixAntisymmetric(const ExprMatrix& m) {
  for (int i = 0; i < m.rows(); ++i) {
    if (!m.at(i, i).isZero()) return false;
    for (int j = i + 1; j < m.cols(); ++j)
      if (!(m.at(i, j) == -m.at(j, i))) return false;
  }
  return true;
}

TensorField bivectorFromMatrix(const Chart& c, const ExprMatrix& m) {
  TensorField t = TensorField::multivector(c, 2);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = i + 1; j < m.cols(); ++j)
      if (!m.at(i, j).isZero()) t.set({i, j}, m.at(i, j));
  return t;
}

}  // namespace

PqnStructure PqnStructure::build(const Chart& chart, TensorField pi, TensorField n,
                                 TensorField phi, int kmax) {
  if (kmax < 1) throw Error("bad-arg", "kmax must be at least 1");
  PqnStructure s;
  s.chart_ = chart;
  s.pi_ = std::move(pi);
  s.n_ = std::move(n);
  s.phi_ = std::move(phi);
  s.kmax_ = kmax;

  TensorField schoutenPi = schouten(s.pi_, s.pi_);
  if (!schoutenPi.isZero())
    throw Error("not-poisson",
                "[pi,pi] != 0, witness " + schoutenPi.describeWitness());

  s.nMat_ = toMatrix(s.n_);
  s.piMat_ = bivectorMatrix(s.pi_);
  s.piPrimeMat_ = s.nMat_ * s.piMat_;
  s.piPrimeOk_ = matrixAntisymmetric(s.piPrimeMat_);
  if (s.piPrimeOk_) s.piPrime_ = bivectorFromMatrix(chart, s.piPrimeMat_);

  s.nPow_.push_back(ExprMatrix::identity(chart.dim()));
  for (int k = 1; k <= kmax + 1; ++k) s.nPow_.push_back(s.nPow_.back() * s.nMat_);

  countOp("trace_invariants");
  for (int k = 1; k <= kmax + 1; ++k) {
    Expr ik = s.nPow_[static_cast<size_t>(k)].trace() / Expr(static_cast<long>(k));
    s.traces_.push_back(ik);
    TensorField dik = exteriorD(TensorField::function(chart, ik));
    s.dTraces_.push_back(dik);
    s.fields_.push_back(sharp(s.pi_, dik));
  }

  s.torsion_ = nijenhuisTorsion(s.n_);

  for (int l = 0; l <= kmax; ++l) {
    TensorField form = TensorField::form(chart, 1);
    for (int a = 0; a < chart.dim(); ++a) {
      TensorField ixT =
          torsionContraction(s.torsion_, TensorField::basisVector(chart, a));
      // Tr(N^l i_X T) without forming the product matrix.
      const ExprMatrix& nl = s.nPow_[static_cast<size_t>(l)];
      Expr tr;
      for (const auto& [idx, v] : ixT.comp) tr += nl.at(idx[1], idx[0]) * v;
      form.add({a}, tr);
    }
    s.phiL_.push_back(form);
  }
  return s;
}

const ExprMatrix& PqnStructure::nPower(int k) const {
  if (k < 0 || k >= static_cast<int>(nPow_.size()))
    throw Error("bad-arg", "N power outside cached range");
  return nPow_[static_cast<size_t>(k)];
}

const TensorField& PqnStructure::piPrime() const {
  if (!piPrimeOk_)
    throw Error("not-compatible", "N pi is not antisymmetric; pi' undefined");
  return piPrime_;
}

Expr PqnStructure::traceInvariant(int k) const {
  if (k < 1 || k > static_cast<int>(traces_.size()))
    throw Error("bad-arg", "trace invariant outside cached range");
  return traces_[static_cast<size_t>(k - 1)];
}

const TensorField& PqnStructure::dTrace(int k) const {
  if (k < 1 || k > static_cast<int>(dTraces_.size()))
    throw Error("bad-arg", "dI outside cached range");
  return dTraces_[static_cast<size_t>(k - 1)];
}

const TensorField& PqnStructure::hierarchyField(int k) const {
  if (k < 1 || k > static_cast<int>(fields_.size()))
    throw Error("bad-arg", "hierarchy field outside cached range");
  return fields_[static_cast<size_t>(k - 1)];
}

const TensorField& PqnStructure::phiL(int l) const {
  countOp("phi_l");
  if (l < 0 || l >= static_cast<int>(phiL_.size()))
    throw Error("bad-arg", "phi_l outside cached range");
  return phiL_[static_cast<size_t>(l)];
}

TensorField PqnStructure::hierarchyDifference(int k) const {
  if (k < 1 || k > kmax_) throw Error("bad-arg", "Y_k outside cached range");
  const ExprMatrix& nk = nPower(k - 1);
  const TensorField& x1 = hierarchyField(1);
  TensorField out = TensorField::vectorField(chart_);
  for (const auto& [idx, v] : x1.comp)
    for (int r = 0; r < chart_.dim(); ++r) {
      const Expr& m = nk.at(r, idx[0]);
      if (!m.isZero()) out.add({r}, m * v);
    }
  return out - hierarchyField(k);
}

std::vector<Expr> traceInvariants(const TensorField& n, int kmax) {
  countOp("trace_invariants");
  if (kmax < 1) throw Error("bad-arg", "kmax must be at least 1");
  ExprMatrix m = toMatrix(n);
  ExprMatrix acc = ExprMatrix::identity(m.rows());
  std::vector<Expr> out;
  for (int k = 1; k <= kmax; ++k) {
    acc = acc * m;
    out.push_back(acc.trace() / Expr(static_cast<long>(k)));
  }
  return out;
}

TensorField lenardDefect(const PqnStructure& s, int k) {
  countOp("lenard_defect");
  if (k < 1 || k > s.kmax()) throw Error("bad-arg", "lenard defect needs 1 <= k <= kmax");
  TensorField nStar = applyTranspose(s.n(), s.dTrace(k));
  return s.dTrace(k + 1) - nStar + s.phiL(k - 1);
}

bool InvolutionMatrix::allZero() const {
  for (const auto& [kj, v] : brackets)
    if (!v.isZero()) return false;
  return true;
}

std::string InvolutionMatrix::witness() const {
  for (const auto& [kj, v] : brackets)
    if (!v.isZero())
      return "{I" + std::to_string(kj.first) + ",I" + std::to_string(kj.second) +
             "} = " + v.str();
  return "";
}

InvolutionMatrix involutionMatrix(const PqnStructure& s, int kmax, Check* recursionChecks) {
  countOp("involution_matrix");
  if (kmax > s.kmax())
    throw Error("bad-arg", "involution matrix kmax exceeds structure cache");
  InvolutionMatrix m;
  m.kmax = kmax;
  for (int k = 2; k <= kmax; ++k)
    for (int j = 1; j < k; ++j)
      m.brackets[{k, j}] = contract(s.dTrace(k), s.hierarchyField(j));

  if (recursionChecks) {
    // Recursion-relation residuals tying consecutive brackets to the phi_l
    // corrections; identities of the structure, independent of involutivity.
    for (int k = 2; k <= kmax; ++k)
      for (int j = 1; j < k; ++j) {
        Expr lhs = m.brackets[{k, j}];
        Expr prev;  // {I_{k-1}, I_{j+1}}
        if (k - 1 > j + 1)
          prev = m.brackets[{k - 1, j + 1}];
        else if (k - 1 < j + 1)
          prev = -m.brackets[{j + 1, k - 1}];
        Expr corr = contract(s.phiL(j - 1), s.hierarchyField(k - 1)) +
                    contract(s.phiL(k - 2), s.hierarchyField(j));
        Expr residual = lhs - prev + corr;
        recursionChecks->addChild(Check::exact(
            "recursion residual {I" + std::to_string(k) + ",I" + std::to_string(j) +
                "} - {I" + std::to_string(k - 1) + ",I" + std::to_string(j + 1) +
                "} + corrections = 0",
            residual.isZero(), residual.str()));
      }
    for (int j = 1; j < kmax; ++j) {
      Expr lhs = m.brackets[{j + 1, j}];
      Expr rhs = -contract(s.phiL(j - 1), s.hierarchyField(j));
      recursionChecks->addChild(Check::exact(
          "adjacent bracket {I" + std::to_string(j + 1) + ",I" + std::to_string(j) +
              "} = -<phi_" + std::to_string(j - 1) + ", X_" + std::to_string(j) + ">",
          (lhs - rhs).isZero(), (lhs - rhs).str()));
    }
  }
  return m;
}

namespace {

// T_N(e_a, e_b) = pi(i_{e_a ^ e_b} phi) on all coordinate pairs, as a (1,2)
// tensor for direct comparison with the stored torsion.
TensorField torsionFromPhi(const TensorField& pi, const TensorField& phi) {
  const Chart& c = pi.chart;
  TensorField out = TensorField::tensor12(c);
  for (int a = 0; a < c.dim(); ++a)
    for (int b = a + 1; b < c.dim(); ++b) {
      TensorField oneForm = interior(TensorField::basisVector(c, b),
                                     interior(TensorField::basisVector(c, a), phi));
      TensorField v = sharp(pi, oneForm);
      for (const auto& [vi, vv] : v.comp) out.add({vi[0], a, b}, vv);
    }
  return out;
}

}  // namespace

Check checkPqn(const PqnStructure& s) {
  countOp("check_pqn");
  Check root = Check::group("quasi-Nijenhuis axioms");
  root.addChild(Check::exact("[pi,pi] = 0 (Poisson)", true));  // verified at build

  Check compatGroup = timed([&] {
    CompatibilityResult compat = compatibilityResiduals(s.pi(), s.n());
    Check g = Check::group("compatibility");
    g.addChild(Check::exact("N pi = pi N*", compat.algebraicOk));
    Check diff = Check::exact("Lie-derivative condition on coordinate covers",
                              compat.differentialOk,
                              compat.worstWitness.describeWitness());
    diff.note =
        "checked on the coordinate spanning set (dx_a, d/dx_b); tensoriality in "
        "the 1-form slot is not assumed";
    g.addChild(diff);
    g.setGroupStatus();
    return g;
  });
  root.addChild(compatGroup);

  root.addChild(timed([&] {
    TensorField dphi = exteriorD(s.phi());
    return Check::exact("d phi = 0", dphi.isZero(), dphi.describeWitness());
  }));
  root.addChild(timed([&] {
    TensorField diNphi = exteriorD(iN(s.n(), s.phi()));
    return Check::exact("d(i_N phi) = 0", diNphi.isZero(), diNphi.describeWitness());
  }));

  root.addChild(timed([&] {
    TensorField viaPhi = torsionFromPhi(s.pi(), s.phi());
    TensorField tdiff = s.torsion() - viaPhi;
    return Check::exact("T_N(X,Y) = pi(i_{X^Y} phi) on coordinate pairs",
                        tdiff.isZero(), tdiff.describeWitness());
  }));

  if (s.piPrimeIsBivector()) {
    root.addChild(timed([&] {
      TensorField c1 = schouten(s.pi(), s.piPrime());
      return Check::exact("[pi, pi'] = 0", c1.isZero(), c1.describeWitness());
    }));
    root.addChild(timed([&] {
      TensorField c2 = schouten(s.piPrime(), s.piPrime());
      TensorField rhs = piOfPhi(s.pi(), s.phi()).scaled(Expr(2L));
      TensorField d2 = c2 - rhs;
      return Check::exact("[pi', pi'] = 2 pi(phi)", d2.isZero(),
                          d2.describeWitness());
    }));
  } else {
    root.addChild(Check::exact("[pi, pi'] = 0 (pi' = N pi antisymmetric)", false,
                               "N pi is not antisymmetric"));
  }

  Expr det = bivectorMatrix(s.pi()).determinant();
  root.addChild(Check::info("pi invertible (nondegenerate route applies)",
                            det.isZero() ? "no" : "yes"));
  root.setGroupStatus();
  return root;
}

Check checkPn(const TensorField& pi, const TensorField& n) {
  countOp("check_pn");
  Check root = Check::group("Poisson-Nijenhuis axioms");

  TensorField spi = schouten(pi, pi);
  root.addChild(Check::exact("[pi,pi] = 0 (Poisson)", spi.isZero(), spi.describeWitness()));

  CompatibilityResult compat = compatibilityResiduals(pi, n);
  root.addChild(Check::exact("compatibility: N pi = pi N*", compat.algebraicOk));
  Check diff = Check::exact(
      "compatibility: Lie-derivative condition on coordinate covers",
      compat.differentialOk, compat.worstWitness.describeWitness());
  diff.note =
      "checked on the coordinate spanning set (dx_a, d/dx_b); tensoriality in "
      "the 1-form slot is not assumed";
  root.addChild(diff);

  TensorField t = nijenhuisTorsion(n);
  root.addChild(Check::exact("T_N = 0", t.isZero(), t.describeWitness()));

  ExprMatrix ppm = toMatrix(n) * bivectorMatrix(pi);
  if (matrixAntisymmetric(ppm)) {
    TensorField pp = bivectorFromMatrix(pi.chart, ppm);
    TensorField c1 = schouten(pi, pp);
    root.addChild(Check::exact("[pi, pi'] = 0", c1.isZero(), c1.describeWitness()));
    TensorField c2 = schouten(pp, pp);
    root.addChild(Check::exact("[pi', pi'] = 0 (pi' Poisson)", c2.isZero(),
                               c2.describeWitness()));
  } else {
    root.addChild(Check::exact("pi' = N pi antisymmetric", false,
                               "N pi is not antisymmetric"));
  }
  root.setGroupStatus();
  return root;
}

}  // namespace pqn
