#pragma once

#include "calculus.hpp"
#include "report.hpp"

namespace pqn {

/// A (pi, N, phi) triple on a chart with the derived objects cached:
/// pi' = N pi, trace invariants I_k = Tr(N^k)/k, hierarchy fields X_k = pi dI_k,
/// the torsion, the 1-forms phi_l and the differences Y_k = N^{k-1}X_1 - X_k.
/// phi = 0 encodes a candidate Poisson-Nijenhuis pair.
class PqnStructure {
public:
  /// Builds caches up to kmax; verifies [pi,pi] = 0 and throws Error
  /// ("not-poisson") otherwise.
  static PqnStructure build(const Chart& chart, TensorField pi, TensorField n,
                            TensorField phi, int kmax);

  const Chart& chart() const { return chart_; }
  const TensorField& pi() const { return pi_; }
  const TensorField& n() const { return n_; }
  const TensorField& phi() const { return phi_; }
  int kmax() const { return kmax_; }

  const ExprMatrix& nMatrix() const { return nMat_; }
  const ExprMatrix& nPower(int k) const;        // k = 0..kmax+1
  const TensorField& piPrime() const;           // throws if N pi not a bivector
  bool piPrimeIsBivector() const { return piPrimeOk_; }
  const ExprMatrix& piPrimeMatrix() const { return piPrimeMat_; }
  Expr traceInvariant(int k) const;             // I_k, k = 1..kmax+1
  const TensorField& dTrace(int k) const;       // dI_k
  const TensorField& hierarchyField(int k) const;  // X_k
  const TensorField& torsion() const { return torsion_; }
  const TensorField& phiL(int l) const;         // l = 0..kmax
  TensorField hierarchyDifference(int k) const;    // Y_k = N^{k-1}X_1 - X_k

private:
  Chart chart_;
  TensorField pi_, n_, phi_;
  int kmax_ = 0;
  ExprMatrix nMat_, piMat_, piPrimeMat_;
  bool piPrimeOk_ = false;
  TensorField piPrime_;
  std::vector<ExprMatrix> nPow_;
  std::vector<Expr> traces_;
  std::vector<TensorField> dTraces_, fields_;
  TensorField torsion_;
  std::vector<TensorField> phiL_;
};

/// I_k = Tr(N^k)/k for k = 1..kmax.
std::vector<Expr> traceInvariants(const TensorField& n, int kmax);

/// Generalized Lenard-Magri defect dI_{k+1} - N^* dI_k + phi_{k-1}; exactly
/// zero for coherent structures when k >= 2. k = 1 is evaluated for reporting
/// but carries no guarantee.
TensorField lenardDefect(const PqnStructure& s, int k);

struct InvolutionMatrix {
  int kmax = 0;
  /// brackets[(k,j)] = {I_k, I_j} for 1 <= j < k <= kmax.
  std::map<std::pair<int, int>, Expr> brackets;
  bool allZero() const;
  std::string witness() const;
};

/// Pairwise Poisson brackets of the trace invariants plus the recursion
/// residual checks (reported in `recursionChecks`).
InvolutionMatrix involutionMatrix(const PqnStructure& s, int kmax,
                                  Check* recursionChecks = nullptr);

/// Full quasi-Nijenhuis axiom report for (pi, N, phi).
Check checkPqn(const PqnStructure& s);

/// Poisson-Nijenhuis axiom report for (pi, N): compatibility, vanishing
/// torsion, pi' Poisson and [pi, pi'] = 0.
Check checkPn(const TensorField& pi, const TensorField& n);

}  // namespace pqn
