#pragma once

#include "tensor.hpp"

namespace pqn {

/// Exterior derivative of a k-form (functions count as 0-forms).
TensorField exteriorD(const TensorField& eta);

/// Lie derivative along X of a function, vector field, form, (1,1) tensor or
/// multivector.
TensorField lieDerivative(const TensorField& x, const TensorField& t);

/// Lie bracket of vector fields.
TensorField lieBracket(const TensorField& x, const TensorField& y);

/// Nijenhuis torsion of a (1,1) tensor as a vector-valued 2-form, computed
/// from the bracket formula T(X,Y)=[NX,NY]-N([NX,Y]+[X,NY]-N[X,Y]).
TensorField nijenhuisTorsion(const TensorField& n);

/// Same torsion through the Lie-derivative route (L_{NX}N - N L_X N)Y; used
/// as an independent cross-check of nijenhuisTorsion.
TensorField nijenhuisTorsionViaLie(const TensorField& n);

/// (L_{N e_j} N - N L_{e_j} N) e_k for one ordered coordinate pair.
TensorField torsionViaLiePair(const TensorField& n, int j, int k);

/// i_X T for a (1,2) torsion tensor: the (1,1) tensor Y -> T(X,Y).
TensorField torsionContraction(const TensorField& torsion, const TensorField& x);

/// Degree-zero derivation i_N on forms: sum over slots of N applied to one
/// argument; on 1-forms this is N^*.
TensorField iN(const TensorField& n, const TensorField& eta);

/// Deformed differential d_N = i_N d - d i_N.
TensorField dN(const TensorField& n, const TensorField& eta);

/// d_N evaluated from its defining alternating-sum formula with the deformed
/// bracket [X,Y]_N; cross-check route for dN.
TensorField dNDirect(const TensorField& n, const TensorField& eta);

/// Schouten bracket of multivectors. Sign convention: restricts to the Lie
/// bracket on vector fields, satisfies [X,Y^Z]=[X,Y]^Z+Y^[X,Z], graded
/// antisymmetry [P,Q]=-(-1)^{(p-1)(q-1)}[Q,P] and the graded Jacobi identity;
/// the remaining global orientation is fixed against the reference bivector
/// brackets of the Toda and potential families.
TensorField schouten(const TensorField& a, const TensorField& b);

/// Koszul bracket of forms: eq-liealgpi on 1-forms, K2 on (1-form, function),
/// extended to all degrees by recursive K1/K3 reduction.
TensorField koszul(const TensorField& pi, const TensorField& a, const TensorField& b);

/// Poisson bracket {f,g} = <df, pi dg>.
Expr poissonBracket(const TensorField& pi, const Expr& f, const Expr& g);

struct CompatibilityResult {
  ExprMatrix algebraic;                 // N pi - pi N^T (matrix of the defect)
  TensorField worstWitness;             // vector residual with largest support
  int witnessAlpha = -1, witnessX = -1; // coordinate pair of the witness
  bool algebraicOk = false;
  bool differentialOk = false;
  bool ok() const { return algebraicOk && differentialOk; }
};

/// Both Magri-Morosi compatibility conditions for (pi, N); the differential
/// condition is evaluated on the coordinate spanning set (dx_a, d/dx_b).
CompatibilityResult compatibilityResiduals(const TensorField& pi, const TensorField& n);

/// pi(phi): the trivector (alpha,beta,gamma) -> phi(pi alpha, pi beta, pi gamma).
TensorField piOfPhi(const TensorField& pi, const TensorField& phi);

/// The (1,1) tensor pi o omega^b (columns: pi(i_{d/dx_j} omega)).
TensorField piOmegaFlat(const TensorField& pi, const TensorField& omega);

}  // namespace pqn
