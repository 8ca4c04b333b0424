#pragma once

#include "structure.hpp"

namespace pqn {

/// Canonical Poisson bivector sum_i d/dq_i ^ d/dp_i, oriented so that
/// pi(dp_i) = d/dq_i and pi(dq_i) = -d/dp_i, i.e. {q_i, p_j} = delta_ij and
/// the first trace field pi dI_1 is twice the translation field.
TensorField canonicalPoisson(const Chart& c);

enum class TodaFlavor { Open, Closed };

/// Nearest-neighbour exponential lattice with (closed) or without (open) the
/// wrap-around interaction between particles n and 1.
struct TodaModel {
  TodaFlavor flavor = TodaFlavor::Closed;
  int n = 0;
  PqnStructure structure;
  TensorField omega;   // e^{q_n-q_1} dq_n ^ dq_1
  TensorField deltaN;  // e^{q_n-q_1} (d/dp_n (x) dq_1 - d/dp_1 (x) dq_n)
  ExprMatrix lax;      // symmetric Lax matrix of the flavor
};

/// Closed lattice; requires n >= 3 (the cyclic neighbour structure
/// degenerates below that). kmax defaults to n.
TodaModel closedToda(int n, int kmax = -1);

/// Open lattice; requires n >= 2.
TodaModel openToda(int n, int kmax = -1);

/// Symmetric Lax matrix of the closed lattice (half-exponential entries).
ExprMatrix laxMatrix(int n);

/// Three-particle family on R^6 driven by a potential V of one variable.
struct VClassModel {
  Potential potential = Potential::formal();
  PqnStructure structure;
  /// H_k = I_k / 2.
  Expr hamiltonian(int k) const;
};

VClassModel vClass(const Potential& potential, int kmax = 3);

/// Structure-level identity suite for a closed Toda model: annihilation of
/// the hierarchy differences by the wrap 2-form, the vanishing corner entries
/// and skew upper-right block of N^k, the trace pairing formula, the
/// recursion correction cancellation, and the contracted-torsion split.
Check todaIdentitySuite(const TodaModel& model, int kmax);

}  // namespace pqn
