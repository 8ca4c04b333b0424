#pragma once

#include "models.hpp"

namespace pqn {

/// d_N omega + (1/2)[omega,omega]_pi + phi. Exactly zero iff the closed
/// 2-form omega deforms the structure onto a torsionless pair.
TensorField maurerCartanResidual(const PqnStructure& s, const TensorField& omega);

struct TwistResult {
  bool applied = false;   // false: residual nonzero, no tensor produced
  TensorField nPrime;     // N + pi omega^b (orientation fixed by the lattice
                          // anchor: twisting the closed lattice by -Omega
                          // must reproduce the open one)
  TensorField phiPrime;   // un-twist part 2 only
  Check report;
};

/// Deform a quasi-Nijenhuis structure by a closed 2-form solving the
/// Maurer-Cartan condition; refuses (applied=false, report carries the
/// witness) when the residual is nonzero rather than emitting an unchecked
/// tensor.
TwistResult twistStructure(const PqnStructure& s, const TensorField& omega);

/// Converse direction, starting from a torsionless pair (pi, N).
/// part 1: omega with d_N omega + (1/2)[omega,omega]_pi = 0 gives another
///         torsionless pair.
/// part 2: omega with [d_N omega, omega]_pi = 0 gives a quasi-Nijenhuis
///         structure with phi' = d_N omega + (1/2)[omega,omega]_pi.
/// The caller selects the part explicitly.
TwistResult untwistPn(const TensorField& pi, const TensorField& n,
                      const TensorField& omega, int part);

/// Orientation bookkeeping for the lattice wrap form: records how
/// pi Omega^b relates to DeltaN under this library's flat/sharp conventions,
/// in both signs, so downstream reports expose the convention explicitly.
Check wrapOrientationChecks(const TodaModel& model);

}  // namespace pqn
