#pragma once

#include "numeric.hpp"
#include "serialize.hpp"

namespace pqn {

/// A named model instance; exactly one of the members is populated.
struct AnyModel {
  std::string name;  // "closed-toda", "open-toda", "v-class"
  std::optional<TodaModel> toda;
  std::optional<VClassModel> vclass;

  const PqnStructure& structure() const;
  int particles() const { return structure().chart().n; }
  bool hasWrapForm() const { return toda.has_value(); }
};

/// Builds a model by CLI name. kmax < 0 selects the default (n for the
/// lattices, 3 for the potential family).
AnyModel makeModel(const std::string& name, int n, const Potential& potential,
                   int kmax = -1);

StructureFile toStructureFile(const AnyModel& model);

/// Everything for one model: axiom report, involutivity with recursion
/// residuals, identity suite, deformation round trip, Lax consistency,
/// numeric oracle and a short flow, in one report.
Report verifyAll(const AnyModel& model, int kmax, const SampleConfig& cfg);

/// Axiom report for one model (quasi-Nijenhuis when phi != 0, else
/// torsionless pair). forcePn runs the torsionless check regardless.
Report checkModel(const AnyModel& model, bool forcePn);

Report involutionReport(const AnyModel& model, int kmax);

/// Applies `lenardDefect` across 2..kmax and reports the unasserted k=1 case
/// separately.
Check lenardChecks(const PqnStructure& s);

}  // namespace pqn
