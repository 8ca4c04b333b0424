#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pqn {

enum class CheckStatus { ExactPass, NumericPass, Fail, Info };

/// One node of a verification report: a named check with an outcome, an
/// optional witness (printed expression / component) for failures, an
/// optional numeric residual, and child checks.
struct Check {
  std::string name;
  CheckStatus status = CheckStatus::Info;
  std::string witness;
  std::optional<double> residual;
  std::string note;
  double elapsedMs = 0.0;
  std::vector<Check> children;

  static Check exact(const std::string& name, bool ok, const std::string& witness = "");
  static Check numeric(const std::string& name, double residual, double tol,
                       const std::string& witness = "");
  static Check info(const std::string& name, const std::string& note = "");
  static Check group(const std::string& name);

  Check& addChild(Check c);
  /// Pass = no Fail anywhere in the subtree (Info nodes are neutral).
  bool passed() const;
  void setGroupStatus();  // group nodes adopt pass/fail from children
};

struct Report {
  std::string invocation;
  Check root;

  bool passed() const { return root.passed(); }
  std::string renderText() const;
  /// Deterministic JSON; timings only when withTimings (they vary run to run).
  std::string renderJson(bool withTimings = false) const;
};

/// Runs fn, stamps the produced check with its wall time, returns it.
Check timed(const std::function<Check()>& fn);

/// Operation-coverage registry: every public operation bumps its counter so
/// the test suite can assert that end-to-end verification touches them all.
void countOp(const std::string& name);
std::vector<std::pair<std::string, long>> opCounts();
void resetOpCounts();

}  // namespace pqn
