#pragma once

#include <string>
#include <vector>

#include "expr.hpp"

namespace pqn {

/// Canonical phase-space chart: coordinates q1..qn, p1..pn in that order.
struct Chart {
  int n = 0;

  explicit Chart(int particles = 0);
  int dim() const { return 2 * n; }
  bool isQ(int i) const { return i < n; }
  /// 0-based flat index -> atom (q_{i+1} for i<n, p_{i-n+1} otherwise).
  Atom coordAtom(int i) const;
  std::string coordName(int i) const;
  std::vector<std::string> names() const;
  int indexOf(const std::string& name) const;  // -1 if unknown
  bool operator==(const Chart& o) const { return n == o.n; }
};

}  // namespace pqn
