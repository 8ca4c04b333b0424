#pragma once

#include <map>
#include <string>

#include "structure.hpp"

namespace pqn {

/// On-disk structure bundle: a chart plus named tensors with expression-text
/// components. Expressions serialize as grammar text so files double as
/// human-readable fixtures; loading re-normalizes to identical canonical
/// form, making save/load a strict round trip.
struct StructureFile {
  int schemaVersion = 1;
  std::string model;      // "closed-toda", "open-toda", "v-class", "custom"
  std::string potential;  // optional, v-class
  Chart chart{0};
  std::map<std::string, TensorField> tensors;  // "pi", "N", "phi", "Omega", "DeltaN"

  std::string toJson() const;
  static StructureFile fromJson(const std::string& text);

  /// Rebuild the cached structure (pi, N, phi required; phi may be absent).
  PqnStructure toStructure(int kmax) const;
};

std::string tensorIndexKey(const std::vector<int>& idx);

}  // namespace pqn
