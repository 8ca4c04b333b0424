#include "chart.hpp"

namespace pqn {

Chart::Chart(int particles) : n(particles) {
  if (particles < 0) throw Error("bad-arg", "chart size must be nonnegative");
}

Atom Chart::coordAtom(int i) const {
  if (i < 0 || i >= dim()) throw Error("bad-arg", "coordinate index out of range");
  return i < n ? Atom::q(i + 1) : Atom::p(i - n + 1);
}

std::string Chart::coordName(int i) const { return coordAtom(i).str(); }

std::vector<std::string> Chart::names() const {
  std::vector<std::string> out;
  out.reserve(static_cast<size_t>(dim()));
  for (int i = 0; i < dim(); ++i) out.push_back(coordName(i));
  return out;
}

int Chart::indexOf(const std::string& name) const {
  if (name.size() < 2 || (name[0] != 'q' && name[0] != 'p')) return -1;
  try {
    int idx = std::stoi(name.substr(1));
    if (idx < 1 || idx > n) return -1;
    return name[0] == 'q' ? idx - 1 : n + idx - 1;
  } catch (...) {
    return -1;
  }
}

}  // namespace pqn
