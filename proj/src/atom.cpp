#include "atom.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <deque>

namespace pqn {

void LinearForm::addTerm(int idx, long long c) {
  if (c == 0) return;
  auto it = std::lower_bound(terms.begin(), terms.end(), idx,
                             [](const auto& t, int i) { return t.first < i; });
  if (it != terms.end() && it->first == idx) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  } else {
    terms.insert(it, {idx, c});
  }
}

std::string LinearForm::str() const {
  std::string out;
  auto emit = [&](int idx, long long c) {
    if (!out.empty()) out += c > 0 ? "+" : "-";
    else if (c < 0) out += "-";
    long long a = c > 0 ? c : -c;
    if (a != 1) out += std::to_string(a) + "*";
    out += "q" + std::to_string(idx);
  };
  for (const auto& [idx, c] : terms)
    if (c > 0) emit(idx, c);
  for (const auto& [idx, c] : terms)
    if (c < 0) emit(idx, c);
  if (out.empty()) out = "0";
  return out;
}

namespace {
std::mutex g_fnMutex;
std::deque<std::string> g_fnNames;
std::map<std::string, int> g_fnIds;
}  // namespace

int internFunctionName(const std::string& name) {
  std::lock_guard<std::mutex> lock(g_fnMutex);
  auto it = g_fnIds.find(name);
  if (it != g_fnIds.end()) return it->second;
  int id = static_cast<int>(g_fnNames.size());
  g_fnNames.push_back(name);
  g_fnIds.emplace(name, id);
  return id;
}

const std::string& functionName(int id) {
  std::lock_guard<std::mutex> lock(g_fnMutex);
  return g_fnNames.at(static_cast<size_t>(id));
}

bool Atom::operator==(const Atom& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case AtomKind::CoordQ:
    case AtomKind::CoordP:
    case AtomKind::ExpHalf:
      return index == o.index;
    case AtomKind::Formal:
      return fn == o.fn && deriv == o.deriv && arg == o.arg;
    case AtomKind::Slot:
      return true;
  }
  return false;
}

bool Atom::operator<(const Atom& o) const {
  if (kind != o.kind) return kind < o.kind;
  switch (kind) {
    case AtomKind::CoordQ:
    case AtomKind::CoordP:
    case AtomKind::ExpHalf:
      return index < o.index;
    case AtomKind::Formal: {
      if (fn != o.fn) return functionName(fn) < functionName(o.fn);
      if (deriv != o.deriv) return deriv < o.deriv;
      return arg < o.arg;
    }
    case AtomKind::Slot:
      return false;
  }
  return false;
}

std::string Atom::str() const {
  switch (kind) {
    case AtomKind::CoordQ:
      return "q" + std::to_string(index);
    case AtomKind::CoordP:
      return "p" + std::to_string(index);
    case AtomKind::ExpHalf:
      return "exp(q" + std::to_string(index) + "/2)";
    case AtomKind::Formal: {
      std::string s = functionName(fn);
      s.append(static_cast<size_t>(deriv), '\'');
      return s + "(" + arg.str() + ")";
    }
    case AtomKind::Slot:
      return "x";
  }
  return "?";
}

}  // namespace pqn
