#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pqn {

/// Error type for every user-facing failure (bad input, refused operation,
/// singular evaluation). Carries a short machine-readable code.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string& msg)
      : std::runtime_error(msg), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

private:
  std::string code_;
};

/// Integer linear combination of q-coordinates, kept sorted by index with no
/// zero coefficients. Used as the argument of formal function atoms; identity
/// is by exact coefficient vector, so V(q1-q2) and V(q2-q1) stay distinct.
struct LinearForm {
  std::vector<std::pair<int, long long>> terms;  // (q index, coefficient)

  void addTerm(int idx, long long c);
  bool operator==(const LinearForm& o) const { return terms == o.terms; }
  auto operator<=>(const LinearForm& o) const = default;
  bool empty() const { return terms.empty(); }
  /// "q3-q1" style: positive-coefficient terms first, then negative ones.
  std::string str() const;
};

enum class AtomKind : uint8_t {
  CoordQ = 0,   // q_i
  CoordP = 1,   // p_i
  ExpHalf = 2,  // e^{q_i/2}; integer powers of these cover e^{linear in q}
  Formal = 3,   // k-th derivative of a formal unary function at a linear arg
  Slot = 4,     // the free variable of a user potential rule
};

/// Formal function names are interned process-wide; ordering of Formal atoms
/// uses the name itself so canonical forms do not depend on interning order.
int internFunctionName(const std::string& name);
const std::string& functionName(int id);

struct Atom {
  AtomKind kind = AtomKind::CoordQ;
  int index = 0;    // coordinate index (1-based) for q/p/u
  int fn = -1;      // function name id for Formal
  int deriv = 0;    // derivative order for Formal
  LinearForm arg;   // argument for Formal

  static Atom q(int i) { return {AtomKind::CoordQ, i, -1, 0, {}}; }
  static Atom p(int i) { return {AtomKind::CoordP, i, -1, 0, {}}; }
  static Atom expHalf(int i) { return {AtomKind::ExpHalf, i, -1, 0, {}}; }
  static Atom formal(int fnId, int order, LinearForm a) {
    return {AtomKind::Formal, 0, fnId, order, std::move(a)};
  }
  static Atom slot() { return {AtomKind::Slot, 0, -1, 0, {}}; }

  bool operator==(const Atom& o) const;
  /// Canonical order: q's, then p's (by index), then exponentials, then
  /// formal atoms by (name, derivative order, argument), then the slot.
  bool operator<(const Atom& o) const;
  std::string str() const;
};

}  // namespace pqn
