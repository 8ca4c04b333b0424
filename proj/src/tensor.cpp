#include "tensor.hpp"

#include <algorithm>

#include "report.hpp"

namespace pqn {

std::string valenceName(Valence v, int degree) {
  switch (v) {
    case Valence::Function: return "function";
    case Valence::Vector: return "vector";
    case Valence::Form: return "form:" + std::to_string(degree);
    case Valence::Multivector: return "multivector:" + std::to_string(degree);
    case Valence::Tensor11: return "tensor11";
    case Valence::Tensor12: return "tensor12";
  }
  return "?";
}

TensorField TensorField::function(const Chart& c, Expr f) {
  TensorField t{c, Valence::Function, 0, {}};
  if (!f.isZero()) t.comp.emplace(std::vector<int>{}, std::move(f));
  return t;
}

TensorField TensorField::vectorField(const Chart& c) {
  return {c, Valence::Vector, 1, {}};
}
TensorField TensorField::form(const Chart& c, int k) {
  return {c, Valence::Form, k, {}};
}
TensorField TensorField::multivector(const Chart& c, int k) {
  return {c, Valence::Multivector, k, {}};
}
TensorField TensorField::tensor11(const Chart& c) {
  return {c, Valence::Tensor11, 0, {}};
}
TensorField TensorField::tensor12(const Chart& c) {
  return {c, Valence::Tensor12, 0, {}};
}

TensorField TensorField::basisVector(const Chart& c, int i) {
  TensorField t = vectorField(c);
  t.set({i}, Expr(1L));
  return t;
}

TensorField TensorField::basisForm(const Chart& c, int i) {
  TensorField t = form(c, 1);
  t.set({i}, Expr(1L));
  return t;
}

Expr TensorField::get(const std::vector<int>& idx) const {
  auto it = comp.find(idx);
  return it == comp.end() ? Expr() : it->second;
}

void TensorField::add(const std::vector<int>& idx, const Expr& v) {
  if (v.isZero()) return;
  auto it = comp.find(idx);
  if (it == comp.end()) {
    comp.emplace(idx, v);
  } else {
    it->second += v;
    if (it->second.isZero()) comp.erase(it);
  }
}

void TensorField::set(const std::vector<int>& idx, const Expr& v) {
  if (v.isZero())
    comp.erase(idx);
  else
    comp[idx] = v;
}

bool TensorField::operator==(const TensorField& o) const {
  return sameShape(o) && comp == o.comp;
}

TensorField TensorField::operator-() const {
  TensorField out = *this;
  for (auto& [i, v] : out.comp) v = -v;
  return out;
}

TensorField TensorField::operator+(const TensorField& o) const {
  if (!sameShape(o)) throw Error("valence", "tensor shape mismatch in +");
  TensorField out = *this;
  for (const auto& [i, v] : o.comp) out.add(i, v);
  return out;
}

TensorField TensorField::operator-(const TensorField& o) const {
  if (!sameShape(o)) throw Error("valence", "tensor shape mismatch in -");
  TensorField out = *this;
  for (const auto& [i, v] : o.comp) out.add(i, -v);
  return out;
}

TensorField TensorField::scaled(const Expr& f) const {
  TensorField out{chart, valence, degree, {}};
  if (f.isZero()) return out;
  for (const auto& [i, v] : comp) out.comp.emplace(i, v * f);
  return out;
}

std::string TensorField::describeWitness() const {
  if (comp.empty()) return "0";
  const auto& [idx, v] = *comp.begin();
  std::string s = "[";
  for (size_t k = 0; k < idx.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(idx[k] + 1);
  }
  s += "] = " + v.str();
  return s;
}

int sortSign(std::vector<int>& idx) {
  int sign = 1;
  for (size_t i = 1; i < idx.size(); ++i)
    for (size_t j = i; j > 0 && idx[j] < idx[j - 1]; --j) {
      std::swap(idx[j], idx[j - 1]);
      sign = -sign;
    }
  for (size_t i = 1; i < idx.size(); ++i)
    if (idx[i] == idx[i - 1]) return 0;
  return sign;
}

// --------------------------------------------------------------------------
// ExprMatrix

ExprMatrix::ExprMatrix(int rows, int cols)
    : rows_(rows), cols_(cols),
      data_(static_cast<size_t>(rows) * static_cast<size_t>(cols)) {}

ExprMatrix ExprMatrix::identity(int d) {
  ExprMatrix m(d, d);
  for (int i = 0; i < d; ++i) m.at(i, i) = Expr(1L);
  return m;
}

ExprMatrix ExprMatrix::operator*(const ExprMatrix& o) const {
  if (cols_ != o.rows_) throw Error("valence", "matrix dimension mismatch");
  ExprMatrix out(rows_, o.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Expr& a = at(i, k);
      if (a.isZero()) continue;
      for (int j = 0; j < o.cols_; ++j) {
        const Expr& b = o.at(k, j);
        if (!b.isZero()) out.at(i, j) += a * b;
      }
    }
  return out;
}

ExprMatrix ExprMatrix::operator+(const ExprMatrix& o) const {
  ExprMatrix out = *this;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(i, j) += o.at(i, j);
  return out;
}

ExprMatrix ExprMatrix::operator-(const ExprMatrix& o) const {
  ExprMatrix out = *this;
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(i, j) -= o.at(i, j);
  return out;
}

ExprMatrix ExprMatrix::transpose() const {
  ExprMatrix out(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) out.at(j, i) = at(i, j);
  return out;
}

ExprMatrix ExprMatrix::pow(int k) const {
  if (rows_ != cols_) throw Error("valence", "pow needs a square matrix");
  ExprMatrix acc = identity(rows_);
  for (int i = 0; i < k; ++i) acc = acc * (*this);
  return acc;
}

Expr ExprMatrix::trace() const {
  Expr t;
  for (int i = 0; i < std::min(rows_, cols_); ++i) t += at(i, i);
  return t;
}

bool ExprMatrix::isZero() const {
  for (const Expr& e : data_)
    if (!e.isZero()) return false;
  return true;
}

bool ExprMatrix::operator==(const ExprMatrix& o) const {
  if (rows_ != o.rows_ || cols_ != o.cols_) return false;
  for (size_t i = 0; i < data_.size(); ++i)
    if (!(data_[i] == o.data_[i])) return false;
  return true;
}

Expr ExprMatrix::determinant() const {
  if (rows_ != cols_) throw Error("valence", "determinant needs a square matrix");
  ExprMatrix m = *this;
  Expr det(1L);
  for (int col = 0; col < cols_; ++col) {
    int pivot = -1;
    for (int r = col; r < rows_; ++r)
      if (!m.at(r, col).isZero()) {
        pivot = r;
        break;
      }
    if (pivot < 0) return Expr();
    if (pivot != col) {
      for (int j = 0; j < cols_; ++j) std::swap(m.at(pivot, j), m.at(col, j));
      det = -det;
    }
    const Expr p = m.at(col, col);
    det *= p;
    for (int r = col + 1; r < rows_; ++r) {
      if (m.at(r, col).isZero()) continue;
      Expr factor = m.at(r, col) / p;
      for (int j = col; j < cols_; ++j) m.at(r, j) -= factor * m.at(col, j);
    }
  }
  return det;
}

ExprMatrix toMatrix(const TensorField& t) {
  if (t.valence != Valence::Tensor11)
    throw Error("valence", "toMatrix expects a (1,1) tensor");
  ExprMatrix m(t.chart.dim(), t.chart.dim());
  for (const auto& [idx, v] : t.comp) m.at(idx[0], idx[1]) = v;
  return m;
}

TensorField fromMatrix(const Chart& c, const ExprMatrix& m) {
  TensorField t = TensorField::tensor11(c);
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (!m.at(i, j).isZero()) t.set({i, j}, m.at(i, j));
  return t;
}

ExprMatrix bivectorMatrix(const TensorField& p) {
  if (!((p.valence == Valence::Multivector || p.valence == Valence::Form) &&
        p.degree == 2))
    throw Error("valence", "bivectorMatrix expects degree-2 input");
  ExprMatrix m(p.chart.dim(), p.chart.dim());
  for (const auto& [idx, v] : p.comp) {
    m.at(idx[0], idx[1]) = v;
    m.at(idx[1], idx[0]) = -v;
  }
  return m;
}

// --------------------------------------------------------------------------
// Multilinear operations

namespace {
void requireChart(const TensorField& a, const TensorField& b) {
  if (!(a.chart == b.chart)) throw Error("valence", "chart mismatch");
}
}  // namespace

namespace {
// Vector fields participate in wedges as degree-1 multivectors.
std::pair<Valence, int> wedgeKind(const TensorField& t) {
  if (t.valence == Valence::Vector) return {Valence::Multivector, 1};
  return {t.valence, t.degree};
}
}  // namespace

TensorField wedge(const TensorField& a, const TensorField& b) {
  countOp("wedge");
  requireChart(a, b);
  auto [va, da] = wedgeKind(a);
  auto [vb, db] = wedgeKind(b);
  bool forms = va == Valence::Form || va == Valence::Function;
  bool formsB = vb == Valence::Form || vb == Valence::Function;
  bool mvA = va == Valence::Multivector || va == Valence::Function;
  bool mvB = vb == Valence::Multivector || vb == Valence::Function;
  Valence outV;
  if (forms && formsB && (va == Valence::Form || vb == Valence::Form))
    outV = Valence::Form;
  else if (mvA && mvB && (va == Valence::Multivector || vb == Valence::Multivector))
    outV = Valence::Multivector;
  else if (va == Valence::Function && vb == Valence::Function)
    outV = Valence::Function;
  else
    throw Error("valence", "wedge expects two forms or two multivectors");

  int k = da + db;
  if (outV == Valence::Multivector && k == 1) outV = Valence::Vector;
  TensorField out{a.chart, outV, outV == Valence::Function ? 0 : k, {}};
  for (const auto& [ia, cva] : a.comp)
    for (const auto& [ib, cvb] : b.comp) {
      std::vector<int> idx = ia;
      idx.insert(idx.end(), ib.begin(), ib.end());
      int sign = sortSign(idx);
      if (sign == 0) continue;
      Expr v = cva * cvb;
      if (sign < 0) v = -v;
      out.add(idx, v);
    }
  return out;
}

Expr contract(const TensorField& oneForm, const TensorField& x) {
  countOp("contract");
  requireChart(oneForm, x);
  if (!(oneForm.valence == Valence::Form && oneForm.degree == 1 &&
        x.valence == Valence::Vector))
    throw Error("valence", "contract expects a 1-form and a vector");
  Expr out;
  for (const auto& [idx, v] : oneForm.comp) out += v * x.get({idx[0]});
  return out;
}

TensorField interior(const TensorField& x, const TensorField& eta) {
  countOp("interior");
  requireChart(x, eta);
  bool formCase = x.valence == Valence::Vector && eta.valence == Valence::Form;
  bool mvCase = x.valence == Valence::Form && x.degree == 1 &&
                eta.valence == Valence::Multivector;
  if (!formCase && !mvCase)
    throw Error("valence", "interior expects (vector, form) or (1-form, multivector)");
  if (eta.degree == 0) return TensorField::function(eta.chart, Expr());
  TensorField out{eta.chart,
                  formCase ? Valence::Form : Valence::Multivector,
                  eta.degree - 1,
                  {}};
  if (eta.degree == 1) out.valence = Valence::Function;
  if (!formCase && eta.degree == 2) out.valence = Valence::Vector;
  for (const auto& [idx, v] : eta.comp) {
    for (size_t t = 0; t < idx.size(); ++t) {
      Expr xi = x.get({idx[t]});
      if (xi.isZero()) continue;
      std::vector<int> rest;
      rest.reserve(idx.size() - 1);
      for (size_t r = 0; r < idx.size(); ++r)
        if (r != t) rest.push_back(idx[r]);
      Expr val = xi * v;
      if (t % 2) val = -val;
      out.add(rest, val);
    }
  }
  if (out.valence == Valence::Function) out.degree = 0;
  return out;
}

Expr evalForm(const TensorField& eta, const std::vector<TensorField>& xs) {
  if (static_cast<int>(xs.size()) != eta.degree)
    throw Error("valence", "evalForm arity mismatch");
  TensorField cur = eta;
  for (const auto& x : xs) cur = interior(x, cur);
  return cur.get({});
}

TensorField applyN(const TensorField& n, const TensorField& x) {
  countOp("apply_N");
  requireChart(n, x);
  if (n.valence != Valence::Tensor11 || x.valence != Valence::Vector)
    throw Error("valence", "applyN expects a (1,1) tensor and a vector");
  TensorField out = TensorField::vectorField(n.chart);
  for (const auto& [idx, v] : n.comp) {
    Expr xj = x.get({idx[1]});
    if (!xj.isZero()) out.add({idx[0]}, v * xj);
  }
  return out;
}

TensorField applyTranspose(const TensorField& n, const TensorField& alpha) {
  countOp("transpose");
  requireChart(n, alpha);
  if (n.valence != Valence::Tensor11 ||
      !(alpha.valence == Valence::Form && alpha.degree == 1))
    throw Error("valence", "applyTranspose expects a (1,1) tensor and a 1-form");
  TensorField out = TensorField::form(n.chart, 1);
  for (const auto& [idx, v] : n.comp) {
    Expr ai = alpha.get({idx[0]});
    if (!ai.isZero()) out.add({idx[1]}, v * ai);
  }
  return out;
}

TensorField sharp(const TensorField& pi, const TensorField& alpha) {
  countOp("sharp");
  requireChart(pi, alpha);
  if (!(pi.valence == Valence::Multivector && pi.degree == 2) ||
      !(alpha.valence == Valence::Form && alpha.degree == 1))
    throw Error("valence", "sharp expects a bivector and a 1-form");
  TensorField out = TensorField::vectorField(pi.chart);
  for (const auto& [idx, v] : pi.comp) {
    // component pi^{ab} with a<b contributes pi^{ab} alpha_b e_a - pi^{ab} alpha_a e_b
    Expr ab = alpha.get({idx[1]});
    if (!ab.isZero()) out.add({idx[0]}, v * ab);
    Expr aa = alpha.get({idx[0]});
    if (!aa.isZero()) out.add({idx[1]}, -(v * aa));
  }
  return out;
}

TensorField flat(const TensorField& omega, const TensorField& x) {
  countOp("flat");
  requireChart(omega, x);
  if (!(omega.valence == Valence::Form && omega.degree == 2) ||
      x.valence != Valence::Vector)
    throw Error("valence", "flat expects a 2-form and a vector");
  return interior(x, omega);
}

TensorField outer(const TensorField& v, const TensorField& alpha) {
  requireChart(v, alpha);
  if (v.valence != Valence::Vector ||
      !(alpha.valence == Valence::Form && alpha.degree == 1))
    throw Error("valence", "outer expects a vector and a 1-form");
  TensorField out = TensorField::tensor11(v.chart);
  for (const auto& [vi, vv] : v.comp)
    for (const auto& [ai, av] : alpha.comp) out.add({vi[0], ai[0]}, vv * av);
  return out;
}

}  // namespace pqn
