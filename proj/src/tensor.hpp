#pragma once

#include <map>

#include "chart.hpp"

namespace pqn {

enum class Valence {
  Function,     // no indices
  Vector,       // (i)
  Form,         // (i1<...<ik), degree k covariant antisymmetric
  Multivector,  // (i1<...<ik), degree k contravariant antisymmetric
  Tensor11,     // (i, j): output index i, input index j
  Tensor12,     // (i, j<k): vector-valued 2-form, antisymmetric in (j,k)
};

std::string valenceName(Valence v, int degree);

/// Sparse tensor field; absent components are zero, stored components are
/// normalized and nonzero, antisymmetric slots use strictly increasing
/// tuples. Immutable by convention once built.
struct TensorField {
  Chart chart;
  Valence valence = Valence::Function;
  int degree = 0;  // forms/multivectors only
  std::map<std::vector<int>, Expr> comp;

  static TensorField function(const Chart& c, Expr f);
  static TensorField vectorField(const Chart& c);
  static TensorField form(const Chart& c, int k);
  static TensorField multivector(const Chart& c, int k);
  static TensorField tensor11(const Chart& c);
  static TensorField tensor12(const Chart& c);
  /// Coordinate basis vector field d/dx_i.
  static TensorField basisVector(const Chart& c, int i);
  /// Coordinate 1-form dx_i.
  static TensorField basisForm(const Chart& c, int i);

  Expr get(const std::vector<int>& idx) const;
  void add(const std::vector<int>& idx, const Expr& v);
  void set(const std::vector<int>& idx, const Expr& v);
  bool isZero() const { return comp.empty(); }
  bool sameShape(const TensorField& o) const {
    return chart == o.chart && valence == o.valence && degree == o.degree;
  }
  bool operator==(const TensorField& o) const;

  TensorField operator-() const;
  TensorField operator+(const TensorField& o) const;
  TensorField operator-(const TensorField& o) const;
  TensorField scaled(const Expr& f) const;

  /// First nonzero component as "T[i,j,...] = expr", for witnesses.
  std::string describeWitness() const;
};

/// Sign of sorting `idx` ascending; 0 when an index repeats.
int sortSign(std::vector<int>& idx);

/// Dense matrix of expressions (used for (1,1) tensors, N powers, Lax).
class ExprMatrix {
public:
  ExprMatrix() = default;
  ExprMatrix(int rows, int cols);
  static ExprMatrix identity(int d);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Expr& at(int r, int c) { return data_[static_cast<size_t>(r * cols_ + c)]; }
  const Expr& at(int r, int c) const {
    return data_[static_cast<size_t>(r * cols_ + c)];
  }

  ExprMatrix operator*(const ExprMatrix& o) const;
  ExprMatrix operator+(const ExprMatrix& o) const;
  ExprMatrix operator-(const ExprMatrix& o) const;
  ExprMatrix transpose() const;
  ExprMatrix pow(int k) const;
  Expr trace() const;
  bool isZero() const;
  bool operator==(const ExprMatrix& o) const;
  /// Fraction-free-by-normalization Gaussian elimination determinant.
  Expr determinant() const;

private:
  int rows_ = 0, cols_ = 0;
  std::vector<Expr> data_;
};

// Conversions between sparse tensors and dense matrices.
ExprMatrix toMatrix(const TensorField& t11);
TensorField fromMatrix(const Chart& c, const ExprMatrix& m);
/// Bivector P -> matrix P^{ij} (antisymmetric); 2-form likewise.
ExprMatrix bivectorMatrix(const TensorField& p);

// Pointwise multilinear algebra -----------------------------------------

/// Wedge of two forms or two multivectors.
TensorField wedge(const TensorField& a, const TensorField& b);
/// Pairing of a 1-form with a vector field.
Expr contract(const TensorField& oneForm, const TensorField& x);
/// Interior product i_X eta of a vector with a k-form (also contracts a
/// 1-form into a k-multivector when called with swapped valences).
TensorField interior(const TensorField& x, const TensorField& eta);
/// eta(X1,...,Xk) by repeated interior products.
Expr evalForm(const TensorField& eta, const std::vector<TensorField>& xs);
/// N(X) for a (1,1) tensor and vector field.
TensorField applyN(const TensorField& n, const TensorField& x);
/// N^* alpha for a 1-form.
TensorField applyTranspose(const TensorField& n, const TensorField& alpha);
/// pi(alpha): sharp map of a bivector.
TensorField sharp(const TensorField& pi, const TensorField& alpha);
/// omega^b(X) = i_X omega: flat map of a 2-form.
TensorField flat(const TensorField& omega, const TensorField& x);
/// v (x) alpha as a (1,1) tensor.
TensorField outer(const TensorField& v, const TensorField& alpha);

}  // namespace pqn
