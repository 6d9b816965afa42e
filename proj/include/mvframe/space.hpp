#pragma once

#include <Eigen/Dense>
#include <span>

#include "mvframe/group.hpp"

namespace mvframe {

// The function space L2(G, C^{s x r}): matrix-valued functions on a finite
// abelian group. `rows`/`cols` are the value-matrix dimensions s and r.
class SpaceSpec {
 public:
  SpaceSpec(GroupSpec group, int rows, int cols);

  const GroupSpec& group() const { return group_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }

  // Complex dimension of the ambient vector space, |G| * s * r.
  int ambient_dim() const { return group_.size() * rows_ * cols_; }
  // Length of one value-matrix row as a vector over (column, point), r * |G|.
  int row_block() const { return cols_ * group_.size(); }

  bool operator==(const SpaceSpec&) const = default;

 private:
  GroupSpec group_;
  int rows_;
  int cols_;
};

// A matrix-valued function f: G -> C^{s x r}, stored as one coordinate vector.
//
// Vectorization convention (fixed): the entry (i, j) of the value at group
// point x lives at coordinate (i*r + j)*|G| + rank(x). Under this layout the
// trace inner product of two functions is the standard complex dot product of
// their coordinate vectors, and value-matrix row i occupies the contiguous
// segment [i*r*|G|, (i+1)*r*|G|).
class MatFn {
 public:
  explicit MatFn(SpaceSpec spec);
  MatFn(SpaceSpec spec, Eigen::VectorXcd coords);

  const SpaceSpec& space() const { return spec_; }
  int dim() const { return static_cast<int>(coords_.size()); }

  static int coord_index(const SpaceSpec& spec, int i, int j, int x);

  cplx entry(int i, int j, int x) const;
  void set_entry(int i, int j, int x, cplx v);

  Eigen::MatrixXcd value(int x) const;
  void set_value(int x, const Eigen::MatrixXcd& m);

  const Eigen::VectorXcd& coords() const { return coords_; }
  Eigen::VectorXcd& coords() { return coords_; }

  // The coordinates as an s x (r*|G|) row-major view; row i is value row i.
  Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
  row_view() const;

 private:
  SpaceSpec spec_;
  Eigen::VectorXcd coords_;
};

// The s x s value of the matrix-valued inner product.
using MatGram = Eigen::MatrixXcd;

// <f, g> = sum_x f(x) g(x)^*, an s x s matrix. Satisfies <f,g> = <g,f>^* and
// left M_s(C)-linearity in the first slot; for (f, f) it is Hermitian PSD.
MatGram mat_inner(const MatFn& f, const MatFn& g);

// tr<f, g>; a genuine complex inner product on the ambient space.
cplx trace_inner(const MatFn& f, const MatFn& g);

// Frobenius norm: sqrt of the summed squared moduli of all entries.
double frob_norm(const MatFn& f);

// (M f)(x) = M * f(x) for a constant s x s matrix M.
MatFn left_mul(const Eigen::MatrixXcd& m, const MatFn& f);

MatFn lin_comb(std::span<const cplx> coeffs, std::span<const MatFn> fs);

}  // namespace mvframe
