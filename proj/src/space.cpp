#include "mvframe/space.hpp"

#include "mvframe/errors.hpp"

namespace mvframe {

namespace {
void require_same_space(const MatFn& f, const MatFn& g, const char* op) {
  if (!(f.space() == g.space()))
    throw DimensionError(std::string(op) + ": operands live in different spaces");
}
}  // namespace

SpaceSpec::SpaceSpec(GroupSpec group, int rows, int cols)
    : group_(std::move(group)), rows_(rows), cols_(cols) {
  if (rows_ < 1 || rows_ > 16) throw ShapeError("value rows must be in [1, 16]");
  if (cols_ < 1 || cols_ > 16) throw ShapeError("value cols must be in [1, 16]");
}

MatFn::MatFn(SpaceSpec spec)
    : spec_(std::move(spec)), coords_(Eigen::VectorXcd::Zero(spec_.ambient_dim())) {}

MatFn::MatFn(SpaceSpec spec, Eigen::VectorXcd coords)
    : spec_(std::move(spec)), coords_(std::move(coords)) {
  if (coords_.size() != spec_.ambient_dim())
    throw DimensionError("coordinate vector does not match the space dimension");
}

int MatFn::coord_index(const SpaceSpec& spec, int i, int j, int x) {
  if (i < 0 || i >= spec.rows() || j < 0 || j >= spec.cols() || x < 0 ||
      x >= spec.group().size())
    throw DimensionError("entry index out of range");
  return (i * spec.cols() + j) * spec.group().size() + x;
}

cplx MatFn::entry(int i, int j, int x) const {
  return coords_[coord_index(spec_, i, j, x)];
}

void MatFn::set_entry(int i, int j, int x, cplx v) {
  coords_[coord_index(spec_, i, j, x)] = v;
}

Eigen::MatrixXcd MatFn::value(int x) const {
  Eigen::MatrixXcd m(spec_.rows(), spec_.cols());
  for (int i = 0; i < spec_.rows(); ++i)
    for (int j = 0; j < spec_.cols(); ++j) m(i, j) = entry(i, j, x);
  return m;
}

void MatFn::set_value(int x, const Eigen::MatrixXcd& m) {
  if (m.rows() != spec_.rows() || m.cols() != spec_.cols())
    throw DimensionError("value matrix has wrong shape");
  for (int i = 0; i < spec_.rows(); ++i)
    for (int j = 0; j < spec_.cols(); ++j) set_entry(i, j, x, m(i, j));
}

Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
MatFn::row_view() const {
  return {coords_.data(), spec_.rows(), spec_.row_block()};
}

MatGram mat_inner(const MatFn& f, const MatFn& g) {
  require_same_space(f, g, "mat_inner");
  // Row i of f holds the entries f_{i.}(.) in the fixed layout, so
  // sum_x f(x) g(x)^* collapses to one product of row views.
  return f.row_view() * g.row_view().adjoint();
}

cplx trace_inner(const MatFn& f, const MatFn& g) {
  require_same_space(f, g, "trace_inner");
  return g.coords().dot(f.coords());
}

double frob_norm(const MatFn& f) { return f.coords().norm(); }

MatFn left_mul(const Eigen::MatrixXcd& m, const MatFn& f) {
  const int s = f.space().rows();
  if (m.rows() != s || m.cols() != s)
    throw DimensionError("left_mul: matrix must be s x s");
  Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> out =
      m * f.row_view();
  return MatFn(f.space(),
               Eigen::Map<const Eigen::VectorXcd>(out.data(), out.size()));
}

MatFn lin_comb(std::span<const cplx> coeffs, std::span<const MatFn> fs) {
  if (coeffs.size() != fs.size())
    throw DimensionError("lin_comb: coefficient and function counts differ");
  if (fs.empty()) throw DimensionError("lin_comb: empty combination");
  MatFn acc(fs[0].space());
  for (size_t k = 0; k < fs.size(); ++k) {
    require_same_space(acc, fs[k], "lin_comb");
    acc.coords() += coeffs[k] * fs[k].coords();
  }
  return acc;
}

}  // namespace mvframe
