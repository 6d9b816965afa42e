#include "mvframe/operators.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "mvframe/errors.hpp"

namespace mvframe {

namespace {

void require_same_space(const LinOp& a, const LinOp& b, const char* op) {
  if (!(a.space() == b.space()))
    throw DimensionError(std::string(op) + ": operands live in different spaces");
}

struct EntryIndex {
  int i, j, x;
};

EntryIndex split_index(const SpaceSpec& spec, int flat) {
  const int g = spec.group().size();
  return {flat / (spec.cols() * g), (flat / g) % spec.cols(), flat % g};
}

MatFn basis_fn(const SpaceSpec& spec, int flat) {
  MatFn f(spec);
  f.coords()[flat] = 1.0;
  return f;
}

// When the matrix is exactly block-diagonal with s identical r|G| x r|G|
// blocks, returns that block. Bitwise test: this is the verified gate for
// every structured fast path, independent of the advisory kind tag.
std::optional<Eigen::MatrixXcd> exact_row_blocks(const LinOp& op) {
  const int s = op.space().rows();
  const int n = op.space().row_block();
  const auto& m = op.matrix();
  for (int bi = 0; bi < s; ++bi)
    for (int bj = 0; bj < s; ++bj) {
      if (bi == bj) continue;
      if (!(m.block(bi * n, bj * n, n, n).array() == 0.0).all()) return std::nullopt;
    }
  for (int bi = 1; bi < s; ++bi)
    if (!(m.block(bi * n, bi * n, n, n).array() == m.topLeftCorner(n, n).array()).all())
      return std::nullopt;
  return m.topLeftCorner(n, n);
}

Eigen::MatrixXcd hermitian_sqrt(const Eigen::MatrixXcd& h) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().adjoint();
}

Eigen::VectorXd singular_values_of(const Eigen::MatrixXcd& m) {
  return Eigen::BDCSVD<Eigen::MatrixXcd>(m).singularValues();
}

bool module_like(OpKind k) {
  return k == OpKind::module_map || k == OpKind::multiplication;
}

OpKind combine_kinds(const LinOp& a, const LinOp& b) {
  if (a.kind() == OpKind::multiplication && b.kind() == OpKind::multiplication)
    return OpKind::multiplication;
  if (module_like(a.kind()) && module_like(b.kind())) return OpKind::module_map;
  return OpKind::general;
}

}  // namespace

LinOp::LinOp(SpaceSpec spec, Eigen::MatrixXcd matrix, OpKind kind)
    : spec_(std::move(spec)), mat_(std::move(matrix)), kind_(kind) {
  const int d = spec_.ambient_dim();
  if (mat_.rows() != d || mat_.cols() != d)
    throw DimensionError("operator matrix must be D x D for the given space");
}

LinOp identity_op(const SpaceSpec& spec) {
  return multiplication_op(spec, Eigen::VectorXcd::Ones(spec.group().size()));
}

LinOp multiplication_op(const SpaceSpec& spec, const Eigen::VectorXcd& phi) {
  const int g = spec.group().size();
  if (phi.size() != g)
    throw DimensionError("multiplication symbol must have one value per group point");
  const int d = spec.ambient_dim();
  Eigen::VectorXcd diag(d);
  for (int a = 0; a < d; ++a) diag[a] = phi[a % g];
  LinOp op(spec, Eigen::MatrixXcd(diag.asDiagonal()), OpKind::multiplication);
  op.set_phi(phi);
  return op;
}

LinOp row_lift(const SpaceSpec& spec, const Eigen::MatrixXcd& block) {
  const int n = spec.row_block();
  if (block.rows() != n || block.cols() != n)
    throw DimensionError("row_lift block must be r|G| x r|G|");
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(spec.ambient_dim(), spec.ambient_dim());
  for (int i = 0; i < spec.rows(); ++i) m.block(i * n, i * n, n, n) = block;
  return LinOp(spec, std::move(m), OpKind::module_map);
}

LinOp entry_swap_op(const SpaceSpec& spec) {
  if (spec.cols() < 2) throw ShapeError("entry swap needs at least two columns");
  const int g = spec.group().size();
  const int d = spec.ambient_dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(d, d);
  for (int x = 0; x < g; ++x) {
    const int a = MatFn::coord_index(spec, 0, 0, x);
    const int b = MatFn::coord_index(spec, 0, 1, x);
    m(a, a) = m(b, b) = 0.0;
    m(a, b) = m(b, a) = 1.0;
  }
  return LinOp(spec, std::move(m), OpKind::permutation);
}

LinOp transpose_op(const SpaceSpec& spec) {
  if (spec.rows() != spec.cols())
    throw ShapeError("transpose operator needs square values");
  const int g = spec.group().size();
  const int d = spec.ambient_dim();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < spec.rows(); ++i)
    for (int j = 0; j < spec.cols(); ++j)
      for (int x = 0; x < g; ++x)
        m(MatFn::coord_index(spec, j, i, x), MatFn::coord_index(spec, i, j, x)) = 1.0;
  return LinOp(spec, std::move(m), OpKind::permutation);
}

MatFn apply(const LinOp& op, const MatFn& f) {
  if (!(op.space() == f.space()))
    throw DimensionError("apply: operator and function live in different spaces");
  return MatFn(f.space(), op.matrix() * f.coords());
}

LinOp compose(const LinOp& a, const LinOp& b) {
  require_same_space(a, b, "compose");
  if (a.kind() == OpKind::multiplication && b.kind() == OpKind::multiplication &&
      a.phi() && b.phi())
    return multiplication_op(a.space(), a.phi()->cwiseProduct(*b.phi()));
  // Multiplying the shared block once keeps the product bitwise
  // block-diagonal; a dense product of the padded matrices would not, since
  // the kernel groups partial sums differently per block position.
  if (auto block_a = exact_row_blocks(a))
    if (auto block_b = exact_row_blocks(b))
      return row_lift(a.space(), *block_a * *block_b);
  return LinOp(a.space(), a.matrix() * b.matrix(), combine_kinds(a, b));
}

LinOp add(const LinOp& a, const LinOp& b) {
  require_same_space(a, b, "add");
  LinOp out(a.space(), a.matrix() + b.matrix(), combine_kinds(a, b));
  if (out.kind() == OpKind::multiplication) out.set_phi(*a.phi() + *b.phi());
  return out;
}

LinOp scale(cplx c, const LinOp& a) {
  const OpKind kind = a.kind() == OpKind::permutation ? OpKind::general : a.kind();
  LinOp out(a.space(), c * a.matrix(), kind);
  if (out.kind() == OpKind::multiplication) out.set_phi(c * *a.phi());
  return out;
}

LinOp trace_adjoint(const LinOp& op) {
  LinOp out(op.space(), op.matrix().adjoint(), op.kind());
  if (op.kind() == OpKind::multiplication) out.set_phi(op.phi()->conjugate());
  return out;
}

AdjointabilityResult is_matrix_adjointable(const LinOp& op, double tol) {
  const SpaceSpec& spec = op.space();
  const int d = spec.ambient_dim();
  const int s = spec.rows();
  const int g = spec.group().size();
  const auto& m = op.matrix();
  const double bound = tol * (1.0 + m.cwiseAbs().maxCoeff());

  AdjointabilityResult res;
  // On canonical pairs both sides are sparse:
  //   <op e_a, e_b>(p, q)       = [q == i_b] * op((p, j_b, x_b), a)
  //   <e_a, op^adj e_b>(p, q)   = [p == i_a] * op(b, (q, j_a, x_a))
  for (int a = 0; a < d; ++a) {
    const EntryIndex ea = split_index(spec, a);
    for (int b = 0; b < d; ++b) {
      const EntryIndex eb = split_index(spec, b);
      for (int p = 0; p < s; ++p) {
        for (int q = 0; q < s; ++q) {
          const cplx lhs =
              (q == eb.i) ? m((p * spec.cols() + eb.j) * g + eb.x, a) : cplx(0.0);
          const cplx rhs =
              (p == ea.i) ? m(b, (q * spec.cols() + ea.j) * g + ea.x) : cplx(0.0);
          const double dev = std::abs(lhs - rhs);
          if (dev > res.residual) res.residual = dev;
          if (dev > bound && !res.witness)
            res.witness = AdjointWitness{basis_fn(spec, a), basis_fn(spec, b)};
        }
      }
    }
  }
  res.adjointable = !res.witness.has_value();
  return res;
}

bool check_module_map(const LinOp& op, double tol) {
  const SpaceSpec& spec = op.space();
  const int d = spec.ambient_dim();
  const int s = spec.rows();
  const int n = spec.row_block();
  const int g = spec.group().size();
  const auto& m = op.matrix();
  const double bound = tol * (1.0 + m.cwiseAbs().maxCoeff());

  // E_{pq} e_a equals e_{(p, j_a, x_a)} when q = i_a and vanishes otherwise,
  // so op(E_{pq} f) = E_{pq} op(f) over matrix units and canonical functions
  // reduces to column comparisons. The q != i_a instances are the p = i_a
  // rounds of the same loop (they force the off-blocks of each column to 0).
  for (int a = 0; a < d; ++a) {
    const EntryIndex ea = split_index(spec, a);
    const auto col = m.col(a);
    for (int p = 0; p < s; ++p) {
      const int moved = (p * spec.cols() + ea.j) * g + ea.x;
      const auto lhs = m.col(moved);
      for (int q = 0; q < s; ++q) {
        const double dev =
            (q == p) ? (lhs.segment(q * n, n) - col.segment(ea.i * n, n))
                           .cwiseAbs()
                           .maxCoeff()
                     : lhs.segment(q * n, n).cwiseAbs().maxCoeff();
        if (dev > bound) return false;
      }
    }
  }
  return true;
}

std::optional<Eigen::MatrixXcd> recover_row_lift(const LinOp& op, double tol) {
  const int s = op.space().rows();
  const int n = op.space().row_block();
  Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < s; ++i) avg += op.matrix().block(i * n, i * n, n, n);
  avg /= static_cast<double>(s);
  const double resid = (row_lift(op.space(), avg).matrix() - op.matrix()).norm();
  if (resid > tol * (1.0 + op.matrix().norm())) return std::nullopt;
  return avg;
}

Eigen::VectorXd singular_values(const LinOp& op) {
  if (auto block = exact_row_blocks(op)) {
    // Each singular value of the block repeats once per value row.
    const Eigen::VectorXd base = singular_values_of(*block);
    const int s = op.space().rows();
    Eigen::VectorXd full(base.size() * s);
    for (Eigen::Index i = 0; i < base.size(); ++i)
      for (int c = 0; c < s; ++c) full[i * s + c] = base[i];
    return full;
  }
  return singular_values_of(op.matrix());
}

double op_norm(const LinOp& op) {
  // sigma(I_s (x) B) = sigma(B); skip the s-fold larger SVD when exact.
  if (auto block = exact_row_blocks(op)) return singular_values_of(*block)[0];
  return singular_values(op)[0];
}

PositivityResult is_positive(const LinOp& op, double tol) {
  PositivityResult res;
  const auto& m = op.matrix();
  res.trace_self_adjoint = (m - m.adjoint()).norm() <= tol * std::max(1.0, m.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (m + m.adjoint()),
                                                      Eigen::EigenvaluesOnly);
  res.min_eigenvalue = eig.eigenvalues().minCoeff();
  const double scale = std::max(std::abs(eig.eigenvalues().minCoeff()),
                                std::abs(eig.eigenvalues().maxCoeff()));
  res.positive = res.trace_self_adjoint && res.min_eigenvalue >= -tol * scale;
  return res;
}

LinOp sqrt_psd(const LinOp& op) {
  const PositivityResult pos = is_positive(op);
  if (!pos.positive)
    throw PositivityError("sqrt_psd: operator is not positive", pos.min_eigenvalue);
  if (op.kind() == OpKind::multiplication && op.phi()) {
    const Eigen::VectorXcd root = op.phi()->real().cwiseMax(0.0).cwiseSqrt();
    return multiplication_op(op.space(), root);
  }
  if (auto block = exact_row_blocks(op))
    return row_lift(op.space(), hermitian_sqrt(0.5 * (*block + block->adjoint())));
  return LinOp(op.space(),
               hermitian_sqrt(0.5 * (op.matrix() + op.matrix().adjoint())),
               OpKind::general);
}

IterativeSqrt sqrt_iterative(const LinOp& op, double tol, int max_iter) {
  const PositivityResult pos = is_positive(op);
  if (!pos.positive)
    throw PositivityError("sqrt_iterative: operator is not positive",
                          pos.min_eigenvalue);
  if (pos.min_eigenvalue <= tol)
    throw SingularOperatorError("sqrt_iterative: operator not safely invertible",
                                pos.min_eigenvalue);

  Eigen::MatrixXcd y = 0.5 * (op.matrix() + op.matrix().adjoint());
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Identity(op.dim(), op.dim());
  double diff = 0.0;
  for (int k = 1; k <= max_iter; ++k) {
    const Eigen::MatrixXcd y_inv = y.inverse();
    const Eigen::MatrixXcd z_inv = z.inverse();
    // Norm-based scaling of the underlying sign iteration; tends to 1 at the
    // fixed point, so the limit is untouched.
    const double mu = std::pow((y_inv.squaredNorm() + z_inv.squaredNorm()) /
                                   (y.squaredNorm() + z.squaredNorm()),
                               0.25);
    const Eigen::MatrixXcd y_next = 0.5 * (mu * y + z_inv / mu);
    const Eigen::MatrixXcd z_next = 0.5 * (mu * z + y_inv / mu);
    diff = (y_next - y).norm();
    y = y_next;
    z = z_next;
    if (diff <= tol * std::max(1.0, y.norm()))
      return {LinOp(op.space(), std::move(y), OpKind::general), k};
  }
  throw IterationError("sqrt_iterative: no convergence", diff, max_iter);
}

LinOp invert(const LinOp& op) {
  if (op.kind() == OpKind::multiplication && op.phi()) {
    const Eigen::VectorXd mags = op.phi()->cwiseAbs();
    if (mags.minCoeff() <= 1e-10 * mags.maxCoeff())
      throw SingularOperatorError("invert: multiplication symbol has a zero",
                                  mags.minCoeff());
    return multiplication_op(op.space(), op.phi()->cwiseInverse());
  }
  if (auto block = exact_row_blocks(op)) {
    const Eigen::VectorXd sv = singular_values_of(*block);
    if (sv.minCoeff() <= 1e-10 * sv.maxCoeff())
      throw SingularOperatorError("invert: operator is numerically singular",
                                  sv.minCoeff());
    return row_lift(op.space(), block->inverse());
  }
  const Eigen::VectorXd sv = singular_values(op);
  if (sv.minCoeff() <= 1e-10 * sv.maxCoeff())
    throw SingularOperatorError("invert: operator is numerically singular",
                                sv.minCoeff());
  return LinOp(op.space(), op.matrix().inverse(), OpKind::general);
}

PolarParts polar(const LinOp& op) {
  const LinOp gram = compose(trace_adjoint(op), op);
  LinOp p = sqrt_psd(gram);
  LinOp w = compose(op, invert(p));
  return {std::move(w), std::move(p)};
}

OpReport analyze_operator(const LinOp& op, double tol) {
  OpReport report;
  AdjointabilityResult adj = is_matrix_adjointable(op, tol);
  const PositivityResult pos = is_positive(op, tol);
  report.is_trace_self_adjoint = pos.trace_self_adjoint;
  report.is_matrix_adjointable = adj.adjointable;
  report.is_positive = pos.positive;
  report.min_eigenvalue = pos.min_eigenvalue;
  report.operator_norm = op_norm(op);
  if (adj.witness) {
    report.witness = std::move(adj.witness);
  } else if (!pos.trace_self_adjoint) {
    // Largest entry of M - M^adj names a canonical pair breaking
    // <op f, g> = <f, op g> at the trace level.
    Eigen::Index row = 0, col = 0;
    (op.matrix() - op.matrix().adjoint()).cwiseAbs().maxCoeff(&row, &col);
    report.witness = AdjointWitness{basis_fn(op.space(), static_cast<int>(col)),
                                    basis_fn(op.space(), static_cast<int>(row))};
  } else if (!pos.positive) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
        0.5 * (op.matrix() + op.matrix().adjoint()));
    int idx = 0;
    eig.eigenvalues().minCoeff(&idx);
    const MatFn neg(op.space(), eig.eigenvectors().col(idx));
    report.witness = AdjointWitness{neg, neg};
  }
  return report;
}

}  // namespace mvframe
