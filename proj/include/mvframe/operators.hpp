#pragma once

#include <Eigen/Dense>
#include <optional>

#include "mvframe/space.hpp"

namespace mvframe {

// Advisory structure tag. Fast paths re-verify the structure on the dense
// matrix before relying on it; the dense matrix is always the source of truth.
enum class OpKind { general, module_map, multiplication, permutation };

// A bounded linear operator on L2(G, C^{s x r}), held as a dense D x D matrix
// acting on the fixed vectorized coordinates.
class LinOp {
 public:
  LinOp(SpaceSpec spec, Eigen::MatrixXcd matrix, OpKind kind = OpKind::general);

  const SpaceSpec& space() const { return spec_; }
  const Eigen::MatrixXcd& matrix() const { return mat_; }
  int dim() const { return static_cast<int>(mat_.rows()); }
  OpKind kind() const { return kind_; }

  // Defining symbol of a multiplication operator, kept for serialization.
  const std::optional<Eigen::VectorXcd>& phi() const { return phi_; }
  void set_phi(Eigen::VectorXcd phi) { phi_ = std::move(phi); }

 private:
  SpaceSpec spec_;
  Eigen::MatrixXcd mat_;
  OpKind kind_;
  std::optional<Eigen::VectorXcd> phi_;
};

LinOp identity_op(const SpaceSpec& spec);
// (phi . f)(x) = phi(x) f(x) for a scalar symbol phi indexed by element rank.
LinOp multiplication_op(const SpaceSpec& spec, const Eigen::VectorXcd& phi);
// Applies the same B (of size r|G| x r|G|) to every value row of f. These are
// exactly the operators commuting with all constant left multiplications.
LinOp row_lift(const SpaceSpec& spec, const Eigen::MatrixXcd& block);
// Swaps value entries (0,0) <-> (0,1); requires r >= 2.
LinOp entry_swap_op(const SpaceSpec& spec);
// f(x) -> f(x)^T pointwise; requires s == r.
LinOp transpose_op(const SpaceSpec& spec);

MatFn apply(const LinOp& op, const MatFn& f);
// compose(a, b) applies b first.
LinOp compose(const LinOp& a, const LinOp& b);
LinOp add(const LinOp& a, const LinOp& b);
LinOp scale(cplx c, const LinOp& a);
// Adjoint for the trace inner product: the conjugate transpose of the matrix.
LinOp trace_adjoint(const LinOp& op);

// A canonical-basis pair (f, g) on which an operator identity fails.
struct AdjointWitness {
  MatFn f;
  MatFn g;
};

struct AdjointabilityResult {
  bool adjointable = false;
  double residual = 0.0;  // max entry deviation over all basis pairs
  std::optional<AdjointWitness> witness;
};

// Tests <U e_a, e_b> = <e_a, U^* e_b> (matrix-valued inner product, U^* the
// trace adjoint) over all canonical coordinate basis pairs. Both sides are
// sesquilinear over C, so equality on basis pairs is equivalent to equality
// for all f, g. The first violating pair is returned as witness.
AdjointabilityResult is_matrix_adjointable(const LinOp& op, double tol = 1e-10);

// Checks op(M f) = M op(f) for all s x s matrix units M and all canonical
// basis functions f.
bool check_module_map(const LinOp& op, double tol = 1e-10);

// Averages the s diagonal row blocks into a candidate B and accepts when
// row_lift(B) reproduces op within tol (relative, Frobenius).
std::optional<Eigen::MatrixXcd> recover_row_lift(const LinOp& op,
                                                 double tol = 1e-10);

// Singular values in descending order.
Eigen::VectorXd singular_values(const LinOp& op);
// Largest singular value.
double op_norm(const LinOp& op);

struct PositivityResult {
  bool positive = false;
  bool trace_self_adjoint = false;
  double min_eigenvalue = 0.0;
};

// Positive = trace-self-adjoint within tol and min eigenvalue >= -tol * ||op||.
PositivityResult is_positive(const LinOp& op, double tol = 1e-10);

// Unique PSD square root via Hermitian eigendecomposition, eigenvalues below
// zero clamped. Throws PositivityError when the input is not positive.
LinOp sqrt_psd(const LinOp& op);

struct IterativeSqrt {
  LinOp root;
  int iterations = 0;
};

// Denman-Beavers iteration with norm-based scaling; converges to the same
// root as sqrt_psd. Requires a positive, invertible input. Throws
// IterationError when max_iter is exhausted before the iterates settle.
IterativeSqrt sqrt_iterative(const LinOp& op, double tol = 1e-12,
                             int max_iter = 100);

// Dense inverse. Requires sigma_min > 1e-10 * ||op||; throws
// SingularOperatorError otherwise.
LinOp invert(const LinOp& op);

struct PolarParts {
  LinOp unitary;   // W
  LinOp positive;  // P = (op^* op)^{1/2}
};

// op = W P with P PSD and W unitary; requires op invertible.
PolarParts polar(const LinOp& op);

struct OpReport {
  bool is_trace_self_adjoint = false;
  bool is_matrix_adjointable = false;
  bool is_positive = false;
  double min_eigenvalue = 0.0;
  double operator_norm = 0.0;
  std::optional<AdjointWitness> witness;
};

OpReport analyze_operator(const LinOp& op, double tol = 1e-10);

}  // namespace mvframe
