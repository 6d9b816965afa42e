#include "mvframe/riesz.hpp"

#include <cmath>

namespace mvframe {

namespace {

constexpr double kSingularGate = 1e-10;

void require_adjointable(const LinOp& op, const char* who) {
  AdjointabilityResult adj = is_matrix_adjointable(op);
  if (!adj.adjointable)
    throw AdjointabilityError(
        std::string(who) + ": operator is not adjointable for the matrix-valued "
                           "inner product",
        std::move(*adj.witness));
}

void require_invertible(const LinOp& op, const char* who) {
  const Eigen::VectorXd sv = singular_values(op);
  if (sv.minCoeff() <= kSingularGate * sv.maxCoeff())
    throw SingularOperatorError(std::string(who) + ": generator is singular",
                                sv.minCoeff());
}

void require_positive_adjointable(const LinOp& op, const char* who) {
  const PositivityResult pos = is_positive(op);
  if (!pos.positive)
    throw PositivityError(std::string(who) + ": operator is not positive",
                          pos.min_eigenvalue);
  require_adjointable(op, who);
}

}  // namespace

MatONB canonical_onb(const SpaceSpec& spec) {
  const int s = spec.rows();
  const int r = spec.cols();
  if (r % s != 0)
    throw ShapeError("canonical_onb: value rows must divide value cols");
  const int q = r / s;
  const int g = spec.group().size();
  const Eigen::MatrixXcd onb = scalar_onb(spec.group());

  MatONB result{spec, {}, q};
  result.functions.reserve(static_cast<size_t>(g) * q);
  for (int n = 0; n < g; ++n) {
    for (int c = 0; c < q; ++c) {
      MatFn e(spec);
      for (int i = 0; i < s; ++i)
        for (int x = 0; x < g; ++x) e.set_entry(i, c * s + i, x, onb(x, n));
      result.functions.push_back(std::move(e));
    }
  }
  return result;
}

RieszBasis apply_generator(const LinOp& generator, const MatONB& onb) {
  if (!(generator.space() == onb.spec))
    throw DimensionError("apply_generator: operator and basis spaces differ");
  require_adjointable(generator, "apply_generator");
  require_invertible(generator, "apply_generator");

  RieszBasis rb{onb, generator, {}, {}};
  rb.functions.reserve(onb.functions.size());
  for (const MatFn& e : onb.functions) rb.functions.push_back(apply(generator, e));
  return rb;
}

std::vector<NamedOp> build_positive_classes(const LinOp& t, const LinOp* s,
                                            int power_sum_n) {
  require_positive_adjointable(t, "build_positive_classes");
  const LinOp id = identity_op(t.space());

  std::vector<NamedOp> out;
  out.push_back({"i_plus_t", add(id, t)});
  if (s) {
    require_positive_adjointable(*s, "build_positive_classes");
    out.push_back({"i_plus_s", add(id, *s)});
    out.push_back({"i_plus_t_plus_s", add(add(id, t), *s)});
    const LinOp ts = compose(t, *s);
    const LinOp st = compose(*s, t);
    if ((ts.matrix() - st.matrix()).norm() <= 1e-10)
      out.push_back({"i_plus_ts", add(id, ts)});
  }
  if (power_sum_n >= 1) {
    LinOp sum = id;
    LinOp power = id;
    for (int m = 1; m <= power_sum_n; ++m) {
      power = compose(power, t);
      sum = add(sum, power);
    }
    out.push_back({"power_sum_n" + std::to_string(power_sum_n), std::move(sum)});
  }
  return out;
}

LinOp neumann_partial_sum(const LinOp& t, int n) {
  const LinOp id = identity_op(t.space());
  LinOp sum = id;
  LinOp power = id;
  for (int m = 1; m <= n; ++m) {
    power = compose(power, t);
    sum = add(sum, power);
  }
  return sum;
}

LinOp build_neumann(const LinOp& t) {
  require_adjointable(t, "build_neumann");
  const double norm = op_norm(t);
  if (norm >= 1.0)
    throw NormConditionError("build_neumann: operator norm must be below 1", norm);

  const LinOp id = identity_op(t.space());
  const LinOp limit = invert(add(id, scale(-1.0, t)));

  for (int n : {0, 1, 2, 4, 8}) {
    const double tail = std::pow(norm, n + 1) / (1.0 - norm);
    const double dist = op_norm(add(neumann_partial_sum(t, n), scale(-1.0, limit)));
    if (dist > tail * (1.0 + 1e-8) + 1e-12)
      throw IterationError("build_neumann: partial sums violate the tail bound",
                           dist, n);
  }
  return limit;
}

LinOp build_sqrt_chain(const LinOp& t, int n) {
  if (n < 1) throw ShapeError("build_sqrt_chain: n must be at least 1");
  require_positive_adjointable(t, "build_sqrt_chain");
  require_invertible(t, "build_sqrt_chain");
  LinOp root = t;
  for (int k = 0; k < n; ++k) root = sqrt_psd(root);
  return root;
}

std::pair<LinOp, LinOp> build_jordan_parts(const LinOp& t) {
  const PositivityResult pos = is_positive(t);
  if (!pos.trace_self_adjoint)
    throw PositivityError("build_jordan_parts: operator is not self-adjoint",
                          pos.min_eigenvalue);
  require_adjointable(t, "build_jordan_parts");

  const LinOp abs_t = sqrt_psd(compose(t, t));
  const LinOp p1 = scale(0.5, add(abs_t, t));
  const LinOp p2 = scale(0.5, add(abs_t, scale(-1.0, t)));

  const double norm = op_norm(t);
  const double cross = op_norm(compose(p1, p2));
  if (cross > 1e-9 * std::max(1.0, norm * norm))
    throw IterationError("build_jordan_parts: P1 P2 is not numerically zero",
                         cross, 0);

  const LinOp id = identity_op(t.space());
  return {add(id, p1), add(id, p2)};
}

std::pair<LinOp, LinOp> build_unitary_parts(const LinOp& t) {
  const PositivityResult pos = is_positive(t);
  if (!pos.trace_self_adjoint)
    throw PositivityError("build_unitary_parts: operator is not self-adjoint",
                          pos.min_eigenvalue);
  require_adjointable(t, "build_unitary_parts");
  const double norm = op_norm(t);
  if (norm <= 0.0)
    throw ZeroOperatorError("build_unitary_parts: zero operator has no unit parts");

  const LinOp id = identity_op(t.space());
  const LinOp gap = add(scale(norm * norm, id), scale(-1.0, compose(t, t)));
  const LinOp root = sqrt_psd(gap);
  const cplx inv_norm(1.0 / norm, 0.0);
  return {scale(inv_norm, add(t, scale(cplx(0.0, 1.0), root))),
          scale(inv_norm, add(t, scale(cplx(0.0, -1.0), root)))};
}

CartesianUnitaries build_cartesian_unitaries(const LinOp& t) {
  require_adjointable(t, "build_cartesian_unitaries");
  const LinOp t_adj = trace_adjoint(t);
  const LinOp re_part = add(t, t_adj);                             // T + T*
  const LinOp im_part = scale(cplx(0.0, -1.0), add(t, scale(-1.0, t_adj)));
  const double scale_ref = 1.0 + op_norm(t);

  CartesianUnitaries out;
  if (op_norm(re_part) > 1e-12 * scale_ref) {
    auto [plus, minus] = build_unitary_parts(re_part);
    out.omega[0] = std::move(plus);
    out.omega[1] = std::move(minus);
  }
  if (op_norm(im_part) > 1e-12 * scale_ref) {
    // Feeding -i(T - T^*) through the self-adjoint split gives exactly the
    // (T - T^*) +- root combinations of the four-operator statement.
    auto [plus, minus] = build_unitary_parts(im_part);
    out.omega[2] = std::move(plus);
    out.omega[3] = std::move(minus);
  }
  return out;
}

const std::vector<MatFn>& dual_basis(RieszBasis& rb) {
  if (!rb.has_dual()) {
    const LinOp dual_gen = trace_adjoint(invert(rb.generator));
    rb.dual_functions.reserve(rb.onb.functions.size());
    for (const MatFn& e : rb.onb.functions)
      rb.dual_functions.push_back(apply(dual_gen, e));
  }
  return rb.dual_functions;
}

LinOp holub_map(RieszBasis& rb) {
  const std::vector<MatFn>& duals = dual_basis(rb);
  const LinOp u_inv = invert(rb.generator);
  const LinOp t = compose(trace_adjoint(u_inv), u_inv);

  double worst = 0.0;
  for (size_t k = 0; k < rb.functions.size(); ++k) {
    const MatFn image = apply(t, rb.functions[k]);
    worst = std::max(worst,
                     (image.coords() - duals[k].coords()).norm() /
                         std::max(1.0, duals[k].coords().norm()));
  }
  if (worst > 1e-8)
    throw IterationError("holub_map: T does not carry the basis onto its dual",
                         worst, 0);
  const PositivityResult pos = is_positive(t);
  if (!pos.positive)
    throw PositivityError("holub_map: dual-carrying operator is not positive",
                          pos.min_eigenvalue);
  return t;
}

std::pair<RieszBasis, std::vector<MatFn>> holub_basis_for_positive(
    const LinOp& t, const MatONB& onb) {
  require_positive_adjointable(t, "holub_basis_for_positive");
  require_invertible(t, "holub_basis_for_positive");

  const LinOp root = sqrt_psd(t);
  RieszBasis rb = apply_generator(invert(root), onb);
  std::vector<MatFn> duals;
  duals.reserve(onb.functions.size());
  for (const MatFn& e : onb.functions) duals.push_back(apply(root, e));

  const double norm = op_norm(t);
  for (size_t k = 0; k < rb.functions.size(); ++k) {
    const MatFn image = apply(t, rb.functions[k]);
    const double dev = (image.coords() - duals[k].coords()).norm();
    if (dev > 1e-8 * std::max(1.0, norm))
      throw IterationError(
          "holub_basis_for_positive: T q_k does not reproduce h_k", dev, 0);
  }
  rb.dual_functions = duals;
  return {std::move(rb), std::move(duals)};
}

}  // namespace mvframe
