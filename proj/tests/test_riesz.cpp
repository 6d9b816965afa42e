#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>

#include "mvframe/errors.hpp"
#include "mvframe/random_ops.hpp"
#include "mvframe/riesz.hpp"

using namespace mvframe;

namespace {

SpaceSpec square_space() { return SpaceSpec(GroupSpec({4}), 2, 2); }

Eigen::VectorXcd position_symbol(const SpaceSpec& spec) {
  const int g = spec.group().size();
  Eigen::VectorXcd phi(g);
  for (int x = 0; x < g; ++x) phi[x] = cplx((x + 1.0) / g, 0.0);
  return phi;
}

double matdiff(const LinOp& a, const LinOp& b) {
  return (a.matrix() - b.matrix()).cwiseAbs().maxCoeff();
}

// Rank of the module span {E_pq E_k} via dense SVD, independent of the
// frame-analysis implementation.
int module_span_rank(const MatONB& onb) {
  const SpaceSpec& spec = onb.spec;
  const int s = spec.rows();
  Eigen::MatrixXcd stack(onb.functions.size() * s * s, spec.ambient_dim());
  Eigen::Index row = 0;
  for (const MatFn& e : onb.functions)
    for (int p = 0; p < s; ++p)
      for (int q = 0; q < s; ++q) {
        Eigen::MatrixXcd unit = Eigen::MatrixXcd::Zero(s, s);
        unit(p, q) = 1.0;
        stack.row(row++) = left_mul(unit, e).coords().transpose();
      }
  const Eigen::VectorXd sv =
      Eigen::BDCSVD<Eigen::MatrixXcd>(stack).singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > 1e-9 * sv.maxCoeff()) ++rank;
  return rank;
}

}  // namespace

TEST_CASE("canonical basis on square values is the diagonal family") {
  const SpaceSpec spec = square_space();
  const MatONB onb = canonical_onb(spec);
  REQUIRE(onb.functions.size() == 4);
  const Eigen::MatrixXcd scalars = scalar_onb(spec.group());
  for (int k = 0; k < 4; ++k)
    for (int x = 0; x < 4; ++x) {
      const Eigen::MatrixXcd value = onb.functions[k].value(x);
      CHECK(std::abs(value(0, 0) - scalars(x, k)) < 1e-15);
      CHECK(std::abs(value(1, 1) - scalars(x, k)) < 1e-15);
      CHECK(std::abs(value(0, 1)) == 0.0);
      CHECK(std::abs(value(1, 0)) == 0.0);
    }
}

TEST_CASE("canonical basis with s = r = 1 is the scalar basis") {
  const SpaceSpec spec(GroupSpec({6}), 1, 1);
  const MatONB onb = canonical_onb(spec);
  REQUIRE(onb.functions.size() == 6);
  const Eigen::MatrixXcd scalars = scalar_onb(spec.group());
  for (int k = 0; k < 6; ++k)
    CHECK((onb.functions[k].coords() - scalars.col(k)).norm() < 1e-15);
}

TEST_CASE("canonical basis Gram relations and span on a wide space") {
  const SpaceSpec spec(GroupSpec({3}), 2, 4);
  const MatONB onb = canonical_onb(spec);
  REQUIRE(onb.functions.size() == 6);  // |G| * r / s

  for (size_t k = 0; k < onb.functions.size(); ++k)
    for (size_t j = 0; j < onb.functions.size(); ++j) {
      const Eigen::MatrixXcd gram = mat_inner(onb.functions[k], onb.functions[j]);
      Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(2, 2);
      if (k == j) expect.setIdentity();
      CHECK((gram - expect).cwiseAbs().maxCoeff() < 1e-12);
    }

  CHECK(module_span_rank(onb) == spec.ambient_dim());
}

TEST_CASE("canonical basis rejects shapes where s does not divide r") {
  CHECK_THROWS_AS(canonical_onb(SpaceSpec(GroupSpec({4}), 2, 3)), ShapeError);
  CHECK_THROWS_AS(canonical_onb(SpaceSpec(GroupSpec({4}), 3, 4)), ShapeError);
}

TEST_CASE("module-coefficient reconstruction against the canonical basis") {
  Rng rng(31);
  for (const SpaceSpec& spec :
       {square_space(), SpaceSpec(GroupSpec({3}), 2, 4),
        SpaceSpec(GroupSpec({2, 2}), 3, 3)}) {
    const MatONB onb = canonical_onb(spec);
    const MatFn f = random_matfn(rng, spec);
    MatFn synth(spec);
    for (const MatFn& e : onb.functions)
      synth.coords() += left_mul(mat_inner(f, e), e).coords();
    CHECK((f.coords() - synth.coords()).norm() <= 1e-10 * frob_norm(f));
  }
}

TEST_CASE("apply_generator validates and builds") {
  Rng rng(32);
  const SpaceSpec spec = square_space();
  const MatONB onb = canonical_onb(spec);

  const RieszBasis plain = apply_generator(identity_op(spec), onb);
  for (size_t k = 0; k < onb.functions.size(); ++k)
    CHECK((plain.functions[k].coords() - onb.functions[k].coords()).norm() == 0.0);

  try {
    apply_generator(entry_swap_op(spec), onb);
    FAIL("expected AdjointabilityError");
  } catch (const AdjointabilityError& e) {
    REQUIRE(e.witness != nullptr);
    CHECK(frob_norm(e.witness->f) > 0.0);
  }

  const LinOp zero = scale(0.0, identity_op(spec));
  CHECK_THROWS_AS(apply_generator(zero, onb), SingularOperatorError);

  const LinOp t = random_psd_module_map(rng, spec, 0.0, 2.0);
  const LinOp gen = add(identity_op(spec), t);
  const RieszBasis rb = apply_generator(gen, onb);
  CHECK(rb.functions.size() == onb.functions.size());
}

TEST_CASE("positive classes: zero operator collapses to the identity") {
  const SpaceSpec spec = square_space();
  const LinOp zero = scale(0.0, identity_op(spec));
  const auto gens = build_positive_classes(zero, &zero, 3);
  REQUIRE(gens.size() == 5);
  for (const NamedOp& named : gens)
    CHECK(matdiff(named.op, identity_op(spec)) == 0.0);
}

TEST_CASE("positive classes: diagonal symbols give 1 + phi^2 for the product") {
  const SpaceSpec spec = square_space();
  const Eigen::VectorXcd phi = position_symbol(spec);
  const LinOp t = multiplication_op(spec, phi);
  const auto gens = build_positive_classes(t, &t, 2);

  bool found_product = false;
  for (const NamedOp& named : gens) {
    if (named.name == "i_plus_ts") {
      found_product = true;
      const Eigen::VectorXcd expect =
          Eigen::VectorXcd::Ones(phi.size()) + phi.cwiseProduct(phi);
      CHECK(matdiff(named.op, multiplication_op(spec, expect)) < 1e-14);
    }
    const Eigen::VectorXd sv = singular_values(named.op);
    CHECK(sv.minCoeff() >= 1.0 - 1e-10);
    CHECK(is_matrix_adjointable(named.op).residual == 0.0);
  }
  CHECK(found_product);
}

TEST_CASE("positive classes skip the product for non-commuting pairs") {
  Rng rng(33);
  const SpaceSpec spec = square_space();
  const LinOp t = random_psd_module_map(rng, spec, 0.2, 2.0);
  const LinOp s = random_psd_module_map(rng, spec, 0.2, 2.0);
  for (const NamedOp& named : build_positive_classes(t, &s, 0))
    CHECK(named.name != "i_plus_ts");
  CHECK_THROWS_AS(build_positive_classes(transpose_op(spec), nullptr, 0),
                  PositivityError);
}

TEST_CASE("Neumann construction") {
  Rng rng(34);
  const SpaceSpec spec = square_space();
  const LinOp zero = scale(0.0, identity_op(spec));
  CHECK(matdiff(build_neumann(zero), identity_op(spec)) == 0.0);

  const LinOp half = scale(0.5, identity_op(spec));
  CHECK(matdiff(build_neumann(half), scale(2.0, identity_op(spec))) < 1e-12);

  LinOp t = random_module_map(rng, spec, 0.2, 1.0);
  t = scale(0.9 / op_norm(t), t);
  const LinOp limit = build_neumann(t);
  const double norm = op_norm(t);
  for (int n : {1, 3, 6}) {
    const double dist = op_norm(add(neumann_partial_sum(t, n), scale(-1.0, limit)));
    CHECK(dist <= std::pow(norm, n + 1) / (1.0 - norm) * (1.0 + 1e-8) + 1e-12);
  }

  CHECK_THROWS_AS(build_neumann(identity_op(spec)), NormConditionError);
  try {
    build_neumann(scale(1.5, identity_op(spec)));
    FAIL("expected NormConditionError");
  } catch (const NormConditionError& e) {
    CHECK(e.norm == doctest::Approx(1.5));
  }
}

TEST_CASE("sqrt chain") {
  Rng rng(35);
  const SpaceSpec spec = square_space();
  CHECK(matdiff(build_sqrt_chain(identity_op(spec), 4), identity_op(spec)) == 0.0);

  const Eigen::VectorXcd phi = position_symbol(spec);
  const LinOp chained = build_sqrt_chain(multiplication_op(spec, phi), 2);
  const Eigen::VectorXcd quarter = phi.real().cwiseSqrt().cwiseSqrt();
  CHECK(matdiff(chained, multiplication_op(spec, quarter)) < 1e-13);

  for (int n = 1; n <= 4; ++n) {
    const LinOp t = random_psd_module_map(rng, spec, 0.3, 4.0);
    const LinOp root = build_sqrt_chain(t, n);
    CHECK(std::abs(op_norm(root) - std::pow(op_norm(t), 1.0 / std::pow(2.0, n))) <=
          1e-8);
    LinOp back = root;
    for (int k = 0; k < n; ++k) back = compose(back, back);
    CHECK((back.matrix() - t.matrix()).norm() <= 1e-7 * op_norm(t));
    CHECK(is_matrix_adjointable(root).residual == 0.0);
  }

  CHECK_THROWS_AS(build_sqrt_chain(transpose_op(spec), 1), PositivityError);
  CHECK_THROWS_AS(build_sqrt_chain(scale(0.0, identity_op(spec)), 1),
                  SingularOperatorError);
}

TEST_CASE("Jordan-style positive parts") {
  Rng rng(36);
  const SpaceSpec spec = square_space();

  const LinOp t_psd = random_psd_module_map(rng, spec, 0.1, 2.0);
  const auto [plus_psd, one_psd] = build_jordan_parts(t_psd);
  CHECK(matdiff(plus_psd, add(identity_op(spec), t_psd)) < 1e-10);
  CHECK(matdiff(one_psd, identity_op(spec)) < 1e-10);

  const LinOp minus_id = scale(-1.0, identity_op(spec));
  const auto [p1, p2] = build_jordan_parts(minus_id);
  CHECK(matdiff(p1, identity_op(spec)) < 1e-12);
  CHECK(matdiff(p2, scale(2.0, identity_op(spec))) < 1e-12);

  for (int rep = 0; rep < 4; ++rep) {
    const LinOp t = random_selfadjoint_module_map(rng, spec, 2.0);
    const auto [a, b] = build_jordan_parts(t);
    const LinOp pa = add(a, scale(-1.0, identity_op(spec)));
    const LinOp pb = add(b, scale(-1.0, identity_op(spec)));
    CHECK(op_norm(compose(pa, pb)) <= 1e-9 * op_norm(t) * op_norm(t));
    CHECK((add(pa, scale(-1.0, pb)).matrix() - t.matrix()).norm() <=
          1e-10 * (1.0 + op_norm(t)));
    CHECK(is_positive(pa).positive);
    CHECK(is_positive(pb).positive);
  }

  const LinOp skew = scale(cplx(0.0, 1.0), identity_op(spec));
  CHECK_THROWS_AS(build_jordan_parts(skew), PositivityError);
}

TEST_CASE("unitary parts of a self-adjoint operator") {
  Rng rng(37);
  const SpaceSpec spec = square_space();

  const auto [idp, idm] = build_unitary_parts(identity_op(spec));
  CHECK(matdiff(idp, identity_op(spec)) < 1e-12);
  CHECK(matdiff(idm, identity_op(spec)) < 1e-12);

  for (int rep = 0; rep < 4; ++rep) {
    const LinOp t = random_selfadjoint_module_map(rng, spec, 1.7);
    const auto [plus, minus] = build_unitary_parts(t);
    const Eigen::MatrixXcd eye =
        Eigen::MatrixXcd::Identity(t.dim(), t.dim());
    CHECK((compose(trace_adjoint(plus), plus).matrix() - eye).norm() <= 1e-8);
    CHECK((compose(trace_adjoint(minus), minus).matrix() - eye).norm() <= 1e-8);
    const LinOp avg = scale(0.5, add(plus, minus));
    CHECK((avg.matrix() - t.matrix() / op_norm(t)).norm() <= 1e-10);
  }

  CHECK_THROWS_AS(build_unitary_parts(scale(0.0, identity_op(spec))),
                  ZeroOperatorError);
}

TEST_CASE("Cartesian unitaries cover the availability cases") {
  Rng rng(38);
  const SpaceSpec spec = square_space();

  const CartesianUnitaries from_id = build_cartesian_unitaries(identity_op(spec));
  REQUIRE(from_id.omega[0].has_value());
  REQUIRE(from_id.omega[1].has_value());
  CHECK_FALSE(from_id.omega[2].has_value());
  CHECK_FALSE(from_id.omega[3].has_value());
  CHECK(matdiff(*from_id.omega[0], identity_op(spec)) < 1e-12);
  CHECK(matdiff(*from_id.omega[1], identity_op(spec)) < 1e-12);

  const CartesianUnitaries from_imag =
      build_cartesian_unitaries(scale(cplx(0.0, 1.0), identity_op(spec)));
  CHECK_FALSE(from_imag.omega[0].has_value());
  CHECK_FALSE(from_imag.omega[1].has_value());
  CHECK(from_imag.omega[2].has_value());
  CHECK(from_imag.omega[3].has_value());

  const LinOp t = random_module_map(rng, spec, 0.2, 2.0);
  const CartesianUnitaries parts = build_cartesian_unitaries(t);
  const Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(t.dim(), t.dim());
  for (const auto& omega : parts.omega) {
    REQUIRE(omega.has_value());
    CHECK((compose(trace_adjoint(*omega), *omega).matrix() - eye).norm() <= 1e-8);
    CHECK(is_matrix_adjointable(*omega).residual == 0.0);
  }
}

TEST_CASE("dual basis and biorthogonality") {
  Rng rng(39);
  const SpaceSpec spec = square_space();
  const MatONB onb = canonical_onb(spec);

  RieszBasis plain = apply_generator(identity_op(spec), onb);
  for (size_t k = 0; k < dual_basis(plain).size(); ++k)
    CHECK((plain.dual_functions[k].coords() - onb.functions[k].coords()).norm() ==
          0.0);

  RieszBasis rb = apply_generator(random_module_map(rng, spec), onb);
  dual_basis(rb);
  for (size_t k = 0; k < rb.functions.size(); ++k)
    for (size_t j = 0; j < rb.functions.size(); ++j) {
      const Eigen::MatrixXcd gram = mat_inner(rb.functions[k], rb.dual_functions[j]);
      Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(2, 2);
      if (k == j) expect.setIdentity();
      CHECK((gram - expect).cwiseAbs().maxCoeff() < 1e-8);
    }
}

TEST_CASE("Holub map from a basis-dual pair") {
  Rng rng(40);
  const SpaceSpec spec = square_space();
  const MatONB onb = canonical_onb(spec);

  RieszBasis plain = apply_generator(identity_op(spec), onb);
  CHECK(matdiff(holub_map(plain), identity_op(spec)) == 0.0);

  const Eigen::VectorXcd phi = position_symbol(spec);
  RieszBasis diag = apply_generator(multiplication_op(spec, phi), onb);
  const Eigen::VectorXcd inv_sq =
      phi.cwiseProduct(phi).cwiseInverse();
  CHECK(matdiff(holub_map(diag), multiplication_op(spec, inv_sq)) < 1e-12);

  for (int rep = 0; rep < 4; ++rep) {
    RieszBasis rb = apply_generator(random_module_map(rng, spec), onb);
    const LinOp t = holub_map(rb);
    const PositivityResult pos = is_positive(t);
    CHECK(pos.positive);
    const double norm_u = op_norm(rb.generator);
    CHECK(pos.min_eigenvalue >= (1.0 - 1e-8) / (norm_u * norm_u));
  }
}

TEST_CASE("Holub converse builds the dual-carrying pair") {
  Rng rng(41);
  const SpaceSpec spec = square_space();
  const MatONB onb = canonical_onb(spec);

  auto [rb_id, duals_id] = holub_basis_for_positive(identity_op(spec), onb);
  for (size_t k = 0; k < onb.functions.size(); ++k) {
    CHECK((rb_id.functions[k].coords() - onb.functions[k].coords()).norm() == 0.0);
    CHECK((duals_id[k].coords() - onb.functions[k].coords()).norm() == 0.0);
  }

  auto [rb4, duals4] =
      holub_basis_for_positive(scale(4.0, identity_op(spec)), onb);
  for (size_t k = 0; k < onb.functions.size(); ++k) {
    CHECK((rb4.functions[k].coords() - 0.5 * onb.functions[k].coords()).norm() <
          1e-13);
    CHECK((duals4[k].coords() - 2.0 * onb.functions[k].coords()).norm() < 1e-13);
  }

  const LinOp t = random_psd_module_map(rng, spec, 0.3, 3.0);
  auto [rb, duals] = holub_basis_for_positive(t, onb);
  double worst = 0.0;
  for (size_t k = 0; k < rb.functions.size(); ++k)
    worst = std::max(worst, (apply(t, rb.functions[k]).coords() -
                             duals[k].coords())
                                .norm());
  CHECK(worst <= 1e-8 * op_norm(t));
}

TEST_CASE("positivity interplay: T and its root generate together") {
  Rng rng(42);
  const SpaceSpec spec = square_space();
  const MatONB onb = canonical_onb(spec);
  const LinOp t = random_psd_module_map(rng, spec, 0.4, 3.0);
  CHECK_NOTHROW(apply_generator(t, onb));
  CHECK_NOTHROW(apply_generator(sqrt_psd(t), onb));
}

TEST_CASE("trace domination keeps invertibility") {
  Rng rng(43);
  const SpaceSpec spec = square_space();
  for (int rep = 0; rep < 5; ++rep) {
    const LinOp t = random_psd_module_map(rng, spec, 0.3, 2.0);
    const LinOp noise = random_psd_module_map(rng, spec, 0.0, 1.0);
    const LinOp omega = add(t, noise);
    CHECK(is_positive(omega).min_eigenvalue >=
          is_positive(t).min_eigenvalue * (1.0 - 1e-10) - 1e-12);
    CHECK_NOTHROW(invert(omega));
  }
}

TEST_CASE("transpose operator fixes the diagonal basis but is not positive") {
  const SpaceSpec spec = square_space();
  const MatONB onb = canonical_onb(spec);
  const LinOp u = transpose_op(spec);
  for (const MatFn& e : onb.functions)
    CHECK((apply(u, e).coords() - e.coords()).norm() == 0.0);
  CHECK_FALSE(is_positive(u).positive);
  CHECK_FALSE(is_matrix_adjointable(u).adjointable);
}
