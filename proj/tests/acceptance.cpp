// Acceptance suite: one pass/fail line per criterion, exit 0 only when every
// criterion holds at its stated tolerance.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "mvframe/frame.hpp"
#include "mvframe/random_ops.hpp"

using namespace mvframe;

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::vector<MatFn> images_of(const LinOp& u, const MatONB& onb) {
  std::vector<MatFn> out;
  out.reserve(onb.functions.size());
  for (const MatFn& e : onb.functions) out.push_back(apply(u, e));
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

// 1. Entry-swap operator: not matrix-adjointable (with witness), equal to its
//    trace adjoint exactly, and not a module map.
Check criterion_1() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const SpaceSpec spec(GroupSpec({4}), 2, 2);
  const LinOp u = entry_swap_op(spec);

  const AdjointabilityResult adj = is_matrix_adjointable(u);
  c.require(!adj.adjointable, "entry swap must fail adjointability");
  c.require(adj.witness.has_value(), "witness pair missing");
  if (adj.witness) {
    const auto lhs = mat_inner(apply(u, adj.witness->f), adj.witness->g);
    const auto rhs =
        mat_inner(adj.witness->f, apply(trace_adjoint(u), adj.witness->g));
    c.require((lhs - rhs).cwiseAbs().maxCoeff() > 1e-6,
              "witness does not violate the identity");
  }
  c.require((u.matrix() - u.matrix().adjoint()).norm() == 0.0,
            "trace adjoint must equal U exactly");
  c.require(!check_module_map(u), "entry swap must fail the module-map check");
  c.require(seconds_since(start) < 1.0, "runtime above 1 s");
  return c;
}

// 2. The swapped family: zero lower frame bound, positive defect, and the
//    annihilated probe carries no coefficient energy.
Check criterion_2() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const SpaceSpec spec(GroupSpec({4}), 2, 2);
  const MatONB onb = canonical_onb(spec);
  const std::vector<MatFn> family = images_of(entry_swap_op(spec), onb);

  const auto [lower, upper] = optimal_frame_bounds(family);
  c.require(lower <= 1e-10, "lower bound not within 1e-10 of zero");
  c.require(completeness_defect(family) >= 1, "defect must be at least 1");

  const Eigen::MatrixXcd scalars = scalar_onb(spec.group());
  MatFn probe(spec);
  for (int x = 0; x < spec.group().size(); ++x)
    probe.set_entry(1, 0, x, scalars(x, 0));
  c.require(coefficient_energy(probe, family) <= 1e-20,
            "probe coefficient energy above 1e-20");
  c.require(seconds_since(start) < 1.0, "runtime above 1 s");
  return c;
}

// 3. Transpose operator: fixes each diagonal basis element yet pairs
//    negatively with the stated probe.
Check criterion_3() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const SpaceSpec spec(GroupSpec({4}), 2, 2);
  const MatONB onb = canonical_onb(spec);
  const LinOp u = transpose_op(spec);

  for (const MatFn& e : onb.functions)
    c.require((apply(u, e).coords() - e.coords()).norm() == 0.0,
              "transpose must fix the diagonal basis");

  const Eigen::MatrixXcd scalars = scalar_onb(spec.group());
  MatFn probe(spec);
  double h_norm_sq = 0.0;
  for (int x = 0; x < spec.group().size(); ++x) {
    probe.set_entry(0, 1, x, scalars(x, 0));
    probe.set_entry(1, 0, x, -scalars(x, 0));
    probe.set_entry(1, 1, x, scalars(x, 0));
    h_norm_sq += std::norm(scalars(x, 0));
  }
  const cplx value = trace_inner(apply(u, probe), probe);
  c.require(std::abs(value - cplx(-h_norm_sq)) <= 1e-10,
            "pairing must equal -||h||^2");
  c.require(seconds_since(start) < 1.0, "runtime above 1 s");
  return c;
}

// 4. Optimal bounds of {U E_k} equal the squared extreme singular values of U
//    for 100 seeded module maps.
Check criterion_4() {
  Check c;
  const auto start = std::chrono::steady_clock::now();
  const SpaceSpec spec(GroupSpec({64}), 2, 2);  // D = 256
  const MatONB onb = canonical_onb(spec);

  for (int trial = 0; trial < 100 && c.ok; ++trial) {
    Rng rng(1000 + trial);
    const LinOp u = random_module_map(rng, spec);
    const auto [lower, upper] = optimal_frame_bounds(images_of(u, onb));
    const Eigen::VectorXd sv = singular_values(u);
    const double smin2 = sv.minCoeff() * sv.minCoeff();
    const double smax2 = sv.maxCoeff() * sv.maxCoeff();
    c.require(std::abs(lower - smin2) <= 1e-8 * smin2,
              "lower bound is off at trial " + std::to_string(trial));
    c.require(std::abs(upper - smax2) <= 1e-8 * smax2,
              "upper bound is off at trial " + std::to_string(trial));
    c.require(lower >= smin2 * (1.0 - 1e-8) && upper <= smax2 * (1.0 + 1e-8),
              "bounds leave the singular-value interval at trial " +
                  std::to_string(trial));
  }
  c.require(seconds_since(start) < 60.0, "runtime above 60 s");
  return c;
}

// 5. Iterated square roots: frame bounds follow the halved exponents and the
//    family approaches a Parseval frame.
Check criterion_5() {
  Check c;
  const SpaceSpec spec(GroupSpec({8}), 2, 2);
  const MatONB onb = canonical_onb(spec);
  Rng rng(20240817);
  const LinOp t = random_psd_module_map(rng, spec, 0.5, 4.0, 4.0);

  const Eigen::VectorXd sv = singular_values(t);
  const double smin = sv.minCoeff();
  const double smax = sv.maxCoeff();
  c.require(std::abs(smax - 4.0) <= 1e-12, "||T|| must be 4");

  double final_distance = 0.0;
  for (int n = 1; n <= 8; ++n) {
    const LinOp root = build_sqrt_chain(t, n);
    const auto [lower, upper] = optimal_frame_bounds(images_of(root, onb));
    const double expo = 1.0 / std::pow(2.0, n - 1);
    c.require(std::abs(lower - std::pow(smin, expo)) <= 1e-7,
              "lower bound misses theory at n = " + std::to_string(n));
    c.require(std::abs(upper - std::pow(smax, expo)) <= 1e-7,
              "upper bound misses theory at n = " + std::to_string(n));
    final_distance = std::max(std::abs(lower - 1.0), std::abs(upper - 1.0));
  }
  c.require(final_distance <= std::pow(4.0, 1.0 / 128.0) - 1.0 + 1e-7,
            "Parseval distance at n = 8 too large");
  return c;
}

// 6. Square-root battery over 100 positive module maps.
Check criterion_6() {
  Check c;
  const SpaceSpec spec(GroupSpec({16}), 2, 2);  // D = 64

  for (int trial = 0; trial < 100 && c.ok; ++trial) {
    Rng rng(2000 + trial);
    const LinOp t = random_psd_module_map(rng, spec, 0.2, 4.0);
    const double norm = op_norm(t);

    const LinOp root = sqrt_psd(t);
    c.require(op_norm(add(compose(root, root), scale(-1.0, t))) <= 1e-10 * norm,
              "root residual at trial " + std::to_string(trial));
    c.require(std::abs(op_norm(root) - std::sqrt(norm)) <= 1e-8 * (1.0 + norm),
              "norm law at trial " + std::to_string(trial));

    const IterativeSqrt iter = sqrt_iterative(t);
    c.require(op_norm(add(iter.root, scale(-1.0, root))) <= 1e-8,
              "iterative root disagrees at trial " + std::to_string(trial));

    c.require(is_matrix_adjointable(root).adjointable,
              "root lost adjointability at trial " + std::to_string(trial));
  }
  return c;
}

// 7. Holub characterization, both directions, 100 seeds.
Check criterion_7() {
  Check c;
  const SpaceSpec spec(GroupSpec({16}), 2, 2);
  const MatONB onb = canonical_onb(spec);

  for (int trial = 0; trial < 100 && c.ok; ++trial) {
    Rng rng(3000 + trial);
    const LinOp u = random_module_map(rng, spec);
    RieszBasis rb = apply_generator(u, onb);
    dual_basis(rb);
    const LinOp t = holub_map(rb);
    const PositivityResult pos = is_positive(t);
    c.require(pos.positive, "forward map not positive at trial " +
                                std::to_string(trial));
    const double norm_u = op_norm(u);
    c.require(pos.min_eigenvalue * norm_u * norm_u >= 1.0 - 1e-6,
              "forward eigenvalue law at trial " + std::to_string(trial));

    const LinOp t_pos = random_psd_module_map(rng, spec, 0.3, 3.0);
    auto [q_basis, duals] = holub_basis_for_positive(t_pos, onb);
    double worst = 0.0;
    for (size_t k = 0; k < q_basis.functions.size(); ++k)
      worst = std::max(worst, (apply(t_pos, q_basis.functions[k]).coords() -
                               duals[k].coords())
                                  .norm());
    c.require(worst <= 1e-8 * op_norm(t_pos),
              "converse residual at trial " + std::to_string(trial));
  }
  return c;
}

// 8. Every constructor's generators pass the full Riesz verification.
Check criterion_8() {
  Check c;
  const std::vector<SpaceSpec> spaces = {SpaceSpec(GroupSpec({4}), 2, 2),
                                         SpaceSpec(GroupSpec({3}), 2, 4),
                                         SpaceSpec(GroupSpec({4}), 3, 6)};
  int space_index = 0;
  for (const SpaceSpec& spec : spaces) {
    const MatONB onb = canonical_onb(spec);
    Rng rng(4000 + space_index++);

    std::vector<std::pair<std::string, LinOp>> generators;
    std::vector<std::string> parseval_expected;

    const LinOp t = random_psd_module_map(rng, spec, 0.2, 2.0);
    const LinOp s = random_psd_module_map(rng, spec, 0.2, 2.0);
    for (const NamedOp& named : build_positive_classes(t, &s, 3))
      generators.emplace_back(named.name, named.op);

    LinOp small = random_module_map(rng, spec, 0.2, 1.0);
    small = scale(0.9 / op_norm(small), small);
    generators.emplace_back("neumann", build_neumann(small));

    generators.emplace_back("sqrt_chain", build_sqrt_chain(t, 3));

    const LinOp t_sa = random_selfadjoint_module_map(rng, spec, 1.4);
    const auto [j1, j2] = build_jordan_parts(t_sa);
    generators.emplace_back("jordan_1", j1);
    generators.emplace_back("jordan_2", j2);

    const auto [u1, u2] = build_unitary_parts(t_sa);
    generators.emplace_back("unitary_plus", u1);
    generators.emplace_back("unitary_minus", u2);
    parseval_expected.push_back("unitary_plus");
    parseval_expected.push_back("unitary_minus");

    const LinOp t_gen = random_module_map(rng, spec, 0.2, 2.0);
    const CartesianUnitaries cart = build_cartesian_unitaries(t_gen);
    for (int i = 0; i < 4; ++i) {
      if (!cart.omega[i]) continue;
      const std::string name = "omega" + std::to_string(i + 1);
      generators.emplace_back(name, *cart.omega[i]);
      parseval_expected.push_back(name);
    }

    for (const auto& [name, gen] : generators) {
      RieszBasis rb = apply_generator(gen, onb);
      const RieszCheck check = verify_riesz(rb);
      const std::string tag =
          name + " on space " + std::to_string(space_index);
      c.require(check.report.is_frame, tag + ": not a frame");
      c.require(check.bounds_ok, tag + ": bounds escape the interval");
      c.require(check.report.completeness_defect == 0, tag + ": defect");
      c.require(*check.report.reconstruction_error <= 1e-8,
                tag + ": reconstruction error");
      if (std::find(parseval_expected.begin(), parseval_expected.end(), name) !=
          parseval_expected.end())
        c.require(check.report.parseval_distance <= 1e-8,
                  tag + ": not Parseval");
    }
  }
  return c;
}

// 9. Polar decomposition on 100 seeds; both factors generate Riesz bases.
Check criterion_9() {
  Check c;
  const SpaceSpec spec(GroupSpec({16}), 2, 2);
  const MatONB onb = canonical_onb(spec);

  for (int trial = 0; trial < 100 && c.ok; ++trial) {
    Rng rng(5000 + trial);
    const LinOp u = random_module_map(rng, spec);
    const PolarParts parts = polar(u);
    const double norm = op_norm(u);

    c.require(op_norm(add(compose(parts.unitary, parts.positive),
                          scale(-1.0, u))) <= 1e-8 * norm,
              "WP != U at trial " + std::to_string(trial));
    const LinOp gram = compose(trace_adjoint(parts.unitary), parts.unitary);
    c.require(op_norm(add(gram, scale(-1.0, identity_op(spec)))) <= 1e-8,
              "W not unitary at trial " + std::to_string(trial));

    RieszBasis w_basis = apply_generator(parts.unitary, onb);
    RieszBasis p_basis = apply_generator(parts.positive, onb);
    c.require(verify_riesz(w_basis).passed,
              "W basis fails verification at trial " + std::to_string(trial));
    c.require(verify_riesz(p_basis).passed,
              "P basis fails verification at trial " + std::to_string(trial));
  }
  return c;
}

}  // namespace

int main() {
  const auto suite_start = std::chrono::steady_clock::now();

  const std::vector<std::pair<std::string, std::function<Check()>>> criteria = {
      {"entry-swap operator is not matrix-adjointable", criterion_1},
      {"swapped family is not a frame", criterion_2},
      {"transpose operator maps the basis to itself but is not positive",
       criterion_3},
      {"optimal bounds equal extreme squared singular values (100 seeds)",
       criterion_4},
      {"iterated roots drive the bounds to a Parseval frame", criterion_5},
      {"square-root battery (100 seeds)", criterion_6},
      {"Holub characterization, both directions (100 seeds)", criterion_7},
      {"constructor battery across spaces", criterion_8},
      {"polar decomposition battery (100 seeds)", criterion_9},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    const Check result = criteria[i].second();
    const double elapsed = seconds_since(start);
    std::printf("[%s] criterion %2zu (%6.2f s): %s%s%s\n",
                result.ok ? "PASS" : "FAIL", i + 1, elapsed,
                criteria[i].first.c_str(), result.detail.empty() ? "" : " -- ",
                result.detail.c_str());
    if (!result.ok) ++failures;
  }

  // 10. Whole-suite wall clock.
  const double total = seconds_since(suite_start);
  const bool time_ok = total <= 300.0;
  std::printf("[%s] criterion 10 (%6.2f s): full suite within the 5-minute budget\n",
              time_ok ? "PASS" : "FAIL", total);
  if (!time_ok) ++failures;

  std::printf("ACCEPTANCE: %d/10 criteria passed, total %.2f s\n",
              10 - failures, total);
  return failures == 0 ? 0 : 1;
}
