#include "mvframe/experiment.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "mvframe/errors.hpp"
#include "mvframe/frame.hpp"
#include "mvframe/random_ops.hpp"

namespace mvframe {

namespace {

constexpr std::uint64_t kTrialStride = 0x9e3779b97f4a7c15ull;

const std::vector<std::string> kConstructions = {
    "identity",      "i_plus_t",       "neumann",
    "sqrt_chain",    "jordan_parts",   "unitary_parts",
    "cartesian_unitaries", "polar",    "holub_forward",
    "holub_converse", "counterexamples"};

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct Verdicts {
  json items = json::array();
  bool all = true;

  void add(const std::string& name, bool pass, double value, double threshold) {
    items.push_back({{"name", name},
                     {"pass", pass},
                     {"value", value},
                     {"threshold", threshold}});
    all = all && pass;
  }

  void add_flag(const std::string& name, bool pass) {
    items.push_back({{"name", name}, {"pass", pass}});
    all = all && pass;
  }
};

double diff_norm(const LinOp& a, const LinOp& b) {
  return (a.matrix() - b.matrix()).norm();
}

double unitarity_defect(const LinOp& w) {
  return (compose(trace_adjoint(w), w).matrix() -
          Eigen::MatrixXcd::Identity(w.dim(), w.dim()))
      .norm();
}

SpaceSpec space_from(const ExperimentConfig& config) {
  return SpaceSpec(GroupSpec(config.group), config.rows, config.cols);
}

// One generator's full record: operator report, frame verification, and
// the shared pass/fail verdicts.
json assess_generator(const std::string& name, const LinOp& gen, const MatONB& onb,
                      const ExperimentConfig& config, Verdicts& verdicts,
                      bool expect_parseval) {
  const double verify_tol = config.tolerance("verify", 1e-8);
  const double recon_tol = config.tolerance("reconstruction", 1e-8);

  const AdjointabilityResult adj = is_matrix_adjointable(gen);
  verdicts.add(name + ".adjointable_exact", adj.residual == 0.0, adj.residual, 0.0);

  RieszBasis rb = apply_generator(gen, onb);
  dual_basis(rb);
  const RieszCheck check = verify_riesz(rb, verify_tol, 0x5eedf00d, recon_tol);

  verdicts.add_flag(name + ".is_frame", check.report.is_frame);
  verdicts.add(name + ".bounds_in_interval", check.bounds_ok,
               check.report.upper_bound, check.upper_limit);
  verdicts.add(name + ".defect_zero", check.report.completeness_defect == 0,
               check.report.completeness_defect, 0.0);
  verdicts.add(name + ".reconstruction", check.reconstruction_ok,
               check.report.reconstruction_error.value_or(-1.0), recon_tol);
  if (expect_parseval) {
    const double parseval_tol = config.tolerance("parseval", 1e-8);
    verdicts.add(name + ".parseval", check.report.parseval_distance <= parseval_tol,
                 check.report.parseval_distance, parseval_tol);
  }

  return {{"name", name},
          {"op_report", op_report_to_json(analyze_operator(gen))},
          {"frame_check", riesz_check_to_json(check)}};
}

json run_identity(const ExperimentConfig& config, Verdicts& verdicts) {
  const SpaceSpec spec = space_from(config);
  const MatONB onb = canonical_onb(spec);
  json results = json::array();
  results.push_back(
      assess_generator("identity", identity_op(spec), onb, config, verdicts, true));
  return results;
}

json run_i_plus_t(const ExperimentConfig& config, Verdicts& verdicts) {
  const SpaceSpec spec = space_from(config);
  const MatONB onb = canonical_onb(spec);
  Rng rng(config.seed);
  const LinOp t = random_psd_module_map(rng, spec, 0.1, 2.0);
  const bool with_s = config.params.value("with_s", true);
  const int n = config.params.value("n", 3);

  std::optional<LinOp> s;
  if (with_s) s = random_psd_module_map(rng, spec, 0.1, 2.0);

  json results = json::array();
  for (const NamedOp& named :
       build_positive_classes(t, s ? &*s : nullptr, n)) {
    results.push_back(
        assess_generator(named.name, named.op, onb, config, verdicts, false));
    const Eigen::VectorXd sv = singular_values(named.op);
    verdicts.add(named.name + ".smallest_sv_at_least_one",
                 sv.minCoeff() >= 1.0 - 1e-10, sv.minCoeff(), 1.0 - 1e-10);
  }
  return results;
}

json run_neumann(const ExperimentConfig& config, Verdicts& verdicts) {
  const SpaceSpec spec = space_from(config);
  const MatONB onb = canonical_onb(spec);
  Rng rng(config.seed);
  const double target = config.params.value("norm_target", 0.9);
  if (target <= 0.0 || target >= 1.0)
    throw ConfigError("norm_target must lie in (0, 1)", "/params/norm_target");

  LinOp t = random_module_map(rng, spec, 0.2, 1.0);
  t = scale(target / op_norm(t), t);
  const LinOp limit = build_neumann(t);

  json partials = json::array();
  const double norm = op_norm(t);
  double worst_excess = 0.0;
  for (int n : {1, 2, 4, 8, 16}) {
    const double dist = op_norm(add(neumann_partial_sum(t, n), scale(-1.0, limit)));
    const double bound = std::pow(norm, n + 1) / (1.0 - norm);
    partials.push_back({{"n", n}, {"distance", dist}, {"tail_bound", bound}});
    worst_excess = std::max(worst_excess, dist - bound);
  }
  verdicts.add("neumann.tail_bound", worst_excess <= 1e-10, worst_excess, 1e-10);

  json results = json::array();
  results.push_back(assess_generator("neumann_limit", limit, onb, config, verdicts, false));
  results.back()["partial_sums"] = std::move(partials);
  return results;
}

json run_sqrt_chain(const ExperimentConfig& config, Verdicts& verdicts,
                    std::optional<CsvTable>& table) {
  const SpaceSpec spec = space_from(config);
  const MatONB onb = canonical_onb(spec);
  Rng rng(config.seed);
  const double norm = config.params.value("norm", 4.0);
  const double lo = config.params.value("spectrum_min", 0.5);
  const LinOp t = random_psd_module_map(rng, spec, lo, norm, norm);

  const Eigen::VectorXd sv = singular_values(t);
  const double smin = sv.minCoeff();
  const double smax = sv.maxCoeff();

  const int n_single = config.params.value("n", 0);
  const int n_max = config.params.value("n_max", 0);
  if (n_single <= 0 && n_max <= 0)
    throw ConfigError("sqrt_chain needs params.n or params.n_max", "/params");

  json results = json::array();
  if (n_single > 0) {
    const LinOp root = build_sqrt_chain(t, n_single);
    results.push_back(assess_generator("sqrt_chain_n" + std::to_string(n_single),
                                       root, onb, config, verdicts, false));
    const double norm_law =
        std::abs(op_norm(root) - std::pow(smax, 1.0 / std::pow(2.0, n_single)));
    verdicts.add("sqrt_chain.norm_law", norm_law <= 1e-8 * (1.0 + smax), norm_law,
                 1e-8 * (1.0 + smax));
  }

  if (n_max > 0) {
    CsvTable csv;
    csv.header = {"n", "lower", "upper"};
    LinOp root = t;
    double prev_distance = -1.0;
    bool monotone = true;
    double worst = 0.0;
    for (int n = 1; n <= n_max; ++n) {
      root = sqrt_psd(root);
      RieszBasis rb = apply_generator(root, onb);
      const auto [lower, upper] = optimal_frame_bounds(rb.functions);
      const double expo = 1.0 / std::pow(2.0, n - 1);
      worst = std::max({worst, std::abs(lower - std::pow(smin, expo)),
                        std::abs(upper - std::pow(smax, expo))});
      const double distance = std::max(std::abs(lower - 1.0), std::abs(upper - 1.0));
      if (n > 1 && prev_distance >= 0.0 && distance >= prev_distance) monotone = false;
      prev_distance = distance;
      csv.rows.push_back({std::to_string(n), format_double(lower), format_double(upper)});
      results.push_back({{"name", "sweep_n" + std::to_string(n)},
                         {"lower", lower},
                         {"upper", upper},
                         {"parseval_distance", distance}});
    }
    verdicts.add("sqrt_chain.bounds_match_theory", worst <= 1e-7, worst, 1e-7);
    verdicts.add_flag("sqrt_chain.parseval_decreasing", monotone);
    table = std::move(csv);
  }
  return results;
}

json run_jordan_parts(const ExperimentConfig& config, Verdicts& verdicts) {
  const SpaceSpec spec = space_from(config);
  const MatONB onb = canonical_onb(spec);
  Rng rng(config.seed);
  const LinOp t = random_selfadjoint_module_map(rng, spec, 1.5);
  const auto [part1, part2] = build_jordan_parts(t);

  const LinOp id = identity_op(spec);
  const LinOp p1 = add(part1, scale(-1.0, id));
  const LinOp p2 = add(part2, scale(-1.0, id));
  const double norm = op_norm(t);
  verdicts.add("jordan.p1p2_zero", op_norm(compose(p1, p2)) <= 1e-9 * norm * norm,
               op_norm(compose(p1, p2)), 1e-9 * norm * norm);
  verdicts.add("jordan.difference_recovers_t",
               diff_norm(add(p1, scale(-1.0, p2)), t) <= 1e-10 * (1.0 + norm),
               diff_norm(add(p1, scale(-1.0, p2)), t), 1e-10 * (1.0 + norm));

  json results = json::array();
  results.push_back(assess_generator("i_plus_p1", part1, onb, config, verdicts, false));
  results.push_back(assess_generator("i_plus_p2", part2, onb, config, verdicts, false));
  return results;
}

json run_unitary_parts(const ExperimentConfig& config, Verdicts& verdicts) {
  const SpaceSpec spec = space_from(config);
  const MatONB onb = canonical_onb(spec);
  Rng rng(config.seed);
  const LinOp t = random_selfadjoint_module_map(rng, spec, 1.5);
  const auto [plus, minus] = build_unitary_parts(t);

  verdicts.add("unitary_parts.plus_unitary", unitarity_defect(plus) <= 1e-8,
               unitarity_defect(plus), 1e-8);
  verdicts.add("unitary_parts.minus_unitary", unitarity_defect(minus) <= 1e-8,
               unitarity_defect(minus), 1e-8);
  const LinOp average = scale(0.5, add(plus, minus));
  const LinOp normalized = scale(1.0 / op_norm(t), t);
  verdicts.add("unitary_parts.average", diff_norm(average, normalized) <= 1e-10,
               diff_norm(average, normalized), 1e-10);

  json results = json::array();
  results.push_back(assess_generator("unit_plus", plus, onb, config, verdicts, true));
  results.push_back(assess_generator("unit_minus", minus, onb, config, verdicts, true));
  return results;
}

json run_cartesian_unitaries(const ExperimentConfig& config, Verdicts& verdicts) {
  const SpaceSpec spec = space_from(config);
  const MatONB onb = canonical_onb(spec);
  Rng rng(config.seed);
  const LinOp t = random_module_map(rng, spec, 0.2, 2.0);
  const CartesianUnitaries parts = build_cartesian_unitaries(t);

  json results = json::array();
  for (int i = 0; i < 4; ++i) {
    const std::string name = "omega" + std::to_string(i + 1);
    if (!parts.omega[i]) {
      results.push_back({{"name", name}, {"available", false}});
      continue;
    }
    verdicts.add(name + ".unitary", unitarity_defect(*parts.omega[i]) <= 1e-8,
                 unitarity_defect(*parts.omega[i]), 1e-8);
    results.push_back(
        assess_generator(name, *parts.omega[i], onb, config, verdicts, true));
    results.back()["available"] = true;
  }
  return results;
}

json run_polar(const ExperimentConfig& config, Verdicts& verdicts) {
  const SpaceSpec spec = space_from(config);
  const MatONB onb = canonical_onb(spec);
  Rng rng(config.seed);
  const LinOp u = random_module_map(rng, spec, 0.2, 5.0);
  const PolarParts parts = polar(u);

  const double norm = op_norm(u);
  verdicts.add("polar.reconstruction",
               diff_norm(compose(parts.unitary, parts.positive), u) <= 1e-8 * norm,
               diff_norm(compose(parts.unitary, parts.positive), u), 1e-8 * norm);
  verdicts.add("polar.w_unitary", unitarity_defect(parts.unitary) <= 1e-8,
               unitarity_defect(parts.unitary), 1e-8);

  json results = json::array();
  results.push_back(
      assess_generator("polar_w", parts.unitary, onb, config, verdicts, true));
  results.push_back(
      assess_generator("polar_p", parts.positive, onb, config, verdicts, false));
  return results;
}

json run_holub_forward(const ExperimentConfig& config, Verdicts& verdicts) {
  const SpaceSpec spec = space_from(config);
  const MatONB onb = canonical_onb(spec);
  Rng rng(config.seed);
  const LinOp u = random_module_map(rng, spec, 0.2, 5.0);

  RieszBasis rb = apply_generator(u, onb);
  dual_basis(rb);
  const LinOp t = holub_map(rb);

  double worst = 0.0;
  for (size_t k = 0; k < rb.functions.size(); ++k)
    worst = std::max(worst, (apply(t, rb.functions[k]).coords() -
                             rb.dual_functions[k].coords())
                                .norm());
  verdicts.add("holub_forward.maps_basis_to_dual", worst <= 1e-8, worst, 1e-8);

  const PositivityResult pos = is_positive(t);
  verdicts.add_flag("holub_forward.positive", pos.positive);
  const double norm_u = op_norm(u);
  verdicts.add("holub_forward.min_eig_times_norm_sq",
               pos.min_eigenvalue * norm_u * norm_u >= 1.0 - 1e-6,
               pos.min_eigenvalue * norm_u * norm_u, 1.0 - 1e-6);

  json results = json::array();
  results.push_back({{"name", "holub_map"},
                     {"op_report", op_report_to_json(analyze_operator(t))}});
  return results;
}

json run_holub_converse(const ExperimentConfig& config, Verdicts& verdicts) {
  const SpaceSpec spec = space_from(config);
  const MatONB onb = canonical_onb(spec);
  Rng rng(config.seed);
  const LinOp t = random_psd_module_map(rng, spec, 0.3, 3.0);

  auto [rb, duals] = holub_basis_for_positive(t, onb);
  const double norm = op_norm(t);
  double worst = 0.0;
  for (size_t k = 0; k < rb.functions.size(); ++k)
    worst = std::max(worst, (apply(t, rb.functions[k]).coords() -
                             duals[k].coords())
                                .norm());
  verdicts.add("holub_converse.t_qk_equals_hk", worst <= 1e-8 * norm, worst,
               1e-8 * norm);

  json results = json::array();
  results.push_back(assess_generator("holub_q_basis", rb.generator, onb, config,
                                     verdicts, false));
  return results;
}

json counterexample_entry_swap(const SpaceSpec& spec, Verdicts& verdicts) {
  const LinOp u = entry_swap_op(spec);
  const AdjointabilityResult adj = is_matrix_adjointable(u);
  verdicts.add_flag("entry_swap.not_matrix_adjointable", !adj.adjointable);
  verdicts.add_flag("entry_swap.witness_found", adj.witness.has_value());
  verdicts.add("entry_swap.trace_adjoint_equals_u",
               (u.matrix() - u.matrix().adjoint()).norm() == 0.0,
               (u.matrix() - u.matrix().adjoint()).norm(), 0.0);
  verdicts.add_flag("entry_swap.not_module_map", !check_module_map(u));

  // The trace-level adjoint identity still holds for the swap.
  Rng rng(7);
  double trace_resid = 0.0;
  for (int rep = 0; rep < 4; ++rep) {
    const MatFn f = random_matfn(rng, spec);
    const MatFn g = random_matfn(rng, spec);
    trace_resid = std::max(
        trace_resid, std::abs(trace_inner(apply(u, f), g) -
                              trace_inner(f, apply(trace_adjoint(u), g))));
  }
  verdicts.add("entry_swap.trace_adjoint_identity", trace_resid <= 1e-10, trace_resid,
               1e-10);

  json out{{"name", "entry_swap"},
           {"op_report", op_report_to_json(analyze_operator(u))}};
  if (adj.witness)
    out["witness"] = {{"f", matfn_to_json(adj.witness->f)},
                      {"g", matfn_to_json(adj.witness->g)}};
  return out;
}

json counterexample_swap_family(const SpaceSpec& spec, Verdicts& verdicts) {
  const LinOp u = entry_swap_op(spec);
  const MatONB onb = canonical_onb(spec);
  std::vector<MatFn> images;
  images.reserve(onb.functions.size());
  for (const MatFn& e : onb.functions) images.push_back(apply(u, e));

  const FrameReport report = analyze_family(images);
  verdicts.add("swap_family.lower_bound_zero", report.lower_bound <= 1e-10,
               report.lower_bound, 1e-10);
  verdicts.add("swap_family.defect_at_least_one", report.completeness_defect >= 1,
               report.completeness_defect, 1.0);
  verdicts.add_flag("swap_family.not_a_frame", !report.is_frame);

  // The annihilated direction: e_0 in the (2,1) slot, zero elsewhere.
  const Eigen::MatrixXcd scalars = scalar_onb(spec.group());
  MatFn probe(spec);
  for (int x = 0; x < spec.group().size(); ++x) probe.set_entry(1, 0, x, scalars(x, 0));
  const double energy = coefficient_energy(probe, images);
  verdicts.add("swap_family.witness_energy", energy <= 1e-20, energy, 1e-20);

  json out{{"name", "swap_family"},
           {"frame_report", frame_report_to_json(report)},
           {"probe", matfn_to_json(probe)},
           {"probe_energy", energy}};
  return out;
}

json counterexample_transpose(const SpaceSpec& spec, Verdicts& verdicts) {
  const LinOp u = transpose_op(spec);
  const MatONB onb = canonical_onb(spec);

  double fixes = 0.0;
  for (const MatFn& e : onb.functions)
    fixes = std::max(fixes, (apply(u, e).coords() - e.coords()).norm());
  verdicts.add("transpose.fixes_diagonal_basis", fixes == 0.0, fixes, 0.0);

  const Eigen::MatrixXcd scalars = scalar_onb(spec.group());
  MatFn probe(spec);
  for (int x = 0; x < spec.group().size(); ++x) {
    probe.set_entry(0, 1, x, scalars(x, 0));
    probe.set_entry(1, 0, x, -scalars(x, 0));
    probe.set_entry(1, 1, x, scalars(x, 0));
  }
  const cplx value = trace_inner(apply(u, probe), probe);
  verdicts.add("transpose.negative_witness_value", std::abs(value - cplx(-1.0)) <= 1e-10,
               std::abs(value - cplx(-1.0)), 1e-10);

  const PositivityResult pos = is_positive(u);
  verdicts.add_flag("transpose.not_positive", !pos.positive);

  return {{"name", "transpose"},
          {"witness_value", {value.real(), value.imag()}},
          {"op_report", op_report_to_json(analyze_operator(u))},
          {"probe", matfn_to_json(probe)}};
}

struct PropertyStat {
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = true;

  void feed(double residual, double tol) {
    max_residual = std::max(max_residual, residual);
    tolerance = tol;
    pass = pass && residual <= tol;
  }
};

struct TrialOutcome {
  std::map<std::string, PropertyStat> stats;
  std::optional<json> failure;
};

TrialOutcome run_property_trial(const PropertySuiteOptions& options, int trial) {
  TrialOutcome out;
  const std::uint64_t trial_seed = options.seed + kTrialStride * (trial + 1);
  Rng rng(trial_seed);
  const SpaceSpec spec(GroupSpec(options.group), options.rows, options.cols);
  const MatONB onb = canonical_onb(spec);

  auto stat = [&out](const char* name) -> PropertyStat& { return out.stats[name]; };

  try {
    LinOp u = random_module_map(rng, spec, 0.2, 5.0);
    const LinOp v = random_module_map(rng, spec, 0.2, 5.0);
    if (options.inject_entry_swap && trial == 0) u = entry_swap_op(spec);

    // Closure: sums, products and inverses of adjointable maps stay adjointable.
    stat("closure_add").feed(is_matrix_adjointable(add(u, v)).residual, 0.0);
    stat("closure_compose").feed(is_matrix_adjointable(compose(u, v)).residual, 0.0);
    stat("closure_invert").feed(is_matrix_adjointable(invert(u)).residual, 0.0);

    const LinOp t = random_psd_module_map(rng, spec, 0.3, 2.5);
    const LinOp s = random_psd_module_map(rng, spec, 0.0, 1.5);

    const Eigen::VectorXd sv_ipt = singular_values(add(identity_op(spec), s));
    stat("i_plus_s_invertible").feed(std::max(0.0, 1.0 - sv_ipt.minCoeff()), 1e-10);
    stat("sum_psd").feed(std::max(0.0, -is_positive(add(t, s)).min_eigenvalue),
                         1e-10 * (1.0 + op_norm(t) + op_norm(s)));
    const LinOp t_sq = compose(t, t);  // commutes with t by construction
    stat("commuting_product_psd")
        .feed(std::max(0.0, -is_positive(compose(t, t_sq)).min_eigenvalue),
              1e-10 * (1.0 + std::pow(op_norm(t), 3.0)));

    const LinOp root = sqrt_psd(t);
    const double t_norm = op_norm(t);
    stat("sqrt_residual")
        .feed(diff_norm(compose(root, root), t), 1e-10 * std::max(1.0, t_norm));
    stat("sqrt_norm_law")
        .feed(std::abs(op_norm(root) - std::sqrt(t_norm)), 1e-8 * (1.0 + t_norm));
    stat("sqrt_adjointable_exact").feed(is_matrix_adjointable(root).residual, 0.0);
    const IterativeSqrt iter = sqrt_iterative(t, 1e-13, 100);
    stat("sqrt_cross_method").feed(diff_norm(iter.root, root), 1e-8);

    RieszBasis rb = apply_generator(u, onb);
    dual_basis(rb);
    const LinOp holub = holub_map(rb);
    const double u_norm = op_norm(u);
    stat("holub_forward_scale")
        .feed(std::max(0.0, 1.0 - is_positive(holub).min_eigenvalue * u_norm * u_norm),
              1e-6);

    auto [conv_rb, conv_duals] = holub_basis_for_positive(t, onb);
    double conv_resid = 0.0;
    for (size_t k = 0; k < conv_rb.functions.size(); ++k)
      conv_resid = std::max(conv_resid, (apply(t, conv_rb.functions[k]).coords() -
                                         conv_duals[k].coords())
                                            .norm());
    stat("holub_converse").feed(conv_resid, 1e-8 * std::max(1.0, t_norm));

    const MatFn probe = random_matfn(rng, spec);
    stat("reconstruction").feed(reconstruct(probe, rb).second, 1e-8);

    const LinOp sframe = frame_operator(rb.functions);
    const double energy_gap =
        std::abs(coefficient_energy(probe, rb.functions) -
                 trace_inner(apply(sframe, probe), probe).real());
    stat("energy_identity")
        .feed(energy_gap, 1e-10 * (1.0 + frob_norm(probe) * frob_norm(probe)) *
                              std::max(1.0, u_norm * u_norm));

    // Frame operator of {U E_k} collapses to U U^adj.
    stat("frame_operator_algebra")
        .feed(diff_norm(sframe, compose(u, trace_adjoint(u))),
              1e-10 * std::max(1.0, u_norm * u_norm));

    RieszBasis dual_rb = apply_generator(trace_adjoint(invert(u)), onb);
    dual_basis(dual_rb);
    double dual_dual = 0.0;
    for (size_t k = 0; k < rb.functions.size(); ++k)
      dual_dual = std::max(dual_dual, (dual_rb.dual_functions[k].coords() -
                                       rb.functions[k].coords())
                                          .norm());
    stat("dual_of_dual").feed(dual_dual, 1e-8 * std::max(1.0, u_norm));

    // Trace-level adjoint identity holds for every operator, module or not.
    const LinOp rough = random_general_op(rng, spec, 0.2, 5.0);
    const MatFn f = random_matfn(rng, spec);
    const MatFn g = random_matfn(rng, spec);
    const double fg_scale = 1.0 + frob_norm(f) * frob_norm(g);
    stat("trace_adjoint_identity")
        .feed(std::abs(trace_inner(apply(rough, f), g) -
                       trace_inner(f, apply(trace_adjoint(rough), g))),
              1e-10 * fg_scale * std::max(1.0, op_norm(rough)));

    const LinOp omega = add(t, s);  // dominates t, stays invertible
    stat("trace_domination")
        .feed(std::max(0.0, is_positive(t).min_eigenvalue -
                                is_positive(omega).min_eigenvalue),
              1e-10 * (1.0 + op_norm(omega)));
  } catch (const AdjointabilityError& e) {
    json failure{{"trial", trial},
                 {"seed", trial_seed},
                 {"error", e.what()},
                 {"witness",
                  {{"f", matfn_to_json(e.witness->f)},
                   {"g", matfn_to_json(e.witness->g)}}}};
    out.failure = std::move(failure);
  } catch (const Error& e) {
    out.failure = json{{"trial", trial}, {"seed", trial_seed}, {"error", e.what()}};
  }
  return out;
}

}  // namespace

double ExperimentConfig::tolerance(const std::string& name, double fallback) const {
  const auto it = tolerances.find(name);
  return it == tolerances.end() ? fallback : it->second;
}

ExperimentConfig parse_config(const json& doc) {
  if (!doc.is_object()) throw ConfigError("config must be a JSON object", "/");
  ExperimentConfig config;

  if (!doc.contains("group") || !doc["group"].is_array() || doc["group"].empty())
    throw ConfigError("group must be a nonempty array of integers", "/group");
  for (const auto& item : doc["group"]) {
    if (!item.is_number_integer() || item.get<int>() < 1)
      throw ConfigError("group orders must be positive integers", "/group");
    config.group.push_back(item.get<int>());
  }

  auto read_int = [&doc](const char* key, const char* path) {
    if (!doc.contains(key) || !doc[key].is_number_integer())
      throw ConfigError(std::string(key) + " must be an integer", path);
    return doc[key].get<int>();
  };
  config.rows = read_int("s", "/s");
  config.cols = read_int("r", "/r");
  if (config.rows < 1 || config.rows > 16)
    throw ConfigError("s must lie in [1, 16]", "/s");
  if (config.cols < 1 || config.cols > 16)
    throw ConfigError("r must lie in [1, 16]", "/r");
  if (config.cols % config.rows != 0)
    throw ConfigError("s must divide r for the canonical basis", "/r");

  if (!doc.contains("construction") || !doc["construction"].is_string())
    throw ConfigError("construction must be a string", "/construction");
  config.construction = doc["construction"].get<std::string>();
  if (std::find(kConstructions.begin(), kConstructions.end(), config.construction) ==
      kConstructions.end())
    throw ConfigError("unknown construction '" + config.construction + "'",
                      "/construction");

  if (doc.contains("params")) {
    if (!doc["params"].is_object())
      throw ConfigError("params must be an object", "/params");
    config.params = doc["params"];
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer())
      throw ConfigError("seed must be an integer", "/seed");
    config.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("tolerances")) {
    if (!doc["tolerances"].is_object())
      throw ConfigError("tolerances must map names to reals", "/tolerances");
    for (const auto& [key, value] : doc["tolerances"].items()) {
      if (!value.is_number())
        throw ConfigError("tolerance '" + key + "' must be a number",
                          "/tolerances/" + key);
      config.tolerances[key] = value.get<double>();
    }
  }
  if (!doc.contains("output") || !doc["output"].is_string() ||
      doc["output"].get<std::string>().empty())
    throw ConfigError("output must be a nonempty path prefix", "/output");
  config.output = doc["output"].get<std::string>();

  long long ambient = static_cast<long long>(config.rows) * config.cols;
  for (int n : config.group) ambient *= n;
  if (ambient > 2048)
    throw ConfigError("ambient dimension exceeds the lab cap of 2048", "/group");

  if (config.construction == "counterexamples" &&
      (config.rows != 2 || config.cols != 2))
    throw ConfigError("counterexamples require s = r = 2", "/s");

  return config;
}

RunReport run_experiment(const ExperimentConfig& config) {
  RunReport report;
  Stopwatch watch;
  Verdicts verdicts;
  std::optional<CsvTable> table;

  json tolerance_echo = json::object();
  for (const auto& [key, value] : config.tolerances) tolerance_echo[key] = value;
  const json config_echo{{"group", config.group},
                         {"s", config.rows},
                         {"r", config.cols},
                         {"construction", config.construction},
                         {"params", config.params},
                         {"seed", config.seed},
                         {"tolerances", tolerance_echo},
                         {"output", config.output}};

  json results;
  if (config.construction == "counterexamples") {
    RunReport inner = suite_counterexamples(config.group);
    report.doc = json{{"config", config_echo}};
    for (const auto& [key, value] : inner.doc.items()) report.doc[key] = value;
    report.all_pass = inner.all_pass;
    report.timings = {{"total_seconds", watch.seconds()}};
    return report;
  }

  if (config.construction == "identity")
    results = run_identity(config, verdicts);
  else if (config.construction == "i_plus_t")
    results = run_i_plus_t(config, verdicts);
  else if (config.construction == "neumann")
    results = run_neumann(config, verdicts);
  else if (config.construction == "sqrt_chain")
    results = run_sqrt_chain(config, verdicts, table);
  else if (config.construction == "jordan_parts")
    results = run_jordan_parts(config, verdicts);
  else if (config.construction == "unitary_parts")
    results = run_unitary_parts(config, verdicts);
  else if (config.construction == "cartesian_unitaries")
    results = run_cartesian_unitaries(config, verdicts);
  else if (config.construction == "polar")
    results = run_polar(config, verdicts);
  else if (config.construction == "holub_forward")
    results = run_holub_forward(config, verdicts);
  else if (config.construction == "holub_converse")
    results = run_holub_converse(config, verdicts);
  else
    throw ConfigError("unknown construction", "/construction");

  report.doc = {{"config", config_echo},
                {"results", std::move(results)},
                {"verdicts", std::move(verdicts.items)},
                {"all_pass", verdicts.all}};
  report.table = std::move(table);
  report.all_pass = verdicts.all;
  report.timings = {{"total_seconds", watch.seconds()}};
  return report;
}

RunReport suite_counterexamples(const std::vector<int>& group_orders) {
  Stopwatch watch;
  const SpaceSpec spec(GroupSpec(group_orders), 2, 2);
  Verdicts verdicts;

  json sections = json::array();
  sections.push_back(counterexample_entry_swap(spec, verdicts));
  sections.push_back(counterexample_swap_family(spec, verdicts));
  sections.push_back(counterexample_transpose(spec, verdicts));

  RunReport report;
  report.doc = {{"suite", "counterexamples"},
                {"group", group_orders},
                {"sections", std::move(sections)},
                {"verdicts", std::move(verdicts.items)},
                {"all_pass", verdicts.all}};
  report.all_pass = verdicts.all;
  report.timings = {{"total_seconds", watch.seconds()}};
  return report;
}

RunReport suite_random_properties(const PropertySuiteOptions& options) {
  Stopwatch watch;
  if (options.trials < 1)
    throw ConfigError("trials must be at least 1", "/trials");

  std::vector<TrialOutcome> outcomes(options.trials);
  const int threads =
      std::max(1, std::min(max_threads(), options.trials));
  if (threads == 1) {
    for (int t = 0; t < options.trials; ++t)
      outcomes[t] = run_property_trial(options, t);
  } else {
    std::vector<std::thread> pool;
    std::atomic<int> next{0};
    for (int w = 0; w < threads; ++w)
      pool.emplace_back([&] {
        for (int t = next.fetch_add(1); t < options.trials; t = next.fetch_add(1))
          outcomes[t] = run_property_trial(options, t);
      });
    for (auto& th : pool) th.join();
  }

  std::map<std::string, PropertyStat> merged;
  json failures = json::array();
  for (const TrialOutcome& outcome : outcomes) {
    for (const auto& [name, stat] : outcome.stats) {
      PropertyStat& agg = merged[name];
      agg.feed(stat.max_residual, stat.tolerance);
      agg.pass = agg.pass && stat.pass;
    }
    if (outcome.failure) failures.push_back(*outcome.failure);
  }

  bool all_pass = failures.empty();
  json properties = json::array();
  for (const auto& [name, stat] : merged) {
    properties.push_back({{"property", name},
                          {"max_residual", stat.max_residual},
                          {"tolerance", stat.tolerance},
                          {"pass", stat.pass}});
    all_pass = all_pass && stat.pass;
  }

  RunReport report;
  report.doc = {{"suite", "random_properties"},
                {"seed", options.seed},
                {"trials", options.trials},
                {"group", options.group},
                {"s", options.rows},
                {"r", options.cols},
                {"properties", std::move(properties)},
                {"failures", std::move(failures)},
                {"all_pass", all_pass}};
  report.all_pass = all_pass;
  report.timings = {{"total_seconds", watch.seconds()}};
  return report;
}

std::vector<std::string> write_report_files(const RunReport& report,
                                            const std::string& prefix) {
  namespace fs = std::filesystem;
  std::vector<std::string> written;
  const fs::path base(prefix);
  if (base.has_parent_path()) fs::create_directories(base.parent_path());

  const std::string report_path = prefix + ".report.json";
  {
    std::ofstream out(report_path, std::ios::binary);
    if (!out) throw Error("cannot open " + report_path + " for writing");
    out << report.doc.dump(2) << "\n";
  }
  written.push_back(report_path);

  if (report.table) {
    const std::string csv_path = prefix + ".table.csv";
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw Error("cannot open " + csv_path + " for writing");
    auto emit_row = [&out](const std::vector<std::string>& row) {
      for (size_t i = 0; i < row.size(); ++i) {
        if (i) out << ',';
        out << row[i];
      }
      out << "\r\n";
    };
    emit_row(report.table->header);
    for (const auto& row : report.table->rows) emit_row(row);
    written.push_back(csv_path);
  }
  return written;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

int max_threads() {
  if (const char* env = std::getenv("MVFRAME_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace mvframe
