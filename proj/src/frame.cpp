#include "mvframe/frame.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>

#include "mvframe/errors.hpp"
#include "mvframe/random_ops.hpp"

namespace mvframe {

namespace {

const SpaceSpec& family_space(const std::vector<MatFn>& family, const char* who) {
  if (family.empty())
    throw DimensionError(std::string(who) + ": family must be nonempty");
  for (const MatFn& f : family)
    if (!(f.space() == family[0].space()))
      throw DimensionError(std::string(who) + ": family members span different spaces");
  return family[0].space();
}

// Rows are the vectorized module atoms E_pq F_k (k outer, then p, then q).
Eigen::MatrixXcd module_atoms(const std::vector<MatFn>& family) {
  const SpaceSpec& spec = family[0].space();
  const int s = spec.rows();
  const int n = spec.row_block();
  Eigen::MatrixXcd atoms =
      Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(family.size()) * s * s,
                             spec.ambient_dim());
  Eigen::Index row = 0;
  for (const MatFn& f : family) {
    const auto rows = f.row_view();
    for (int p = 0; p < s; ++p)
      for (int q = 0; q < s; ++q) atoms.row(row++).segment(p * n, n) = rows.row(q);
  }
  return atoms;
}

}  // namespace

LinOp frame_operator(const std::vector<MatFn>& family) {
  const SpaceSpec& spec = family_space(family, "frame_operator");
  // The analysis map sends f to its module coefficients against the atoms, so
  // synthesis-after-analysis is atoms^* conj(atoms) = (conj atoms)^adj (conj atoms).
  const Eigen::MatrixXcd analysis = module_atoms(family).conjugate();
  return LinOp(spec, analysis.adjoint() * analysis, OpKind::module_map);
}

std::pair<double, double> optimal_frame_bounds(const std::vector<MatFn>& family) {
  const LinOp s = frame_operator(family);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
      0.5 * (s.matrix() + s.matrix().adjoint()), Eigen::EigenvaluesOnly);
  return {std::max(0.0, eig.eigenvalues().minCoeff()), eig.eigenvalues().maxCoeff()};
}

int completeness_defect(const std::vector<MatFn>& family) {
  const SpaceSpec& spec = family_space(family, "completeness_defect");
  const Eigen::VectorXd sv =
      Eigen::BDCSVD<Eigen::MatrixXcd>(module_atoms(family)).singularValues();
  const double cutoff = 1e-9 * sv.maxCoeff();
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > cutoff) ++rank;
  return spec.ambient_dim() - rank;
}

double coefficient_energy(const MatFn& f, const std::vector<MatFn>& family) {
  family_space(family, "coefficient_energy");
  double energy = 0.0;
  for (const MatFn& fk : family) energy += mat_inner(f, fk).squaredNorm();
  return energy;
}

FrameReport analyze_family(const std::vector<MatFn>& family) {
  const SpaceSpec& spec = family_space(family, "analyze_family");
  FrameReport report;

  const LinOp s = frame_operator(family);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(
      0.5 * (s.matrix() + s.matrix().adjoint()));
  report.lower_bound = std::max(0.0, eig.eigenvalues().minCoeff());
  report.upper_bound = eig.eigenvalues().maxCoeff();
  report.is_frame = report.lower_bound > 1e-9 * report.upper_bound;
  report.completeness_defect = completeness_defect(family);
  report.parseval_distance = std::max(std::abs(report.lower_bound - 1.0),
                                      std::abs(report.upper_bound - 1.0));
  if (!report.is_frame) {
    int idx = 0;
    eig.eigenvalues().minCoeff(&idx);
    report.witness = MatFn(spec, eig.eigenvectors().col(idx));
  }
  return report;
}

std::pair<MatFn, double> reconstruct(const MatFn& f, const RieszBasis& rb) {
  if (!rb.has_dual())
    throw Error("reconstruct: dual basis has not been attached");
  if (!(f.space() == rb.onb.spec))
    throw DimensionError("reconstruct: probe lives in a different space");

  MatFn synth(f.space());
  for (size_t k = 0; k < rb.functions.size(); ++k) {
    const MatGram coeff = mat_inner(f, rb.dual_functions[k]);
    synth.coords() += left_mul(coeff, rb.functions[k]).coords();
  }
  const double err =
      (f.coords() - synth.coords()).norm() / std::max(frob_norm(f), 1e-300);
  return {std::move(synth), err};
}

RieszCheck verify_riesz(const RieszBasis& rb, double tol, std::uint64_t probe_seed,
                        double reconstruction_tol) {
  RieszCheck check;
  check.report = analyze_family(rb.functions);

  const Eigen::VectorXd sv = singular_values(rb.generator);
  const double smax = sv.maxCoeff();
  const double smin = sv.minCoeff();
  check.lower_limit = (1.0 - tol) * smin * smin;  // 1/||U^{-1}||^2 = smin^2
  check.upper_limit = (1.0 + tol) * smax * smax;
  check.bounds_ok = check.report.lower_bound >= check.lower_limit &&
                    check.report.upper_bound <= check.upper_limit;
  check.defect_ok = check.report.completeness_defect == 0;

  Rng rng(probe_seed);
  const MatFn probe = random_matfn(rng, rb.onb.spec);
  if (rb.has_dual()) {
    check.report.reconstruction_error = reconstruct(probe, rb).second;
  } else {
    RieszBasis with_dual = rb;
    dual_basis(with_dual);
    check.report.reconstruction_error = reconstruct(probe, with_dual).second;
  }
  check.reconstruction_ok = *check.report.reconstruction_error <= reconstruction_tol;
  check.passed = check.report.is_frame && check.bounds_ok && check.defect_ok &&
                 check.reconstruction_ok;
  return check;
}

}  // namespace mvframe
