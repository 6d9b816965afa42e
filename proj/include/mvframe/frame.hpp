#pragma once

#include <optional>
#include <vector>

#include "mvframe/riesz.hpp"

namespace mvframe {

struct FrameReport {
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  bool is_frame = false;
  int completeness_defect = 0;
  double parseval_distance = 0.0;
  std::optional<double> reconstruction_error;
  std::optional<MatFn> witness;  // near-null direction when the family fails
};

// S f = sum_k <f, F_k> F_k (coefficient acting by left multiplication);
// Hermitian PSD by construction.
LinOp frame_operator(const std::vector<MatFn>& family);

// Extreme eigenvalues of the frame operator: the optimal constants of the
// frame inequality.
std::pair<double, double> optimal_frame_bounds(const std::vector<MatFn>& family);

// Ambient dimension minus the rank of {E_pq F_k} over all matrix units and
// family members (singular values, 1e-9 relative threshold).
int completeness_defect(const std::vector<MatFn>& family);

// sum_k ||<f, F_k>||_F^2.
double coefficient_energy(const MatFn& f, const std::vector<MatFn>& family);

// Bounds, defect, Parseval distance and witness for an arbitrary family.
FrameReport analyze_family(const std::vector<MatFn>& family);

// Synthesis with the dual coefficients; relative error in the second slot.
std::pair<MatFn, double> reconstruct(const MatFn& f, const RieszBasis& rb);

struct RieszCheck {
  FrameReport report;
  double lower_limit = 0.0;  // (1 - tol) / ||U^{-1}||^2
  double upper_limit = 0.0;  // (1 + tol) * ||U||^2
  bool bounds_ok = false;
  bool defect_ok = false;
  bool reconstruction_ok = false;
  bool passed = false;
};

// Full report for a Riesz basis: bounds inside the generator's singular-value
// interval, zero defect, and reconstruction of a seeded random probe.
RieszCheck verify_riesz(const RieszBasis& rb, double tol = 1e-8,
                        std::uint64_t probe_seed = 0x5eedf00d,
                        double reconstruction_tol = 1e-8);

}  // namespace mvframe
