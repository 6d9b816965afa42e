#pragma once

#include "mvframe/operators.hpp"
#include "mvframe/rng.hpp"

namespace mvframe {

MatFn random_matfn(Rng& rng, const SpaceSpec& spec);

Eigen::MatrixXcd random_unitary(Rng& rng, int n);

// Complex Gaussian block with singular values clamped into [smin, smax],
// lifted to all rows: bijective and matrix-adjointable by construction.
LinOp random_module_map(Rng& rng, const SpaceSpec& spec, double smin = 0.2,
                        double smax = 5.0);

// Q diag(lambda) Q^* with lambda uniform in [lo, hi], lifted to all rows.
// When force_norm is positive the largest eigenvalue is pinned to it.
LinOp random_psd_module_map(Rng& rng, const SpaceSpec& spec, double lo,
                            double hi, double force_norm = 0.0);

// Hermitian spectrum uniform in [-extent, extent], lifted to all rows.
LinOp random_selfadjoint_module_map(Rng& rng, const SpaceSpec& spec,
                                    double extent = 1.0);

// Dense D x D complex Gaussian with singular values clamped into [smin, smax];
// generally NOT a module map.
LinOp random_general_op(Rng& rng, const SpaceSpec& spec, double smin = 0.2,
                        double smax = 5.0);

}  // namespace mvframe
