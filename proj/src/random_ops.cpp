#include "mvframe/random_ops.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

namespace mvframe {

namespace {

Eigen::MatrixXcd gaussian_matrix(Rng& rng, int rows, int cols) {
  Eigen::MatrixXcd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = rng.complex_gaussian();
  return m;
}

Eigen::MatrixXcd clamp_singular_values(const Eigen::MatrixXcd& m, double smin,
                                       double smax) {
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues().cwiseMax(smin).cwiseMin(smax);
  return svd.matrixU() * sv.asDiagonal() * svd.matrixV().adjoint();
}

Eigen::MatrixXcd hermitian_from_spectrum(Rng& rng, int n,
                                         const Eigen::VectorXd& spectrum) {
  const Eigen::MatrixXcd q = random_unitary(rng, n);
  Eigen::MatrixXcd h = q * spectrum.asDiagonal() * q.adjoint();
  return 0.5 * (h + Eigen::MatrixXcd(h.adjoint()));
}

}  // namespace

MatFn random_matfn(Rng& rng, const SpaceSpec& spec) {
  Eigen::VectorXcd v(spec.ambient_dim());
  for (int a = 0; a < v.size(); ++a) v[a] = rng.complex_gaussian();
  return MatFn(spec, std::move(v));
}

Eigen::MatrixXcd random_unitary(Rng& rng, int n) {
  const Eigen::MatrixXcd g = gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  return qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
}

LinOp random_module_map(Rng& rng, const SpaceSpec& spec, double smin, double smax) {
  const int n = spec.row_block();
  return row_lift(spec, clamp_singular_values(gaussian_matrix(rng, n, n), smin, smax));
}

LinOp random_psd_module_map(Rng& rng, const SpaceSpec& spec, double lo, double hi,
                            double force_norm) {
  const int n = spec.row_block();
  Eigen::VectorXd spectrum(n);
  for (int i = 0; i < n; ++i) spectrum[i] = rng.uniform(lo, hi);
  if (force_norm > 0.0) {
    spectrum = spectrum.cwiseMin(force_norm);
    spectrum[0] = force_norm;
  }
  return row_lift(spec, hermitian_from_spectrum(rng, n, spectrum));
}

LinOp random_selfadjoint_module_map(Rng& rng, const SpaceSpec& spec, double extent) {
  const int n = spec.row_block();
  Eigen::VectorXd spectrum(n);
  for (int i = 0; i < n; ++i) spectrum[i] = rng.uniform(-extent, extent);
  return row_lift(spec, hermitian_from_spectrum(rng, n, spectrum));
}

LinOp random_general_op(Rng& rng, const SpaceSpec& spec, double smin, double smax) {
  const int d = spec.ambient_dim();
  return LinOp(spec, clamp_singular_values(gaussian_matrix(rng, d, d), smin, smax),
               OpKind::general);
}

}  // namespace mvframe
