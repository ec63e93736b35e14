// Test-only reference implementations, independent of the library's
// generator assembly: the master-equation right-hand side is evaluated on
// Hilbert-space matrices and flattened column by column.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "heod/liouville.hpp"

namespace heod::testing {

using Cmat = Eigen::MatrixXcd;

inline Cmat unflatten(const Eigen::VectorXcd& v, int d) {
  Cmat rho(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) rho(j, k) = v(j * d + k);
  return rho;
}

inline Eigen::VectorXcd flatten(const Cmat& rho) {
  const int d = static_cast<int>(rho.rows());
  Eigen::VectorXcd v(d * d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) v(j * d + k) = rho(j, k);
  return v;
}

/// d rho/dt = -i [H0 - mu E, rho] + eta sum_j (L rho L+ - 1/2 {L+L, rho}),
/// evaluated directly with dense matrix products.
inline Cmat master_equation_rhs(const LevelSystem& sys, double field, const Cmat& rho) {
  const int d = sys.dim;
  Cmat h = Cmat::Zero(d, d);
  for (int j = 0; j < d; ++j) h(j, j) = sys.energies[j];
  h -= field * sys.dipole.cast<std::complex<double>>();

  Cmat out = std::complex<double>(0.0, -1.0) * (h * rho - rho * h);
  for (const auto& ch : sys.channels) {
    Cmat l = Cmat::Zero(d, d);
    l(ch.to - 1, ch.from - 1) = std::sqrt(ch.rate);
    const Cmat ldag = l.adjoint();
    out += sys.eta * (l * rho * ldag - 0.5 * ldag * l * rho - 0.5 * rho * ldag * l);
  }
  return out;
}

/// Superoperator H with i d|rho>>/dt = H |rho>>, built by applying the
/// right-hand side to every basis matrix.
inline Eigen::MatrixXcd brute_force_liouvillian(const LevelSystem& sys, double field) {
  const int d = sys.dim;
  const int dd = d * d;
  Eigen::MatrixXcd h(dd, dd);
  for (int col = 0; col < dd; ++col) {
    Cmat basis = Cmat::Zero(d, d);
    basis(col / d, col % d) = 1.0;
    h.col(col) = std::complex<double>(0.0, 1.0) * flatten(master_equation_rhs(sys, field, basis));
  }
  return h;
}

}  // namespace heod::testing
