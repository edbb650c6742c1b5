#pragma once

// Seeded random states and operators shared by the unit suites.

#include <random>

#include <Eigen/QR>

#include "nhq/linalg.hpp"

namespace nhq::test {

inline Complex rand_c(std::mt19937& rng) {
  std::normal_distribution<double> n;
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

inline ComplexMat random_matrix(int n, std::mt19937& rng) {
  ComplexMat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = rand_c(rng);
  return a;
}

inline ComplexVec random_state(int n, std::mt19937& rng) {
  ComplexVec v(n);
  for (int i = 0; i < n; ++i) v[i] = rand_c(rng);
  return v / v.norm();
}

inline ComplexMat random_unitary(int n, std::mt19937& rng) {
  Eigen::HouseholderQR<ComplexMat> qr(random_matrix(n, rng));
  return qr.householderQ() * ComplexMat::Identity(n, n);
}

// Convex mixture of n random projectors; Hermitian and unit trace by
// construction, PSD up to rounding.
inline ComplexMat random_density(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> u(0.1, 1.0);
  ComplexMat rho = ComplexMat::Zero(n, n);
  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    const ComplexVec v = random_state(n, rng);
    const double w = u(rng);
    rho += w * (v * v.adjoint());
    total += w;
  }
  rho /= total;
  return 0.5 * (rho + rho.adjoint());
}

}  // namespace nhq::test
