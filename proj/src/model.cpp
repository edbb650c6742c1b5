#include "nhq/model.hpp"

#include <cmath>

namespace nhq {

namespace {
bool all_finite(const SystemParams& p) {
  for (double v : {p.delta1, p.delta2, p.gamma1, p.gamma2, p.omega1, p.omega2, p.J, p.alpha1, p.alpha2})
    if (!std::isfinite(v)) return false;
  return true;
}
}  // namespace

void SystemParams::validate() const {
  if (!all_finite(*this)) throw std::invalid_argument("SystemParams: non-finite field");
  if (gamma1 < 0 || gamma2 < 0) throw std::invalid_argument("SystemParams: gamma must be >= 0");
  if (alpha1 < 0 || alpha2 < 0) throw std::invalid_argument("SystemParams: alpha must be >= 0");
}

ComplexMat sigma_minus() {
  ComplexMat s = ComplexMat::Zero(2, 2);
  s(1, 0) = 1.0;
  return s;
}

ComplexMat sigma_plus() { return sigma_minus().adjoint(); }

ComplexMat sigma_x() {
  ComplexMat s = ComplexMat::Zero(2, 2);
  s(0, 1) = s(1, 0) = 1.0;
  return s;
}

ComplexMat sigma_y() {
  ComplexMat s = ComplexMat::Zero(2, 2);
  s(0, 1) = Complex(0, -1);
  s(1, 0) = Complex(0, 1);
  return s;
}

ComplexMat build_single_qubit_h(double delta, double gamma, double omega) {
  ComplexMat h = ComplexMat::Zero(2, 2);
  h(0, 0) = Complex(delta, -0.5 * gamma);  // (Delta - i gamma/2) |f><f|
  h(0, 1) = h(1, 0) = omega;
  return h;
}

ComplexMat build_total_h(const SystemParams& p) {
  p.validate();
  const ComplexMat I2 = ComplexMat::Identity(2, 2);
  const ComplexMat h1 = build_single_qubit_h(p.delta1, p.gamma1, p.omega1);
  const ComplexMat h2 = build_single_qubit_h(p.delta2, p.gamma2, p.omega2);
  ComplexMat H = kron(h1, I2) + kron(I2, h2);
  H += p.J * (kron(sigma_plus(), sigma_minus()) + kron(sigma_minus(), sigma_plus()));
  return H;
}

std::vector<ComplexMat> build_jump_ops(const SystemParams& p) {
  p.validate();
  const ComplexMat I2 = ComplexMat::Identity(2, 2);
  return {std::sqrt(p.alpha1) * kron(sigma_minus(), I2),
          std::sqrt(p.alpha2) * kron(I2, sigma_minus())};
}

ComplexVec basis_state(int index) {
  if (index < 0 || index > 3) throw std::invalid_argument("basis_state: index out of range");
  ComplexVec v = ComplexVec::Zero(4);
  v[index] = 1.0;
  return v;
}

}  // namespace nhq
