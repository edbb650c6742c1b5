#pragma once

// Two coupled, driven qubits with single-qubit loss. Each "qubit" is the
// {|f>, |e>} doublet of a driven three-level system conditioned on no decay
// to the ground state; the conditioning makes the Hamiltonian non-Hermitian.
//
// Basis conventions, fixed everywhere in this library:
//   single qubit: index 0 = |f>, index 1 = |e>
//   two qubits:   index 0 = |ff>, 1 = |fe>, 2 = |ef>, 3 = |ee>
//   sigma^- = |e><f|, sigma^+ = |f><e|, so sigma^+ sigma^- = |f><f|.

#include <array>
#include <vector>

#include "nhq/linalg.hpp"

namespace nhq {

struct SystemParams {
  double delta1 = 0.0, delta2 = 0.0;  // drive detuning, rad/us
  double gamma1 = 0.5, gamma2 = 0.5;  // decay rate to the ground state, 1/us
  double omega1 = 1.6, omega2 = 1.6;  // drive amplitude, rad/us
  double J = 10.0;                    // qubit-qubit exchange coupling, rad/us
  double alpha1 = 0.0, alpha2 = 0.0;  // |f> -> |e> relaxation rate, 1/us

  // Throws std::invalid_argument on negative rates or non-finite fields.
  void validate() const;

  void set_gamma(double g) { gamma1 = gamma2 = g; }
  void set_omega(double w) { omega1 = omega2 = w; }
  void set_alpha(double a) { alpha1 = alpha2 = a; }
  void set_delta(double d) { delta1 = delta2 = d; }
};

inline constexpr std::array<const char*, 4> kBasisLabels = {"ff", "fe", "ef", "ee"};

ComplexMat sigma_minus();  // |e><f|
ComplexMat sigma_plus();   // |f><e|
ComplexMat sigma_x();
ComplexMat sigma_y();

// Single-qubit Hamiltonian (Delta - i gamma/2)|f><f| + Omega sigma^x.
ComplexMat build_single_qubit_h(double delta, double gamma, double omega);

// H = H1 (x) I + I (x) H2 + J (sigma1^+ sigma2^- + sigma1^- sigma2^+).
// The exchange term couples only |fe> <-> |ef>.
ComplexMat build_total_h(const SystemParams& p);

// Jump operators [sqrt(alpha1) |e><f| (x) I, sqrt(alpha2) I (x) |e><f|].
std::vector<ComplexMat> build_jump_ops(const SystemParams& p);

ComplexVec basis_state(int index);  // |ff>, |fe>, |ef>, |ee> by index

}  // namespace nhq
