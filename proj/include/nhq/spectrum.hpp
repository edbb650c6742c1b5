#pragma once

// Complex-spectrum analysis of the two-qubit Hamiltonian. The PT-symmetric
// (unbroken) phase is recognized by all four eigenvalue imaginary parts
// coinciding; the broken phase by a split pair. The exceptional point is
// located by bisecting the phase label, which is a robust sign condition
// where the eigenvalue gap minimum is shallow and noisy.

#include <optional>
#include <utility>
#include <vector>

#include "nhq/linalg.hpp"
#include "nhq/model.hpp"

namespace nhq {

inline constexpr double kPhaseEpsilon = 1e-6;         // rad/us, Im-spread threshold
inline constexpr double kParticipationCutoff = 1e-10; // |c_n| below this: not participating
inline constexpr double kMaxEigenbasisCond = 1e6;     // expansion validity guard

struct SpectrumResult {
  SystemParams params;
  ComplexVec eigenvalues;  // sorted by (Re, Im) ascending
  ComplexMat eigenvectors; // unit columns, same order
  RealVec residuals;
  double max_im_spread = 0.0; // max pairwise |Im li - Im lj|
  double min_gap = 0.0;       // min pairwise |li - lj|
};

struct PhaseLabel {
  bool unbroken = false;
  double criterion = 0.0; // the Im spread the label was decided on
};

struct EpResult {
  double gamma_ep = 0.0;
  double min_gap = 0.0; // eigenvalue coalescence diagnostic at gamma_ep
  int iterations = 0;
};

struct PhaseDiagram {
  std::vector<double> omegas;
  std::vector<double> gammas;
  // labels[i_omega * gammas.size() + i_gamma]: 1 unbroken, 0 broken, -1 unclassified
  std::vector<int> labels;
  std::vector<std::pair<double, double>> ep_boundary; // (omega, gamma_ep)
};

struct SpectralExpansion {
  ComplexVec coefficients;
  ComplexVec eigenvalues;
  ComplexMat eigenvectors;
};

SpectrumResult analyze(const SystemParams& p);

PhaseLabel classify_phase(const SpectrumResult& s, double epsilon = kPhaseEpsilon);

// Bisects gamma (applied to both qubits) on the phase label until the bracket
// is narrower than tol. Requires unbroken at gamma_lo and broken at gamma_hi.
EpResult find_ep(const SystemParams& p_template, double gamma_lo, double gamma_hi,
                 double tol = 1e-6, double epsilon = kPhaseEpsilon);

// Classifies every (omega, gamma) cell and traces the EP boundary per omega
// column where the gamma range brackets a transition.
PhaseDiagram sweep_phase_diagram(const SystemParams& p_template, double omega_lo, double omega_hi,
                                 int n_omega, double gamma_lo, double gamma_hi, int n_gamma);

// Coefficients c with V c = psi0 in a given eigenbasis. Refuses bases with
// condition number >= 1e6: the expansion is invalid at an exceptional point,
// where the eigenvector matrix becomes singular.
SpectralExpansion expand_in_basis(const ComplexVec& eigenvalues, const ComplexMat& eigenvectors,
                                  const ComplexVec& psi0);

SpectralExpansion expand_initial_state(const SystemParams& p, const ComplexVec& psi0);

// sum_n c_n e^{-i lambda_n t} |lambda_n>, the eigenmode form of the evolved state.
ComplexVec spectral_state(const SpectralExpansion& e, double t);

// Concurrence of the slowest-decaying participating eigenstate, which the
// normalized state approaches at long times in the broken phase. psi0 selects
// which eigenstates participate; the default is |ff>.
double steady_state_concurrence(const SystemParams& p);
double steady_state_concurrence(const SystemParams& p, const ComplexVec& psi0);

}  // namespace nhq
