#pragma once

// Time evolution. Pure states follow d|psi>/dt = -i H |psi> with H
// non-Hermitian, so the norm decays; density matrices follow the hybrid
// master equation d rho/dt = -i(H rho - rho H^dag) + sum_j D[Gamma_j] rho,
// whose trace is the no-jump (post-selection) probability P(t).
//
// Two independent integration routes are kept on purpose: the exact
// propagator (matrix exponential per step, the default for time-independent
// H) and an adaptive Dormand-Prince RK step as a cross-check.

#include <array>
#include <vector>

#include "nhq/linalg.hpp"

namespace nhq {

enum class Method { exact, rk };

// Trajectories terminate early when norm^2 (pure) or trace (master) falls
// below this; normalized quantities are numerically meaningless beyond it.
inline constexpr double kDecayCutoff = 1e-12;

inline constexpr double kRkRelTol = 1e-9;
inline constexpr double kRkAbsTol = 1e-12;

struct Trajectory {
  std::vector<double> times;                      // us, strictly increasing
  std::vector<ComplexVec> states;                 // raw (unnormalized), pure runs
  std::vector<ComplexMat> rhos;                   // raw (trace-decaying), master runs
  std::vector<std::array<double, 4>> populations; // of the normalized state/matrix
  std::vector<double> weight;                     // norm ||psi|| (pure) or trace P (master)
  std::vector<double> concurrence;                // of the normalized state/matrix
  bool truncated = false;                         // decay cutoff reached before the grid end
};

std::vector<double> uniform_grid(double t_max, int n_samples);

// Unit-norm copy of psi. Throws NumericalError when ||psi|| <= 1e-12
// (state fully decayed). The global phase is left untouched.
ComplexVec normalize(const ComplexVec& psi);

std::array<double, 4> populations(const ComplexVec& normalized_psi);
std::array<double, 4> populations(const ComplexMat& normalized_rho);

Trajectory evolve_pure(const ComplexMat& H, const ComplexVec& psi0,
                       const std::vector<double>& t_grid, Method method = Method::exact);

// Lindblad generator as a 16x16 superoperator over column-stacked rho.
ComplexMat lindblad_superoperator(const ComplexMat& H, const std::vector<ComplexMat>& jumps);

Trajectory evolve_master(const ComplexMat& H, const std::vector<ComplexMat>& jumps,
                         const ComplexMat& rho0, const std::vector<double>& t_grid,
                         Method method = Method::exact);

// Adaptive Dormand-Prince 5(4) over a linear complex ODE y' = f(t, y).
// Throws NumericalError on step-size underflow, reporting the last good time.
ComplexVec integrate_dopri5(const ComplexMat& generator, ComplexVec y, double t0, double t1,
                            double rel_tol = kRkRelTol, double abs_tol = kRkAbsTol);

}  // namespace nhq
