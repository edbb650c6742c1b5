#pragma once

// Two-qubit concurrence: 2|alpha*eta - beta*zeta| for pure states, the
// Wootters spin-flip eigenvalue formula for density matrices. Results are
// clamped to [0, 1]; on valid inputs the clamp never moves a value by more
// than ~1e-9 of floating-point dust.

#include "nhq/linalg.hpp"

namespace nhq {

// Expects a unit-norm 4-amplitude state over {|ff>,|fe>,|ef>,|ee>}.
double concurrence_pure(const ComplexVec& psi);

// Expects a Hermitian, positive-semidefinite, unit-trace 4x4 matrix.
// Returns max{ l1 - l2 - l3 - l4, 0 } where l1 >= ... >= l4 are the root
// eigenvalues of rho (sy(x)sy) rho* (sy(x)sy), computed as the singular
// values of L^T (sy(x)sy) L with rho = L L^dag for numerical stability.
// Throws NumericalError if rho is non-PSD beyond tolerance.
double concurrence_mixed(const ComplexMat& rho);

// sigma^y (x) sigma^y in the fixed basis ordering.
ComplexMat spin_flip();

}  // namespace nhq
