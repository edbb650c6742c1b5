#pragma once

// Dense complex linear algebra for the small systems handled here: 2x2 and
// 4x4 operators, 16x16 superoperators. Eigendecomposition is reported with
// explicit residuals because near-defective matrices (close to an exceptional
// point) are a normal operating regime, not an error.

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace nhq {

using Complex = std::complex<double>;
using ComplexMat = Eigen::MatrixXcd;
using ComplexVec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

// Numerical breakdown (non-convergence, overflow, step underflow, full decay
// where a result was still required). Distinct from invalid inputs, which
// raise std::invalid_argument.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EigenDecomposition {
  ComplexVec eigenvalues;        // sorted by (Re, Im) ascending
  ComplexMat right_eigenvectors; // unit-norm columns, phase-fixed
  RealVec residuals;             // ||A v_i - lambda_i v_i||_2 per pair
};

// All eigenpairs of a square complex matrix. Deterministic: eigenvalues are
// sorted lexicographically by (Re, Im) and each eigenvector is rotated so its
// largest-magnitude component is real and positive.
EigenDecomposition eig(const ComplexMat& A);

// e^{A t} by scaling-and-squaring with a degree-13 Pade approximant.
// Throws NumericalError if the result overflows.
ComplexMat expm(const ComplexMat& A, double t = 1.0);

// Kronecker product. The design envelope is 16x16; larger results are
// rejected.
ComplexMat kron(const ComplexMat& A, const ComplexMat& B);

}  // namespace nhq
