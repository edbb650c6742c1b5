#include "nhq/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include "nhq/model.hpp"

namespace nhq {

namespace {
double clamp_unit(double c) { return std::min(1.0, std::max(0.0, c)); }
}  // namespace

double concurrence_pure(const ComplexVec& psi) {
  if (psi.size() != 4) throw std::invalid_argument("concurrence_pure: state must have 4 amplitudes");
  return clamp_unit(2.0 * std::abs(psi[0] * psi[3] - psi[1] * psi[2]));
}

ComplexMat spin_flip() { return kron(sigma_y(), sigma_y()); }

double concurrence_mixed(const ComplexMat& rho) {
  if (rho.rows() != 4 || rho.cols() != 4)
    throw std::invalid_argument("concurrence_mixed: density matrix must be 4x4");
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-8)
    throw std::invalid_argument("concurrence_mixed: input not Hermitian");
  if (std::abs(rho.trace().real() - 1.0) > 1e-6 || std::abs(rho.trace().imag()) > 1e-9)
    throw std::invalid_argument("concurrence_mixed: input not unit trace");

  Eigen::SelfAdjointEigenSolver<ComplexMat> psd(0.5 * (rho + rho.adjoint()));
  if (psd.eigenvalues().minCoeff() < -1e-8)
    throw NumericalError("concurrence_mixed: input not positive semidefinite");

  // Factor rho = L L^dag with the eigenvalue dust clamped. The Wootters
  // lambdas, the root-eigenvalues of rho S rho* S, equal the singular values
  // of Y = L^T S L: that product is similar (up to zero padding) to
  // conj(Y) Y = Y^dag Y because Y is complex symmetric. Going through the
  // SVD keeps the near-zero lambdas at rounding scale instead of
  // sqrt(rounding), which the direct eigenvalue route cannot do.
  ComplexMat L = psd.eigenvectors();
  for (int i = 0; i < 4; ++i) L.col(i) *= std::sqrt(std::max(0.0, psd.eigenvalues()[i]));

  const ComplexMat Y = L.transpose() * spin_flip() * L;
  const Eigen::JacobiSVD<ComplexMat> svd(Y);
  const RealVec& lam = svd.singularValues();  // sorted descending
  return clamp_unit(lam[0] - lam[1] - lam[2] - lam[3]);
}

}  // namespace nhq
