#include "nhq/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

namespace nhq {

EigenDecomposition eig(const ComplexMat& A) {
  if (A.rows() != A.cols()) throw std::invalid_argument("eig: matrix must be square");
  if (!A.allFinite()) throw std::invalid_argument("eig: matrix has non-finite entries");

  const auto n = A.rows();
  Eigen::ComplexEigenSolver<ComplexMat> solver(A, /*computeEigenvectors=*/true);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "eig: QR iteration failed to converge on " << n << "x" << n << " matrix";
    throw NumericalError(msg.str());
  }

  ComplexVec values = solver.eigenvalues();
  ComplexMat vectors = solver.eigenvectors();

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (values[a].real() != values[b].real()) return values[a].real() < values[b].real();
    return values[a].imag() < values[b].imag();
  });

  EigenDecomposition d;
  d.eigenvalues.resize(n);
  d.right_eigenvectors.resize(n, n);
  d.residuals.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    d.eigenvalues[k] = values[order[static_cast<size_t>(k)]];
    ComplexVec v = vectors.col(order[static_cast<size_t>(k)]);
    v.normalize();
    // Phase convention: largest-|entry| component real and positive.
    Eigen::Index imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    const Complex pivot = v[imax];
    if (std::abs(pivot) > 0.0) v *= std::conj(pivot) / std::abs(pivot);
    d.right_eigenvectors.col(k) = v;
    d.residuals[k] = (A * v - d.eigenvalues[k] * v).norm();
  }
  return d;
}

ComplexMat expm(const ComplexMat& A, double t) {
  if (A.rows() != A.cols()) throw std::invalid_argument("expm: matrix must be square");

  const auto n = A.rows();
  ComplexMat M = A * t;
  if (!M.allFinite()) throw NumericalError("expm: non-finite input");

  // Higham scaling-and-squaring, [13/13] Pade.
  static const double b[] = {
      6.4764752532480000e16, 3.2382376266240000e16, 7.7717703038976000e15,
      1.1873537964288000e15, 1.2906019526400000e14, 1.0559470521600000e13,
      6.7044257280000000e11, 3.3522128640000000e10, 1.3232419200000000e9,
      4.0840800000000000e7,  9.6096000000000000e5,  1.6380000000000000e4,
      1.8200000000000000e2,  1.0};
  const double theta13 = 5.371920351148152;

  const double norm1 = M.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm1 > theta13) {
    squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
    if (squarings > 1000) throw NumericalError("expm: norm too large, result would overflow");
    M /= std::pow(2.0, squarings);
  }

  const ComplexMat I = ComplexMat::Identity(n, n);
  const ComplexMat M2 = M * M;
  const ComplexMat M4 = M2 * M2;
  const ComplexMat M6 = M4 * M2;
  const ComplexMat U =
      M * (M6 * (b[13] * M6 + b[11] * M4 + b[9] * M2) + b[7] * M6 + b[5] * M4 + b[3] * M2 + b[1] * I);
  const ComplexMat V =
      M6 * (b[12] * M6 + b[10] * M4 + b[8] * M2) + b[6] * M6 + b[4] * M4 + b[2] * M2 + b[0] * I;

  ComplexMat R = (V - U).partialPivLu().solve(V + U);
  for (int s = 0; s < squarings; ++s) R = R * R;
  if (!R.allFinite()) throw NumericalError("expm: overflow during evaluation");
  return R;
}

ComplexMat kron(const ComplexMat& A, const ComplexMat& B) {
  if (A.rows() != A.cols() || B.rows() != B.cols())
    throw std::invalid_argument("kron: both factors must be square");
  const auto n = A.rows() * B.rows();
  if (n > 16) throw std::invalid_argument("kron: result exceeds the 16x16 design envelope");

  ComplexMat K(n, n);
  for (Eigen::Index i = 0; i < A.rows(); ++i)
    for (Eigen::Index j = 0; j < A.cols(); ++j)
      K.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
  return K;
}

}  // namespace nhq
