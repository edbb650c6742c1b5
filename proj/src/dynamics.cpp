#include "nhq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nhq/entanglement.hpp"

namespace nhq {

std::vector<double> uniform_grid(double t_max, int n_samples) {
  if (!(t_max > 0)) throw std::invalid_argument("uniform_grid: t_max must be positive");
  if (n_samples < 2) throw std::invalid_argument("uniform_grid: need at least 2 samples");
  std::vector<double> t(static_cast<size_t>(n_samples));
  for (int k = 0; k < n_samples; ++k) t[static_cast<size_t>(k)] = t_max * k / (n_samples - 1);
  return t;
}

ComplexVec normalize(const ComplexVec& psi) {
  const double n = psi.norm();
  if (n <= 1e-12) throw NumericalError("normalize: state fully decayed (norm <= 1e-12)");
  return psi / n;
}

std::array<double, 4> populations(const ComplexVec& normalized_psi) {
  std::array<double, 4> p{};
  for (int k = 0; k < 4; ++k) p[static_cast<size_t>(k)] = std::norm(normalized_psi[k]);
  return p;
}

std::array<double, 4> populations(const ComplexMat& normalized_rho) {
  std::array<double, 4> p{};
  for (int k = 0; k < 4; ++k) p[static_cast<size_t>(k)] = normalized_rho(k, k).real();
  return p;
}

namespace {

void check_grid(const std::vector<double>& t) {
  if (t.empty()) throw std::invalid_argument("evolve: empty time grid");
  if (t.front() != 0.0) throw std::invalid_argument("evolve: time grid must start at 0");
  for (size_t k = 1; k < t.size(); ++k)
    if (t[k] <= t[k - 1]) throw std::invalid_argument("evolve: time grid must be strictly increasing");
}

// Propagator cache: consecutive equal steps reuse one matrix exponential.
class StepPropagator {
 public:
  explicit StepPropagator(const ComplexMat& generator) : gen_(generator) {}
  const ComplexMat& at(double dt) {
    if (!have_ || std::abs(dt - dt_) > 1e-15 * std::max(std::abs(dt), std::abs(dt_))) {
      prop_ = expm(gen_, dt);
      dt_ = dt;
      have_ = true;
    }
    return prop_;
  }

 private:
  ComplexMat gen_, prop_;
  double dt_ = 0.0;
  bool have_ = false;
};

}  // namespace

// Dormand-Prince 5(4) with FSAL and a standard PI-free step controller.
ComplexVec integrate_dopri5(const ComplexMat& generator, ComplexVec y, double t0, double t1,
                            double rel_tol, double abs_tol) {
  // Stage abscissae are omitted: the generator is time-independent.
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                          a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                          a64 = 49.0 / 176, a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  // b - b*: weights of the embedded error estimate.
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

  if (!(t1 > t0)) throw std::invalid_argument("integrate_dopri5: t1 must exceed t0");

  double t = t0;
  double h = (t1 - t0) / 100.0;
  ComplexVec k1 = generator * y;
  long steps = 0;

  while (t < t1) {
    if (h < 1e-14 * std::max(1.0, std::abs(t)) || ++steps > 20'000'000) {
      std::ostringstream msg;
      msg << "integrate_dopri5: step size underflow, last good time t=" << t;
      throw NumericalError(msg.str());
    }
    h = std::min(h, t1 - t);

    const ComplexVec k2 = generator * (y + h * (a21 * k1));
    const ComplexVec k3 = generator * (y + h * (a31 * k1 + a32 * k2));
    const ComplexVec k4 = generator * (y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const ComplexVec k5 = generator * (y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const ComplexVec k6 = generator * (y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const ComplexVec y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const ComplexVec k7 = generator * y5;
    const ComplexVec err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

    double sum = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double scale = abs_tol + rel_tol * std::max(std::abs(y[i]), std::abs(y5[i]));
      const double q = std::abs(err[i]) / scale;
      sum += q * q;
    }
    const double enorm = std::sqrt(sum / static_cast<double>(y.size()));

    if (std::isfinite(enorm) && enorm <= 1.0) {
      t += h;
      y = y5;
      k1 = k7;  // FSAL
      const double grow = (enorm == 0.0) ? 5.0 : std::min(5.0, 0.9 * std::pow(enorm, -0.2));
      h *= std::max(0.2, grow);
    } else {
      const double shrink = std::isfinite(enorm) ? std::max(0.2, 0.9 * std::pow(enorm, -0.2)) : 0.2;
      h *= std::min(1.0, shrink);
    }
  }
  return y;
}

Trajectory evolve_pure(const ComplexMat& H, const ComplexVec& psi0,
                       const std::vector<double>& t_grid, Method method) {
  if (H.rows() != 4 || H.cols() != 4) throw std::invalid_argument("evolve_pure: H must be 4x4");
  if (psi0.size() != 4) throw std::invalid_argument("evolve_pure: psi0 must have 4 amplitudes");
  if (std::abs(psi0.norm() - 1.0) > 1e-6)
    throw std::invalid_argument("evolve_pure: psi0 must be normalized");
  check_grid(t_grid);

  const ComplexMat gen = Complex(0, -1) * H;
  StepPropagator prop(gen);

  Trajectory traj;
  ComplexVec psi = psi0;
  for (size_t k = 0; k < t_grid.size(); ++k) {
    if (k > 0) {
      const double dt = t_grid[k] - t_grid[k - 1];
      if (method == Method::exact)
        psi = prop.at(dt) * psi;
      else
        psi = integrate_dopri5(gen, psi, t_grid[k - 1], t_grid[k]);
    }
    const double n = psi.norm();
    if (n * n < kDecayCutoff) {
      traj.truncated = true;
      break;
    }
    const ComplexVec tilde = psi / n;
    traj.times.push_back(t_grid[k]);
    traj.states.push_back(psi);
    traj.populations.push_back(populations(tilde));
    traj.weight.push_back(n);
    traj.concurrence.push_back(concurrence_pure(tilde));
  }
  return traj;
}

ComplexMat lindblad_superoperator(const ComplexMat& H, const std::vector<ComplexMat>& jumps) {
  const auto n = H.rows();
  if (n != H.cols()) throw std::invalid_argument("lindblad_superoperator: H must be square");
  const ComplexMat I = ComplexMat::Identity(n, n);

  // Column-stacking: vec(A rho B) = (B^T (x) A) vec(rho).
  ComplexMat L = Complex(0, -1) * (kron(I, H) - kron(H.conjugate(), I));
  for (const ComplexMat& G : jumps) {
    if (G.rows() != n || G.cols() != n)
      throw std::invalid_argument("lindblad_superoperator: jump operator dimension mismatch");
    const ComplexMat GdG = G.adjoint() * G;
    L += kron(G.conjugate(), G) - 0.5 * kron(I, GdG) - 0.5 * kron(GdG.conjugate(), I);
  }
  return L;
}

namespace {

ComplexVec vec_of(const ComplexMat& rho) {
  ComplexVec v(16);
  for (Eigen::Index j = 0; j < 4; ++j)
    for (Eigen::Index i = 0; i < 4; ++i) v[4 * j + i] = rho(i, j);
  return v;
}

ComplexMat mat_of(const ComplexVec& v) {
  ComplexMat rho(4, 4);
  for (Eigen::Index j = 0; j < 4; ++j)
    for (Eigen::Index i = 0; i < 4; ++i) rho(i, j) = v[4 * j + i];
  return rho;
}

}  // namespace

Trajectory evolve_master(const ComplexMat& H, const std::vector<ComplexMat>& jumps,
                         const ComplexMat& rho0, const std::vector<double>& t_grid,
                         Method method) {
  if (rho0.rows() != 4 || rho0.cols() != 4)
    throw std::invalid_argument("evolve_master: rho0 must be 4x4");
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("evolve_master: rho0 must be Hermitian");
  if (std::abs(rho0.trace().real() - 1.0) > 1e-9)
    throw std::invalid_argument("evolve_master: rho0 must have unit trace");
  check_grid(t_grid);

  const ComplexMat L = lindblad_superoperator(H, jumps);
  StepPropagator prop(L);

  Trajectory traj;
  ComplexVec v = vec_of(rho0);
  for (size_t k = 0; k < t_grid.size(); ++k) {
    if (k > 0) {
      const double dt = t_grid[k] - t_grid[k - 1];
      if (method == Method::exact)
        v = prop.at(dt) * v;
      else
        v = integrate_dopri5(L, v, t_grid[k - 1], t_grid[k]);
    }
    ComplexMat rho = mat_of(v);
    // Shed roundoff skew before derived quantities. The eval() is load-bearing:
    // assigning an adjoint-of-self expression back into rho would alias.
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double P = rho.trace().real();
    if (P < kDecayCutoff) {
      traj.truncated = true;
      break;
    }
    const ComplexMat tilde = rho / P;
    traj.times.push_back(t_grid[k]);
    traj.rhos.push_back(rho);
    traj.populations.push_back(populations(tilde));
    traj.weight.push_back(P);
    traj.concurrence.push_back(concurrence_mixed(tilde));
  }
  return traj;
}

}  // namespace nhq
