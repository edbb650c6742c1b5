#include "nhq/spectrum.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

#include "nhq/entanglement.hpp"

namespace nhq {

namespace {

// Deterministic parallel map: worker threads pull indices from a shared
// counter and write into preassigned slots.
void parallel_for(int n, const std::function<void(int)>& body) {
  const int workers =
      std::max(1, std::min<int>(static_cast<int>(std::thread::hardware_concurrency()), n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  for (auto& th : pool) th.join();
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  std::vector<double> g(static_cast<size_t>(n));
  for (int k = 0; k < n; ++k) g[static_cast<size_t>(k)] = lo + (hi - lo) * k / (n - 1);
  return g;
}

PhaseLabel label_at_gamma(const SystemParams& p_template, double gamma, double epsilon) {
  SystemParams p = p_template;
  p.set_gamma(gamma);
  return classify_phase(analyze(p), epsilon);
}

}  // namespace

SpectrumResult analyze(const SystemParams& p) {
  SpectrumResult s;
  s.params = p;
  EigenDecomposition d = eig(build_total_h(p));
  s.eigenvalues = d.eigenvalues;
  s.eigenvectors = d.right_eigenvectors;
  s.residuals = d.residuals;

  double im_lo = s.eigenvalues[0].imag(), im_hi = im_lo;
  double gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    im_lo = std::min(im_lo, s.eigenvalues[i].imag());
    im_hi = std::max(im_hi, s.eigenvalues[i].imag());
    for (int j = i + 1; j < 4; ++j) gap = std::min(gap, std::abs(s.eigenvalues[i] - s.eigenvalues[j]));
  }
  s.max_im_spread = im_hi - im_lo;
  s.min_gap = gap;
  return s;
}

PhaseLabel classify_phase(const SpectrumResult& s, double epsilon) {
  if (!(epsilon > 0)) throw std::invalid_argument("classify_phase: epsilon must be positive");
  return {s.max_im_spread < epsilon, s.max_im_spread};
}

EpResult find_ep(const SystemParams& p_template, double gamma_lo, double gamma_hi, double tol,
                 double epsilon) {
  if (!(gamma_lo < gamma_hi)) throw std::invalid_argument("find_ep: bracket reversed or empty");
  if (!(tol > 0)) throw std::invalid_argument("find_ep: tolerance must be positive");
  if (!label_at_gamma(p_template, gamma_lo, epsilon).unbroken)
    throw std::invalid_argument("find_ep: lower bracket end is not in the unbroken phase");
  if (label_at_gamma(p_template, gamma_hi, epsilon).unbroken)
    throw std::invalid_argument("find_ep: upper bracket end is not in the broken phase");

  EpResult r;
  double lo = gamma_lo, hi = gamma_hi;
  while (hi - lo >= tol) {
    const double mid = 0.5 * (lo + hi);
    if (label_at_gamma(p_template, mid, epsilon).unbroken)
      lo = mid;
    else
      hi = mid;
    ++r.iterations;
  }
  r.gamma_ep = 0.5 * (lo + hi);

  SystemParams p = p_template;
  p.set_gamma(r.gamma_ep);
  r.min_gap = analyze(p).min_gap;
  return r;
}

PhaseDiagram sweep_phase_diagram(const SystemParams& p_template, double omega_lo, double omega_hi,
                                 int n_omega, double gamma_lo, double gamma_hi, int n_gamma) {
  if (!(omega_lo >= 0) || !(gamma_lo >= 0) || !(omega_hi > omega_lo) || !(gamma_hi > gamma_lo))
    throw std::invalid_argument("sweep_phase_diagram: ranges must be non-negative and increasing");
  if (n_omega < 2 || n_gamma < 2)
    throw std::invalid_argument("sweep_phase_diagram: resolution must be at least 2 per axis");

  PhaseDiagram pd;
  pd.omegas = linear_grid(omega_lo, omega_hi, n_omega);
  pd.gammas = linear_grid(gamma_lo, gamma_hi, n_gamma);
  pd.labels.assign(static_cast<size_t>(n_omega) * static_cast<size_t>(n_gamma), -1);
  std::vector<std::optional<double>> boundary(static_cast<size_t>(n_omega));

  parallel_for(n_omega, [&](int io) {
    SystemParams col = p_template;
    col.set_omega(pd.omegas[static_cast<size_t>(io)]);
    for (int ig = 0; ig < n_gamma; ++ig) {
      SystemParams p = col;
      p.set_gamma(pd.gammas[static_cast<size_t>(ig)]);
      try {
        pd.labels[static_cast<size_t>(io) * static_cast<size_t>(n_gamma) + static_cast<size_t>(ig)] =
            classify_phase(analyze(p)).unbroken ? 1 : 0;
      } catch (const NumericalError&) {
        // leave the cell unclassified; the sweep carries on
      }
    }
    try {
      if (label_at_gamma(col, gamma_lo, kPhaseEpsilon).unbroken &&
          !label_at_gamma(col, gamma_hi, kPhaseEpsilon).unbroken)
        boundary[static_cast<size_t>(io)] = find_ep(col, gamma_lo, gamma_hi).gamma_ep;
    } catch (const NumericalError&) {
    }
  });

  for (int io = 0; io < n_omega; ++io)
    if (boundary[static_cast<size_t>(io)])
      pd.ep_boundary.emplace_back(pd.omegas[static_cast<size_t>(io)], *boundary[static_cast<size_t>(io)]);
  return pd;
}

SpectralExpansion expand_in_basis(const ComplexVec& eigenvalues, const ComplexMat& eigenvectors,
                                  const ComplexVec& psi0) {
  if (eigenvectors.rows() != eigenvectors.cols() || eigenvectors.rows() != psi0.size() ||
      eigenvalues.size() != psi0.size())
    throw std::invalid_argument("expand_in_basis: dimension mismatch");

  Eigen::JacobiSVD<ComplexMat> svd(eigenvectors);
  const double smin = svd.singularValues().minCoeff();
  const double smax = svd.singularValues().maxCoeff();
  const double cond = (smin > 0) ? smax / smin : std::numeric_limits<double>::infinity();
  if (!(cond < kMaxEigenbasisCond)) {
    std::ostringstream msg;
    msg << "expand_in_basis: eigenbasis condition number " << cond
        << " exceeds " << kMaxEigenbasisCond << " (too close to an exceptional point)";
    throw NumericalError(msg.str());
  }

  SpectralExpansion e;
  e.eigenvalues = eigenvalues;
  e.eigenvectors = eigenvectors;
  e.coefficients = eigenvectors.fullPivLu().solve(psi0);
  return e;
}

SpectralExpansion expand_initial_state(const SystemParams& p, const ComplexVec& psi0) {
  const SpectrumResult s = analyze(p);
  return expand_in_basis(s.eigenvalues, s.eigenvectors, psi0);
}

ComplexVec spectral_state(const SpectralExpansion& e, double t) {
  ComplexVec psi = ComplexVec::Zero(e.eigenvectors.rows());
  for (Eigen::Index n = 0; n < e.eigenvalues.size(); ++n)
    psi += e.coefficients[n] * std::exp(Complex(0, -1) * e.eigenvalues[n] * t) *
           e.eigenvectors.col(n);
  return psi;
}

double steady_state_concurrence(const SystemParams& p) { return steady_state_concurrence(p, basis_state(0)); }

double steady_state_concurrence(const SystemParams& p, const ComplexVec& psi0) {
  const SpectrumResult s = analyze(p);
  if (classify_phase(s).unbroken)
    throw std::invalid_argument(
        "steady_state_concurrence: unbroken phase has no single surviving eigenstate");

  const SpectralExpansion e = expand_in_basis(s.eigenvalues, s.eigenvectors, psi0);
  int best = -1;
  double best_im = 0.0;
  for (int n = 0; n < 4; ++n) {
    if (std::abs(e.coefficients[n]) < kParticipationCutoff) continue;
    const double im = s.eigenvalues[n].imag();
    if (best < 0 || im > best_im) {
      best = n;
      best_im = im;
    }
  }
  if (best < 0)
    throw NumericalError("steady_state_concurrence: initial state overlaps no eigenstate");

  // Uniqueness margin: a tie in the slowest decay rate means no steady state.
  double margin = std::numeric_limits<double>::infinity();
  for (int n = 0; n < 4; ++n) {
    if (n == best || std::abs(e.coefficients[n]) < kParticipationCutoff) continue;
    margin = std::min(margin, best_im - s.eigenvalues[n].imag());
  }
  if (margin < 1e-6)
    throw NumericalError("steady_state_concurrence: degenerate slowest decay rate, no unique steady state");

  return concurrence_pure(s.eigenvectors.col(best));
}

}  // namespace nhq
