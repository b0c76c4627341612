#include "mott/timeofflight.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <exception>
#include <numbers>
#include <sstream>

#include "mott/errors.hpp"
#include "mott/observables.hpp"

namespace mott {

void TofParams::validate() const {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("sigma must be positive");
  if (!(mass > 0.0) || !(hbar > 0.0) || !(lattice_constant > 0.0))
    throw ValidationError("mass, hbar and lattice constant must be positive");
  if (!(release_time >= 0.0) || !std::isfinite(release_time))
    throw ValidationError("release time must be finite and >= 0");
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw ValidationError("detection grid must be strictly increasing");
}

std::vector<double> default_grid(const TofParams& params, int points) {
  if (points < 2) throw ValidationError("grid needs at least two points");
  const double span = 1.5 * 2.0 * std::numbers::pi * params.hbar * params.release_time /
                      (params.mass * params.lattice_constant);
  std::vector<double> grid(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    grid[static_cast<std::size_t>(i)] = -span + 2.0 * span * i / (points - 1);
  return grid;
}

double tunneling_of_sigma(double sigma, double hbar, double mass, double a0) {
  return hbar * hbar / (mass * sigma) * std::exp(-a0 * a0 / (16.0 * sigma));
}

double solve_sigma(double t0, double hbar, double mass, double a0) {
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw ValidationError("solve_sigma requires t0 > 0");
  const double sigma_max = a0 * a0 / 16.0;
  const double t_max = tunneling_of_sigma(sigma_max, hbar, mass, a0);
  if (t0 > t_max * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "t0 = " << t0 << " exceeds the maximum " << t_max
        << " of t0(sigma) on the localized branch; supply sigma explicitly";
    throw BranchLimitError(msg.str());
  }
  double lo = sigma_max * 1e-8;
  double hi = sigma_max;
  for (int it = 0; it < 400 && hi - lo > 1e-13 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (tunneling_of_sigma(mid, hbar, mass, a0) < t0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double site_center(int site, int n_sites, double a0) { return (site - 0.5 * (n_sites - 1)) * a0; }

cplx evolved_amplitude(double x, double t, int site, int n_sites, const TofParams& p) {
  if (site < 0 || site >= n_sites) throw ValidationError("site index out of range");
  const double d = x - site_center(site, n_sites, p.lattice_constant);
  const double norm = std::pow(std::numbers::pi * p.sigma, -0.25);
  if (t == 0.0) return norm * std::exp(-d * d / (2.0 * p.sigma));
  const cplx spread(1.0, p.hbar * t / (p.mass * p.sigma));
  return norm / std::sqrt(spread) * std::exp(-d * d / (2.0 * p.sigma * spread));
}

double envelope(double x, const TofParams& p) {
  const double tau = p.hbar * p.release_time / (p.mass * p.sigma);
  const double width2 = p.sigma * (1.0 + tau * tau);
  return std::exp(-x * x / width2) / std::sqrt(std::numbers::pi * width2);
}

Eigen::MatrixXd overlap_matrix(int n_sites, const TofParams& p) {
  if (p.kernel == KernelMode::orthonormal) return Eigen::MatrixXd::Identity(n_sites, n_sites);
  Eigen::MatrixXd s(n_sites, n_sites);
  for (int m = 0; m < n_sites; ++m)
    for (int n = 0; n < n_sites; ++n) {
      const double d = site_center(m, n_sites, p.lattice_constant) - site_center(n, n_sites, p.lattice_constant);
      s(m, n) = std::exp(-d * d / (4.0 * p.sigma));
    }
  return s;
}

namespace {

std::size_t ipow(std::size_t base, int exp) {
  std::size_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Amplitude tensor over the isotopes not yet detected, in ascending isotope order.
struct Partial {
  unsigned used = 0;
  std::vector<cplx> tensor;
};

// Contract axis `pos` of a rank-`rank` tensor (all extents n) with w.
std::vector<cplx> contract(const std::vector<cplx>& t, int rank, int pos, std::span<const cplx> w) {
  const std::size_t n = w.size();
  const std::size_t stride = ipow(n, rank - 1 - pos);
  const std::size_t outer = t.size() / (stride * n);
  std::vector<cplx> out(outer * stride, cplx(0.0));
  for (std::size_t hi = 0; hi < outer; ++hi)
    for (std::size_t m = 0; m < n; ++m) {
      const cplx wm = w[m];
      const cplx* src = t.data() + (hi * n + m) * stride;
      cplx* dst = out.data() + hi * stride;
      for (std::size_t lo = 0; lo < stride; ++lo) dst[lo] += src[lo] * wm;
    }
  return out;
}

// phi^dagger (S x S x ... x S) phi over a rank-`rank` tensor.
double metric_inner(const std::vector<cplx>& phi, int rank, const Eigen::MatrixXd& s, bool orthonormal) {
  if (orthonormal) {
    double total = 0.0;
    for (const cplx& v : phi) total += std::norm(v);
    return total;
  }
  const auto n = static_cast<std::size_t>(s.rows());
  std::vector<cplx> sphi = phi;
  std::vector<cplx> col(n);
  for (int pos = 0; pos < rank; ++pos) {
    const std::size_t stride = ipow(n, rank - 1 - pos);
    for (std::size_t base = 0; base < sphi.size(); base += stride * n)
      for (std::size_t lo = 0; lo < stride; ++lo) {
        for (std::size_t m = 0; m < n; ++m) col[m] = sphi[base + m * stride + lo];
        for (std::size_t m = 0; m < n; ++m) {
          cplx acc = 0.0;
          for (std::size_t k = 0; k < n; ++k)
            acc += s(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) * col[k];
          sphi[base + m * stride + lo] = acc;
        }
      }
  }
  cplx total = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) total += std::conj(phi[i]) * sphi[i];
  return total.real();
}

std::vector<cplx> orbitals_at(double x, int n_sites, const TofParams& p) {
  std::vector<cplx> w(static_cast<std::size_t>(n_sites));
  for (int m = 0; m < n_sites; ++m) w[static_cast<std::size_t>(m)] = evolved_amplitude(x, p.release_time, m, n_sites, p);
  return w;
}

int position_among_remaining(int isotope, unsigned used) {
  const unsigned below = used & ((1u << isotope) - 1u);
  return isotope - std::popcount(below);
}

std::vector<Partial> contract_fixed(const ManyBodyState& state, std::span<const double> fixed,
                                    const TofParams& p) {
  const int n = state.n_sites();
  const auto& a = state.amplitudes();
  std::vector<Partial> partials{{0u, std::vector<cplx>(a.data(), a.data() + a.size())}};
  int rank = n;
  for (double x : fixed) {
    const auto w = orbitals_at(x, n, p);
    std::vector<Partial> next;
    for (const auto& part : partials)
      for (int alpha = 0; alpha < n; ++alpha) {
        if (part.used & (1u << alpha)) continue;
        next.push_back({part.used | (1u << alpha),
                        contract(part.tensor, rank, position_among_remaining(alpha, part.used), w)});
      }
    partials = std::move(next);
    --rank;
  }
  return partials;
}

void check_state(const ManyBodyState& state, std::size_t detectors) {
  if (state.basis().statistics() != Statistics::distinguishable)
    throw ValidationError("time-of-flight correlations require a distinguishable-particle state");
  if (detectors == 0 || detectors > static_cast<std::size_t>(state.n_sites()))
    throw ValidationError("number of detectors must be between 1 and N");
}

std::vector<double> evaluate(const ManyBodyState& state, std::span<const double> fixed,
                             std::span<const double> moving, const TofParams& p) {
  check_state(state, fixed.size() + 1);
  p.validate();
  const int n = state.n_sites();
  const auto partials = contract_fixed(state, fixed, p);
  const int rank = n - static_cast<int>(fixed.size());
  const Eigen::MatrixXd s = overlap_matrix(n, p);
  const bool orthonormal = p.kernel == KernelMode::orthonormal;

  std::vector<double> out(moving.size(), 0.0);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(moving.size()); ++i) {
    try {
      const auto w = orbitals_at(moving[static_cast<std::size_t>(i)], n, p);
      double total = 0.0;
      for (const auto& part : partials)
        for (int alpha = 0; alpha < n; ++alpha) {
          if (part.used & (1u << alpha)) continue;
          const auto phi = contract(part.tensor, rank, position_among_remaining(alpha, part.used), w);
          total += metric_inner(phi, rank - 1, s, orthonormal);
        }
      out[static_cast<std::size_t>(i)] = total;
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

CorrelationCurve make_curve(int order, std::string label, const TofParams& p, std::vector<double> raw) {
  CorrelationCurve c;
  c.order = order;
  c.label = std::move(label);
  c.params = p;
  c.grid = p.grid;
  c.raw = std::move(raw);
  const double peak = c.raw.empty() ? 0.0 : *std::max_element(c.raw.begin(), c.raw.end());
  c.normalized.resize(c.raw.size());
  for (std::size_t i = 0; i < c.raw.size(); ++i) c.normalized[i] = peak > 0.0 ? c.raw[i] / peak : 0.0;
  return c;
}

TofParams with_grid(TofParams p) {
  if (p.grid.empty()) p.grid = default_grid(p);
  return p;
}

}  // namespace

double coincidence_density(const ManyBodyState& state, std::span<const double> detectors,
                           const TofParams& params) {
  if (detectors.empty()) throw ValidationError("coincidence_density needs at least one detector");
  const double last[1] = {detectors.back()};
  return evaluate(state, detectors.first(detectors.size() - 1), last, params).front();
}

std::vector<double> coincidence_curve(const ManyBodyState& state, std::span<const double> fixed,
                                      const TofParams& params) {
  const TofParams p = with_grid(params);
  return evaluate(state, fixed, p.grid, p);
}

CorrelationCurve density_profile(const ManyBodyState& state, const TofParams& params) {
  const TofParams p = with_grid(params);
  return make_curve(1, "density", p, evaluate(state, {}, p.grid, p));
}

CorrelationCurve corr2(const ManyBodyState& state, const TofParams& params) {
  if (state.n_sites() < 2) throw ValidationError("corr2 requires N >= 2");
  const TofParams p = with_grid(params);
  const double fixed[1] = {0.0};
  return make_curve(2, "corr2", p, evaluate(state, fixed, p.grid, p));
}

CorrelationCurve corr4(const ManyBodyState& state, const TofParams& params) {
  if (state.n_sites() < 4) throw ValidationError("corr4 requires N >= 4");
  const TofParams p = with_grid(params);
  // Detectors (0, x, 0, 0); the ordered-tuple sum is invariant under detector order.
  const double fixed[3] = {0.0, 0.0, 0.0};
  return make_curve(4, "corr4", p, evaluate(state, fixed, p.grid, p));
}

EraserCurves eraser_demo(const TofParams& params) {
  const TofParams p = with_grid(params);
  p.validate();
  const auto basis = Basis::enumerate(Statistics::distinguishable, 2);
  const ManyBodyState psi = reference_mi_sym(basis);
  const Eigen::MatrixXd s = overlap_matrix(2, p);
  const auto& a = psi.amplitudes();  // a(m, n), m = particle 1 site

  std::vector<double> unconditional(p.grid.size());
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const auto w = orbitals_at(p.grid[i], 2, p);
    Eigen::Vector2cd phi;
    for (int n = 0; n < 2; ++n) phi[n] = a[n] * w[0] + a[2 + n] * w[1];
    unconditional[i] = phi.dot(s.cast<cplx>() * phi).real();
  }

  auto conditioned = [&](double sign) {
    // |chi> = (|L> + sign |R>), normalized in the orbital metric.
    Eigen::Vector2cd v(1.0, sign);
    v /= std::sqrt(v.dot(s.cast<cplx>() * v).real());
    const Eigen::Vector2cd o = s.cast<cplx>().transpose() * v.conjugate();  // o_n = <chi|phi_n>
    Eigen::Vector2cd c;
    for (int m = 0; m < 2; ++m) c[m] = o[0] * a[2 * m] + o[1] * a[2 * m + 1];
    c /= std::sqrt(c.dot(s.cast<cplx>() * c).real());
    std::vector<double> profile(p.grid.size());
    for (std::size_t i = 0; i < p.grid.size(); ++i) {
      const auto w = orbitals_at(p.grid[i], 2, p);
      profile[i] = std::norm(c[0] * w[0] + c[1] * w[1]);
    }
    return profile;
  };

  return {make_curve(1, "eraser_unconditional", p, std::move(unconditional)),
          make_curve(1, "eraser_plus", p, conditioned(1.0)),
          make_curve(1, "eraser_minus", p, conditioned(-1.0))};
}

std::vector<double> envelope_removed(const CorrelationCurve& curve) {
  std::vector<double> r(curve.raw.size());
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = curve.raw[i] / envelope(curve.grid[i], curve.params);
  const double peak = r.empty() ? 0.0 : *std::max_element(r.begin(), r.end());
  if (peak > 0.0)
    for (double& v : r) v /= peak;
  return r;
}

double fringe_contrast(const CorrelationCurve& curve) {
  const auto r = envelope_removed(curve);
  if (r.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(r.begin(), r.end());
  if (*hi + *lo <= 0.0) return 0.0;
  return (*hi - std::max(*lo, 0.0)) / (*hi + std::max(*lo, 0.0));
}

std::vector<std::size_t> major_peaks(std::span<const double> values, double threshold) {
  std::vector<std::size_t> peaks;
  if (values.size() < 3) return peaks;
  const double top = *std::max_element(values.begin(), values.end());
  for (std::size_t i = 1; i + 1 < values.size(); ++i)
    if (values[i] >= values[i - 1] && values[i] > values[i + 1] && values[i] >= threshold * top)
      peaks.push_back(i);
  return peaks;
}

}  // namespace mott
