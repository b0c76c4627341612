#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mott/hilbert.hpp"

namespace mott {

enum class KernelMode { orthonormal, exact_overlap };

/// Release and flight parameters. sigma is the squared width of the site
/// orbital exp(-x^2 / 2 sigma); lengths in a0, time in m a0^2 / hbar.
struct TofParams {
  double sigma = 0.02;
  double mass = 1.0;
  double hbar = 1.0;
  double lattice_constant = 1.0;
  double release_time = 50.0;
  std::vector<double> grid;
  KernelMode kernel = KernelMode::orthonormal;

  // Far-field position of momentum k, x = hbar k t / m.
  double position_of_momentum(double k) const { return hbar * k * release_time / mass; }

  void validate() const;
};

// `points` positions evenly spanning [-1.5, 1.5] * 2 pi hbar t / (m a0).
std::vector<double> default_grid(const TofParams& params, int points = 801);

// Tunneling amplitude (hbar^2 / m sigma) exp(-a0^2 / 16 sigma).
double tunneling_of_sigma(double sigma, double hbar = 1.0, double mass = 1.0, double a0 = 1.0);

// Root of tunneling_of_sigma(sigma) = t0 on (0, a0^2/16]; BranchLimitError above the maximum.
double solve_sigma(double t0, double hbar = 1.0, double mass = 1.0, double a0 = 1.0);

double site_center(int site, int n_sites, double a0 = 1.0);

// Freely evolved normalized Gaussian orbital of `site` at position x and time t.
cplx evolved_amplitude(double x, double t, int site, int n_sites, const TofParams& params);

// |orbital centered at the origin|^2 after release_time; the single-detector far-field envelope.
double envelope(double x, const TofParams& params);

// S_mn = exp(-(R_m - R_n)^2 / 4 sigma); identity in orthonormal mode.
Eigen::MatrixXd overlap_matrix(int n_sites, const TofParams& params);

struct CorrelationCurve {
  int order = 1;
  std::string label;
  TofParams params;
  std::vector<double> grid;
  std::vector<double> raw;
  std::vector<double> normalized;
};

/// Distinct-isotope coincidence density: sum over ordered tuples of distinct
/// isotopes of the joint probability density of finding them at `detectors`.
double coincidence_density(const ManyBodyState& state, std::span<const double> detectors,
                           const TofParams& params);

/// coincidence_density over params.grid with one detector swept and the others
/// held at `fixed`. Parallel over grid points.
std::vector<double> coincidence_curve(const ManyBodyState& state, std::span<const double> fixed,
                                      const TofParams& params);

CorrelationCurve density_profile(const ManyBodyState& state, const TofParams& params);
CorrelationCurve corr2(const ManyBodyState& state, const TofParams& params);
CorrelationCurve corr4(const ManyBodyState& state, const TofParams& params);

struct EraserCurves {
  CorrelationCurve unconditional;
  CorrelationCurve conditioned_plus;
  CorrelationCurve conditioned_minus;
};

// Two-site symmetric Mott state; particle 2 traced out or projected onto (|L> +- |R>)/sqrt 2.
EraserCurves eraser_demo(const TofParams& params);

// Raw curve divided by the envelope at the swept detector, scaled to unit maximum.
std::vector<double> envelope_removed(const CorrelationCurve& curve);

// (max - min) / (max + min) of the envelope-removed curve.
double fringe_contrast(const CorrelationCurve& curve);

// Indices of local maxima of `values` at or above `threshold` * max.
std::vector<std::size_t> major_peaks(std::span<const double> values, double threshold = 0.5);

}  // namespace mott
