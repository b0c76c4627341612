#include "mott/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "mott/errors.hpp"

namespace mott {

namespace {

void require_distinguishable(const Basis& basis, const char* what) {
  if (basis.statistics() != Statistics::distinguishable) {
    std::ostringstream msg;
    msg << what << " requires a distinguishable-particle state";
    throw ValidationError(msg.str());
  }
}

// In-place unitary DFT along one isotope axis: a(.., k, ..) = N^-1/2 sum_n e^{-ikn} a(.., n, ..).
void transform_axis(Eigen::VectorXcd& a, int n_sites, std::size_t stride,
                    const std::vector<cplx>& phases) {
  const auto n = static_cast<std::size_t>(n_sites);
  const std::size_t block = n * stride;
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  std::vector<cplx> in(n);
  for (std::size_t outer = 0; outer < static_cast<std::size_t>(a.size()); outer += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      for (std::size_t m = 0; m < n; ++m) in[m] = a[static_cast<Eigen::Index>(outer + m * stride + inner)];
      for (std::size_t k = 0; k < n; ++k) {
        cplx acc = 0.0;
        for (std::size_t m = 0; m < n; ++m) acc += phases[(k * m) % n] * in[m];
        a[static_cast<Eigen::Index>(outer + k * stride + inner)] = scale * acc;
      }
    }
  }
}

double kronecker(int a, int b) { return a == b ? 1.0 : 0.0; }

}  // namespace

ManyBodyState reference_sf(const BasisPtr& basis) {
  require_distinguishable(*basis, "reference_sf");
  const double amp = std::pow(static_cast<double>(basis->n_sites()), -0.5 * basis->n_sites());
  Eigen::VectorXcd v = Eigen::VectorXcd::Constant(static_cast<Eigen::Index>(basis->dimension()), amp);
  return ManyBodyState(basis, std::move(v));
}

ManyBodyState reference_mi_perm(const BasisPtr& basis, std::span<const int> permutation) {
  require_distinguishable(*basis, "reference_mi_perm");
  const int n = basis->n_sites();
  std::vector<int> sorted(permutation.begin(), permutation.end());
  std::sort(sorted.begin(), sorted.end());
  bool valid = static_cast<int>(sorted.size()) == n;
  for (int i = 0; valid && i < n; ++i) valid = sorted[static_cast<std::size_t>(i)] == i;
  if (!valid) throw ValidationError("reference_mi_perm: not a permutation of {0, ..., N-1}");
  return ManyBodyState::basis_state(basis, basis->index_of(permutation));
}

ManyBodyState reference_mi_sym(const BasisPtr& basis) {
  require_distinguishable(*basis, "reference_mi_sym");
  const int n = basis->n_sites();
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dimension()));
  std::size_t count = 0;
  do {
    v[static_cast<Eigen::Index>(basis->index_of(perm))] = 1.0;
    ++count;
  } while (std::next_permutation(perm.begin(), perm.end()));
  v /= std::sqrt(static_cast<double>(count));
  return ManyBodyState(basis, std::move(v));
}

cplx overlap(const ManyBodyState& a, const ManyBodyState& b) {
  if (!a.basis().same_space(b.basis())) throw ValidationError("overlap of states on different bases");
  return a.amplitudes().dot(b.amplitudes());
}

std::vector<double> momentum_grid(int n_sites) {
  std::vector<double> k(static_cast<std::size_t>(n_sites));
  for (int n = 0; n < n_sites; ++n) k[static_cast<std::size_t>(n)] = 2.0 * std::numbers::pi * n / n_sites;
  return k;
}

int momentum_index(int n_sites, double k) {
  const double unit = 2.0 * std::numbers::pi / n_sites;
  const double scaled = k / unit;
  const double nearest = std::round(scaled);
  if (!std::isfinite(k) || std::abs(scaled - nearest) > 1e-9 * std::max(1.0, std::abs(scaled))) {
    std::ostringstream msg;
    msg << "momentum " << k << " is not on the " << n_sites << "-point grid";
    throw ValidationError(msg.str());
  }
  const long long n = static_cast<long long>(nearest) % n_sites;
  return static_cast<int>(n < 0 ? n + n_sites : n);
}

Eigen::MatrixXcd one_body_correlator(const ManyBodyState& state, int isotope) {
  const Basis& basis = state.basis();
  require_distinguishable(basis, "one_body_correlator");
  const int n = basis.n_sites();
  const std::size_t stride = basis.isotope_stride(isotope);
  const auto& a = state.amplitudes();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
  const std::size_t block = stride * static_cast<std::size_t>(n);
  for (std::size_t outer = 0; outer < basis.dimension(); outer += block) {
    for (std::size_t inner = 0; inner < stride; ++inner) {
      const std::size_t base = outer + inner;
      for (int m = 0; m < n; ++m) {
        const cplx am = std::conj(a[static_cast<Eigen::Index>(base + static_cast<std::size_t>(m) * stride)]);
        if (am == 0.0) continue;
        for (int k = 0; k < n; ++k)
          g(m, k) += am * a[static_cast<Eigen::Index>(base + static_cast<std::size_t>(k) * stride)];
      }
    }
  }
  return g;
}

Eigen::MatrixXcd total_one_body_correlator(const ManyBodyState& state) {
  const Basis& basis = state.basis();
  const int n = basis.n_sites();
  if (basis.statistics() == Statistics::distinguishable) {
    Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
    for (int alpha = 0; alpha < n; ++alpha) g += one_body_correlator(state, alpha);
    return g;
  }
  const auto& a = state.amplitudes();
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t s = 0; s < basis.dimension(); ++s) {
    const cplx as = a[static_cast<Eigen::Index>(s)];
    if (as == 0.0) continue;
    const Configuration occ = basis.state_of(s);
    for (int from = 0; from < n; ++from) {
      const int n_from = occ[static_cast<std::size_t>(from)];
      if (n_from == 0) continue;
      g(from, from) += std::norm(as) * static_cast<double>(n_from);
      for (int to = 0; to < n; ++to) {
        if (to == from) continue;
        Configuration moved = occ;
        --moved[static_cast<std::size_t>(from)];
        ++moved[static_cast<std::size_t>(to)];
        const cplx at = a[static_cast<Eigen::Index>(basis.index_of(moved))];
        // <b+_to b_from>
        g(to, from) += std::conj(at) * as *
                       std::sqrt(static_cast<double>(n_from) * (occ[static_cast<std::size_t>(to)] + 1));
      }
    }
  }
  return g;
}

std::vector<double> momentum_occupation(const ManyBodyState& state) {
  const int n = state.n_sites();
  const Eigen::MatrixXcd g = total_one_body_correlator(state);
  std::vector<double> nk(static_cast<std::size_t>(n), 0.0);
  for (int kn = 0; kn < n; ++kn) {
    cplx acc = 0.0;
    for (int m = 0; m < n; ++m)
      for (int l = 0; l < n; ++l)
        acc += std::polar(1.0, 2.0 * std::numbers::pi * kn * (m - l) / n) * g(m, l);
    nk[static_cast<std::size_t>(kn)] = acc.real() / n;
  }
  return nk;
}

double visibility(std::span<const double> occupation) {
  if (occupation.empty()) throw ValidationError("visibility of an empty occupation vector");
  const auto [lo, hi] = std::minmax_element(occupation.begin(), occupation.end());
  if (*lo < -1e-12) throw ValidationError("visibility requires nonnegative occupations");
  if (*hi + *lo <= 0.0) throw ValidationError("visibility undefined for an all-zero occupation vector");
  return (*hi - *lo) / (*hi + *lo);
}

MomentumDistribution::MomentumDistribution(const ManyBodyState& state) : n_sites_(state.n_sites()) {
  const Basis& basis = state.basis();
  require_distinguishable(basis, "momentum moments");
  std::vector<cplx> phases(static_cast<std::size_t>(n_sites_));
  for (int j = 0; j < n_sites_; ++j)
    phases[static_cast<std::size_t>(j)] = std::polar(1.0, -2.0 * std::numbers::pi * j / n_sites_);
  Eigen::VectorXcd a = state.amplitudes();
  for (int alpha = 0; alpha < n_sites_; ++alpha)
    transform_axis(a, n_sites_, basis.isotope_stride(alpha), phases);
  probabilities_ = a.cwiseAbs2();
}

double MomentumDistribution::moment(std::span<const int> k_indices) const {
  const int order = static_cast<int>(k_indices.size());
  if (order > n_sites_) return 0.0;
  std::vector<int> wanted(static_cast<std::size_t>(n_sites_), 0);
  for (int k : k_indices) {
    if (k < 0 || k >= n_sites_) throw ValidationError("momentum index off grid");
    ++wanted[static_cast<std::size_t>(k)];
  }
  const auto n = static_cast<std::size_t>(n_sites_);
  std::vector<int> counts(n);
  double total = 0.0;
  for (Eigen::Index idx = 0; idx < probabilities_.size(); ++idx) {
    const double p = probabilities_[idx];
    if (p == 0.0) continue;
    std::fill(counts.begin(), counts.end(), 0);
    auto code = static_cast<std::size_t>(idx);
    for (std::size_t a = 0; a < n; ++a, code /= n) ++counts[code % n];
    // Ordered tuples of distinct isotopes matching the requested momenta.
    double ways = 1.0;
    for (std::size_t v = 0; v < n && ways != 0.0; ++v)
      for (int j = 0; j < wanted[v]; ++j) ways *= counts[v] - j;
    total += p * ways;
  }
  return total;
}

std::vector<double> MomentumDistribution::occupation() const {
  std::vector<double> nk(static_cast<std::size_t>(n_sites_));
  for (int k = 0; k < n_sites_; ++k) {
    const int idx[1] = {k};
    nk[static_cast<std::size_t>(k)] = moment(idx);
  }
  return nk;
}

double coincidence_moment2(const ManyBodyState& state, double k1, double k2) {
  const int n = state.n_sites();
  const int ks[2] = {momentum_index(n, k1), momentum_index(n, k2)};
  return MomentumDistribution(state).moment(ks);
}

double coincidence_moment3(const ManyBodyState& state, double k1, double k2, double k3) {
  const int n = state.n_sites();
  const int ks[3] = {momentum_index(n, k1), momentum_index(n, k2), momentum_index(n, k3)};
  return MomentumDistribution(state).moment(ks);
}

double analytic_moment2(LimitState limit, int n_sites, double k1, double k2) {
  if (n_sites < 2) throw ValidationError("analytic_moment2 requires N >= 2");
  const int a = momentum_index(n_sites, k1);
  const int b = momentum_index(n_sites, k2);
  const double n = n_sites;
  switch (limit) {
    case LimitState::sf:
      return kronecker(a, 0) * kronecker(b, 0) * n * (n - 1);
    case LimitState::mi_sym:
      return (n - 2 + kronecker(a, b) * n) / n;
    case LimitState::mi_single:
      return (n - 1) / n;
  }
  return 0.0;
}

double analytic_moment3_n4(LimitState limit, double k1, double k2, double k3) {
  const int a = momentum_index(4, k1);
  const int b = momentum_index(4, k2);
  const int c = momentum_index(4, k3);
  switch (limit) {
    case LimitState::sf:
      return 24.0 * kronecker(a, 0) * kronecker(b, 0) * kronecker(c, 0);
    case LimitState::mi_sym:
      return 0.25 + 2.0 * kronecker(a, b) * kronecker(b, c);
    case LimitState::mi_single:
      return 3.0 / 8.0;
  }
  return 0.0;
}

}  // namespace mott
