#include "mott/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <iomanip>
#include <sstream>

#include "mott/errors.hpp"

namespace mott {

std::string_view to_string(Statistics s) {
  return s == Statistics::distinguishable ? "dist" : "bose";
}

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

void enumerate_occupations(int n_sites, std::vector<Configuration>& out) {
  Configuration current(static_cast<std::size_t>(n_sites), 0);
  std::function<void(int, int)> fill = [&](int site, int remaining) {
    if (site == n_sites - 1) {
      current[static_cast<std::size_t>(site)] = remaining;
      out.push_back(current);
      return;
    }
    for (int n = remaining; n >= 0; --n) {
      current[static_cast<std::size_t>(site)] = n;
      fill(site + 1, remaining - n);
    }
  };
  fill(0, n_sites);
}

}  // namespace

std::size_t distinguishable_dimension(int n_sites) {
  std::size_t d = 1;
  for (int a = 0; a < n_sites; ++a) d *= static_cast<std::size_t>(n_sites);
  return d;
}

std::size_t bosonic_dimension(int n_sites) {
  return static_cast<std::size_t>(binomial(2 * n_sites - 1, n_sites - 1));
}

std::shared_ptr<const Basis> Basis::enumerate(Statistics statistics, int n_sites) {
  const bool dist = statistics == Statistics::distinguishable;
  const int max_sites = dist ? kMaxDistinguishableSites : kMaxBosonicSites;
  if (n_sites < 2 || n_sites > max_sites) {
    std::ostringstream msg;
    msg << "N=" << n_sites << " outside supported range [2, " << max_sites << "] for "
        << to_string(statistics) << " basis; dimension would be " << std::fixed << std::setprecision(0);
    if (n_sites < 1) {
      msg << "undefined";
    } else if (dist) {
      msg << std::pow(static_cast<double>(n_sites), n_sites) << " (" << n_sites << "^" << n_sites
          << ")";
    } else {
      msg << binomial(2 * n_sites - 1, n_sites - 1) << " (binomial(" << 2 * n_sites - 1 << ", "
          << n_sites - 1 << "))";
    }
    throw SizeLimitError(msg.str());
  }
  return std::shared_ptr<const Basis>(new Basis(statistics, n_sites));
}

Basis::Basis(Statistics statistics, int n_sites)
    : statistics_(statistics), n_sites_(n_sites), dimension_(0) {
  if (statistics_ == Statistics::distinguishable) {
    dimension_ = distinguishable_dimension(n_sites_);
    strides_.assign(static_cast<std::size_t>(n_sites_), 1);
    for (int a = n_sites_ - 2; a >= 0; --a)
      strides_[static_cast<std::size_t>(a)] =
          strides_[static_cast<std::size_t>(a + 1)] * static_cast<std::size_t>(n_sites_);
  } else {
    bosonic_states_.reserve(bosonic_dimension(n_sites_));
    enumerate_occupations(n_sites_, bosonic_states_);
    dimension_ = bosonic_states_.size();
  }
}

void Basis::check_index(std::size_t index) const {
  if (index >= dimension_) {
    std::ostringstream msg;
    msg << "basis index " << index << " out of range [0, " << dimension_ << ")";
    throw ValidationError(msg.str());
  }
}

std::size_t Basis::isotope_stride(int isotope) const {
  if (statistics_ != Statistics::distinguishable)
    throw ValidationError("isotope strides exist only for distinguishable bases");
  if (isotope < 0 || isotope >= n_sites_) throw ValidationError("isotope label out of range");
  return strides_[static_cast<std::size_t>(isotope)];
}

Configuration Basis::state_of(std::size_t index) const {
  check_index(index);
  if (statistics_ == Statistics::bosonic) return bosonic_states_[index];
  Configuration sites(static_cast<std::size_t>(n_sites_));
  const auto n = static_cast<std::size_t>(n_sites_);
  for (int a = n_sites_ - 1; a >= 0; --a) {
    sites[static_cast<std::size_t>(a)] = static_cast<int>(index % n);
    index /= n;
  }
  return sites;
}

std::size_t Basis::index_of(std::span<const int> configuration) const {
  if (configuration.size() != static_cast<std::size_t>(n_sites_)) {
    std::ostringstream msg;
    msg << "configuration has arity " << configuration.size() << ", expected " << n_sites_;
    throw ValidationError(msg.str());
  }
  if (statistics_ == Statistics::distinguishable) {
    std::size_t index = 0;
    for (int site : configuration) {
      if (site < 0 || site >= n_sites_) throw ValidationError("isotope position outside lattice");
      index = index * static_cast<std::size_t>(n_sites_) + static_cast<std::size_t>(site);
    }
    return index;
  }
  int total = 0;
  for (int n : configuration) {
    if (n < 0) throw ValidationError("negative site occupation");
    total += n;
  }
  if (total != n_sites_) {
    std::ostringstream msg;
    msg << "occupation sum " << total << " differs from particle number " << n_sites_;
    throw ValidationError(msg.str());
  }
  auto it = std::lower_bound(
      bosonic_states_.begin(), bosonic_states_.end(), configuration,
      [](const Configuration& a, std::span<const int> b) {
        return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
      });
  return static_cast<std::size_t>(it - bosonic_states_.begin());
}

Configuration Basis::occupation_of(std::size_t index) const {
  if (statistics_ == Statistics::bosonic) return state_of(index);
  Configuration occupation(static_cast<std::size_t>(n_sites_), 0);
  for (int site : state_of(index)) ++occupation[static_cast<std::size_t>(site)];
  return occupation;
}

ManyBodyState::ManyBodyState(BasisPtr basis, Eigen::VectorXcd amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (!basis_) throw ValidationError("state requires a basis");
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_->dimension())
    throw ValidationError("amplitude vector length differs from basis dimension");
  const double norm = amplitudes_.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ValidationError("state has zero or invalid norm");
  amplitudes_ /= norm;
}

ManyBodyState ManyBodyState::basis_state(BasisPtr basis, std::size_t index) {
  if (!basis) throw ValidationError("state requires a basis");
  if (index >= basis->dimension()) throw ValidationError("basis index out of range");
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->dimension()));
  v[static_cast<Eigen::Index>(index)] = 1.0;
  return ManyBodyState(std::move(basis), std::move(v));
}

void ManyBodyState::fix_phase() {
  Eigen::Index best = 0;
  double best_mag = -1.0;
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    const double mag = std::abs(amplitudes_[i]);
    // Strictly greater keeps the first of equal-magnitude entries.
    if (mag > best_mag * (1.0 + 1e-12)) {
      best_mag = mag;
      best = i;
    }
  }
  if (best_mag <= 0.0) return;
  const cplx phase = std::conj(amplitudes_[best]) / best_mag;
  amplitudes_ *= phase;
  amplitudes_[best] = best_mag;
}

}  // namespace mott
