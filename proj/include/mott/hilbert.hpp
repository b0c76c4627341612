#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace mott {

using cplx = std::complex<double>;

enum class Statistics { distinguishable, bosonic };

std::string_view to_string(Statistics s);

// Distinguishable: site of each isotope, (i_0, ..., i_{N-1}).
// Bosonic: occupation of each site, (n_0, ..., n_{N-1}).
using Configuration = std::vector<int>;

constexpr int kMaxDistinguishableSites = 8;
constexpr int kMaxBosonicSites = 10;

/// Configuration basis at unit filling on N sites.
///
/// Distinguishable states are indexed by the base-N number formed by the
/// isotope positions, isotope 0 most significant. Bosonic occupation vectors
/// are stored in lexicographically descending order. Instances are immutable
/// and shared between states and operators through BasisPtr.
class Basis {
 public:
  static std::shared_ptr<const Basis> enumerate(Statistics statistics, int n_sites);

  Statistics statistics() const noexcept { return statistics_; }
  int n_sites() const noexcept { return n_sites_; }
  std::size_t dimension() const noexcept { return dimension_; }

  Configuration state_of(std::size_t index) const;
  std::size_t index_of(std::span<const int> configuration) const;
  Configuration occupation_of(std::size_t index) const;

  // N^(N-1-isotope); index offset of moving one isotope by one site.
  std::size_t isotope_stride(int isotope) const;

  bool same_space(const Basis& other) const noexcept {
    return statistics_ == other.statistics_ && n_sites_ == other.n_sites_;
  }

 private:
  Basis(Statistics statistics, int n_sites);

  void check_index(std::size_t index) const;

  Statistics statistics_;
  int n_sites_;
  std::size_t dimension_;
  std::vector<std::size_t> strides_;
  std::vector<Configuration> bosonic_states_;
};

using BasisPtr = std::shared_ptr<const Basis>;

std::size_t distinguishable_dimension(int n_sites);
std::size_t bosonic_dimension(int n_sites);

/// Unit-norm amplitude vector over a basis.
class ManyBodyState {
 public:
  // Normalizes; throws ValidationError on a zero vector or size mismatch.
  ManyBodyState(BasisPtr basis, Eigen::VectorXcd amplitudes);

  static ManyBodyState basis_state(BasisPtr basis, std::size_t index);

  const Basis& basis() const noexcept { return *basis_; }
  const BasisPtr& basis_ptr() const noexcept { return basis_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  int n_sites() const noexcept { return basis_->n_sites(); }

  // Largest-magnitude amplitude made real and positive.
  void fix_phase();

 private:
  BasisPtr basis_;
  Eigen::VectorXcd amplitudes_;
};

}  // namespace mott
