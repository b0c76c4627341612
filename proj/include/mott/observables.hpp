#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "mott/hilbert.hpp"

namespace mott {

// Reference states on a distinguishable basis.
ManyBodyState reference_sf(const BasisPtr& basis);
ManyBodyState reference_mi_perm(const BasisPtr& basis, std::span<const int> permutation);
ManyBodyState reference_mi_sym(const BasisPtr& basis);

cplx overlap(const ManyBodyState& a, const ManyBodyState& b);

// k_n = 2 pi n / N, n = 0..N-1, in units of 1/a0.
std::vector<double> momentum_grid(int n_sites);

// Grid index of k (taken mod 2 pi); throws ValidationError when k is off-grid.
int momentum_index(int n_sites, double k);

// G_mn = <c+_{isotope,m} c_{isotope,n}>.
Eigen::MatrixXcd one_body_correlator(const ManyBodyState& state, int isotope);

// Site-basis <b+_m b_n> summed over isotopes (distinguishable) or for the boson field.
Eigen::MatrixXcd total_one_body_correlator(const ManyBodyState& state);

// <n_k> on the momentum grid, for either statistics.
std::vector<double> momentum_occupation(const ManyBodyState& state);

double visibility(std::span<const double> occupation);

/// Joint momentum distribution of all isotopes of a distinguishable state.
///
/// Each isotope carries exactly one particle, so n_{alpha,k} is the projector
/// onto plane wave k of particle alpha and every normal-ordered moment over
/// distinct isotopes is a sum of this distribution. Built once, queried per k.
class MomentumDistribution {
 public:
  explicit MomentumDistribution(const ManyBodyState& state);

  int n_sites() const noexcept { return n_sites_; }
  // Probability of momentum tuple (k-index of isotope 0, ..., isotope N-1), base-N encoded.
  const Eigen::VectorXd& probabilities() const noexcept { return probabilities_; }

  // Sum over ordered tuples of distinct isotopes of <n_{a1,k1} ... n_{ar,kr}>; ks are grid indices.
  double moment(std::span<const int> k_indices) const;
  std::vector<double> occupation() const;

 private:
  int n_sites_;
  Eigen::VectorXd probabilities_;
};

double coincidence_moment2(const ManyBodyState& state, double k1, double k2);
double coincidence_moment3(const ManyBodyState& state, double k1, double k2, double k3);

enum class LimitState { sf, mi_sym, mi_single };

// Closed-form M2 for the reference states.
double analytic_moment2(LimitState limit, int n_sites, double k1, double k2);

// Four-site third-order constants: 1/4 + 2 d_kk' d_k'k'' (symmetric) and 3/8 (single).
double analytic_moment3_n4(LimitState limit, double k1, double k2, double k3);

}  // namespace mott
