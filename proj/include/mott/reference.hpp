#pragma once

#include <span>

#include <Eigen/Core>

#include "mott/hilbert.hpp"
#include "mott/sparse_operator.hpp"
#include "mott/timeofflight.hpp"

// Serial, unoptimized versions of the parallel kernels. Kept as oracles for
// the test suite and as the baseline in bench/.
namespace mott::reference {

// Scatter over the coordinate list, one entry at a time.
Eigen::VectorXcd apply(const SparseOperator& op, const Eigen::VectorXcd& x);

// Double sum over configuration pairs of the coincidence density.
double coincidence_density(const ManyBodyState& state, std::span<const double> detectors,
                           const TofParams& params);

// Direct sum rho_{(k),(k')} = sum_rest psi*(k, rest) psi(k', rest) with kept isotopes leading.
Eigen::MatrixXcd partial_trace(const ManyBodyState& state, std::span<const int> kept);

}  // namespace mott::reference
