#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "mott/hilbert.hpp"
#include "mott/sparse_operator.hpp"

namespace mott {

struct EigenPair {
  double value;
  Eigen::VectorXcd vector;
};

struct LanczosOptions {
  std::size_t krylov_dim = 100;
  int max_restarts = 400;
  double tolerance = 1e-10;  // relative to max(1, |E|)
  std::uint64_t seed = 0x5eed;
};

struct SolverOptions {
  std::size_t dense_threshold = 4096;
  LanczosOptions lanczos{};
};

/// Lowest `count` eigenpairs of a Hermitian operator by restarted Lanczos
/// with full reorthogonalization. Converged vectors are locked and later
/// runs stay orthogonal to them, so degenerate levels are resolved with
/// their multiplicity. Throws ConvergenceError after max_restarts.
std::vector<EigenPair> lanczos_lowest(const SparseOperator& op, std::size_t count,
                                      const LanczosOptions& options = {});

struct GroundState {
  double energy;
  ManyBodyState state;
  double residual;
};

GroundState ground_state(const SparseOperator& op, BasisPtr basis, const SolverOptions& options = {});

// Ascending, with multiplicity.
std::vector<double> spectrum_lowest(const SparseOperator& op, std::size_t k,
                                    const SolverOptions& options = {});

struct Level {
  double energy;
  std::size_t multiplicity;
};

// Merges neighbours closer than rel_tol * max(1, |E|).
std::vector<Level> group_levels(const std::vector<double>& ascending, double rel_tol = 1e-8);

}  // namespace mott
