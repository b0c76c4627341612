#pragma once

#include <utility>
#include <vector>

#include "mott/hilbert.hpp"
#include "mott/sparse_operator.hpp"

namespace mott {

// Natural units hbar = m = a0 = 1 with 8 hbar^2 / (m a0^2) = 5 U0.
constexpr double kDefaultU0 = 8.0 / 5.0;

struct ModelParams {
  int n_sites = 4;
  double t0 = 0.0;
  double u0 = kDefaultU0;
  Statistics statistics = Statistics::distinguishable;

  static ModelParams from_ratio(int n_sites, double ratio, Statistics statistics,
                                double u0 = kDefaultU0) {
    return ModelParams{n_sites, ratio * u0, u0, statistics};
  }

  void validate() const;
};

// Unordered nearest-neighbour pairs of the periodic chain. N = 2 has a single bond.
std::vector<std::pair<int, int>> ring_bonds(int n_sites);

SparseOperator build_hamiltonian(const ModelParams& params, const Basis& basis);

}  // namespace mott
