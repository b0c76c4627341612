#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "mott/hilbert.hpp"

namespace mott {

class DensityMatrix {
 public:
  explicit DensityMatrix(Eigen::MatrixXcd matrix);

  Eigen::Index dimension() const noexcept { return matrix_.rows(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return matrix_; }
  double trace() const { return matrix_.trace().real(); }
  Eigen::VectorXd eigenvalues() const;
  // Number of eigenvalues above `cutoff`.
  Eigen::Index rank(double cutoff = 1e-12) const;

 private:
  Eigen::MatrixXcd matrix_;
};

// Reduced state of the kept isotopes (0-based labels), indexed by their position
// tuple in the order given after sorting.
DensityMatrix partial_trace_particles(const ManyBodyState& state, std::span<const int> kept);

// -sum lambda log2 lambda, eigenvalues <= 1e-12 dropped.
double von_neumann_entropy(const DensityMatrix& rho);

// Entropy of isotopes {0, ..., floor(N/2) - 1}, in bits.
double particle_entanglement(const ManyBodyState& state);

struct OperationalEntanglement {
  double value = 0.0;                  // sum_n p_n E_n, bits
  std::vector<double> probabilities;   // p_n, n = 0..N particles in the block
  std::vector<double> sector_entropies;
};

// Block of sites {0, ..., block_sites - 1}; block_sites = 0 selects floor(N/2).
OperationalEntanglement operational_entanglement_bosonic(const ManyBodyState& state,
                                                         int block_sites = 0);

}  // namespace mott
