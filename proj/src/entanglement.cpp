#include "mott/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <tuple>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "mott/errors.hpp"

namespace mott {

namespace {

constexpr double kEigenCutoff = 1e-12;

double entropy_bits(const Eigen::VectorXd& spectrum) {
  double s = 0.0;
  for (double lambda : spectrum)
    if (lambda > kEigenCutoff) s -= lambda * std::log2(lambda);
  return s;
}

}  // namespace

DensityMatrix::DensityMatrix(Eigen::MatrixXcd matrix) : matrix_(std::move(matrix)) {
  if (matrix_.rows() != matrix_.cols()) throw ValidationError("density matrix must be square");
}

Eigen::VectorXd DensityMatrix::eigenvalues() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(matrix_, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

Eigen::Index DensityMatrix::rank(double cutoff) const {
  const auto ev = eigenvalues();
  return static_cast<Eigen::Index>(std::count_if(ev.begin(), ev.end(), [&](double v) { return v > cutoff; }));
}

DensityMatrix partial_trace_particles(const ManyBodyState& state, std::span<const int> kept) {
  const Basis& basis = state.basis();
  if (basis.statistics() != Statistics::distinguishable)
    throw ValidationError("particle partial trace requires a distinguishable-particle state");
  const int n = basis.n_sites();
  std::vector<int> keep(kept.begin(), kept.end());
  std::sort(keep.begin(), keep.end());
  if (keep.empty() || static_cast<int>(keep.size()) >= n ||
      std::adjacent_find(keep.begin(), keep.end()) != keep.end() || keep.front() < 0 || keep.back() >= n)
    throw ValidationError("kept isotopes must be a nonempty proper subset of {0, ..., N-1}");

  std::vector<bool> is_kept(static_cast<std::size_t>(n), false);
  for (int a : keep) is_kept[static_cast<std::size_t>(a)] = true;
  Eigen::Index rows = 1, cols = 1;
  for (int a = 0; a < n; ++a) (is_kept[static_cast<std::size_t>(a)] ? rows : cols) *= n;

  // Amplitudes reshaped to (kept tuple) x (traced tuple).
  Eigen::MatrixXcd m(rows, cols);
  const auto& amps = state.amplitudes();
  for (std::size_t idx = 0; idx < basis.dimension(); ++idx) {
    const Configuration sites = basis.state_of(idx);
    Eigen::Index r = 0, c = 0;
    for (int a = 0; a < n; ++a) {
      const int s = sites[static_cast<std::size_t>(a)];
      if (is_kept[static_cast<std::size_t>(a)]) r = r * n + s; else c = c * n + s;
    }
    m(r, c) = amps[static_cast<Eigen::Index>(idx)];
  }
  return DensityMatrix(m * m.adjoint());
}

double von_neumann_entropy(const DensityMatrix& rho) {
  const double tr = rho.trace();
  if (std::abs(tr - 1.0) > 1e-8) {
    std::ostringstream msg;
    msg << "density matrix trace " << tr << " deviates from 1";
    throw ValidationError(msg.str());
  }
  return entropy_bits(rho.eigenvalues());
}

double particle_entanglement(const ManyBodyState& state) {
  const int n = state.n_sites();
  if (n < 2) throw ValidationError("particle entanglement requires N >= 2");
  std::vector<int> half(static_cast<std::size_t>(n / 2));
  for (int a = 0; a < n / 2; ++a) half[static_cast<std::size_t>(a)] = a;
  return von_neumann_entropy(partial_trace_particles(state, half));
}

OperationalEntanglement operational_entanglement_bosonic(const ManyBodyState& state, int block_sites) {
  const Basis& basis = state.basis();
  if (basis.statistics() != Statistics::bosonic)
    throw ValidationError("operational entanglement requires a bosonic state");
  const int n = basis.n_sites();
  if (block_sites == 0) block_sites = n / 2;
  if (block_sites < 1 || block_sites >= n) throw ValidationError("block must be a proper set of sites");

  using Occupation = std::vector<int>;
  struct Sector {
    std::map<Occupation, Eigen::Index> left, right;
    std::vector<std::tuple<Occupation, Occupation, cplx>> amps;
  };
  std::vector<Sector> sectors(static_cast<std::size_t>(n + 1));
  const auto& a = state.amplitudes();
  for (std::size_t idx = 0; idx < basis.dimension(); ++idx) {
    const Configuration occ = basis.state_of(idx);
    Occupation left(occ.begin(), occ.begin() + block_sites);
    Occupation right(occ.begin() + block_sites, occ.end());
    int particles = 0;
    for (int v : left) particles += v;
    auto& sector = sectors[static_cast<std::size_t>(particles)];
    sector.left.emplace(left, 0);
    sector.right.emplace(right, 0);
    sector.amps.emplace_back(std::move(left), std::move(right), a[static_cast<Eigen::Index>(idx)]);
  }

  OperationalEntanglement out;
  out.probabilities.assign(static_cast<std::size_t>(n + 1), 0.0);
  out.sector_entropies.assign(static_cast<std::size_t>(n + 1), 0.0);
  for (int particles = 0; particles <= n; ++particles) {
    auto& sector = sectors[static_cast<std::size_t>(particles)];
    Eigen::Index i = 0;
    for (auto& [occ, pos] : sector.left) pos = i++;
    i = 0;
    for (auto& [occ, pos] : sector.right) pos = i++;
    Eigen::MatrixXcd schmidt = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(sector.left.size()),
                                                      static_cast<Eigen::Index>(sector.right.size()));
    for (const auto& [l, r, amp] : sector.amps) schmidt(sector.left.at(l), sector.right.at(r)) = amp;
    const double p = schmidt.squaredNorm();
    out.probabilities[static_cast<std::size_t>(particles)] = p;
    if (p <= 1e-12) continue;
    schmidt /= std::sqrt(p);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(schmidt);
    const Eigen::VectorXd weights = svd.singularValues().cwiseAbs2();
    const double e = entropy_bits(weights);
    out.sector_entropies[static_cast<std::size_t>(particles)] = e;
    out.value += p * e;
  }
  return out;
}

}  // namespace mott
