#include "mott/reference.hpp"

#include <algorithm>
#include <vector>

#include "mott/errors.hpp"

namespace mott::reference {

Eigen::VectorXcd apply(const SparseOperator& op, const Eigen::VectorXcd& x) {
  if (static_cast<std::size_t>(x.size()) != op.dim()) throw ValidationError("dimension mismatch");
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(x.size());
  for (const auto& e : op.entries())
    y[static_cast<Eigen::Index>(e.row)] += e.value * x[static_cast<Eigen::Index>(e.col)];
  return y;
}

double coincidence_density(const ManyBodyState& state, std::span<const double> detectors,
                           const TofParams& params) {
  const Basis& basis = state.basis();
  const int n = basis.n_sites();
  const auto k = static_cast<int>(detectors.size());
  if (basis.statistics() != Statistics::distinguishable || k < 1 || k > n)
    throw ValidationError("reference coincidence density: bad state or detector count");
  const Eigen::MatrixXd s = overlap_matrix(n, params);

  // psi[j][m]: orbital m at detector j.
  std::vector<std::vector<cplx>> psi(static_cast<std::size_t>(k), std::vector<cplx>(static_cast<std::size_t>(n)));
  for (int j = 0; j < k; ++j)
    for (int m = 0; m < n; ++m)
      psi[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)] =
          evolved_amplitude(detectors[static_cast<std::size_t>(j)], params.release_time, m, n, params);

  // All ordered tuples of k distinct isotopes.
  std::vector<std::vector<int>> tuples;
  std::vector<int> isotopes(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) isotopes[static_cast<std::size_t>(a)] = a;
  do {
    std::vector<int> t(isotopes.begin(), isotopes.begin() + k);
    if (std::find(tuples.begin(), tuples.end(), t) == tuples.end()) tuples.push_back(t);
  } while (std::next_permutation(isotopes.begin(), isotopes.end()));

  const auto& a = state.amplitudes();
  std::vector<Configuration> configs(basis.dimension());
  for (std::size_t i = 0; i < basis.dimension(); ++i) configs[i] = basis.state_of(i);

  cplx total = 0.0;
  for (std::size_t c = 0; c < basis.dimension(); ++c) {
    const cplx ac = std::conj(a[static_cast<Eigen::Index>(c)]);
    if (ac == 0.0) continue;
    for (std::size_t cp = 0; cp < basis.dimension(); ++cp) {
      const cplx acp = a[static_cast<Eigen::Index>(cp)];
      if (acp == 0.0) continue;
      for (const auto& t : tuples) {
        cplx term = ac * acp;
        std::vector<bool> detected(static_cast<std::size_t>(n), false);
        for (int j = 0; j < k; ++j) {
          const int alpha = t[static_cast<std::size_t>(j)];
          detected[static_cast<std::size_t>(alpha)] = true;
          const auto& w = psi[static_cast<std::size_t>(j)];
          term *= std::conj(w[static_cast<std::size_t>(configs[c][static_cast<std::size_t>(alpha)])]) *
                  w[static_cast<std::size_t>(configs[cp][static_cast<std::size_t>(alpha)])];
        }
        for (int g = 0; g < n && term != 0.0; ++g)
          if (!detected[static_cast<std::size_t>(g)])
            term *= s(configs[c][static_cast<std::size_t>(g)], configs[cp][static_cast<std::size_t>(g)]);
        total += term;
      }
    }
  }
  return total.real();
}

Eigen::MatrixXcd partial_trace(const ManyBodyState& state, std::span<const int> kept) {
  const Basis& basis = state.basis();
  const int n = basis.n_sites();
  std::vector<int> keep(kept.begin(), kept.end());
  std::sort(keep.begin(), keep.end());
  Eigen::Index rows = 1;
  for (std::size_t i = 0; i < keep.size(); ++i) rows *= n;
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(rows, rows);
  const auto& a = state.amplitudes();
  for (std::size_t i = 0; i < basis.dimension(); ++i) {
    const Configuration ci = basis.state_of(i);
    for (std::size_t j = 0; j < basis.dimension(); ++j) {
      const Configuration cj = basis.state_of(j);
      bool same_rest = true;
      for (int g = 0; g < n && same_rest; ++g)
        if (!std::binary_search(keep.begin(), keep.end(), g))
          same_rest = ci[static_cast<std::size_t>(g)] == cj[static_cast<std::size_t>(g)];
      if (!same_rest) continue;
      Eigen::Index r = 0, c = 0;
      for (int g : keep) {
        r = r * n + ci[static_cast<std::size_t>(g)];
        c = c * n + cj[static_cast<std::size_t>(g)];
      }
      rho(r, c) += a[static_cast<Eigen::Index>(i)] * std::conj(a[static_cast<Eigen::Index>(j)]);
    }
  }
  return rho;
}

}  // namespace mott::reference
