#include "mott/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mott/errors.hpp"

namespace mott {

void ModelParams::validate() const {
  if (!(t0 >= 0.0) || !std::isfinite(t0)) throw ValidationError("t0 must be finite and >= 0");
  if (!(u0 >= 0.0) || !std::isfinite(u0)) throw ValidationError("U0 must be finite and >= 0");
  if (n_sites < 2) throw ValidationError("N must be at least 2");
}

std::vector<std::pair<int, int>> ring_bonds(int n_sites) {
  std::vector<std::pair<int, int>> bonds;
  for (int i = 0; i < n_sites; ++i) {
    const int j = (i + 1) % n_sites;
    std::pair<int, int> bond{std::min(i, j), std::max(i, j)};
    if (std::find(bonds.begin(), bonds.end(), bond) == bonds.end()) bonds.push_back(bond);
  }
  return bonds;
}

namespace {

double interaction_energy(const Configuration& occupation, double u0) {
  double e = 0.0;
  for (int n : occupation) e += 0.5 * u0 * n * (n - 1);
  return e;
}

std::vector<std::vector<int>> neighbour_lists(int n_sites) {
  std::vector<std::vector<int>> neighbours(static_cast<std::size_t>(n_sites));
  for (auto [i, j] : ring_bonds(n_sites)) {
    neighbours[static_cast<std::size_t>(i)].push_back(j);
    neighbours[static_cast<std::size_t>(j)].push_back(i);
  }
  return neighbours;
}

SparseOperator build_distinguishable(const ModelParams& p, const Basis& basis) {
  const int n = p.n_sites;
  const auto neighbours = neighbour_lists(n);
  const std::size_t degree = neighbours.front().size();
  const bool hopping = p.t0 != 0.0;
  const std::size_t per_row = 1 + (hopping ? static_cast<std::size_t>(n) * degree : 0);
  const std::size_t dim = basis.dimension();

  std::vector<MatrixEntry> entries(dim * per_row);
  std::vector<std::size_t> strides(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) strides[static_cast<std::size_t>(a)] = basis.isotope_stride(a);

#pragma omp parallel for schedule(static) if (dim > 4096)
  for (std::ptrdiff_t r = 0; r < static_cast<std::ptrdiff_t>(dim); ++r) {
    const auto row = static_cast<std::size_t>(r);
    const Configuration sites = basis.state_of(row);
    Configuration occupation(static_cast<std::size_t>(n), 0);
    for (int s : sites) ++occupation[static_cast<std::size_t>(s)];
    std::size_t k = row * per_row;
    entries[k++] = {row, row, interaction_energy(occupation, p.u0)};
    if (!hopping) continue;
    for (int a = 0; a < n; ++a) {
      const int from = sites[static_cast<std::size_t>(a)];
      for (int to : neighbours[static_cast<std::size_t>(from)]) {
        const std::size_t col = row + static_cast<std::size_t>(to) * strides[static_cast<std::size_t>(a)] -
                                static_cast<std::size_t>(from) * strides[static_cast<std::size_t>(a)];
        entries[k++] = {row, col, -p.t0};
      }
    }
  }
  return SparseOperator(dim, std::move(entries));
}

SparseOperator build_bosonic(const ModelParams& p, const Basis& basis) {
  const auto bonds = ring_bonds(p.n_sites);
  const std::size_t dim = basis.dimension();
  std::vector<MatrixEntry> entries;
  entries.reserve(dim * (1 + 2 * bonds.size()));
  for (std::size_t col = 0; col < dim; ++col) {
    const Configuration occ = basis.state_of(col);
    entries.push_back({col, col, interaction_energy(occ, p.u0)});
    if (p.t0 == 0.0) continue;
    for (auto [i, j] : bonds) {
      for (auto [from, to] : {std::pair{i, j}, std::pair{j, i}}) {
        const int n_from = occ[static_cast<std::size_t>(from)];
        if (n_from == 0) continue;
        const int n_to = occ[static_cast<std::size_t>(to)];
        Configuration hopped = occ;
        --hopped[static_cast<std::size_t>(from)];
        ++hopped[static_cast<std::size_t>(to)];
        const std::size_t row = basis.index_of(hopped);
        entries.push_back({row, col, -p.t0 * std::sqrt(static_cast<double>(n_from) * (n_to + 1))});
      }
    }
  }
  return SparseOperator(dim, std::move(entries));
}

}  // namespace

SparseOperator build_hamiltonian(const ModelParams& params, const Basis& basis) {
  params.validate();
  if (params.statistics != basis.statistics() || params.n_sites != basis.n_sites()) {
    std::ostringstream msg;
    msg << "model (" << to_string(params.statistics) << ", N=" << params.n_sites
        << ") does not match basis (" << to_string(basis.statistics()) << ", N=" << basis.n_sites()
        << ")";
    throw ValidationError(msg.str());
  }
  return params.statistics == Statistics::distinguishable ? build_distinguishable(params, basis)
                                                          : build_bosonic(params, basis);
}

}  // namespace mott
