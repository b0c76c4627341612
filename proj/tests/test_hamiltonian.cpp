#include "mott/hamiltonian.hpp"

#include <random>

#include <gtest/gtest.h>

#include "mott/errors.hpp"

using namespace mott;

namespace {

Eigen::VectorXcd random_vector(std::size_t n, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = cplx(g(rng), g(rng));
  return v;
}

// Permutation of basis indices induced by relabeling configurations.
template <class Relabel>
Eigen::VectorXcd permute(const Basis& b, const Eigen::VectorXcd& v, Relabel relabel) {
  Eigen::VectorXcd out(v.size());
  for (std::size_t i = 0; i < b.dimension(); ++i)
    out[static_cast<Eigen::Index>(b.index_of(relabel(b.state_of(i))))] = v[static_cast<Eigen::Index>(i)];
  return out;
}

Configuration translate_dist(Configuration c, int n) {
  for (int& s : c) s = (s + 1) % n;
  return c;
}

Configuration translate_bose(const Configuration& occ) {
  Configuration out(occ.size());
  for (std::size_t i = 0; i < occ.size(); ++i) out[(i + 1) % occ.size()] = occ[i];
  return out;
}

}  // namespace

TEST(hamiltonian, ring_bonds) {
  EXPECT_EQ(ring_bonds(2).size(), 1u);
  EXPECT_EQ(ring_bonds(4).size(), 4u);
  const auto b4 = ring_bonds(4);
  EXPECT_NE(std::find(b4.begin(), b4.end(), std::pair{0, 3}), b4.end());
}

TEST(hamiltonian, zero_tunneling_is_diagonal) {
  auto b = Basis::enumerate(Statistics::distinguishable, 4);
  const double u0 = 1.6;
  auto h = build_hamiltonian({4, 0.0, u0, Statistics::distinguishable}, *b);
  EXPECT_EQ(h.nnz(), 256u);
  int zero_energy = 0;
  for (const auto& e : h.entries()) {
    ASSERT_EQ(e.row, e.col);
    if (e.value.real() == 0.0) ++zero_energy;
    else EXPECT_GE(e.value.real(), u0);
  }
  EXPECT_EQ(zero_energy, 24);
}

TEST(hamiltonian, bosonic_two_site_diagonal) {
  auto b = Basis::enumerate(Statistics::bosonic, 2);
  const double u0 = 0.7;
  auto h = build_hamiltonian({2, 0.0, u0, Statistics::bosonic}, *b);
  const int pair[] = {1, 1}, left[] = {2, 0}, right[] = {0, 2};
  const auto d = h.to_dense();
  EXPECT_EQ(d(b->index_of(pair), b->index_of(pair)).real(), 0.0);
  EXPECT_DOUBLE_EQ(d(b->index_of(left), b->index_of(left)).real(), u0);
  EXPECT_DOUBLE_EQ(d(b->index_of(right), b->index_of(right)).real(), u0);
}

TEST(hamiltonian, hopping_elements) {
  auto b = Basis::enumerate(Statistics::bosonic, 3);
  auto h = build_hamiltonian({3, 0.5, 1.0, Statistics::bosonic}, *b);
  const int from[] = {2, 1, 0}, to[] = {1, 2, 0};
  EXPECT_NEAR(h.to_dense()(b->index_of(to), b->index_of(from)).real(), -0.5 * std::sqrt(2.0 * 2.0), 1e-15);

  auto d = Basis::enumerate(Statistics::distinguishable, 3);
  auto hd = build_hamiltonian({3, 0.5, 1.0, Statistics::distinguishable}, *d);
  // isotope 1 steps around the periodic boundary 0 -> 2
  const int a[] = {1, 0, 2}, c[] = {1, 2, 2};
  EXPECT_DOUBLE_EQ(hd.to_dense()(d->index_of(c), d->index_of(a)).real(), -0.5);
  const int stacked[] = {1, 1, 1};
  EXPECT_DOUBLE_EQ(hd.to_dense()(d->index_of(stacked), d->index_of(stacked)).real(), 3.0);
}

TEST(hamiltonian, mismatched_basis) {
  auto b = Basis::enumerate(Statistics::bosonic, 4);
  EXPECT_THROW(build_hamiltonian({4, 1.0, 1.0, Statistics::distinguishable}, *b), ValidationError);
  EXPECT_THROW(build_hamiltonian({3, 1.0, 1.0, Statistics::bosonic}, *b), ValidationError);
  EXPECT_THROW(build_hamiltonian({4, -1.0, 1.0, Statistics::bosonic}, *b), ValidationError);
}

TEST(hamiltonian, apply_properties) {
  auto b = Basis::enumerate(Statistics::distinguishable, 4);
  auto diag = build_hamiltonian({4, 0.0, 1.6, Statistics::distinguishable}, *b);
  const int stacked[] = {2, 2, 0, 1};
  const auto idx = b->index_of(stacked);
  const auto basis_state = ManyBodyState::basis_state(b, idx);
  const Eigen::VectorXcd hx = diag.apply(basis_state);
  EXPECT_DOUBLE_EQ(hx[static_cast<Eigen::Index>(idx)].real(), 1.6);
  EXPECT_NEAR((hx - 1.6 * basis_state.amplitudes()).norm(), 0.0, 1e-15);

  auto h = build_hamiltonian({4, 0.37, 1.6, Statistics::distinguishable}, *b);
  const auto x = random_vector(256, 1), y = random_vector(256, 2);
  EXPECT_LT((h.apply(Eigen::VectorXcd(x + y)) - h.apply(x) - h.apply(y)).norm(), 1e-12);
  EXPECT_LT(std::abs(h.expectation(x).imag()), 1e-12 * h.expectation(x).real() + 1e-12);
  EXPECT_THROW(h.apply(Eigen::VectorXcd(random_vector(10, 3))), ValidationError);
}

TEST(hamiltonian, hermitian_by_construction) {
  for (auto stats : {Statistics::distinguishable, Statistics::bosonic})
    for (int n = 2; n <= 5; ++n) {
      auto b = Basis::enumerate(stats, n);
      auto h = build_hamiltonian({n, 0.83, 1.3, stats}, *b);
      EXPECT_EQ(h.hermiticity_defect(), 0.0);
      EXPECT_TRUE(h.is_real());
    }
}

TEST(hamiltonian, translation_symmetry) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(0.01, 3.0);
  auto bd = Basis::enumerate(Statistics::distinguishable, 4);
  auto bb = Basis::enumerate(Statistics::bosonic, 4);
  for (int trial = 0; trial < 5; ++trial) {
    const double t0 = u(rng), u0 = u(rng);
    auto hd = build_hamiltonian({4, t0, u0, Statistics::distinguishable}, *bd);
    auto v = random_vector(bd->dimension(), 100 + trial);
    auto tv = permute(*bd, v, [](Configuration c) { return translate_dist(std::move(c), 4); });
    auto thv = permute(*bd, hd.apply(v), [](Configuration c) { return translate_dist(std::move(c), 4); });
    EXPECT_LT((hd.apply(tv) - thv).norm(), 1e-12);

    auto hb = build_hamiltonian({4, t0, u0, Statistics::bosonic}, *bb);
    auto w = random_vector(bb->dimension(), 200 + trial);
    auto tw = permute(*bb, w, translate_bose);
    auto thw = permute(*bb, hb.apply(w), translate_bose);
    EXPECT_LT((hb.apply(tw) - thw).norm(), 1e-12);
  }
}

TEST(hamiltonian, isotope_exchange_symmetry) {
  auto b = Basis::enumerate(Statistics::distinguishable, 4);
  auto h = build_hamiltonian({4, 0.4, 1.6, Statistics::distinguishable}, *b);
  for (auto [a1, a2] : {std::pair{0, 1}, std::pair{1, 3}, std::pair{0, 2}}) {
    auto swap = [a1, a2](Configuration c) {
      std::swap(c[static_cast<std::size_t>(a1)], c[static_cast<std::size_t>(a2)]);
      return c;
    };
    auto v = random_vector(256, 7);
    EXPECT_LT((h.apply(permute(*b, v, swap)) - permute(*b, h.apply(v), swap)).norm(), 1e-12);
  }
}
