// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mott/cli.hpp"
#include "mott/eigensolver.hpp"
#include "mott/entanglement.hpp"
#include "mott/hamiltonian.hpp"
#include "mott/observables.hpp"
#include "mott/timeofflight.hpp"

using namespace mott;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::vector<double> log_sweep(double lo, double hi, int n) {
  std::vector<double> r;
  for (int i = 0; i < n; ++i) r.push_back(std::pow(10.0, std::log10(lo) + (std::log10(hi) - std::log10(lo)) * i / (n - 1)));
  return r;
}

ManyBodyState ground(const BasisPtr& b, double ratio) {
  const auto p = ModelParams::from_ratio(b->n_sites(), ratio, b->statistics());
  return ground_state(build_hamiltonian(p, *b), b).state;
}

BasisPtr dist4() { return Basis::enumerate(Statistics::distinguishable, 4); }
BasisPtr bose4() { return Basis::enumerate(Statistics::bosonic, 4); }

Outcome degeneracy_ledger() {
  auto b = dist4();
  const auto mott = group_levels(spectrum_lowest(build_hamiltonian({4, 0.0, 1.6, Statistics::distinguishable}, *b), 30));
  const double t0 = 0.7;
  const auto free = group_levels(spectrum_lowest(build_hamiltonian({4, t0, 0.0, Statistics::distinguishable}, *b), 12));
  const bool ok = std::abs(mott[0].energy) < 1e-9 && mott[0].multiplicity == 24 &&
                  std::abs(free[0].energy + 8 * t0) < 1e-9 && free[0].multiplicity == 1 &&
                  std::abs(free[1].energy - free[0].energy - 2 * t0) < 1e-9 && free[1].multiplicity == 8;
  return {ok, "t0=0: " + std::to_string(mott[0].multiplicity) + " at " + fmt(mott[0].energy) +
                  "; U0=0: E0=" + fmt(free[0].energy) + " gap=" + fmt(free[1].energy - free[0].energy) +
                  " x" + std::to_string(free[1].multiplicity)};
}

Outcome statistics_agreement() {
  auto bd = dist4(), bb = bose4();
  double worst = 0.0;
  for (double r : log_sweep(1e-3, 1e2, 20)) {
    const double ed = ground_state(build_hamiltonian(ModelParams::from_ratio(4, r, Statistics::distinguishable), *bd), bd).energy;
    const double eb = ground_state(build_hamiltonian(ModelParams::from_ratio(4, r, Statistics::bosonic), *bb), bb).energy;
    worst = std::max(worst, std::abs(ed - eb));
  }
  return {worst <= 1e-8, "max |E0 dist - E0 bose| = " + fmt(worst)};
}

Outcome ground_state_identification() {
  auto b = dist4();
  const double mi = std::norm(overlap(ground(b, 1e-2), reference_mi_sym(b)));
  const double sf = std::norm(overlap(ground(b, 1e2), reference_sf(b)));
  return {mi > 0.99 && sf > 0.99, "|<mi_sym|gs(1e-2)>|^2 = " + fmt(mi) + ", |<sf|gs(1e2)>|^2 = " + fmt(sf)};
}

Outcome visibility_sweep() {
  auto b = dist4();
  std::vector<double> v;
  for (double r : log_sweep(1e-3, 1e2, 40)) v.push_back(visibility(momentum_occupation(ground(b, r))));
  bool monotone = true;
  for (std::size_t i = 1; i < v.size(); ++i) monotone = monotone && v[i] >= v[i - 1] - 1e-9;
  return {v.front() < 0.05 && v.back() > 0.95 && monotone,
          "V(1e-3) = " + fmt(v.front()) + ", V(1e2) = " + fmt(v.back()) + (monotone ? ", monotone" : ", NOT monotone")};
}

Outcome moment_oracles() {
  double worst = 0.0;
  for (int n = 2; n <= 4; ++n) {
    auto b = Basis::enumerate(Statistics::distinguishable, n);
    std::vector<int> id(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
    const ManyBodyState states[] = {reference_sf(b), reference_mi_sym(b), reference_mi_perm(b, id)};
    const LimitState limits[] = {LimitState::sf, LimitState::mi_sym, LimitState::mi_single};
    for (int s = 0; s < 3; ++s) {
      const MomentumDistribution dist(states[s]);
      const auto k = momentum_grid(n);
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
          const int idx[] = {a, c};
          worst = std::max(worst, std::abs(dist.moment(idx) - analytic_moment2(limits[s], n, k[static_cast<std::size_t>(a)], k[static_cast<std::size_t>(c)])));
          if (n != 4) continue;
          for (int e = 0; e < n; ++e) {
            const int idx3[] = {a, c, e};
            worst = std::max(worst, std::abs(dist.moment(idx3) - analytic_moment3_n4(limits[s], k[static_cast<std::size_t>(a)], k[static_cast<std::size_t>(c)], k[static_cast<std::size_t>(e)])));
          }
        }
    }
  }
  return {worst <= 1e-10, "max deviation from closed forms = " + fmt(worst)};
}

Outcome sum_rules() {
  double worst = 0.0;
  std::mt19937 rng(2024);
  std::normal_distribution<double> g;
  for (int n = 2; n <= 4; ++n) {
    auto b = Basis::enumerate(Statistics::distinguishable, n);
    for (int trial = 0; trial < 4; ++trial) {
      Eigen::VectorXcd v(static_cast<Eigen::Index>(b->dimension()));
      for (auto& x : v) x = cplx(g(rng), g(rng));
      const ManyBodyState s(b, v);
      const MomentumDistribution dist(s);
      double s1 = 0, s2 = 0, s3 = 0;
      for (double nk : momentum_occupation(s)) s1 += nk;
      for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
          const int k2[] = {a, c};
          s2 += dist.moment(k2);
          for (int e = 0; e < n; ++e) {
            const int k3[] = {a, c, e};
            s3 += dist.moment(k3);
          }
        }
      worst = std::max({worst, std::abs(s1 - n), std::abs(s2 - n * (n - 1)), std::abs(s3 - n * (n - 1) * (n - 2))});
    }
  }
  return {worst <= 1e-9, "max sum-rule violation = " + fmt(worst)};
}

Outcome time_of_flight() {
  auto b = dist4();
  TofParams p;
  p.grid = default_grid(p);
  const double step = p.grid[1] - p.grid[0];
  const int perm[] = {0, 1, 2, 3};
  const auto sym = reference_mi_sym(b), single = reference_mi_perm(b, perm), sf = reference_sf(b);

  const double c_density = fringe_contrast(density_profile(sym, p));
  const auto peaks = major_peaks(envelope_removed(density_profile(sf, p)));
  const double g = 2 * std::numbers::pi * p.release_time;
  bool peaks_ok = peaks.size() == 3;
  double offset = 0.0;
  for (std::size_t i = 0; peaks_ok && i < 3; ++i) {
    offset = std::max(offset, std::abs(p.grid[peaks[i]] - (static_cast<double>(i) - 1.0) * g));
    peaks_ok = offset <= 0.5 * step;
  }
  const double s2 = fringe_contrast(corr2(sym, p)), s4 = fringe_contrast(corr4(sym, p));
  const double p2 = fringe_contrast(corr2(single, p)), p4 = fringe_contrast(corr4(single, p));
  const bool ok = c_density < 0.02 && peaks_ok && s2 > 0.2 && s4 > 0.2 && p2 < 0.02 && p4 < 0.02;
  return {ok, "mi_sym density " + fmt(c_density) + "; sf peaks " + std::to_string(peaks.size()) + " off by " +
                  fmt(offset) + " (half step " + fmt(0.5 * step) + "); corr2/corr4 mi_sym " + fmt(s2) + "/" +
                  fmt(s4) + ", mi_perm " + fmt(p2) + "/" + fmt(p4)};
}

Outcome far_field_mapping() {
  const TofParams p;
  auto b = dist4();
  double worst = 0.0;
  const std::pair<ManyBodyState, LimitState> cases[] = {{reference_mi_sym(b), LimitState::mi_sym},
                                                        {reference_sf(b), LimitState::sf}};
  for (const auto& [state, limit] : cases) {
    std::vector<double> measured, expected;
    for (double k : momentum_grid(4)) {
      const double x = p.position_of_momentum(k);
      const double det[2] = {0.0, x};
      measured.push_back(coincidence_density(state, det, p) / envelope(x, p));
      expected.push_back(analytic_moment2(limit, 4, k, 0.0));
    }
    const double m0 = *std::max_element(measured.begin(), measured.end());
    const double e0 = *std::max_element(expected.begin(), expected.end());
    for (std::size_t i = 0; i < measured.size(); ++i) {
      const double e = expected[i] / e0, m = measured[i] / m0;
      worst = std::max(worst, e > 0 ? std::abs(m - e) / e : std::abs(m));
    }
  }
  return {worst <= 0.05, "max deviation of normalized corr2 from M2(k, 0) = " + fmt(worst)};
}

Outcome quantum_eraser() {
  TofParams p;
  p.grid = default_grid(p);
  const double step = p.grid[1] - p.grid[0];
  const auto e = eraser_demo(p);
  const double cu = fringe_contrast(e.unconditional), cp = fringe_contrast(e.conditioned_plus);
  const auto plus = major_peaks(envelope_removed(e.conditioned_plus));
  const auto minus = major_peaks(envelope_removed(e.conditioned_minus));
  double worst = 0.0;
  int checked = 0;
  for (std::size_t j : minus) {
    const auto next = std::upper_bound(plus.begin(), plus.end(), j);
    if (next == plus.begin() || next == plus.end()) continue;
    worst = std::max(worst, std::abs(p.grid[j] - 0.5 * (p.grid[*(next - 1)] + p.grid[*next])));
    ++checked;
  }
  const bool ok = cu < 0.02 && cp > 0.5 && checked > 0 && worst <= step;
  return {ok, "unconditional " + fmt(cu) + ", conditioned + " + fmt(cp) + ", - peaks off midpoints by " + fmt(worst) +
                  " over " + std::to_string(checked) + " gaps"};
}

Outcome entanglement_sweep() {
  auto bd = dist4(), bb = bose4();
  const double s_mott = particle_entanglement(ground(bd, 1e-3));
  const double s_sf = particle_entanglement(ground(bd, 1e2));
  const auto ratios = log_sweep(1e-3, 1e2, 40);
  std::vector<double> eb;
  for (double r : ratios) eb.push_back(operational_entanglement_bosonic(ground(bb, r)).value);
  const auto top = static_cast<std::size_t>(std::max_element(eb.begin(), eb.end()) - eb.begin());
  int turns = 0;
  for (std::size_t i = 2; i < eb.size(); ++i)
    if ((eb[i] - eb[i - 1]) * (eb[i - 1] - eb[i - 2]) < 0) ++turns;
  const bool ok = std::abs(s_mott - std::log2(6.0)) < 0.05 && s_sf < 0.05 && eb.front() < 0.02 && turns == 1 &&
                  top > 0 && top + 1 < eb.size() && std::abs(ratios[top] - 0.16) <= 0.03;
  return {ok, "S(1e-3) = " + fmt(s_mott) + " (log2 6 = " + fmt(std::log2(6.0)) + "), S(1e2) = " + fmt(s_sf) +
                  "; E_b(1e-3) = " + fmt(eb.front()) + ", max " + fmt(eb[top]) + " at " + fmt(ratios[top]) +
                  ", " + std::to_string(turns) + " turning point(s)"};
}

Outcome gap_scaling() {
  auto b = dist4();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto ratios = log_sweep(1e-3, 1e-2, 10);
  for (double r : ratios) {
    const auto p = ModelParams::from_ratio(4, r, Statistics::distinguishable);
    const auto e = spectrum_lowest(build_hamiltonian(p, *b), 2);
    const double lx = std::log(p.t0), ly = std::log(e[1] - e[0]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  const double n = static_cast<double>(ratios.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return {std::abs(slope - 2.0) <= 0.2, "log-log slope = " + fmt(slope)};
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "simulate_acceptance";
  fs::create_directories(dir);
  auto strip = [](const fs::path& p) {
    std::ifstream in(p);
    std::string line, out;
    while (std::getline(in, line))
      if (line.rfind("# generated:", 0) != 0) out += line + "\n";
    return out;
  };
  bool same = true;
  std::ostringstream sink;
  for (auto sub : {cli::Subcommand::spectrum, cli::Subcommand::visibility, cli::Subcommand::entanglement,
                   cli::Subcommand::tof_corr2}) {
    cli::RunConfig c;
    c.subcommand = sub;
    c.points = 6;
    c.grid = 101;
    if (sub == cli::Subcommand::tof_corr2) c.ratios = {1e-2, 1e2};
    if (sub == cli::Subcommand::entanglement) c.stats = cli::StatsChoice::bose;
    c.out = (dir / "a.csv").string();
    cli::run(c, sink);
    c.out = (dir / "b.csv").string();
    cli::run(c, sink);
    same = same && strip(dir / "a.csv") == strip(dir / "b.csv") && !strip(dir / "a.csv").empty();
  }
  fs::remove_all(dir);
  return {same, same ? "repeated runs byte-identical" : "outputs differ"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"degeneracy ledger", degeneracy_ledger},
      {"statistics agreement", statistics_agreement},
      {"ground-state identification", ground_state_identification},
      {"visibility", visibility_sweep},
      {"momentum-moment oracles", moment_oracles},
      {"sum rules", sum_rules},
      {"time-of-flight reproduction", time_of_flight},
      {"far-field mapping", far_field_mapping},
      {"quantum eraser", quantum_eraser},
      {"entanglement", entanglement_sweep},
      {"gap scaling", gap_scaling},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
