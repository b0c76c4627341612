#include "mott/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mott/eigensolver.hpp"
#include "mott/entanglement.hpp"
#include "mott/errors.hpp"
#include "mott/hamiltonian.hpp"
#include "mott/observables.hpp"

namespace mott::cli {

namespace {

const std::map<std::string, Subcommand>& subcommand_names() {
  static const std::map<std::string, Subcommand> names{
      {"spectrum", Subcommand::spectrum},       {"visibility", Subcommand::visibility},
      {"tof-density", Subcommand::tof_density}, {"tof-corr2", Subcommand::tof_corr2},
      {"tof-corr4", Subcommand::tof_corr4},     {"eraser", Subcommand::eraser},
      {"entanglement", Subcommand::entanglement}};
  return names;
}

bool is_tof(Subcommand s) {
  return s == Subcommand::tof_density || s == Subcommand::tof_corr2 || s == Subcommand::tof_corr4;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct Table {
  std::string name;
  std::vector<std::pair<std::string, std::string>> metadata;
  std::string units;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::vector<Statistics> selected_statistics(StatsChoice c) {
  switch (c) {
    case StatsChoice::dist: return {Statistics::distinguishable};
    case StatsChoice::bose: return {Statistics::bosonic};
    case StatsChoice::both: return {Statistics::distinguishable, Statistics::bosonic};
  }
  return {};
}

// Evaluates f(i) for every sweep point; rows stay in sweep order.
template <class F>
std::vector<std::vector<double>> parallel_rows(std::size_t count, F&& f) {
  std::vector<std::vector<double>> rows(count);
  std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(count); ++i) {
    try {
      rows[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

std::vector<std::pair<std::string, std::string>> common_metadata(const RunConfig& c, Statistics s) {
  return {{"subcommand", std::string(to_string(c.subcommand))},
          {"N", std::to_string(c.n)},
          {"stats", std::string(to_string(s))},
          {"U0", format_double(kDefaultU0)},
          {"boundary", "periodic"}};
}

Table spectrum_table(const RunConfig& c, Statistics s, std::ostream& summary) {
  const auto basis = Basis::enumerate(s, c.n);
  const auto ratios = c.sweep();
  const std::size_t k = std::min<std::size_t>(static_cast<std::size_t>(c.levels), basis->dimension());
  Table t;
  t.name = std::string("spectrum_") + std::string(to_string(s));
  t.metadata = common_metadata(c, s);
  t.metadata.emplace_back("levels", std::to_string(k));
  t.units = "ratio = t0/U0; energies E_i/U0, ascending with multiplicity";
  t.columns.push_back("ratio");
  for (std::size_t i = 0; i < k; ++i) t.columns.push_back("e" + std::to_string(i));
  t.rows = parallel_rows(ratios.size(), [&](std::size_t i) {
    const auto params = ModelParams::from_ratio(c.n, ratios[i], s);
    const auto h = build_hamiltonian(params, *basis);
    std::vector<double> row{ratios[i]};
    for (double e : spectrum_lowest(h, k)) row.push_back(e / params.u0);
    return row;
  });
  if (!t.rows.empty()) {
    const auto& first = t.rows.front();
    summary << t.name << ": " << t.rows.size() << " points, E0/U0 from " << format_double(first[1])
            << " (ratio " << format_double(first[0]) << ") to " << format_double(t.rows.back()[1])
            << " (ratio " << format_double(t.rows.back()[0]) << ")\n";
  }
  return t;
}

Table visibility_table(const RunConfig& c, Statistics s, std::ostream& summary) {
  const auto basis = Basis::enumerate(s, c.n);
  const auto ratios = c.sweep();
  Table t;
  t.name = std::string("visibility_") + std::string(to_string(s));
  t.metadata = common_metadata(c, s);
  t.units = "ratio = t0/U0; visibility dimensionless; n_k particles per momentum k = 2 pi n / N";
  t.columns = {"ratio", "visibility"};
  for (int kx = 0; kx < c.n; ++kx) t.columns.push_back("nk" + std::to_string(kx));
  t.rows = parallel_rows(ratios.size(), [&](std::size_t i) {
    const auto params = ModelParams::from_ratio(c.n, ratios[i], s);
    const auto gs = ground_state(build_hamiltonian(params, *basis), basis);
    const auto nk = momentum_occupation(gs.state);
    std::vector<double> row{ratios[i], visibility(nk)};
    row.insert(row.end(), nk.begin(), nk.end());
    return row;
  });
  if (!t.rows.empty())
    summary << t.name << ": V = " << format_double(t.rows.front()[1]) << " at ratio "
            << format_double(t.rows.front()[0]) << ", V = " << format_double(t.rows.back()[1])
            << " at ratio " << format_double(t.rows.back()[0]) << "\n";
  return t;
}

Table entanglement_table(const RunConfig& c, Statistics s, std::ostream& summary) {
  const auto basis = Basis::enumerate(s, c.n);
  const auto ratios = c.sweep();
  Table t;
  t.name = std::string("entanglement_") + std::string(to_string(s));
  t.metadata = common_metadata(c, s);
  if (s == Statistics::distinguishable) {
    t.units = "ratio = t0/U0; entropy in bits of isotopes {0..N/2-1}";
    t.columns = {"ratio", "entropy_bits"};
  } else {
    t.units = "ratio = t0/U0; operational entanglement in bits; p_n, E_n per block particle number";
    t.columns = {"ratio", "operational_bits"};
    for (int n = 0; n <= c.n; ++n) t.columns.push_back("p" + std::to_string(n));
    for (int n = 0; n <= c.n; ++n) t.columns.push_back("e" + std::to_string(n));
  }
  t.rows = parallel_rows(ratios.size(), [&](std::size_t i) {
    const auto params = ModelParams::from_ratio(c.n, ratios[i], s);
    const auto gs = ground_state(build_hamiltonian(params, *basis), basis);
    if (s == Statistics::distinguishable) return std::vector<double>{ratios[i], particle_entanglement(gs.state)};
    const auto op = operational_entanglement_bosonic(gs.state);
    std::vector<double> row{ratios[i], op.value};
    row.insert(row.end(), op.probabilities.begin(), op.probabilities.end());
    row.insert(row.end(), op.sector_entropies.begin(), op.sector_entropies.end());
    return row;
  });
  std::size_t best = 0;
  for (std::size_t i = 0; i < t.rows.size(); ++i)
    if (t.rows[i][1] > t.rows[best][1]) best = i;
  if (!t.rows.empty())
    summary << t.name << ": maximum " << format_double(t.rows[best][1]) << " bits at ratio "
            << format_double(t.rows[best][0]) << "\n";
  return t;
}

TofParams tof_params(const RunConfig& c, double ratio) {
  TofParams p;
  p.release_time = c.time;
  p.kernel = c.kernel;
  if (c.sigma) {
    p.sigma = *c.sigma;
  } else {
    if (std::isnan(ratio)) throw ConfigError("--sigma auto needs a ground state at a given ratio");
    try {
      p.sigma = solve_sigma(ratio * kDefaultU0, p.hbar, p.mass, p.lattice_constant);
    } catch (const BranchLimitError& e) {
      throw ConfigError(std::string("--sigma auto: ") + e.what());
    }
  }
  p.grid = default_grid(p, c.grid);
  return p;
}

Table tof_table(const RunConfig& c, std::ostream& summary) {
  if (c.stats != StatsChoice::dist) throw ConfigError("--stats: time-of-flight supports dist only");
  const auto basis = Basis::enumerate(Statistics::distinguishable, c.n);
  std::vector<double> ratios = c.state == StateChoice::ground ? c.sweep() : std::vector<double>{NAN};

  Table t;
  t.name = std::string(to_string(c.subcommand));
  t.metadata = common_metadata(c, Statistics::distinguishable);
  const char* state_names[] = {"ground", "sf", "mi-sym", "mi-perm"};
  t.metadata.emplace_back("state", state_names[static_cast<int>(c.state)]);
  t.metadata.emplace_back("time", format_double(c.time));
  t.metadata.emplace_back("kernel", c.kernel == KernelMode::orthonormal ? "orthonormal" : "exact");
  t.metadata.emplace_back("sigma", c.sigma ? format_double(*c.sigma) : "auto");
  t.units = "x in a0 (hbar = m = a0 = 1); raw coincidence density; normalized to unit maximum; "
            "envelope_removed divides by the centered-orbital envelope";
  t.columns = {"ratio", "sigma", "x", "raw", "normalized", "envelope_removed"};

  for (double ratio : ratios) {
    const TofParams p = tof_params(c, ratio);
    std::optional<ManyBodyState> state;
    switch (c.state) {
      case StateChoice::ground: {
        const auto params = ModelParams::from_ratio(c.n, ratio, Statistics::distinguishable);
        state = ground_state(build_hamiltonian(params, *basis), basis).state;
        break;
      }
      case StateChoice::sf: state = reference_sf(basis); break;
      case StateChoice::mi_sym: state = reference_mi_sym(basis); break;
      case StateChoice::mi_perm: {
        std::vector<int> identity(static_cast<std::size_t>(c.n));
        for (int i = 0; i < c.n; ++i) identity[static_cast<std::size_t>(i)] = i;
        state = reference_mi_perm(basis, identity);
        break;
      }
    }
    CorrelationCurve curve = c.subcommand == Subcommand::tof_density ? density_profile(*state, p)
                             : c.subcommand == Subcommand::tof_corr2 ? corr2(*state, p)
                                                                     : corr4(*state, p);
    const auto removed = envelope_removed(curve);
    for (std::size_t i = 0; i < curve.grid.size(); ++i)
      t.rows.push_back({ratio, p.sigma, curve.grid[i], curve.raw[i], curve.normalized[i], removed[i]});
    summary << t.name << ": ratio " << format_double(ratio) << ", sigma " << format_double(p.sigma)
            << ", fringe contrast " << format_double(fringe_contrast(curve)) << "\n";
  }
  return t;
}

Table eraser_table(const RunConfig& c, std::ostream& summary) {
  TofParams p;
  p.release_time = c.time;
  p.kernel = c.kernel;
  p.sigma = c.sigma.value_or(0.02);
  p.grid = default_grid(p, c.grid);
  const auto curves = eraser_demo(p);
  Table t;
  t.name = "eraser";
  t.metadata = {{"subcommand", "eraser"}, {"N", "2"}, {"stats", "dist"}, {"state", "mi-sym"},
                {"time", format_double(c.time)}, {"sigma", format_double(p.sigma)}};
  t.units = "x in a0; single-particle probability densities of particle 1";
  t.columns = {"x", "unconditional", "conditioned_plus", "conditioned_minus"};
  for (std::size_t i = 0; i < p.grid.size(); ++i)
    t.rows.push_back({p.grid[i], curves.unconditional.raw[i], curves.conditioned_plus.raw[i],
                      curves.conditioned_minus.raw[i]});
  summary << "eraser: contrast unconditional " << format_double(fringe_contrast(curves.unconditional))
          << ", conditioned on + " << format_double(fringe_contrast(curves.conditioned_plus))
          << ", conditioned on - " << format_double(fringe_contrast(curves.conditioned_minus)) << "\n";
  return t;
}

void write_csv(const Table& t, const RunConfig& c, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("--out: cannot open " + path);
  out << "# simulate " << to_string(c.subcommand) << "\n";
  if (c.timestamp) out << "# generated: " << utc_timestamp() << "\n";
  for (const auto& [k, v] : t.metadata) out << "# " << k << ": " << v << "\n";
  out << "# units: " << t.units << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
  out << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << "\n";
  }
}

void write_json(const std::vector<Table>& tables, const RunConfig& c, const std::string& path) {
  nlohmann::ordered_json doc;
  doc["metadata"]["program"] = "simulate";
  doc["metadata"]["subcommand"] = to_string(c.subcommand);
  if (c.timestamp) doc["metadata"]["generated"] = utc_timestamp();
  for (const auto& t : tables) {
    nlohmann::ordered_json jt;
    jt["name"] = t.name;
    for (const auto& [k, v] : t.metadata) jt["metadata"][k] = v;
    jt["units"] = t.units;
    jt["columns"] = t.columns;
    nlohmann::ordered_json data = nlohmann::ordered_json::object();
    for (std::size_t col = 0; col < t.columns.size(); ++col) {
      nlohmann::ordered_json values = nlohmann::ordered_json::array();
      for (const auto& row : t.rows) {
        if (std::isfinite(row[col])) values.push_back(row[col]); else values.push_back(nullptr);
      }
      data[t.columns[col]] = std::move(values);
    }
    jt["data"] = std::move(data);
    doc["tables"].push_back(std::move(jt));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("--out: cannot open " + path);
  out << doc.dump(2) << "\n";
}

std::string suffixed(const std::string& path, Statistics s) {
  std::filesystem::path p(path);
  std::filesystem::path name = p.stem();
  name += "." + std::string(to_string(s));
  name += p.extension();
  return (p.parent_path() / name).string();
}

}  // namespace

std::string_view to_string(Subcommand s) {
  for (const auto& [name, value] : subcommand_names())
    if (value == s) return name;
  return "unknown";
}

std::vector<double> RunConfig::sweep() const {
  if (!ratios.empty()) return ratios;
  if (points == 1) return {ratio_min};
  std::vector<double> r(static_cast<std::size_t>(points));
  const double lo = std::log10(ratio_min), hi = std::log10(ratio_max);
  for (int i = 0; i < points; ++i) r[static_cast<std::size_t>(i)] = std::pow(10.0, lo + (hi - lo) * i / (points - 1));
  return r;
}

void RunConfig::validate() const {
  const bool dist_only = is_tof(subcommand) || subcommand == Subcommand::eraser;
  const int max_n = stats == StatsChoice::bose ? kMaxBosonicSites : kMaxDistinguishableSites;
  if (n < 2 || n > max_n) throw ConfigError("--n: " + std::to_string(n) + " outside [2, " + std::to_string(max_n) + "]");
  if (subcommand == Subcommand::tof_corr4 && n < 4) throw ConfigError("--n: tof-corr4 needs N >= 4");
  if (dist_only && stats != StatsChoice::dist) throw ConfigError("--stats: " + std::string(to_string(subcommand)) + " supports dist only");
  if (!(ratio_min > 0.0) || !(ratio_max >= ratio_min)) throw ConfigError("--ratio-min/--ratio-max: need 0 < min <= max");
  if (points < 1) throw ConfigError("--points: must be >= 1");
  for (double r : ratios)
    if (!(r > 0.0) || !std::isfinite(r)) throw ConfigError("--ratios: sweep values must be > 0");
  if (levels < 1) throw ConfigError("--levels: must be >= 1");
  if (!(time >= 0.0) || !std::isfinite(time)) throw ConfigError("--time: must be >= 0");
  if (grid < 3) throw ConfigError("--grid: need at least 3 points");
  if (sigma && !(*sigma > 0.0)) throw ConfigError("--sigma: must be > 0 or 'auto'");
}

std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& help_out) {
  RunConfig c;
  CLI::App app{"Exact diagonalization and time-of-flight simulation of distinguishable-particle "
               "and Bose-Hubbard rings",
               "simulate"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "flat key = value file; command-line flags take precedence");
  app.allow_config_extras(CLI::config_extras_mode::error);

  std::string stats = "dist", kernel = "orthonormal", format = "csv", state = "ground", sigma = "0.02";
  bool no_timestamp = false;
  app.add_option("--n", c.n, "sites = particles")->capture_default_str();
  app.add_option("--stats", stats, "dist | bose | both")->capture_default_str();
  app.add_option("--ratio-min", c.ratio_min, "smallest t0/U0 of the log sweep")->capture_default_str();
  app.add_option("--ratio-max", c.ratio_max, "largest t0/U0 of the log sweep")->capture_default_str();
  app.add_option("--points", c.points, "log-spaced sweep points")->capture_default_str();
  app.add_option("--ratios", c.ratios, "explicit comma-separated t0/U0 values")->delimiter(',');
  app.add_option("--levels", c.levels, "eigenvalues per spectrum row")->capture_default_str();
  app.add_option("--time", c.time, "release time in m a0^2 / hbar")->capture_default_str();
  app.add_option("--grid", c.grid, "detection grid points")->capture_default_str();
  app.add_option("--kernel", kernel, "orthonormal | exact")->capture_default_str();
  app.add_option("--sigma", sigma, "orbital width in a0^2, or 'auto' to solve from t0")->capture_default_str();
  app.add_option("--state", state, "ground | sf | mi-sym | mi-perm (time of flight)")->capture_default_str();
  app.add_option("--out", c.out, "output path");
  app.add_option("--format", format, "csv | json")->capture_default_str();
  app.add_flag("--no-timestamp", no_timestamp, "omit the generation timestamp");

  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, value] : subcommand_names()) subs[name] = app.add_subcommand(name);

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    help_out << app.help();
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }

  for (const auto& [name, sub] : subs)
    if (sub->parsed()) c.subcommand = subcommand_names().at(name);

  if (stats == "dist") c.stats = StatsChoice::dist;
  else if (stats == "bose") c.stats = StatsChoice::bose;
  else if (stats == "both") c.stats = StatsChoice::both;
  else throw ConfigError("--stats: expected dist, bose or both, got '" + stats + "'");

  if (kernel == "orthonormal") c.kernel = KernelMode::orthonormal;
  else if (kernel == "exact") c.kernel = KernelMode::exact_overlap;
  else throw ConfigError("--kernel: expected orthonormal or exact, got '" + kernel + "'");

  if (format == "csv") c.format = OutputFormat::csv;
  else if (format == "json") c.format = OutputFormat::json;
  else throw ConfigError("--format: expected csv or json, got '" + format + "'");

  if (state == "ground") c.state = StateChoice::ground;
  else if (state == "sf") c.state = StateChoice::sf;
  else if (state == "mi-sym") c.state = StateChoice::mi_sym;
  else if (state == "mi-perm") c.state = StateChoice::mi_perm;
  else throw ConfigError("--state: expected ground, sf, mi-sym or mi-perm, got '" + state + "'");

  if (sigma == "auto") {
    c.sigma.reset();
  } else {
    try {
      std::size_t used = 0;
      c.sigma = std::stod(sigma, &used);
      if (used != sigma.size()) throw std::invalid_argument(sigma);
    } catch (const std::exception&) {
      throw ConfigError("--sigma: expected a number or 'auto', got '" + sigma + "'");
    }
  }

  // Time-of-flight runs default to one weak- and one strong-tunneling point.
  if (is_tof(c.subcommand) && c.ratios.empty() && app.count("--ratio-min") == 0 &&
      app.count("--ratio-max") == 0 && app.count("--points") == 0)
    c.ratios = {1e-2, 1e2};

  c.timestamp = !no_timestamp;
  c.validate();
  return c;
}

std::vector<std::string> run(const RunConfig& config, std::ostream& summary) {
  config.validate();
  const std::string ext = config.format == OutputFormat::csv ? ".csv" : ".json";
  const std::string path = config.out.empty() ? std::string(to_string(config.subcommand)) + ext : config.out;

  std::vector<Table> tables;
  switch (config.subcommand) {
    case Subcommand::spectrum:
      for (auto s : selected_statistics(config.stats)) tables.push_back(spectrum_table(config, s, summary));
      break;
    case Subcommand::visibility:
      for (auto s : selected_statistics(config.stats)) tables.push_back(visibility_table(config, s, summary));
      break;
    case Subcommand::entanglement:
      for (auto s : selected_statistics(config.stats)) tables.push_back(entanglement_table(config, s, summary));
      break;
    case Subcommand::tof_density:
    case Subcommand::tof_corr2:
    case Subcommand::tof_corr4:
      tables.push_back(tof_table(config, summary));
      break;
    case Subcommand::eraser:
      tables.push_back(eraser_table(config, summary));
      break;
  }

  std::vector<std::string> written;
  if (config.format == OutputFormat::json) {
    write_json(tables, config, path);
    written.push_back(path);
  } else if (tables.size() == 1) {
    write_csv(tables.front(), config, path);
    written.push_back(path);
  } else {
    const auto stats = selected_statistics(config.stats);
    for (std::size_t i = 0; i < tables.size(); ++i) {
      written.push_back(suffixed(path, stats[i]));
      write_csv(tables[i], config, written.back());
    }
  }
  for (const auto& w : written) summary << "wrote " << w << "\n";
  return written;
}

int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  try {
    const auto config = parse_command_line(argc, argv, out);
    if (!config) return 0;
    run(*config, out);
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const SizeLimitError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const ConvergenceError& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace mott::cli
