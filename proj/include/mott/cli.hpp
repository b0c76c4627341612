#pragma once

#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mott/hilbert.hpp"
#include "mott/timeofflight.hpp"

namespace mott::cli {

enum class Subcommand { spectrum, visibility, tof_density, tof_corr2, tof_corr4, eraser, entanglement };
enum class OutputFormat { csv, json };
enum class StatsChoice { dist, bose, both };
enum class StateChoice { ground, sf, mi_sym, mi_perm };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Subcommand subcommand = Subcommand::spectrum;
  int n = 4;
  StatsChoice stats = StatsChoice::dist;
  std::vector<double> ratios;  // explicit list; empty selects the log range
  double ratio_min = 1e-3;
  double ratio_max = 1e2;
  int points = 40;
  int levels = 15;
  double time = 50.0;
  int grid = 801;
  KernelMode kernel = KernelMode::orthonormal;
  std::optional<double> sigma = 0.02;  // nullopt: solve from t0 at each ratio
  StateChoice state = StateChoice::ground;
  std::string out;  // empty: <subcommand>.<format>
  OutputFormat format = OutputFormat::csv;
  bool timestamp = true;

  // Ratios evaluated by this run, ascending for sweeps.
  std::vector<double> sweep() const;
  void validate() const;
};

std::string_view to_string(Subcommand s);

// Throws ConfigError naming the offending field. Returns nullopt after printing --help.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& help_out);

// Executes the run; returns the written file paths. Summary goes to `summary`.
std::vector<std::string> run(const RunConfig& config, std::ostream& summary);

// Full front-end: parse, run, map failures to exit codes (0 ok, 2 config, 3 numerical).
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace mott::cli
