#pragma once

// Named experiments over the library, with flat key=value configuration, CSV tables, a small
// SVG plot emitter and per-experiment assertions.

#include "tubekit/radial.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace tubekit {

/// Bad experiment name, unknown or malformed parameter. Maps to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
  std::string name;
  std::map<std::string, std::string> params;

  std::string get(const std::string& key, const std::string& fallback) const;
  long long get_int(const std::string& key, long long fallback) const;
  double get_double(const std::string& key, double fallback) const;
  /// Comma-separated integers, e.g. "8,10,12".
  std::vector<long long> get_int_list(const std::string& key, const std::vector<long long>& fallback) const;
};

/// `key = value` lines; '#' starts a comment. The key `experiment` sets the name.
ExperimentConfig parse_config(const std::string& text);
/// Applies `key=value` tokens on top of the config.
void apply_overrides(ExperimentConfig& cfg, const std::vector<std::string>& tokens);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string to_csv() const;
  /// Column values parsed as doubles; throws UsageError for a missing column.
  std::vector<double> column(const std::string& name) const;
};

Table parse_csv(const std::string& text);

/// Fixed formatting for CSV cells: integers as-is, reals with 12 significant digits.
std::string fmt(double v);
std::string fmt(long long v);

struct Assertion {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct PlotSpec {
  std::string x;
  std::vector<std::string> ys;
  bool log_y = false;
};

struct ExperimentResult {
  std::string name;
  Table table;
  std::vector<Assertion> assertions;
  std::vector<std::string> summary;  // "key: value" lines
  std::optional<PlotSpec> plot;

  bool passed() const;
  std::string summary_text() const;
};

/// Names accepted by run_experiment.
const std::vector<std::string>& experiment_names();

/// Runs a named experiment. Throws UsageError on an unknown name or invalid parameters.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

/// Line plot of the given columns; empty document for an empty table.
std::string render_svg(const Table& t, const PlotSpec& spec, const std::string& title);

/// Writes <name>.csv, <name>.summary.txt and (when a plot is declared) <name>.svg into dir.
void write_artifacts(const ExperimentResult& r, const std::filesystem::path& dir);

}  // namespace tubekit
