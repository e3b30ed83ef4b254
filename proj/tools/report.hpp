#pragma once

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace pwm_cli {

using ordered_json = nlohmann::ordered_json;

struct Check {
  std::string name;
  /// empty when the quantity is exact (e.g. a convergence order with both residuals at round-off)
  std::optional<double> value;
  double limit;
  /// "<" (value below limit) or ">=" (value at least limit)
  std::string relation;
  bool pass;
};

/// JSON summary of one run: command, config hash, resolved config, tolerances, checks, results.
class Report {
 public:
  Report(std::string command, const Scenario& sc, const Tolerances& tol);

  void below(const std::string& name, double value, double limit);
  void at_least(const std::string& name, std::optional<double> value, double limit);
  void holds(const std::string& name, bool ok);

  ordered_json results = ordered_json::object();
  std::vector<std::string> warnings;

  bool passed() const;
  const std::string& hash() const { return hash_; }
  const std::string& command() const { return command_; }
  const Tolerances& tolerances() const { return tol_; }

  /// Writes <dir>/<command>.json and prints one line per failed check to stderr.
  void write(const std::filesystem::path& dir) const;

 private:
  std::string command_;
  std::string hash_;
  json resolved_;
  Tolerances tol_;
  std::vector<Check> checks_;
};

/// CSV with two '#' metadata lines (command, config hash, tolerances) and a header row; values
/// in %.16e.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& file, const Report& report, const std::vector<std::string>& columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);

 private:
  std::FILE* f_;
  std::size_t columns_;
};

std::string format_double(double v);

}  // namespace pwm_cli
