#include "report.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <stdexcept>

namespace pwm_cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

Report::Report(std::string command, const Scenario& sc, const Tolerances& tol)
    : command_(std::move(command)), hash_(config_hash(sc.resolved)), resolved_(sc.resolved), tol_(tol) {}

void Report::below(const std::string& name, double value, double limit) {
  checks_.push_back({name, value, limit, "<", value < limit});
}

void Report::at_least(const std::string& name, std::optional<double> value, double limit) {
  checks_.push_back({name, value, limit, ">=", !value || *value >= limit});
}

void Report::holds(const std::string& name, bool ok) { checks_.push_back({name, ok ? 1.0 : 0.0, 1.0, "==", ok}); }

bool Report::passed() const {
  for (const auto& c : checks_)
    if (!c.pass) return false;
  return true;
}

namespace {

// JSON has no infinities or NaN; such values are written as strings.
ordered_json number_or_text(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

void Report::write(const std::filesystem::path& dir) const {
  ordered_json j;
  j["command"] = command_;
  j["config_hash"] = hash_;
  j["status"] = passed() ? "pass" : "fail";
  j["config"] = ordered_json::parse(resolved_.dump());
  j["tolerances"] = ordered_json::parse(tol_.to_json().dump());
  ordered_json checks = ordered_json::array();
  for (const auto& c : checks_) {
    ordered_json e;
    e["name"] = c.name;
    e["value"] = c.value ? number_or_text(*c.value) : ordered_json("exact");
    e["relation"] = c.relation;
    e["limit"] = c.limit;
    e["pass"] = c.pass;
    checks.push_back(e);
    if (!c.pass) {
      std::cerr << command_ << ": check '" << c.name << "' failed: "
                << (c.value ? format_double(*c.value) : std::string("exact")) << " " << c.relation << " "
                << format_double(c.limit) << " does not hold\n";
    }
  }
  j["checks"] = checks;
  j["warnings"] = warnings;
  j["results"] = results;

  std::filesystem::create_directories(dir);
  const auto file = dir / (command_ + ".json");
  std::ofstream out(file, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + file.string());
  out << j.dump(2) << "\n";
}

CsvWriter::CsvWriter(const std::filesystem::path& file, const Report& report, const std::vector<std::string>& columns)
    : columns_(columns.size()) {
  std::filesystem::create_directories(file.parent_path());
  f_ = std::fopen(file.string().c_str(), "wb");
  if (!f_) throw std::runtime_error("cannot write " + file.string());
  std::fprintf(f_, "# command=%s config_hash=%s\n", report.command().c_str(), report.hash().c_str());
  std::fprintf(f_, "# tolerances=%s\n", report.tolerances().to_json().dump().c_str());
  for (std::size_t i = 0; i < columns.size(); ++i) std::fprintf(f_, "%s%s", i ? "," : "", columns[i].c_str());
  std::fputc('\n', f_);
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::logic_error("CSV row width does not match the header");
  for (std::size_t i = 0; i < values.size(); ++i) std::fprintf(f_, "%s%s", i ? "," : "", format_double(values[i]).c_str());
  std::fputc('\n', f_);
}

}  // namespace pwm_cli
