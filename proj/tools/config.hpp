#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "photonwm/beams.hpp"
#include "photonwm/polarization.hpp"
#include "photonwm/quantum.hpp"

namespace pwm_cli {

using json = nlohmann::json;

/// Malformed or incomplete configuration: exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Strict view of one JSON object. Every key read is copied, with its default filled in, into
/// the resolved configuration.
class Section {
 public:
  Section(const json& node, json* resolved, std::string path, std::optional<std::uint64_t> seed_override = {});

  /// Declares the keys this section accepts and rejects any others present.
  void allow(const std::vector<std::string>& keys);

  bool has(const std::string& key) const;
  double number(const std::string& key, std::optional<double> fallback = {});
  int integer(const std::string& key, std::optional<int> fallback = {});
  bool boolean(const std::string& key, std::optional<bool> fallback = {});
  std::string text(const std::string& key, std::optional<std::string> fallback = {},
                   std::initializer_list<const char*> choices = {});
  Eigen::Vector3d vec3(const std::string& key, std::optional<Eigen::Vector3d> fallback = {});
  std::vector<double> numbers(const std::string& key, std::optional<std::vector<double>> fallback = {});
  /// Array of 3-element arrays.
  std::vector<Eigen::Vector3d> points(const std::string& key, std::optional<std::vector<Eigen::Vector3d>> fallback = {});
  std::uint64_t seed(const std::string& key, std::uint64_t fallback);
  Section child(const std::string& key, bool required = true);
  /// Array of objects under key, each as a Section.
  std::vector<Section> children(const std::string& key);

  const std::string& path() const { return path_; }

 private:
  const json* lookup(const std::string& key) const;
  std::string where(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  void record(const std::string& key, json value);

  const json& node_;
  json* resolved_;
  std::string path_;
  std::optional<std::uint64_t> seed_override_;
  std::set<std::string> allowed_;
};

/// Named tolerances with defaults; overrides come from run.tolerances and must name known entries.
class Tolerances {
 public:
  Tolerances(std::map<std::string, double> defaults) : values_(std::move(defaults)) {}
  void apply(Section& run);
  double operator[](const std::string& key) const { return values_.at(key); }
  json to_json() const;

 private:
  std::map<std::string, double> values_;
};

struct Scenario {
  json input;
  json resolved = json::object();
  std::optional<std::uint64_t> seed_override;

  Section root() { return Section(input, &resolved, "", seed_override); }
};

Scenario load_scenario(const std::string& path, std::optional<std::uint64_t> seed_override);

/// FNV-1a 64-bit hash of the canonical (sorted-key) dump of the resolved configuration.
std::string config_hash(const json& resolved);

photonwm::KGrid read_grid(Section grid);
photonwm::PolarizationBasis read_basis(const photonwm::KGrid& grid, Section basis);
photonwm::Alpha read_alpha(Section& s, const std::string& key, double fallback);
int read_sigma(Section& s, const std::string& key, int fallback);

/// One-photon state from a state block: generator packet | localized | random | modes.
photonwm::PhotonState read_one_photon_state(const photonwm::KGrid& grid, Section state);
/// Packet parameters in units of the grid's dk (widths, k0) and lengths (r0).
photonwm::PacketSpec read_packet(const photonwm::KGrid& grid, Section& s);
/// Two-photon state: generator pair | product.
photonwm::PhotonState read_two_photon_state(const photonwm::KGrid& grid, Section state);

photonwm::BeamSpec read_beam(Section beam);

}  // namespace pwm_cli
