#include "config.hpp"

#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "photonwm/errors.hpp"

namespace pwm_cli {

using namespace photonwm;

Section::Section(const json& node, json* resolved, std::string path, std::optional<std::uint64_t> seed_override)
    : node_(node), resolved_(resolved), path_(std::move(path)), seed_override_(seed_override) {
  if (!node_.is_object()) throw ConfigError((path_.empty() ? std::string("config") : path_) + " must be an object");
  if (!resolved_->is_object()) *resolved_ = json::object();
}

void Section::allow(const std::vector<std::string>& keys) {
  allowed_.insert(keys.begin(), keys.end());
  for (const auto& [key, value] : node_.items()) {
    if (!allowed_.count(key)) {
      std::string list;
      for (const auto& a : allowed_) list += (list.empty() ? "" : ", ") + a;
      throw ConfigError("unknown key '" + where(key) + "' (accepted: " + list + ")");
    }
  }
}

const json* Section::lookup(const std::string& key) const {
  auto it = node_.find(key);
  return it == node_.end() ? nullptr : &*it;
}

bool Section::has(const std::string& key) const { return lookup(key) != nullptr; }

void Section::record(const std::string& key, json value) { (*resolved_)[key] = std::move(value); }

double Section::number(const std::string& key, std::optional<double> fallback) {
  const json* v = lookup(key);
  double out;
  if (!v) {
    if (!fallback) throw ConfigError("missing number '" + where(key) + "'");
    out = *fallback;
  } else {
    if (!v->is_number()) throw ConfigError("'" + where(key) + "' must be a number");
    out = v->get<double>();
  }
  record(key, out);
  return out;
}

int Section::integer(const std::string& key, std::optional<int> fallback) {
  const json* v = lookup(key);
  int out;
  if (!v) {
    if (!fallback) throw ConfigError("missing integer '" + where(key) + "'");
    out = *fallback;
  } else {
    if (!v->is_number_integer()) throw ConfigError("'" + where(key) + "' must be an integer");
    out = v->get<int>();
  }
  record(key, out);
  return out;
}

bool Section::boolean(const std::string& key, std::optional<bool> fallback) {
  const json* v = lookup(key);
  bool out;
  if (!v) {
    if (!fallback) throw ConfigError("missing boolean '" + where(key) + "'");
    out = *fallback;
  } else {
    if (!v->is_boolean()) throw ConfigError("'" + where(key) + "' must be true or false");
    out = v->get<bool>();
  }
  record(key, out);
  return out;
}

std::string Section::text(const std::string& key, std::optional<std::string> fallback,
                          std::initializer_list<const char*> choices) {
  const json* v = lookup(key);
  std::string out;
  if (!v) {
    if (!fallback) throw ConfigError("missing string '" + where(key) + "'");
    out = *fallback;
  } else {
    if (!v->is_string()) throw ConfigError("'" + where(key) + "' must be a string");
    out = v->get<std::string>();
  }
  if (choices.size()) {
    bool ok = false;
    std::string list;
    for (const char* c : choices) {
      ok = ok || out == c;
      list += (list.empty() ? "" : ", ") + std::string(c);
    }
    if (!ok) throw ConfigError("'" + where(key) + "' = '" + out + "' is not one of: " + list);
  }
  record(key, out);
  return out;
}

std::vector<double> Section::numbers(const std::string& key, std::optional<std::vector<double>> fallback) {
  const json* v = lookup(key);
  std::vector<double> out;
  if (!v) {
    if (!fallback) throw ConfigError("missing array '" + where(key) + "'");
    out = *fallback;
  } else {
    if (!v->is_array()) throw ConfigError("'" + where(key) + "' must be an array of numbers");
    for (const auto& e : *v) {
      if (!e.is_number()) throw ConfigError("'" + where(key) + "' must be an array of numbers");
      out.push_back(e.get<double>());
    }
  }
  record(key, out);
  return out;
}

Eigen::Vector3d Section::vec3(const std::string& key, std::optional<Eigen::Vector3d> fallback) {
  std::optional<std::vector<double>> fb;
  if (fallback) fb = std::vector<double>{fallback->x(), fallback->y(), fallback->z()};
  const auto v = numbers(key, fb);
  if (v.size() != 3) throw ConfigError("'" + where(key) + "' must have three entries");
  return {v[0], v[1], v[2]};
}

std::vector<Eigen::Vector3d> Section::points(const std::string& key,
                                            std::optional<std::vector<Eigen::Vector3d>> fallback) {
  const json* v = lookup(key);
  std::vector<Eigen::Vector3d> out;
  if (!v) {
    if (!fallback) throw ConfigError("missing array '" + where(key) + "'");
    out = *fallback;
  } else {
    const std::string bad = "'" + where(key) + "' must be an array of [x, y, z] triples";
    if (!v->is_array()) throw ConfigError(bad);
    for (const auto& e : *v) {
      if (!e.is_array() || e.size() != 3) throw ConfigError(bad);
      for (const auto& x : e)
        if (!x.is_number()) throw ConfigError(bad);
      out.emplace_back(e[0].get<double>(), e[1].get<double>(), e[2].get<double>());
    }
  }
  json rec = json::array();
  for (const auto& p : out) rec.push_back({p.x(), p.y(), p.z()});
  record(key, rec);
  return out;
}

std::uint64_t Section::seed(const std::string& key, std::uint64_t fallback) {
  std::uint64_t out = fallback;
  if (seed_override_) {
    out = *seed_override_;
  } else if (const json* v = lookup(key)) {
    if (!v->is_number_unsigned()) throw ConfigError("'" + where(key) + "' must be a non-negative integer");
    out = v->get<std::uint64_t>();
  }
  record(key, out);
  return out;
}

Section Section::child(const std::string& key, bool required) {
  static const json empty = json::object();
  const json* v = lookup(key);
  if (!v && required) throw ConfigError("missing block '" + where(key) + "'");
  json& slot = (*resolved_)[key];
  return Section(v ? *v : empty, &slot, where(key), seed_override_);
}

std::vector<Section> Section::children(const std::string& key) {
  const json* v = lookup(key);
  if (!v || !v->is_array()) throw ConfigError("'" + where(key) + "' must be an array of objects");
  json& slot = (*resolved_)[key];
  slot = json::array();
  for (std::size_t i = 0; i < v->size(); ++i) slot.push_back(json::object());
  std::vector<Section> out;
  for (std::size_t i = 0; i < v->size(); ++i)
    out.emplace_back((*v)[i], &slot[i], where(key) + "[" + std::to_string(i) + "]", seed_override_);
  return out;
}

void Tolerances::apply(Section& run) {
  Section t = run.child("tolerances", false);
  std::vector<std::string> names;
  for (const auto& [k, v] : values_) names.push_back(k);
  t.allow(names);
  for (auto& [k, v] : values_) {
    v = t.number(k, v);
    if (!(v > 0.0)) throw ConfigError("tolerance '" + k + "' must be > 0");
  }
}

json Tolerances::to_json() const {
  json j = json::object();
  for (const auto& [k, v] : values_) j[k] = v;
  return j;
}

Scenario load_scenario(const std::string& path, std::optional<std::uint64_t> seed_override) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  Scenario sc;
  try {
    sc.input = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  if (!sc.input.is_object()) throw ConfigError("config must be a JSON object");
  sc.seed_override = seed_override;
  return sc;
}

std::string config_hash(const json& resolved) {
  const std::string text = resolved.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

KGrid read_grid(Section g) {
  g.allow({"n", "L", "units", "offset"});
  const int n = g.integer("n");
  const double L = g.number("L");
  const std::string units = g.text("units", "natural", {"natural", "si"});
  const bool offset = g.boolean("offset", true);
  if (n < 2) throw ConfigError("grid.n must be >= 2");
  if (!(L > 0.0)) throw ConfigError("grid.L must be > 0");
  // a grid without the half-step offset hits k = 0 and the polar axis; KGrid reports which points
  try {
    return KGrid(n, L, units == "si" ? PhysicalConstants::si() : PhysicalConstants::natural(), offset);
  } catch (const PoleError& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
}

PolarizationBasis read_basis(const KGrid& grid, Section b) {
  b.allow({"chi"});
  Section chi = b.child("chi", false);
  chi.allow({"type", "m"});
  const std::string type = chi.text("type", "m_phi", {"zero", "m_phi"});
  const PolarizationBasis e0 = helicity_vectors_e0(grid);
  if (type == "zero") return e0;
  return apply_chi(e0, chi.integer("m", 1));
}

Alpha read_alpha(Section& s, const std::string& key, double fallback) {
  const double v = s.number(key, fallback);
  try {
    return Alpha::from_value(v);
  } catch (const LabelMismatch&) {
    throw ConfigError("'" + s.path() + "." + key + "' must be -0.5, 0 or 0.5");
  }
}

int read_sigma(Section& s, const std::string& key, int fallback) {
  const int v = s.integer(key, fallback);
  if (v != 1 && v != -1) throw ConfigError("'" + s.path() + "." + key + "' must be +1 or -1");
  return v;
}

PacketSpec read_packet(const KGrid& grid, Section& s) {
  PacketSpec p;
  p.k0 = s.vec3("k0") * grid.dk();
  p.sigma_long = s.number("sigma_long", 1.0) * grid.dk();
  p.sigma_perp = s.number("sigma_perp", 1.0) * grid.dk();
  p.r0 = s.vec3("r0", Eigen::Vector3d::Zero());
  p.sigma = read_sigma(s, "sigma", 1);
  p.forward_only = s.boolean("forward_only", true);
  if (!(p.sigma_long > 0.0) || !(p.sigma_perp > 0.0)) throw ConfigError(s.path() + ": packet widths must be > 0");
  if (p.k0.norm() == 0.0) throw ConfigError(s.path() + ".k0 must be nonzero");
  return p;
}

namespace {

std::array<int, 3> read_index(Section& s, const std::string& key, const KGrid& grid) {
  const Eigen::Vector3d v = s.vec3(key);
  std::array<int, 3> out;
  for (int a = 0; a < 3; ++a) {
    out[a] = static_cast<int>(v(a));
    if (out[a] != v(a) || out[a] < 0 || out[a] >= grid.n())
      throw ConfigError("'" + s.path() + "." + key + "' must hold integer grid coordinates in [0, n)");
  }
  return out;
}

ModeKey read_mode(Section s, const KGrid& grid) {
  s.allow({"k", "sigma"});
  const auto k = read_index(s, "k", grid);
  return {grid.index(k[0], k[1], k[2]), read_sigma(s, "sigma", 1)};
}

}  // namespace

PhotonState read_one_photon_state(const KGrid& grid, Section s) {
  const std::string gen = s.text("generator", std::nullopt, {"packet", "localized", "random", "modes"});
  if (gen == "packet") {
    s.allow({"generator", "k0", "sigma_long", "sigma_perp", "r0", "sigma", "forward_only", "bandwidth"});
    const PacketSpec p = read_packet(grid, s);
    if (s.has("bandwidth")) {
      const double target = s.number("bandwidth");
      try {
        return packet_with_bandwidth(grid, p, target).state;
      } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("state.bandwidth: ") + e.what());
      }
    }
    return gaussian_packet(grid, p);
  }
  if (gen == "localized") {
    s.allow({"generator", "r0", "sigma", "envelope", "center", "width"});
    const Eigen::Vector3d r0 = s.vec3("r0", Eigen::Vector3d::Zero());
    const int sigma = read_sigma(s, "sigma", 1);
    const std::string env = s.text("envelope", "gaussian", {"none", "gaussian", "shell"});
    Envelope e;
    if (env == "gaussian") e = Envelope::gaussian(s.number("width", 0.5));
    if (env == "shell") e = Envelope::shell(s.number("center", 0.5), s.number("width", 0.125));
    return localized(grid, r0, sigma, e);
  }
  if (gen == "random") {
    s.allow({"generator", "seed", "width"});
    const std::uint64_t seed = s.seed("seed", 1);
    const double width = s.number("width", 0.3);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    PhotonState st(grid);
    const double kw = width * grid.n() * grid.dk();
    for (int sigma : {1, -1})
      for (Index p = 0; p < grid.size(); ++p)
        st.set_c1({p, sigma}, std::exp(-std::pow(grid.k_norm()(p) / kw, 2)) * Complex(nd(rng), nd(rng)));
    st.normalize();
    return st;
  }
  s.allow({"generator", "modes"});
  PhotonState st(grid);
  for (Section m : s.children("modes")) {
    m.allow({"k", "sigma", "re", "im"});
    const auto k = read_index(m, "k", grid);
    const int sigma = read_sigma(m, "sigma", 1);
    const Complex c(m.number("re", 1.0), m.number("im", 0.0));
    st.set_c1({grid.index(k[0], k[1], k[2]), sigma}, c);
  }
  if (!(st.norm_squared() > 0.0)) throw ConfigError("state.modes has no nonzero amplitude");
  st.normalize();
  return st;
}

PhotonState read_two_photon_state(const KGrid& grid, Section s) {
  const std::string gen = s.text("generator", std::nullopt, {"pair", "product"});
  if (gen == "pair") {
    s.allow({"generator", "first", "second"});
    return two_mode_pair(grid, read_mode(s.child("first"), grid), read_mode(s.child("second"), grid));
  }
  s.allow({"generator", "first", "second", "cutoff"});
  auto packet = [&](Section p) {
    p.allow({"k0", "sigma_long", "sigma_perp", "r0", "sigma", "forward_only"});
    return gaussian_packet(grid, read_packet(grid, p));
  };
  const PhotonState f = packet(s.child("first")), h = packet(s.child("second"));
  return product_state(f, h, s.number("cutoff", 1e-8));
}

BeamSpec read_beam(Section b) {
  b.allow({"kind", "omega", "k_z", "l_z", "sigma", "units", "envelope"});
  BeamSpec spec;
  spec.kind = b.text("kind", "paraxial", {"paraxial", "bessel"}) == "bessel" ? BeamSpec::Kind::bessel
                                                                               : BeamSpec::Kind::paraxial;
  spec.constants =
      b.text("units", "natural", {"natural", "si"}) == "si" ? PhysicalConstants::si() : PhysicalConstants::natural();
  spec.omega = b.number("omega", 1.0);
  spec.k_z = b.number("k_z", spec.omega / spec.constants.c());
  spec.l_z = b.integer("l_z", 0);
  spec.sigma = read_sigma(b, "sigma", 1);
  try {
    (void)spec.k_perp();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("beam: ") + e.what());
  }
  Section e = b.child("envelope", false);
  e.allow({"kind", "amplitude", "waist", "flat_radius", "aperture"});
  spec.envelope.kind = envelope_kind_from_string(e.text("kind", "gaussian", {"gaussian", "flat_top", "ring"}));
  spec.envelope.amplitude = e.number("amplitude", 1.0);
  spec.envelope.waist = e.number("waist", 1.0);
  spec.envelope.flat_radius = e.number("flat_radius", 0.0);
  spec.envelope.aperture = e.number("aperture", 0.0);
  if (!(spec.envelope.waist > 0.0)) throw ConfigError("beam.envelope.waist must be > 0");
  return spec;
}

}  // namespace pwm_cli
