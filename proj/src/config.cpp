#include "pws/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <variant>

#include "pws/grid.hpp"

namespace pws {
namespace {

struct ScenarioInfo {
  ScenarioKind kind;
  std::string_view name;
  std::string_view description;
  std::vector<std::string_view> keys;  // beyond the common keys
};

const std::vector<ScenarioInfo>& scenario_table() {
  static const std::vector<ScenarioInfo> table = {
      {ScenarioKind::free_gausson, "free_gausson", "free 1D Gausson at rest or moving; stationarity and conservation",
       {"b", "f0", "x0", "v0"}},
      {ScenarioKind::uniform_field, "uniform_field", "Gausson in a uniform electric field (vector gauge); parabola",
       {"b", "f0", "x0", "E"}},
      {ScenarioKind::harmonic_trap, "harmonic_trap", "Gausson in a harmonic trap; oscillation period",
       {"b", "f0", "x0", "trap_k"}},
      {ScenarioKind::double_slit_dbb, "double_slit_dbb",
       "dBB-coupled Gausson guided by two interfering Gaussian packets; tracking", {"b", "f0", "x0", "sigma", "separation"}},
      {ScenarioKind::kg_plane_wave, "kg_plane_wave", "Klein-Gordon plane wave; constant quantum mass and slope k/E",
       {"k", "x0"}},
      {ScenarioKind::kg_packet, "kg_packet",
       "broad Klein-Gordon packet vs Schroedinger packet; non-relativistic gap and its k scaling", {"k", "sigma", "x0"}},
      {ScenarioKind::entangled_pair, "entangled_pair",
       "two particles on a 2D configuration grid; product vs entangled response to the partner's start",
       {"b", "f0", "x0", "sigma", "separation", "k", "partner_offset"}},
      {ScenarioKind::equivariance, "equivariance", "Bohmian ensemble sampled from |Psi|^2; histogram L1 distance",
       {"sigma", "k", "ensemble"}},
  };
  return table;
}

const ScenarioInfo& info(ScenarioKind kind) {
  for (const auto& s : scenario_table()) {
    if (s.kind == kind) return s;
  }
  throw InvalidArgument("unknown scenario kind");
}

const std::vector<std::string_view> kCommonKeys = {"scenario", "N",    "L",              "dt",        "T",
                                                   "omega0",   "charge", "snapshot_every", "seed", "output_dir"};

using RealMember = double ScenarioConfig::*;
using CountMember = std::uint64_t ScenarioConfig::*;
using TextMember = std::string ScenarioConfig::*;

struct KeySpec {
  std::string_view name;
  std::variant<RealMember, CountMember, TextMember> member;
  std::string_view doc;
};

const std::vector<KeySpec>& key_table() {
  static const std::vector<KeySpec> table = {
      {"N", &ScenarioConfig::N, "grid points per axis, integer >= 8"},
      {"L", &ScenarioConfig::L, "box length per axis, > 0 (periodic box [-L/2, L/2))"},
      {"dt", &ScenarioConfig::dt, "time step, > 0; Klein-Gordon scenarios require dt <= 0.5*dx"},
      {"T", &ScenarioConfig::T, "duration, >= dt"},
      {"omega0", &ScenarioConfig::omega0, "rest mass (inverse length), > 0"},
      {"charge", &ScenarioConfig::charge, "charge e"},
      {"b", &ScenarioConfig::b, "Gausson inverse squared width, > 0; requires L >= 10/sqrt(b)"},
      {"f0", &ScenarioConfig::f0, "Gausson reference amplitude, > 0"},
      {"E", &ScenarioConfig::E, "uniform field strength"},
      {"trap_k", &ScenarioConfig::trap_k, "harmonic spring constant, > 0"},
      {"x0", &ScenarioConfig::x0, "soliton centre or trajectory start, inside (-L/2, L/2)"},
      {"v0", &ScenarioConfig::v0, "Gausson velocity, |v0| < 1"},
      {"sigma", &ScenarioConfig::sigma, "pilot packet position spread, > 0"},
      {"separation", &ScenarioConfig::separation, "distance between the two pilot packets, >= 0"},
      {"k", &ScenarioConfig::k, "pilot wavevector"},
      {"partner_offset", &ScenarioConfig::partner_offset, "partner start positions are +-partner_offset"},
      {"ensemble", &ScenarioConfig::ensemble, "number of sampled trajectories, 1 .. 1000000"},
      {"seed", &ScenarioConfig::seed, "unsigned 64-bit random seed"},
      {"snapshot_every", &ScenarioConfig::snapshot_every, "write SLDN1 field snapshots every k steps (0 = none)"},
      {"output_dir", &ScenarioConfig::output_dir, "output directory (default pws-out/<scenario>)"},
  };
  return table;
}

const KeySpec* find_key(std::string_view name) {
  for (const auto& k : key_table()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string fmt(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

struct Entry {
  std::string key, value;
  int line = 0;
};

class Locator {
 public:
  Locator(std::string source, std::map<std::string, int> lines) : source_(std::move(source)), lines_(std::move(lines)) {}
  [[noreturn]] void fail(std::string_view key, const std::string& msg) const {
    const auto it = lines_.find(std::string(key));
    if (it != lines_.end()) {
      throw ConfigError(source_ + ":" + std::to_string(it->second) + ": " + msg);
    }
    throw ConfigError(source_ + ": " + msg + " (default value of '" + std::string(key) + "')");
  }

 private:
  std::string source_;
  std::map<std::string, int> lines_;
};

void validate_impl(const ScenarioConfig& c, const Locator& loc) {
  auto need = [&](bool ok, std::string_view key, const std::string& msg) {
    if (!ok) loc.fail(key, msg);
  };
  auto finite = [&](double v, std::string_view key) {
    need(std::isfinite(v), key, std::string(key) + " must be finite");
  };
  for (const auto& k : key_table()) {
    if (const auto* m = std::get_if<RealMember>(&k.member); m && c.uses(k.name)) finite(c.**m, k.name);
  }
  need(c.N >= 8, "N", "N = " + std::to_string(c.N) + " violates N >= 8");
  need(c.L > 0.0, "L", "L = " + fmt(c.L) + " violates L > 0");
  need(c.dt > 0.0, "dt", "dt = " + fmt(c.dt) + " violates dt > 0");
  need(c.T >= c.dt, "T", "T = " + fmt(c.T) + " violates T >= dt (dt = " + fmt(c.dt) + ")");
  need(c.omega0 > 0.0, "omega0", "omega0 = " + fmt(c.omega0) + " violates omega0 > 0");
  const int dim = c.kind == ScenarioKind::entangled_pair ? 2 : 1;
  const double total = std::pow(static_cast<double>(c.N), dim);
  need(total <= static_cast<double>(kMaxGridSamples), "N",
       "grid of " + std::to_string(c.N) + "^" + std::to_string(dim) + " samples exceeds the memory budget of " +
           std::to_string(kMaxGridSamples) + " samples");
  const double steps = std::round(c.T / c.dt);
  need(std::abs(steps * c.dt - c.T) <= 1e-9 * c.T, "T",
       "T = " + fmt(c.T) + " is not an integer multiple of dt = " + fmt(c.dt));

  if (c.uses("b")) {
    need(c.b > 0.0, "b", "b = " + fmt(c.b) + " violates b > 0");
    need(c.f0 > 0.0, "f0", "f0 = " + fmt(c.f0) + " violates f0 > 0");
    need(c.L >= 10.0 / std::sqrt(c.b), "L",
         "L = " + fmt(c.L) + " violates L >= 10/sqrt(b) = " + fmt(10.0 / std::sqrt(c.b)));
  }
  if (c.uses("x0")) {
    need(std::abs(c.x0) < 0.5 * c.L, "x0", "x0 = " + fmt(c.x0) + " must lie inside (-L/2, L/2)");
  }
  if (c.uses("v0")) need(std::abs(c.v0) < 1.0, "v0", "v0 = " + fmt(c.v0) + " violates |v0| < 1");
  if (c.uses("trap_k")) need(c.trap_k > 0.0, "trap_k", "trap_k = " + fmt(c.trap_k) + " violates trap_k > 0");
  if (c.uses("sigma")) need(c.sigma > 0.0, "sigma", "sigma = " + fmt(c.sigma) + " violates sigma > 0");
  if (c.uses("separation")) {
    need(c.separation >= 0.0, "separation", "separation = " + fmt(c.separation) + " violates separation >= 0");
  }
  if (c.uses("ensemble")) {
    need(c.ensemble >= 1 && c.ensemble <= 1000000, "ensemble",
         "ensemble = " + std::to_string(c.ensemble) + " violates 1 <= ensemble <= 1000000");
  }
  if (c.uses("partner_offset")) {
    need(std::abs(c.partner_offset) < 0.5 * c.L, "partner_offset",
         "partner_offset = " + fmt(c.partner_offset) + " must lie inside (-L/2, L/2)");
  }
  if (c.kind == ScenarioKind::kg_plane_wave || c.kind == ScenarioKind::kg_packet) {
    need(c.dt <= 0.5 * c.dx(), "dt",
         "dt = " + fmt(c.dt) + " violates the CFL bound dt <= 0.5*dx = " + fmt(0.5 * c.dx()) + " (dx = L/N = " +
             fmt(c.dx()) + ")");
  }
  if (c.kind == ScenarioKind::kg_plane_wave) {
    const double m = c.k * c.L / (2.0 * std::numbers::pi);
    need(std::abs(m - std::round(m)) <= 1e-9 * std::max(1.0, std::abs(m)), "k",
         "k = " + fmt(c.k) + " is not a grid wavevector: k*L/(2*pi) = " + fmt(m) + " must be an integer");
  }
  if (c.kind == ScenarioKind::kg_packet) {
    need(c.k != 0.0, "k", "k must be nonzero for the k-scaling study");
  }
}

}  // namespace

std::string_view scenario_name(ScenarioKind kind) { return info(kind).name; }

std::string_view scenario_description(ScenarioKind kind) { return info(kind).description; }

std::optional<ScenarioKind> parse_scenario_kind(std::string_view name) {
  for (const auto& s : scenario_table()) {
    if (s.name == name) return s.kind;
  }
  return std::nullopt;
}

const std::vector<ScenarioKind>& all_scenarios() {
  static const std::vector<ScenarioKind> kinds = [] {
    std::vector<ScenarioKind> v;
    for (const auto& s : scenario_table()) v.push_back(s.kind);
    return v;
  }();
  return kinds;
}

std::uint64_t ScenarioConfig::steps() const { return static_cast<std::uint64_t>(std::llround(T / dt)); }

bool ScenarioConfig::uses(std::string_view key) const {
  if (std::find(kCommonKeys.begin(), kCommonKeys.end(), key) != kCommonKeys.end()) return true;
  const auto& keys = info(kind).keys;
  return std::find(keys.begin(), keys.end(), key) != keys.end();
}

ScenarioConfig scenario_defaults(ScenarioKind kind) {
  ScenarioConfig c;
  c.kind = kind;
  switch (kind) {
    case ScenarioKind::free_gausson:
      c.T = 10.0;
      break;
    case ScenarioKind::uniform_field:
      c.T = 5.0;
      break;
    case ScenarioKind::harmonic_trap:
      c.x0 = 1.0;
      c.T = std::round(3.0 * std::numbers::pi * std::sqrt(c.omega0 / c.trap_k) / c.dt) * c.dt;
      break;
    case ScenarioKind::double_slit_dbb:
      c.N = 2048;
      c.L = 64.0;
      c.b = 100.0;
      c.T = 16.0;
      c.sigma = 2.0;
      c.separation = 8.0;
      c.x0 = 3.0;
      break;
    case ScenarioKind::kg_plane_wave:
      c.k = 0.5;
      c.L = 16.0 * std::numbers::pi;
      c.T = 1.0;
      break;
    case ScenarioKind::kg_packet:
      c.N = 2048;
      c.L = 640.0;
      c.dt = 0.01;
      c.T = 5.0;
      c.k = 0.1;
      c.sigma = 40.0;
      c.x0 = 20.0;
      break;
    case ScenarioKind::entangled_pair:
      c.L = 32.0;
      c.dt = 5e-3;
      c.T = 2.0;
      c.b = 4.0;
      c.sigma = 1.5;
      c.separation = 4.0;
      c.k = 1.0;
      c.partner_offset = 4.0;
      break;
    case ScenarioKind::equivariance:
      c.N = 512;
      c.L = 40.0;
      c.T = 2.0;
      c.sigma = 1.0;
      c.k = 0.5;
      break;
  }
  c.output_dir = "pws-out/" + std::string(scenario_name(kind));
  return c;
}

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path.string());
}

ScenarioConfig parse_config_text(std::string_view text, std::string_view source_view) {
  const std::string source(source_view);
  std::vector<Entry> entries;
  std::map<std::string, int> lines;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto end = std::min(text.find('\n', pos), text.size());
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string_view::npos) throw ConfigError(where + "expected 'key = value', got '" + std::string(line) + "'");
    Entry e{std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1))), lineno};
    if (e.key.empty()) throw ConfigError(where + "missing key before '='");
    if (e.value.empty()) throw ConfigError(where + "missing value for key '" + e.key + "'");
    if (e.key != "scenario" && !find_key(e.key)) throw ConfigError(where + "unknown key '" + e.key + "'");
    if (lines.count(e.key)) {
      throw ConfigError(where + "duplicate key '" + e.key + "' (first set on line " + std::to_string(lines[e.key]) +
                        ")");
    }
    lines[e.key] = lineno;
    entries.push_back(std::move(e));
  }

  const auto sc = std::find_if(entries.begin(), entries.end(), [](const Entry& e) { return e.key == "scenario"; });
  if (sc == entries.end()) throw ConfigError(source + ": missing required key 'scenario'");
  const auto kind = parse_scenario_kind(sc->value);
  if (!kind) {
    std::string names;
    for (const auto& s : scenario_table()) names += (names.empty() ? "" : ", ") + std::string(s.name);
    throw ConfigError(source + ":" + std::to_string(sc->line) + ": unknown scenario '" + sc->value +
                      "' (expected one of: " + names + ")");
  }

  ScenarioConfig c = scenario_defaults(*kind);
  c.source = source;
  for (const Entry& e : entries) {
    if (e.key == "scenario") continue;
    const std::string where = source + ":" + std::to_string(e.line) + ": ";
    if (!c.uses(e.key)) {
      throw ConfigError(where + "key '" + e.key + "' is not used by scenario " + std::string(scenario_name(c.kind)));
    }
    const KeySpec& spec = *find_key(e.key);
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    auto mismatch = [&](std::string_view type) {
      return ConfigError(where + "key '" + e.key + "' expects " + std::string(type) + ", got '" + e.value + "'");
    };
    if (const auto* m = std::get_if<RealMember>(&spec.member)) {
      double v = 0.0;
      const auto r = std::from_chars(first, last, v);
      if (r.ec != std::errc() || r.ptr != last) throw mismatch("a real number");
      c.**m = v;
    } else if (const auto* m = std::get_if<CountMember>(&spec.member)) {
      std::uint64_t v = 0;
      const auto r = std::from_chars(first, last, v);
      if (r.ec != std::errc() || r.ptr != last) throw mismatch("a non-negative integer");
      c.**m = v;
    } else {
      c.*std::get<TextMember>(spec.member) = e.value;
    }
  }

  // Defaults that depend on other keys.
  const bool gausson_box = c.kind == ScenarioKind::free_gausson || c.kind == ScenarioKind::uniform_field ||
                           c.kind == ScenarioKind::harmonic_trap;
  if (gausson_box && !lines.count("L") && c.b > 0.0) c.L = 20.0 / std::sqrt(c.b);
  if (c.kind == ScenarioKind::harmonic_trap && !lines.count("T") && c.trap_k > 0.0 && c.omega0 > 0.0) {
    // 1.5 periods, so the centre crosses zero three times.
    c.T = 3.0 * std::numbers::pi * std::sqrt(c.omega0 / c.trap_k);
    c.T = std::round(c.T / c.dt) * c.dt;
  }

  validate_impl(c, Locator(source, lines));
  return c;
}

void validate_config(const ScenarioConfig& cfg) { validate_impl(cfg, Locator(cfg.source, {})); }

std::string render_config(const ScenarioConfig& c) {
  std::string out = "scenario = " + std::string(scenario_name(c.kind)) + "\n";
  for (const auto& k : key_table()) {
    if (!c.uses(k.name)) continue;
    out += std::string(k.name) + " = ";
    std::visit(
        [&](auto m) {
          using M = decltype(m);
          if constexpr (std::is_same_v<M, RealMember>) {
            out += fmt(c.*m);
          } else if constexpr (std::is_same_v<M, TextMember>) {
            out += c.*m;
          } else {
            out += std::to_string(c.*m);
          }
        },
        k.member);
    out += "\n";
  }
  return out;
}

std::string schema_reference() {
  std::string out = "Config format: one 'key = value' per line, '#' starts a comment.\n\nKeys:\n";
  out += "  scenario  (required) one of the scenario names below\n";
  for (const auto& k : key_table()) {
    out += "  " + std::string(k.name);
    out.append(k.name.size() < 16 ? 16 - k.name.size() : 1, ' ');
    out += std::string(k.doc) + "\n";
  }
  out += "\nScenarios and defaults:\n";
  for (const auto& s : scenario_table()) {
    out += "  " + std::string(s.name) + ": " + std::string(s.description) + "\n";
    ScenarioConfig d = scenario_defaults(s.kind);
    if (s.kind == ScenarioKind::free_gausson || s.kind == ScenarioKind::uniform_field ||
        s.kind == ScenarioKind::harmonic_trap) {
      d.L = 20.0 / std::sqrt(d.b);
    }
    std::istringstream lines(render_config(d));
    std::string line;
    while (std::getline(lines, line)) {
      if (line.rfind("scenario", 0) == 0 || line.rfind("output_dir", 0) == 0) continue;
      out += "      " + line + "\n";
    }
    if (s.kind == ScenarioKind::free_gausson || s.kind == ScenarioKind::uniform_field ||
        s.kind == ScenarioKind::harmonic_trap) {
      out += "      (L defaults to 20/sqrt(b))\n";
    }
    if (s.kind == ScenarioKind::harmonic_trap) out += "      (T defaults to 1.5 periods, 3*pi*sqrt(omega0/trap_k))\n";
  }
  return out;
}

}  // namespace pws
