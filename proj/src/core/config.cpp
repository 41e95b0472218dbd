#include "core/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace topoiga {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(s);
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw FormatError("config key '" + key + "': " + why);
}

int to_int(const std::string& key, const std::string& v, int lo, int hi) {
  int x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad(key, "expected an integer, got '" + v + "'");
  if (x < lo || x > hi) bad(key, "value " + v + " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return x;
}

double to_double(const std::string& key, const std::string& v, double lo, double hi, bool open_lo = false) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (r.ec != std::errc() || r.ptr != v.data() + v.size()) bad(key, "expected a number, got '" + v + "'");
  if (x < lo || x > hi || (open_lo && x == lo)) bad(key, "value " + v + " out of range");
  return x;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad(key, "expected true/false, got '" + v + "'");
}

SideKind to_side(const std::string& key, const std::string& v) {
  if (v == "none") return SideKind::none;
  if (v == "wall") return SideKind::wall;
  if (v == "inflow") return SideKind::inflow;
  if (v == "outflow") return SideKind::outflow;
  bad(key, "side kind must be none, wall, inflow or outflow");
}

// Shortest text that reads back to the same double.
std::string fmt(double x) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

using Setter = std::function<void(PipelineConfig&, const std::string&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"input", [](PipelineConfig& c, const std::string&, const std::string& v) { c.input = v; }},
      {"output_dir", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         if (v.empty()) bad(k, "must not be empty");
         c.output_dir = v;
       }},
      {"degree", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.degree = to_int(k, v, 1, 6); }},
      {"g_crit", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.g_crit = to_double(k, v, 0.0, 1.0, true);
         if (c.g_crit >= 1.0) bad(k, "must be below 1");
       }},
      {"radius", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.radius = to_int(k, v, 1, 8); }},
      {"n_sub", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.n_sub = to_int(k, v, 1, 8); }},
      {"max_passes",
       [](PipelineConfig& c, const std::string& k, const std::string& v) { c.max_passes = to_int(k, v, 0, 8); }},
      {"connectivity", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         if (v == "vertex") c.connectivity = Connectivity::vertex;
         else if (v == "face") c.connectivity = Connectivity::face;
         else bad(k, "must be vertex or face");
       }},
      {"rho_max", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.rho_max = to_int(k, v, 0, 8); }},
      {"k_max", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.k_max = to_int(k, v, 0, 12); }},
      {"order_decay",
       [](PipelineConfig& c, const std::string& k, const std::string& v) { c.order_decay = to_double(k, v, 0.0, 1.0); }},
      {"mesh", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.mesh.clear();
         for (const std::string& item : split(v, ',')) c.mesh.push_back(to_int(k, item, 1, 1024));
         if (c.mesh.empty()) bad(k, "needs at least one mesh size");
       }},
      {"solver", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         if (v == "none") c.solver = SolverKind::none;
         else if (v == "elasticity") c.solver = SolverKind::elasticity;
         else if (v == "stokes") c.solver = SolverKind::stokes;
         else bad(k, "must be none, elasticity or stokes");
       }},
      {"compare", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.compare = to_bool(k, v); }},
      {"lambda", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.lambda = to_double(k, v, 0.0, 1e12, true);
       }},
      {"mu", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.mu = to_double(k, v, 0.0, 1e12, true); }},
      {"u_bar", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.u_bar = to_double(k, v, -1e6, 1e6);
         if (c.u_bar == 0.0) bad(k, "must be non-zero");
       }},
      {"viscosity", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.viscosity = to_double(k, v, 0.0, 1e12, true);
       }},
      {"p_bar", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.p_bar = to_double(k, v, -1e12, 1e12); }},
      {"beta", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.beta = to_double(k, v, 0.0, 1e12, true); }},
      {"gamma", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.gamma = to_double(k, v, 0.0, 1e12); }},
      {"gamma_ghost", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         c.gamma_ghost = to_double(k, v, 0.0, 1e12);
       }},
      {"ghost", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.ghost = to_bool(k, v); }},
      {"skeleton", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.skeleton = to_bool(k, v); }},
      {"sides", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         const auto items = split(v, ',');
         if (items.size() != 4) bad(k, "needs four entries (x-, x+, y-, y+)");
         for (int s = 0; s < 4; ++s) c.sides[s] = to_side(k, items[s]);
       }},
      {"flux_side", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.flux_side = to_int(k, v, 0, 3); }},
      {"flux_range", [](PipelineConfig& c, const std::string& k, const std::string& v) {
         const auto items = split(v, ',');
         if (items.size() != 2) bad(k, "expected lo,hi");
         c.flux_lo = to_double(k, items[0], -1e300, 1e300);
         c.flux_hi = to_double(k, items[1], -1e300, 1e300);
         if (c.flux_lo > c.flux_hi) bad(k, "lo exceeds hi");
       }},
      {"write_vtk", [](PipelineConfig& c, const std::string& k, const std::string& v) { c.write_vtk = to_bool(k, v); }},
  };
  return table;
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream ss(text);
  std::string line;
  int number = 0;
  while (std::getline(ss, line)) {
    ++number;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw FormatError("config line " + std::to_string(number) + ": expected key=value");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw FormatError("config line " + std::to_string(number) + ": empty key");
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

PipelineConfig apply_config(const std::map<std::string, std::string>& settings, PipelineConfig base) {
  const auto& table = setters();
  for (const auto& [key, value] : settings) {
    const auto it = table.find(key);
    if (it == table.end()) throw FormatError("unknown config key '" + key + "'");
    it->second(base, key, value);
  }
  return base;
}

PipelineConfig resolve_config(const std::string& file, const std::map<std::string, std::string>& flags) {
  PipelineConfig c;
  if (!file.empty()) c = apply_config(read_config_file(file), c);
  return apply_config(flags, c);
}

std::string to_string(SolverKind kind) {
  switch (kind) {
    case SolverKind::elasticity: return "elasticity";
    case SolverKind::stokes: return "stokes";
    default: return "none";
  }
}

std::string to_string(SideKind kind) {
  switch (kind) {
    case SideKind::wall: return "wall";
    case SideKind::inflow: return "inflow";
    case SideKind::outflow: return "outflow";
    default: return "none";
  }
}

std::map<std::string, std::string> config_entries(const PipelineConfig& c) {
  std::string mesh;
  for (std::size_t i = 0; i < c.mesh.size(); ++i) mesh += (i ? "," : "") + std::to_string(c.mesh[i]);
  std::string sides;
  for (int s = 0; s < 4; ++s) sides += (s ? "," : "") + to_string(c.sides[s]);
  auto b = [](bool x) { return std::string(x ? "true" : "false"); };
  return {
      {"input", c.input},
      {"output_dir", c.output_dir},
      {"degree", std::to_string(c.degree)},
      {"g_crit", fmt(c.g_crit)},
      {"radius", std::to_string(c.radius)},
      {"n_sub", std::to_string(c.n_sub)},
      {"max_passes", std::to_string(c.max_passes)},
      {"connectivity", c.connectivity == Connectivity::vertex ? "vertex" : "face"},
      {"rho_max", std::to_string(c.rho_max)},
      {"k_max", std::to_string(c.k_max)},
      {"order_decay", fmt(c.order_decay)},
      {"mesh", mesh},
      {"solver", to_string(c.solver)},
      {"compare", b(c.compare)},
      {"lambda", fmt(c.lambda)},
      {"mu", fmt(c.mu)},
      {"u_bar", fmt(c.u_bar)},
      {"viscosity", fmt(c.viscosity)},
      {"p_bar", fmt(c.p_bar)},
      {"beta", fmt(c.beta)},
      {"gamma", fmt(c.gamma)},
      {"gamma_ghost", fmt(c.gamma_ghost)},
      {"ghost", b(c.ghost)},
      {"skeleton", b(c.skeleton)},
      {"sides", sides},
      {"flux_side", std::to_string(c.flux_side)},
      {"flux_range", fmt(c.flux_lo) + "," + fmt(c.flux_hi)},
      {"write_vtk", b(c.write_vtk)},
  };
}

}  // namespace topoiga
