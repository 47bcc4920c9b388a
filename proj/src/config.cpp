#include "tricav/config.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace tricav::config {

namespace {

// Reads keys from one JSON object and complains about anything left over.
class Section {
 public:
  Section(const json& j, std::string where) : j_(j), where_(std::move(where)) {
    if (!j.is_object()) throw ConfigError(where_ + ": expected an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    if (!j_.contains(key)) throw ConfigError(where_ + ": missing required key '" + key + "'");
    return j_.at(key);
  }

  double number(const std::string& key) {
    const json& v = raw(key);
    if (!v.is_number()) throw ConfigError(path(key) + ": expected a number");
    return v.get<double>();
  }
  double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

  // Number or the string "inf".
  double length_or_inf(const std::string& key) {
    const json& v = raw(key);
    if (v.is_string() && v.get<std::string>() == "inf") return std::numeric_limits<double>::infinity();
    if (!v.is_number()) throw ConfigError(path(key) + ": expected a number or \"inf\"");
    return v.get<double>();
  }

  int integer(const std::string& key, int fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(path(key) + ": expected an integer");
    return v.get<int>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(path(key) + ": expected true or false");
    return v.get<bool>();
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const json& v = raw(key);
    if (!v.is_string()) throw ConfigError(path(key) + ": expected a string");
    return v.get<std::string>();
  }

  Section sub(const std::string& key) { return Section(raw(key), path(key)); }

  std::string path(const std::string& key) const { return where_ + "." + key; }

  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError(where_ + ": unknown key '" + it.key() + "'");
  }

 private:
  const json& j_;
  std::string where_;
  std::set<std::string> seen_;
};

json length_json(double v) { return std::isinf(v) ? json("inf") : json(v); }

analysis::Grid parse_grid(Section s) {
  analysis::Grid g;
  g.lo = s.number("lo");
  g.hi = s.number("hi");
  g.count = s.integer("count", 2);
  g.log = s.boolean("log", false);
  s.finish();
  try {
    g.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("grid: ") + e.what());
  }
  return g;
}

json grid_json(const analysis::Grid& g) { return {{"lo", g.lo}, {"hi", g.hi}, {"count", g.count}, {"log", g.log}}; }

void check_temperature(double T, const std::string& what) {
  if (!(T > 0.0) || !std::isfinite(T)) throw ConfigError(what + " must be a positive temperature in K");
}

SystemSpec parse_system(Section s) {
  SystemSpec sys;
  const json& m = s.raw("materials");
  if (!m.is_array() || m.size() != 3) throw ConfigError(s.path("materials") + ": expected an array of three materials");
  for (int i = 0; i < 3; ++i)
    sys.materials[i] = MaterialSpec::parse(m[i], s.path("materials") + "[" + std::to_string(i) + "]");
  auto& g = sys.geometry;
  g.delta1 = s.length_or_inf("delta1_m");
  g.delta2 = s.number("delta2_m");
  g.delta3 = s.length_or_inf("delta3_m");
  g.d12 = s.number("d12_m");
  g.d23 = s.number("d23_m");
  sys.T1 = s.number("T1_K");
  sys.T3 = s.number("T3_K");
  sys.Te = s.number("Te_K", 300.0);
  sys.T2 = s.number("T2_K", sys.Te);
  s.finish();
  for (auto [T, n] : {std::pair{sys.T1, "T1_K"}, {sys.T2, "T2_K"}, {sys.T3, "T3_K"}, {sys.Te, "Te_K"}})
    check_temperature(T, std::string("system.") + n);
  try {
    sys.build().validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("system: ") + e.what());
  }
  return sys;
}

json system_json(const SystemSpec& s) {
  const auto& g = s.geometry;
  return {{"materials", {s.materials[0].spec, s.materials[1].spec, s.materials[2].spec}},
          {"delta1_m", length_json(g.delta1)},
          {"delta2_m", g.delta2},
          {"delta3_m", length_json(g.delta3)},
          {"d12_m", g.d12},
          {"d23_m", g.d23},
          {"T1_K", s.T1},
          {"T2_K", s.T2},
          {"T3_K", s.T3},
          {"Te_K", s.Te}};
}

AtomModelSpec parse_atom_model(Section s) {
  AtomModelSpec a;
  a.model = s.string("model", "rubidium");
  if (a.model == "static") {
    a.alpha0 = s.number("alpha0_C_m2_per_V");
  } else if (a.model == "lorentz") {
    a.alpha0 = s.number("alpha0_C_m2_per_V");
    a.omega0 = s.number("omega0_rad_per_s");
    a.gamma0 = s.number("gamma0_rad_per_s", 0.0);
  } else if (a.model != "rubidium") {
    throw ConfigError(s.path("model") + ": expected rubidium, static or lorentz");
  }
  a.scale = s.number("scale", 1.0);
  s.finish();
  try {
    a.build();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("atom model: ") + e.what());
  }
  return a;
}

json atom_model_json(const AtomModelSpec& a) {
  json j = {{"model", a.model}, {"scale", a.scale}};
  if (a.model == "static") j["alpha0_C_m2_per_V"] = a.alpha0;
  if (a.model == "lorentz") {
    j["alpha0_C_m2_per_V"] = a.alpha0;
    j["omega0_rad_per_s"] = a.omega0;
    j["gamma0_rad_per_s"] = a.gamma0;
  }
  return j;
}

AtomCavitySpec parse_atom_cavity(Section s) {
  AtomCavitySpec a;
  a.material1 = MaterialSpec::parse(s.raw("material1"), s.path("material1"));
  a.material3 = MaterialSpec::parse(s.raw("material3"), s.path("material3"));
  a.delta1 = s.length_or_inf("delta1_m");
  a.delta3 = s.length_or_inf("delta3_m");
  a.D = s.number("D_m");
  a.T1 = s.number("T1_K");
  a.T3 = s.number("T3_K");
  a.Te = s.number("Te_K", 300.0);
  if (s.has("T2_K")) a.T2 = s.number("T2_K");
  if (s.has("atom")) a.atom = parse_atom_model(s.sub("atom"));
  s.finish();
  try {
    a.build().validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("atom_cavity: ") + e.what());
  }
  return a;
}

json atom_cavity_json(const AtomCavitySpec& a) {
  json j = {{"material1", a.material1.spec}, {"material3", a.material3.spec}, {"delta1_m", length_json(a.delta1)},
            {"delta3_m", length_json(a.delta3)}, {"D_m", a.D}, {"T1_K", a.T1}, {"T3_K", a.T3}, {"Te_K", a.Te},
            {"atom", atom_model_json(a.atom)}};
  if (a.T2) j["T2_K"] = *a.T2;
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------

MaterialSpec MaterialSpec::parse(const json& j, const std::string& where) {
  MaterialSpec m;
  if (j.is_string()) {
    m.spec = j;
  } else if (j.is_object()) {
    Section s(j, where);
    const std::string model = s.string("model", "");
    if (model == "constant") {
      m.spec = {{"model", model}, {"eps_re", s.number("eps_re")}, {"eps_im", s.number("eps_im", 0.0)}};
    } else if (model == "drude") {
      m.spec = {{"model", model},
                {"omega_p_rad_per_s", s.number("omega_p_rad_per_s")},
                {"gamma_rad_per_s", s.number("gamma_rad_per_s")}};
    } else if (model == "phonon_lorentz") {
      m.spec = {{"model", model},
                {"eps_inf", s.number("eps_inf")},
                {"omega_l_rad_per_s", s.number("omega_l_rad_per_s")},
                {"omega_t_rad_per_s", s.number("omega_t_rad_per_s")},
                {"gamma_rad_per_s", s.number("gamma_rad_per_s")}};
    } else {
      throw ConfigError(where + ": model must be constant, drude or phonon_lorentz");
    }
    s.finish();
  } else {
    throw ConfigError(where + ": expected a material name, file path or model object");
  }
  try {
    m.build();
  } catch (const ValidationError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return m;
}

Material MaterialSpec::build() const {
  if (spec.is_string()) return Material::from_name(spec.get<std::string>());
  const std::string model = spec.at("model");
  if (model == "constant") return Material::constant({spec.at("eps_re").get<double>(), spec.at("eps_im").get<double>()});
  if (model == "drude") return Material::drude(spec.at("omega_p_rad_per_s"), spec.at("gamma_rad_per_s"));
  return Material::phonon_lorentz(spec.at("eps_inf"), spec.at("omega_l_rad_per_s"), spec.at("omega_t_rad_per_s"),
                                  spec.at("gamma_rad_per_s"));
}

ThreeSlabSystem SystemSpec::build() const {
  ThreeSlabSystem s;
  for (int i = 0; i < 3; ++i) s.materials[i] = materials[i].build();
  s.geometry = geometry;
  s.T1 = T1;
  s.T2 = T2;
  s.T3 = T3;
  s.Te = Te;
  return s;
}

AtomModel AtomModelSpec::build() const {
  AtomModel base = model == "static"    ? AtomModel::static_alpha(alpha0)
                   : model == "lorentz" ? AtomModel::single_lorentz(alpha0, omega0, gamma0)
                                        : AtomModel::rubidium();
  return scale == 1.0 ? base : AtomModel::scaled(base, scale);
}

AtomCavity AtomCavitySpec::build() const {
  AtomCavity c;
  c.material1 = material1.build();
  c.material3 = material3.build();
  c.delta1 = delta1;
  c.delta3 = delta3;
  c.D = D;
  c.z = 0.0;
  c.T1 = T1;
  c.T3 = T3;
  c.Te = Te;
  c.T2 = T2;
  c.atom = atom.build();
  return c;
}

Accuracy RunConfig::default_accuracy() { return Accuracy::with(1e-6); }

RunConfig parse(const json& j) {
  RunConfig c;
  Section root(j, "config");
  if (root.has("system")) c.system = parse_system(root.sub("system"));
  if (root.has("atom_cavity")) c.atom_cavity = parse_atom_cavity(root.sub("atom_cavity"));

  if (root.has("quadrature")) {
    Section q = root.sub("quadrature");
    auto& a = c.accuracy;
    a.quad.rel_tol = q.number("rel_tol", a.quad.rel_tol);
    a.quad.abs_tol = q.number("abs_tol", a.quad.abs_tol);
    a.quad.max_subdivisions = q.integer("max_subdivisions", a.quad.max_subdivisions);
    a.quad.frequency_cutoff_factor = q.number("frequency_cutoff_factor", a.quad.frequency_cutoff_factor);
    a.sum.rel_tol = q.number("sum_rel_tol", a.sum.rel_tol);
    a.sum.max_terms = q.integer("sum_max_terms", a.sum.max_terms);
    q.finish();
  }
  const int workers = root.integer("workers", 1);
  c.accuracy.quad.workers = c.accuracy.sum.workers = workers;
  try {
    c.accuracy.quad.validate();
    c.accuracy.sum.validate();
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("quadrature: ") + e.what());
  }

  if (root.has("sweep")) {
    Section s = root.sub("sweep");
    analysis::SweepSpec sw;
    sw.parameter = s.string("parameter", "");
    sw.observable = s.string("observable", "pressure_additive");
    sw.grid = parse_grid(s.sub("grid"));
    s.finish();
    try {
      sw.validate();
    } catch (const ValidationError& e) {
      throw ConfigError(std::string("sweep: ") + e.what());
    }
    c.sweep = sw;
  }

  if (root.has("map")) {
    Section s = root.sub("map");
    MapSpec m;
    m.d12 = parse_grid(s.sub("d12_m"));
    m.d23 = parse_grid(s.sub("d23_m"));
    if (s.has("T_K")) {
      m.T = s.number("T_K");
      check_temperature(*m.T, "map.T_K");
    }
    m.find_max = s.boolean("find_max", false);
    if (s.has("search")) {
      Section ms = s.sub("search");
      m.search.d_min = ms.number("d_min_m", m.search.d_min);
      m.search.d_max = ms.number("d_max_m", m.search.d_max);
      m.search.grid = ms.integer("grid", m.search.grid);
      m.search.refine_rounds = ms.integer("refine_rounds", m.search.refine_rounds);
      m.search.log_tol = ms.number("log_tol", m.search.log_tol);
      ms.finish();
      if (!(m.search.d_min > 0.0) || !(m.search.d_max > m.search.d_min) || m.search.grid < 2 ||
          m.search.refine_rounds < 0 || !(m.search.log_tol > 0.0))
        throw ConfigError("map.search: need 0 < d_min_m < d_max_m, grid >= 2, refine_rounds >= 0, log_tol > 0");
    }
    s.finish();
    for (const auto* g : {&m.d12, &m.d23})
      if (!(std::min(g->lo, g->hi) > 0.0)) throw ConfigError("map: gap grids must be positive");
    c.map = m;
  }

  if (root.has("teq")) {
    Section s = root.sub("teq");
    TeqSpec t;
    t.z2 = parse_grid(s.sub("z2_m"));
    t.tol = s.number("tol_K", t.tol);
    if (!(t.tol > 0.0)) throw ConfigError("teq.tol_K must be > 0");
    if (s.has("bracket_K")) {
      const json& b = s.raw("bracket_K");
      if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number())
        throw ConfigError("teq.bracket_K: expected [lo, hi]");
      t.bracket = std::pair{b[0].get<double>(), b[1].get<double>()};
      if (!(t.bracket->first > 0.0) || !(t.bracket->second > t.bracket->first))
        throw ConfigError("teq.bracket_K: need 0 < lo < hi");
    }
    s.finish();
    c.teq = t;
  }

  if (root.has("atom")) {
    Section s = root.sub("atom");
    c.atom.points = s.integer("points", c.atom.points);
    if (c.atom.points < 3) throw ConfigError("atom.points must be >= 3");
    if (s.has("D_scan_m")) {
      const json& d = s.raw("D_scan_m");
      if (!d.is_array()) throw ConfigError("atom.D_scan_m: expected an array of widths");
      for (const auto& v : d) {
        if (!v.is_number() || !(v.get<double>() > 0.0)) throw ConfigError("atom.D_scan_m: widths must be > 0");
        c.atom.D_scan.push_back(v.get<double>());
      }
    }
    s.finish();
  }

  if (root.has("output")) {
    Section s = root.sub("output");
    c.output.path = s.string("path", "");
    c.output.format = s.string("format", "csv");
    if (c.output.format != "csv" && c.output.format != "structured-text")
      throw ConfigError("output.format must be csv or structured-text");
    c.output.magnitude = s.boolean("magnitude", false);
    s.finish();
  }
  root.finish();
  return c;
}

RunConfig parse_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse(j);
}

RunConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_text(ss.str());
}

json to_json(const RunConfig& c) {
  json j = json::object();
  if (c.system) j["system"] = system_json(*c.system);
  if (c.atom_cavity) j["atom_cavity"] = atom_cavity_json(*c.atom_cavity);
  const auto& a = c.accuracy;
  j["quadrature"] = {{"rel_tol", a.quad.rel_tol},
                     {"abs_tol", a.quad.abs_tol},
                     {"max_subdivisions", a.quad.max_subdivisions},
                     {"frequency_cutoff_factor", a.quad.frequency_cutoff_factor},
                     {"sum_rel_tol", a.sum.rel_tol},
                     {"sum_max_terms", a.sum.max_terms}};
  j["workers"] = a.quad.workers;
  if (c.sweep)
    j["sweep"] = {{"parameter", c.sweep->parameter}, {"observable", c.sweep->observable}, {"grid", grid_json(c.sweep->grid)}};
  if (c.map) {
    const auto& m = *c.map;
    j["map"] = {{"d12_m", grid_json(m.d12)},
                {"d23_m", grid_json(m.d23)},
                {"find_max", m.find_max},
                {"search",
                 {{"d_min_m", m.search.d_min},
                  {"d_max_m", m.search.d_max},
                  {"grid", m.search.grid},
                  {"refine_rounds", m.search.refine_rounds},
                  {"log_tol", m.search.log_tol}}}};
    if (m.T) j["map"]["T_K"] = *m.T;
  }
  if (c.teq) {
    j["teq"] = {{"z2_m", grid_json(c.teq->z2)}, {"tol_K", c.teq->tol}};
    if (c.teq->bracket) j["teq"]["bracket_K"] = {c.teq->bracket->first, c.teq->bracket->second};
  }
  j["atom"] = {{"points", c.atom.points}, {"D_scan_m", c.atom.D_scan}};
  j["output"] = {{"path", c.output.path}, {"format", c.output.format}, {"magnitude", c.output.magnitude}};
  return j;
}

void require_for(const RunConfig& c, const std::string& command) {
  auto need = [&](bool ok, const std::string& section) {
    if (!ok) throw ConfigError("command '" + command + "' needs a '" + section + "' section");
  };
  if (command == "observables") {
    need(c.system.has_value(), "system");
  } else if (command == "pressure-sweep") {
    need(c.system.has_value(), "system");
    need(c.sweep.has_value(), "sweep");
  } else if (command == "nonadditivity-map") {
    need(c.system.has_value(), "system");
    need(c.map.has_value(), "map");
  } else if (command == "teq") {
    need(c.system.has_value(), "system");
    need(c.teq.has_value(), "teq");
  } else if (command == "atom") {
    need(c.atom_cavity.has_value(), "atom_cavity");
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
}

}  // namespace tricav::config
