// tricav: command-line front end for the three-slab and atom-cavity solvers.

#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tricav/analysis.hpp"
#include "tricav/atom.hpp"
#include "tricav/config.hpp"
#include "tricav/slab_observables.hpp"

using namespace tricav;
using json = nlohmann::json;

namespace {

using Cell = std::variant<double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::string> notes;  // trailing "# ..." lines in CSV
  json extra = json::object();     // same information for structured text
  bool failed = false;
};

std::string shortest(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // no "-0"
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + "\"";
}

void write_csv(std::ostream& os, const std::string& command, const Table& t) {
  os << "# tricav " << TRICAV_VERSION << ' ' << command << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (const double* d = std::get_if<double>(&row[i])) os << shortest(*d);
      else os << csv_field(std::get<std::string>(row[i]));
    }
    os << '\n';
  }
  for (const auto& n : t.notes) os << "# " << n << '\n';
}

json cell_json(const Cell& c) {
  if (const double* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  return std::get<std::string>(c);
}

void write_structured(std::ostream& os, const std::string& command, const Table& t) {
  json j;
  j["tricav"] = TRICAV_VERSION;
  j["command"] = command;
  j["columns"] = t.columns;
  j["rows"] = json::array();
  for (const auto& row : t.rows) {
    json r = json::array();
    for (const auto& c : row) r.push_back(cell_json(c));
    j["rows"].push_back(r);
  }
  if (!t.extra.empty()) j["summary"] = t.extra;
  os << j.dump(2) << '\n';
}

// Pressures and forces are signed; plots of "the pressure on slab 1" usually
// show the modulus.
void apply_magnitude(Table& t) {
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    const auto& name = t.columns[c];
    const bool signed_column = name.ends_with("_Pa") || name.ends_with("_N");
    if (!signed_column) continue;
    for (auto& row : t.rows)
      if (double* d = std::get_if<double>(&row[c])) *d = std::abs(*d);
  }
}

// ---------------------------------------------------------------------------

Table run_observables(const config::RunConfig& cfg) {
  const auto sys = cfg.system->build();
  const auto o = observables(sys, cfg.accuracy);
  Table t;
  t.columns = {"body", "first_source", "second_source", "H_W_m2", "P_Pa", "P_eq_Pa"};
  const char* names[5] = {"first_pw", "first_ew", "second_pw", "second_ew", "env_pw"};
  for (const char* n : names) t.columns.push_back(std::string("H_") + n + "_W_m2");
  for (const char* n : names) t.columns.push_back(std::string("P_") + n + "_Pa");
  for (int b = 0; b < 3; ++b) {
    std::vector<Cell> row{double(b + 1), double(o.heat[b].sources[0]), double(o.heat[b].sources[1]), o.H[b], o.P[b],
                          o.P_eq[b]};
    for (int c = 0; c < 5; ++c) row.push_back(o.heat[b].contribution(c));
    for (int c = 0; c < 5; ++c) row.push_back(o.force[b].contribution(c));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table run_sweep(const config::RunConfig& cfg) {
  const auto table = analysis::sweep(*cfg.sweep, cfg.system->build(), cfg.accuracy);
  Table t;
  t.columns.push_back(table.parameter);
  t.columns.insert(t.columns.end(), table.columns.begin(), table.columns.end());
  t.columns.push_back("error");
  for (const auto& r : table.rows) {
    std::vector<Cell> row{r.parameter};
    for (double v : r.values) row.push_back(v);
    row.push_back(r.error);
    t.failed |= !r.error.empty();
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table run_map(const config::RunConfig& cfg) {
  const auto& m = *cfg.map;
  const auto sys = cfg.system->build();
  const double T = m.T.value_or(sys.T1);
  const auto pts = analysis::nonadditivity_map(sys, m.d12.values(), m.d23.values(), T, cfg.accuracy);
  Table t;
  t.columns = {"d12_m", "d23_m", "P1_eq_Pa", "P1_additive_Pa", "nonadditivity", "error"};
  for (const auto& p : pts) {
    t.rows.push_back({p.d12, p.d23, p.P, p.P_additive, p.value, p.error});
    t.failed |= !p.error.empty();
  }
  if (m.find_max) {
    const auto best = analysis::nonadditivity_max(sys, sys.geometry.delta2, T, m.search, cfg.accuracy);
    t.notes.push_back("maximum d12_m=" + shortest(best.d12) + " d23_m=" + shortest(best.d23) +
                      " nonadditivity=" + shortest(best.value) + " on_boundary=" + (best.on_boundary ? "1" : "0") +
                      " evaluations=" + std::to_string(best.evaluations));
    t.extra["maximum"] = {{"d12_m", best.d12},
                          {"d23_m", best.d23},
                          {"nonadditivity", best.value},
                          {"on_boundary", best.on_boundary},
                          {"evaluations", best.evaluations}};
  }
  return t;
}

Table run_teq(const config::RunConfig& cfg) {
  const auto& q = *cfg.teq;
  const auto sys = cfg.system->build();
  Table t;
  t.columns = {"z2_m", "d12_m", "d23_m", "T2_star_K", "error"};
  const auto z2 = q.z2.values();
  std::vector<analysis::TeqPoint> pts;
  if (q.bracket) {
    // teq_profile uses the default bracket; an explicit one goes point by point.
    for (double z : z2) {
      analysis::TeqPoint p;
      p.z2 = z;
      try {
        const auto s = analysis::with_parameter(sys, "z2_m", z);
        p.d12 = s.geometry.d12;
        p.d23 = s.geometry.d23;
        p.T2 = analysis::equilibrium_temperature(s, q.bracket, q.tol, cfg.accuracy).T2;
      } catch (const std::exception& e) {
        p.T2 = std::nan("");
        p.error = e.what();
      }
      pts.push_back(p);
    }
  } else {
    pts = analysis::teq_profile(sys, z2, q.tol, cfg.accuracy);
  }
  for (const auto& p : pts) {
    t.rows.push_back({p.z2, p.d12, p.d23, p.T2, p.error});
    t.failed |= !p.error.empty();
  }
  return t;
}

Table run_atom(const config::RunConfig& cfg) {
  const auto base = cfg.atom_cavity->build();
  std::vector<double> widths = cfg.atom.D_scan;
  if (widths.empty()) widths.push_back(base.D);
  Table t;
  t.columns = {"D_m", "z_m", "F_N", "U_J", "F_eq_N", "F_body1_N", "F_body3_N", "F_env_N"};
  t.extra["profiles"] = json::array();
  for (double D : widths) {
    AtomCavity cav = base;
    cav.D = D;
    const auto z = cavity_grid(D, cfg.atom.points);
    const auto p = atom_potential(cav, z, cfg.accuracy);
    for (std::size_t i = 0; i < z.size(); ++i)
      t.rows.push_back({D, p.z[i], p.F[i], p.U[i], p.F_eq[i], p.F_neq[i].body1, p.F_neq[i].body3, p.F_neq[i].env});
    const auto rep = classify_extrema(p);
    json prof = {{"D_m", D}, {"sign_changes", rep.sign_changes}, {"extrema", json::array()}, {"warnings", p.warnings}};
    t.notes.push_back("D_m=" + shortest(D) + " sign_changes=" + std::to_string(rep.sign_changes));
    for (const auto& e : rep.extrema) {
      const char* kind = e.kind == Extremum::Kind::Min ? "min" : "max";
      t.notes.push_back("D_m=" + shortest(D) + " extremum=" + kind + " z_m=" + shortest(e.z) + " U_J=" + shortest(e.U) +
                        " depth_J=" + shortest(e.depth));
      prof["extrema"].push_back({{"kind", kind}, {"z_m", e.z}, {"U_J", e.U}, {"depth_J", e.depth}});
    }
    for (const auto& w : p.warnings) t.notes.push_back("D_m=" + shortest(D) + " warning: " + w);
    t.extra["profiles"].push_back(prof);
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Casimir-Lifshitz pressure, heat transfer and atom forces in three-slab cavities"};
  app.set_version_flag("--version", std::string(TRICAV_VERSION));
  app.require_subcommand(1, 1);

  std::string config_path, out_path;
  int workers = 0;
  double rel_tol = 0.0;
  bool print_config = false;
  bool magnitude = false;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"observables", "heat fluxes and pressures on the three slabs with channel breakdown"},
      {"pressure-sweep", "equilibrium pressure along a one-parameter sweep"},
      {"nonadditivity-map", "nonadditivity of the pressure on slab 1 over a (d12, d23) grid"},
      {"teq", "equilibrium temperature of slab 2 versus its position"},
      {"atom", "force and potential profile of an atom between two slabs"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON run configuration")->required();
    sub->add_option("--out", out_path, "output file (default: output.path, else stdout)");
    sub->add_option("--workers", workers, "OpenMP workers for the compute kernels")->check(CLI::PositiveNumber);
    sub->add_option("--quad-rel-tol", rel_tol, "relative tolerance for quadratures and sums")
        ->check(CLI::PositiveNumber);
    sub->add_flag("--magnitude", magnitude, "write |value| in pressure and force columns");
    sub->add_flag("--print-config", print_config, "print the canonical configuration and exit");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  config::RunConfig cfg;
  try {
    cfg = config::load(config_path);
    if (workers > 0) cfg.accuracy.quad.workers = cfg.accuracy.sum.workers = workers;
    if (rel_tol > 0.0) cfg.accuracy.quad.rel_tol = cfg.accuracy.sum.rel_tol = rel_tol;
    if (!out_path.empty()) cfg.output.path = out_path;
    if (magnitude) cfg.output.magnitude = true;
    config::require_for(cfg, command);
  } catch (const std::exception& e) {
    std::cerr << "tricav: config error: " << e.what() << '\n';
    return 1;
  }
  if (print_config) {
    std::cout << config::to_json(cfg).dump(2) << '\n';
    return 0;
  }

  Table t;
  int code = 0;
  try {
    if (command == "observables") t = run_observables(cfg);
    else if (command == "pressure-sweep") t = run_sweep(cfg);
    else if (command == "nonadditivity-map") t = run_map(cfg);
    else if (command == "teq") t = run_teq(cfg);
    else t = run_atom(cfg);
    if (cfg.output.magnitude) apply_magnitude(t);
    if (t.failed) {
      std::cerr << "tricav: some points failed; see the error column\n";
      code = 2;
    }
  } catch (const ValidationError& e) {
    std::cerr << "tricav: config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "tricav: numerical failure: " << e.what() << '\n';
    return 2;
  }

  std::ostringstream os;
  if (cfg.output.format == "csv") write_csv(os, command, t);
  else write_structured(os, command, t);
  if (cfg.output.path.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream f(cfg.output.path, std::ios::binary);
    if (!(f << os.str())) {
      std::cerr << "tricav: cannot write " << cfg.output.path << '\n';
      return 1;
    }
  }
  return code;
}
