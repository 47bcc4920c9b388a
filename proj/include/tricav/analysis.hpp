#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "tricav/slab_observables.hpp"

namespace tricav::analysis {

// Raised when a root or maximum search cannot proceed (no sign change,
// non-monotone flux, degenerate denominator).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

struct TeqResult {
  double T2 = 0.0;
  double flux_at_root = 0.0;  // H2 at T2, W/m^2
  double T_lo = 0.0;
  double T_hi = 0.0;
};

// Temperature of slab 2 at which its net heat flux vanishes. sys.T2 is
// ignored. The default bracket is [min(T1,T3,Te) - 1, max(T1,T3,Te) + 1].
TeqResult equilibrium_temperature(const ThreeSlabSystem& sys, std::optional<std::pair<double, double>> bracket = {},
                                  double tol = 1e-3, const Accuracy& acc = {});

struct TeqPoint {
  double z2 = 0.0;  // displacement of slab 2 from the cavity centre, m
  double d12 = 0.0;
  double d23 = 0.0;
  double T2 = 0.0;
  std::string error;
};

// T2*(z2) with D = d12 + delta2 + d23 held at the value of sys. Points are
// evaluated in parallel when acc.quad.workers > 1; failures become rows
// with a message.
std::vector<TeqPoint> teq_profile(const ThreeSlabSystem& sys, const std::vector<double>& z2, double tol = 1e-3,
                                  const Accuracy& acc = {});

// (P_additive - P) / P for slab 1 at temperature T.
double nonadditivity(const ThreeSlabSystem& sys, double T, const Accuracy& acc = {});

struct MapPoint {
  double d12 = 0.0;
  double d23 = 0.0;
  double P = 0.0;        // three-body pressure on slab 1, Pa
  double P_additive = 0.0;
  double value = 0.0;    // (P_additive - P) / P
  std::string error;
};

// Nonadditivity on the d12 x d23 product grid, d23 varying fastest.
std::vector<MapPoint> nonadditivity_map(const ThreeSlabSystem& sys, const std::vector<double>& d12,
                                        const std::vector<double>& d23, double T, const Accuracy& acc = {});

struct NonadditivityMax {
  double d12 = 0.0;
  double d23 = 0.0;
  double value = 0.0;
  bool on_boundary = false;
  int evaluations = 0;
};

struct MaxSearch {
  double d_min = 10e-9;
  double d_max = 100e-6;
  int grid = 9;          // log-spaced points per axis
  int refine_rounds = 2;  // alternating golden-section passes
  double log_tol = 1e-3;  // in ln(d)
};

// Coarse log grid over (d12, d23) then golden-section refinement of each
// axis in turn, starting from the best grid point.
NonadditivityMax nonadditivity_max(const ThreeSlabSystem& tmpl, double delta2, double T, const MaxSearch& search = {},
                                   const Accuracy& acc = {});

// ---------------------------------------------------------------------------
// Sweeps.

struct Grid {
  double lo = 0.0;
  double hi = 0.0;
  int count = 2;
  bool log = false;

  void validate() const;
  std::vector<double> values() const;
};

// Parameters: d12_m, d23_m, delta1_m, delta2_m, delta3_m, T1_K, T2_K, T3_K,
// Te_K, z2_m (slab 2 moved at fixed D), d12_fixed_D_m (d12 varied with
// d12 + delta2 + d23 fixed).
// Observables: pressure_eq (P1, P2, P3 at each T_i), pressure_additive
// (P1, additive P1, nonadditivity at T1), observables (H and P of each
// slab), teq (T2*).
struct SweepSpec {
  std::string parameter;
  Grid grid;
  std::string observable;

  void validate() const;
};

struct SweepRow {
  double parameter = 0.0;
  std::vector<double> values;
  std::string error;
};

struct SweepTable {
  std::string parameter;
  std::vector<std::string> columns;  // names with unit suffixes
  std::vector<SweepRow> rows;
};

std::vector<std::string> sweep_columns(const std::string& observable);
ThreeSlabSystem with_parameter(const ThreeSlabSystem& sys, const std::string& parameter, double value);
SweepTable sweep(const SweepSpec& spec, const ThreeSlabSystem& sys, const Accuracy& acc = {});

}  // namespace tricav::analysis
