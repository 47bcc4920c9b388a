#include "tricav/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace tricav::analysis {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

TeqResult equilibrium_temperature(const ThreeSlabSystem& sys, std::optional<std::pair<double, double>> bracket,
                                  double tol, const Accuracy& acc) {
  sys.validate();
  if (!(tol > 0.0)) throw ValidationError("temperature tolerance must be > 0");
  if (sys.materials[1].is_vacuum()) throw ValidationError("slab 2 is vacuum; it has no equilibrium temperature");
  const double t_min = std::min({sys.T1, sys.T3, sys.Te});
  const double t_max = std::max({sys.T1, sys.T3, sys.Te});
  auto [lo, hi] = bracket.value_or(std::make_pair(t_min - 1.0, t_max + 1.0));
  if (lo > hi) std::swap(lo, hi);
  if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("temperature bracket must satisfy 0 < T_lo < T_hi");

  NeqSpectrum spec(sys, 2, 1, {lo, hi, sys.T1, sys.T3, sys.Te}, acc);
  auto flux = [&](double T2) { return spec.decompose(T2, sys.T1, sys.T3, sys.Te).total(); };

  const double f_lo = flux(lo), f_hi = flux(hi);
  if (!(f_lo * f_hi < 0.0))
    throw SolverError("no sign change of H2 in [" + fmt(lo) + ", " + fmt(hi) + "] K: H2(T_lo) = " + fmt(f_lo) +
                      " W/m^2, H2(T_hi) = " + fmt(f_hi) + " W/m^2");
  // Uniqueness is checked, not assumed.
  std::vector<double> samples{f_lo};
  for (int i = 1; i <= 5; ++i) samples.push_back(flux(lo + (hi - lo) * i / 6.0));
  samples.push_back(f_hi);
  const bool falling = f_hi < f_lo;
  for (std::size_t i = 1; i < samples.size(); ++i)
    if (falling ? samples[i] > samples[i - 1] : samples[i] < samples[i - 1])
      throw SolverError("H2 is not monotone in T2 on [" + fmt(lo) + ", " + fmt(hi) + "] K");

  TeqResult r;
  r.T_lo = lo;
  r.T_hi = hi;
  r.T2 = numerics::bisect(flux, lo, hi, tol);
  r.flux_at_root = flux(r.T2);
  return r;
}

std::vector<TeqPoint> teq_profile(const ThreeSlabSystem& sys, const std::vector<double>& z2, double tol,
                                  const Accuracy& acc) {
  sys.validate();
  const Accuracy inner = acc.serial();
  auto one = [&](std::size_t i) {
    TeqPoint p;
    p.z2 = z2[i];
    try {
      const auto s = with_parameter(sys, "z2_m", z2[i]);
      p.d12 = s.geometry.d12;
      p.d23 = s.geometry.d23;
      p.T2 = equilibrium_temperature(s, {}, tol, inner).T2;
    } catch (const std::exception& e) {
      p.T2 = std::numeric_limits<double>::quiet_NaN();
      p.error = e.what();
    }
    return p;
  };
  return numerics::parallel_map<TeqPoint>(z2.size(), one, acc.quad.workers);
}

double nonadditivity(const ThreeSlabSystem& sys, double T, const Accuracy& acc) {
  const double p = pressure_eq_slab1(sys, T, acc);
  const double p_add = additive_pressure_slab1(sys, T, acc);
  if (!(std::abs(p) > 1e-12 * std::abs(p_add)) || p == 0.0)
    throw SolverError("nonadditivity: three-body pressure " + fmt(p) + " Pa is too small to normalise by");
  return (p_add - p) / p;
}

std::vector<MapPoint> nonadditivity_map(const ThreeSlabSystem& sys, const std::vector<double>& d12,
                                        const std::vector<double>& d23, double T, const Accuracy& acc) {
  const Accuracy inner = acc.serial();
  const std::size_t n = d23.size();
  auto one = [&](std::size_t k) {
    MapPoint p;
    p.d12 = d12[k / n];
    p.d23 = d23[k % n];
    try {
      ThreeSlabSystem s = sys;
      s.geometry.d12 = p.d12;
      s.geometry.d23 = p.d23;
      p.P = pressure_eq_slab1(s, T, inner);
      p.P_additive = additive_pressure_slab1(s, T, inner);
      if (!(std::abs(p.P) > 1e-12 * std::abs(p.P_additive)) || p.P == 0.0)
        throw SolverError("nonadditivity: three-body pressure " + fmt(p.P) + " Pa is too small to normalise by");
      p.value = (p.P_additive - p.P) / p.P;
    } catch (const std::exception& e) {
      p.value = std::numeric_limits<double>::quiet_NaN();
      p.error = e.what();
    }
    return p;
  };
  return numerics::parallel_map<MapPoint>(d12.size() * n, one, acc.quad.workers);
}

// ---------------------------------------------------------------------------

namespace {

// Maximises f on [a, b] (in log d); returns (x, f(x)) of the best point seen.
template <class F>
std::pair<double, double> golden_max(F&& f, double a, double b, double tol, int& evals) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - g * (b - a), x2 = a + g * (b - a);
  double f1 = f(x1), f2 = f(x2);
  evals += 2;
  while (b - a > tol) {
    if (f1 >= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - g * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + g * (b - a);
      f2 = f(x2);
    }
    ++evals;
  }
  return f1 >= f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

}  // namespace

NonadditivityMax nonadditivity_max(const ThreeSlabSystem& tmpl, double delta2, double T, const MaxSearch& s,
                                   const Accuracy& acc) {
  if (!(s.d_min > 0.0) || !(s.d_max > s.d_min)) throw ValidationError("search domain must satisfy 0 < d_min < d_max");
  if (s.grid < 2) throw ValidationError("search grid needs at least 2 points per axis");
  if (!(delta2 >= 0.0)) throw ValidationError("delta2 must be >= 0");
  ThreeSlabSystem base = tmpl;
  base.geometry.delta2 = delta2;

  const double l0 = std::log(s.d_min), l1 = std::log(s.d_max);
  const int n = s.grid;
  std::vector<double> axis(n);
  for (int i = 0; i < n; ++i) axis[i] = l0 + (l1 - l0) * i / (n - 1);

  const Accuracy inner = acc.serial();
  auto value = [&](double ld12, double ld23) {
    ThreeSlabSystem sys = base;
    sys.geometry.d12 = std::exp(ld12);
    sys.geometry.d23 = std::exp(ld23);
    try {
      return nonadditivity(sys, T, inner);
    } catch (const SolverError&) {
      return -std::numeric_limits<double>::infinity();
    }
  };
  const auto coarse = numerics::parallel_map<double>(
      static_cast<std::size_t>(n * n), [&](std::size_t k) { return value(axis[k / n], axis[k % n]); },
      acc.quad.workers);

  NonadditivityMax out;
  out.evaluations = n * n;
  std::size_t best = 0;
  for (std::size_t k = 1; k < coarse.size(); ++k)
    if (coarse[k] > coarse[best]) best = k;
  double x = axis[best / n], y = axis[best % n], fbest = coarse[best];
  const double step = (l1 - l0) / (n - 1);

  for (int round = 0; round < s.refine_rounds; ++round) {
    const double w = step / (round + 1);
    auto [nx, fx] = golden_max([&](double t) { return value(t, y); }, std::max(l0, x - w), std::min(l1, x + w),
                               s.log_tol, out.evaluations);
    if (fx > fbest) {
      x = nx;
      fbest = fx;
    }
    auto [ny, fy] = golden_max([&](double t) { return value(x, t); }, std::max(l0, y - w), std::min(l1, y + w),
                               s.log_tol, out.evaluations);
    if (fy > fbest) {
      y = ny;
      fbest = fy;
    }
  }
  out.d12 = std::exp(x);
  out.d23 = std::exp(y);
  out.value = fbest;
  const double edge = std::max(s.log_tol, 1e-12);
  out.on_boundary = x - l0 < edge || l1 - x < edge || y - l0 < edge || l1 - y < edge;
  return out;
}

// ---------------------------------------------------------------------------

void Grid::validate() const {
  if (count < 1) throw ValidationError("grid count must be >= 1");
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw ValidationError("grid bounds must be finite");
  if (count == 1 && lo != hi) throw ValidationError("a single-point grid needs lo == hi");
  if (log && !(lo > 0.0 && hi > 0.0)) throw ValidationError("logarithmic grid needs positive bounds");
}

std::vector<double> Grid::values() const {
  validate();
  std::vector<double> v(count);
  if (count == 1) {
    v[0] = lo;
    return v;
  }
  for (int i = 0; i < count; ++i) {
    const double t = static_cast<double>(i) / (count - 1);
    v[i] = log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
  }
  v.front() = lo;
  v.back() = hi;
  return v;
}

namespace {

const std::vector<std::string>& parameters() {
  static const std::vector<std::string> p{"d12_m",  "d23_m", "delta1_m", "delta2_m", "delta3_m",     "T1_K",
                                          "T2_K",   "T3_K",  "Te_K",     "z2_m",     "d12_fixed_D_m"};
  return p;
}

bool dimensionful_positive(const std::string& p) { return p != "z2_m"; }

}  // namespace

std::vector<std::string> sweep_columns(const std::string& observable) {
  if (observable == "pressure_eq") return {"P1_eq_Pa", "P2_eq_Pa", "P3_eq_Pa"};
  if (observable == "pressure_additive") return {"P1_eq_Pa", "P1_additive_Pa", "nonadditivity"};
  if (observable == "observables") return {"H1_W_m2", "H2_W_m2", "H3_W_m2", "P1_Pa", "P2_Pa", "P3_Pa"};
  if (observable == "teq") return {"T2_star_K"};
  throw ValidationError("unknown observable '" + observable + "'");
}

void SweepSpec::validate() const {
  if (std::find(parameters().begin(), parameters().end(), parameter) == parameters().end())
    throw ValidationError("unknown sweep parameter '" + parameter + "'");
  sweep_columns(observable);
  grid.validate();
  if (dimensionful_positive(parameter) && !(std::min(grid.lo, grid.hi) > 0.0))
    throw ValidationError("sweep bounds for " + parameter + " must be positive");
}

ThreeSlabSystem with_parameter(const ThreeSlabSystem& sys, const std::string& p, double v) {
  ThreeSlabSystem s = sys;
  auto& g = s.geometry;
  const double D = g.d12 + g.delta2 + g.d23;
  if (p == "d12_m") g.d12 = v;
  else if (p == "d23_m") g.d23 = v;
  else if (p == "delta1_m") g.delta1 = v;
  else if (p == "delta2_m") g.delta2 = v;
  else if (p == "delta3_m") g.delta3 = v;
  else if (p == "T1_K") s.T1 = v;
  else if (p == "T2_K") s.T2 = v;
  else if (p == "T3_K") s.T3 = v;
  else if (p == "Te_K") s.Te = v;
  else if (p == "z2_m") {
    const double half = 0.5 * (D - g.delta2);
    g.d12 = half + v;
    g.d23 = half - v;
  } else if (p == "d12_fixed_D_m") {
    g.d12 = v;
    g.d23 = D - g.delta2 - v;
  } else {
    throw ValidationError("unknown sweep parameter '" + p + "'");
  }
  s.validate();
  return s;
}

SweepTable sweep(const SweepSpec& spec, const ThreeSlabSystem& sys, const Accuracy& acc) {
  spec.validate();
  SweepTable t;
  t.parameter = spec.parameter;
  t.columns = sweep_columns(spec.observable);
  const auto xs = spec.grid.values();
  const Accuracy inner = acc.serial();
  auto row = [&](std::size_t i) {
    SweepRow r;
    r.parameter = xs[i];
    try {
      const auto s = with_parameter(sys, spec.parameter, xs[i]);
      if (spec.observable == "pressure_eq") {
        r.values = {pressure_eq_slab1(s, s.T1, inner), pressure_eq_slab2(s, s.T2, inner),
                    pressure_eq_slab3(s, s.T3, inner)};
      } else if (spec.observable == "pressure_additive") {
        const double p = pressure_eq_slab1(s, s.T1, inner);
        const double pa = additive_pressure_slab1(s, s.T1, inner);
        r.values = {p, pa, p != 0.0 ? (pa - p) / p : std::numeric_limits<double>::quiet_NaN()};
      } else if (spec.observable == "observables") {
        const auto o = observables(s, inner);
        r.values = {o.H[0], o.H[1], o.H[2], o.P[0], o.P[1], o.P[2]};
      } else {
        r.values = {equilibrium_temperature(s, {}, 1e-3, inner).T2};
      }
    } catch (const std::exception& e) {
      r.values.clear();
      r.error = e.what();
    }
    return r;
  };
  t.rows = numerics::parallel_map<SweepRow>(xs.size(), row, acc.quad.workers);
  return t;
}

}  // namespace tricav::analysis
