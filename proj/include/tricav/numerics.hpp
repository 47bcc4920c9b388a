#pragma once

// Generic numerical kernels: adaptive Gauss-Kronrod quadrature on finite and
// semi-infinite intervals, Matsubara summation, bisection, log-linear
// interpolation and the Kramers-Kronig transform to the imaginary axis.
//
// Every kernel has a serial path (workers == 1) and an OpenMP path. The
// parallel path only distributes integrand/term evaluations; accumulation
// order is fixed, so both paths return bit-identical results.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <exception>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <valarray>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace tricav {

// Raised when an input violates a documented precondition.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace tricav

namespace tricav::numerics {

struct QuadratureSpec {
  double rel_tol = 1e-8;
  double abs_tol = 0.0;
  int max_subdivisions = 4000;
  // Frequency integrals stop at omega_max = factor * k_B * T_max / hbar.
  double frequency_cutoff_factor = 40.0;
  // Number of OpenMP workers used to evaluate integrand nodes; 1 is the
  // serial reference path.
  int workers = 1;

  void validate() const;
};

struct SummationSpec {
  double rel_tol = 1e-8;
  int max_terms = 200000;
  int workers = 1;

  void validate() const;
};

template <class T>
struct Estimate {
  T value;
  double error = 0.0;
  int evaluations = 0;
};

// Final quadrature rule of an adaptive run: integral ~= sum w_i f(x_i).
template <class T>
struct RecordedRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::vector<T> values;
};

class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_estimate, double achieved)
      : std::runtime_error(what), best_estimate_(best_estimate), achieved_(achieved) {}
  double best_estimate() const noexcept { return best_estimate_; }
  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double best_estimate_;
  double achieved_;
};

class BracketError : public std::runtime_error {
 public:
  BracketError(const std::string& what, double f_lo, double f_hi)
      : std::runtime_error(what), f_lo_(f_lo), f_hi_(f_hi) {}
  double f_lo() const noexcept { return f_lo_; }
  double f_hi() const noexcept { return f_hi_; }

 private:
  double f_lo_;
  double f_hi_;
};

// Size of an integrand value, used for error control.
inline double magnitude(double x) { return std::abs(x); }
inline double magnitude(const std::complex<double>& x) { return std::abs(x); }
inline double magnitude(const std::valarray<double>& x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

// Vector integrand whose size for error control is its largest component.
// Callers scale the components to comparable magnitude so each one gets
// roughly the requested relative accuracy.
struct MaxNormVector {
  std::valarray<double> v;

  MaxNormVector() = default;
  explicit MaxNormVector(std::valarray<double> x) : v(std::move(x)) {}
  MaxNormVector& operator+=(const MaxNormVector& o) {
    if (v.size() == 0) v.resize(o.v.size(), 0.0);
    v += o.v;
    return *this;
  }
  friend MaxNormVector operator+(MaxNormVector a, const MaxNormVector& b) { return a += b; }
  friend MaxNormVector operator-(const MaxNormVector& a, const MaxNormVector& b) {
    return MaxNormVector(std::valarray<double>(a.v - b.v));
  }
  friend MaxNormVector operator*(const MaxNormVector& a, double s) { return MaxNormVector(std::valarray<double>(a.v * s)); }
};

inline double magnitude(const MaxNormVector& x) { return x.v.size() ? std::abs(x.v).max() : 0.0; }

// out[i] = f(i) for i < n, statically scheduled over `workers` threads.
// The first exception (by index) is rethrown after the loop.
template <class T, class F>
std::vector<T> parallel_map(std::size_t n, F&& f, int workers) {
  std::vector<T> out(n);
  const std::ptrdiff_t count = static_cast<std::ptrdiff_t>(n);
#ifdef _OPENMP
  if (workers > 1 && count > 1) {
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for num_threads(workers) schedule(static)
    for (std::ptrdiff_t i = 0; i < count; ++i) {
      try {
        out[i] = f(static_cast<std::size_t>(i));
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
    return out;
  }
#else
  (void)workers;
#endif
  for (std::ptrdiff_t i = 0; i < count; ++i) out[i] = f(static_cast<std::size_t>(i));
  return out;
}

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline constexpr int kNodes = 15;

// Node abscissae of the 15-point rule on [a, b], ordered left to right.
inline std::array<double, kNodes> kronrod_nodes(double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, kNodes> x{};
  for (int j = 0; j < 7; ++j) {
    x[j] = center - half * kXgk[j];
    x[kNodes - 1 - j] = center + half * kXgk[j];
  }
  x[7] = center;
  return x;
}

inline std::array<double, kNodes> kronrod_weights(double a, double b) {
  const double half = 0.5 * (b - a);
  std::array<double, kNodes> w{};
  for (int j = 0; j < 7; ++j) {
    w[j] = half * kWgk[j];
    w[kNodes - 1 - j] = half * kWgk[j];
  }
  w[7] = half * kWgk[7];
  return w;
}

// Evaluates f at every abscissa. Exceptions thrown by f are rethrown after
// the parallel region, lowest index first.
template <class T, class F>
std::vector<T> evaluate_nodes(F& f, const std::vector<double>& xs, int workers) {
  return parallel_map<T>(xs.size(), [&](std::size_t i) { return f(xs[i]); }, workers);
}

template <class T>
struct Panel {
  double a = 0.0;
  double b = 0.0;
  T value{};
  double error = 0.0;
  bool frozen = false;
  std::array<T, kNodes> samples{};
};

// Applies the Gauss-Kronrod pair to pre-evaluated node values.
template <class T>
void apply_rule(Panel<T>& p) {
  const double half = 0.5 * (p.b - p.a);
  const auto& fv = p.samples;
  T resk = fv[7] * kWgk[7];
  T resg = fv[7] * kWg[3];
  double resabs = kWgk[7] * magnitude(fv[7]);
  for (int j = 0; j < 7; ++j) {
    const T pair = fv[j] + fv[kNodes - 1 - j];
    resk += pair * kWgk[j];
    resabs += kWgk[j] * (magnitude(fv[j]) + magnitude(fv[kNodes - 1 - j]));
    if (j % 2 == 1) resg += pair * kWg[j / 2];
  }
  const T mean = resk * 0.5;
  double resasc = kWgk[7] * magnitude(fv[7] - mean);
  for (int j = 0; j < 7; ++j)
    resasc += kWgk[j] * (magnitude(fv[j] - mean) + magnitude(fv[kNodes - 1 - j] - mean));

  p.value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = magnitude(resk - resg) * std::abs(half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  const double scale = std::max(std::abs(p.a), std::abs(p.b));
  p.frozen = (p.b - p.a) <= 64.0 * eps * scale;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(50.0 * eps * resabs, err);
  } else {
    // Values near underflow carry no usable relative precision.
    err = 0.0;
    p.frozen = true;
  }
  p.error = err;
}

template <class T, class F>
std::vector<Panel<T>> build_panels(F& f, const std::vector<std::pair<double, double>>& spans, int workers) {
  std::vector<double> xs;
  xs.reserve(spans.size() * kNodes);
  for (const auto& [a, b] : spans) {
    const auto nodes = kronrod_nodes(a, b);
    xs.insert(xs.end(), nodes.begin(), nodes.end());
  }
  const auto values = evaluate_nodes<T>(f, xs, workers);
  std::vector<Panel<T>> panels(spans.size());
  for (std::size_t i = 0; i < spans.size(); ++i) {
    panels[i].a = spans[i].first;
    panels[i].b = spans[i].second;
    for (int j = 0; j < kNodes; ++j) panels[i].samples[j] = values[i * kNodes + j];
    apply_rule(panels[i]);
  }
  return panels;
}

template <class T>
T sum_in_order(const std::vector<Panel<T>>& panels, double& err) {
  T total = panels.front().value;
  err = panels.front().error;
  for (std::size_t i = 1; i < panels.size(); ++i) {
    total += panels[i].value;
    err += panels[i].error;
  }
  return total;
}

// Global adaptive integration: the panel with the largest error estimate is
// halved until the summed error meets the tolerance. Ties go to the leftmost
// panel.
template <class T, class F>
std::vector<Panel<T>> adaptive(F& f, std::vector<double> breaks, const QuadratureSpec& spec,
                               Estimate<T>& result) {
  spec.validate();
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  if (breaks.size() < 2) throw ValidationError("integration interval needs a < b");
  std::vector<std::pair<double, double>> spans;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) spans.emplace_back(breaks[i], breaks[i + 1]);

  auto panels = build_panels<T>(f, spans, spec.workers);
  int evaluations = static_cast<int>(panels.size()) * kNodes;
  double err = 0.0;
  T total = sum_in_order(panels, err);

  while (true) {
    const double target = std::max(spec.abs_tol, spec.rel_tol * magnitude(total));
    if (err <= target) break;
    std::ptrdiff_t worst = -1;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (panels[i].frozen) continue;
      if (worst < 0 || panels[i].error > panels[worst].error) worst = static_cast<std::ptrdiff_t>(i);
    }
    if (worst < 0) break;  // roundoff-limited everywhere
    if (static_cast<int>(panels.size()) >= spec.max_subdivisions) {
      result.value = total;
      throw ConvergenceError("adaptive quadrature did not converge within max_subdivisions",
                             magnitude(total), err / std::max(magnitude(total), 1e-300));
    }
    const double a = panels[worst].a;
    const double b = panels[worst].b;
    const double mid = 0.5 * (a + b);
    auto halves = build_panels<T>(f, {{a, mid}, {mid, b}}, spec.workers);
    evaluations += 2 * kNodes;
    panels[worst] = std::move(halves[0]);
    panels.insert(panels.begin() + worst + 1, std::move(halves[1]));
    total = sum_in_order(panels, err);
  }
  result.value = total;
  result.error = err;
  result.evaluations = evaluations;
  return panels;
}

}  // namespace detail

// Integrates f over [a, b]; the interval is pre-split at `breakpoints`
// (values outside (a, b) are ignored).
template <class T = double, class F>
Estimate<T> integrate_finite(F&& f, double a, double b, const QuadratureSpec& spec,
                             std::span<const double> breakpoints = {}) {
  if (!(a < b)) throw ValidationError("integrate_finite requires a < b");
  std::vector<double> breaks{a, b};
  for (double x : breakpoints)
    if (x > a && x < b) breaks.push_back(x);
  Estimate<T> result{};
  detail::adaptive<T>(f, std::move(breaks), spec, result);
  return result;
}

// As integrate_finite, also returning the final Kronrod rule so the same
// nodes can be reused with a different smooth weight.
template <class T = double, class F>
std::pair<Estimate<T>, RecordedRule<T>> integrate_recorded(F&& f, double a, double b,
                                                           const QuadratureSpec& spec,
                                                           std::span<const double> breakpoints = {}) {
  if (!(a < b)) throw ValidationError("integrate_recorded requires a < b");
  std::vector<double> breaks{a, b};
  for (double x : breakpoints)
    if (x > a && x < b) breaks.push_back(x);
  Estimate<T> result{};
  auto panels = detail::adaptive<T>(f, std::move(breaks), spec, result);
  RecordedRule<T> rule;
  rule.nodes.reserve(panels.size() * detail::kNodes);
  rule.weights.reserve(panels.size() * detail::kNodes);
  rule.values.reserve(panels.size() * detail::kNodes);
  for (auto& p : panels) {
    const auto x = detail::kronrod_nodes(p.a, p.b);
    const auto w = detail::kronrod_weights(p.a, p.b);
    for (int j = 0; j < detail::kNodes; ++j) {
      rule.nodes.push_back(x[j]);
      rule.weights.push_back(w[j]);
      rule.values.push_back(std::move(p.samples[j]));
    }
  }
  return {std::move(result), std::move(rule)};
}

// Integrates f over [a, inf) through x = a - L ln(1 - u), u in [0, 1), with
// the half-line pre-split at `breakpoints` (mapped to u). The map is exact
// for exp(-(x - a)/L); pass L at least as large as the slowest decay length
// of f.
template <class T = double, class F>
Estimate<T> integrate_semi_infinite(F&& f, double a, double decay_scale, const QuadratureSpec& spec,
                                    std::span<const double> breakpoints) {
  if (!(decay_scale > 0.0)) throw ValidationError("integrate_semi_infinite requires decay_scale > 0");
  // Nodes that round to u = 1 are pulled back by one ulp.
  constexpr double u_max = 1.0 - std::numeric_limits<double>::epsilon() / 2.0;
  auto mapped = [&](double u) -> T {
    u = std::min(u, u_max);
    const double x = a - decay_scale * std::log1p(-u);
    T v = f(x);
    return v * (decay_scale / (1.0 - u));
  };
  std::vector<double> ub;
  for (double x : breakpoints) {
    const double u = -std::expm1(-(x - a) / decay_scale);
    if (x > a && u < 1.0 - 1e-12) ub.push_back(u);
  }
  return integrate_finite<T>(mapped, 0.0, 1.0, spec, ub);
}

template <class T = double, class F>
Estimate<T> integrate_semi_infinite(F&& f, double a, double decay_scale, const QuadratureSpec& spec) {
  if (!(decay_scale > 0.0)) throw ValidationError("integrate_semi_infinite requires decay_scale > 0");
  return integrate_semi_infinite<T>(std::forward<F>(f), a, decay_scale, spec, std::span<const double>{});
}

// n-th bosonic Matsubara frequency 2 pi k_B T n / hbar, in rad/s.
double matsubara_frequency(int n, double temperature);

// first_term + sum_{n>=1} term(n). Stops once five consecutive terms are
// each below rel_tol of the partial sum and the geometric tail estimate is
// below rel_tol as well.
template <class T, class Term>
T matsubara_sum(Term&& term, const T& first_term, double temperature, const SummationSpec& spec) {
  spec.validate();
  if (!(temperature > 0.0)) throw ValidationError("matsubara_sum requires T > 0");
  T sum = first_term;
  double previous = std::numeric_limits<double>::infinity();
  int quiet_run = 0;
  const int block = spec.workers > 1 ? 4 * spec.workers : 1;
  int n = 1;
  while (n <= spec.max_terms) {
    const int count = std::min(block, spec.max_terms - n + 1);
    std::vector<double> indices(count);
    for (int i = 0; i < count; ++i) indices[i] = n + i;
    auto eval = [&](double idx) -> T { return term(static_cast<int>(idx)); };
    const auto terms = detail::evaluate_nodes<T>(eval, indices, spec.workers);
    for (int i = 0; i < count; ++i) {
      sum += terms[i];
      const double size = magnitude(terms[i]);
      const double scale = spec.rel_tol * magnitude(sum);
      quiet_run = (size <= scale) ? quiet_run + 1 : 0;
      double tail = 0.0;
      if (size > 0.0) {
        const double ratio = size / previous;
        tail = ratio < 1.0 ? size * ratio / (1.0 - ratio) : std::numeric_limits<double>::infinity();
      }
      previous = size;
      if (quiet_run >= 5 && tail <= scale) return sum;
    }
    n += count;
  }
  throw ConvergenceError("Matsubara sum exceeded max_terms", magnitude(sum), 1.0);
}

// Bisection on a sign-changing function; lo and hi may be given in either
// order.
template <class F>
double bisect(F&& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw ValidationError("bisect requires tol > 0");
  if (lo > hi) std::swap(lo, hi);
  double f_lo = f(lo);
  const double f_hi = f(hi);
  if (f_lo == 0.0) return lo;
  if (f_hi == 0.0) return hi;
  if (!(std::signbit(f_lo) != std::signbit(f_hi)) || std::isnan(f_lo) || std::isnan(f_hi))
    throw BracketError("bisect: no sign change between the endpoints", f_lo, f_hi);
  for (int it = 0; it < 400 && (hi - lo) > tol; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    const double f_mid = f(mid);
    if (f_mid == 0.0) return mid;
    if (std::signbit(f_mid) == std::signbit(f_lo)) {
      lo = mid;
      f_lo = f_mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

// Piecewise-linear interpolation in ln(x); monotone between samples.
class LogLinearInterpolator {
 public:
  LogLinearInterpolator() = default;
  LogLinearInterpolator(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double front() const { return x_.front(); }
  double back() const { return x_.back(); }
  bool empty() const { return x_.empty(); }

 private:
  std::vector<double> x_;
  std::vector<double> log_x_;
  std::vector<double> y_;
};

// eps(i xi) = 1 + (2/pi) int_0^inf w Im eps(w) / (w^2 + xi^2) dw for a
// sampled Im eps. Between samples Im eps is log-linear, below the first
// sample it falls linearly to zero and beyond the last it decays as w^-3.
double kramers_kronig_imag_axis(std::span<const double> omega, std::span<const double> eps_im, double xi);

}  // namespace tricav::numerics
