#include "tricav/slab_observables.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <valarray>

#include "tricav/constants.hpp"

namespace tricav {

using constants::c;
using constants::hbar;
using constants::k_B;
using constants::pi;
using numerics::QuadratureSpec;

namespace {

constexpr std::array<Polarization, 2> kPols{Polarization::TE, Polarization::TM};

double norm2(cplx z) { return std::norm(z); }

}  // namespace

// ---------------------------------------------------------------------------

void ThreeSlabSystem::validate() const {
  geometry.validate();
  for (double T : {T1, T2, T3, Te})
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("temperatures must be > 0 K");
}

ThreeSlabSystem ThreeSlabSystem::mirrored() const {
  ThreeSlabSystem s = *this;
  std::swap(s.materials[0], s.materials[2]);
  s.geometry = geometry.mirrored();
  std::swap(s.T1, s.T3);
  return s;
}

double ThreeSlabSystem::temperature(int body) const {
  switch (body) {
    case 1: return T1;
    case 2: return T2;
    case 3: return T3;
    default: throw ValidationError("body index must be 1, 2 or 3");
  }
}

double ThreeSlabSystem::max_temperature() const { return std::max({T1, T2, T3, Te}); }

double thermal::n(double omega, double T) {
  const double x = hbar * omega / (k_B * T);
  if (x > 700.0) return 0.0;
  return 1.0 / std::expm1(x);
}

double thermal::N(double omega, double T) { return hbar * omega * (0.5 + n(omega, T)); }

double frequency_cutoff(double T_max, const QuadratureSpec& quad) {
  return quad.frequency_cutoff_factor * k_B * T_max / hbar;
}

// ---------------------------------------------------------------------------
// Equilibrium pressures on the imaginary axis.
//
// Rotating the real-frequency integral gives, per Matsubara
// frequency, (k_B T / pi) int_{xi/c}^inf dkappa kappa^2 sum_p X/(1 - X) with
// X the round-trip factor of the gap; the n = 0 term carries weight 1/2. The
// real-frequency expression is positive for attraction of slab 1; values here
// are returned with the opposite sign.

namespace {

struct ImagAxisSlabs {
  RealSlabAmplitudes a1, a2, a3;
};

ImagAxisSlabs slabs_at(const ThreeSlabSystem& s, double xi, double k, Polarization p, const std::array<double, 3>& eps) {
  auto one = [&](int i, double delta) -> RealSlabAmplitudes {
    const Material& m = s.materials[i];
    if (m.is_black() || m.is_vacuum() || delta == 0.0) return slab_amplitudes_imag_axis(xi, k, p, m, delta);
    return slab_amplitudes_imag_axis(xi, k, p, eps[i], delta);
  };
  return {one(0, s.geometry.delta1), one(1, s.geometry.delta2), one(2, s.geometry.delta3)};
}

std::array<double, 3> eps_at(const ThreeSlabSystem& s, double xi) {
  std::array<double, 3> e{1.0, 1.0, 1.0};
  for (int i = 0; i < 3; ++i)
    if (!s.materials[i].is_black() && !s.materials[i].is_vacuum()) e[i] = s.materials[i].eps_imag_axis(xi);
  return e;
}

// int_{xi/c}^inf dkappa kappa^2 g(k, kappa)
template <class G>
double kappa_integral(G&& g, double xi, double decay_length, const Accuracy& acc) {
  const double a = xi / c;
  auto f = [&](double kappa) {
    const double k = std::sqrt(std::max(0.0, (kappa - a) * (kappa + a)));
    return kappa * kappa * g(k, kappa);
  };
  return numerics::integrate_semi_infinite(f, a, 1.0 / decay_length, acc.serial().quad).value;
}

// (k_B T / pi) sum'_n h(xi_n)
template <class H>
double matsubara_pressure(H&& h, double T, const Accuracy& acc) {
  if (!(T > 0.0)) throw ValidationError("temperature must be > 0 K");
  auto term = [&](int n) { return h(numerics::matsubara_frequency(n, T)); };
  const double s = numerics::matsubara_sum(term, 0.5 * h(0.0), T, acc.sum);
  return k_B * T / pi * s;
}

double x_over_1mx(double x) { return x / (1.0 - x); }

}  // namespace

double pressure_eq_slab1(const ThreeSlabSystem& sys, double T, const Accuracy& acc) {
  sys.validate();
  if (sys.materials[0].is_vacuum()) return 0.0;
  const auto& g = sys.geometry;
  auto h = [&](double xi) {
    const auto eps = eps_at(sys, xi);
    auto integrand = [&](double k, double kappa) {
      double sum = 0.0;
      for (Polarization p : kPols) {
        const auto sl = slabs_at(sys, xi, k, p, eps);
        const double e12 = std::exp(-2.0 * kappa * g.d12);
        const double e23 = std::exp(-2.0 * kappa * g.d23);
        const auto cs = compose_with_phases<double>(sl.a1, sl.a2, sl.a3, e12, e23);
        sum += x_over_1mx(sl.a1.rho * cs.rho23_minus * e12);
      }
      return sum;
    };
    return kappa_integral(integrand, xi, g.d12, acc);
  };
  return -matsubara_pressure(h, T, acc);
}

double pressure_eq_slab2(const ThreeSlabSystem& sys, double T, const Accuracy& acc) {
  sys.validate();
  if (sys.materials[1].is_vacuum()) return 0.0;
  const auto& g = sys.geometry;
  auto h = [&](double xi) {
    const auto eps = eps_at(sys, xi);
    auto side = [&](bool right) {
      return [&, right](double k, double kappa) {
        double sum = 0.0;
        for (Polarization p : kPols) {
          const auto sl = slabs_at(sys, xi, k, p, eps);
          const double e12 = std::exp(-2.0 * kappa * g.d12);
          const double e23 = std::exp(-2.0 * kappa * g.d23);
          const auto cs = compose_with_phases<double>(sl.a1, sl.a2, sl.a3, e12, e23);
          sum += right ? x_over_1mx(sl.a3.rho * cs.rho12_plus * e23) : x_over_1mx(sl.a1.rho * cs.rho23_minus * e12);
        }
        return sum;
      };
    };
    return kappa_integral(side(true), xi, g.d23, acc) - kappa_integral(side(false), xi, g.d12, acc);
  };
  return -matsubara_pressure(h, T, acc);
}

double pressure_eq_slab3(const ThreeSlabSystem& sys, double T, const Accuracy& acc) {
  return -pressure_eq_slab1(sys.mirrored(), T, acc);
}

double pressure_two_body(const Material& a, const Material& b, double delta_a, double delta_b, double gap, double T,
                         const Accuracy& acc) {
  if (!(gap > 0.0)) throw ValidationError("gap must be > 0");
  if (!(delta_a >= 0.0 && delta_b >= 0.0)) throw ValidationError("thicknesses must be >= 0");
  if (a.is_vacuum() || b.is_vacuum()) return 0.0;
  auto h = [&](double xi) {
    const double ea = (a.is_black() ? 1.0 : a.eps_imag_axis(xi));
    const double eb = (b.is_black() ? 1.0 : b.eps_imag_axis(xi));
    auto integrand = [&](double k, double kappa) {
      double sum = 0.0;
      for (Polarization p : kPols) {
        const double ra = a.is_black() ? 0.0 : slab_amplitudes_imag_axis(xi, k, p, ea, delta_a).rho;
        const double rb = b.is_black() ? 0.0 : slab_amplitudes_imag_axis(xi, k, p, eb, delta_b).rho;
        sum += x_over_1mx(ra * rb * std::exp(-2.0 * kappa * gap));
      }
      return sum;
    };
    return kappa_integral(integrand, xi, gap, acc);
  };
  return -matsubara_pressure(h, T, acc);
}

double additive_pressure_slab1(const ThreeSlabSystem& sys, double T, const Accuracy& acc) {
  sys.validate();
  const auto& g = sys.geometry;
  const auto& m = sys.materials;
  return pressure_two_body(m[0], m[1], g.delta1, g.delta2, g.d12, T, acc) +
         pressure_two_body(m[0], m[2], g.delta1, g.delta3, g.d12 + g.delta2 + g.d23, T, acc);
}

// ---------------------------------------------------------------------------
// Real-frequency form of the slab-1 pressure.

namespace {

struct RealAxisSlabs {
  SlabAmplitudes a1, a2, a3;
};

RealAxisSlabs slabs_at(const ThreeSlabSystem& s, const Mode& m, const std::array<cplx, 3>& eps) {
  auto one = [&](int i, double delta) -> SlabAmplitudes {
    const Material& mat = s.materials[i];
    if (mat.is_black() || mat.is_vacuum() || delta == 0.0) return slab_amplitudes(m, mat, delta);
    return slab_amplitudes(m, eps[i], delta);
  };
  return {one(0, s.geometry.delta1), one(1, s.geometry.delta2), one(2, s.geometry.delta3)};
}

std::array<cplx, 3> eps_at_real(const ThreeSlabSystem& s, double omega) {
  std::array<cplx, 3> e{1.0, 1.0, 1.0};
  for (int i = 0; i < 3; ++i)
    if (!s.materials[i].is_black() && !s.materials[i].is_vacuum()) e[i] = s.materials[i].eps_real_axis(omega);
  return e;
}

std::vector<double> resonances_below(const ThreeSlabSystem& s, double omega_max) {
  std::vector<double> out;
  for (const auto& m : s.materials)
    for (double w : m.resonances())
      if (w > 0.0 && w < omega_max) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

// Weakly absorbing slabs make the k-kernels small differences of O(1)
// terms (1 - |r|^2 - |t|^2 and the like). Inner integrals are therefore
// allowed an absolute error at the roundoff level of the uncancelled
// integral, k0^(m+1) or d^-(m+1), instead of chasing noise.
constexpr double kRoundoff = 256.0 * std::numeric_limits<double>::epsilon();

// Breakpoints in q where a slab switches from frustrated to evanescent
// inside the medium.
std::vector<double> q_breaks(const std::array<cplx, 3>& eps, double k0) {
  std::vector<double> out;
  for (const auto& e : eps)
    if (e.real() > 1.0) out.push_back(k0 * std::sqrt(e.real() - 1.0));
  std::sort(out.begin(), out.end());
  return out;
}

// Re sum_p int_0^inf dk k kz F, F = X/(1-X), X = rho1 rho23- exp(2i kz d12).
double real_axis_j(const ThreeSlabSystem& sys, double omega, const Accuracy& acc) {
  const auto& g = sys.geometry;
  const auto eps = eps_at_real(sys, omega);
  const double k0 = omega / c;
  const cplx i{0.0, 1.0};
  auto F = [&](const Mode& m) {
    const auto sl = slabs_at(sys, m, eps);
    const auto cs = compose(m, sl.a1, sl.a2, sl.a3, g);
    const cplx x = sl.a1.rho * cs.rho23_minus * std::exp(2.0 * i * m.kz() * g.d12);
    return x / (1.0 - x);
  };
  const QuadratureSpec q = acc.serial().quad;
  QuadratureSpec q_pw = q, q_ew = q;
  q_pw.abs_tol = std::max(q.abs_tol, kRoundoff * k0 * k0 * k0);
  q_ew.abs_tol = std::max(q.abs_tol, kRoundoff / (g.d12 * g.d12 * g.d12));
  double total = 0.0;
  for (Polarization p : kPols) {
    auto prop = [&](double kz) { return kz * kz * F(Mode::from_kz(omega, kz, p)).real(); };
    total += numerics::integrate_finite(prop, 0.0, k0, q_pw).value;
    auto evan = [&](double qq) { return -qq * qq * F(Mode::from_q(omega, qq, p)).imag(); };
    const auto qb = q_breaks(eps, k0);
    total += numerics::integrate_semi_infinite(evan, 0.0, 1.0 / g.d12, q_ew, qb).value;
  }
  return total;
}

}  // namespace

RealFrequencyResult pressure_eq_slab1_realfreq(const ThreeSlabSystem& sys, double T, const Accuracy& acc) {
  sys.validate();
  if (!(T > 0.0)) throw ValidationError("temperature must be > 0 K");
  RealFrequencyResult r;
  if (sys.materials[0].is_vacuum()) return r;
  const QuadratureSpec outer = acc.quad;

  // The zero-point half of N(w,T) leaves an integrand that oscillates
  // without decaying. Every oscillating term carries at least the gap round
  // trip tau = 2 d12 / c, so it is cut off with the smooth window
  // erfc((w - W0)/width)/2, W0 = S/tau, width = W0/5: the error from the
  // window is of order exp(-(S/5)^2/4) and from w = 0 of order erfc(5).
  // Two window positions are integrated together and their spread is
  // reported as the achieved tolerance.
  const double tau = 2.0 * sys.geometry.d12 / c;
  const std::array<double, 2> centre{50.0 / tau, 65.0 / tau};
  auto window = [&](int i, double w) { return 0.5 * std::erfc((w - centre[i]) / (0.2 * centre[i])); };
  const double w_end = std::max(centre[1] * (1.0 + 7.0 * 0.2), frequency_cutoff(T, outer));

  auto f = [&](double w) {
    const double j = real_axis_j(sys, w, acc);
    return std::valarray<double>{j * thermal::n(w, T), 0.5 * j * window(0, w), 0.5 * j * window(1, w)};
  };
  const auto br = resonances_below(sys, w_end);
  const auto v = numerics::integrate_finite<std::valarray<double>>(f, 0.0, w_end, outer, br).value;

  // Force-oriented expression, then the sign flip to the convention used here.
  const double pref = -hbar / (pi * pi);
  r.thermal_part = -pref * v[0];
  r.vacuum_part = -pref * v[2];
  r.value = r.thermal_part + r.vacuum_part;
  const double other = -pref * (v[0] + v[1]);
  r.achieved_rel_tol = std::abs(r.value - other) / std::max(std::abs(r.value), 1e-300);
  return r;
}

// ---------------------------------------------------------------------------
// Non-equilibrium kernels.

namespace {

struct ModeKernels {
  std::array<double, 3> pw{};  // first source, second source, environment
  std::array<cplx, 2> ew{};    // first source, second source
};

// Slab 1, sources (2, 3). sigma = (-1)^m.
ModeKernels kernels_body1(const SlabAmplitudes& a1, const SlabAmplitudes& a2, const SlabAmplitudes& a3,
                          const CavityScalars& cs, double sigma, bool propagative, double q, const CavityGeometry& g) {
  ModeKernels k;
  const cplx r1 = a1.rho, r3 = a3.rho;
  const double U = norm2(cs.u1_23);
  if (propagative) {
    const double f1 = 1.0 + sigma * norm2(r1) - norm2(a1.tau_out);
    const double r23 = norm2(cs.rho23_minus);
    k.pw[0] = U * f1 * (1.0 - r23 - norm2(a2.tau_out * cs.u23) * (1.0 - norm2(r3)));
    k.pw[1] = norm2(cs.u1_23 * cs.u23 * a2.tau_out) * f1 * (1.0 - norm2(r3) - norm2(a3.tau_out));
    k.pw[2] = norm2(cs.u1_23 * cs.tau23) * f1 + sigma * (norm2(cs.u1_23 * a1.tau_out) - 1.0) * (1.0 + sigma * r23) +
              r23 - norm2(cs.rho123_minus);
  } else {
    const cplx g1 = std::conj(r1) + sigma * r1;
    const double e12 = std::exp(-2.0 * q * g.d12);
    const double e23 = std::exp(-2.0 * q * g.d23);
    k.ew[0] = U * g1 * (cs.rho23_minus.imag() - norm2(a2.tau_out * cs.u23) * r3.imag() * e23) * e12;
    k.ew[1] = norm2(cs.u1_23 * cs.u23 * a2.tau_out) * g1 * r3.imag() * e12 * e23;
  }
  return k;
}

// Slab 2, sources (1, 3).
ModeKernels kernels_body2(const SlabAmplitudes& a1, const SlabAmplitudes& a2, const SlabAmplitudes& a3,
                          const CavityScalars& cs, double sigma, bool propagative, double q, const CavityGeometry& g) {
  ModeKernels k;
  const cplx r1 = a1.rho, r3 = a3.rho;
  if (propagative) {
    const double r23 = norm2(cs.rho23_minus);
    const double r12 = norm2(cs.rho12_plus);
    const double via2_13 = norm2(a2.tau_out * cs.u12 * cs.u12_3);
    const double via2_31 = norm2(a2.tau_out * cs.u23 * cs.u1_23);
    k.pw[0] = sigma * (1.0 - norm2(r1) - norm2(a1.tau_out)) *
              (via2_13 * (1.0 + sigma * norm2(r3)) - norm2(cs.u1_23) * (1.0 + sigma * r23));
    k.pw[1] = (1.0 - norm2(r3) - norm2(a3.tau_out)) *
              (-via2_31 * (1.0 + sigma * norm2(r1)) + norm2(cs.u12_3) * (1.0 + sigma * r12));
    k.pw[2] = norm2(cs.u12_3 * a3.tau_out) * (1.0 + sigma * r12) - norm2(cs.u1_23 * cs.tau23) * (1.0 + sigma * norm2(r1)) -
              sigma * norm2(cs.u1_23 * a1.tau_out) * (1.0 + sigma * r23) +
              sigma * norm2(cs.u12_3 * cs.tau12) * (1.0 + sigma * norm2(r3));
  } else {
    const double e12 = std::exp(-2.0 * q * g.d12);
    const double e23 = std::exp(-2.0 * q * g.d23);
    const cplx g23 = std::conj(cs.rho23_minus) + sigma * cs.rho23_minus;
    const cplx g3 = std::conj(r3) + sigma * r3;
    const cplx g12 = std::conj(cs.rho12_plus) + sigma * cs.rho12_plus;
    const cplx g1 = std::conj(r1) + sigma * r1;
    k.ew[0] = sigma * r1.imag() *
              (-norm2(cs.u1_23) * g23 + norm2(a2.tau_out * cs.u12 * cs.u12_3) * g3 * e23) * e12;
    k.ew[1] = r3.imag() * (norm2(cs.u12_3) * g12 - norm2(a2.tau_out * cs.u23 * cs.u1_23) * g1 * e12) * e23;
  }
  return k;
}

std::array<int, 2> sources_of(int body) {
  switch (body) {
    case 1: return {2, 3};
    case 2: return {1, 3};
    case 3: return {2, 1};
    default: throw ValidationError("body index must be 1, 2 or 3");
  }
}

// -(-1)^m hbar/4pi^2, with pressures reported in the opposite orientation
// to the force.
double channel_prefactor(int m) {
  const double sigma = (m % 2 == 0) ? 1.0 : -1.0;
  const double orientation = (m == 2) ? -1.0 : 1.0;
  return -sigma * hbar / (4.0 * pi * pi) * orientation;
}

void check_m(int m) {
  if (m != 1 && m != 2) throw ValidationError("m must be 1 (heat) or 2 (pressure)");
}

// Evanescent channel must come out real after the 2 i^m factor.
double real_part_checked(cplx z, int channel) {
  if (std::abs(z.imag()) > 1e-10 * std::max(std::abs(z.real()), 1e-300) && std::abs(z.imag()) > 1e-300)
    throw std::logic_error("evanescent channel " + std::to_string(channel) + " has a spurious imaginary part");
  return z.real();
}

}  // namespace

std::array<double, 5> neq_spectral_weights(const ThreeSlabSystem& sys, int body, int m, double omega,
                                           const Accuracy& acc) {
  check_m(m);
  if (body == 3) return neq_spectral_weights(sys.mirrored(), 1, m, omega, acc);
  if (body != 1 && body != 2) throw ValidationError("body index must be 1, 2 or 3");
  if (!(omega > 0.0)) throw ValidationError("omega must be > 0");
  const auto& g = sys.geometry;
  const double sigma = (m % 2 == 0) ? 1.0 : -1.0;
  const auto eps = eps_at_real(sys, omega);
  const double k0 = omega / c;
  const QuadratureSpec q = acc.serial().quad;
  QuadratureSpec q_pw = q, q_ew = q;
  q_pw.abs_tol = std::max(q.abs_tol, kRoundoff * std::pow(k0, m + 1));
  const double decay = std::min(g.d12, body == 1 ? g.d12 + g.d23 : g.d23);
  q_ew.abs_tol = std::max(q.abs_tol, kRoundoff * std::pow(1.0 / decay, m + 1));

  auto kernels = [&](const Mode& md, double qq) {
    const auto sl = slabs_at(sys, md, eps);
    const auto cs = compose(md, sl.a1, sl.a2, sl.a3, g);
    return body == 1 ? kernels_body1(sl.a1, sl.a2, sl.a3, cs, sigma, md.propagative(), qq, g)
                     : kernels_body2(sl.a1, sl.a2, sl.a3, cs, sigma, md.propagative(), qq, g);
  };

  std::valarray<double> pw(0.0, 3);
  std::valarray<double> ew(0.0, 4);
  for (Polarization p : kPols) {
    auto prop = [&](double kz) {
      const auto k = kernels(Mode::from_kz(omega, kz, p), 0.0);
      const double w = std::pow(kz, m);
      return std::valarray<double>{w * k.pw[0], w * k.pw[1], w * k.pw[2]};
    };
    pw += numerics::integrate_finite<std::valarray<double>>(prop, 0.0, k0, q_pw).value;
    auto evan = [&](double qq) {
      const auto k = kernels(Mode::from_q(omega, qq, p), qq);
      const double w = std::pow(qq, m);
      return std::valarray<double>{w * k.ew[0].real(), w * k.ew[0].imag(), w * k.ew[1].real(), w * k.ew[1].imag()};
    };
    ew += numerics::integrate_semi_infinite<std::valarray<double>>(evan, 0.0, 1.0 / decay, q_ew, q_breaks(eps, k0)).value;
  }
  const cplx im = (m == 1) ? cplx(0.0, 1.0) : cplx(-1.0, 0.0);
  std::array<double, 5> out{};
  out[0] = pw[0];
  out[1] = real_part_checked(2.0 * im * cplx(ew[0], ew[1]), 1);
  out[2] = pw[1];
  out[3] = real_part_checked(2.0 * im * cplx(ew[2], ew[3]), 3);
  out[4] = pw[2];

  // A channel is exactly zero when its source body is absent, and all are
  // zero when the body itself is absent.
  const auto src = sources_of(body);
  const int self = body - 1;
  if (sys.materials[self].is_vacuum()) return {};
  if (sys.materials[src[0] - 1].is_vacuum()) out[0] = out[1] = 0.0;
  if (sys.materials[src[1] - 1].is_vacuum()) out[2] = out[3] = 0.0;
  return out;
}

double NeqDecomposition::total() const {
  double s = 0.0;
  for (double v : channels) s += v;
  return prefactor * s;
}

std::string NeqDecomposition::channel_name(int ch) const {
  switch (ch) {
    case 0: return "body" + std::to_string(sources[0]) + "_pw";
    case 1: return "body" + std::to_string(sources[0]) + "_ew";
    case 2: return "body" + std::to_string(sources[1]) + "_pw";
    case 3: return "body" + std::to_string(sources[1]) + "_ew";
    case 4: return "env_pw";
    default: throw ValidationError("channel index out of range");
  }
}

NeqSpectrum::NeqSpectrum(const ThreeSlabSystem& sys_in, int body, int m, std::vector<double> probes,
                         const Accuracy& acc)
    : body_(body), m_(m) {
  check_m(m);
  sys_in.validate();
  sources_ = sources_of(body);
  prefactor_ = channel_prefactor(m);
  ThreeSlabSystem sys = sys_in;
  int eval_body = body;
  if (body == 3) {
    // Delta_{3,m}(sys) = -(-1)^m Delta_{1,m}(mirror)
    sys = sys_in.mirrored();
    eval_body = 1;
    prefactor_ *= (m == 2) ? -1.0 : 1.0;
  }
  if (probes.empty()) throw ValidationError("NeqSpectrum needs at least one probe temperature");
  for (double T : probes)
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("probe temperatures must be > 0 K");
  std::sort(probes.begin(), probes.end());
  probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
  t_max_ = probes.back();

  const std::size_t J = probes.size();
  const double w_max = frequency_cutoff(t_max_, acc.quad);
  // Inner k-integrals ten times tighter so their noise does not drive the
  // outer refinement.
  Accuracy inner = acc.serial();
  inner.quad.rel_tol *= 0.1;
  auto f = [&](double w) {
    const auto W = neq_spectral_weights(sys, eval_body, m, w, inner);
    const double wp = std::pow(w, 2 - m);
    std::valarray<double> v(5 * J);
    for (std::size_t j = 0; j < J; ++j) {
      const double nw = wp * thermal::n(w, probes[j]);
      for (int ch = 0; ch < 5; ++ch) v[ch * J + j] = nw * W[ch];
    }
    return v;
  };
  const auto br = resonances_below(sys, w_max);
  auto [est, rule] = numerics::integrate_recorded<std::valarray<double>>(f, 0.0, w_max, acc.quad, br);
  (void)est;
  nodes_ = std::move(rule.nodes);
  rule_weights_ = std::move(rule.weights);
  kernel_.resize(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    const double nw = std::pow(nodes_[i], 2 - m) * thermal::n(nodes_[i], t_max_);
    for (int ch = 0; ch < 5; ++ch) kernel_[i][ch] = nw > 0.0 ? rule.values[i][ch * J + (J - 1)] / nw : 0.0;
  }
}

double NeqSpectrum::channel_integral(int ch, double T) const {
  if (ch < 0 || ch > 4) throw ValidationError("channel index out of range");
  if (!(T > 0.0)) throw ValidationError("temperature must be > 0 K");
  if (T > t_max_ * (1.0 + 1e-12))
    throw ValidationError("NeqSpectrum: temperature above the largest probe temperature");
  double s = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    s += rule_weights_[i] * std::pow(nodes_[i], 2 - m_) * thermal::n(nodes_[i], T) * kernel_[i][ch];
  return s;
}

NeqDecomposition NeqSpectrum::decompose(double T_body, double T_first, double T_second, double T_env) const {
  NeqDecomposition d;
  d.body = body_;
  d.m = m_;
  d.sources = sources_;
  d.prefactor = prefactor_;
  const std::array<double, 5> src{T_first, T_first, T_second, T_second, T_env};
  for (int ch = 0; ch < 5; ++ch) d.channels[ch] = channel_integral(ch, src[ch]) - channel_integral(ch, T_body);
  return d;
}

NeqDecomposition delta_slab(const ThreeSlabSystem& sys, int body, int m, const Accuracy& acc) {
  const auto src = sources_of(body);
  const double Tb = sys.temperature(body);
  const double Ta = sys.temperature(src[0]);
  const double Tc = sys.temperature(src[1]);
  NeqSpectrum spec(sys, body, m, {Tb, Ta, Tc, sys.Te}, acc);
  return spec.decompose(Tb, Ta, Tc, sys.Te);
}

SlabObservables observables(const ThreeSlabSystem& sys, const Accuracy& acc) {
  sys.validate();
  SlabObservables o;
  o.P_eq[0] = pressure_eq_slab1(sys, sys.T1, acc);
  o.P_eq[1] = pressure_eq_slab2(sys, sys.T2, acc);
  o.P_eq[2] = pressure_eq_slab3(sys, sys.T3, acc);
  for (int b = 1; b <= 3; ++b) {
    o.heat[b - 1] = delta_slab(sys, b, 1, acc);
    o.force[b - 1] = delta_slab(sys, b, 2, acc);
    o.H[b - 1] = o.heat[b - 1].total();
    o.P[b - 1] = o.P_eq[b - 1] + o.force[b - 1].total();
  }
  return o;
}

std::array<double, 5> spectral_density(const ThreeSlabSystem& sys, int body, int m, double omega,
                                       const Accuracy& acc) {
  sys.validate();
  check_m(m);
  const auto W = neq_spectral_weights(sys, body, m, omega, acc);
  double pref = channel_prefactor(m);
  if (body == 3 && m == 2) pref = -pref;
  const auto src = sources_of(body);
  const double Tb = sys.temperature(body);
  const std::array<double, 5> Ts{sys.temperature(src[0]), sys.temperature(src[0]), sys.temperature(src[1]),
                                 sys.temperature(src[1]), sys.Te};
  std::array<double, 5> out{};
  const double wp = std::pow(omega, 2 - m);
  for (int ch = 0; ch < 5; ++ch) out[ch] = pref * wp * (thermal::n(omega, Ts[ch]) - thermal::n(omega, Tb)) * W[ch];
  return out;
}

}  // namespace tricav
