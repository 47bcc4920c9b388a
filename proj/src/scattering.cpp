#include "tricav/scattering.hpp"

#include <cmath>
#include <limits>

#include "tricav/constants.hpp"

namespace tricav {

namespace {

constexpr double kFloor = 1e-30;
// exp(-x) below this is treated as zero (thick-slab limit)
constexpr double kUnderflowExponent = 700.0;

void check_mode(const Mode& m) {
  if (!(m.omega > 0.0) || !std::isfinite(m.omega)) throw ValidationError("mode: omega must be > 0");
  if (!(m.k >= 0.0) || !std::isfinite(m.k)) throw ValidationError("mode: k must be >= 0");
}

// Fresnel data in units of w/c: a = kz c/w, b = kz_in c/w.
struct Interface {
  cplx a, b, r, ttbar;
};

Interface interface(const Mode& m, cplx eps) {
  Interface f;
  f.a = m.kz_unit;
  f.b = decaying_sqrt(eps - 1.0 + f.a * f.a);
  const cplx s = f.a + f.b;
  if (m.pol == Polarization::TE) {
    if (std::abs(s) < kFloor) throw SingularModeError("fresnel: TE denominator vanishes");
    f.r = (1.0 - eps) / (s * s);  // (a - b)/(a + b) without the cancellation
    f.ttbar = 4.0 * f.a * f.b / (s * s);
  } else {
    const cplx d = eps * f.a + f.b;
    if (std::abs(d) < kFloor) throw SingularModeError("fresnel: TM denominator vanishes");
    f.r = (eps * f.a - f.b) / d;
    f.ttbar = 4.0 * eps * f.a * f.b / (d * d);
  }
  return f;
}

}  // namespace

cplx decaying_sqrt(cplx z) {
  cplx s = std::sqrt(z);
  if (s.imag() < 0.0 || (s.imag() == 0.0 && s.real() < 0.0)) s = -s;
  return s;
}

Mode::Mode(double omega_, double k_, Polarization p) : omega(omega_), k(k_), pol(p) {
  const double x = k * constants::c / omega;
  kz_unit = decaying_sqrt(cplx((1.0 - x) * (1.0 + x), 0.0));
}

Mode Mode::from_kz(double omega, double kz, Polarization p) {
  const double k0 = omega / constants::c;
  if (!(kz >= 0.0 && kz <= k0)) throw ValidationError("propagative mode needs 0 <= kz <= w/c");
  Mode m;
  m.omega = omega;
  m.pol = p;
  const double a = kz / k0;
  m.k = k0 * std::sqrt((1.0 - a) * (1.0 + a));
  m.kz_unit = a;
  return m;
}

Mode Mode::from_q(double omega, double q, Polarization p) {
  if (!(q >= 0.0)) throw ValidationError("evanescent mode needs q >= 0");
  const double k0 = omega / constants::c;
  Mode m;
  m.omega = omega;
  m.pol = p;
  m.k = std::hypot(k0, q);
  m.kz_unit = cplx(0.0, q / k0);
  return m;
}

cplx Mode::kz() const { return kz_unit * (omega / constants::c); }

FresnelCoefficients fresnel(const Mode& m, cplx eps) {
  check_mode(m);
  const cplx a = m.kz_unit;
  const cplx b = decaying_sqrt(eps - 1.0 + a * a);
  FresnelCoefficients f;
  if (m.pol == Polarization::TE) {
    const cplx s = a + b;
    if (std::abs(s) < kFloor) throw SingularModeError("fresnel: TE denominator vanishes");
    f.r = (1.0 - eps) / (s * s);
    f.t = 2.0 * a / s;
    f.tbar = 2.0 * b / s;
  } else {
    const cplx d = eps * a + b;
    if (std::abs(d) < kFloor) throw SingularModeError("fresnel: TM denominator vanishes");
    const cplx n = std::sqrt(eps);
    f.r = (eps * a - b) / d;
    f.t = 2.0 * n * a / d;
    f.tbar = 2.0 * n * b / d;
  }
  return f;
}

SlabAmplitudes slab_amplitudes(const Mode& m, cplx eps, double delta) {
  check_mode(m);
  if (!(delta >= 0.0)) throw ValidationError("slab thickness must be >= 0");
  const double phi = m.omega / constants::c * delta;
  if (eps == cplx{1.0, 0.0} || delta == 0.0) return {0.0, 1.0, std::exp(cplx(0.0, 1.0) * m.kz() * delta)};

  const Interface f = interface(m, eps);
  if (std::isinf(delta)) return {f.r, 0.0, 0.0};
  const cplx i{0.0, 1.0};
  const cplx arg = 2.0 * i * f.b * phi;
  if (-arg.real() > kUnderflowExponent) return {f.r, 0.0, 0.0};
  const cplx e = std::exp(arg);
  const cplx den = 1.0 - f.r * f.r * e;
  if (std::abs(den) < kFloor) throw SingularModeError("slab: 1 - r^2 exp(2i kz delta) vanishes (guided mode)");
  SlabAmplitudes s;
  s.rho = f.r * (1.0 - e) / den;
  s.tau = f.ttbar * std::exp(i * (f.b - f.a) * phi) / den;
  s.tau_out = f.ttbar * std::exp(i * f.b * phi) / den;
  return s;
}

SlabAmplitudes slab_amplitudes(const Mode& m, const Material& mat, double delta) {
  check_mode(m);
  if (mat.is_black()) return {0.0, 0.0, 0.0};
  if (mat.is_vacuum() || delta == 0.0) return {0.0, 1.0, std::exp(cplx(0.0, 1.0) * m.kz() * delta)};
  return slab_amplitudes(m, mat.eps_real_axis(m.omega), delta);
}

RealSlabAmplitudes slab_amplitudes_imag_axis(double xi, double k, Polarization pol, double eps, double delta) {
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw ValidationError("imaginary-axis amplitudes need xi >= 0");
  if (!(k >= 0.0) || !std::isfinite(k)) throw ValidationError("imaginary-axis amplitudes need k >= 0");
  if (!(delta >= 0.0)) throw ValidationError("slab thickness must be >= 0");
  if (!(eps >= 1.0)) throw ValidationError("imaginary-axis permittivity must be >= 1");

  if (xi == 0.0) {
    const double e_out = std::exp(-k * delta);
    if (pol == Polarization::TE || eps == 1.0 || delta == 0.0) return {0.0, 1.0, e_out};
    const double r = std::isinf(eps) ? 1.0 : (eps - 1.0) / (eps + 1.0);
    if (std::isinf(delta)) return {r, 0.0, 0.0};
    const double e = e_out * e_out;
    if (e == 1.0) return r == 1.0 ? RealSlabAmplitudes{1.0, 0.0, 0.0} : RealSlabAmplitudes{0.0, 1.0, 1.0};
    const double den = 1.0 - r * r * e;
    const double tau = (1.0 - r * r) / den;
    return {r * (1.0 - e) / den, tau, tau * e_out};
  }

  const double x = k * constants::c / xi;
  const double phi = xi / constants::c * delta;
  const double a = std::sqrt(1.0 + x * x);
  if (eps == 1.0 || delta == 0.0) return {0.0, 1.0, std::exp(-a * phi)};
  if (std::isinf(eps)) throw ValidationError("infinite permittivity at xi > 0");
  const double b = std::sqrt(eps + x * x);
  double r, ttbar;
  if (pol == Polarization::TE) {
    const double s = a + b;
    r = (1.0 - eps) / (s * s);
    ttbar = 4.0 * a * b / (s * s);
  } else {
    const double d = eps * a + b;
    r = (eps * a - b) / d;
    ttbar = 4.0 * eps * a * b / (d * d);
  }
  if (std::isinf(delta) || 2.0 * b * phi > kUnderflowExponent) return {r, 0.0, 0.0};
  const double e = std::exp(-2.0 * b * phi);
  const double den = 1.0 - r * r * e;
  return {r * (1.0 - e) / den, ttbar * std::exp(-(b - a) * phi) / den, ttbar * std::exp(-b * phi) / den};
}

RealSlabAmplitudes slab_amplitudes_imag_axis(double xi, double k, Polarization pol, const Material& mat,
                                             double delta) {
  if (mat.is_black()) return {0.0, 0.0, 0.0};
  if (mat.is_vacuum() || delta == 0.0) {
    const double kappa = std::sqrt(xi * xi / (constants::c * constants::c) + k * k);
    return {0.0, 1.0, std::exp(-kappa * delta)};
  }
  return slab_amplitudes_imag_axis(xi, k, pol, mat.eps_imag_axis(xi), delta);
}

cplx polarization_overlap(const Mode& m) {
  check_mode(m);
  if (m.pol == Polarization::TE) return 1.0;
  const cplx a = m.kz_unit;
  return 1.0 - 2.0 * a * a;
}

}  // namespace tricav
