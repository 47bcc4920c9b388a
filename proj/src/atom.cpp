#include "tricav/atom.hpp"

#include <algorithm>
#include <cmath>
#include <valarray>

#include "tricav/constants.hpp"

namespace tricav {

using constants::c;
using constants::epsilon_0;
using constants::hbar;
using constants::k_B;
using constants::pi;

// ---------------------------------------------------------------------------

AtomModel AtomModel::static_alpha(double alpha0) {
  if (!(alpha0 > 0.0)) throw ValidationError("alpha0 must be > 0");
  AtomModel a;
  a.kind_ = Kind::Static;
  a.alpha0_ = alpha0;
  return a;
}

AtomModel AtomModel::single_lorentz(double alpha0, double omega0, double gamma0) {
  if (!(alpha0 > 0.0) || !(omega0 > 0.0) || !(gamma0 >= 0.0))
    throw ValidationError("Lorentz atom needs alpha0 > 0, omega0 > 0, gamma0 >= 0");
  AtomModel a;
  a.kind_ = Kind::Lorentz;
  a.alpha0_ = alpha0;
  a.omega0_ = omega0;
  a.gamma0_ = gamma0;
  return a;
}

AtomModel AtomModel::scaled(const AtomModel& base, double factor) {
  if (!(factor > 0.0) || !std::isfinite(factor)) throw ValidationError("scale factor must be > 0");
  AtomModel a;
  a.kind_ = Kind::Scaled;
  a.factor_ = factor;
  a.base_ = std::make_shared<const AtomModel>(base);
  return a;
}

AtomModel AtomModel::rubidium() { return single_lorentz(5.26e-39, 2.42e15, 3.8e7); }

cplx AtomModel::alpha(double omega) const {
  if (!(omega > 0.0)) throw ValidationError("alpha: omega must be > 0");
  switch (kind_) {
    case Kind::Static: return alpha0_;
    case Kind::Lorentz:
      return alpha0_ * omega0_ * omega0_ / cplx(omega0_ * omega0_ - omega * omega, -gamma0_ * omega);
    case Kind::Scaled: return factor_ * base_->alpha(omega);
  }
  return 0.0;
}

double AtomModel::alpha_imag_axis(double xi) const {
  if (!(xi >= 0.0)) throw ValidationError("alpha: xi must be >= 0");
  switch (kind_) {
    case Kind::Static: return alpha0_;
    case Kind::Lorentz: return alpha0_ * omega0_ * omega0_ / (omega0_ * omega0_ + xi * xi + gamma0_ * xi);
    case Kind::Scaled: return factor_ * base_->alpha_imag_axis(xi);
  }
  return 0.0;
}

double AtomModel::resonance() const {
  switch (kind_) {
    case Kind::Static: return 0.0;
    case Kind::Lorentz: return omega0_;
    case Kind::Scaled: return base_->resonance();
  }
  return 0.0;
}

void AtomCavity::validate() const {
  if (!(D > 0.0) || !std::isfinite(D)) throw ValidationError("cavity width D must be > 0");
  if (!(std::abs(z) < 0.5 * D)) throw ValidationError("atom position must satisfy |z| < D/2");
  if (!(delta1 >= 0.0 && delta3 >= 0.0)) throw ValidationError("slab thicknesses must be >= 0");
  for (double T : {T1, T3, Te, atom_temperature()})
    if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("temperatures must be > 0 K");
}

AtomCavity AtomCavity::mirrored() const {
  AtomCavity m = *this;
  std::swap(m.material1, m.material3);
  std::swap(m.delta1, m.delta3);
  std::swap(m.T1, m.T3);
  m.z = -z;
  return m;
}

// ---------------------------------------------------------------------------

namespace {

double eps_or_one(const Material& m, double xi) {
  return (m.is_black() || m.is_vacuum()) ? 1.0 : m.eps_imag_axis(xi);
}

RealSlabAmplitudes imag_amps(const Material& m, double xi, double k, Polarization p, double eps, double delta) {
  if (m.is_black() || m.is_vacuum() || delta == 0.0) return slab_amplitudes_imag_axis(xi, k, p, m, delta);
  return slab_amplitudes_imag_axis(xi, k, p, eps, delta);
}

}  // namespace

double atom_force_eq(const AtomCavity& cav, double T, const Accuracy& acc) {
  cav.validate();
  if (!(T > 0.0)) throw ValidationError("temperature must be > 0 K");
  const double D = cav.D, z = cav.z;
  const double scale = 1.0 / (D - 2.0 * std::abs(z));
  const auto quad = acc.serial().quad;

  // n = 0: TM only, static reflection.
  const double e1s = eps_or_one(cav.material1, 0.0);
  const double e3s = eps_or_one(cav.material3, 0.0);
  auto static_integrand = [&](double k) {
    const double r1 = imag_amps(cav.material1, 0.0, k, Polarization::TM, e1s, cav.delta1).rho;
    const double r3 = imag_amps(cav.material3, 0.0, k, Polarization::TM, e3s, cav.delta3).rho;
    const double u = 1.0 / (1.0 - r1 * r3 * std::exp(-2.0 * k * D));
    return k * k * k * u * (r3 * std::exp(-k * (D - 2.0 * z)) - r1 * std::exp(-k * (D + 2.0 * z)));
  };
  const double s0 = numerics::integrate_semi_infinite(static_integrand, 0.0, scale, quad).value;
  const double first = cav.atom.static_value() * s0;

  auto term = [&](int n) {
    const double xi = numerics::matsubara_frequency(n, T);
    const double e1 = eps_or_one(cav.material1, xi);
    const double e3 = eps_or_one(cav.material3, xi);
    // k dk = kappa dkappa; integrating in kappa keeps the decay a pure
    // exponential in the integration variable.
    const double a = xi / c;
    auto integrand = [&](double kappa) {
      const double k = std::sqrt(std::max(0.0, (kappa - a) * (kappa + a)));
      const double w1 = std::exp(-kappa * (D + 2.0 * z));  // e^{-kappa D} e^{-2 kappa z}
      const double w3 = std::exp(-kappa * (D - 2.0 * z));
      const double round = std::exp(-2.0 * kappa * D);
      double s = 0.0;
      {
        const double r1 = imag_amps(cav.material1, xi, k, Polarization::TE, e1, cav.delta1).rho;
        const double r3 = imag_amps(cav.material3, xi, k, Polarization::TE, e3, cav.delta3).rho;
        s += (r1 * w1 - r3 * w3) / (1.0 - r1 * r3 * round);
      }
      {
        const double r1 = imag_amps(cav.material1, xi, k, Polarization::TM, e1, cav.delta1).rho;
        const double r3 = imag_amps(cav.material3, xi, k, Polarization::TM, e3, cav.delta3).rho;
        const double weight = 2.0 * c * c * k * k / (xi * xi) + 1.0;
        s -= weight * (r1 * w1 - r3 * w3) / (1.0 - r1 * r3 * round);
      }
      return kappa * s;
    };
    const double sn = numerics::integrate_semi_infinite(integrand, a, scale, quad).value;
    return xi * xi * cav.atom.alpha_imag_axis(xi) / (c * c) * sn;
  };
  const double total = numerics::matsubara_sum(term, first, T, acc.sum);
  return k_B * T / (2.0 * pi * epsilon_0) * total;
}

// ---------------------------------------------------------------------------

namespace {

// Distances from each grid point to the two walls. The exponentials below
// are needed for every z at every (omega, k) node, so on a uniform grid they
// come from a recurrence re-anchored every few steps.
struct ZGrid {
  std::vector<double> l1, l3;  // to slab 1 and slab 3
  double D = 0.0;
  double h = 0.0;  // spacing if uniform, else 0
  double l_min = 0.0;

  ZGrid(double D_, const std::vector<double>& z) : D(D_) {
    l_min = 0.5 * D;
    for (double x : z) {
      l1.push_back(0.5 * D + x);
      l3.push_back(0.5 * D - x);
      l_min = std::min({l_min, l1.back(), l3.back()});
    }
    if (z.size() > 2) {
      const double step = (z.back() - z.front()) / static_cast<double>(z.size() - 1);
      bool uniform = step > 0.0;
      for (std::size_t j = 0; j < z.size() && uniform; ++j)
        uniform = std::abs(z[j] - (z.front() + step * static_cast<double>(j))) <= 1e-9 * D;
      if (uniform) h = step;
    }
  }
  std::size_t size() const { return l1.size(); }

  // out[j] = exp(i phi l1[j]).
  void phases(double phi, std::vector<cplx>& out) const {
    const std::size_t n = size();
    out.resize(n);
    if (h == 0.0) {
      for (std::size_t j = 0; j < n; ++j) out[j] = std::polar(1.0, phi * l1[j]);
      return;
    }
    const cplx step = std::polar(1.0, phi * h);
    for (std::size_t j = 0; j < n; ++j) out[j] = (j % 16 == 0) ? std::polar(1.0, phi * l1[j]) : out[j - 1] * step;
  }

  // e1[j] = exp(-a l1[j]), e3[j] = exp(-a l3[j]) for a >= 0.
  void decays(double a, std::vector<double>& e1, std::vector<double>& e3) const {
    const std::size_t n = size();
    e1.resize(n);
    e3.resize(n);
    if (h == 0.0) {
      for (std::size_t j = 0; j < n; ++j) {
        e1[j] = std::exp(-a * l1[j]);
        e3[j] = std::exp(-a * l3[j]);
      }
      return;
    }
    const double r = std::exp(-a * h);
    for (std::size_t j = 0; j < n; ++j) e1[j] = (j % 16 == 0) ? std::exp(-a * l1[j]) : e1[j - 1] * r;
    for (std::size_t j = n; j-- > 0;) e3[j] = ((n - 1 - j) % 16 == 0) ? std::exp(-a * l3[j]) : e3[j + 1] * r;
  }
};

// Size of the k-integrands for the atom at l1, l3: the propagative sector
// scales like k0^2 and the evanescent one like 1/l^2.
double k_scale(double k0, double l1, double l3) { return 0.5 * k0 * k0 + 0.25 / (l1 * l1) + 0.25 / (l3 * l3); }

// Spectral weights B1, B3, Be at one frequency for every grid point
// (components 3j, 3j+1, 3j+2), both polarizations summed.
std::valarray<double> atom_neq_weights(const AtomCavity& cav, const ZGrid& g, double omega,
                                       const numerics::QuadratureSpec& quad) {
  const std::size_t n = g.size();
  const double D = cav.D;
  const double k0 = omega / c;
  const cplx alpha = cav.atom.alpha(omega);
  const double re_a = alpha.real(), im_a = alpha.imag();
  const cplx eps1 = (cav.material1.is_black() || cav.material1.is_vacuum()) ? 1.0 : cav.material1.eps_real_axis(omega);
  const cplx eps3 = (cav.material3.is_black() || cav.material3.is_vacuum()) ? 1.0 : cav.material3.eps_real_axis(omega);

  std::valarray<double> inv_scale(n);
  for (std::size_t j = 0; j < n; ++j) inv_scale[j] = 1.0 / k_scale(k0, g.l1[j], g.l3[j]);

  auto amps = [&](const Mode& m, int which) {
    const Material& mat = which == 1 ? cav.material1 : cav.material3;
    const double delta = which == 1 ? cav.delta1 : cav.delta3;
    if (mat.is_black() || mat.is_vacuum() || delta == 0.0) return slab_amplitudes(m, mat, delta);
    return slab_amplitudes(m, which == 1 ? eps1 : eps3, delta);
  };

  std::valarray<double> total(0.0, 3 * n);
  for (Polarization p : {Polarization::TE, Polarization::TM}) {
    auto prop = [&](double kz) {
      const Mode m = Mode::from_kz(omega, kz, p);
      const auto a1 = amps(m, 1), a3 = amps(m, 3);
      const double o = polarization_overlap(m).real();
      const cplx round = std::polar(1.0, 2.0 * kz * D);
      const double u = std::norm(1.0 / (1.0 - a1.rho * a3.rho * round));
      const double R1 = std::norm(a1.rho), R3 = std::norm(a3.rho);
      const double T1 = std::norm(a1.tau_out), T3 = std::norm(a3.tau_out);
      const double e1 = 1.0 - R1 - T1, e3 = 1.0 - R3 - T3;
      thread_local std::vector<cplx> ph;
      g.phases(2.0 * kz, ph);
      std::valarray<double> v(3 * n);
      for (std::size_t j = 0; j < n; ++j) {
        // exp(2i kz l3) = exp(2i kz D) / exp(2i kz l1)
        const double ph1 = (a1.rho * ph[j]).imag();
        const double ph3 = (a3.rho * round * std::conj(ph[j])).imag();
        const double w = kz * u * inv_scale[j];
        v[3 * j] = -w * e1 * (2.0 * ph3 * o * re_a + (1.0 - R3) * im_a);
        v[3 * j + 1] = -w * e3 * (2.0 * ph1 * o * re_a + (1.0 - R1) * im_a);
        v[3 * j + 2] = w * (2.0 * (T3 * ph1 - T1 * ph3) * o * re_a - (T1 * (1.0 - R3) - T3 * (1.0 - R1)) * im_a);
      }
      return numerics::MaxNormVector(std::move(v));
    };
    total += numerics::integrate_finite<numerics::MaxNormVector>(prop, 0.0, k0, quad).value.v;

    auto evan = [&](double q) {
      const Mode m = Mode::from_q(omega, q, p);
      const auto a1 = amps(m, 1), a3 = amps(m, 3);
      const double o = polarization_overlap(m).real();
      const double eD = std::exp(-2.0 * q * D);
      const double u = std::norm(1.0 / (1.0 - a1.rho * a3.rho * eD));
      const double R1 = std::norm(a1.rho), R3 = std::norm(a3.rho);
      const double i1 = a1.rho.imag(), i3 = a3.rho.imag();
      thread_local std::vector<double> d1, d3;
      g.decays(2.0 * q, d1, d3);
      std::valarray<double> v(0.0, 3 * n);
      for (std::size_t j = 0; j < n; ++j) {
        const double w = 2.0 * q * u * inv_scale[j];
        v[3 * j] = w * i1 * ((1.0 - d3[j] * d3[j] * R3) * o * re_a * d1[j] - 2.0 * i3 * im_a * eD);
        v[3 * j + 1] = w * i3 * ((1.0 - d1[j] * d1[j] * R1) * o * re_a * d3[j] - 2.0 * i1 * im_a * eD);
      }
      return numerics::MaxNormVector(std::move(v));
    };
    std::vector<double> qb;
    for (const cplx& e : {eps1, eps3})
      if (e.real() > 1.0) qb.push_back(k0 * std::sqrt(e.real() - 1.0));
    std::sort(qb.begin(), qb.end());
    total += numerics::integrate_semi_infinite<numerics::MaxNormVector>(evan, 0.0, 1.0 / g.l_min, quad, qb).value.v;
  }
  for (std::size_t j = 0; j < n; ++j)
    for (int ch = 0; ch < 3; ++ch) total[3 * j + ch] /= inv_scale[j];
  return total;
}

}  // namespace

std::vector<AtomNeqDecomposition> atom_force_neq_profile(const AtomCavity& cav, const std::vector<double>& z_grid,
                                                         const Accuracy& acc) {
  cav.validate();
  for (double z : z_grid) cav.at(z).validate();
  const std::size_t n = z_grid.size();
  std::vector<AtomNeqDecomposition> out(n);
  const double T2 = cav.atom_temperature();
  if (n == 0 || (cav.T1 == T2 && cav.T3 == T2 && cav.Te == T2)) return out;

  const double t_max = std::max({cav.T1, cav.T3, cav.Te, T2});
  const double w_max = frequency_cutoff(t_max, acc.quad);
  std::vector<double> br;
  for (const Material* m : {&cav.material1, &cav.material3})
    for (double w : m->resonances())
      if (w > 0.0 && w < w_max) br.push_back(w);
  if (const double w0 = cav.atom.resonance(); w0 > 0.0 && w0 < w_max) br.push_back(w0);
  std::sort(br.begin(), br.end());

  const ZGrid g(cav.D, z_grid);
  // Inner integrals are kept an order tighter so their error does not show
  // up as noise in the frequency integrand.
  numerics::QuadratureSpec inner = acc.serial().quad;
  inner.rel_tol = 0.1 * acc.quad.rel_tol;

  auto occupation = [&](double w) {
    const double n2 = thermal::n(w, T2);
    return std::array<double, 3>{thermal::n(w, cav.T1) - n2, -(thermal::n(w, cav.T3) - n2), thermal::n(w, cav.Te) - n2};
  };
  // Per-z weights for the frequency integral, from the same size model as
  // the k-integrals.
  const double c1 = numerics::integrate_finite(
      [&](double w) {
        const auto d = occupation(w);
        return w * w * (std::abs(d[0]) + std::abs(d[1]) + std::abs(d[2])) * 0.5 * w * w / (c * c);
      },
      0.0, w_max, {.rel_tol = 1e-3}).value;
  const double c2 = numerics::integrate_finite(
      [&](double w) {
        const auto d = occupation(w);
        return w * w * (std::abs(d[0]) + std::abs(d[1]) + std::abs(d[2]));
      },
      0.0, w_max, {.rel_tol = 1e-3}).value;
  std::valarray<double> weight(n);
  for (std::size_t j = 0; j < n; ++j)
    weight[j] = 1.0 / (c1 + c2 * (k_scale(0.0, g.l1[j], g.l3[j])));

  auto f = [&](double w) {
    auto B = atom_neq_weights(cav, g, w, inner);
    const auto d = occupation(w);
    for (std::size_t j = 0; j < n; ++j)
      for (int ch = 0; ch < 3; ++ch) B[3 * j + ch] *= w * w * d[ch] * weight[j];
    return numerics::MaxNormVector(std::move(B));
  };
  const auto r = numerics::integrate_finite<numerics::MaxNormVector>(f, 0.0, w_max, acc.quad, br).value.v;
  const double pref = -hbar / (4.0 * pi * pi * epsilon_0 * c * c);
  for (std::size_t j = 0; j < n; ++j) {
    out[j].body1 = pref * r[3 * j] / weight[j];
    out[j].body3 = pref * r[3 * j + 1] / weight[j];
    out[j].env = pref * r[3 * j + 2] / weight[j];
  }
  return out;
}

AtomNeqDecomposition atom_force_neq(const AtomCavity& cav, const Accuracy& acc) {
  return atom_force_neq_profile(cav, {cav.z}, acc).front();
}

AtomForce atom_force(const AtomCavity& cav, const Accuracy& acc) {
  AtomForce f;
  f.eq = atom_force_eq(cav, cav.atom_temperature(), acc);
  f.neq = atom_force_neq(cav, acc);
  f.total = f.eq + f.neq.total();
  return f;
}

double atom_t2_sensitivity(const AtomCavity& cav, double dT, const Accuracy& acc) {
  const double T2 = cav.atom_temperature();
  if (!(dT > 0.0) || !(dT < T2)) throw ValidationError("dT must be in (0, T2)");
  AtomCavity hi = cav, lo = cav;
  hi.T2 = T2 + dT;
  lo.T2 = T2 - dT;
  return (atom_force(hi, acc).total - atom_force(lo, acc).total) / (2.0 * dT);
}

// ---------------------------------------------------------------------------

std::vector<double> cavity_grid(double D, int points) {
  if (!(D > 0.0)) throw ValidationError("D must be > 0");
  if (points < 3) throw ValidationError("grid needs at least 3 points");
  std::vector<double> z(points);
  // Indexed from the centre so the grid is exactly symmetric.
  const double h = D / (points + 1);
  const double mid = 0.5 * (points - 1);
  for (int i = 0; i < points; ++i) z[i] = (i - mid) * h;
  return z;
}

PotentialProfile potential_from_forces(std::vector<double> z, std::vector<double> F) {
  if (z.size() != F.size() || z.size() < 2) throw ValidationError("profile needs matching z and F of length >= 2");
  for (std::size_t i = 1; i < z.size(); ++i)
    if (!(z[i] > z[i - 1])) throw ValidationError("z grid must increase strictly");
  const auto it = std::find(z.begin(), z.end(), 0.0);
  if (it == z.end()) throw ValidationError("z grid must contain 0");
  const std::size_t i0 = static_cast<std::size_t>(it - z.begin());
  PotentialProfile p;
  p.U.assign(z.size(), 0.0);
  for (std::size_t i = i0 + 1; i < z.size(); ++i) p.U[i] = p.U[i - 1] - 0.5 * (F[i] + F[i - 1]) * (z[i] - z[i - 1]);
  for (std::size_t i = i0; i-- > 0;) p.U[i] = p.U[i + 1] + 0.5 * (F[i] + F[i + 1]) * (z[i + 1] - z[i]);
  for (std::size_t i = 2; i < F.size(); ++i) {
    const bool a = std::signbit(F[i - 2]) != std::signbit(F[i - 1]) && F[i - 2] != 0.0 && F[i - 1] != 0.0;
    const bool b = std::signbit(F[i - 1]) != std::signbit(F[i]) && F[i - 1] != 0.0 && F[i] != 0.0;
    if (a && b)
      p.warnings.push_back("force changes sign in two adjacent cells near z = " + std::to_string(z[i - 1]) +
                           " m; grid may be too coarse");
  }
  p.z = std::move(z);
  p.F = std::move(F);
  return p;
}

PotentialProfile atom_potential(const AtomCavity& cav, const std::vector<double>& z_grid, const Accuracy& acc) {
  cav.validate();
  const Accuracy inner = acc.serial();
  const double T2 = cav.atom_temperature();
  auto eq = [&](double z) { return atom_force_eq(cav.at(z), T2, inner); };
  auto F_eq = numerics::detail::evaluate_nodes<double>(eq, z_grid, acc.quad.workers);
  auto neq = atom_force_neq_profile(cav, z_grid, acc);
  std::vector<double> F(F_eq.size());
  for (std::size_t j = 0; j < F.size(); ++j) F[j] = F_eq[j] + neq[j].total();
  auto p = potential_from_forces(z_grid, std::move(F));
  p.F_eq = std::move(F_eq);
  p.F_neq = std::move(neq);
  return p;
}

ExtremaReport classify_extrema(const PotentialProfile& p) {
  ExtremaReport rep;
  const auto& z = p.z;
  const auto& F = p.F;
  std::ptrdiff_t last = -1;  // last sample with nonzero force
  for (std::size_t i = 0; i < F.size(); ++i) {
    if (F[i] == 0.0) continue;
    if (last >= 0 && std::signbit(F[last]) != std::signbit(F[i])) {
      // Root between samples last and i: linear estimate refined with the
      // cubic through one extra neighbour on each side (a symmetric stencil,
      // so mirrored profiles give mirrored extrema).
      const std::size_t a = static_cast<std::size_t>(last), b = i;
      double zr = z[a] - F[a] * (z[b] - z[a]) / (F[b] - F[a]);
      double Ur = 0.5 * (p.U[a] - 0.5 * F[a] * (zr - z[a]) + p.U[b] + 0.5 * F[b] * (z[b] - zr));
      if (b - a == 1 && a > 0 && b + 1 < F.size()) {
        const double xs[4] = {z[a - 1], z[a], z[b], z[b + 1]};
        const double fs[4] = {F[a - 1], F[a], F[b], F[b + 1]};
        auto cubic = [&](double x) {
          double v = 0.0;
          for (int m = 0; m < 4; ++m) {
            double l = fs[m];
            for (int n = 0; n < 4; ++n)
              if (n != m) l *= (x - xs[n]) / (xs[m] - xs[n]);
            v += l;
          }
          return v;
        };
        double lo = z[a], hi = z[b];
        const bool rising = F[a] < 0.0;
        for (int it = 0; it < 60; ++it) {
          const double mid = 0.5 * (lo + hi);
          ((cubic(mid) < 0.0) == rising ? lo : hi) = mid;
        }
        zr = 0.5 * (lo + hi);
        // Simpson is exact on the cubic; average the integrals from both ends.
        const double from_a = p.U[a] - (zr - z[a]) / 6.0 * (F[a] + 4.0 * cubic(0.5 * (z[a] + zr)));
        const double from_b = p.U[b] + (z[b] - zr) / 6.0 * (F[b] + 4.0 * cubic(0.5 * (zr + z[b])));
        Ur = 0.5 * (from_a + from_b);
      }
      const auto kind = F[a] > 0.0 ? Extremum::Kind::Min : Extremum::Kind::Max;
      rep.extrema.push_back({zr, Ur, kind, 0.0});
      ++rep.sign_changes;
    }
    last = static_cast<std::ptrdiff_t>(i);
  }
  for (std::size_t j = 0; j < rep.extrema.size(); ++j) {
    auto& e = rep.extrema[j];
    if (e.kind != Extremum::Kind::Min) continue;
    double barrier = std::numeric_limits<double>::infinity();
    if (j > 0 && rep.extrema[j - 1].kind == Extremum::Kind::Max) barrier = std::min(barrier, rep.extrema[j - 1].U);
    if (j + 1 < rep.extrema.size() && rep.extrema[j + 1].kind == Extremum::Kind::Max)
      barrier = std::min(barrier, rep.extrema[j + 1].U);
    e.depth = std::isfinite(barrier) ? barrier - e.U : 0.0;
  }
  return rep;
}

}  // namespace tricav
