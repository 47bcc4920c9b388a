// Property suites. Built as its own executable so it can be run on its own.

#include <doctest.h>

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <random>

#include "tricav/analysis.hpp"
#include "tricav/atom.hpp"
#include "tricav/cavity.hpp"
#include "tricav/constants.hpp"
#include "tricav/slab_observables.hpp"

using namespace tricav;
using doctest::Approx;

namespace {

const Accuracy coarse = Accuracy::with(1e-3);

bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

// Plain two-body slab formulas, written out again here without the cavity
// algebra of the library.
namespace two_body {

struct Slab {
  cplx rho, tau;
};

Slab slab(double omega, cplx kz, cplx eps, double delta, Polarization p) {
  const double k0 = omega / constants::c;
  const cplx k2 = k0 * k0 - kz * kz;
  cplx kzm = std::sqrt(eps * k0 * k0 - k2);
  if (kzm.imag() < 0.0) kzm = -kzm;
  const cplx r = p == Polarization::TE ? (kz - kzm) / (kz + kzm) : (eps * kz - kzm) / (eps * kz + kzm);
  const cplx e = std::exp(cplx(0.0, 2.0) * kzm * delta);
  const cplx den = 1.0 - r * r * e;
  return {r * (1.0 - e) / den, (1.0 - r * r) * std::exp(cplx(0.0, 1.0) * kzm * delta) / den};
}

double n(double omega, double T) { return 1.0 / std::expm1(constants::hbar * omega / (constants::k_B * T)); }

template <class F>
double simpson(F&& f, double a, double b, int intervals) {
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

struct Result {
  double pw = 0.0, ew = 0.0;
};

// Flux (m = 1, W/m^2) or pressure (m = 2, Pa, positive pushing a away from
// b) received by slab a from the radiation of slab b across a vacuum gap d.
using Eps = std::function<cplx(double)>;

Result received(const Eps& eps_a, double delta_a, double Ta, const Eps& eps_b, double delta_b, double Tb, double d,
                int m) {
  const double w_max = 40.0 * constants::k_B * std::max(Ta, Tb) / constants::hbar;
  const double q_max = 25.0 / d;
  auto spectral = [&](double w, bool prop) {
    if (w == 0.0) return 0.0;
    const double k0 = w / constants::c;
    const cplx ea = eps_a(w), eb = eps_b(w);
    double s = 0.0;
    for (Polarization p : {Polarization::TE, Polarization::TM}) {
      if (prop) {
        s += simpson(
            [&](double kz) {
              const Slab A = slab(w, kz, ea, delta_a, p), B = slab(w, kz, eb, delta_b, p);
              const double u = 1.0 / std::norm(1.0 - A.rho * B.rho * std::exp(cplx(0.0, 2.0 * kz * d)));
              const double emit = 1.0 - std::norm(B.rho) - std::norm(B.tau);
              const double recv = m == 1 ? 1.0 - std::norm(A.rho) - std::norm(A.tau)
                                         : 1.0 + std::norm(A.rho) - std::norm(A.tau);
              return std::pow(kz, m) * recv * emit * u;
            },
            1e-9 * k0, k0, 400);  // at kz = 0 both walls reflect totally and 0/0 appears
      } else {
        s += simpson(
            [&](double q) {
              const Slab A = slab(w, cplx(0.0, q), ea, delta_a, p),
                          B = slab(w, cplx(0.0, q), eb, delta_b, p);
              const double e = std::exp(-2.0 * q * d);
              const double u = 1.0 / std::norm(1.0 - A.rho * B.rho * e);
              const double recv = m == 1 ? A.rho.imag() : -A.rho.real();
              return std::pow(q, m) * 4.0 * recv * B.rho.imag() * e * u;
            },
            1e-9 * k0, q_max, 3000);
      }
    }
    return std::pow(w, 2 - m) * (n(w, Tb) - n(w, Ta)) * s;
  };
  const double pref = constants::hbar / (4.0 * constants::pi * constants::pi);
  Result r;
  r.pw = pref * simpson([&](double w) { return spectral(w, true); }, 0.0, w_max, 2000);
  r.ew = pref * simpson([&](double w) { return spectral(w, false); }, 0.0, w_max, 2000);
  return r;
}

}  // namespace two_body

struct RandomModes {
  std::mt19937_64 rng{91};
  std::uniform_real_distribution<double> u{0.0, 1.0};

  void draw(Mode& m, SlabAmplitudes (&a)[3], CavityGeometry& g) {
    const double w = 1e13 * std::pow(1e3, u(rng));
    const double k0 = w / constants::c;
    const Polarization p = u(rng) < 0.5 ? Polarization::TE : Polarization::TM;
    m = u(rng) < 0.5 ? Mode::from_kz(w, u(rng) * k0, p) : Mode::from_q(w, 5.0 * u(rng) * k0, p);
    double delta[3];
    for (int i = 0; i < 3; ++i) {
      const cplx eps{-8.0 + 16.0 * u(rng), 0.05 + 3.0 * u(rng)};
      delta[i] = 1e-8 * std::pow(1e4, u(rng));
      a[i] = slab_amplitudes(m, eps, delta[i]);
    }
    g = {delta[0], delta[1], delta[2], 1e-8 * std::pow(1e4, u(rng)), 1e-8 * std::pow(1e4, u(rng))};
  }
};

ThreeSlabSystem mixed_system() {
  ThreeSlabSystem s;
  s.materials = {Material::gold(), Material::phonon_lorentz(2.5, 2.2e14, 1.4e14, 2e13),
                 Material::sapphire_like()};
  s.geometry = {0.2e-6, 0.7e-6, 2e-6, 0.8e-6, 1.7e-6};
  s.T1 = 280.0;
  s.T2 = 330.0;
  s.T3 = 390.0;
  s.Te = 310.0;
  return s;
}

AtomCavity atom_cavity() {
  AtomCavity c;
  c.material1 = Material::sapphire_like();
  c.material3 = Material::gold();
  c.delta1 = 3e-6;
  c.delta3 = 0.5e-6;
  c.D = 9e-6;
  c.z = 1.3e-6;
  c.T1 = 290.0;
  c.T3 = 360.0;
  c.Te = 450.0;
  return c;
}

}  // namespace

TEST_CASE("tau123 grouping equivalence over 1e6 random modes") {
  RandomModes gen;
  long failures = 0, mirror_failures = 0, singular = 0;
  const long trials = 1000000;
  for (long t = 0; t < trials; ++t) {
    Mode m;
    SlabAmplitudes a[3];
    CavityGeometry g;
    gen.draw(m, a, g);
    try {
      const auto c = compose(m, a[0], a[1], a[2], g);
      if (!close(tau123_alternative(a[0], c), c.tau123, 1e-11)) ++failures;
      const auto r = compose(m, a[2], a[1], a[0], g.mirrored());
      if (!close(r.tau123, c.tau123, 1e-11)) ++mirror_failures;
    } catch (const SingularModeError&) {
      ++singular;
    }
  }
  CHECK(failures == 0);
  CHECK(mirror_failures == 0);
  CHECK(singular == 0);
}

TEST_CASE("observables are linear in the polarizability") {
  const AtomCavity c = atom_cavity();
  AtomCavity s = c;
  s.atom = AtomModel::scaled(c.atom, 37.0);
  const Accuracy acc = Accuracy::with(1e-6);
  CHECK(atom_force_eq(s, 320.0, acc) == Approx(37.0 * atom_force_eq(c, 320.0, acc)).epsilon(1e-9));
  const auto a = atom_force_neq(c, coarse), b = atom_force_neq(s, coarse);
  CHECK(b.body1 == Approx(37.0 * a.body1).epsilon(1e-9));
  CHECK(b.body3 == Approx(37.0 * a.body3).epsilon(1e-9));
  CHECK(b.env == Approx(37.0 * a.env).epsilon(1e-9));

  const auto z = cavity_grid(c.D, 7);
  const auto pa = atom_potential(c, z, coarse), pb = atom_potential(s, z, coarse);
  for (std::size_t i = 0; i < z.size(); ++i) {
    CHECK(pb.F[i] == Approx(37.0 * pa.F[i]).epsilon(1e-9));
    CHECK(pb.U[i] == Approx(37.0 * pa.U[i]).scale(std::abs(pa.U[0])).epsilon(1e-9));
  }
}

TEST_CASE("mirror covariance of every slab observable") {
  const ThreeSlabSystem s = mixed_system();
  const auto a = observables(s, coarse);
  const auto b = observables(s.mirrored(), coarse);
  double Hs = 0.0, Ps = 0.0;
  for (int i = 0; i < 3; ++i) {
    Hs = std::max(Hs, std::abs(a.H[i]));
    Ps = std::max(Ps, std::abs(a.P[i]));
  }
  for (int i = 0; i < 3; ++i) {
    CAPTURE(i);
    CHECK(b.H[2 - i] == Approx(a.H[i]).scale(Hs).epsilon(5e-3));
    CHECK(b.P[2 - i] == Approx(-a.P[i]).scale(Ps).epsilon(5e-3));
    CHECK(b.P_eq[2 - i] == Approx(-a.P_eq[i]).scale(Ps).epsilon(5e-3));
  }

  const AtomCavity c = atom_cavity();
  const auto f = atom_force_neq(c, coarse), g = atom_force_neq(c.mirrored(), coarse);
  CHECK(g.body1 == Approx(-f.body3).epsilon(5e-3));
  CHECK(g.body3 == Approx(-f.body1).epsilon(5e-3));
  CHECK(g.env == Approx(-f.env).epsilon(5e-3));
  CHECK(atom_force_eq(c.mirrored(), 300.0, coarse) == Approx(-atom_force_eq(c, 300.0, coarse)).epsilon(5e-3));
}

TEST_CASE("two-body reduction against a separate two-slab calculation") {
  // Broad single resonances: smooth enough for fixed Simpson grids, and
  // Im eps -> 0 as w -> 0 keeps the pressure integral finite (a constant
  // lossy eps would make it diverge logarithmically).
  auto lorentz = [](double inf, double wl, double wt, double g) {
    return [=](double w) { return inf * (wl * wl - w * w - cplx(0.0, g * w)) / (wt * wt - w * w - cplx(0.0, g * w)); };
  };
  const two_body::Eps e1 = lorentz(3.0, 2.6e14, 1.6e14, 3e13), e2 = lorentz(2.0, 1.5e14, 0.9e14, 2e13);
  ThreeSlabSystem s;
  s.materials = {Material::phonon_lorentz(3.0, 2.6e14, 1.6e14, 3e13), Material::phonon_lorentz(2.0, 1.5e14, 0.9e14, 2e13),
                 Material::vacuum()};
  s.geometry = {1e-6, 0.5e-6, 1e-6, 1e-6, 1e-6};
  s.T1 = 250.0;
  s.T2 = 350.0;
  s.T3 = s.Te = 300.0;
  const Accuracy acc = Accuracy::with(1e-6);
  const double d = s.geometry.d12;

  for (int m : {1, 2}) {
    CAPTURE(m);
    const auto ref = two_body::received(e1, 1e-6, s.T1, e2, 0.5e-6, s.T2, d, m);
    const auto one = delta_slab(s, 1, m, acc);
    CHECK(one.contribution(0) == Approx(ref.pw).epsilon(1e-4));
    CHECK(one.contribution(1) == Approx(ref.ew).epsilon(1e-4));
    // Slab 3 is vacuum, so its channels are exactly empty.
    CHECK(one.contribution(2) == 0.0);
    CHECK(one.contribution(3) == 0.0);

    const auto back = two_body::received(e2, 0.5e-6, s.T2, e1, 1e-6, s.T1, d, m);
    const auto two = delta_slab(s, 2, m, acc);
    // Pressure on slab 2 pushed toward +z is negative in the slab convention.
    const double sign = m == 1 ? 1.0 : -1.0;
    CHECK(two.contribution(0) == Approx(sign * back.pw).epsilon(1e-4));
    CHECK(two.contribution(1) == Approx(sign * back.ew).epsilon(1e-4));
    if (m == 1) CHECK(two.contribution(0) + two.contribution(1) == Approx(-(ref.pw + ref.ew)).epsilon(1e-4));
  }

  // Equilibrium: a vacuum third slab leaves the Lifshitz pressure.
  ThreeSlabSystem h;
  h.materials = {Material::sic(), Material::gold(), Material::vacuum()};
  h.geometry = {2e-6, 0.3e-6, 1e-6, 0.6e-6, 1e-6};
  const Accuracy fine = Accuracy::with(1e-8);
  CHECK(pressure_eq_slab1(h, 300.0, fine) ==
        Approx(pressure_two_body(h.materials[0], h.materials[1], 2e-6, 0.3e-6, 0.6e-6, 300.0, fine)).epsilon(1e-6));
  CHECK(pressure_eq_slab2(h, 300.0, fine) ==
        Approx(-pressure_two_body(h.materials[0], h.materials[1], 2e-6, 0.3e-6, 0.6e-6, 300.0, fine)).epsilon(1e-6));
}

TEST_CASE("channel-vanishing identities") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const std::array<Material, 3> pool = {Material::sic(), Material::gold(), Material::sapphire_like()};
  const Accuracy acc = Accuracy::with(1e-6);
  for (int trial = 0; trial < 12; ++trial) {
    ThreeSlabSystem s;
    for (auto& mat : s.materials) mat = pool[static_cast<std::size_t>(u(rng) * 3) % 3];
    s.geometry = {1e-7 * std::pow(100.0, u(rng)), 1e-7 * std::pow(100.0, u(rng)), 1e-7 * std::pow(100.0, u(rng)),
                  1e-7 * std::pow(100.0, u(rng)), 1e-7 * std::pow(100.0, u(rng))};
    const int gone = trial % 3;
    s.materials[static_cast<std::size_t>(gone)] = Material::vacuum();
    const double w = 1e13 * std::pow(100.0, u(rng));
    for (int body = 1; body <= 3; ++body) {
      for (int m : {1, 2}) {
        CAPTURE(trial);
        CAPTURE(body);
        CAPTURE(m);
        const auto W = neq_spectral_weights(s, body, m, w, acc);
        if (body == gone + 1) {
          for (double x : W) CHECK(x == 0.0);
          continue;
        }
        // Channels sourced by the vacuum slab are empty.
        const std::array<int, 2> src = body == 1 ? std::array{2, 3} : body == 2 ? std::array{1, 3} : std::array{2, 1};
        for (int k = 0; k < 2; ++k)
          if (src[static_cast<std::size_t>(k)] == gone + 1) {
            CHECK(W[static_cast<std::size_t>(2 * k)] == 0.0);
            CHECK(W[static_cast<std::size_t>(2 * k + 1)] == 0.0);
          }
      }
    }
  }

  // The same holds as a limit: a nearly lossless, nearly unit-permittivity
  // slab emits in proportion to its small loss.
  ThreeSlabSystem s = mixed_system();
  const auto full = neq_spectral_weights(s, 1, 1, 2e14, acc);
  s.materials[1] = Material::constant(cplx(1.0, 1e-9));
  const auto faint = neq_spectral_weights(s, 1, 1, 2e14, acc);
  CHECK(std::abs(faint[0]) <= 1e-6 * std::abs(full[0]));
  CHECK(std::abs(faint[1]) <= 1e-6 * std::abs(full[1]));

  // Half-space outer slabs shield the middle one from the environment.
  ThreeSlabSystem hs = mixed_system();
  hs.geometry.delta1 = hs.geometry.delta3 = std::numeric_limits<double>::infinity();
  for (int m : {1, 2}) CHECK(neq_spectral_weights(hs, 2, m, 2e14, acc)[4] == 0.0);
}

TEST_CASE("serial and parallel paths give identical results") {
  const ThreeSlabSystem s = mixed_system();
  const Accuracy one = Accuracy::with(1e-3, 1), many = Accuracy::with(1e-3, 3);
  CHECK(pressure_eq_slab1(s, 300.0, one) == pressure_eq_slab1(s, 300.0, many));
  const auto a = delta_slab(s, 2, 1, one), b = delta_slab(s, 2, 1, many);
  for (int c = 0; c < 5; ++c) CHECK(a.channels[static_cast<std::size_t>(c)] == b.channels[static_cast<std::size_t>(c)]);
  // The real-frequency route is slow for metals; SiC half-spaces keep it short.
  ThreeSlabSystem sic;
  sic.materials = {Material::sic(), Material::sic(), Material::sic()};
  sic.geometry = {std::numeric_limits<double>::infinity(), 1e-6, std::numeric_limits<double>::infinity(), 2e-6, 2e-6};
  CHECK(pressure_eq_slab1_realfreq(sic, 300.0, one).value == pressure_eq_slab1_realfreq(sic, 300.0, many).value);

  const AtomCavity c = atom_cavity();
  const auto z = cavity_grid(c.D, 5);
  const auto pa = atom_potential(c, z, one), pb = atom_potential(c, z, many);
  CHECK(pa.F == pb.F);
  CHECK(pa.U == pb.U);

  const auto ma = analysis::nonadditivity_map(s, {0.5e-6, 1e-6}, {1e-6, 2e-6}, 300.0, one);
  const auto mb = analysis::nonadditivity_map(s, {0.5e-6, 1e-6}, {1e-6, 2e-6}, 300.0, many);
  for (std::size_t i = 0; i < ma.size(); ++i) CHECK(ma[i].value == mb[i].value);
}
