#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "tricav/constants.hpp"
#include "tricav/scattering.hpp"

using namespace tricav;
using doctest::Approx;

namespace {
bool close(cplx a, cplx b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }
}  // namespace

TEST_CASE("fresnel: vacuum, normal incidence, electrostatic limit") {
  const double w = 2e14;
  for (Polarization p : {Polarization::TE, Polarization::TM}) {
    const auto f = fresnel(Mode(w, 0.3 * w / constants::c, p), 1.0);
    CHECK(std::abs(f.r) == 0.0);
    CHECK(close(f.t, 1.0, 1e-15));
    CHECK(close(f.tbar, 1.0, 1e-15));
  }
  CHECK(close(fresnel(Mode(w, 0.0, Polarization::TE), 4.0).r, -1.0 / 3.0, 1e-14));
  CHECK(close(fresnel(Mode(w, 0.0, Polarization::TM), 4.0).r, 1.0 / 3.0, 1e-14));
  const cplx eps{4.0, 0.5};
  const auto deep = fresnel(Mode::from_q(w, 1e6 * w / constants::c, Polarization::TM), eps);
  CHECK(close(deep.r, (eps - 1.0) / (eps + 1.0), 1e-9));
}

TEST_CASE("slab amplitudes: limits") {
  const double w = 1.6e14;
  const cplx eps{-3.0, 0.2};
  for (Polarization p : {Polarization::TE, Polarization::TM}) {
    const Mode m = Mode::from_kz(w, 0.4 * w / constants::c, p);
    const auto zero = slab_amplitudes(m, eps, 0.0);
    CHECK(zero.rho == cplx(0.0));
    CHECK(zero.tau == cplx(1.0));
    const auto vac = slab_amplitudes(m, 1.0, 1e-6);
    CHECK(std::abs(vac.rho) < 1e-15);
    CHECK(close(vac.tau, 1.0, 1e-14));
    const auto thick = slab_amplitudes(m, eps, 1.0);
    CHECK(close(thick.rho, fresnel(m, eps).r, 1e-14));
    CHECK(std::abs(thick.tau) < 1e-100);
    const auto inf = slab_amplitudes(m, eps, std::numeric_limits<double>::infinity());
    CHECK(close(inf.rho, fresnel(m, eps).r, 1e-14));
    CHECK(inf.tau == cplx(0.0));
    const auto black = slab_amplitudes(m, Material::black(), 1e-6);
    CHECK(black.rho == cplx(0.0));
    CHECK(black.tau == cplx(0.0));
  }
}

TEST_CASE("passivity and branch over random propagative modes") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const double w = 1e13 * std::pow(1e3, u(rng));
    const cplx eps{-10.0 + 20.0 * u(rng), 1e-3 + 5.0 * u(rng)};
    const double delta = 1e-9 * std::pow(1e5, u(rng));
    const Polarization p = u(rng) < 0.5 ? Polarization::TE : Polarization::TM;
    const Mode m = Mode::from_kz(w, u(rng) * w / constants::c, p);
    const auto a = slab_amplitudes(m, eps, delta);
    CHECK(std::norm(a.rho) + std::norm(a.tau) < 1.0);
    // Branch inside the medium: transmitted wave decays.
    const cplx kzi = decaying_sqrt(eps * (w / constants::c) * (w / constants::c) - m.k * m.k);
    CHECK(kzi.imag() >= 0.0);
  }
  // Lossless: equality.
  const Mode m = Mode::from_kz(2e14, 0.5e14 / constants::c, Polarization::TM);
  const auto a = slab_amplitudes(m, 2.25, 3e-6);
  CHECK(std::norm(a.rho) + std::norm(a.tau) == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("imaginary axis amplitudes") {
  const double xi = 3e14;
  for (Polarization p : {Polarization::TE, Polarization::TM}) {
    CHECK(slab_amplitudes_imag_axis(xi, 1e6, p, 1.0, 1e-6).rho == 0.0);
    const double r = slab_amplitudes_imag_axis(xi, 2e6, p, 1e12, 1.0).rho;
    CHECK(r == Approx(p == Polarization::TM ? 1.0 : -1.0).epsilon(1e-5));
  }
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 5000; ++i) {
    const double x = 1e12 * std::pow(1e5, u(rng));
    const double k = 1e3 * std::pow(1e6, u(rng));
    const double eps = 1.0 + 100.0 * u(rng);
    const Polarization p = u(rng) < 0.5 ? Polarization::TE : Polarization::TM;
    const auto a = slab_amplitudes_imag_axis(x, k, p, eps, 1e-8 * std::pow(1e4, u(rng)));
    CHECK(std::abs(a.rho) < 1.0);
    CHECK(std::isfinite(a.tau));
  }
  // Semi-infinite value for a very thick slab.
  const double kappa = std::sqrt(xi * xi / (constants::c * constants::c) + 1e12);
  const double kin = std::sqrt(5.0 * xi * xi / (constants::c * constants::c) + 1e12);
  CHECK(slab_amplitudes_imag_axis(xi, 1e6, Polarization::TE, 5.0, 1e-2).rho ==
        Approx((kappa - kin) / (kappa + kin)).epsilon(1e-12));
}

TEST_CASE("polarization overlap") {
  const double w = 1e14;
  CHECK(polarization_overlap(Mode(w, 0.7 * w / constants::c, Polarization::TE)) == cplx(1.0));
  CHECK(close(polarization_overlap(Mode(w, 0.0, Polarization::TM)), -1.0, 1e-14));
  CHECK(close(polarization_overlap(Mode::from_kz(w, 0.0, Polarization::TM)), 1.0, 1e-14));
  CHECK(polarization_overlap(Mode::from_q(w, 2.0 * w / constants::c, Polarization::TM)).real() > 1.0);
}
