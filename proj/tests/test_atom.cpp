#include <doctest.h>

#include <cmath>

#include "tricav/atom.hpp"
#include "tricav/constants.hpp"

using namespace tricav;
using doctest::Approx;

namespace {

AtomCavity sapphire_cavity(double D) {
  AtomCavity c;
  c.material1 = c.material3 = Material::sapphire_like();
  c.delta1 = c.delta3 = 5e-6;
  c.D = D;
  c.T1 = c.T3 = 300.0;
  c.Te = 600.0;
  return c;
}

const Accuracy acc = Accuracy::with(1e-6);
const Accuracy coarse = Accuracy::with(1e-3);

}  // namespace

TEST_CASE("polarizability models") {
  const double a0 = 5.26e-39, w0 = 2.42e15;
  const AtomModel st = AtomModel::static_alpha(a0);
  CHECK(st.alpha(1e15) == cplx(a0));
  CHECK(st.alpha_imag_axis(3e14) == a0);
  const AtomModel lz = AtomModel::single_lorentz(a0, w0, 0.0);
  CHECK(lz.static_value() == Approx(a0).epsilon(1e-15));
  CHECK(lz.alpha_imag_axis(w0) == Approx(a0 / 2).epsilon(1e-15));
  CHECK(lz.alpha(0.5 * w0).real() == Approx(a0 / 0.75).epsilon(1e-15));
  const AtomModel damped = AtomModel::single_lorentz(a0, w0, 3.8e7);
  CHECK(damped.alpha(w0).imag() > 0.0);
  CHECK(AtomModel::scaled(lz, 7.0).alpha_imag_axis(1e15) == Approx(7.0 * lz.alpha_imag_axis(1e15)).epsilon(1e-15));
  CHECK(AtomModel::rubidium().resonance() == Approx(w0).epsilon(1e-12));
}

TEST_CASE("cavity grid") {
  const auto z = cavity_grid(10e-6, 401);
  CHECK(z.size() == 401);
  CHECK(z[200] == 0.0);
  CHECK(z.front() > -5e-6);
  CHECK(z.back() < 5e-6);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(z[i] == -z[z.size() - 1 - i]);
}

TEST_CASE("potential from forces") {
  std::vector<double> z;
  for (int i = -50; i <= 50; ++i) z.push_back(i * 0.02);
  std::vector<double> F(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) F[i] = 3.0 * z[i];
  const auto p = potential_from_forces(z, F);
  CHECK(p.U[50] == 0.0);
  for (std::size_t i = 0; i < z.size(); ++i) CHECK(p.U[i] == Approx(-1.5 * z[i] * z[i]).scale(1.0));
  const auto zero = potential_from_forces(z, std::vector<double>(z.size(), 0.0));
  for (double u : zero.U) CHECK(u == 0.0);
  CHECK(classify_extrema(zero).extrema.empty());

  // -dU/dz returns F to second order in the spacing.
  std::vector<double> G(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) G[i] = std::sin(2.0 * z[i]);
  const auto q = potential_from_forces(z, G);
  for (std::size_t i = 1; i + 1 < z.size(); ++i)
    CHECK(-(q.U[i + 1] - q.U[i - 1]) / (z[i + 1] - z[i - 1]) == Approx(G[i]).scale(1.0).epsilon(1e-3));
}

TEST_CASE("extrema of a symmetric double well") {
  // U = (z^2 - 1)^2, F = -U'.
  std::vector<double> z;
  for (int i = -100; i <= 100; ++i) z.push_back(i * 0.015);
  std::vector<double> F(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) F[i] = -4.0 * z[i] * (z[i] * z[i] - 1.0);
  const auto rep = classify_extrema(potential_from_forces(z, F));
  REQUIRE(rep.extrema.size() == 3);
  CHECK(rep.sign_changes == 3);
  CHECK(rep.extrema[0].kind == Extremum::Kind::Min);
  CHECK(rep.extrema[1].kind == Extremum::Kind::Max);
  CHECK(rep.extrema[2].kind == Extremum::Kind::Min);
  CHECK(rep.extrema[0].z == Approx(-1.0).epsilon(1e-4));
  CHECK(rep.extrema[2].z == Approx(-rep.extrema[0].z).epsilon(1e-12));
  CHECK(rep.extrema[1].z == Approx(0.0).scale(1.0));
  CHECK(rep.extrema[0].depth == Approx(1.0).epsilon(1e-3));
  CHECK(rep.extrema[2].depth == Approx(rep.extrema[0].depth).epsilon(1e-12));

  std::vector<double> mono(z.size(), -2.0);
  CHECK(classify_extrema(potential_from_forces(z, mono)).extrema.empty());
}

TEST_CASE("Casimir-Polder limit near a good conductor") {
  // Static alpha, slab 1 absent, atom 1 um from a near-perfect mirror at low
  // temperature: F = -3 hbar c alpha0 / (8 pi^2 eps0 l^5), toward the mirror.
  AtomCavity c;
  c.material3 = Material::constant(1e8);
  c.delta3 = 1e-3;
  c.D = 4e-6;
  c.T1 = c.T3 = c.Te = 10.0;
  c.atom = AtomModel::static_alpha(5e-39);
  const double l = 1e-6;
  c.z = c.D / 2 - l;
  const double expected =
      3.0 * constants::hbar * constants::c * 5e-39 / (8.0 * constants::pi * constants::pi * constants::epsilon_0 * std::pow(l, 5));
  CHECK(atom_force_eq(c, 10.0, acc) == Approx(expected).epsilon(0.02));
}

TEST_CASE("equilibrium force: symmetry, sign and linearity") {
  AtomCavity c = sapphire_cavity(10e-6);
  c.Te = 300.0;
  const double near3 = atom_force_eq(c.at(4e-6), 300.0, acc);
  CHECK(near3 > 0.0);  // pulled toward slab 3
  CHECK(std::abs(atom_force_eq(c.at(0.0), 300.0, acc)) <= 1e-9 * near3);
  CHECK(atom_force_eq(c.at(-4e-6), 300.0, acc) == Approx(-near3).epsilon(1e-9));

  AtomCavity s = c.at(2e-6);
  s.atom = AtomModel::scaled(c.atom, 13.0);
  CHECK(atom_force_eq(s, 300.0, acc) == Approx(13.0 * atom_force_eq(c.at(2e-6), 300.0, acc)).epsilon(1e-9));
}

TEST_CASE("non-equilibrium force: nulls, linearity and mirror covariance") {
  AtomCavity eq = sapphire_cavity(8e-6).at(1.5e-6);
  eq.Te = 300.0;
  const auto n0 = atom_force_neq(eq, coarse);
  CHECK(n0.total() == 0.0);
  const auto f0 = atom_force(eq, coarse);
  CHECK(f0.total == f0.eq);

  AtomCavity c = sapphire_cavity(8e-6);
  c.T3 = 400.0;
  c.Te = 500.0;
  c.z = 1.5e-6;
  const auto a = atom_force_neq(c, coarse);
  const auto b = atom_force_neq(c.mirrored(), coarse);
  CHECK(c.mirrored().z == -c.z);
  CHECK(b.total() == Approx(-a.total()).epsilon(1e-3));
  CHECK(b.body1 == Approx(-a.body3).epsilon(1e-3));
  CHECK(b.env == Approx(-a.env).epsilon(1e-3));

  AtomCavity s = c;
  s.atom = AtomModel::scaled(c.atom, 5.0);
  CHECK(atom_force_neq(s, coarse).total() == Approx(5.0 * a.total()).epsilon(1e-6));
  CHECK(std::isfinite(atom_t2_sensitivity(c, 10.0, coarse)));
}

TEST_CASE("symmetric hot-environment cavity: odd force, even potential") {
  const AtomCavity c = sapphire_cavity(12e-6);
  const auto z = cavity_grid(c.D, 9);
  const auto p = atom_potential(c, z, coarse);
  const std::size_t n = z.size();
  const double scale = std::abs(p.F[1]);
  CHECK(scale > 0.0);
  CHECK(std::abs(p.F[n / 2]) <= 1e-6 * scale);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(p.F[i] == Approx(-p.F[n - 1 - i]).scale(scale).epsilon(1e-3));
    CHECK(p.U[i] == Approx(p.U[n - 1 - i]).scale(std::abs(p.U[0])).epsilon(1e-3));
    CHECK(p.F[i] == Approx(p.F_eq[i] + p.F_neq[i].total()).scale(scale).epsilon(1e-12));
  }
  // The shared-profile evaluation agrees with single points.
  const auto single = atom_force_neq(c.at(z[2]), coarse);
  CHECK(p.F_neq[2].total() == Approx(single.total()).epsilon(2e-3));
}
