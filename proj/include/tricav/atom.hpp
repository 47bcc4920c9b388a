#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "tricav/materials.hpp"
#include "tricav/slab_observables.hpp"

namespace tricav {

// Dipole polarizability in SI units (C m^2 / V).
class AtomModel {
 public:
  static AtomModel static_alpha(double alpha0);
  static AtomModel single_lorentz(double alpha0, double omega0, double gamma0);
  // Uniform rescaling, e.g. to mimic the strong growth of alpha with the
  // principal quantum number of Rydberg states.
  static AtomModel scaled(const AtomModel& base, double factor);
  // Ground-state Rb-87 dominated by the D2 line.
  static AtomModel rubidium();

  cplx alpha(double omega) const;
  // alpha(i xi), real; xi = 0 gives the static value.
  double alpha_imag_axis(double xi) const;
  double static_value() const { return alpha_imag_axis(0.0); }
  // Resonance frequency, 0 for a static model.
  double resonance() const;

 private:
  enum class Kind { Static, Lorentz, Scaled };
  Kind kind_ = Kind::Static;
  double alpha0_ = 0.0;
  double omega0_ = 0.0;
  double gamma0_ = 0.0;
  double factor_ = 1.0;
  std::shared_ptr<const AtomModel> base_;
};

// Atom between slab 1 (occupying z < -D/2) and slab 3 (z > D/2).
struct AtomCavity {
  Material material1 = Material::vacuum();
  Material material3 = Material::vacuum();
  double delta1 = 0.0;
  double delta3 = 0.0;
  double D = 1e-6;
  double z = 0.0;
  double T1 = 300.0;
  double T3 = 300.0;
  double Te = 300.0;
  // Atom temperature; unset means T2 = Te.
  std::optional<double> T2;
  AtomModel atom = AtomModel::rubidium();

  void validate() const;
  double atom_temperature() const { return T2.value_or(Te); }
  // Slabs and their temperatures exchanged, z -> -z.
  AtomCavity mirrored() const;
  AtomCavity at(double z_new) const {
    AtomCavity c = *this;
    c.z = z_new;
    return c;
  }
};

// Equilibrium force at temperature T along +z (toward slab 3), in N.
double atom_force_eq(const AtomCavity& cav, double T, const Accuracy& acc = {});

// Non-equilibrium correction split by thermal source: slab 1 (n12),
// slab 3 (n32) and environment (ne2), in N.
struct AtomNeqDecomposition {
  double body1 = 0.0;
  double body3 = 0.0;
  double env = 0.0;
  double total() const { return body1 + body3 + env; }
};

AtomNeqDecomposition atom_force_neq(const AtomCavity& cav, const Accuracy& acc = {});

// atom_force_neq at every z of the grid (cav.z is ignored) from one shared
// frequency integral with per-point error control.
std::vector<AtomNeqDecomposition> atom_force_neq_profile(const AtomCavity& cav, const std::vector<double>& z_grid,
                                                         const Accuracy& acc = {});

struct AtomForce {
  double eq = 0.0;
  AtomNeqDecomposition neq{};
  double total = 0.0;
};

// atom_force_eq at the atom temperature plus the non-equilibrium part.
AtomForce atom_force(const AtomCavity& cav, const Accuracy& acc = {});

// dF/dT2 by central difference; measures how much the unspecified atom
// temperature matters.
double atom_t2_sensitivity(const AtomCavity& cav, double dT = 10.0, const Accuracy& acc = {});

struct PotentialProfile {
  std::vector<double> z;
  std::vector<double> F;
  std::vector<double> U;
  std::vector<std::string> warnings;
  // Filled by atom_potential only.
  std::vector<double> F_eq;
  std::vector<AtomNeqDecomposition> F_neq;
};

// Uniform grid of `points` samples strictly inside (-D/2, D/2); odd counts
// contain z = 0 exactly.
std::vector<double> cavity_grid(double D, int points = 401);

// U(z) = -int_0^z F; trapezoidal in z, U(0) = 0 exactly. The grid must
// contain 0 and be increasing.
PotentialProfile potential_from_forces(std::vector<double> z, std::vector<double> F);

// Evaluates the total force at every grid point (parallel over z when
// acc.quad.workers > 1) and integrates it.
PotentialProfile atom_potential(const AtomCavity& cav, const std::vector<double>& z_grid, const Accuracy& acc = {});

struct Extremum {
  enum class Kind { Min, Max };
  double z;
  double U;
  Kind kind;
  // For minima: barrier to the lower of the neighbouring maxima; 0 if
  // there is none.
  double depth = 0.0;
};

struct ExtremaReport {
  std::vector<Extremum> extrema;
  int sign_changes = 0;
};

ExtremaReport classify_extrema(const PotentialProfile& p);

}  // namespace tricav
