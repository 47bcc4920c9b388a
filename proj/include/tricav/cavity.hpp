#pragma once

#include <array>

#include "tricav/scattering.hpp"

namespace tricav {

struct CavityGeometry {
  double delta1 = 0.0;
  double delta2 = 0.0;
  double delta3 = 0.0;
  double d12 = 0.0;
  double d23 = 0.0;

  void validate() const;
  // Slab 1 and slab 3 (and the gaps) swapped.
  CavityGeometry mirrored() const { return {delta3, delta2, delta1, d23, d12}; }
};

// Composed two- and three-body amplitudes at one mode. Reflections use the
// position-phase-free (tilde) convention with gaps entering explicitly.
// Transmissions are referred to the exit face of the group (they already
// contain exp(i kz delta) for each slab crossed), so |tau| is the physical
// modulus in every sector.
template <class S>
struct CavityScalarsT {
  S u12, u23, u1_23, u12_3;
  S rho12_plus, rho12_minus;
  S rho23_plus, rho23_minus;
  S rho123_plus, rho123_minus;
  S tau12, tau23, tau123;
};

using CavityScalars = CavityScalarsT<cplx>;
using RealCavityScalars = CavityScalarsT<double>;

// Three slabs seen by a real-frequency mode; exp(2i kz d) built from m.kz().
CavityScalars compose(const Mode& m, const SlabAmplitudes& a1, const SlabAmplitudes& a2, const SlabAmplitudes& a3,
                      const CavityGeometry& g);

// Same algebra at omega = i xi: exp(2i kz d) -> exp(-2 kappa d).
RealCavityScalars compose_imag_axis(double xi, double k, const RealSlabAmplitudes& a1, const RealSlabAmplitudes& a2,
                                    const RealSlabAmplitudes& a3, const CavityGeometry& g);

// Core algebra given the two gap phase factors e12 = exp(2i kz d12),
// e23 = exp(2i kz d23). Throws SingularModeError naming the failing factor.
template <class S, class A>
CavityScalarsT<S> compose_with_phases(const A& a1, const A& a2, const A& a3, S e12, S e23);

// tau123 through the 1 + (23) grouping, for cross-checks.
template <class S, class A>
S tau123_alternative(const A& a1, const CavityScalarsT<S>& cs) {
  return a1.tau_out * cs.tau23 * cs.u1_23;
}

}  // namespace tricav
