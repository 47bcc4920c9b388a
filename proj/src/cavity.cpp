#include "tricav/cavity.hpp"

#include <cmath>

#include "tricav/constants.hpp"

namespace tricav {

namespace {

constexpr double kFloor = 1e-30;

template <class S>
S resolvent(S x, const char* which) {
  const S den = S(1.0) - x;
  if (std::abs(den) < kFloor) throw SingularModeError(std::string("cavity: ") + which + " denominator vanishes");
  return S(1.0) / den;
}

}  // namespace

void CavityGeometry::validate() const {
  if (!(delta1 >= 0.0 && delta2 >= 0.0 && delta3 >= 0.0)) throw ValidationError("slab thicknesses must be >= 0");
  if (!(d12 > 0.0 && d23 > 0.0)) throw ValidationError("gaps d12 and d23 must be > 0");
  // Slabs 1 and 3 may be half-spaces (infinite thickness).
  if (!std::isfinite(delta2 + d12 + d23)) throw ValidationError("gaps and delta2 must be finite");
}

template <class S, class A>
CavityScalarsT<S> compose_with_phases(const A& a1, const A& a2, const A& a3, S e12, S e23) {
  const S r1 = a1.rho, r2 = a2.rho, r3 = a3.rho;
  const S t1 = a1.tau_out, t2 = a2.tau_out, t3 = a3.tau_out;
  CavityScalarsT<S> c;
  c.u12 = resolvent(r1 * r2 * e12, "u(1,2)");
  c.u23 = resolvent(r2 * r3 * e23, "u(2,3)");
  c.rho12_plus = r2 + t2 * t2 * c.u12 * r1 * e12;
  c.rho12_minus = r1 + t1 * t1 * c.u12 * r2 * e12;
  c.rho23_plus = r3 + t3 * t3 * c.u23 * r2 * e23;
  c.rho23_minus = r2 + t2 * t2 * c.u23 * r3 * e23;
  c.tau12 = t1 * t2 * c.u12;
  c.tau23 = t2 * t3 * c.u23;
  c.u1_23 = resolvent(r1 * c.rho23_minus * e12, "u(1,23)");
  c.u12_3 = resolvent(c.rho12_plus * r3 * e23, "u(12,3)");
  c.rho123_plus = r3 + t3 * t3 * c.u12_3 * c.rho12_plus * e23;
  c.rho123_minus = r1 + t1 * t1 * c.u1_23 * c.rho23_minus * e12;
  c.tau123 = c.tau12 * t3 * c.u12_3;
  return c;
}

template CavityScalarsT<cplx> compose_with_phases<cplx, SlabAmplitudes>(const SlabAmplitudes&, const SlabAmplitudes&,
                                                                       const SlabAmplitudes&, cplx, cplx);
template CavityScalarsT<double> compose_with_phases<double, RealSlabAmplitudes>(const RealSlabAmplitudes&,
                                                                               const RealSlabAmplitudes&,
                                                                               const RealSlabAmplitudes&, double,
                                                                               double);

CavityScalars compose(const Mode& m, const SlabAmplitudes& a1, const SlabAmplitudes& a2, const SlabAmplitudes& a3,
                      const CavityGeometry& g) {
  g.validate();
  const cplx ikz2 = 2.0 * cplx(0.0, 1.0) * m.kz();
  return compose_with_phases<cplx>(a1, a2, a3, std::exp(ikz2 * g.d12), std::exp(ikz2 * g.d23));
}

RealCavityScalars compose_imag_axis(double xi, double k, const RealSlabAmplitudes& a1, const RealSlabAmplitudes& a2,
                                    const RealSlabAmplitudes& a3, const CavityGeometry& g) {
  g.validate();
  const double kappa = std::sqrt(xi * xi / (constants::c * constants::c) + k * k);
  return compose_with_phases<double>(a1, a2, a3, std::exp(-2.0 * kappa * g.d12), std::exp(-2.0 * kappa * g.d23));
}

}  // namespace tricav
