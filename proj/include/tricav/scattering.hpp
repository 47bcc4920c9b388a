#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include "tricav/materials.hpp"

namespace tricav {

enum class Polarization { TE, TM };

inline const char* to_string(Polarization p) { return p == Polarization::TE ? "TE" : "TM"; }

// A guided-mode pole or similar vanishing denominator.
class SingularModeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Square root on the decaying branch: Im >= 0, and Re >= 0 when real.
cplx decaying_sqrt(cplx z);

// Real-frequency plane-wave mode. kz is kept in units of w/c so that
// grazing and deep-evanescent modes do not lose digits in w^2/c^2 - k^2.
struct Mode {
  double omega = 0.0;  // rad/s
  double k = 0.0;      // parallel wavevector, rad/m
  Polarization pol = Polarization::TE;
  cplx kz_unit{1.0, 0.0};

  Mode() = default;
  Mode(double omega_, double k_, Polarization p);
  // Propagative mode labelled by its real kz in [0, w/c].
  static Mode from_kz(double omega, double kz, Polarization p);
  // Evanescent mode with kz = i q, q >= 0.
  static Mode from_q(double omega, double q, Polarization p);

  // sqrt(w^2/c^2 - k^2), Im >= 0.
  cplx kz() const;
  bool propagative() const { return kz_unit.imag() == 0.0; }
};

struct FresnelCoefficients {
  cplx r;
  cplx t;     // vacuum -> medium
  cplx tbar;  // medium -> vacuum
};

// Slab response. tau carries the phase exp(i(kz_in - kz) delta);
// tau_out = tau exp(i kz delta) is the same wave referred to the exit face,
// which stays bounded for evanescent modes and is what the cavity algebra
// uses.
struct SlabAmplitudes {
  cplx rho;
  cplx tau;
  cplx tau_out;
};

// Same quantities on the imaginary axis (all real).
struct RealSlabAmplitudes {
  double rho;
  double tau;
  double tau_out;
};

FresnelCoefficients fresnel(const Mode& m, cplx eps);

SlabAmplitudes slab_amplitudes(const Mode& m, cplx eps, double delta);
// Handles the vacuum and black special cases before touching eps.
SlabAmplitudes slab_amplitudes(const Mode& m, const Material& mat, double delta);

// Amplitudes at omega = i xi. xi = 0 is the static limit (TE -> transparent,
// TM with the electrostatic (eps - 1)/(eps + 1)).
RealSlabAmplitudes slab_amplitudes_imag_axis(double xi, double k, Polarization pol, double eps, double delta);
RealSlabAmplitudes slab_amplitudes_imag_axis(double xi, double k, Polarization pol, const Material& mat,
                                             double delta);

// eps+ . eps- for the pair of waves bouncing between the walls: 1 for TE,
// (c^2/w^2)(k^2 - kz^2) for TM.
cplx polarization_overlap(const Mode& m);

}  // namespace tricav
