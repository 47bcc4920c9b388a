#pragma once

#include <array>
#include <string>
#include <vector>

#include "tricav/cavity.hpp"
#include "tricav/materials.hpp"
#include "tricav/numerics.hpp"

namespace tricav {

// Tolerances shared by every observable.
struct Accuracy {
  numerics::QuadratureSpec quad{};
  numerics::SummationSpec sum{};

  static Accuracy with(double rel_tol, int workers = 1) {
    Accuracy a;
    a.quad.rel_tol = rel_tol;
    a.sum.rel_tol = rel_tol;
    a.quad.workers = workers;
    a.sum.workers = workers;
    return a;
  }
  // Copy used for integrals nested inside a parallel loop.
  Accuracy serial() const {
    Accuracy a = *this;
    a.quad.workers = 1;
    a.sum.workers = 1;
    return a;
  }
};

struct ThreeSlabSystem {
  std::array<Material, 3> materials{Material::vacuum(), Material::vacuum(), Material::vacuum()};
  CavityGeometry geometry{};
  double T1 = 300.0;
  double T2 = 300.0;
  double T3 = 300.0;
  double Te = 300.0;

  void validate() const;
  // Slabs 1 and 3 exchanged together with their gaps and temperatures.
  ThreeSlabSystem mirrored() const;
  double temperature(int body) const;
  double max_temperature() const;
};

namespace thermal {
// Bose-Einstein occupation 1/(exp(hbar w / k T) - 1).
double n(double omega, double T);
// hbar w (1/2 + n).
double N(double omega, double T);
}  // namespace thermal

// Equilibrium pressures. Sign: negative means slab 1 is pulled toward +z
// (toward slab 2); the three values always sum to zero.
double pressure_eq_slab1(const ThreeSlabSystem& sys, double T, const Accuracy& acc = {});
double pressure_eq_slab2(const ThreeSlabSystem& sys, double T, const Accuracy& acc = {});
double pressure_eq_slab3(const ThreeSlabSystem& sys, double T, const Accuracy& acc = {});

// Lifshitz pressure on slab a facing slab b across `gap`, same sign rule
// as pressure_eq_slab1.
double pressure_two_body(const Material& a, const Material& b, double delta_a, double delta_b, double gap, double T,
                         const Accuracy& acc = {});
// P(1-2, d12) + P(1-3, d12 + delta2 + d23).
double additive_pressure_slab1(const ThreeSlabSystem& sys, double T, const Accuracy& acc = {});

struct RealFrequencyResult {
  double value = 0.0;
  double thermal_part = 0.0;
  double vacuum_part = 0.0;
  // Relative spread of the regularized vacuum part between the last two
  // extrapolation levels.
  double achieved_rel_tol = 0.0;
};

// Equilibrium pressure on slab 1 evaluated on the real frequency axis
// (propagative and evanescent sectors). The thermal part is integrated
// directly; the zero-point part oscillates without decaying and is
// Abel-regularized with exp(-eta w), extrapolated to eta -> 0.
RealFrequencyResult pressure_eq_slab1_realfreq(const ThreeSlabSystem& sys, double T, const Accuracy& acc = {});

// ---------------------------------------------------------------------------
// Non-equilibrium part.

enum class Sector { Propagative, Evanescent };

// The five channels contributing to Delta_{i,m}: two source bodies, each
// propagative and evanescent, and the environment (propagative only).
struct NeqDecomposition {
  int body = 1;
  int m = 1;
  std::array<int, 2> sources{2, 3};
  // A(T_source) - A(T_body) per channel, order: first_pw, first_ew,
  // second_pw, second_ew, env_pw.
  std::array<double, 5> channels{};
  double prefactor = 0.0;

  double first_pw() const { return channels[0]; }
  double first_ew() const { return channels[1]; }
  double second_pw() const { return channels[2]; }
  double second_ew() const { return channels[3]; }
  double env_pw() const { return channels[4]; }
  // Channel value in observable units (W/m^2 or Pa).
  double contribution(int c) const { return prefactor * channels[c]; }
  double total() const;
  // e.g. "body2_pw", "env_pw".
  std::string channel_name(int c) const;
};

// Per-channel spectral weights W_c(w) of body 1 or 2, i.e. the k-integrated
// kernels before multiplication by w^{2-m} n(w, T).
std::array<double, 5> neq_spectral_weights(const ThreeSlabSystem& sys, int body, int m, double omega,
                                           const Accuracy& acc = {});

// Kernel of Delta_{i,m} on a fixed adaptive frequency rule. Building it
// costs one frequency integral; afterwards A_c(T) for any T up to the
// largest probe temperature is a dot product, which makes root finding in
// a temperature cheap and gives exact zeros at equal temperatures.
class NeqSpectrum {
 public:
  NeqSpectrum(const ThreeSlabSystem& sys, int body, int m, std::vector<double> probe_temperatures,
              const Accuracy& acc = {});

  int body() const { return body_; }
  int m() const { return m_; }
  double max_temperature() const { return t_max_; }
  // A_c(T) without prefactor.
  double channel_integral(int c, double T) const;
  NeqDecomposition decompose(double T_body, double T_first, double T_second, double T_env) const;
  // Frequency nodes and weights of the cached rule.
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<std::array<double, 5>>& weights_at_nodes() const { return kernel_; }

 private:
  int body_;
  int m_;
  double t_max_;
  double prefactor_;
  std::array<int, 2> sources_;
  std::vector<double> nodes_;
  std::vector<double> rule_weights_;
  std::vector<std::array<double, 5>> kernel_;
};

// Delta_{i,m} for body i in {1,2,3}, m in {1: heat flux W/m^2, 2: pressure Pa}.
NeqDecomposition delta_slab(const ThreeSlabSystem& sys, int body, int m, const Accuracy& acc = {});
inline NeqDecomposition delta_slab1(const ThreeSlabSystem& s, int m, const Accuracy& a = {}) { return delta_slab(s, 1, m, a); }
inline NeqDecomposition delta_slab2(const ThreeSlabSystem& s, int m, const Accuracy& a = {}) { return delta_slab(s, 2, m, a); }
inline NeqDecomposition delta_slab3(const ThreeSlabSystem& s, int m, const Accuracy& a = {}) { return delta_slab(s, 3, m, a); }

struct SlabObservables {
  std::array<double, 3> H{};  // W/m^2, heat received
  std::array<double, 3> P{};  // Pa
  std::array<double, 3> P_eq{};
  std::array<NeqDecomposition, 3> heat{};
  std::array<NeqDecomposition, 3> force{};
};

SlabObservables observables(const ThreeSlabSystem& sys, const Accuracy& acc = {});

// Integrand of delta_slab at one frequency, per channel, in observable
// units per rad/s: prefactor w^{2-m} [n(w,T_src) - n(w,T_body)] W_c(w).
std::array<double, 5> spectral_density(const ThreeSlabSystem& sys, int body, int m, double omega,
                                       const Accuracy& acc = {});

// Upper frequency limit used for thermal integrals.
double frequency_cutoff(double T_max, const numerics::QuadratureSpec& quad);

}  // namespace tricav
