#pragma once

#include <complex>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "tricav/numerics.hpp"

namespace tricav {

using cplx = std::complex<double>;

namespace model {

struct Constant {
  cplx eps;
};

// eps_inf (w^2 - wl^2 + i G w) / (w^2 - wt^2 + i G w)
struct PhononLorentz {
  double eps_inf;
  double omega_l;
  double omega_t;
  double gamma;
};

struct Drude {
  double omega_p;
  double gamma;
};

struct Oscillator {
  double strength;
  double omega;
  double gamma;
};

// eps_inf + sum_j S_j w_j^2 / (w_j^2 - w^2 - i g_j w)
struct OscillatorSum {
  double eps_inf;
  std::vector<Oscillator> terms;
};

struct Tabulated {
  std::vector<double> omega;
  std::vector<double> eps_re;
  std::vector<double> eps_im;
  numerics::LogLinearInterpolator re;
  numerics::LogLinearInterpolator im;
};

// Perfect absorber test double: rho = tau = 0 by fiat, no permittivity.
struct Black {};

}  // namespace model

class Material {
 public:
  using Variant = std::variant<model::Constant, model::PhononLorentz, model::Drude, model::OscillatorSum,
                               model::Tabulated, model::Black>;

  static Material vacuum();
  static Material constant(cplx eps, std::string name = "constant");
  static Material phonon_lorentz(double eps_inf, double omega_l, double omega_t, double gamma,
                                 std::string name = "phonon-lorentz");
  static Material drude(double omega_p, double gamma, std::string name = "drude");
  static Material oscillator_sum(double eps_inf, std::vector<model::Oscillator> terms,
                                 std::string name = "oscillator-sum");
  static Material tabulated(std::vector<double> omega, std::vector<double> eps_re, std::vector<double> eps_im,
                            std::string name = "tabulated");
  static Material black();

  // Presets.
  static Material sic();
  static Material gold();
  static Material sapphire_like();

  // Preset by name (vacuum, sic, gold, sapphire, black) or a path to an
  // optical-data file.
  static Material from_name(const std::string& name_or_path);
  static Material load_table(const std::string& path);

  cplx eps_real_axis(double omega) const;
  // Real and >= 1. xi = 0 gives the static value (infinite for a metal).
  double eps_imag_axis(double xi) const;

  bool is_black() const;
  bool is_vacuum() const;
  // Frequencies worth splitting a real-axis integral at.
  std::vector<double> resonances() const;

  const std::string& name() const { return name_; }
  const Variant& variant() const { return *model_; }

 private:
  Material(Variant v, std::string name);
  std::shared_ptr<const Variant> model_;
  std::string name_;
};

}  // namespace tricav
