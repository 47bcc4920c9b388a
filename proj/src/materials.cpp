#include "tricav/materials.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace tricav {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double parse_number(const std::string& field, const std::string& path, int line) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(field, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != field.size() || !std::isfinite(v))
    throw ValidationError(path + ":" + std::to_string(line) + ": bad number '" + field + "'");
  return v;
}

}  // namespace

Material::Material(Variant v, std::string name)
    : model_(std::make_shared<const Variant>(std::move(v))), name_(std::move(name)) {}

Material Material::vacuum() { return Material(model::Constant{1.0}, "vacuum"); }

Material Material::constant(cplx eps, std::string name) {
  if (!std::isfinite(eps.real()) || !std::isfinite(eps.imag())) throw ValidationError("constant eps must be finite");
  if (eps.imag() < 0.0) throw ValidationError("constant eps must be passive (Im eps >= 0)");
  return Material(model::Constant{eps}, std::move(name));
}

Material Material::phonon_lorentz(double eps_inf, double omega_l, double omega_t, double gamma, std::string name) {
  if (!(eps_inf > 0.0)) throw ValidationError("phonon model: eps_inf must be > 0");
  if (!(omega_t > 0.0 && omega_l > omega_t)) throw ValidationError("phonon model: need omega_l > omega_t > 0");
  if (!(gamma > 0.0)) throw ValidationError("phonon model: gamma must be > 0");
  return Material(model::PhononLorentz{eps_inf, omega_l, omega_t, gamma}, std::move(name));
}

Material Material::drude(double omega_p, double gamma, std::string name) {
  if (!(omega_p > 0.0) || !(gamma >= 0.0)) throw ValidationError("drude: need omega_p > 0, gamma >= 0");
  return Material(model::Drude{omega_p, gamma}, std::move(name));
}

Material Material::oscillator_sum(double eps_inf, std::vector<model::Oscillator> terms, std::string name) {
  if (!(eps_inf >= 1.0)) throw ValidationError("oscillator sum: eps_inf must be >= 1");
  for (const auto& t : terms)
    if (!(t.strength >= 0.0 && t.omega > 0.0 && t.gamma >= 0.0))
      throw ValidationError("oscillator sum: need strength >= 0, omega > 0, gamma >= 0");
  return Material(model::OscillatorSum{eps_inf, std::move(terms)}, std::move(name));
}

Material Material::tabulated(std::vector<double> omega, std::vector<double> eps_re, std::vector<double> eps_im,
                             std::string name) {
  if (omega.size() < 2) throw ValidationError("optical table needs at least two rows");
  if (eps_re.size() != omega.size() || eps_im.size() != omega.size())
    throw ValidationError("optical table columns differ in length");
  for (double v : eps_im)
    if (!(v >= 0.0)) throw ValidationError("optical table: Im eps < 0 violates passivity");
  numerics::LogLinearInterpolator re(omega, eps_re);
  numerics::LogLinearInterpolator im(omega, eps_im);
  return Material(model::Tabulated{std::move(omega), std::move(eps_re), std::move(eps_im), std::move(re), std::move(im)},
                  std::move(name));
}

Material Material::black() { return Material(model::Black{}, "black"); }

Material Material::sic() { return phonon_lorentz(6.7, 1.827e14, 1.495e14, 0.9e12, "sic"); }

Material Material::gold() { return drude(1.37e16, 5.32e13, "gold"); }

// Ordinary-ray infrared phonons of Al2O3 plus one effective UV term that
// brings the optical constant to about 3.1. Static value ~9.4.
Material Material::sapphire_like() {
  std::vector<model::Oscillator> t = {
      {0.3, 7.252e13, 0.015 * 7.252e13},
      {2.7, 8.326e13, 0.010 * 8.326e13},
      {3.0, 1.0718e14, 0.020 * 1.0718e14},
      {0.3, 1.1961e14, 0.020 * 1.1961e14},
      {2.1, 2.0e16, 0.0},
  };
  return oscillator_sum(1.0, std::move(t), "sapphire");
}

Material Material::from_name(const std::string& s) {
  if (s == "vacuum") return vacuum();
  if (s == "sic") return sic();
  if (s == "gold") return gold();
  if (s == "sapphire") return sapphire_like();
  if (s == "black") return black();
  return load_table(s);
}

Material Material::load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open material '" + path + "' (not a preset and not a readable file)");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "omega_rad_per_s,eps_re,eps_im")
    throw ValidationError(path + ": header must be exactly 'omega_rad_per_s,eps_re,eps_im'");
  std::vector<double> w, re, im;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c, extra;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ',') ||
        std::getline(ss, extra, ','))
      throw ValidationError(path + ":" + std::to_string(lineno) + ": expected three comma-separated fields");
    w.push_back(parse_number(a, path, lineno));
    re.push_back(parse_number(b, path, lineno));
    im.push_back(parse_number(c, path, lineno));
  }
  return tabulated(std::move(w), std::move(re), std::move(im), path);
}

cplx Material::eps_real_axis(double w) const {
  if (!(w > 0.0)) throw ValidationError("eps_real_axis: omega must be > 0");
  const cplx i{0.0, 1.0};
  return std::visit(
      overloaded{
          [](const model::Constant& m) -> cplx { return m.eps; },
          [&](const model::PhononLorentz& m) -> cplx {
            return m.eps_inf * (w * w - m.omega_l * m.omega_l + i * m.gamma * w) /
                   (w * w - m.omega_t * m.omega_t + i * m.gamma * w);
          },
          [&](const model::Drude& m) -> cplx { return 1.0 - m.omega_p * m.omega_p / (w * (w + i * m.gamma)); },
          [&](const model::OscillatorSum& m) -> cplx {
            cplx e = m.eps_inf;
            for (const auto& t : m.terms) e += t.strength * t.omega * t.omega / (t.omega * t.omega - w * w - i * t.gamma * w);
            return e;
          },
          [&](const model::Tabulated& m) -> cplx {
            if (w < m.re.front() || w > m.re.back())
              throw std::out_of_range("eps_real_axis: omega outside the tabulated range (no extrapolation)");
            return {m.re(w), m.im(w)};
          },
          [](const model::Black&) -> cplx { throw ValidationError("black body has no permittivity"); },
      },
      *model_);
}

double Material::eps_imag_axis(double xi) const {
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw ValidationError("eps_imag_axis: xi must be >= 0");
  return std::visit(
      overloaded{
          [](const model::Constant& m) -> double {
            if (m.eps.imag() != 0.0)
              throw ValidationError("a lossy constant permittivity has no imaginary-axis continuation");
            return m.eps.real();
          },
          [&](const model::PhononLorentz& m) -> double {
            return m.eps_inf * (xi * xi + m.omega_l * m.omega_l + m.gamma * xi) /
                   (xi * xi + m.omega_t * m.omega_t + m.gamma * xi);
          },
          [&](const model::Drude& m) -> double {
            if (xi == 0.0) return std::numeric_limits<double>::infinity();
            return 1.0 + m.omega_p * m.omega_p / (xi * (xi + m.gamma));
          },
          [&](const model::OscillatorSum& m) -> double {
            double e = m.eps_inf;
            for (const auto& t : m.terms) e += t.strength * t.omega * t.omega / (t.omega * t.omega + xi * xi + t.gamma * xi);
            return e;
          },
          [&](const model::Tabulated& m) -> double { return numerics::kramers_kronig_imag_axis(m.omega, m.eps_im, xi); },
          [](const model::Black&) -> double { throw ValidationError("black body has no permittivity"); },
      },
      *model_);
}

bool Material::is_black() const { return std::holds_alternative<model::Black>(*model_); }

bool Material::is_vacuum() const {
  const auto* c = std::get_if<model::Constant>(model_.get());
  return c != nullptr && c->eps == cplx{1.0, 0.0};
}

std::vector<double> Material::resonances() const {
  std::vector<double> out;
  if (const auto* m = std::get_if<model::PhononLorentz>(model_.get())) {
    out.push_back(m->omega_t);
    // Re eps = -1 surface mode (lossless estimate)
    out.push_back(std::sqrt((m->eps_inf * m->omega_l * m->omega_l + m->omega_t * m->omega_t) / (m->eps_inf + 1.0)));
    out.push_back(m->omega_l);
  } else if (const auto* s = std::get_if<model::OscillatorSum>(model_.get())) {
    for (const auto& t : s->terms) out.push_back(t.omega);
  }
  return out;
}

}  // namespace tricav
