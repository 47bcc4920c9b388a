#include "tricav/numerics.hpp"

#include "tricav/constants.hpp"

namespace tricav::numerics {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0) && !(abs_tol > 0.0)) throw ValidationError("quadrature needs rel_tol > 0 or abs_tol > 0");
  if (rel_tol < 0.0 || abs_tol < 0.0) throw ValidationError("quadrature tolerances must be non-negative");
  if (max_subdivisions < 1) throw ValidationError("max_subdivisions must be >= 1");
  if (!(frequency_cutoff_factor >= 10.0)) throw ValidationError("frequency_cutoff_factor must be >= 10");
  if (workers < 1) throw ValidationError("workers must be >= 1");
}

void SummationSpec::validate() const {
  if (!(rel_tol > 0.0)) throw ValidationError("summation rel_tol must be > 0");
  if (max_terms < 1) throw ValidationError("max_terms must be >= 1");
  if (workers < 1) throw ValidationError("workers must be >= 1");
}

double matsubara_frequency(int n, double temperature) {
  return 2.0 * constants::pi * constants::k_B * temperature * n / constants::hbar;
}

LogLinearInterpolator::LogLinearInterpolator(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.size() != y_.size()) throw ValidationError("interpolator: x and y differ in length");
  if (x_.size() < 2) throw ValidationError("interpolator: need at least two samples");
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!(x_[i] > 0.0)) throw ValidationError("interpolator: abscissae must be positive");
    if (i > 0 && !(x_[i] > x_[i - 1])) throw ValidationError("interpolator: abscissae must increase strictly");
    if (!std::isfinite(y_[i])) throw ValidationError("interpolator: non-finite ordinate");
  }
  log_x_.resize(x_.size());
  for (std::size_t i = 0; i < x_.size(); ++i) log_x_[i] = std::log(x_[i]);
}

double LogLinearInterpolator::operator()(double x) const {
  if (x_.empty()) throw std::out_of_range("interpolator is empty");
  if (!(x >= x_.front() && x <= x_.back())) throw std::out_of_range("interpolator: argument outside table");
  auto it = std::upper_bound(x_.begin(), x_.end(), x);
  std::size_t i = static_cast<std::size_t>(it - x_.begin());
  if (i == x_.size()) return y_.back();
  --i;
  const double t = (std::log(x) - log_x_[i]) / (log_x_[i + 1] - log_x_[i]);
  return y_[i] + t * (y_[i + 1] - y_[i]);
}

double kramers_kronig_imag_axis(std::span<const double> omega, std::span<const double> eps_im, double xi) {
  if (omega.empty() || omega.size() != eps_im.size()) throw ValidationError("Kramers-Kronig: bad table shape");
  if (!(xi >= 0.0) || !std::isfinite(xi)) throw ValidationError("Kramers-Kronig: xi must be >= 0");
  for (std::size_t i = 0; i < omega.size(); ++i) {
    if (!(omega[i] > 0.0)) throw ValidationError("Kramers-Kronig: frequencies must be positive");
    if (i > 0 && !(omega[i] > omega[i - 1])) throw ValidationError("Kramers-Kronig: frequencies must increase");
    if (!(eps_im[i] >= 0.0) || !std::isfinite(eps_im[i]))
      throw ValidationError("Kramers-Kronig: Im eps must be finite and >= 0");
  }

  const double w0 = omega.front();
  const double i0 = eps_im.front();
  // Linear ramp from zero on (0, w0).
  double total = xi > 0.0 ? (i0 / w0) * (w0 - xi * std::atan(w0 / xi)) : i0;

  // Log-linear segments, 15-point Kronrod in t = ln w.
  for (std::size_t s = 0; s + 1 < omega.size(); ++s) {
    const double ta = std::log(omega[s]);
    const double tb = std::log(omega[s + 1]);
    const double center = 0.5 * (ta + tb);
    const double half = 0.5 * (tb - ta);
    auto g = [&](double t) {
      const double w = std::exp(t);
      const double im = eps_im[s] + (t - ta) / (tb - ta) * (eps_im[s + 1] - eps_im[s]);
      return w * w * im / (w * w + xi * xi);
    };
    double acc = detail::kWgk[7] * g(center);
    for (int j = 0; j < 7; ++j)
      acc += detail::kWgk[j] * (g(center - half * detail::kXgk[j]) + g(center + half * detail::kXgk[j]));
    total += acc * half;
  }

  // Tail Im eps(w) = I_N (w_N / w)^3.
  const double wn = omega.back();
  const double in = eps_im.back();
  if (xi < 1e-3 * wn) {
    const double r = xi / wn;
    total += in * (1.0 / 3.0 - r * r / 5.0);
  } else {
    total += in * wn * wn * wn / (xi * xi) * (1.0 / wn - std::atan(xi / wn) / xi);
  }
  return 1.0 + 2.0 / constants::pi * total;
}

}  // namespace tricav::numerics
