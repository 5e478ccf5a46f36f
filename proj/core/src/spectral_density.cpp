#include "qdyn/spectral_density.hpp"

#include "qdyn/error.hpp"
#include "qdyn/time_series.hpp"

#include <cmath>

namespace qdyn {

namespace {

void require_positive(double v, const char* what) {
  if (!std::isfinite(v) || !(v > 0.0)) {
    throw ParameterError(std::string("spectral density: ") + what +
                         " must be finite and positive, got " + format_double(v));
  }
}

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

}  // namespace

void validate(const SpectralDensity& sdf) {
  std::visit(Overloaded{[](const SuperOhmicExp& p) {
                          require_positive(p.alpha, "alpha");
                          require_positive(p.s, "s");
                          require_positive(p.omega_c, "omega_c");
                        },
                        [](const LorentzianLocalized& p) {
                          require_positive(p.j0, "J0");
                          require_positive(p.s, "s");
                          require_positive(p.omega0, "omega0");
                          require_positive(p.width, "Gamma");
                        }},
             sdf);
}

double sdf_eval(const SpectralDensity& sdf, double omega) {
  if (!(omega >= 0.0)) {
    throw ParameterError("sdf_eval: omega must be non-negative, got " + format_double(omega));
  }
  return std::visit(
      Overloaded{[omega](const SuperOhmicExp& p) {
                   return p.alpha * std::pow(p.omega_c, 1.0 - p.s) * std::pow(omega, p.s) *
                          std::exp(-omega / p.omega_c);
                 },
                 [omega](const LorentzianLocalized& p) {
                   const double half = 0.5 * p.width;
                   const double shape = omega / p.omega0 + 1.0;
                   const double detune = omega - p.omega0;
                   return p.j0 * std::pow(omega, p.s) / (shape * shape) * half /
                          (detune * detune + half * half);
                 }},
      sdf);
}

double sdf_exponent(const SpectralDensity& sdf) noexcept {
  return std::visit([](const auto& p) { return p.s; }, sdf);
}

double sdf_scale(const SpectralDensity& sdf) noexcept {
  return std::visit(Overloaded{[](const SuperOhmicExp& p) { return p.omega_c; },
                               [](const LorentzianLocalized& p) { return p.omega0; }},
                    sdf);
}

std::string sdf_name(const SpectralDensity& sdf) {
  return std::holds_alternative<SuperOhmicExp>(sdf) ? "super_ohmic" : "lorentzian";
}

double gamma_analytic_lowT(const SpectralDensity& sdf, double t) {
  const auto* p = std::get_if<SuperOhmicExp>(&sdf);
  if (p == nullptr) {
    throw ParameterError("gamma_analytic_lowT: only the super-Ohmic density has a closed form");
  }
  const double x = p->omega_c * t;
  return p->alpha * p->omega_c * std::tgamma(p->s) * std::sin(p->s * std::atan(x)) /
         std::pow(1.0 + x * x, 0.5 * p->s);
}

}  // namespace qdyn
