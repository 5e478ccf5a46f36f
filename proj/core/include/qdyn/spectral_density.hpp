#pragma once

#include <string>
#include <variant>

namespace qdyn {

/// α ω_c^{1−s} ω^s e^{−ω/ω_c}
struct SuperOhmicExp {
  double alpha = 0.5;
  double s = 2.5;
  double omega_c = 0.1;
};

/// J₀ ω^s / (ω/ω₀ + 1)² · (Γ/2) / ((ω − ω₀)² + (Γ/2)²)
struct LorentzianLocalized {
  double j0 = 0.2;
  double s = 2.5;
  double omega0 = 2.0;
  double width = 0.1;  // Γ, full width at half maximum
};

using SpectralDensity = std::variant<SuperOhmicExp, LorentzianLocalized>;

/// Throws ParameterError unless every parameter is finite and positive.
void validate(const SpectralDensity& sdf);

/// J(ω) for ω ≥ 0.
double sdf_eval(const SpectralDensity& sdf, double omega);

double sdf_exponent(const SpectralDensity& sdf) noexcept;

/// Frequency around which J is concentrated (ω_c or ω₀); used to scale searches.
double sdf_scale(const SpectralDensity& sdf) noexcept;

std::string sdf_name(const SpectralDensity& sdf);

/// Zero-temperature closed form α ω_c Γ(s) sin[s·atan(ω_c t)] / [1 + (ω_c t)²]^{s/2}.
/// Throws ParameterError for the localized density.
double gamma_analytic_lowT(const SpectralDensity& sdf, double t);

}  // namespace qdyn
