#include "oracles.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace oracle {

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

Mat expm_taylor(const Mat& a) {
  double norm = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) norm = std::max(norm, a.col(j).cwiseAbs().sum());
  int squarings = 0;
  while (norm > 0.25) {
    norm /= 2.0;
    ++squarings;
  }
  const Mat scaled = a / std::ldexp(1.0, squarings);
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat sum = term;
  for (int k = 1; k <= 60; ++k) {
    term = term * scaled / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

Mat spin_operator(int sites, const std::vector<std::pair<int, Mat>>& factors) {
  const Eigen::Index dim = Eigen::Index{1} << sites;
  Mat out = Mat::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      cd element{1.0, 0.0};
      for (int k = 0; k < sites; ++k) {
        const int shift = sites - 1 - k;
        const auto rb = (r >> shift) & 1;
        const auto cb = (c >> shift) & 1;
        cd local = rb == cb ? cd{1.0, 0.0} : cd{0.0, 0.0};
        for (const auto& [site, m] : factors) {
          if (site == k) local = m(rb, cb);
        }
        element *= local;
        if (element == cd{0.0, 0.0}) break;
      }
      out(r, c) = element;
    }
  }
  return out;
}

Mat sigma_x() {
  Mat m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

Mat sigma_y() {
  Mat m(2, 2);
  m << cd{0.0, 0.0}, cd{0.0, -1.0}, cd{0.0, 1.0}, cd{0.0, 0.0};
  return m;
}

Mat sigma_z() {
  Mat m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

Mat sigma_minus() {
  Mat m = Mat::Zero(2, 2);
  m(1, 0) = 1.0;
  return m;
}

Mat lindblad_action(const Mat& h, const std::vector<Channel>& channels, const Mat& rho) {
  const cd i{0.0, 1.0};
  Mat out = -i * (h * rho - rho * h);
  for (const auto& c : channels) {
    const Mat ldl = c.op.adjoint() * c.op;
    out += c.rate * (c.op * rho * c.op.adjoint() - 0.5 * ldl * rho - 0.5 * rho * ldl);
  }
  return out;
}

namespace {

template <class State, class Rhs>
std::vector<State> rk4(const State& y0, const std::vector<double>& times, int substeps, Rhs rhs) {
  std::vector<State> out;
  out.reserve(times.size());
  State y = y0;
  out.push_back(y);
  for (std::size_t n = 1; n < times.size(); ++n) {
    const double h = (times[n] - times[n - 1]) / substeps;
    for (int s = 0; s < substeps; ++s) {
      const State k1 = rhs(y);
      const State k2 = rhs(State(y + 0.5 * h * k1));
      const State k3 = rhs(State(y + 0.5 * h * k2));
      const State k4 = rhs(State(y + h * k3));
      y += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.push_back(y);
  }
  return out;
}

}  // namespace

std::vector<Mat> rk4_lindblad(const Mat& h, const std::vector<Channel>& channels, const Mat& rho0,
                              const std::vector<double>& times, int substeps) {
  return rk4<Mat>(rho0, times, substeps,
                  [&](const Mat& rho) { return lindblad_action(h, channels, rho); });
}

std::vector<Vec> rk4_schrodinger(const Mat& h, const Vec& psi0, const std::vector<double>& times,
                                 int substeps) {
  const cd i{0.0, 1.0};
  return rk4<Vec>(psi0, times, substeps, [&](const Vec& psi) -> Vec { return -i * (h * psi); });
}

Mat random_matrix(int dim, double scale, std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, scale);
  Mat m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) m(i, j) = cd{n(rng), n(rng)};
  return m;
}

Mat random_hermitian(int dim, double scale, std::mt19937& rng) {
  const Mat m = random_matrix(dim, scale, rng);
  return 0.5 * (m + m.adjoint());
}

Mat random_density(int dim, std::mt19937& rng) {
  const Mat m = random_matrix(dim, 1.0, rng);
  Mat rho = m * m.adjoint() + 0.05 * Mat::Identity(dim, dim);
  return rho / rho.trace();
}

double tls_excited_population(double rabi, double gamma0, double t) {
  const double mu = std::sqrt(rabi * rabi - gamma0 * gamma0 / 16.0);
  const double a = rabi * rabi / (gamma0 * gamma0 + 2.0 * rabi * rabi);
  const double e = std::exp(-3.0 * gamma0 * t / 4.0);
  return a * (1.0 - e * (std::cos(mu * t) + 3.0 * gamma0 / (4.0 * mu) * std::sin(mu * t)));
}

cd tls_sigma_plus(double rabi, double gamma0, double t) {
  const double mu = std::sqrt(rabi * rabi - gamma0 * gamma0 / 16.0);
  const double a = rabi * gamma0 / (gamma0 * gamma0 + 2.0 * rabi * rabi);
  const double e = std::exp(-3.0 * gamma0 * t / 4.0);
  const double k = gamma0 / (4.0 * mu) - rabi * rabi / (gamma0 * mu);
  return cd{0.0, -a} * (1.0 - e * (std::cos(mu * t) + k * std::sin(mu * t)));
}

double super_ohmic_rate_zero_T(double alpha, double s, double omega_c, double t) {
  const double x = omega_c * t;
  return alpha * omega_c * std::tgamma(s) * std::sin(s * std::atan(x)) / std::pow(1.0 + x * x, s / 2.0);
}

namespace {

struct GaussRule {
  std::array<double, 20> x{};
  std::array<double, 20> w{};
};

GaussRule make_rule() {
  GaussRule r;
  constexpr int n = 20;
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    r.x[static_cast<std::size_t>(i)] = z;
    r.w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  return r;
}

}  // namespace

double gauss_legendre(const std::function<double(double)>& f, double upper, double first_panel,
                      double growth, double max_panel) {
  static const GaussRule rule = make_rule();
  double sum = 0.0;
  double a = 0.0;
  double width = first_panel;
  while (a < upper) {
    const double b = std::min(upper, a + width);
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    for (std::size_t k = 0; k < rule.x.size(); ++k) sum += rule.w[k] * half * f(mid + half * rule.x[k]);
    a = b;
    width = std::min(max_panel, width * growth);
  }
  return sum;
}

double decoherence_exponent(const std::function<double(double)>& sdf, double temperature,
                            double t, double upper) {
  auto integrand = [&](double w) {
    const double half = std::sin(0.5 * w * t);
    return sdf(w) / (w * w * std::tanh(w / (2.0 * temperature))) * 2.0 * half * half;
  };
  const double max_panel = t > 0.0 ? std::min(0.05, std::numbers::pi / t) : 0.05;
  return gauss_legendre(integrand, upper, 1e-8, 1.5, max_panel);
}

}  // namespace oracle
