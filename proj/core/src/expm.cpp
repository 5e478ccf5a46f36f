#include "qdyn/error.hpp"
#include "qdyn/linalg.hpp"

#include <array>
#include <cmath>

namespace qdyn {

namespace {

// Largest 1-norms for which the degree-m Padé approximant reaches unit
// roundoff in double precision (Higham 2005, Table 2.3).
constexpr std::array<double, 5> kTheta = {1.495585217958292e-2, 2.539398330063230e-1,
                                          9.504178996162932e-1, 2.097847961257068e0,
                                          5.371920351148152e0};

struct PadeTerms {
  ComplexMatrix u;  // odd part
  ComplexMatrix v;  // even part
};

PadeTerms pade_low(const ComplexMatrix& a, int degree) {
  static constexpr double b3[] = {120.0, 60.0, 12.0, 1.0};
  static constexpr double b5[] = {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0};
  static constexpr double b7[] = {17297280.0, 8648640.0, 1995840.0, 277200.0,
                                  25200.0,    1512.0,    56.0,      1.0};
  static constexpr double b9[] = {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                                  30270240.0,    2162160.0,    110880.0,     3960.0,
                                  90.0,          1.0};
  const double* b = degree == 3 ? b3 : degree == 5 ? b5 : degree == 7 ? b7 : b9;

  const Eigen::Index n = a.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  ComplexMatrix odd = b[1] * eye;
  ComplexMatrix even = b[0] * eye;
  ComplexMatrix power = eye;
  for (int k = 1; 2 * k <= degree; ++k) {
    power = power * a2;
    odd += b[2 * k + 1] * power;
    even += b[2 * k] * power;
  }
  return {a * odd, std::move(even)};
}

PadeTerms pade13(const ComplexMatrix& a) {
  static constexpr double b[] = {64764752532480000.0,
                                 32382376266240000.0,
                                 7771770303897600.0,
                                 1187353796428800.0,
                                 129060195264000.0,
                                 10559470521600.0,
                                 670442572800.0,
                                 33522128640.0,
                                 1323241920.0,
                                 40840800.0,
                                 960960.0,
                                 16380.0,
                                 182.0,
                                 1.0};
  const Eigen::Index n = a.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(n, n);
  const ComplexMatrix a2 = a * a;
  const ComplexMatrix a4 = a2 * a2;
  const ComplexMatrix a6 = a4 * a2;
  const ComplexMatrix u_inner = a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2);
  ComplexMatrix u = a * (u_inner + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye);
  const ComplexMatrix v_inner = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2);
  ComplexMatrix v = v_inner + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;
  return {std::move(u), std::move(v)};
}

ComplexMatrix pade_quotient(const PadeTerms& t) {
  // r = (V - U)^{-1} (V + U)
  return (t.v - t.u).partialPivLu().solve(t.v + t.u);
}

}  // namespace

ComplexMatrix expm(const ComplexMatrix& a, Complex scale) {
  require_square(a, "expm");
  require_valid(a, "expm");
  if (!std::isfinite(scale.real()) || !std::isfinite(scale.imag())) {
    throw ParameterError("expm: non-finite scale");
  }
  const ComplexMatrix x = scale * a;
  const double norm = one_norm(x);
  if (norm == 0.0) {
    return ComplexMatrix::Identity(a.rows(), a.cols());
  }

  static constexpr int kLowDegrees[] = {3, 5, 7, 9};
  for (int i = 0; i < 4; ++i) {
    if (norm <= kTheta[static_cast<std::size_t>(i)]) {
      return pade_quotient(pade_low(x, kLowDegrees[i]));
    }
  }

  int squarings = 0;
  if (norm > kTheta[4]) {
    squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / kTheta[4]))));
  }
  const ComplexMatrix scaled = x / std::ldexp(1.0, squarings);
  ComplexMatrix r = pade_quotient(pade13(scaled));
  for (int k = 0; k < squarings; ++k) {
    r = r * r;
  }
  return r;
}

}  // namespace qdyn
