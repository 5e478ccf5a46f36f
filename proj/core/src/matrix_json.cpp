#include "qdyn/matrix_json.hpp"

#include "qdyn/error.hpp"

#include <string>

namespace qdyn {

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  try {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (rows < 1 || cols < 1) {
      throw ShapeError("matrix json: dimensions must be positive");
    }
    const auto count = static_cast<std::size_t>(rows * cols);
    if (re.size() != count || im.size() != count) {
      throw ShapeError("matrix json: expected " + std::to_string(count) + " entries, got re=" +
                       std::to_string(re.size()) + " im=" + std::to_string(im.size()));
    }
    ComplexMatrix m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index r = 0; r < rows; ++r, ++k) {
        m(r, c) = Complex{re[k].get<double>(), im[k].get<double>()};
      }
    }
    require_valid(m, "matrix json");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ShapeError(std::string("matrix json: ") + e.what());
  }
}

}  // namespace qdyn
