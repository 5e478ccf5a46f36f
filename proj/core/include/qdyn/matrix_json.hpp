#pragma once

#include "qdyn/linalg.hpp"

#include <nlohmann/json.hpp>

namespace qdyn {

/// {"rows": n, "cols": m, "re": [...], "im": [...]} with entries in
/// column-stacking order, the same order `vectorize` uses.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace qdyn
