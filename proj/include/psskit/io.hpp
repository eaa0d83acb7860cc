#pragma once

#include <string>

#include "json.hpp"

#include "psskit/construct.hpp"
#include "psskit/cosine.hpp"
#include "psskit/ospb.hpp"
#include "psskit/pkss.hpp"
#include "psskit/pss_check.hpp"
#include "psskit/types.hpp"

namespace psskit::io {

using json = nlohmann::json;

/// {"dim": n, "vectors": [[...], ...]}. Rejects non-finite values and rows of
/// the wrong length.
VectorFamily family_from_json(const json& j);
json family_to_json(const VectorFamily& family);

/// One vector per line, comma separated, no header. Blank lines are skipped.
VectorFamily family_from_csv(const std::string& text);

/// Parses JSON when the first non-blank character is '{', CSV otherwise.
VectorFamily parse_family(const std::string& text);

/// Reads a whole file; throws InvalidInput when it cannot be opened.
std::string read_file(const std::string& path);

Vector vector_from_json(const json& j, std::size_t dim);
json vector_to_json(const Vector& v);
json matrix_rows_to_json(const Matrix& m);  // one entry per row

json tolerances_to_json(const Tolerances& tol);

json decomposition_to_json(const OspbDecomposition& dec);
/// onb entries are listed as basis vectors (one per entry).
OspbDecomposition decomposition_from_json(const json& j, std::size_t ambient_dim);

json to_json(const PssCheck& check);
json to_json(const CosineResult& result);
json to_json(const KCosineResult& result);
json to_json(const RotationPlan& plan);

}  // namespace psskit::io
