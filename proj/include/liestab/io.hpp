#pragma once

#include "liestab/curvature.hpp"
#include "liestab/morphism.hpp"
#include "liestab/variation.hpp"

#include <json.hpp>

#include <filesystem>

namespace liestab {

using json = nlohmann::json;

// File formats. Indices in files are 1-based.
//
// Algebra: { "name", "dim", "brackets": [[i, j, [[coeff, k], ...]], ...],
//            "metric": "identity" | "killing_negated_scaled:<s>" | {"matrix": [[...]]},
//            "abelian_factor_is_torus": bool }
// or { "registry": "<expr>", "metric": ..., "abelian_factor_is_torus": ... }.
//
// Homomorphism: { "domain": <algebra>, "codomain": <algebra>, "phi": [[...]] }
// where <algebra> is an inline object, a registry expression, or a path
// relative to the file.
//
// All loaders throw StructuralError on malformed input.

MetrizedAlgebra algebra_from_json(const json& j,
                                  const std::filesystem::path& base = {});
Homomorphism homomorphism_from_json(const json& j,
                                    const std::filesystem::path& base = {});

json read_json_file(const std::filesystem::path& path);

/// Path to an algebra file if it exists, otherwise a registry expression.
MetrizedAlgebra load_algebra(const std::string& path_or_name);
Homomorphism load_homomorphism(const std::filesystem::path& path);

json to_json(const Vector& v);
json to_json(const Matrix& m);
json to_json(const AlgebraReport& r);
json to_json(const MetricReport& r);
json to_json(const HomReport& r);
json to_json(const StabilityReport& r);

}  // namespace liestab
