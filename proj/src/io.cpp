#include "liestab/io.hpp"

#include "liestab/errors.hpp"
#include "liestab/registry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace liestab {
namespace {

Metric metric_from_json(const json& spec, const LieAlgebra& alg) {
  const int n = alg.dim();
  if (spec.is_null()) return Metric::identity(n);
  if (spec.is_string()) {
    const auto s = spec.get<std::string>();
    if (s == "identity") return Metric::identity(n);
    const std::string prefix = "killing_negated_scaled:";
    if (s.rfind(prefix, 0) == 0) {
      double scale = 0.0;
      try {
        std::size_t used = 0;
        scale = std::stod(s.substr(prefix.size()), &used);
        if (used != s.size() - prefix.size()) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw StructuralError("metric: cannot parse scale in '" + s + "'");
      }
      return Metric(-scale * killing_form(alg));
    }
    throw StructuralError("metric: unknown metric '" + s + "'");
  }
  if (spec.is_object() && spec.contains("matrix")) {
    const auto& rows = spec.at("matrix");
    if (!rows.is_array() || static_cast<int>(rows.size()) != n) {
      throw StructuralError("metric: matrix must have " + std::to_string(n) + " rows");
    }
    Matrix g(n, n);
    for (int i = 0; i < n; ++i) {
      if (!rows[i].is_array() || static_cast<int>(rows[i].size()) != n) {
        throw StructuralError("metric: row " + std::to_string(i + 1) + " must have " +
                              std::to_string(n) + " entries");
      }
      for (int j = 0; j < n; ++j) g(i, j) = rows[i][j].get<double>();
    }
    return Metric(std::move(g));
  }
  throw StructuralError("metric: expected \"identity\", \"killing_negated_scaled:<s>\" or {\"matrix\": ...}");
}

LieAlgebra brackets_from_json(const json& j) {
  const auto name = j.value("name", std::string("unnamed"));
  if (!j.contains("dim") || !j.at("dim").is_number_integer()) {
    throw StructuralError("algebra '" + name + "': missing integer field \"dim\"");
  }
  const int n = j.at("dim").get<int>();
  if (n < 1) throw StructuralError("algebra '" + name + "': dim must be positive");

  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  auto at = [n](int i, int jj, int k) { return (static_cast<std::size_t>(i) * n + jj) * n + k; };
  std::map<std::pair<int, int>, std::vector<double>> given;

  const json brackets = j.value("brackets", json::array());
  if (!brackets.is_array()) throw StructuralError("algebra '" + name + "': \"brackets\" must be a list");
  for (const auto& entry : brackets) {
    if (!entry.is_array() || entry.size() != 3 || !entry[2].is_array()) {
      throw StructuralError("algebra '" + name + "': bracket entries are [i, j, [[coeff, k], ...]]");
    }
    const int i = entry[0].get<int>() - 1;
    const int jj = entry[1].get<int>() - 1;
    if (i < 0 || i >= n || jj < 0 || jj >= n) {
      throw StructuralError("algebra '" + name + "': bracket index out of range 1.." + std::to_string(n));
    }
    std::vector<double> out(n, 0.0);
    for (const auto& term : entry[2]) {
      if (!term.is_array() || term.size() != 2) {
        throw StructuralError("algebra '" + name + "': bracket terms are [coeff, k]");
      }
      const double coeff = term[0].get<double>();
      const int k = term[1].get<int>() - 1;
      if (k < 0 || k >= n) throw StructuralError("algebra '" + name + "': output index out of range");
      if (!std::isfinite(coeff)) throw StructuralError("algebra '" + name + "': non-finite coefficient");
      out[k] += coeff;
    }
    if (i == jj) {
      for (double v : out)
        if (v != 0.0) {
          throw StructuralError("algebra '" + name + "': [e" + std::to_string(i + 1) + ", e" +
                                std::to_string(i + 1) + "] must vanish");
        }
      continue;
    }
    if (given.count({i, jj})) {
      throw StructuralError("algebra '" + name + "': pair (" + std::to_string(i + 1) + ", " +
                            std::to_string(jj + 1) + ") specified twice");
    }
    given[{i, jj}] = out;
  }
  for (const auto& [key, out] : given) {
    const auto [i, jj] = key;
    const auto rev = given.find({jj, i});
    if (rev != given.end()) {
      for (int k = 0; k < n; ++k) {
        const double tol = kDefaultTolerance * std::max({1.0, std::abs(out[k]), std::abs(rev->second[k])});
        if (std::abs(out[k] + rev->second[k]) > tol) {
          throw StructuralError("algebra '" + name + "': brackets (" + std::to_string(i + 1) + ", " +
                                std::to_string(jj + 1) + ") and (" + std::to_string(jj + 1) + ", " +
                                std::to_string(i + 1) + ") are not antisymmetric");
        }
      }
    }
    for (int k = 0; k < n; ++k) {
      c[at(i, jj, k)] = out[k];
      c[at(jj, i, k)] = -out[k];
    }
  }
  return LieAlgebra(name, n, std::move(c));
}

}  // namespace

MetrizedAlgebra algebra_from_json(const json& j, const std::filesystem::path& base) {
  try {
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      const auto path = base / s;
      if (!base.empty() && std::filesystem::is_regular_file(path)) {
        return algebra_from_json(read_json_file(path), path.parent_path());
      }
      return load_algebra(s);
    }
    if (!j.is_object()) throw StructuralError("algebra: expected an object, registry name, or path");

    MetrizedAlgebra ma = j.contains("registry")
                             ? resolve_registry_expression(j.at("registry").get<std::string>())
                             : MetrizedAlgebra{brackets_from_json(j), Metric::identity(j.at("dim").get<int>()), true};
    if (j.contains("name") && j.contains("registry")) {
      ma.algebra = LieAlgebra(j.at("name").get<std::string>(), ma.dim(), ma.algebra.constants());
    }
    if (j.contains("metric")) ma.metric = metric_from_json(j.at("metric"), ma.algebra);
    if (j.contains("abelian_factor_is_torus")) {
      ma.abelian_factor_is_torus = j.at("abelian_factor_is_torus").get<bool>();
    }
    return ma;
  } catch (const json::exception& e) {
    throw StructuralError(std::string("algebra: malformed JSON field: ") + e.what());
  }
}

Homomorphism homomorphism_from_json(const json& j, const std::filesystem::path& base) {
  try {
    if (!j.is_object()) throw StructuralError("homomorphism: expected an object");
    for (const char* key : {"domain", "codomain", "phi"}) {
      if (!j.contains(key)) throw StructuralError(std::string("homomorphism: missing field \"") + key + "\"");
    }
    auto domain = algebra_from_json(j.at("domain"), base);
    auto codomain = algebra_from_json(j.at("codomain"), base);
    const auto& rows = j.at("phi");
    const int n1 = domain.dim();
    const int n2 = codomain.dim();
    if (!rows.is_array() || static_cast<int>(rows.size()) != n2) {
      throw StructuralError("homomorphism: phi must have " + std::to_string(n2) + " rows");
    }
    Matrix phi(n2, n1);
    for (int r = 0; r < n2; ++r) {
      if (!rows[r].is_array() || static_cast<int>(rows[r].size()) != n1) {
        throw StructuralError("homomorphism: phi row " + std::to_string(r + 1) + " must have " +
                              std::to_string(n1) + " entries");
      }
      for (int c = 0; c < n1; ++c) phi(r, c) = rows[r][c].get<double>();
    }
    return Homomorphism(std::move(domain), std::move(codomain), std::move(phi));
  } catch (const json::exception& e) {
    throw StructuralError(std::string("homomorphism: malformed JSON field: ") + e.what());
  }
}

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot read '" + path.string() + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw StructuralError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

MetrizedAlgebra load_algebra(const std::string& path_or_name) {
  const std::filesystem::path path(path_or_name);
  if (std::filesystem::is_regular_file(path)) {
    return algebra_from_json(read_json_file(path), path.parent_path());
  }
  return resolve_registry_expression(path_or_name);
}

Homomorphism load_homomorphism(const std::filesystem::path& path) {
  return homomorphism_from_json(read_json_file(path), path.parent_path());
}

json to_json(const Vector& v) {
  json out = json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

json to_json(const Matrix& m) {
  json out = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

json to_json(const AlgebraReport& r) {
  return {{"pass", r.pass},
          {"antisymmetry_residual", r.antisymmetry_residual},
          {"jacobi_residual", r.jacobi_residual},
          {"tolerance", r.tolerance}};
}

json to_json(const MetricReport& r) {
  return {{"pass", r.pass},
          {"positive_definite", r.positive_definite},
          {"min_eigenvalue", r.min_eigenvalue},
          {"ad_invariance_residual", r.ad_invariance_residual},
          {"compact_type", r.compact_type},
          {"tolerance", r.tolerance}};
}

json to_json(const HomReport& r) {
  return {{"pass", r.pass},
          {"hom_residual", r.hom_residual},
          {"isometry_residual", r.isometry_residual},
          {"rank", r.rank},
          {"tolerance", r.tolerance}};
}

json to_json(const StabilityReport& r) {
  json out = {{"verdict", to_string(r.verdict)},
              {"witness", r.witness ? to_json(*r.witness) : json(nullptr)},
              {"index_theorem_density", r.index_theorem_density},
              {"smith_density_paper", r.smith_density_paper},
              {"smith_density_standard", r.smith_density_standard},
              {"ricci_max_eigenvalue", r.ricci_max_eigenvalue},
              {"discrepancy_flag", r.discrepancy_flag},
              {"volume", r.volume ? json(*r.volume) : json(nullptr)},
              {"total_index", r.total_index ? json(*r.total_index) : json(nullptr)}};
  return out;
}

}  // namespace liestab
