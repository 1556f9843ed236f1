#include "liestab/registry.hpp"

#include "liestab/errors.hpp"

#include <optional>
#include <regex>

namespace liestab {
namespace {

LieAlgebra epsilon_algebra(std::string name) {
  std::vector<double> c(27, 0.0);
  auto set = [&c](int i, int j, int k, double v) { c[(i * 3 + j) * 3 + k] = v; };
  set(0, 1, 2, 1.0);
  set(1, 2, 0, 1.0);
  set(2, 0, 1, 1.0);
  set(1, 0, 2, -1.0);
  set(2, 1, 0, -1.0);
  set(0, 2, 1, -1.0);
  return LieAlgebra(std::move(name), 3, std::move(c));
}

LieAlgebra heisenberg_algebra() {
  std::vector<double> c(27, 0.0);
  c[(0 * 3 + 1) * 3 + 2] = 1.0;
  c[(1 * 3 + 0) * 3 + 2] = -1.0;
  return LieAlgebra("heisenberg", 3, std::move(c));
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

}  // namespace

MetrizedAlgebra registry(const std::string& name) {
  if (name == "su2" || name == "so3") {
    return {epsilon_algebra(name), Metric::identity(3), true};
  }
  if (name == "su2xsu2") {
    auto s = registry("su2");
    auto sum = direct_sum(s, s);
    return {LieAlgebra("su2xsu2", 6, sum.algebra.constants()), sum.metric, true};
  }
  if (name == "heisenberg") {
    return {heisenberg_algebra(), Metric::identity(3), true};
  }
  static const std::regex torus(R"(torus_n\((\d+)\))");
  std::smatch m;
  if (std::regex_match(name, m, torus)) {
    const int dim = std::stoi(m[1].str());
    if (dim < 1) throw StructuralError("registry: torus_n needs a positive dimension");
    return {LieAlgebra::abelian(name, dim), Metric::identity(dim), true};
  }
  throw StructuralError("registry: unknown algebra '" + name + "'");
}

MetrizedAlgebra resolve_registry_expression(const std::string& expr) {
  std::size_t start = 0;
  std::optional<MetrizedAlgebra> acc;
  while (true) {
    const auto plus = expr.find('+', start);
    const auto part = trim(expr.substr(start, plus == std::string::npos ? std::string::npos
                                                                         : plus - start));
    if (part.empty()) throw StructuralError("registry: empty term in '" + expr + "'");
    auto next = registry(part);
    acc = acc ? direct_sum(*acc, next) : std::move(next);
    if (plus == std::string::npos) break;
    start = plus + 1;
  }
  return *acc;
}

std::vector<std::string> registry_names() {
  return {"su2", "so3", "torus_n(m)", "su2xsu2", "heisenberg"};
}

}  // namespace liestab
