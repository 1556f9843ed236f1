#pragma once

#include "liestab/lie_algebra.hpp"

#include <string>
#include <vector>

namespace liestab {

/// Built-in metrized algebras: su2, so3, torus_n(m), su2xsu2, heisenberg.
///
/// su2 and so3 use c(i,j,k) = epsilon_ijk, torus_n(m) is abelian of dimension
/// m; all ship with the identity metric. heisenberg ([e1,e2] = e3) also ships
/// with the identity metric, which is not ad-invariant.
/// Throws StructuralError for unknown names.
MetrizedAlgebra registry(const std::string& name);

/// Registry names joined by '+', folded with direct_sum.
MetrizedAlgebra resolve_registry_expression(const std::string& expr);

std::vector<std::string> registry_names();

}  // namespace liestab
