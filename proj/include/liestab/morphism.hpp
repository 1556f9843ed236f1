#pragma once

#include "liestab/lie_algebra.hpp"

namespace liestab {

/// Differential at the identity of a Lie group homomorphism f: G1 -> G2,
/// phi = f_* as an n2 x n1 matrix.
class Homomorphism {
 public:
  /// Throws StructuralError if phi is not codomain.dim() x domain.dim().
  Homomorphism(MetrizedAlgebra domain, MetrizedAlgebra codomain, Matrix phi);

  const MetrizedAlgebra& domain() const { return domain_; }
  const MetrizedAlgebra& codomain() const { return codomain_; }
  const Matrix& phi() const { return phi_; }

  Vector push(const Vector& x) const { return phi_ * x; }

 private:
  MetrizedAlgebra domain_;
  MetrizedAlgebra codomain_;
  Matrix phi_;
};

struct HomReport {
  double hom_residual = 0.0;       // max |phi[e_i,e_j] - [phi e_i, phi e_j]|
  double isometry_residual = 0.0;  // max |phi^T g2 phi - g1|
  int rank = 0;
  double tolerance = 0.0;
  bool pass = false;
};

struct Tension {
  Vector tau;
  double norm = 0.0;
};

struct GeodesyReport {
  bool totally_geodesic = false;
  double max_residual = 0.0;  // max_{i,j} |B_f(E_i, E_j)|_{g2}
};

HomReport validate_hom(const Homomorphism& h);

/// B_f(x, y) = 1/2 ([phi x, phi y] - phi [x, y]).
Vector second_fundamental_form(const Homomorphism& h, const Vector& x, const Vector& y);

Tension tension(const Homomorphism& h);

GeodesyReport is_totally_geodesic(const Homomorphism& h);

/// Throws ValidationError naming the failing residual unless both metrized
/// algebras and the homomorphism validate.
void require_valid(const Homomorphism& h);

}  // namespace liestab
