#pragma once

#include "liestab/curvature.hpp"
#include "liestab/morphism.hpp"

#include <optional>

namespace liestab {

// Second variation of energy for a homomorphism between groups with
// bi-invariant metrics, restricted to left-invariant variation fields.
// Every integrand here is constant over G1, so values are densities per
// unit volume. A_j below denotes phi E_j for an orthonormal frame E_j of G1.

enum class Verdict { Unstable, FlatTorus };

const char* to_string(Verdict v);

struct StabilityReport {
  Verdict verdict = Verdict::Unstable;
  std::optional<Vector> witness;
  double index_theorem_density = 0.0;
  double smith_density_paper = 0.0;
  double smith_density_standard = 0.0;
  double ricci_max_eigenvalue = 0.0;
  bool discrepancy_flag = false;
  std::optional<double> volume;
  std::optional<double> total_index;
};

/// S(x) = -sum_j R_conv(A_j, phi x) A_j + phi Ric+(x).
Vector weitzenboeck_S(const Homomorphism& h, CurvatureConvention conv, const Vector& x);

/// Rough Laplacian of phi x, computed from the connection: 1/4 sum_j [A_j, [A_j, phi x]].
Vector nabla2_pushforward_direct(const Homomorphism& h, const Vector& x);

/// The closed chain expression -sum_j R_conv(A_j, phi x) A_j + 2 phi Ric+(x),
/// evaluated literally. Its relation to the direct path is reported, not assumed.
Vector nabla2_pushforward_chain(const Homomorphism& h, CurvatureConvention conv,
                                const Vector& x);

/// -< 1/4 sum_j [A_j,[A_j,v]] + sum_j R_conv(A_j, v) A_j , v >_{g2}.
double smith_index_density(const Homomorphism& h, CurvatureConvention conv, const Vector& v);

/// -2 Ric+_{g1}(x, x).
double index_theorem_density(const Homomorphism& h, const Vector& x);

/// Instability threshold on the largest Ric+ eigenvalue of the domain.
double stability_tolerance(const MetrizedAlgebra& domain);

/// Throws ValidationError if h does not validate, or if the domain is flat
/// but declared non-compact.
StabilityReport stability_report(const Homomorphism& h,
                                 std::optional<double> volume = std::nullopt);

}  // namespace liestab
