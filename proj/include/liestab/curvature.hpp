#pragma once

#include "liestab/lie_algebra.hpp"

namespace liestab {

/// Sign of the curvature tensor of a bi-invariant metric.
///   Paper:    R(X,Y)Z = +1/4 [[X,Y],Z]
///   Standard: R(X,Y)Z = -1/4 [[X,Y],Z], so that <R(X,Y)Y,X> = 1/4 |[X,Y]|^2.
enum class CurvatureConvention { Paper, Standard };

const char* to_string(CurvatureConvention conv);

/// Nonnegative Ricci operator Ric+ = -1/4 sum_j ad_{E_j}^2 and its trace.
struct RicciData {
  Matrix op;
  double scalar = 0.0;
};

/// Levi-Civita connection on left-invariant fields: 1/2 [x, y].
Vector levi_civita(const MetrizedAlgebra& ma, const Vector& x, const Vector& y);

Vector curvature_tensor(const MetrizedAlgebra& ma, CurvatureConvention conv,
                        const Vector& x, const Vector& y, const Vector& z);

/// Sectional curvature of span{x, y}. Throws ValidationError on a degenerate plane.
double sectional(const MetrizedAlgebra& ma, const Vector& x, const Vector& y);

RicciData ricci(const MetrizedAlgebra& ma);

/// Matrix of X -> sum_j R_conv(X, E_j) E_j. Equals +Ric+ under Standard and
/// -Ric+ under Paper.
Matrix ricci_via_trace(const MetrizedAlgebra& ma, CurvatureConvention conv);

bool is_flat(const MetrizedAlgebra& ma);

}  // namespace liestab
