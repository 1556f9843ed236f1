#include "liestab/curvature.hpp"

#include "liestab/errors.hpp"

#include <cmath>

namespace liestab {

const char* to_string(CurvatureConvention conv) {
  return conv == CurvatureConvention::Paper ? "paper" : "standard";
}

Vector levi_civita(const MetrizedAlgebra& ma, const Vector& x, const Vector& y) {
  return 0.5 * ma.algebra.bracket(x, y);
}

Vector curvature_tensor(const MetrizedAlgebra& ma, CurvatureConvention conv, const Vector& x,
                        const Vector& y, const Vector& z) {
  const double sign = conv == CurvatureConvention::Paper ? 0.25 : -0.25;
  const auto& alg = ma.algebra;
  return sign * alg.bracket(alg.bracket(x, y), z);
}

double sectional(const MetrizedAlgebra& ma, const Vector& x, const Vector& y) {
  const auto& g = ma.metric;
  const double xx = g.norm_squared(x);
  const double yy = g.norm_squared(y);
  const double xy = g.inner(x, y);
  const double area2 = xx * yy - xy * xy;
  if (area2 <= kDefaultTolerance * xx * yy || area2 <= 0.0) {
    throw ValidationError("sectional: degenerate plane (x and y are linearly dependent)");
  }
  return 0.25 * g.norm_squared(ma.algebra.bracket(x, y)) / area2;
}

RicciData ricci(const MetrizedAlgebra& ma) {
  const auto frame = orthonormal_frame(ma);
  const int n = ma.dim();
  Matrix sum = Matrix::Zero(n, n);
  for (int j = 0; j < frame.size(); ++j) {
    const Matrix a = ma.algebra.ad(frame[j]);
    sum += a * a;
  }
  RicciData out;
  out.op = -0.25 * sum;
  out.scalar = out.op.trace();
  return out;
}

Matrix ricci_via_trace(const MetrizedAlgebra& ma, CurvatureConvention conv) {
  const auto frame = orthonormal_frame(ma);
  const int n = ma.dim();
  Matrix out = Matrix::Zero(n, n);
  for (int col = 0; col < n; ++col) {
    const Vector x = ma.algebra.basis_vector(col);
    for (int j = 0; j < frame.size(); ++j) {
      out.col(col) += curvature_tensor(ma, conv, x, frame[j], frame[j]);
    }
  }
  return out;
}

bool is_flat(const MetrizedAlgebra& ma) {
  return ma.algebra.max_constant() <= kDefaultTolerance;
}

}  // namespace liestab
