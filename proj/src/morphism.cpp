#include "liestab/morphism.hpp"

#include "liestab/errors.hpp"

#include <algorithm>
#include <sstream>

namespace liestab {

Homomorphism::Homomorphism(MetrizedAlgebra domain, MetrizedAlgebra codomain, Matrix phi)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), phi_(std::move(phi)) {
  if (phi_.rows() != codomain_.dim() || phi_.cols() != domain_.dim()) {
    std::ostringstream msg;
    msg << "homomorphism: phi is " << phi_.rows() << "x" << phi_.cols() << ", expected "
        << codomain_.dim() << "x" << domain_.dim();
    throw StructuralError(msg.str());
  }
  if (!phi_.allFinite()) throw StructuralError("homomorphism: non-finite entry in phi");
}

HomReport validate_hom(const Homomorphism& h) {
  const auto& a1 = h.domain().algebra;
  const auto& a2 = h.codomain().algebra;
  const Matrix& phi = h.phi();
  const int n1 = a1.dim();

  HomReport rep;
  const double phi_scale = std::max(1.0, phi.cwiseAbs().maxCoeff());
  rep.tolerance = kDefaultTolerance * std::max(a1.max_constant(), a2.max_constant()) *
                      phi_scale * phi_scale +
                  kDefaultTolerance;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j) {
      const Vector lhs = phi * a1.bracket(a1.basis_vector(i), a1.basis_vector(j));
      const Vector rhs = a2.bracket(phi.col(i), phi.col(j));
      rep.hom_residual = std::max(rep.hom_residual, (lhs - rhs).cwiseAbs().maxCoeff());
    }
  const Matrix pullback = phi.transpose() * h.codomain().metric.gram() * phi;
  rep.isometry_residual = (pullback - h.domain().metric.gram()).cwiseAbs().maxCoeff();

  Eigen::JacobiSVD<Matrix> svd(phi);
  const auto& sv = svd.singularValues();
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > kDefaultTolerance * phi_scale) ++rep.rank;

  const double iso_tol = kDefaultTolerance * std::max(1.0, pullback.cwiseAbs().maxCoeff());
  rep.pass = rep.hom_residual <= rep.tolerance && rep.isometry_residual <= iso_tol &&
             rep.rank == n1;
  return rep;
}

Vector second_fundamental_form(const Homomorphism& h, const Vector& x, const Vector& y) {
  const Vector px = h.push(x);
  const Vector py = h.push(y);
  return 0.5 * (h.codomain().algebra.bracket(px, py) - h.push(h.domain().algebra.bracket(x, y)));
}

Tension tension(const Homomorphism& h) {
  const auto frame = orthonormal_frame(h.domain());
  Tension t{Vector::Zero(h.codomain().dim()), 0.0};
  for (int j = 0; j < frame.size(); ++j) t.tau += second_fundamental_form(h, frame[j], frame[j]);
  t.norm = h.codomain().metric.norm(t.tau);
  return t;
}

GeodesyReport is_totally_geodesic(const Homomorphism& h) {
  const auto frame = orthonormal_frame(h.domain());
  GeodesyReport rep;
  for (int i = 0; i < frame.size(); ++i)
    for (int j = 0; j < frame.size(); ++j) {
      const Vector b = second_fundamental_form(h, frame[i], frame[j]);
      rep.max_residual = std::max(rep.max_residual, h.codomain().metric.norm(b));
    }
  rep.totally_geodesic = rep.max_residual <= validate_hom(h).tolerance;
  return rep;
}

namespace {

void require_pair(const MetrizedAlgebra& ma, const char* role) {
  const auto ar = validate_algebra(ma.algebra);
  if (!ar.pass) {
    std::ostringstream msg;
    msg << role << " algebra '" << ma.algebra.name()
        << "' is not a Lie algebra: antisymmetry residual " << ar.antisymmetry_residual
        << ", Jacobi residual " << ar.jacobi_residual;
    throw ValidationError(msg.str());
  }
  const auto mr = validate_metric(ma.algebra, ma.metric);
  if (!mr.pass) {
    std::ostringstream msg;
    msg << role << " metric on '" << ma.algebra.name() << "' is not bi-invariant: ";
    if (!mr.positive_definite) msg << "not positive definite (min eigenvalue " << mr.min_eigenvalue << ")";
    else msg << "ad-invariance residual " << mr.ad_invariance_residual;
    throw ValidationError(msg.str());
  }
}

}  // namespace

void require_valid(const Homomorphism& h) {
  require_pair(h.domain(), "domain");
  require_pair(h.codomain(), "codomain");
  const auto rep = validate_hom(h);
  if (!rep.pass) {
    std::ostringstream msg;
    msg << "not an isometric immersive homomorphism: hom residual " << rep.hom_residual
        << ", isometry residual " << rep.isometry_residual << ", rank " << rep.rank << " of "
        << h.domain().dim();
    throw ValidationError(msg.str());
  }
}

}  // namespace liestab
