#include "liestab/variation.hpp"

#include "liestab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace liestab {
namespace {

// sum_j R_conv(A_j, y) A_j with A_j = phi E_j.
Vector curvature_trace(const Homomorphism& h, CurvatureConvention conv, const Vector& y) {
  const auto frame = orthonormal_frame(h.domain());
  Vector out = Vector::Zero(h.codomain().dim());
  for (int j = 0; j < frame.size(); ++j) {
    const Vector a = h.push(frame[j]);
    out += curvature_tensor(h.codomain(), conv, a, y, a);
  }
  return out;
}

// 1/4 sum_j [A_j, [A_j, y]]
Vector rough_laplacian(const Homomorphism& h, const Vector& y) {
  const auto frame = orthonormal_frame(h.domain());
  const auto& alg = h.codomain().algebra;
  Vector out = Vector::Zero(h.codomain().dim());
  for (int j = 0; j < frame.size(); ++j) {
    const Vector a = h.push(frame[j]);
    out += alg.bracket(a, alg.bracket(a, y));
  }
  return 0.25 * out;
}

// Unit vector of the eigenspace span(V) with the most leading zero
// coordinates, first nonzero coordinate positive.
Vector canonical_unit_vector(const Matrix& v, const Metric& g) {
  const int n = static_cast<int>(v.rows());
  const int d = static_cast<int>(v.cols());
  Vector coeff = Vector::Unit(d, 0);
  for (int k = n - 1; k >= 1; --k) {
    const Matrix top = v.topRows(k);
    Eigen::JacobiSVD<Matrix> svd(top, Eigen::ComputeFullV);
    int rank = 0;
    for (int i = 0; i < svd.singularValues().size(); ++i)
      if (svd.singularValues()[i] > 1e-9) ++rank;
    if (rank < d) {
      coeff = svd.matrixV().col(d - 1);
      break;
    }
  }
  Vector w = v * coeff;
  const double scale = w.cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i)
    if (std::abs(w[i]) <= 1e-13 * scale) w[i] = 0.0;
  w /= g.norm(w);
  for (int i = 0; i < n; ++i) {
    if (w[i] != 0.0) {
      if (w[i] < 0.0) w = -w;
      break;
    }
  }
  return w;
}

}  // namespace

const char* to_string(Verdict v) { return v == Verdict::Unstable ? "UNSTABLE" : "FLAT_TORUS"; }

Vector weitzenboeck_S(const Homomorphism& h, CurvatureConvention conv, const Vector& x) {
  const Matrix ric = ricci(h.domain()).op;
  return -curvature_trace(h, conv, h.push(x)) + h.push(ric * x);
}

Vector nabla2_pushforward_direct(const Homomorphism& h, const Vector& x) {
  return rough_laplacian(h, h.push(x));
}

Vector nabla2_pushforward_chain(const Homomorphism& h, CurvatureConvention conv, const Vector& x) {
  const Matrix ric = ricci(h.domain()).op;
  return -curvature_trace(h, conv, h.push(x)) + 2.0 * h.push(ric * x);
}

double smith_index_density(const Homomorphism& h, CurvatureConvention conv, const Vector& v) {
  const Vector integrand = rough_laplacian(h, v) + curvature_trace(h, conv, v);
  return -h.codomain().metric.inner(integrand, v);
}

double index_theorem_density(const Homomorphism& h, const Vector& x) {
  const Matrix ric = ricci(h.domain()).op;
  return -2.0 * h.domain().metric.inner(ric * x, x);
}

double stability_tolerance(const MetrizedAlgebra& domain) {
  return kDefaultTolerance * std::max(1.0, std::abs(ricci(domain).scalar));
}

StabilityReport stability_report(const Homomorphism& h, std::optional<double> volume) {
  require_valid(h);
  if (volume && !(*volume > 0.0)) throw ValidationError("stability_report: volume must be positive");

  const auto& dom = h.domain();
  const auto frame = orthonormal_frame(dom);
  const Matrix& f = frame.matrix();
  const Matrix ric = ricci(dom).op;
  // Ric+ in frame coordinates is symmetric: F^{-1} Ric+ F.
  const Matrix f_inv = f.inverse();
  Matrix sym = f_inv * ric * f;
  sym = 0.5 * (sym + sym.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> eig(sym);
  const Vector& lambda = eig.eigenvalues();
  const int n = dom.dim();
  const double top = lambda[n - 1];
  const double tol = stability_tolerance(dom);

  StabilityReport rep;
  rep.ricci_max_eigenvalue = top;
  rep.volume = volume;
  Vector probe;
  if (top > tol) {
    rep.verdict = Verdict::Unstable;
    std::vector<int> cols;
    for (int i = 0; i < n; ++i)
      if (lambda[i] >= top - tol) cols.push_back(i);
    Matrix eigenspace(n, static_cast<int>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c)
      eigenspace.col(static_cast<int>(c)) = f * eig.eigenvectors().col(cols[c]);
    rep.witness = canonical_unit_vector(eigenspace, dom.metric);
    probe = *rep.witness;
    rep.index_theorem_density = -2.0 * top + 0.0;
  } else {
    if (!dom.abelian_factor_is_torus) {
      throw ValidationError(
          "flat non-compact domain: the domain is abelian but declared a vector space, not a torus");
    }
    rep.verdict = Verdict::FlatTorus;
    probe = frame[0];
    rep.index_theorem_density = index_theorem_density(h, probe) + 0.0;
  }
  const Vector v = h.push(probe);
  rep.smith_density_paper = smith_index_density(h, CurvatureConvention::Paper, v) + 0.0;
  rep.smith_density_standard = smith_index_density(h, CurvatureConvention::Standard, v) + 0.0;
  rep.discrepancy_flag =
      rep.index_theorem_density < -tol && std::abs(rep.smith_density_paper) <= tol;
  if (volume) rep.total_index = rep.index_theorem_density * *volume;
  return rep;
}

}  // namespace liestab
