#include "liestab/lie_algebra.hpp"

#include "liestab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace liestab {

LieAlgebra::LieAlgebra(std::string name, int dim, std::vector<double> constants)
    : name_(std::move(name)), dim_(dim), c_(std::move(constants)) {
  if (dim_ < 1) throw StructuralError("algebra '" + name_ + "': dimension must be positive");
  const auto expected = static_cast<std::size_t>(dim_) * dim_ * dim_;
  if (c_.size() != expected) {
    throw StructuralError("algebra '" + name_ + "': structure tensor has " +
                          std::to_string(c_.size()) + " entries, expected " +
                          std::to_string(expected));
  }
  for (double v : c_) {
    if (!std::isfinite(v)) throw StructuralError("algebra '" + name_ + "': non-finite structure constant");
  }
}

LieAlgebra LieAlgebra::abelian(std::string name, int dim) {
  if (dim < 1) throw StructuralError("abelian algebra: dimension must be positive");
  return LieAlgebra(std::move(name), dim,
                    std::vector<double>(static_cast<std::size_t>(dim) * dim * dim, 0.0));
}

double LieAlgebra::max_constant() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

double LieAlgebra::tolerance() const { return kDefaultTolerance * std::max(1.0, max_constant()); }

Matrix LieAlgebra::ad(int i) const {
  Matrix a(dim_, dim_);
  for (int j = 0; j < dim_; ++j)
    for (int k = 0; k < dim_; ++k) a(k, j) = c(i, j, k);
  return a;
}

Matrix LieAlgebra::ad(const Vector& x) const {
  if (x.size() != dim_) throw StructuralError("ad: vector has wrong dimension");
  Matrix a = Matrix::Zero(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] != 0.0) a += x[i] * ad(i);
  }
  return a;
}

Vector LieAlgebra::bracket(const Vector& x, const Vector& y) const {
  if (x.size() != dim_ || y.size() != dim_) {
    throw StructuralError("bracket: vector has wrong dimension");
  }
  Vector r = Vector::Zero(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (x[i] == 0.0) continue;
    for (int j = 0; j < dim_; ++j) {
      const double w = x[i] * y[j];
      if (w == 0.0) continue;
      for (int k = 0; k < dim_; ++k) r[k] += w * c(i, j, k);
    }
  }
  return r;
}

Metric::Metric(Matrix gram) : gram_(std::move(gram)) {
  if (gram_.rows() != gram_.cols() || gram_.rows() == 0) {
    throw StructuralError("metric: Gram matrix must be square and non-empty");
  }
  if (!gram_.allFinite()) throw StructuralError("metric: non-finite entry");
}

double Metric::norm(const Vector& x) const { return std::sqrt(std::max(0.0, norm_squared(x))); }

AlgebraReport validate_algebra(const LieAlgebra& alg) {
  const int n = alg.dim();
  AlgebraReport rep;
  rep.tolerance = alg.tolerance();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        rep.antisymmetry_residual =
            std::max(rep.antisymmetry_residual, std::abs(alg.c(i, j, k) + alg.c(j, i, k)));

  // sum over cyclic (i,j,k) of sum_l c_ijl c_lkm
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) {
            s += alg.c(i, j, l) * alg.c(l, k, m) + alg.c(j, k, l) * alg.c(l, i, m) +
                 alg.c(k, i, l) * alg.c(l, j, m);
          }
          rep.jacobi_residual = std::max(rep.jacobi_residual, std::abs(s));
        }
  rep.pass = rep.antisymmetry_residual <= rep.tolerance &&
             rep.jacobi_residual <= rep.tolerance * std::max(1.0, alg.max_constant());
  return rep;
}

MetricReport validate_metric(const LieAlgebra& alg, const Metric& m) {
  const int n = alg.dim();
  if (m.dim() != n) {
    throw StructuralError("metric dimension " + std::to_string(m.dim()) +
                          " does not match algebra dimension " + std::to_string(n));
  }
  const Matrix& g = m.gram();
  const double gscale = std::max(1.0, g.cwiseAbs().maxCoeff());
  const double asym = (g - g.transpose()).cwiseAbs().maxCoeff();
  if (asym > kDefaultTolerance * gscale) {
    throw StructuralError("metric is not symmetric (max |g - g^T| = " + std::to_string(asym) + ")");
  }

  MetricReport rep;
  rep.tolerance = alg.tolerance() * gscale;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(0.5 * (g + g.transpose()), Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = eig.eigenvalues().minCoeff();
  rep.positive_definite = rep.min_eigenvalue > kDefaultTolerance * gscale;

  // <[e_i,e_j], e_k> + <e_j, [e_i,e_k]>
  for (int i = 0; i < n; ++i) {
    const Matrix gad = g * alg.ad(i);  // (g ad_i)(k, j) = <e_k, [e_i, e_j]>
    const Matrix sym = gad + gad.transpose();
    rep.ad_invariance_residual = std::max(rep.ad_invariance_residual, sym.cwiseAbs().maxCoeff());
  }
  rep.pass = rep.positive_definite && rep.ad_invariance_residual <= rep.tolerance;
  rep.compact_type = rep.pass && validate_algebra(alg).pass;
  return rep;
}

OrthonormalFrame orthonormal_frame(const LieAlgebra& alg, const Metric& m) {
  if (m.dim() != alg.dim()) throw StructuralError("orthonormal_frame: metric dimension mismatch");
  Eigen::LLT<Matrix> llt(m.gram());
  if (llt.info() != Eigen::Success) {
    throw ValidationError("orthonormal_frame: metric is not positive definite");
  }
  // F = L^{-T}
  const Matrix l = llt.matrixL();
  Matrix f = l.transpose().triangularView<Eigen::Upper>().solve(
      Matrix::Identity(alg.dim(), alg.dim()));
  return OrthonormalFrame(std::move(f));
}

Matrix killing_form(const LieAlgebra& alg) {
  const int n = alg.dim();
  std::vector<Matrix> ads;
  ads.reserve(n);
  for (int i = 0; i < n; ++i) ads.push_back(alg.ad(i));
  Matrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) b(i, j) = b(j, i) = (ads[i] * ads[j]).trace();
  return b;
}

Center center(const LieAlgebra& alg) {
  const int n = alg.dim();
  // Row (j, k), column i: c(i, j, k). x is central iff M x = 0.
  Matrix stacked(n * n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) stacked(j * n + k, i) = alg.c(i, j, k);

  Center out;
  if (alg.max_constant() == 0.0) {
    out.basis = Matrix::Identity(n, n);
    out.is_abelian = true;
    return out;
  }
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol = alg.tolerance();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++rank;
  out.basis = svd.matrixV().rightCols(n - rank);
  out.is_abelian = rank == 0;
  return out;
}

MetrizedAlgebra direct_sum(const MetrizedAlgebra& a, const MetrizedAlgebra& b) {
  const int n1 = a.dim();
  const int n2 = b.dim();
  const int n = n1 + n2;
  std::vector<double> c(static_cast<std::size_t>(n) * n * n, 0.0);
  auto at = [n](int i, int j, int k) { return (static_cast<std::size_t>(i) * n + j) * n + k; };
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n1; ++j)
      for (int k = 0; k < n1; ++k) c[at(i, j, k)] = a.algebra.c(i, j, k);
  for (int i = 0; i < n2; ++i)
    for (int j = 0; j < n2; ++j)
      for (int k = 0; k < n2; ++k) c[at(n1 + i, n1 + j, n1 + k)] = b.algebra.c(i, j, k);

  Matrix g = Matrix::Zero(n, n);
  g.topLeftCorner(n1, n1) = a.metric.gram();
  g.bottomRightCorner(n2, n2) = b.metric.gram();
  return MetrizedAlgebra{LieAlgebra(a.algebra.name() + "+" + b.algebra.name(), n, std::move(c)),
                         Metric(std::move(g)),
                         a.abelian_factor_is_torus && b.abelian_factor_is_torus};
}

LieAlgebra change_basis(const LieAlgebra& alg, const Matrix& basis) {
  const int n = alg.dim();
  if (basis.rows() != n || basis.cols() != n) throw StructuralError("change_basis: basis must be n x n");
  Eigen::FullPivLU<Matrix> lu(basis);
  if (!lu.isInvertible()) throw ValidationError("change_basis: basis is singular");
  const Matrix inv = lu.inverse();
  std::vector<double> c(static_cast<std::size_t>(n) * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Vector b = inv * alg.bracket(basis.col(i), basis.col(j));
      for (int k = 0; k < n; ++k) c[(static_cast<std::size_t>(i) * n + j) * n + k] = b[k];
    }
  return LieAlgebra(alg.name(), n, std::move(c));
}

}  // namespace liestab
