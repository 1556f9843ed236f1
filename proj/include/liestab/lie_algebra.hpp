#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace liestab {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kDefaultTolerance = 1e-9;

/// Finite-dimensional real Lie algebra in a fixed basis e_0..e_{n-1},
/// [e_i, e_j] = sum_k c(i, j, k) e_k.
///
/// The constructor only checks the tensor shape; the algebra axioms are
/// checked by validate_algebra() so that invalid tensors can be reported on.
class LieAlgebra {
 public:
  LieAlgebra(std::string name, int dim, std::vector<double> constants);

  static LieAlgebra abelian(std::string name, int dim);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  double c(int i, int j, int k) const { return c_[index(i, j, k)]; }
  const std::vector<double>& constants() const { return c_; }

  /// Largest |c(i,j,k)|.
  double max_constant() const;

  /// Tolerance relative to the largest structure constant (never below the
  /// absolute default).
  double tolerance() const;

  /// Matrix of ad_{e_i}: column j holds [e_i, e_j].
  Matrix ad(int i) const;
  Matrix ad(const Vector& x) const;

  Vector bracket(const Vector& x, const Vector& y) const;

  Vector basis_vector(int i) const { return Vector::Unit(dim_, i); }

 private:
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * dim_ + j) * dim_ + k;
  }

  std::string name_;
  int dim_;
  std::vector<double> c_;
};

/// Inner product on the algebra, as a Gram matrix in the defining basis.
class Metric {
 public:
  explicit Metric(Matrix gram);

  static Metric identity(int dim) { return Metric(Matrix::Identity(dim, dim)); }

  const Matrix& gram() const { return gram_; }
  int dim() const { return static_cast<int>(gram_.rows()); }

  double inner(const Vector& x, const Vector& y) const { return x.dot(gram_ * y); }
  double norm_squared(const Vector& x) const { return inner(x, x); }
  double norm(const Vector& x) const;

 private:
  Matrix gram_;
};

/// A Lie algebra together with an inner product. The torus flag records
/// whether abelian summands are compact (tori) or Euclidean factors at the
/// group level; it cannot be inferred from structure constants.
struct MetrizedAlgebra {
  LieAlgebra algebra;
  Metric metric;
  bool abelian_factor_is_torus = true;

  int dim() const { return algebra.dim(); }
};

/// Columns are the frame vectors E_j in the defining basis; F^T g F = I.
class OrthonormalFrame {
 public:
  explicit OrthonormalFrame(Matrix columns) : f_(std::move(columns)) {}

  const Matrix& matrix() const { return f_; }
  int size() const { return static_cast<int>(f_.cols()); }
  Vector operator[](int j) const { return f_.col(j); }

 private:
  Matrix f_;
};

struct AlgebraReport {
  double antisymmetry_residual = 0.0;
  double jacobi_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct MetricReport {
  bool positive_definite = false;
  double min_eigenvalue = 0.0;
  double ad_invariance_residual = 0.0;
  double tolerance = 0.0;
  // An SPD ad-invariant metric exists only on compact-type algebras
  // (compact semisimple plus abelian), so a pass certifies that.
  bool compact_type = false;
  bool pass = false;
};

struct Center {
  Matrix basis;  // n x d, orthonormal columns in the Euclidean sense
  bool is_abelian = false;

  int dim() const { return static_cast<int>(basis.cols()); }
};

AlgebraReport validate_algebra(const LieAlgebra& alg);

/// Throws StructuralError on dimension mismatch or a non-symmetric Gram matrix.
MetricReport validate_metric(const LieAlgebra& alg, const Metric& m);

/// Cholesky g = L L^T, F = L^{-T}. Throws ValidationError if g is not SPD.
OrthonormalFrame orthonormal_frame(const LieAlgebra& alg, const Metric& m);
inline OrthonormalFrame orthonormal_frame(const MetrizedAlgebra& ma) {
  return orthonormal_frame(ma.algebra, ma.metric);
}

/// B(x, y) = trace(ad_x ad_y).
Matrix killing_form(const LieAlgebra& alg);

Center center(const LieAlgebra& alg);

MetrizedAlgebra direct_sum(const MetrizedAlgebra& a, const MetrizedAlgebra& b);

/// Re-expresses the structure constants in another basis (columns of `basis`).
LieAlgebra change_basis(const LieAlgebra& alg, const Matrix& basis);

}  // namespace liestab
