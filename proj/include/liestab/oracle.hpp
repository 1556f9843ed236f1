#pragma once

#include "liestab/morphism.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace liestab {

// Ground-truth numerics on concrete compact groups.
//
// Group points are coordinate vectors: torus factors store angles in
// [0, L_i), SU(2) factors store a unit quaternion (w, x, y, z), products
// concatenate their factors. The su(2) basis is e_k = (i, j, k)_k / 2 so
// that [e_1, e_2] = e_3; with metric mu * I this is the 3-sphere of radius
// 2 sqrt(mu).
//
// Variations are exponential, f_t(g) = f(g) exp(t W(g)). For a bi-invariant
// target t -> p exp(t w) is a geodesic, so these coincide with geodesic
// variations and their second derivative at t = 0 is the index form.

class GroupRealization {
 public:
  enum class Kind { Torus, SU2, Product };

  static GroupRealization torus(std::vector<double> sides);
  static GroupRealization su2(double metric_scale = 1.0);
  static GroupRealization product(std::vector<GroupRealization> factors);

  /// Infers a realization: abelian -> torus with 2 pi sides, epsilon
  /// constants with a scalar metric -> SU(2), contiguous block sums of
  /// those -> product. Throws ValidationError if none applies.
  static GroupRealization infer(const MetrizedAlgebra& ma);

  Kind kind() const { return kind_; }
  int algebra_dim() const;
  int point_dim() const;
  const std::vector<double>& sides() const { return sides_; }
  double metric_scale() const { return scale_; }
  const std::vector<GroupRealization>& factors() const { return factors_; }

  /// Riemannian volume in the induced metric.
  double volume() const;

  /// Throws ValidationError unless the metrized algebra matches this group.
  void check_compatible(const MetrizedAlgebra& ma) const;

  Vector identity() const;
  Vector exp(const Vector& x) const;
  Vector log(const Vector& p) const;
  /// Ad_p acting on algebra coordinates.
  Vector adjoint(const Vector& p, const Vector& x) const;

  /// Sample `index` of a Haar quadrature rule with `count` points.
  Vector haar_point(std::uint64_t count, std::uint64_t seed, std::uint64_t index,
                    std::uint64_t stream = 0) const;

 private:
  GroupRealization() = default;

  Kind kind_ = Kind::Torus;
  std::vector<double> sides_;
  double scale_ = 1.0;
  std::vector<GroupRealization> factors_;
};

struct HaarSamples {
  std::vector<Vector> points;
  double weight = 0.0;  // volume / N
};

HaarSamples haar_samples(const GroupRealization& r, std::uint64_t count, std::uint64_t seed);

/// Variation field on G1 with values in the codomain algebra, with its
/// derivatives along the domain orthonormal frame,
/// derivative(g, j) = d/ds W(g exp(s E_j)) at s = 0.
struct SampledField {
  std::function<Vector(const Vector&)> value;
  std::function<Vector(const Vector&, int)> derivative;
  bool left_invariant = false;
  Vector constant;  // set when left_invariant

  static SampledField invariant(Vector w);
  static SampledField general(std::function<Vector(const Vector&)> value,
                              std::function<Vector(const Vector&, int)> derivative);
};

/// builtin:sin_theta1_e<k>  W(g) = sin(theta_1) e_k   (torus domains)
/// builtin:q0_e<k>          W(q) = q_w e_k            (SU(2) domains)
/// k is 1-based. Throws StructuralError for unknown names.
SampledField builtin_field(const std::string& name, const Homomorphism& h,
                           const GroupRealization& domain);

struct QuadratureOptions {
  std::uint64_t samples = 10000;
  std::uint64_t seed = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

/// 1/2 sum_j |phi E_j|^2_{g2}.
double energy_density(const Homomorphism& h);

double energy_quadrature(const Homomorphism& h, const GroupRealization& r1,
                         const QuadratureOptions& opt);

double variation_energy(const Homomorphism& h, const GroupRealization& r1,
                        const GroupRealization& r2, const SampledField& w, double t,
                        const QuadratureOptions& opt);
double variation_energy(const Homomorphism& h, const GroupRealization& r1,
                        const SampledField& w, double t, const QuadratureOptions& opt);

struct FiniteDifference {
  double energy = 0.0;  // E(0)
  double first = 0.0;   // dE/dt
  double second = 0.0;  // d2E/dt2
};

/// Central differences of variation_energy. Requires 0 < step <= 0.1.
FiniteDifference second_variation_fd(const Homomorphism& h, const GroupRealization& r1,
                                     const GroupRealization& r2, const SampledField& w,
                                     double step, const QuadratureOptions& opt);
FiniteDifference second_variation_fd(const Homomorphism& h, const GroupRealization& r1,
                                     const SampledField& w, double step,
                                     const QuadratureOptions& opt);

/// Closed-form second variation by quadrature of
/// sum_j |dW_j|^2 + <dW_j, [phi E_j, W]>, independent of the energy path.
double smith_quadrature(const Homomorphism& h, const GroupRealization& r1,
                        const SampledField& w, const QuadratureOptions& opt);

/// Left-trivialized differential of exp in an algebra:
/// sum_k (-1)^k / (k+1)! ad_x^k y.
Vector dexp_left(const LieAlgebra& alg, const Vector& x, const Vector& y);

/// Deterministic pairwise sum.
double pairwise_sum(const std::vector<double>& values);

}  // namespace liestab
