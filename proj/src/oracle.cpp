#include "liestab/oracle.hpp"

#include "liestab/counter_rng.hpp"
#include "liestab/errors.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <regex>
#include <sstream>
#include <thread>

namespace liestab {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool is_epsilon_block(const LieAlgebra& alg, int off, double tol) {
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) {
        double eps = 0.0;
        if (i != j && j != k && i != k) eps = ((j - i + 3) % 3 == 1) ? 1.0 : -1.0;
        if (std::abs(alg.c(off + i, off + j, off + k) - eps) > tol) return false;
      }
  return true;
}

// Block [off, off+len) with no structure constants coupling it to the rest.
bool is_isolated(const LieAlgebra& alg, int off, int len, double tol) {
  const int n = alg.dim();
  auto in = [&](int i) { return i >= off && i < off + len; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const bool all_in = in(i) && in(j) && in(k);
        const bool touches = in(i) || in(j) || in(k);
        if (touches && !all_in && std::abs(alg.c(i, j, k)) > tol) return false;
      }
  return true;
}

MetrizedAlgebra restrict_block(const MetrizedAlgebra& ma, int off, int len) {
  std::vector<double> c(static_cast<std::size_t>(len) * len * len);
  for (int i = 0; i < len; ++i)
    for (int j = 0; j < len; ++j)
      for (int k = 0; k < len; ++k)
        c[(static_cast<std::size_t>(i) * len + j) * len + k] = ma.algebra.c(off + i, off + j, off + k);
  return {LieAlgebra(ma.algebra.name() + "[block]", len, std::move(c)),
          Metric(ma.metric.gram().block(off, off, len, len)), ma.abelian_factor_is_torus};
}

std::uint64_t gcd64(std::uint64_t a, std::uint64_t b) { return std::gcd(a, b); }

// Korobov generator close to N / golden ratio and coprime to N.
std::uint64_t korobov_generator(std::uint64_t count) {
  if (count <= 2) return 1;
  const auto target = static_cast<std::uint64_t>(std::llround(count * 0.6180339887498949));
  for (std::uint64_t d = 0; d < count; ++d) {
    for (std::uint64_t a : {target + d, target - d}) {
      if (a >= 1 && a < count && gcd64(a, count) == 1) return a;
    }
  }
  return 1;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

double wrap(double x, double period) {
  double r = std::fmod(x, period);
  if (r < 0.0) r += period;
  if (r >= period) r = 0.0;
  return r;
}

Eigen::Quaterniond as_quaternion(const Vector& p) { return {p[0], p[1], p[2], p[3]}; }

std::vector<double> evaluate(std::uint64_t count, unsigned threads,
                             const std::function<double(std::uint64_t)>& fn) {
  std::vector<double> values(count);
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(count, 1)));
  if (workers <= 1) {
    for (std::uint64_t i = 0; i < count; ++i) values[i] = fn(i);
    return values;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    const std::uint64_t chunk = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          const std::uint64_t lo = w * chunk;
          const std::uint64_t hi = std::min(count, lo + chunk);
          for (std::uint64_t i = lo; i < hi; ++i) values[i] = fn(i);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return values;
}

double pairwise(const double* v, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += v[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise(v, half) + pairwise(v + half, n - half);
}

std::vector<Vector> frame_images(const Homomorphism& h) {
  const auto frame = orthonormal_frame(h.domain());
  std::vector<Vector> a;
  for (int j = 0; j < frame.size(); ++j) a.push_back(h.push(frame[j]));
  return a;
}

Vector checked(Vector v, int dim, const char* what) {
  if (v.size() != dim) throw StructuralError(std::string(what) + ": wrong dimension");
  if (!v.allFinite()) throw ValidationError(std::string(what) + ": non-finite value at a sample point");
  return v;
}

}  // namespace

GroupRealization GroupRealization::torus(std::vector<double> sides) {
  if (sides.empty()) throw StructuralError("torus realization needs at least one side");
  for (double s : sides)
    if (!(s > 0.0) || !std::isfinite(s)) throw StructuralError("torus side lengths must be positive");
  GroupRealization r;
  r.kind_ = Kind::Torus;
  r.sides_ = std::move(sides);
  return r;
}

GroupRealization GroupRealization::su2(double metric_scale) {
  if (!(metric_scale > 0.0)) throw StructuralError("su2 realization needs a positive metric scale");
  GroupRealization r;
  r.kind_ = Kind::SU2;
  r.scale_ = metric_scale;
  return r;
}

GroupRealization GroupRealization::product(std::vector<GroupRealization> factors) {
  if (factors.empty()) throw StructuralError("product realization needs factors");
  GroupRealization r;
  r.kind_ = Kind::Product;
  r.factors_ = std::move(factors);
  return r;
}

GroupRealization GroupRealization::infer(const MetrizedAlgebra& ma) {
  const auto& alg = ma.algebra;
  const int n = alg.dim();
  const double tol = alg.tolerance();
  std::vector<GroupRealization> parts;
  int p = 0;
  int torus_run = 0;
  auto flush = [&] {
    if (torus_run > 0) {
      parts.push_back(torus(std::vector<double>(torus_run, kTwoPi)));
      torus_run = 0;
    }
  };
  while (p < n) {
    if (p + 3 <= n && is_epsilon_block(alg, p, tol) && is_isolated(alg, p, 3, tol)) {
      flush();
      parts.push_back(su2(ma.metric.gram()(p, p)));
      p += 3;
    } else if (is_isolated(alg, p, 1, tol) && std::abs(alg.c(p, p, p)) <= tol) {
      ++torus_run;
      ++p;
    } else {
      throw ValidationError("no built-in group realization for algebra '" + alg.name() + "'");
    }
  }
  flush();
  GroupRealization r = parts.size() == 1 ? parts.front() : product(std::move(parts));
  r.check_compatible(ma);
  return r;
}

int GroupRealization::algebra_dim() const {
  switch (kind_) {
    case Kind::Torus: return static_cast<int>(sides_.size());
    case Kind::SU2: return 3;
    case Kind::Product: {
      int d = 0;
      for (const auto& f : factors_) d += f.algebra_dim();
      return d;
    }
  }
  return 0;
}

int GroupRealization::point_dim() const {
  switch (kind_) {
    case Kind::Torus: return static_cast<int>(sides_.size());
    case Kind::SU2: return 4;
    case Kind::Product: {
      int d = 0;
      for (const auto& f : factors_) d += f.point_dim();
      return d;
    }
  }
  return 0;
}

double GroupRealization::volume() const {
  switch (kind_) {
    case Kind::Torus: {
      double v = 1.0;
      for (double s : sides_) v *= s;
      return v;
    }
    case Kind::SU2: {
      // S^3 of radius 2 sqrt(mu): 2 pi^2 r^3
      const double radius = 2.0 * std::sqrt(scale_);
      return 2.0 * std::numbers::pi * std::numbers::pi * radius * radius * radius;
    }
    case Kind::Product: {
      double v = 1.0;
      for (const auto& f : factors_) v *= f.volume();
      return v;
    }
  }
  return 0.0;
}

void GroupRealization::check_compatible(const MetrizedAlgebra& ma) const {
  const auto& alg = ma.algebra;
  const double tol = alg.tolerance();
  if (alg.dim() != algebra_dim()) {
    std::ostringstream msg;
    msg << "realization of dimension " << algebra_dim() << " does not match algebra '"
        << alg.name() << "' of dimension " << alg.dim();
    throw ValidationError(msg.str());
  }
  const Matrix& g = ma.metric.gram();
  switch (kind_) {
    case Kind::Torus: {
      if (alg.max_constant() > tol) throw ValidationError("torus realization needs an abelian algebra");
      if ((g - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() > kDefaultTolerance) {
        throw ValidationError("torus realization needs the identity metric in angle coordinates");
      }
      return;
    }
    case Kind::SU2: {
      if (!is_epsilon_block(alg, 0, tol)) {
        throw ValidationError("su2 realization needs structure constants epsilon_ijk");
      }
      if ((g - scale_ * Matrix::Identity(3, 3)).cwiseAbs().maxCoeff() > kDefaultTolerance * scale_) {
        throw ValidationError("su2 realization needs the metric mu * identity with mu = " +
                              std::to_string(scale_));
      }
      return;
    }
    case Kind::Product: {
      int off = 0;
      for (const auto& f : factors_) {
        const int d = f.algebra_dim();
        if (!is_isolated(alg, off, d, tol)) {
          throw ValidationError("product realization: algebra does not split along the factors");
        }
        Matrix off_block = g.block(off, 0, d, g.cols());
        off_block.middleCols(off, d).setZero();
        if (off_block.cwiseAbs().maxCoeff() > kDefaultTolerance) {
          throw ValidationError("product realization: metric is not block diagonal");
        }
        f.check_compatible(restrict_block(ma, off, d));
        off += d;
      }
      return;
    }
  }
}

Vector GroupRealization::identity() const {
  switch (kind_) {
    case Kind::Torus: return Vector::Zero(point_dim());
    case Kind::SU2: return Vector::Unit(4, 0);
    case Kind::Product: {
      Vector p(point_dim());
      int off = 0;
      for (const auto& f : factors_) {
        p.segment(off, f.point_dim()) = f.identity();
        off += f.point_dim();
      }
      return p;
    }
  }
  return {};
}

Vector GroupRealization::exp(const Vector& x) const {
  if (x.size() != algebra_dim()) throw StructuralError("exp: wrong algebra dimension");
  switch (kind_) {
    case Kind::Torus: {
      Vector p(x.size());
      for (int i = 0; i < x.size(); ++i) p[i] = wrap(x[i], sides_[i]);
      return p;
    }
    case Kind::SU2: {
      const Eigen::Vector3d u = 0.5 * x;
      const double theta = u.norm();
      // sin(theta)/theta, series below 1e-4
      const double sinc = theta < 1e-4 ? 1.0 - theta * theta / 6.0 : std::sin(theta) / theta;
      Vector p(4);
      p[0] = std::cos(theta);
      p.tail(3) = sinc * u;
      return p;
    }
    case Kind::Product: {
      Vector p(point_dim());
      int a = 0;
      int q = 0;
      for (const auto& f : factors_) {
        p.segment(q, f.point_dim()) = f.exp(x.segment(a, f.algebra_dim()));
        a += f.algebra_dim();
        q += f.point_dim();
      }
      return p;
    }
  }
  return {};
}

Vector GroupRealization::log(const Vector& p) const {
  if (p.size() != point_dim()) throw StructuralError("log: wrong point dimension");
  switch (kind_) {
    case Kind::Torus: {
      Vector x(p.size());
      for (int i = 0; i < p.size(); ++i) {
        const double s = sides_[i];
        x[i] = wrap(p[i] + 0.5 * s, s) - 0.5 * s;
      }
      return x;
    }
    case Kind::SU2: {
      const Eigen::Vector3d v = p.tail(3);
      const double sn = v.norm();
      const double theta = std::atan2(sn, p[0]);
      const double factor = sn < 1e-8 ? (1.0 + theta * theta / 6.0) / std::max(p[0], 1e-300)
                                      : theta / sn;
      return 2.0 * factor * Vector(v);
    }
    case Kind::Product: {
      Vector x(algebra_dim());
      int a = 0;
      int q = 0;
      for (const auto& f : factors_) {
        x.segment(a, f.algebra_dim()) = f.log(p.segment(q, f.point_dim()));
        a += f.algebra_dim();
        q += f.point_dim();
      }
      return x;
    }
  }
  return {};
}

Vector GroupRealization::adjoint(const Vector& p, const Vector& x) const {
  if (p.size() != point_dim() || x.size() != algebra_dim()) {
    throw StructuralError("adjoint: wrong dimension");
  }
  switch (kind_) {
    case Kind::Torus: return x;
    case Kind::SU2: {
      Eigen::Quaterniond q = as_quaternion(p);
      return q.toRotationMatrix() * Eigen::Vector3d(x);
    }
    case Kind::Product: {
      Vector y(x.size());
      int a = 0;
      int q = 0;
      for (const auto& f : factors_) {
        y.segment(a, f.algebra_dim()) =
            f.adjoint(p.segment(q, f.point_dim()), x.segment(a, f.algebra_dim()));
        a += f.algebra_dim();
        q += f.point_dim();
      }
      return y;
    }
  }
  return {};
}

Vector GroupRealization::haar_point(std::uint64_t count, std::uint64_t seed, std::uint64_t index,
                                    std::uint64_t stream) const {
  switch (kind_) {
    case Kind::Torus: {
      // Rank-1 lattice i * z / N with z = (a^s, a^{s+1}, ...), s = stream.
      const std::uint64_t a = korobov_generator(count);
      std::uint64_t z = 1;
      for (std::uint64_t s = 0; s < stream; ++s) z = mulmod(z, a, count);
      Vector p(sides_.size());
      for (std::size_t k = 0; k < sides_.size(); ++k) {
        const std::uint64_t r = mulmod(index % count, z, count);
        p[static_cast<int>(k)] = sides_[k] * (static_cast<double>(r) / static_cast<double>(count));
        z = mulmod(z, a, count);
      }
      return p;
    }
    case Kind::SU2: {
      // Shoemake: uniform on the unit 3-sphere, in antipodal pairs (2m, 2m+1).
      const std::uint64_t base = index / 2;
      const double sign = (index & 1) ? -1.0 : 1.0;
      const double u1 = counter_uniform(seed, base, 3 * stream);
      const double u2 = counter_uniform(seed, base, 3 * stream + 1);
      const double u3 = counter_uniform(seed, base, 3 * stream + 2);
      const double r1 = std::sqrt(1.0 - u1);
      const double r2 = std::sqrt(u1);
      Vector p(4);
      p << r1 * std::sin(kTwoPi * u2), r1 * std::cos(kTwoPi * u2), r2 * std::sin(kTwoPi * u3),
          r2 * std::cos(kTwoPi * u3);
      return sign * p;
    }
    case Kind::Product: {
      Vector p(point_dim());
      int q = 0;
      std::uint64_t s = stream;
      for (const auto& f : factors_) {
        p.segment(q, f.point_dim()) = f.haar_point(count, seed, index, s);
        q += f.point_dim();
        s += static_cast<std::uint64_t>(f.algebra_dim());
      }
      return p;
    }
  }
  return {};
}

HaarSamples haar_samples(const GroupRealization& r, std::uint64_t count, std::uint64_t seed) {
  if (count < 1) throw StructuralError("haar_samples: need at least one sample");
  HaarSamples out;
  out.points.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) out.points.push_back(r.haar_point(count, seed, i));
  out.weight = r.volume() / static_cast<double>(count);
  return out;
}

SampledField SampledField::invariant(Vector w) {
  SampledField f;
  f.left_invariant = true;
  f.constant = w;
  f.value = [w](const Vector&) { return w; };
  return f;
}

SampledField SampledField::general(std::function<Vector(const Vector&)> value,
                                   std::function<Vector(const Vector&, int)> derivative) {
  SampledField f;
  f.value = std::move(value);
  f.derivative = std::move(derivative);
  return f;
}

SampledField builtin_field(const std::string& name, const Homomorphism& h,
                           const GroupRealization& domain) {
  static const std::regex pattern(R"((sin_theta1|q0)_e(\d+))");
  std::smatch m;
  if (!std::regex_match(name, m, pattern)) {
    throw StructuralError("unknown builtin field '" + name + "' (expected sin_theta1_e<k> or q0_e<k>)");
  }
  const int k = std::stoi(m[2].str()) - 1;
  const int n2 = h.codomain().dim();
  if (k < 0 || k >= n2) throw StructuralError("builtin field '" + name + "': e_k outside the codomain");
  const Vector ek = Vector::Unit(n2, k);
  const Matrix frame = orthonormal_frame(h.domain()).matrix();

  if (m[1] == "sin_theta1") {
    if (domain.kind() != GroupRealization::Kind::Torus) {
      throw ValidationError("builtin field '" + name + "' needs a torus domain");
    }
    return SampledField::general(
        [ek](const Vector& g) -> Vector { return std::sin(g[0]) * ek; },
        [ek, frame](const Vector& g, int j) -> Vector { return std::cos(g[0]) * frame(0, j) * ek; });
  }
  if (domain.kind() != GroupRealization::Kind::SU2) {
    throw ValidationError("builtin field '" + name + "' needs an su2 domain");
  }
  // d/ds Re(q exp(s u_j)) = Re(q u_j) = -q_vec . u_j, with u_j = E_j / 2 as a pure quaternion.
  return SampledField::general(
      [ek](const Vector& q) -> Vector { return q[0] * ek; },
      [ek, frame](const Vector& q, int j) -> Vector {
        const double d = -0.5 * q.tail(3).dot(frame.col(j));
        return d * ek;
      });
}

double energy_density(const Homomorphism& h) {
  double s = 0.0;
  for (const auto& a : frame_images(h)) s += h.codomain().metric.norm_squared(a);
  return 0.5 * s;
}

Vector dexp_left(const LieAlgebra& alg, const Vector& x, const Vector& y) {
  Vector sum = y;
  if (alg.max_constant() == 0.0) return sum;
  const Matrix ad = alg.ad(x);
  Vector term = y;
  for (int k = 1; k < 200; ++k) {
    term = (-1.0 / (k + 1)) * (ad * term);
    sum += term;
    if (term.norm() <= 1e-18 * std::max(1.0, sum.norm())) break;
  }
  return sum;
}

double pairwise_sum(const std::vector<double>& values) { return pairwise(values.data(), values.size()); }

double energy_quadrature(const Homomorphism& h, const GroupRealization& r1,
                         const QuadratureOptions& opt) {
  r1.check_compatible(h.domain());
  if (opt.samples < 1) throw StructuralError("energy_quadrature: need at least one sample");
  const auto a = frame_images(h);
  const auto& g2 = h.codomain().metric;
  // The left-trivialized differential is phi E_j at every point.
  const auto values = evaluate(opt.samples, opt.threads, [&](std::uint64_t i) {
    (void)r1.haar_point(opt.samples, opt.seed, i);
    double s = 0.0;
    for (const auto& v : a) s += g2.norm_squared(v);
    return 0.5 * s;
  });
  return r1.volume() / static_cast<double>(opt.samples) * pairwise_sum(values);
}

double variation_energy(const Homomorphism& h, const GroupRealization& r1,
                        const GroupRealization& r2, const SampledField& w, double t,
                        const QuadratureOptions& opt) {
  r1.check_compatible(h.domain());
  r2.check_compatible(h.codomain());
  if (opt.samples < 1) throw StructuralError("variation_energy: need at least one sample");
  if (!w.left_invariant && !w.derivative) {
    throw ValidationError("variation_energy: non-invariant field needs derivative data");
  }
  const auto a = frame_images(h);
  const auto& alg2 = h.codomain().algebra;
  const auto& g2 = h.codomain().metric;
  const int n2 = h.codomain().dim();

  const auto values = evaluate(opt.samples, opt.threads, [&](std::uint64_t i) {
    const Vector g = r1.haar_point(opt.samples, opt.seed, i);
    const Vector field = checked(w.left_invariant ? w.constant : w.value(g), n2, "field value");
    const Vector back = r2.exp(-t * field);
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      Vector theta = r2.adjoint(back, a[j]);
      if (!w.left_invariant) {
        const Vector d = checked(w.derivative(g, static_cast<int>(j)), n2, "field derivative");
        theta += dexp_left(alg2, t * field, t * d);
      }
      s += g2.norm_squared(theta);
    }
    return 0.5 * s;
  });
  return r1.volume() / static_cast<double>(opt.samples) * pairwise_sum(values);
}

double variation_energy(const Homomorphism& h, const GroupRealization& r1, const SampledField& w,
                        double t, const QuadratureOptions& opt) {
  return variation_energy(h, r1, GroupRealization::infer(h.codomain()), w, t, opt);
}

FiniteDifference second_variation_fd(const Homomorphism& h, const GroupRealization& r1,
                                     const GroupRealization& r2, const SampledField& w,
                                     double step, const QuadratureOptions& opt) {
  if (!(step > 0.0 && step <= 0.1)) throw StructuralError("second_variation_fd: step must be in (0, 0.1]");
  FiniteDifference fd;
  const double plus = variation_energy(h, r1, r2, w, step, opt);
  const double minus = variation_energy(h, r1, r2, w, -step, opt);
  fd.energy = variation_energy(h, r1, r2, w, 0.0, opt);
  fd.first = (plus - minus) / (2.0 * step);
  fd.second = (plus - 2.0 * fd.energy + minus) / (step * step);
  return fd;
}

FiniteDifference second_variation_fd(const Homomorphism& h, const GroupRealization& r1,
                                     const SampledField& w, double step,
                                     const QuadratureOptions& opt) {
  return second_variation_fd(h, r1, GroupRealization::infer(h.codomain()), w, step, opt);
}

double smith_quadrature(const Homomorphism& h, const GroupRealization& r1, const SampledField& w,
                        const QuadratureOptions& opt) {
  r1.check_compatible(h.domain());
  if (w.left_invariant) return 0.0;
  if (!w.derivative) throw ValidationError("smith_quadrature: non-invariant field needs derivative data");
  const auto a = frame_images(h);
  const auto& alg2 = h.codomain().algebra;
  const auto& g2 = h.codomain().metric;
  const int n2 = h.codomain().dim();
  const auto values = evaluate(opt.samples, opt.threads, [&](std::uint64_t i) {
    const Vector g = r1.haar_point(opt.samples, opt.seed, i);
    const Vector field = checked(w.value(g), n2, "field value");
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      const Vector d = checked(w.derivative(g, static_cast<int>(j)), n2, "field derivative");
      s += g2.norm_squared(d) + g2.inner(d, alg2.bracket(a[j], field));
    }
    return s;
  });
  return r1.volume() / static_cast<double>(opt.samples) * pairwise_sum(values);
}

}  // namespace liestab
