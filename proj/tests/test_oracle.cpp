#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "liestab/counter_rng.hpp"
#include "liestab/errors.hpp"
#include "liestab/oracle.hpp"
#include "liestab/variation.hpp"
#include "test_support.hpp"

#include <Eigen/Geometry>

#include <limits>
#include <numbers>

using namespace liestab;
using namespace liestab::testing;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSu2Volume = 16.0 * kPi * kPi;  // S^3 of radius 2

Eigen::Quaterniond quat(const Vector& p) { return {p[0], p[1], p[2], p[3]}; }

Matrix expm_series(const Matrix& a) {
  Matrix sum = Matrix::Identity(a.rows(), a.cols());
  Matrix term = sum;
  for (int k = 1; k < 60; ++k) {
    term = term * a / k;
    sum += term;
  }
  return sum;
}

GroupRealization torus2() { return GroupRealization::torus({2 * kPi, 2 * kPi}); }

}  // namespace

TEST_CASE("counter-based uniforms are pure functions of (seed, index, stream)") {
  CHECK(counter_uniform(7, 3, 0) == counter_uniform(7, 3, 0));
  CHECK(counter_uniform(7, 3, 0) != counter_uniform(7, 4, 0));
  CHECK(counter_uniform(7, 3, 0) != counter_uniform(8, 3, 0));
  CHECK(counter_uniform(7, 3, 0) != counter_uniform(7, 3, 1));
  double mean = 0.0;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const double u = counter_uniform(1, i, 0);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    mean += u;
  }
  CHECK(mean / 100000 == doctest::Approx(0.5).epsilon(0.01));
}

TEST_CASE("haar_samples") {
  SUBCASE("SU2 is deterministic for fixed (N, seed)") {
    const auto a = haar_samples(GroupRealization::su2(), 4, 7);
    const auto b = haar_samples(GroupRealization::su2(), 4, 7);
    REQUIRE(a.points.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK((a.points[i].array() == b.points[i].array()).all());
    CHECK(a.weight == kSu2Volume / 4);
    const auto c = haar_samples(GroupRealization::su2(), 4, 8);
    CHECK_FALSE((a.points[0].array() == c.points[0].array()).all());
  }
  SUBCASE("TORUS(1, [2 pi]) with N = 4 is the lattice {0, pi/2, pi, 3 pi/2}") {
    const auto s = haar_samples(GroupRealization::torus({2 * kPi}), 4, 123);
    REQUIRE(s.points.size() == 4);
    for (int i = 0; i < 4; ++i) CHECK(s.points[i][0] == doctest::Approx(i * kPi / 2).epsilon(1e-15));
    CHECK(s.weight == doctest::Approx(kPi / 2));
  }
  SUBCASE("SU2 uniform measure: E[q0^2] = 1/4 and unit norm") {
    const auto s = haar_samples(GroupRealization::su2(), 100000, 3);
    double m = 0.0;
    for (const auto& p : s.points) {
      REQUIRE(std::abs(p.norm() - 1.0) < 1e-14);
      m += p[0] * p[0];
    }
    CHECK(m / 1e5 == doctest::Approx(0.25).epsilon(0.01));
  }
  SUBCASE("torus lattice integrates cos^2 exactly in both coordinates") {
    const auto s = haar_samples(torus2(), 1000, 0);
    double c1 = 0.0, c2 = 0.0;
    for (const auto& p : s.points) {
      c1 += std::cos(p[0]) * std::cos(p[0]);
      c2 += std::cos(p[1]) * std::cos(p[1]);
    }
    CHECK(c1 / 1000 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(c2 / 1000 == doctest::Approx(0.5).epsilon(1e-12));
  }
  CHECK_THROWS_AS(haar_samples(GroupRealization::su2(), 0, 0), StructuralError);
}

TEST_CASE("realizations: volume, exp/log, adjoint") {
  const std::vector<GroupRealization> all = {
      GroupRealization::torus({2 * kPi, 3.0}), GroupRealization::su2(), GroupRealization::su2(2.0),
      GroupRealization::product({GroupRealization::su2(), GroupRealization::torus({2 * kPi})})};
  CHECK(GroupRealization::su2().volume() == doctest::Approx(kSu2Volume).epsilon(1e-15));
  CHECK(GroupRealization::su2(2.0).volume() == doctest::Approx(kSu2Volume * std::pow(2.0, 1.5)).epsilon(1e-15));
  CHECK(all[0].volume() == doctest::Approx(6 * kPi));
  CHECK(all[3].volume() == doctest::Approx(kSu2Volume * 2 * kPi));

  SUBCASE("property: log(exp(x)) = x below the injectivity radius") {
    Gen gen(51);
    for (const auto& r : all) {
      const int n = r.algebra_dim();
      double worst = 0.0;
      for (int t = 0; t < 1000; ++t) {
        Vector x = gen.vec(n);
        if (x.norm() >= 1.0) x *= 0.99 / x.norm();
        worst = std::max(worst, max_abs(Vector(r.log(r.exp(x)) - x)));
      }
      CHECK(worst < 1e-10);
      CHECK(max_abs(r.log(r.identity())) == 0.0);
    }
  }
  SUBCASE("exp on SU2 gives unit quaternions with the su2 bracket") {
    // [e1, e2] = e3 with e_k = unit_k / 2: check via a group commutator
    const auto r = GroupRealization::su2();
    const double s = 1e-4;
    const auto a = quat(r.exp(s * e(3, 1)));
    const auto b = quat(r.exp(s * e(3, 2)));
    const Eigen::Quaterniond comm = a * b * a.conjugate() * b.conjugate();
    Vector p(4);
    p << comm.w(), comm.x(), comm.y(), comm.z();
    // log of the commutator: s^2 [e1,e2] + s^3/2 ([e1,[e1,e2]] + [e2,[e1,e2]]) + O(s^4)
    const Vector x = r.log(p) / (s * s);
    const Vector expected = e(3, 3) + 0.5 * s * (e(3, 1) - e(3, 2));
    CHECK(max_abs(Vector(x - expected)) < 1e-7);
  }
  SUBCASE("property: Ad_{exp x} = exp(ad_x), an isometry fixing x") {
    Gen gen(52);
    const auto su2 = registry("su2");
    const auto r = GroupRealization::su2(2.0);
    for (int t = 0; t < 50; ++t) {
      const Vector x = gen.vec(3, 2.0), y = gen.vec(3);
      const Vector ad = r.adjoint(r.exp(x), y);
      CHECK(max_abs(Vector(ad - expm_series(su2.algebra.ad(x)) * y)) < 1e-12);
      CHECK(std::abs(ad.norm() - y.norm()) < 1e-12);
      CHECK(max_abs(Vector(r.adjoint(r.exp(x), x) - x)) < 1e-12);
    }
  }
  SUBCASE("compatibility and inference") {
    CHECK_NOTHROW(GroupRealization::su2().check_compatible(registry("su2")));
    CHECK_THROWS_AS(GroupRealization::su2().check_compatible(scaled(registry("su2"), 2.0)), ValidationError);
    CHECK_THROWS_AS(GroupRealization::su2().check_compatible(registry("torus_n(3)")), ValidationError);
    CHECK_THROWS_AS(torus2().check_compatible(registry("torus_n(3)")), ValidationError);
    CHECK(GroupRealization::infer(registry("torus_n(3)")).kind() == GroupRealization::Kind::Torus);
    CHECK(GroupRealization::infer(scaled(registry("su2"), 2.0)).metric_scale() == 2.0);
    const auto p = GroupRealization::infer(resolve_registry_expression("torus_n(1)+su2xsu2+torus_n(2)"));
    REQUIRE(p.kind() == GroupRealization::Kind::Product);
    CHECK(p.factors().size() == 4);
    CHECK(p.algebra_dim() == 9);
    CHECK(p.point_dim() == 11);
    CHECK_THROWS_AS(GroupRealization::infer(registry("heisenberg")), ValidationError);
  }
}

TEST_CASE("dexp_left matches a finite difference of the SU2 exponential") {
  Gen gen(53);
  const auto su2 = registry("su2").algebra;
  const auto r = GroupRealization::su2();
  for (int t = 0; t < 20; ++t) {
    const Vector x = gen.vec(3, 1.5), y = gen.vec(3);
    const double h = 1e-5;
    const auto q0 = quat(r.exp(x));
    const Vector qp = r.exp(Vector(x + h * y)), qm = r.exp(Vector(x - h * y));
    const Eigen::Quaterniond d(0.5 * (qp[0] - qm[0]) / h, 0.5 * (qp[1] - qm[1]) / h,
                               0.5 * (qp[2] - qm[2]) / h, 0.5 * (qp[3] - qm[3]) / h);
    const Eigen::Quaterniond left = q0.conjugate() * d;
    CHECK(std::abs(left.w()) < 1e-8);
    const Vector fd = 2.0 * Eigen::Vector3d(left.x(), left.y(), left.z());
    CHECK(max_abs(Vector(dexp_left(su2, x, y) - fd)) < 1e-8);
  }
  CHECK(max_abs(Vector(dexp_left(registry("torus_n(2)").algebra, e(2, 1), e(2, 2)) - e(2, 2))) == 0.0);
}

TEST_CASE("pairwise_sum") {
  std::vector<double> v(1000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = static_cast<double>(i);
  CHECK(pairwise_sum(v) == 499500.0);
  CHECK(pairwise_sum({}) == 0.0);
}

TEST_CASE("energy") {
  CHECK(energy_density(identity_su2()) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(energy_density(torus_inclusion()) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(energy_density(diagonal_su2()) == doctest::Approx(1.5).epsilon(1e-15));
  CHECK(energy_density(broken_su2()) == doctest::Approx(3.0).epsilon(1e-15));

  const QuadratureOptions opt{1000, 5, 2};
  const auto su2r = GroupRealization::su2();
  CHECK(std::abs(energy_quadrature(identity_su2(), su2r, opt) - 1.5 * kSu2Volume) < 1e-10);
  CHECK(std::abs(energy_quadrature(torus_inclusion(), torus2(), opt) - 4 * kPi * kPi) < 1e-10);
  CHECK(std::abs(energy_quadrature(broken_su2(), su2r, opt) - 3.0 * kSu2Volume) < 1e-10);
  CHECK_THROWS_AS(energy_quadrature(torus_inclusion(), su2r, opt), ValidationError);
}

TEST_CASE("variation_energy") {
  const QuadratureOptions opt{2000, 9, 0};
  const auto su2r = GroupRealization::su2();
  const auto h = identity_su2();

  SUBCASE("left-invariant field: right translation leaves energy unchanged") {
    const double e0 = energy_quadrature(h, su2r, opt);
    for (double t : {0.3, -1.2, 2.5}) {
      CHECK(std::abs(variation_energy(h, su2r, SampledField::invariant(e(3, 1)), t, opt) - e0) < 1e-10);
      CHECK(std::abs(variation_energy(h, su2r, SampledField::invariant(Vector(Vector::Ones(3))), t, opt) - e0) < 1e-10);
    }
    CHECK(std::abs(variation_energy(h, su2r, SampledField::invariant(e(3, 1)), 0.3, opt) - 1.5 * kSu2Volume) < 1e-10);
  }
  SUBCASE("t = 0 reproduces the energy quadrature") {
    for (const auto& hom : {identity_su2(), broken_su2()}) {
      const auto w = builtin_field("q0_e2", hom, su2r);
      CHECK(variation_energy(hom, su2r, w, 0.0, opt) == doctest::Approx(energy_quadrature(hom, su2r, opt)).epsilon(1e-14));
    }
  }
  SUBCASE("flat target: E(t) = E(0) + t^2/2 int |dW|^2") {
    const auto t = torus_inclusion();
    const auto w = builtin_field("sin_theta1_e3", t, torus2());
    const double vol = 4 * kPi * kPi;
    for (double s : {0.01, 0.1, 1.0}) {
      const double expected = vol * (1.0 + 0.5 * s * s * 0.5);
      const double got = variation_energy(t, torus2(), w, s, opt);
      CHECK(got == doctest::Approx(expected).epsilon(1e-12));
      CHECK(got >= vol);
    }
  }
  SUBCASE("non-invariant field without derivatives is refused") {
    auto w = SampledField::general([](const Vector&) { return e(3, 1); }, nullptr);
    CHECK_THROWS_AS(variation_energy(h, su2r, w, 0.1, opt), ValidationError);
  }
  SUBCASE("non-finite field values are refused") {
    auto w = SampledField::general([](const Vector&) { return Vector(Vector::Constant(3, NAN)); },
                                   [](const Vector&, int) { return Vector(Vector::Zero(3)); });
    CHECK_THROWS_AS(variation_energy(h, su2r, w, 0.1, opt), ValidationError);
  }
}

TEST_CASE("second_variation_fd") {
  const auto su2r = GroupRealization::su2();
  SUBCASE("identity su2, W = e1") {
    const auto fd = second_variation_fd(identity_su2(), su2r, SampledField::invariant(e(3, 1)), 1e-3, {10000, 1, 0});
    CHECK(std::abs(fd.first) < 1e-8);
    CHECK(std::abs(fd.second) < 1e-6);
    CHECK(std::abs(fd.energy - 1.5 * kSu2Volume) < 1e-10);
  }
  SUBCASE("torus inclusion, W = sin(theta1) e3") {
    const auto t = torus_inclusion();
    const auto fd = second_variation_fd(t, torus2(), builtin_field("sin_theta1_e3", t, torus2()), 1e-3, {10000, 1, 0});
    const double vol = 4 * kPi * kPi;
    CHECK(std::abs(fd.second - 0.5 * vol) < 0.005 * 0.5 * vol);
    CHECK(std::abs(fd.first) < 1e-8);
  }
  SUBCASE("W = 0 gives exactly zero") {
    for (const auto& h : valid_homs()) {
      const auto r1 = GroupRealization::infer(h.domain());
      const auto fd = second_variation_fd(h, r1, SampledField::invariant(Vector(Vector::Zero(h.codomain().dim()))), 1e-2, {500, 3, 0});
      CHECK(fd.first == 0.0);
      CHECK(fd.second == 0.0);
    }
  }
  SUBCASE("step must lie in (0, 0.1]") {
    CHECK_THROWS_AS(second_variation_fd(identity_su2(), su2r, SampledField::invariant(e(3, 1)), 0.0, {}), StructuralError);
    CHECK_THROWS_AS(second_variation_fd(identity_su2(), su2r, SampledField::invariant(e(3, 1)), 0.2, {}), StructuralError);
  }
  SUBCASE("property: left-invariant fields agree with the closed-form Smith density") {
    Gen gen(54);
    for (const auto& h : valid_homs()) {
      const auto r1 = GroupRealization::infer(h.domain());
      const Vector w = gen.vec(h.codomain().dim());
      const auto fd = second_variation_fd(h, r1, SampledField::invariant(w), 1e-3, {1000, 2, 0});
      const double closed = smith_index_density(h, CurvatureConvention::Paper, w) * r1.volume();
      CHECK(std::abs(fd.second - closed) < 1e-6);
      CHECK(std::abs(fd.first) < 1e-8);
    }
  }
}

TEST_CASE("non-invariant fields on a nonabelian target") {
  // W(q) = q_w e_k: d2E/dt2 = int 1/4 |q_vec|^2 = 3/16 vol.
  const auto su2r = GroupRealization::su2();
  const auto h = identity_su2();
  const QuadratureOptions opt{20000, 4, 0};
  for (const auto* name : {"q0_e1", "q0_e3"}) {
    const auto w = builtin_field(name, h, su2r);
    const auto fd = second_variation_fd(h, su2r, w, 1e-3, opt);
    const double closed = smith_quadrature(h, su2r, w, opt);
    CHECK(fd.second == doctest::Approx(closed).epsilon(1e-5));
    CHECK(closed == doctest::Approx(3.0 / 16.0 * kSu2Volume).epsilon(0.02));
    CHECK(std::abs(fd.first) < 1e-6);
  }
  SUBCASE("diagonal su2 into su2 + su2") {
    const auto d = diagonal_su2();
    const auto r1 = GroupRealization::infer(d.domain());
    const auto w = builtin_field("q0_e5", d, r1);
    const auto fd = second_variation_fd(d, r1, w, 1e-3, opt);
    CHECK(fd.second == doctest::Approx(smith_quadrature(d, r1, w, opt)).epsilon(1e-5));
  }
  CHECK_THROWS_AS(builtin_field("q0_e4", h, su2r), StructuralError);
  CHECK_THROWS_AS(builtin_field("sin_theta1_e1", h, su2r), ValidationError);
  CHECK_THROWS_AS(builtin_field("wave", h, su2r), StructuralError);
}

TEST_CASE("quadrature convergence on the flat quadratic control") {
  const auto t = torus_inclusion();
  const auto w = builtin_field("sin_theta1_e3", t, torus2());
  const double target = 0.5 * 4 * kPi * kPi;
  const double h = 1e-3;
  const auto first = second_variation_fd(t, torus2(), w, h, {100, 0, 0});
  // rounding floor of the central second difference
  const double floor = 100 * std::numeric_limits<double>::epsilon() * std::abs(first.energy) / (h * h);
  double prev = std::abs(first.second - target);
  for (std::uint64_t n : {1000ull, 10000ull, 100000ull}) {
    const double err = std::abs(second_variation_fd(t, torus2(), w, h, {n, 0, 0}).second - target);
    CHECK(err <= std::max(prev, floor));
    prev = err;
  }
}

TEST_CASE("property: results are bit-identical across thread counts") {
  const auto su2r = GroupRealization::su2();
  const auto h = identity_su2();
  const auto w = builtin_field("q0_e2", h, su2r);
  const auto ref = second_variation_fd(h, su2r, w, 1e-3, {5000, 11, 1});
  for (unsigned threads : {2u, 3u, 8u}) {
    const auto fd = second_variation_fd(h, su2r, w, 1e-3, {5000, 11, threads});
    CHECK(fd.energy == ref.energy);
    CHECK(fd.first == ref.first);
    CHECK(fd.second == ref.second);
  }
}
