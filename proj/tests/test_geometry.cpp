#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "conelab/gauge.hpp"
#include "conelab/sphere.hpp"

using namespace conelab;

namespace {

// Central-difference gradient oracle.
Vec fd_gradient(const Gauge& g, const Vec& xi, double h = 1e-5) {
  Vec grad(xi.size());
  for (int j = 0; j < xi.size(); ++j) {
    Vec xp = xi, xm = xi;
    xp[j] += h;
    xm[j] -= h;
    grad[j] = (g(xp) - g(xm)) / (2.0 * h);
  }
  return grad;
}

// Arclength of a d=2 gauge sphere by adaptive Simpson on |zeta'(theta)|,
// an expression independent of the quadrature weight formula.
double arclength_oracle(const Gauge& g) {
  auto speed = [&](double th) {
    Vec u(2), up(2);
    u << std::cos(th), std::sin(th);
    up << -std::sin(th), std::cos(th);
    const double r = g(u);
    const Vec grad = g.gradient(u);
    const Vec dz = up / r - u * (grad.dot(up)) / (r * r);
    return dz.norm();
  };
  return adaptive_simpson(speed, 0.0, kTwoPi, 1e-12);
}

Gauge custom_like_lq4(int dim) {
  return Gauge::custom(
      dim,
      [dim](const Vec& xi) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += std::pow(xi[i], 4);
        return std::pow(s, 0.25);
      },
      [dim](const Vec& xi) {
        double s = 0.0;
        for (int i = 0; i < dim; ++i) s += std::pow(xi[i], 4);
        const double r = std::pow(s, 0.25);
        Vec g(dim);
        for (int i = 0; i < dim; ++i) g[i] = std::pow(xi[i] / r, 3);
        return g;
      },
      4);
}

}  // namespace

TEST_CASE("rho evaluation basics") {
  Gauge eu = Gauge::euclidean(2);
  Vec xi(2);
  xi << 3, 4;
  CHECK(eu(xi) == doctest::Approx(5.0).epsilon(1e-14));

  Gauge l4 = Gauge::lq(2, 4);
  Vec ones(2);
  ones << 1, 1;
  CHECK(l4(ones) == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-14));

  Vec zero = Vec::Zero(2);
  CHECK(eu(zero) == 0.0);
  CHECK(l4(zero) == 0.0);
}

TEST_CASE("homogeneity and Euler identity on random points") {
  for (const Gauge& g : {Gauge::euclidean(2), Gauge::lq(2, 4), Gauge::lq(2, 6),
                         Gauge::euclidean(3), Gauge::lq(3, 4)}) {
    Rng rng(42);
    for (int i = 0; i < 10000; ++i) {
      const Vec xi = rng.unit_vector(g.dim()) * rng.log_uniform(1e-3, 1e3);
      const double t = rng.log_uniform(0.1, 10.0);
      const double r = g(xi);
      REQUIRE(r > 0.0);
      CHECK(g(t * xi) == doctest::Approx(t * r).epsilon(1e-12));
      // Euler: <xi, grad rho(xi)> = rho(xi)
      CHECK(xi.dot(g.gradient(xi)) == doctest::Approx(r).epsilon(1e-10));
    }
  }
}

TEST_CASE("gradient against central differences") {
  Gauge l4 = Gauge::lq(2, 4);
  Vec xi(2);
  xi << 1, 1;
  const Vec g = l4.gradient(xi);
  const Vec fd = fd_gradient(l4, xi);
  CHECK((g - fd).norm() <= 1e-8 * g.norm());

  Vec ax(2);
  ax << 1, 0;
  const Vec gax = l4.gradient(ax);
  CHECK(gax[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gax[1] == doctest::Approx(0.0).epsilon(1e-12));

  Gauge eu = Gauge::euclidean(2);
  Vec up(2);
  up << 0, 2;
  const Vec geu = eu.gradient(up);
  CHECK(geu[0] == doctest::Approx(0.0));
  CHECK(geu[1] == doctest::Approx(1.0));

  CHECK_THROWS_AS(eu.gradient(Vec::Zero(2)), std::domain_error);
}

TEST_CASE("gauss_point closed forms and argmax oracle") {
  Gauge eu = Gauge::euclidean(2);
  Vec x(2);
  x << 0, 5;
  SpherePoint p = gauss_point(eu, x);
  CHECK(p.position[0] == doctest::Approx(0.0));
  CHECK(p.position[1] == doctest::Approx(1.0));

  Gauge l4 = Gauge::lq(2, 4);
  Vec diag(2);
  diag << 1, 1;
  p = gauss_point(l4, diag);
  CHECK(p.position[0] == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-12));
  CHECK(p.position[1] == doctest::Approx(std::pow(2.0, -0.25)).epsilon(1e-12));

  // Dense-sampling argmax oracle for a generic direction.
  Vec dir(2);
  dir << 1.0, 0.3;
  p = gauss_point(l4, dir);
  double best = -1e300;
  Vec best_zeta(2);
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double th = kTwoPi * i / n;
    Vec u(2);
    u << std::cos(th), std::sin(th);
    const Vec zeta = radial_to_sphere(l4, u);
    const double v = dir.dot(zeta);
    if (v > best) {
      best = v;
      best_zeta = zeta;
    }
  }
  CHECK((p.position - best_zeta).norm() <= 1e-4);
  CHECK(dir.dot(p.position) >= best - 1e-10);

  // Gauss map consistency: normal at the supporting point realigns with x.
  CHECK((p.normal - dir.normalized()).norm() <= 1e-8);
}

TEST_CASE("gauss_point via Newton for a custom gauge") {
  Gauge ref = Gauge::lq(2, 4);
  Gauge cus = custom_like_lq4(2);
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const Vec x = rng.unit_vector(2);
    const SpherePoint a = gauss_point(ref, x);
    const SpherePoint b = gauss_point(cus, x);
    CHECK((a.position - b.position).norm() <= 1e-9);
    CHECK(std::abs(cus(b.position) - 1.0) <= 1e-10);
    CHECK(b.position.dot(b.normal) > 0.0);
  }
}

TEST_CASE("tangent distance") {
  Gauge eu = Gauge::euclidean(2);
  Vec e1(2);
  e1 << 1, 0;
  SpherePoint p0 = sphere_point_at(eu, e1);
  CHECK(tangent_distance(p0.position, p0) == doctest::Approx(0.0));

  for (double th : {0.1, 0.7, 2.0}) {
    Vec q(2);
    q << std::cos(th), std::sin(th);
    CHECK(tangent_distance(q, p0) ==
          doctest::Approx(1.0 - std::cos(th)).epsilon(1e-12));
  }

  // l4 axis point: td(w) = 1 - (1 - w^4)^(1/4) ~ w^4 / 4.
  Gauge l4 = Gauge::lq(2, 4);
  SpherePoint ax = sphere_point_at(l4, e1);
  const double w = 0.1;
  Vec xi(2);
  xi << std::pow(1.0 - std::pow(w, 4), 0.25), w;
  const double td = tangent_distance(xi, ax);
  CHECK(td == doctest::Approx(1.0 - std::pow(1.0 - 1e-4, 0.25)).epsilon(1e-10));
  CHECK(td == doctest::Approx(std::pow(w, 4) / 4.0).epsilon(2e-4));
}

TEST_CASE("gamma_sup closed forms") {
  CHECK(gamma_sup(Gauge::euclidean(2)).gamma == doctest::Approx(1.0).epsilon(1e-12));
  const UnitBallData b4 = gamma_sup(Gauge::lq(2, 4));
  CHECK(b4.gamma == doctest::Approx(std::pow(2.0, 0.25)).epsilon(1e-10));
  const UnitBallData b6 = gamma_sup(Gauge::lq(2, 6));
  CHECK(b6.gamma == doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(1e-8));
  // gamma dominates every stored node.
  double max_node = 0.0;
  for (int i = 0; i < b4.nodes.size(); ++i)
    max_node = std::max(max_node, b4.nodes.points.col(i).norm());
  CHECK(b4.gamma >= max_node - 1e-12);
  CHECK(b4.gamma <= max_node + 1e-6);
}

TEST_CASE("sphere quadrature weight sums") {
  // Circle circumference.
  const SphereQuadrature c = parametrize_sphere(Gauge::euclidean(2), 4096);
  CHECK(c.total_measure() == doctest::Approx(kTwoPi).epsilon(1e-9));

  // Sphere area in d = 3.
  const SphereQuadrature s = parametrize_sphere(Gauge::euclidean(3), 128);
  CHECK(s.total_measure() == doctest::Approx(4.0 * kPi).epsilon(1e-6));

  // l4 circle against the adaptive arclength oracle.
  Gauge l4 = Gauge::lq(2, 4);
  const double oracle = arclength_oracle(l4);
  const SphereQuadrature r = parametrize_sphere(l4, 4096);
  CHECK(r.total_measure() == doctest::Approx(oracle).epsilon(1e-9));

  // Convergence order >= 2 (ratio test at resolutions above rounding).
  const double e1 =
      std::abs(parametrize_sphere(l4, 16).total_measure() - oracle);
  const double e2 =
      std::abs(parametrize_sphere(l4, 32).total_measure() - oracle);
  CHECK(e2 <= e1 / 4.0 + 1e-14);

  // Node invariants: membership and normals.
  for (int i = 0; i < 64; ++i) {
    const SpherePoint p = node_at(r, i * 64);
    CHECK(std::abs(l4(p.position) - 1.0) <= 1e-10);
    CHECK((p.normal - l4.gradient(p.position).normalized()).norm() <= 1e-12);
    CHECK(p.position.dot(p.normal) > 0.0);
    CHECK(p.weight >= 0.0);
  }
}

TEST_CASE("type_order fits") {
  const auto radii = default_probe_radii();

  Gauge eu = Gauge::euclidean(2);
  Vec e1(2);
  e1 << 1, 0;
  CHECK(type_order(eu, sphere_point_at(eu, e1), radii) ==
        doctest::Approx(2.0).epsilon(0.025));

  Gauge l4 = Gauge::lq(2, 4);
  CHECK(type_order(l4, sphere_point_at(l4, e1), radii) ==
        doctest::Approx(4.0).epsilon(0.025));

  Vec diag(2);
  diag << 1, 1;
  const SpherePoint pd = sphere_point_at(l4, radial_to_sphere(l4, diag));
  CHECK(type_order(l4, pd, radii) == doctest::Approx(2.0).epsilon(0.025));
}
