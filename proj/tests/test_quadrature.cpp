#include <cmath>
#include <numbers>

#include "doctest.h"
#include "mhardy/errors.hpp"
#include "mhardy/quadrature.hpp"

using namespace mhardy;

namespace {

constexpr double kPi = std::numbers::pi;

// hand-built annulus region on R^2 (no test function attached)
Region annulus(double r_lo, double r_hi) {
  Region reg;
  reg.m = 2;
  reg.t_lo = std::log(r_lo);
  reg.t_hi = std::log(r_hi);
  return reg;
}

}  // namespace

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n - 1 exactly") {
  for (int n : {2, 5, 16, 64}) {
    const auto& [x, w] = gauss_legendre(n);
    REQUIRE(static_cast<int>(x.size()) == n);
    for (int d = 0; d <= 2 * n - 1; d += 3) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += w[i] * std::pow(x[i], d);
      const double exact = d % 2 ? 0.0 : 2.0 / (d + 1);
      CHECK(s == doctest::Approx(exact).scale(1.0).epsilon(1e-14));
    }
  }
}

TEST_CASE("sphere measures") {
  CHECK(sphere_measure(1) == doctest::Approx(2.0));
  CHECK(sphere_measure(2) == doctest::Approx(2 * kPi));
  CHECK(sphere_measure(3) == doctest::Approx(4 * kPi));
  CHECK_THROWS_AS(sphere_measure(0), DomainError);
}

TEST_CASE("compensated sum") {
  KahanSum s;
  s.add(1.0);
  for (int i = 0; i < 1000; ++i) s.add(1e-16);
  s.add(-1.0);
  CHECK(s.value() == doctest::Approx(1e-13).epsilon(1e-10));
}

TEST_CASE("annulus area and radial moments") {
  const Region reg = annulus(0.5, 2.0);
  const auto v = integrate_multi(reg, {}, 2, [](const Node& n, double* out) {
    out[0] = 1.0;
    out[1] = n.r * n.r;
  });
  CHECK(v[0] == doctest::Approx(kPi * (4.0 - 0.25)).epsilon(1e-13));
  CHECK(v[1] == doctest::Approx(kPi / 2 * (16.0 - 0.0625)).epsilon(1e-13));
}

TEST_CASE("angular exactness for trigonometric polynomials") {
  const Region reg = annulus(1.0, 2.0);
  QuadratureSpec q;
  q.n_phi = 2 * 6 + 2;  // degree 6
  const auto v = integrate_multi(reg, q, 2, [](const Node& n, double* out) {
    out[0] = std::pow(std::cos(3 * n.phi), 2);
    out[1] = std::cos(6 * n.phi) + std::sin(5 * n.phi);
  });
  const double area = kPi * 3.0;
  CHECK(v[0] == doctest::Approx(area / 2).epsilon(1e-13));
  CHECK(std::abs(v[1]) < 1e-13 * area);
}

TEST_CASE("Gaussian on R^2 and on R^2 x R") {
  const TestFunction g2 = single_mode(0, 0, 1.0, {Factor::gaussian_r(0.5)});
  const Region reg = make_region(g2, 2);
  const auto v = integrate_multi(reg, {}, 1, [](const Node& n, double* out) {
    out[0] = std::norm(n.jet->value);
  }, &g2);
  // int exp(-r^2) = pi
  CHECK(v[0] == doctest::Approx(kPi).epsilon(1e-10));

  const TestFunction g3 = single_mode(1, 0, 1.0,
                                      {Factor::gaussian_r(0.5), Factor::y_gaussian({}, 1.0)});
  const Region r3 = make_region(g3, 2);
  const auto w = integrate_multi(r3, {}, 1, [](const Node& n, double* out) {
    out[0] = n.jet->value.real();
  }, &g3);
  // int exp(-r^2/2) dx * int exp(-y^2/2) dy = 2 pi * sqrt(2 pi)
  CHECK(w[0] == doctest::Approx(2 * kPi * std::sqrt(2 * kPi)).epsilon(1e-10));
}

TEST_CASE("main engine agrees with the midpoint oracle") {
  const std::pair<double, double> box[] = {{-1.0, 0.8}};
  const auto fac = make_bump(0.4, 2.5, box);
  const TestFunction f(1, {{0, 1.0, fac}, {1, {0.2, 0.4}, fac}});
  const Region reg = make_region(f, 2);
  const MultiDensity d = [](const Node& n, double* out) {
    out[0] = std::norm(n.jet->value) / (1.0 + n.r);
    out[1] = std::norm(n.jet->dx[0]) + std::norm(n.jet->dy[0]);
  };
  QuadratureSpec o;
  o.oracle = true;
  const auto a = integrate_multi(reg, {}, 2, d, &f);
  const auto b = integrate_multi(reg, o, 2, d, &f);
  const auto c = oracle_integrate(reg, {}, 2, d, &f);
  for (int i = 0; i < 2; ++i) {
    CHECK(std::abs(a[i] - b[i]) <= 1e-7 * std::abs(a[i]));
    CHECK(b[i] == c[i]);
  }
}

TEST_CASE("angular resolution below the mode content is rejected") {
  const TestFunction f(0, {{3, 1.0, make_bump(0.5, 2.0, {})}});
  const Region reg = make_region(f, 2);
  QuadratureSpec q;
  q.n_phi = 8;
  CHECK_THROWS_AS(integrate_multi(reg, q, 1, [](const Node&, double* out) { out[0] = 1.0; }, &f),
                  DomainError);
}

TEST_CASE("non-finite densities are reported") {
  const Region reg = annulus(0.5, 1.0);
  CHECK_THROWS_AS(integrate_multi(reg, {}, 1, [](const Node&, double* out) { out[0] = NAN; }),
                  NonFiniteError);
}

TEST_CASE("ball domain and empty regions") {
  const TestFunction f = single_mode(0, 0, 1.0, make_bump(0.5, 2.0, {}));
  const Region reg = make_region(f, 2, Domain::ball(1.0));
  CHECK(reg.t_hi == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(Domain::ball(-1.0), DomainError);
  const Region e = make_region(f, 2, Domain::ball(0.25));
  CHECK(e.empty);
  const auto v = integrate_multi(e, {}, 1, [](const Node&, double* out) { out[0] = 1.0; }, &f);
  CHECK(v[0] == 0.0);
}

TEST_CASE("gauge-scaled y axis resolves a thin layer") {
  // weight concentrated on |y| <~ r^{1+g} near a small inner radius
  const std::pair<double, double> box[] = {{-1.0, 1.0}};
  const TestFunction f = single_mode(1, 0, 1.0, make_bump(0.01, 1.0, box));
  Region reg = make_region(f, 2);
  apply_gauge_scale(reg, 1.0);
  CHECK(reg.y_scale > 0.0);
  const MultiDensity d = [](const Node& n, double* out) {
    const double y = n.y[0];
    out[0] = std::norm(n.jet->value) / (std::pow(n.r, 4) + 4 * y * y);
  };
  QuadratureSpec lo, hi;
  lo.n_y = 48;
  hi.n_y = 96;
  const double a = integrate_multi(reg, lo, 1, d, &f)[0];
  const double b = integrate_multi(reg, hi, 1, d, &f)[0];
  CHECK(std::abs(a - b) <= 1e-8 * std::abs(b));
}

TEST_CASE("radial integrals") {
  QuadratureSpec q;
  // int_1^2 r^{Q-1} dr with Q = 3
  CHECK(integrate_radial([](double) { return 1.0; }, 3.0, 0.0, 1.0, 2.0, q) ==
        doctest::Approx(7.0 / 3.0).epsilon(1e-14));
  q.oracle = true;
  CHECK(integrate_radial([](double) { return 1.0; }, 3.0, 0.0, 1.0, 2.0, q) ==
        doctest::Approx(7.0 / 3.0).epsilon(1e-6));
  CHECK_THROWS_AS(integrate_radial([](double) { return 1.0; }, 3.0, 0.0, 0.0, 2.0, {}),
                  DomainError);

  Region reg = annulus(0.5, 2.0);
  const RadialRule rr = radial_rule(reg, 40);
  double s = 0.0;
  for (double w : rr.w) s += w;
  CHECK(s == doctest::Approx(std::log(4.0)).epsilon(1e-14));
  const RadialRule ro = radial_oracle_rule(reg, 100);
  CHECK(ro.t.size() == 100);
}

TEST_CASE("convergence study on a smooth density") {
  const TestFunction f = single_mode(0, 0, 1.0, make_bump(0.5, 2.0, {}));
  const Region reg = make_region(f, 2);
  std::vector<QuadratureSpec> sched(4);
  for (int i = 0; i < 4; ++i) sched[i].n_r = 32 << i;
  const ConvergenceStudy st = convergence_study(reg, sched, [](const Node& n, double* out) {
    out[0] = std::norm(n.jet->dx[0]) + std::norm(n.jet->value);
  }, &f);
  CHECK(st.rows.size() == 4);
  CHECK(st.rows[3].delta <= st.rows[1].delta);
  CHECK_THROWS_AS(convergence_study(reg, std::span(sched).first(2),
                                    [](const Node&, double* out) { out[0] = 1.0; }, &f),
                  DomainError);
}

TEST_CASE("thread count from the environment") {
  CHECK(thread_count() >= 1);
}
