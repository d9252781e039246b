#include <cmath>

#include "doctest.h"
#include "mhardy/errors.hpp"
#include "mhardy/fields.hpp"

using namespace mhardy;

namespace {

TestFunction plane_function() {
  const auto fac = make_bump(0.3, 3.0, {});
  return TestFunction(0, {{0, {1.0, 0.5}, fac}, {1, {0.3, -0.2}, fac}, {-2, {0.0, 0.7}, fac}});
}

TestFunction grushin_function() {
  const std::pair<double, double> box[] = {{-1.5, 1.5}};
  auto fac = make_bump(0.3, 3.0, box);
  fac.push_back(Factor::exp_t(0.4));
  return TestFunction(1, {{0, {1.0, 0.5}, fac}, {1, {0.3, -0.2}, fac}});
}

// f at a Cartesian point (x1, x2, y)
cplx eval_at(const TestFunction& f, double x1, double x2, double y) {
  const double yy[] = {y};
  return f.value(std::log(std::hypot(x1, x2)), std::atan2(x2, x1),
                 std::span<const double>(yy, f.ky()));
}

}  // namespace

TEST_CASE("Cartesian gradient agrees with finite differences") {
  const GrushinGeometry g{2, 1, 0.7};
  const TestFunction f = grushin_function();
  const Point p{{0.6, -0.5}, {0.4}};
  const auto gr = grushin_grad(g, f, p);
  REQUIRE(gr.size() == 3);
  const double h = 1e-5;
  const cplx d1 = (eval_at(f, 0.6 + h, -0.5, 0.4) - eval_at(f, 0.6 - h, -0.5, 0.4)) / (2 * h);
  const cplx d2 = (eval_at(f, 0.6, -0.5 + h, 0.4) - eval_at(f, 0.6, -0.5 - h, 0.4)) / (2 * h);
  const cplx dy = (eval_at(f, 0.6, -0.5, 0.4 + h) - eval_at(f, 0.6, -0.5, 0.4 - h)) / (2 * h);
  const double rg = std::pow(std::hypot(0.6, -0.5), 0.7);
  CHECK(std::abs(gr[0] - d1) < 1e-8);
  CHECK(std::abs(gr[1] - d2) < 1e-8);
  CHECK(std::abs(gr[2] - rg * dy) < 1e-8);
}

TEST_CASE("Grushin potential is grad_g rho / rho") {
  const GrushinGeometry g{3, 2, 1.2};
  const Point p{{0.3, -0.2, 0.5}, {0.1, -0.7}};
  const auto a = grushin_potential(g, p);
  const auto gr = grad_rho(g, p);
  const double rh = rho(g, p);
  REQUIRE(a.size() == 5);
  for (int i = 0; i < 5; ++i) CHECK(a[i] == doctest::Approx(gr[i] / rh).epsilon(1e-14));
  CHECK_THROWS_AS(grushin_potential(g, Point{{0, 0, 0}, {0, 0}}), OriginError);
}

TEST_CASE("Aharonov-Bohm potential is orthogonal to the Grushin potential") {
  const GrushinGeometry g{2, 2, 0.5};
  const Point p{{0.3, -0.8}, {0.2, 0.6}};
  const auto a = grushin_potential(g, p);
  const auto b = ab_potential(g, p);
  REQUIRE(b.size() == 6);
  double na = 0.0, nb = 0.0;
  for (double v : a) na += v * v;
  for (double v : b) nb += v * v;
  CHECK(nb == doctest::Approx(na).epsilon(1e-14));
  CHECK(b[0] * a[0] + b[1] * a[1] == doctest::Approx(0.0).scale(1.0));
  CHECK_THROWS_AS(ab_potential(GrushinGeometry{3, 1, 0.5}, Point{{1, 0, 0}, {0}}), DomainError);
}

TEST_CASE("magnetic gradient adds i beta A f") {
  const GrushinGeometry g{2, 1, 0.9};
  const TestFunction f = grushin_function();
  const Point p{{-0.4, 0.7}, {0.3}};
  const double beta = 0.37;
  const double yy[] = {0.3};
  const cplx fv = f.value(std::log(std::hypot(-0.4, 0.7)), std::atan2(0.7, -0.4), yy);
  for (GradKind kind : {GradKind::Grushin, GradKind::Tilde}) {
    const auto m = magnetic_grad(kind, g, FluxParam{beta}, f, p);
    const auto base = kind == GradKind::Grushin ? grushin_grad(g, f, p) : tilde_grad(g, f, p);
    const auto a = kind == GradKind::Grushin ? grushin_potential(g, p) : ab_potential(g, p);
    REQUIRE(m.size() == a.size());
    for (std::size_t i = 0; i < m.size(); ++i)
      CHECK(std::abs(m[i] - (base[i] + cplx(0.0, beta * a[i]) * fv)) < 1e-14);
  }
}

TEST_CASE("tilde gradient splits the y part evenly") {
  const GrushinGeometry g{2, 1, 0.6};
  const TestFunction f = grushin_function();
  const Point p{{0.5, 0.5}, {-0.2}};
  const auto gg = grushin_grad(g, f, p);
  const auto tg = tilde_grad(g, f, p);
  REQUIRE(tg.size() == 4);
  CHECK(std::norm(tg[2]) + std::norm(tg[3]) == doctest::Approx(std::norm(gg[2])).epsilon(1e-14));
}

TEST_CASE("twisted gradient") {
  const TestFunction f = plane_function();
  const double x = 0.8, y = -0.6;
  const RadialPotential psi = RadialPotential::power(0.5, 1.0);
  const auto tg = twisted_grad_psi(psi, f, Point{{x}, {y}});
  const double h = 1e-6;
  const cplx fx = (eval_at(f, x + h, y, 0) - eval_at(f, x - h, y, 0)) / (2 * h);
  const cplx fy = (eval_at(f, x, y + h, 0) - eval_at(f, x, y - h, 0)) / (2 * h);
  const cplx fv = eval_at(f, x, y, 0);
  const double ps = 0.5 * std::hypot(x, y);
  CHECK(std::abs(tg[0] - (fx - cplx(0, ps * y) * fv)) < 1e-8);
  CHECK(std::abs(tg[1] - (fy + cplx(0, ps * x) * fv)) < 1e-8);
  // supported away from 0: zero at the origin
  const auto z = twisted_grad_psi(psi, f, Point{{0.0}, {0.0}});
  CHECK(z[0] == cplx(0.0, 0.0));
}

TEST_CASE("constant-field gradient") {
  const GrushinGeometry g{1, 1, 0.4};
  const std::pair<double, double> box[] = {{-1.0, 1.0}};
  const TestFunction f = single_mode(1, 0, 1.0, make_bump(0.3, 3.0, box));
  const auto pots = ConstantFieldPotentials::linear(1, 0.5);
  const Point p{{0.7}, {0.3}};
  const auto v = constant_field_grad(pots, g, f, p);
  const auto gr = grushin_grad(g, f, p);
  const double yy[] = {0.3};
  const cplx fv = f.value(std::log(0.7), 0.0, yy);
  REQUIRE(v.size() == 2);
  CHECK(std::abs(v[0] - (cplx(0, 1) * gr[0] + 0.5 * 0.3 * fv)) < 1e-14);
  CHECK(std::abs(v[1] - (cplx(0, 1) * gr[1] + 0.5 * 0.7 * fv)) < 1e-14);
  CHECK(ConstantFieldPotentials::zero(2).label == "zero");
  CHECK_THROWS_AS(constant_field_grad(pots, GrushinGeometry{2, 1, 0.0}, grushin_function(),
                                      Point{{0.5, 0.5}, {0.1}}),
                  DomainError);
}

TEST_CASE("radial potentials") {
  CHECK(RadialPotential::constant(0.3)(5.0) == 0.3);
  CHECK(RadialPotential::power(2.0, -1.0)(4.0) == doctest::Approx(0.5));
  const RadialPotential u = RadialPotential::user([](double r) { return r * r; }, "sq");
  CHECK(u(3.0) == 9.0);
  CHECK(u.kind() == RadialPotential::Kind::User);
}

TEST_CASE("point dimension mismatch throws") {
  const GrushinGeometry g{2, 1, 0.5};
  CHECK_THROWS_AS(grushin_potential(g, Point{{1.0}, {0.0}}), DomainError);
  CHECK_THROWS_AS(grushin_grad(g, plane_function(), Point{{1.0, 0.0}, {0.0}}), DomainError);
}
