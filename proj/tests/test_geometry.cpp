#include <cmath>

#include "doctest.h"
#include "mhardy/errors.hpp"
#include "mhardy/geometry.hpp"

using namespace mhardy;

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("gamma = 0 gauge is the Euclidean norm") {
  const GrushinGeometry g{2, 1, 0.0};
  const Point p{{0.3, -0.4}, {1.2}};
  CHECK(rho(g, p) == doctest::Approx(std::sqrt(0.09 + 0.16 + 1.44)).epsilon(1e-14));
  CHECK(hom_dim(g) == 3.0);
}

TEST_CASE("gauge on the axes") {
  const GrushinGeometry g{1, 2, 1.5};
  // x = 0: rho = ((1+g)|y|)^{1/(1+g)}
  const Point axis{{0.0}, {0.6, 0.8}};
  CHECK(rho(g, axis) == doctest::Approx(std::pow(2.5, 1.0 / 2.5)).epsilon(1e-14));
  // y = 0: rho = |x|
  CHECK(rho(g, Point{{-0.7}, {0.0, 0.0}}) == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(rho(g, Point{{0.0}, {0.0, 0.0}}) == 0.0);
  CHECK(hom_dim(g) == doctest::Approx(6.0));
}

TEST_CASE("dilation homogeneity") {
  const GrushinGeometry g{3, 2, 0.7};
  const Point p{{0.2, -1.1, 0.5}, {0.3, -0.9}};
  for (double l : {0.01, 0.5, 3.0, 40.0}) {
    const Point q = dilate(g, l, p);
    CHECK(rho(g, q) == doctest::Approx(l * rho(g, p)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(dilate(g, 0.0, p), DomainError);
  CHECK_THROWS_AS(dilate(g, -1.0, p), DomainError);
}

TEST_CASE("gradient norm closed form and finite differences") {
  const GrushinGeometry g{2, 1, 1.3};
  const Point p{{0.4, 0.9}, {-0.6}};
  const auto gr = grad_rho(g, p);
  REQUIRE(gr.size() == 3);
  const double r = std::hypot(0.4, 0.9);
  const double rh = rho(g, p);
  CHECK(norm(gr) == doctest::Approx(std::pow(r, 1.3) / std::pow(rh, 1.3)).epsilon(1e-13));

  const double h = 1e-5;
  for (int i = 0; i < 2; ++i) {
    Point a = p, b = p;
    a.x[i] += h;
    b.x[i] -= h;
    CHECK(gr[i] == doctest::Approx((rho(g, a) - rho(g, b)) / (2 * h)).epsilon(1e-8));
  }
  Point a = p, b = p;
  a.y[0] += h;
  b.y[0] -= h;
  const double dy = (rho(g, a) - rho(g, b)) / (2 * h);
  CHECK(gr[2] == doctest::Approx(std::pow(r, 1.3) * dy).epsilon(1e-8));
}

TEST_CASE("gradient at the origin throws") {
  const GrushinGeometry g{2, 1, 1.0};
  CHECK_THROWS_AS(grad_rho(g, Point{{0.0, 0.0}, {0.0}}), OriginError);
}

TEST_CASE("invalid geometry") {
  CHECK_THROWS_AS(GrushinGeometry(0, 1, 0.0), DomainError);
  CHECK_THROWS_AS(GrushinGeometry(1, 0, 0.0), DomainError);
  CHECK_THROWS_AS(GrushinGeometry(1, 1, -0.1), DomainError);
  CHECK_THROWS_AS(rho(GrushinGeometry{1, 1, 0.0}, Point{{std::nan("")}, {0.0}}), DomainError);
}

TEST_CASE("weight B matches its definition") {
  const GrushinGeometry g{2, 1, 0.8};
  const WeightExponents e{1.5, -0.4};
  const Point p{{0.3, 0.5}, {0.7}};
  const double gn = norm(grad_rho(g, p));
  CHECK(weight_B(g, e, p) ==
        doctest::Approx(std::pow(rho(g, p), 1.5) * std::pow(gn, -0.4)).epsilon(1e-13));
  const double r = std::hypot(0.3, 0.5);
  CHECK(radial::weight_B(0.8, e, r, 0.49) == doctest::Approx(weight_B(g, e, p)).epsilon(1e-13));
  CHECK(radial::rho(0.8, r, 0.49) == doctest::Approx(rho(g, p)).epsilon(1e-14));
}

TEST_CASE("radial forms") {
  const double g = 0.5, r = 0.7, y2 = 0.3;
  const double rp = radial::rho_pow(g, r, y2);
  CHECK(rp == doctest::Approx(std::pow(r, 3.0) + 2.25 * y2).epsilon(1e-14));
  CHECK(radial::euler_log_rho(g, r, y2) == doctest::Approx(std::pow(r, 3.0) / rp));
  CHECK(radial::dy_log_rho_over_y(g, r, y2) == doctest::Approx(1.5 / rp));
  CHECK(radial::grad_rho_sq_over_rho_sq(g, r, y2) == doctest::Approx(r / rp));
}
