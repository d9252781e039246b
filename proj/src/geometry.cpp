#include "mhardy/geometry.hpp"

#include <cmath>
#include <string>

#include "mhardy/errors.hpp"

namespace mhardy {

namespace {

double norm_sq(std::span<const double> v) {
  double s = 0.0;
  for (double a : v) s += a * a;
  return s;
}

void check_point(const GrushinGeometry& geom, const Point& p) {
  if (static_cast<int>(p.x.size()) != geom.m ||
      static_cast<int>(p.y.size()) != geom.k) {
    throw DomainError("point has dimensions (" + std::to_string(p.x.size()) +
                      ", " + std::to_string(p.y.size()) +
                      ") but geometry expects (" + std::to_string(geom.m) +
                      ", " + std::to_string(geom.k) + ")");
  }
  for (double a : p.x)
    if (std::isnan(a)) throw DomainError("NaN coordinate in x");
  for (double a : p.y)
    if (std::isnan(a)) throw DomainError("NaN coordinate in y");
}

bool is_origin(const Point& p) {
  return norm_sq(p.x) == 0.0 && norm_sq(p.y) == 0.0;
}

}  // namespace

GrushinGeometry::GrushinGeometry(int m_, int k_, double gamma_)
    : m(m_), k(k_), gamma(gamma_) {
  validate();
}

void GrushinGeometry::validate() const {
  if (m < 1 || k < 1 || !(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw DomainError("Grushin geometry needs m >= 1, k >= 1, gamma >= 0 (got m=" +
                      std::to_string(m) + ", k=" + std::to_string(k) +
                      ", gamma=" + std::to_string(gamma) + ")");
  }
}

double hom_dim(const GrushinGeometry& geom) {
  return geom.m + (1.0 + geom.gamma) * geom.k;
}

namespace radial {

double rho_pow(double gamma, double r, double y2) {
  const double g1 = 1.0 + gamma;
  return std::pow(r, 2.0 * g1) + g1 * g1 * y2;
}

double rho(double gamma, double r, double y2) {
  return std::pow(rho_pow(gamma, r, y2), 1.0 / (2.0 * (1.0 + gamma)));
}

double euler_log_rho(double gamma, double r, double y2) {
  return std::pow(r, 2.0 * (1.0 + gamma)) / rho_pow(gamma, r, y2);
}

double dy_log_rho_over_y(double gamma, double r, double y2) {
  return (1.0 + gamma) / rho_pow(gamma, r, y2);
}

double grad_rho_sq_over_rho_sq(double gamma, double r, double y2) {
  return std::pow(r, 2.0 * gamma) / rho_pow(gamma, r, y2);
}

double weight_B(double gamma, const WeightExponents& exps, double r,
                double y2) {
  const double rpow = exps.alpha2 * gamma;
  double rfac = 1.0;
  if (rpow != 0.0) {
    if (r == 0.0 && rpow < 0.0)
      throw SingularWeightError("weight r^" + std::to_string(rpow) +
                                " is singular on {x = 0}");
    rfac = std::pow(r, rpow);
  }
  const double e = (exps.alpha1 - rpow) / (2.0 * (1.0 + gamma));
  return rfac * std::pow(rho_pow(gamma, r, y2), e);
}

}  // namespace radial

double rho(const GrushinGeometry& geom, const Point& p) {
  check_point(geom, p);
  return radial::rho(geom.gamma, std::sqrt(norm_sq(p.x)), norm_sq(p.y));
}

std::vector<double> grad_rho(const GrushinGeometry& geom, const Point& p) {
  check_point(geom, p);
  if (is_origin(p)) throw OriginError("grad_rho is undefined at the origin");
  const double g = geom.gamma;
  const double r = std::sqrt(norm_sq(p.x));
  const double rh = radial::rho(g, r, norm_sq(p.y));
  const double denom = std::pow(rh, 2.0 * g + 1.0);
  const double r2g = std::pow(r, 2.0 * g);
  const double rg = std::pow(r, g);
  std::vector<double> out;
  out.reserve(p.x.size() + p.y.size());
  for (double xi : p.x) out.push_back(xi * r2g / denom);
  for (double yj : p.y) out.push_back(rg * (1.0 + g) * yj / denom);
  return out;
}

Point dilate(const GrushinGeometry& geom, double lambda, const Point& p) {
  check_point(geom, p);
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw DomainError("dilation factor must be positive, got " +
                      std::to_string(lambda));
  Point out = p;
  for (double& a : out.x) a *= lambda;
  const double s = std::pow(lambda, 1.0 + geom.gamma);
  for (double& a : out.y) a *= s;
  return out;
}

double weight_B(const GrushinGeometry& geom, const WeightExponents& exps,
                const Point& p) {
  check_point(geom, p);
  if (is_origin(p)) throw OriginError("weight_B is undefined at the origin");
  return radial::weight_B(geom.gamma, exps, std::sqrt(norm_sq(p.x)),
                          norm_sq(p.y));
}

}  // namespace mhardy
