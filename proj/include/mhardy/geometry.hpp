#pragma once

// Baouendi-Grushin metric quantities on R^m x R^k with anisotropy gamma.
//
//   rho(x, y)   = (|x|^{2(1+g)} + (1+g)^2 |y|^2)^{1/(2(1+g))}
//   grad_g rho  = (grad_x rho, |x|^g grad_y rho),  |grad_g rho| = |x|^g / rho^g
//   delta_l     : (x, y) -> (l x, l^{1+g} y),     rho(delta_l z) = l rho(z)
//   Q           = m + (1+g) k

#include <span>
#include <vector>

namespace mhardy {

struct GrushinGeometry {
  int m = 2;
  int k = 1;
  double gamma = 0.0;

  GrushinGeometry() = default;
  GrushinGeometry(int m_, int k_, double gamma_);

  /// Throws DomainError unless m >= 1, k >= 1 and gamma >= 0.
  void validate() const;
};

struct Point {
  std::vector<double> x;
  std::vector<double> y;
};

struct WeightExponents {
  double alpha1 = 0.0;  // power of rho
  double alpha2 = 0.0;  // power of |grad_g rho|
};

double hom_dim(const GrushinGeometry& geom);

/// Grushin gauge. Zero at the origin; NaN coordinates throw DomainError.
double rho(const GrushinGeometry& geom, const Point& p);

/// Sub-elliptic gradient of rho, length m + k. Throws OriginError at 0.
std::vector<double> grad_rho(const GrushinGeometry& geom, const Point& p);

/// Anisotropic dilation. Throws DomainError for lambda <= 0.
Point dilate(const GrushinGeometry& geom, double lambda, const Point& p);

/// B = rho^a1 |grad_g rho|^a2 = r^{a2 g} (r^{2(1+g)} + (1+g)^2|y|^2)^{(a1 - a2 g)/(2(1+g))}.
double weight_B(const GrushinGeometry& geom, const WeightExponents& exps,
                const Point& p);

// Scalar forms in terms of r = |x| and |y|^2, used on quadrature nodes.
namespace radial {

/// rho^{2(1+g)}
double rho_pow(double gamma, double r, double y2);
double rho(double gamma, double r, double y2);
/// r * d_r rho / rho = r^{2g+2} / rho^{2g+2}
double euler_log_rho(double gamma, double r, double y2);
/// d_{y_j} rho / rho divided by y_j, i.e. (1+g) / rho^{2g+2}
double dy_log_rho_over_y(double gamma, double r, double y2);
/// |grad_g rho|^2 / rho^2 = r^{2g} / rho^{2g+2}
double grad_rho_sq_over_rho_sq(double gamma, double r, double y2);
double weight_B(double gamma, const WeightExponents& exps, double r,
                double y2);

}  // namespace radial

}  // namespace mhardy
