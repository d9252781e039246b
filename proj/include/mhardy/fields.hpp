#pragma once

// Magnetic potentials and magnetic / twisted gradients.
//
// Two layers: a node layer working on a LocalJet (f and its first derivatives
// at one quadrature node, already in Cartesian-x form) used by the verifiers,
// and a Point layer with the same semantics for pointwise checks.
//
// For m = 2 the x-part of every vector is Cartesian (x1, x2). For m != 2 test
// functions are radial in x and the x-part is written in the frame
// (x/|x|, ...), so only its first component can be nonzero.

#include <array>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mhardy/functions.hpp"
#include "mhardy/geometry.hpp"

namespace mhardy {

struct FluxParam {
  double beta = 0.0;
};

/// Radial profile psi(|z|) of the generalized twisted gradient.
class RadialPotential {
 public:
  enum class Kind { Constant, Power, User };

  static RadialPotential constant(double c);
  /// c * r^s
  static RadialPotential power(double c, double s);
  static RadialPotential user(std::function<double(double)> fn,
                              std::string label = "user");

  double operator()(double r) const;
  Kind kind() const { return kind_; }
  double c() const { return c_; }
  double s() const { return s_; }
  std::string describe() const;

 private:
  Kind kind_ = Kind::Constant;
  double c_ = 0.0;
  double s_ = 0.0;
  std::function<double(double)> fn_;
  std::string label_;
};

/// psi1[j](y_j) and psi2[j](x_j), j < n, for the constant-field Grushin form.
struct ConstantFieldPotentials {
  std::vector<std::function<double(double)>> psi1;
  std::vector<std::function<double(double)>> psi2;
  std::string label = "user";

  /// psi1(y) = c*y, psi2(x) = c*x on every axis (c = 1/2 is the Landau field).
  static ConstantFieldPotentials linear(int n, double c);
  static ConstantFieldPotentials zero(int n);
};

inline constexpr int kMaxComponents = 2 + 2 * kMaxY;
using CVec = std::array<cplx, kMaxComponents>;
using RVec = std::array<double, kMaxComponents>;

/// f and first derivatives at one point, x-part in Cartesian/radial frame.
struct LocalJet {
  int nx = 2;  // 2 for m = 2, 1 otherwise
  int ky = 0;
  double r = 0.0;
  std::array<double, 2> x{};  // coordinates in the frame of `dx`
  YVec y{};
  cplx value;
  std::array<cplx, 2> dx{};
  CYVec dy{};
};

/// Builds the jet at (t = log r, phi, y) for x-dimension m. For m != 2 the
/// function must be radial in x; m = 1 uses x = r cos(phi) with phi in {0, pi}.
LocalJet local_jet(const TestFunction& f, int m, double t, double phi,
                   std::span<const double> y);
/// Same, from precomputed polar partials (no radial check for m != 2).
LocalJet jet_from_partials(const Partials& p, int m, int ky, double t, double phi,
                           std::span<const double> y);

// -- node layer -------------------------------------------------------------

/// Number of components of each vector for the given layout.
int grushin_size(const LocalJet& j);
int tilde_size(const LocalJet& j);

/// (grad_x f, |x|^g grad_y f)
CVec grushin_grad(double gamma, const LocalJet& j);
/// grad_g rho / rho
RVec grushin_potential(double gamma, const LocalJet& j);
/// (d1 f, d2 f, |x|^g/sqrt2 grad_y f, |x|^g/sqrt2 grad_y f); m = 2 only.
CVec tilde_grad(double gamma, const LocalJet& j);
/// (-d2 rho/rho, d1 rho/rho, -|x|^g/sqrt2 grad_y rho/rho, +|x|^g/sqrt2 grad_y rho/rho)
RVec ab_potential(double gamma, const LocalJet& j);

enum class GradKind { Grushin, Tilde };

/// (grad + i beta potential) f with gradient and potential matched to kind.
CVec magnetic_grad(GradKind kind, double gamma, double beta, const LocalJet& j);

/// (d_x f - i psi y f, d_y f + i psi x f) on R^2 (jet with m = 2, ky = 0).
std::array<cplx, 2> twisted_grad_psi(double psi_r, const LocalJet& j);

/// (i d_{x_j} f + psi1_j(y_j) f, i |x|^g d_{y_j} f + psi2_j(x_j) f), m = k = n <= 2.
CVec constant_field_grad(const ConstantFieldPotentials& pots, double gamma,
                         const LocalJet& j);

double norm_sq(const CVec& v, int n);
double norm_sq(const RVec& v, int n);

// -- point layer ------------------------------------------------------------

std::vector<double> grushin_potential(const GrushinGeometry& geom, const Point& p);
std::vector<double> ab_potential(const GrushinGeometry& geom, const Point& p);

/// Cartesian (grad_x f, |x|^g grad_y f), length m + k.
std::vector<cplx> grushin_grad(const GrushinGeometry& geom, const TestFunction& f,
                               const Point& p);
std::vector<cplx> tilde_grad(const GrushinGeometry& geom, const TestFunction& f,
                             const Point& p);
std::vector<cplx> magnetic_grad(GradKind kind, const GrushinGeometry& geom,
                                FluxParam flux, const TestFunction& f,
                                const Point& p);
/// p.x = (x), p.y = (y): the plane point z = (x, y); f lives on R^2 (ky = 0).
std::vector<cplx> twisted_grad_psi(const RadialPotential& psi,
                                   const TestFunction& f, const Point& p);
std::vector<cplx> constant_field_grad(const ConstantFieldPotentials& pots,
                                      const GrushinGeometry& geom,
                                      const TestFunction& f, const Point& p);

}  // namespace mhardy
