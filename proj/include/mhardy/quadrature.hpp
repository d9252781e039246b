#pragma once

// Tensor quadrature over the support of a test function in (t = log r, phi, y)
// coordinates, plus an independent midpoint-rule oracle.
//
// Main engine: Gauss-Legendre in t (Jacobian r^m dt times the sphere measure),
// trapezoid in phi (m = 2), Gauss-Legendre per y axis, or in u = asinh(y/s)
// when the support is rho-shaped. When the support carries a loglog factor
// the radial variable is s = log|t| instead.
//
// Gauss-Legendre is applied panelwise, with panel edges at the plateau
// breakpoints of the test function, so the exp(-1/u) transitions are resolved.
//
// Oracle: composite midpoint rule on a uniform (t, phi, y) grid, ignoring the
// breakpoints. It shares no node code with the main engine.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mhardy/fields.hpp"
#include "mhardy/functions.hpp"

namespace mhardy {

struct QuadratureSpec {
  int n_r = 256;
  int n_phi = 32;
  int n_y = 64;
  /// Route every integral through oracle_integrate instead.
  bool oracle = false;
  int oracle_n_r = 2000;  // uniform cells in t (or s)
  int oracle_n_y = 400;   // uniform cells per y axis
};

struct Domain {
  enum class Kind { Support, Ball };
  Kind kind = Kind::Support;
  double R_Omega = 0.0;

  static Domain support() { return {}; }
  /// Ball of radius R centred at 0 (functions on R^m with ky = 0).
  static Domain ball(double R);
};

/// Integration region: the support box of a function restricted to a domain.
struct Region {
  int m = 2;
  int ky = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::array<std::pair<double, double>, kMaxY> y_box{};
  int loglog_sign = 0;
  double s_lo = 0.0;
  double s_hi = 0.0;
  double y_scale = 0.0;  // > 0 selects the asinh map in y
  std::vector<double> t_breaks;  // panel edges (in s for loglog regions)
  std::array<std::vector<double>, kMaxY> y_breaks;
  int max_mode = 0;
  /// Angular integrands are trig polynomials of degree <= 2 max_mode + 2
  /// (true for every density built from f by make_region), so the trapezoid
  /// rule in phi is exact with min(n_phi, 4 (max_mode + 1)) nodes.
  bool phi_band_limited = false;
  bool empty = false;
};

/// Region for f on R^m x R^ky. An unbounded t_lo becomes t_hi - 40 (the
/// Jacobian r^m makes the rest negligible); an unbounded y box throws.
Region make_region(const TestFunction& f, int m, const Domain& domain = {});

/// Grushin weights vary in y on the scale |x|^{1+g}/(1+g), which at the inner
/// radius of a bump can be far below the y box. Selects the asinh map in y
/// with that scale (no-op when the support already set one).
void apply_gauge_scale(Region& region, double gamma);

/// Sphere measure |S^{m-1}|.
double sphere_measure(int m);

/// Gauss-Legendre nodes and weights on [-1, 1] (cached, thread-safe).
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

/// Compensated (Neumaier) accumulator.
class KahanSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// One quadrature node. `jet` is set when a test function is attached.
struct Node {
  double t = 0.0;
  double r = 0.0;
  double phi = 0.0;
  std::span<const double> y;
  const LocalJet* jet = nullptr;
  cplx f0;  // zeroth angular coefficient of f at (t, y), when f is attached
};

/// Writes n_out real density values at a node.
using MultiDensity = std::function<void(const Node&, double* out)>;

/// Integrates n_out densities over the region in one pass. With f given, the
/// node jets come from f. Throws NonFiniteError on NaN/inf density values.
std::vector<double> integrate_multi(const Region& region, const QuadratureSpec& spec,
                                    int n_out, const MultiDensity& density,
                                    const TestFunction* f = nullptr);

/// Complex single density (real and imaginary parts integrated separately).
cplx integrate_polar(const std::function<cplx(const Node&)>& density,
                     const Region& region, const QuadratureSpec& spec,
                     const TestFunction* f = nullptr);

/// Same contract as integrate_multi, always the midpoint oracle.
std::vector<double> oracle_integrate(const Region& region, const QuadratureSpec& spec,
                                     int n_out, const MultiDensity& density,
                                     const TestFunction* f = nullptr);

/// int_{r_lo}^{r_hi} density(r) r^{Q-1-w} dr by Gauss-Legendre in log r.
double integrate_radial(const std::function<double(double)>& density, double Q,
                        double w, double r_lo, double r_hi,
                        const QuadratureSpec& spec);

/// Nodes for purely radial (1-D) problems in t = log r: weights are dt
/// (or |t| ds under the loglog map), no Jacobian.
struct RadialRule {
  std::vector<double> t;
  std::vector<double> w;
};
RadialRule radial_rule(const Region& region, int n);
/// Uniform midpoint rule in t (or s) for the same region: the 1-D oracle.
RadialRule radial_oracle_rule(const Region& region, int n);

struct ConvergenceRow {
  QuadratureSpec spec;
  double value = 0.0;
  double delta = 0.0;  // |value - previous value|; 0 for the first row
};

struct ConvergenceStudy {
  std::vector<ConvergenceRow> rows;
  double observed_order = 0.0;  // log2(delta_{i-1}/delta_i) at the end
  bool converged = false;       // deltas shrink monotonically
};

/// Evaluates the first density output under each spec (>= 3 specs).
ConvergenceStudy convergence_study(const Region& region,
                                   std::span<const QuadratureSpec> schedule,
                                   const MultiDensity& density,
                                   const TestFunction* f = nullptr);

/// Worker threads from MHARDY_THREADS (default 1).
int thread_count();

}  // namespace mhardy
