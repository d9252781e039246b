#pragma once

// Test functions in polar-separated form
//
//   f(r, phi, y) = sum_k amp_k * prod_j F_kj(t, y) * exp(i k phi),   t = log r,
//
// where every factor F carries closed-form derivatives in t (the Euler
// derivative r d/dr) and in y. Functions are immutable values; evaluation is
// pure.

#include <array>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mhardy/geometry.hpp"

namespace mhardy {

using cplx = std::complex<double>;

/// Largest y-dimension handled by the fixed-size fast paths.
inline constexpr int kMaxY = 4;
using YVec = std::array<double, kMaxY>;
using CYVec = std::array<cplx, kMaxY>;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Smooth step: 0 for u <= 0, 1 for u >= 1, built from exp(-1/u).
double smooth_step(double u);
double smooth_step_deriv(double u);

enum class FactorKind {
  LogPlateau,     // plateau bump in t on [a, b]
  ExpT,           // exp(a t) = r^a
  AbsLogPower,    // |t|^a on the side sign * t > 0
  LogLogPlateau,  // plateau bump in s = log|t| on [a, b], side sign * t > 0
  GaussianR,      // exp(-a r^2)
  OuterStep,      // 1 for r <= a, smooth decay to 0 at r = b
  YPlateau,       // plateau bump in y_axis on [a, b]
  YGaussian,      // exp(-|y - center|^2 / (2 a^2))
  RhoPower,       // rho^a
  RhoPlateau,     // plateau bump in log rho on [a, b]
};

struct Factor {
  FactorKind kind = FactorKind::ExpT;
  double a = 0.0;
  double b = 0.0;
  int axis = 0;  // y axis for YPlateau, side (+1/-1) for the log factors
  double gamma = 0.0;  // rho factors only
  YVec center{};

  static Factor log_plateau(double t_lo, double t_hi);
  static Factor exp_t(double c);
  static Factor abs_log_power(double c, int sign);
  static Factor loglog_plateau(double s_lo, double s_hi, int sign);
  static Factor gaussian_r(double a);
  static Factor outer_step(double r_flat, double r_zero);
  static Factor y_plateau(int axis, double lo, double hi);
  static Factor y_gaussian(const YVec& center, double width);
  static Factor rho_power(double c, double gamma);
  static Factor rho_plateau(double log_rho_lo, double log_rho_hi,
                            double gamma);

  bool is_radial() const;  // depends on t only
  bool operator==(const Factor&) const = default;
};

struct FactorValue {
  double v = 0.0;
  double dt = 0.0;
  YVec dy{};
};

/// Evaluates a factor at t = log r (r passed alongside to avoid recomputing).
FactorValue eval_factor(const Factor& f, double t, double r,
                        std::span<const double> y);

/// Closed box in (t, y) outside of which a mode vanishes. For the loglog
/// factor the t-range is also described in s = log|t|.
struct Support {
  double t_lo = -kInf;
  double t_hi = kInf;
  std::array<std::pair<double, double>, kMaxY> y_box;
  int loglog_sign = 0;  // nonzero when a LogLogPlateau factor is present
  double s_lo = -kInf;
  double s_hi = kInf;
  /// Natural y length scale near the inner edge for rho-shaped supports
  /// (0 when the y box is set by y factors).
  double y_scale = 0.0;
  /// Points where a factor changes regime (plateau edges); quadrature panels
  /// are aligned with them. In s for loglog supports.
  std::vector<double> t_breaks;
  std::array<std::vector<double>, kMaxY> y_breaks;

  Support();
  bool empty(int ky) const;
};

struct AngularMode {
  int k = 0;
  cplx amp{1.0, 0.0};
  std::vector<Factor> factors;
};

/// One angular coefficient and its derivatives at (t, y), amplitude included.
struct ModeJet {
  int k = 0;
  cplx v;
  cplx dt;
  CYVec dy{};
};

struct Partials {
  cplx value;
  cplx d_t;    // r d/dr
  cplx d_r;
  cplx d_phi;
  CYVec d_y{};
};

class TestFunction {
 public:
  TestFunction() = default;
  /// Throws DomainError for ky outside [0, kMaxY] or repeated angular modes.
  TestFunction(int ky, std::vector<AngularMode> modes);

  int ky() const { return ky_; }
  const std::vector<AngularMode>& modes() const { return modes_; }
  int max_abs_mode() const;
  bool has_nonzero_modes() const;

  /// f at (t = log r, phi, y); zero outside the support.
  cplx value(double t, double phi, std::span<const double> y) const;
  Partials partials(double t, double phi, std::span<const double> y) const;
  /// Value of the k-th angular coefficient g_k(t, y) (zero if absent).
  cplx mode_value(int k, double t, std::span<const double> y) const;

  /// Nonzero angular coefficients at (t, y); reuses `out`'s storage.
  void mode_jets(double t, std::span<const double> y,
                 std::vector<ModeJet>& out) const;
  /// Sums coefficient jets at angle phi (t is needed for d_r).
  static Partials combine(std::span<const ModeJet> jets, double t, double phi,
                          int ky);

  /// Support of the whole function (union of the mode supports).
  Support support() const;

  /// True when f is real-valued by construction: the k = 0 amplitude is real
  /// and each mode k has a partner -k with conjugate amplitude and identical
  /// factors.
  bool is_real_valued() const;

  /// f o delta_lambda for the Grushin dilation with anisotropy gamma.
  TestFunction dilated(double lambda, double gamma) const;

  TestFunction scaled(cplx c) const;

 private:
  friend TestFunction angular_average(const TestFunction& f);

  int ky_ = 0;
  std::vector<AngularMode> modes_;
  double t_shift_ = 0.0;
  double y_scale_ = 1.0;
};

/// Zeroth angular mode of f, exact.
TestFunction angular_average(const TestFunction& f);

/// Radial-times-box bump: plateau in log r on [r_lo, r_hi] (identically 1 on
/// the middle half in log r) times a plateau per y axis. Throws DomainError
/// on invalid radii or boxes.
std::vector<Factor> make_bump(double r_lo, double r_hi,
                              std::span<const std::pair<double, double>> y_box);

/// Single-mode test function with the given factors.
TestFunction single_mode(int ky, int k, cplx amp, std::vector<Factor> factors);

enum class TrialBase { InversePower, LogPower, Power, RhoPower };

const char* to_string(TrialBase base);
std::optional<TrialBase> trial_base_from_string(const std::string& s);

/// One member of an extremizer family, cut off smoothly.
///   InversePower : r^{-exponent}, plateau in log r on [lo, hi]
///   Power        : r^{exponent},  plateau in log r on [lo, hi]
///   LogPower     : |log r|^{exponent} on side `sign`, plateau in log|log r|
///                  on [lo, hi]
///   RhoPower     : rho^{-(Q + alpha1 - 2)/2 + epsilon}, plateau in log rho
///                  on [lo, hi]
struct TrialFamily {
  TrialBase base = TrialBase::RhoPower;
  double exponent = 0.0;
  double epsilon = 0.0;
  double lo = -1.0;
  double hi = 1.0;
  int sign = 1;
};

/// Radial families on R^Q-type radial problems (ky = 0).
TestFunction make_trial(const TrialFamily& family);
/// Families on the Grushin space; RhoPower needs Q + alpha1 - 2 > 0.
TestFunction make_trial(const TrialFamily& family, const GrushinGeometry& geom,
                        const WeightExponents& exps);

}  // namespace mhardy
