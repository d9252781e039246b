#pragma once

// One verifier per inequality / identity. Every verifier evaluates all sides
// by quadrature and reports margins; nothing is asserted here; callers decide
// what a failing margin means.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "mhardy/fields.hpp"
#include "mhardy/functions.hpp"
#include "mhardy/geometry.hpp"
#include "mhardy/quadrature.hpp"

namespace mhardy {

using Json = nlohmann::ordered_json;

inline constexpr double kMarginTol = 1e-9;
inline constexpr double kIdentityTol = 1e-8;

struct Term {
  std::string name;
  double value = 0.0;
  bool nonneg = false;  // asserted nonnegative by the theorem
};

struct InequalityReport {
  std::string theorem_id;
  double lhs = 0.0;
  std::vector<Term> rhs_terms;  // main term first
  double margin = 0.0;          // lhs - sum of rhs terms
  double sharp_constant = 0.0;
  double ratio = 0.0;           // lhs / main integral without its constant
  double tol = 0.0;             // kMarginTol * (|lhs| + sum |rhs|)
  Json params = Json::object();
  Json resolution = Json::object();
  /// Extra integrals and alternative readings; never part of the gate.
  std::vector<std::pair<std::string, double>> diagnostics;

  /// margin >= -tol and every nonneg term >= -tol
  bool ok() const;
};

struct IdentityReport {
  std::string identity_id;
  double lhs = 0.0;
  double rhs = 0.0;
  double rel_err = 0.0;  // |lhs - rhs| / scale, scale = max(|lhs|, sum |rhs parts|)
  double tol = kIdentityTol;
  Json params = Json::object();
  Json resolution = Json::object();
  std::vector<std::pair<std::string, double>> diagnostics;

  bool ok() const { return rel_err <= tol; }
};

/// Which of the two printed second conditions gates the AB-type results:
/// thm2 is alpha2 + 2 gamma > 0, corollary is alpha2 gamma + 2 > 0.
enum class Admissibility { Thm2, Corollary };
const char* to_string(Admissibility a);
std::optional<Admissibility> admissibility_from_string(const std::string& s);

struct SuperweightParams {
  double a = 1.0;
  double b = 1.0;
  double theta1 = 1.0;  // Hardy-Sobolev power (Landau part (i))
  double theta2 = -2.0;
  double theta3 = 1.0;
  double theta4 = -2.0;
  double p = 2.0;
};

Json to_json(const QuadratureSpec& spec);

// -- Grushin ----------------------------------------------------------------

InequalityReport verify_radial_hardy(const GrushinGeometry& geom,
                                     const WeightExponents& exps,
                                     const TestFunction& f,
                                     const QuadratureSpec& spec = {});

IdentityReport check_grushin_ibp_identity(const GrushinGeometry& geom,
                                          const WeightExponents& exps,
                                          const TestFunction& f, double alpha,
                                          const QuadratureSpec& spec = {});

/// Real f only; the rhs weight is |x|^{2g}/rho^{2g+2}.
InequalityReport verify_magnetic_grushin(const GrushinGeometry& geom,
                                         const WeightExponents& exps,
                                         FluxParam flux, const TestFunction& f,
                                         const QuadratureSpec& spec = {});

/// |(grad_g + i beta A) f|^2 = |grad_g f|^2 + beta^2 |A|^2 |f|^2 integrated.
IdentityReport check_hardy2_split(const GrushinGeometry& geom,
                                  const WeightExponents& exps, FluxParam flux,
                                  const TestFunction& f,
                                  const QuadratureSpec& spec = {});

InequalityReport verify_ab_hardy(const GrushinGeometry& geom,
                                 const WeightExponents& exps, FluxParam flux,
                                 const TestFunction& f,
                                 const QuadratureSpec& spec = {},
                                 Admissibility adm = Admissibility::Corollary);

enum class UncertaintyVariant { Lemma, AB };
InequalityReport verify_uncertainty_grushin(
    const GrushinGeometry& geom, const WeightExponents& exps, FluxParam flux,
    const TestFunction& f, const QuadratureSpec& spec, UncertaintyVariant variant,
    Admissibility adm = Admissibility::Corollary);

/// Constant-field form on R^n x R^n (n <= 2), real f. Gated on the squared
/// main constant; the printed linear reading is a diagnostic.
InequalityReport verify_constant_field(const GrushinGeometry& geom,
                                       const WeightExponents& exps,
                                       const ConstantFieldPotentials& pots,
                                       const TestFunction& f,
                                       const QuadratureSpec& spec = {});

// -- Landau -----------------------------------------------------------------

/// int |twisted grad f|^2 / kappa vs the polar form without the cross term.
IdentityReport check_twisted_polar_identity(const RadialPotential& psi,
                                            const RadialPotential& kappa,
                                            const TestFunction& f,
                                            const QuadratureSpec& spec = {});

enum class LandauVariant { HardySobolev, Log, Poincare, Superweight };
const char* to_string(LandauVariant v);

/// R_Omega is used by the Poincare variant only (f must live in the ball).
InequalityReport verify_landau(LandauVariant variant, const RadialPotential& psi,
                               const SuperweightParams& params,
                               const TestFunction& f,
                               const QuadratureSpec& spec = {},
                               double R_Omega = 0.0);

/// int |grad_L f|^2 = int |grad f|^2 + int |z|^2/4 |f|^2 on C^n.
IdentityReport check_real_landau_identity(int n, const TestFunction& f,
                                          const QuadratureSpec& spec = {});

enum class RealLandauVariant { Hardy, Critical, Uncertainty, UncertaintyCritical };
const char* to_string(RealLandauVariant v);

/// Critical variants: n = 1, Omega = ball of radius R_Omega, R >= e R_Omega.
InequalityReport verify_real_landau(RealLandauVariant variant, int n,
                                    const TestFunction& f,
                                    const QuadratureSpec& spec = {},
                                    double R_Omega = 0.0, double R = 0.0);

// -- radial L^p on the abelian group R^Q --------------------------------------

enum class RadialPVariant { Weighted, Log, Poincare, Superweight };
const char* to_string(RadialPVariant v);

struct RadialPParams {
  double theta = 0.0;  // weighted variant
  double R = 0.0;      // Poincare: sup |x| over Omega
  SuperweightParams sw;
};

/// f radial (ky = 0, only the k = 0 mode). Measure r^{Q-1} dr; the common
/// sphere factor is omitted.
InequalityReport verify_radial_p(RadialPVariant variant, double Q, double p,
                                 const RadialPParams& params,
                                 const TestFunction& f,
                                 const QuadratureSpec& spec = {});

}  // namespace mhardy
