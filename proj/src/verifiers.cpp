#include "mhardy/verifiers.hpp"

#include <cmath>
#include <functional>
#include <limits>

#include "mhardy/errors.hpp"

namespace mhardy {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double y_sq(const LocalJet& j) {
  double s = 0.0;
  for (int i = 0; i < j.ky; ++i) s += j.y[i] * j.y[i];
  return s;
}

// d f / d|x| from the frame derivatives
cplx d_r(const LocalJet& j) {
  cplx s = j.x[0] * j.dx[0];
  if (j.nx == 2) s += j.x[1] * j.dx[1];
  return s / j.r;
}

// d f / d phi (m = 2)
cplx d_phi(const LocalJet& j) { return j.x[0] * j.dx[1] - j.x[1] * j.dx[0]; }

double dy_sq(const LocalJet& j) {
  double s = 0.0;
  for (int i = 0; i < j.ky; ++i) s += std::norm(j.dy[i]);
  return s;
}

void finish(InequalityReport& rep, double main_integral) {
  double sum = 0.0, abs_sum = std::abs(rep.lhs);
  for (const Term& t : rep.rhs_terms) {
    sum += t.value;
    abs_sum += std::abs(t.value);
  }
  rep.margin = rep.lhs - sum;
  rep.tol = kMarginTol * abs_sum;
  rep.ratio = main_integral != 0.0 ? rep.lhs / main_integral : kNaN;
}

IdentityReport identity(std::string id, double lhs, double rhs, double scale) {
  IdentityReport rep;
  rep.identity_id = std::move(id);
  rep.lhs = lhs;
  rep.rhs = rhs;
  scale = std::max(scale, std::abs(lhs));
  rep.rel_err = scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
  return rep;
}

Json geom_json(const GrushinGeometry& g) {
  return {{"m", g.m}, {"k", g.k}, {"gamma", g.gamma}, {"Q", hom_dim(g)}};
}

Json exps_json(const WeightExponents& e) {
  return {{"alpha1", e.alpha1}, {"alpha2", e.alpha2}};
}

Json function_json(const TestFunction& f) {
  Json modes = Json::array();
  for (const AngularMode& m : f.modes())
    modes.push_back({{"k", m.k},
                     {"amp", {m.amp.real(), m.amp.imag()}},
                     {"factors", static_cast<int>(m.factors.size())}});
  return {{"ky", f.ky()}, {"real_valued", f.is_real_valued()}, {"modes", modes}};
}

void check_ky(const GrushinGeometry& geom, const TestFunction& f) {
  geom.validate();
  if (f.ky() != geom.k)
    throw DomainError("test function y dimension " + std::to_string(f.ky()) +
                      " does not match k = " + std::to_string(geom.k));
}

void require_real(const TestFunction& f, const char* what) {
  if (!f.is_real_valued())
    throw RealnessError(std::string(what) + " is stated for real-valued f only");
}

void require_plane(const TestFunction& f, const char* what) {
  if (f.ky() != 0)
    throw DomainError(std::string(what) + " acts on functions on R^2 (ky = 0)");
}

// Q + alpha1 - 2 > 0 and m + alpha2 gamma > 0
void radial_admissible(const GrushinGeometry& geom, const WeightExponents& e) {
  const double Q = hom_dim(geom);
  if (!(Q + e.alpha1 - 2.0 > 0.0))
    throw AdmissibilityError("need Q + alpha1 - 2 > 0");
  if (!(geom.m + e.alpha2 * geom.gamma > 0.0))
    throw AdmissibilityError("need m + alpha2 gamma > 0");
}

bool thm2_condition(const GrushinGeometry& g, const WeightExponents& e) {
  return e.alpha2 + 2.0 * g.gamma > 0.0;
}
bool corollary_condition(const GrushinGeometry& g, const WeightExponents& e) {
  return e.alpha2 * g.gamma + 2.0 > 0.0;
}

// alpha1 + k(gamma+1) > 0 plus the selected second condition
void ab_admissible(const GrushinGeometry& geom, const WeightExponents& e,
                   Admissibility adm, Json& params) {
  if (geom.m != 2) throw DomainError("the Aharonov-Bohm form lives on R^2 x R^k");
  const bool c2 = thm2_condition(geom, e), cc = corollary_condition(geom, e);
  params["admissibility"] = to_string(adm);
  params["admissible_thm2"] = c2;
  params["admissible_corollary"] = cc;
  if (!(e.alpha1 + geom.k * (geom.gamma + 1.0) > 0.0))
    throw AdmissibilityError("need alpha1 + k(gamma + 1) > 0");
  if (adm == Admissibility::Thm2 && !c2)
    throw AdmissibilityError("need alpha2 + 2 gamma > 0");
  if (adm == Admissibility::Corollary && !cc)
    throw AdmissibilityError("need alpha2 gamma + 2 > 0");
}

double ab_constant(const GrushinGeometry& g, const WeightExponents& e, double beta) {
  const double c = (e.alpha1 + g.k * (g.gamma + 1.0)) / 2.0;
  return c * c + beta * beta;
}

Region grushin_region(const TestFunction& f, int m, double gamma) {
  Region reg = make_region(f, m);
  apply_gauge_scale(reg, gamma);
  return reg;
}

double hardy_constant(const GrushinGeometry& g, const WeightExponents& e) {
  const double c = (hom_dim(g) + e.alpha1 - 2.0) / 2.0;
  return c * c;
}

}  // namespace

bool InequalityReport::ok() const {
  if (!std::isfinite(margin) || margin < -tol) return false;
  for (const Term& t : rhs_terms)
    if (t.nonneg && t.value < -tol) return false;
  return true;
}

const char* to_string(Admissibility a) {
  return a == Admissibility::Thm2 ? "thm2" : "corollary";
}

std::optional<Admissibility> admissibility_from_string(const std::string& s) {
  if (s == "thm2") return Admissibility::Thm2;
  if (s == "corollary") return Admissibility::Corollary;
  return std::nullopt;
}

const char* to_string(LandauVariant v) {
  switch (v) {
    case LandauVariant::HardySobolev: return "hardy_sobolev";
    case LandauVariant::Log: return "log";
    case LandauVariant::Poincare: return "poincare";
    case LandauVariant::Superweight: return "superweight";
  }
  return "?";
}

const char* to_string(RealLandauVariant v) {
  switch (v) {
    case RealLandauVariant::Hardy: return "hardy";
    case RealLandauVariant::Critical: return "critical";
    case RealLandauVariant::Uncertainty: return "uncertainty";
    case RealLandauVariant::UncertaintyCritical: return "uncertainty_critical";
  }
  return "?";
}

const char* to_string(RadialPVariant v) {
  switch (v) {
    case RadialPVariant::Weighted: return "weighted";
    case RadialPVariant::Log: return "log";
    case RadialPVariant::Poincare: return "poincare";
    case RadialPVariant::Superweight: return "superweight";
  }
  return "?";
}

Json to_json(const QuadratureSpec& s) {
  Json j = {{"n_r", s.n_r}, {"n_phi", s.n_phi}, {"n_y", s.n_y}, {"oracle", s.oracle}};
  if (s.oracle) {
    j["oracle_n_r"] = s.oracle_n_r;
    j["oracle_n_y"] = s.oracle_n_y;
  }
  return j;
}

// -- Grushin ----------------------------------------------------------------

InequalityReport verify_radial_hardy(const GrushinGeometry& geom,
                                     const WeightExponents& exps,
                                     const TestFunction& f,
                                     const QuadratureSpec& spec) {
  check_ky(geom, f);
  radial_admissible(geom, exps);
  const double g = geom.gamma;
  const Region reg = grushin_region(f, geom.m, geom.gamma);
  // 0: radial lhs, 1: weighted norm, 2: full-gradient lhs
  const auto v = integrate_multi(reg, spec, 3, [&](const Node& n, double* out) {
    const LocalJet& j = *n.jet;
    const double y2 = y_sq(j);
    const double B = radial::weight_B(g, exps, j.r, y2);
    const double r2g = std::pow(j.r, 2.0 * g);
    const double dy = r2g * dy_sq(j);
    out[0] = B * (std::norm(d_r(j)) + dy);
    out[1] = B * radial::grad_rho_sq_over_rho_sq(g, j.r, y2) * std::norm(j.value);
    out[2] = B * (std::norm(j.dx[0]) + std::norm(j.dx[1]) + dy);
  }, &f);

  InequalityReport rep;
  rep.theorem_id = "radial_hardy";
  rep.sharp_constant = hardy_constant(geom, exps);
  rep.lhs = v[0];
  rep.rhs_terms = {{"main", rep.sharp_constant * v[1], true}};
  rep.diagnostics = {{"weighted_norm", v[1]}, {"full_gradient_lhs", v[2]}};
  rep.params = {{"geometry", geom_json(geom)}, {"weights", exps_json(exps)},
                {"function", function_json(f)}};
  rep.resolution = to_json(spec);
  finish(rep, v[1]);
  return rep;
}

IdentityReport check_grushin_ibp_identity(const GrushinGeometry& geom,
                                          const WeightExponents& exps,
                                          const TestFunction& f, double alpha,
                                          const QuadratureSpec& spec) {
  check_ky(geom, f);
  radial_admissible(geom, exps);
  if (!std::isfinite(alpha)) throw DomainError("alpha must be finite");
  const double g = geom.gamma;
  const Region reg = grushin_region(f, geom.m, geom.gamma);
  // 0: shifted form, 1: plain form, 2: weighted norm
  const auto v = integrate_multi(reg, spec, 3, [&](const Node& n, double* out) {
    const LocalJet& j = *n.jet;
    const double y2 = y_sq(j);
    const double B = radial::weight_B(g, exps, j.r, y2);
    const double r2g = std::pow(j.r, 2.0 * g);
    const cplx dr = d_r(j);
    const double lr = radial::euler_log_rho(g, j.r, y2) / j.r;  // d_r rho / rho
    const double ly = radial::dy_log_rho_over_y(g, j.r, y2);
    double shifted_y = 0.0;
    for (int i = 0; i < j.ky; ++i)
      shifted_y += std::norm(j.dy[i] + alpha * ly * j.y[i] * j.value);
    out[0] = B * (std::norm(dr + alpha * lr * j.value) + r2g * shifted_y);
    out[1] = B * (std::norm(dr) + r2g * dy_sq(j));
    out[2] = B * radial::grad_rho_sq_over_rho_sq(g, j.r, y2) * std::norm(j.value);
  }, &f);

  const double c = (hom_dim(geom) + exps.alpha1 - 2.0) * alpha - alpha * alpha;
  IdentityReport rep = identity("grushin_ibp", v[0], v[1] - c * v[2],
                                std::abs(v[1]) + std::abs(c * v[2]));
  rep.params = {{"geometry", geom_json(geom)}, {"weights", exps_json(exps)},
                {"alpha", alpha}, {"function", function_json(f)}};
  rep.resolution = to_json(spec);
  rep.diagnostics = {{"plain_form", v[1]}, {"weighted_norm", v[2]},
                     {"coefficient", c}};
  return rep;
}

InequalityReport verify_magnetic_grushin(const GrushinGeometry& geom,
                                         const WeightExponents& exps,
                                         FluxParam flux, const TestFunction& f,
                                         const QuadratureSpec& spec) {
  check_ky(geom, f);
  radial_admissible(geom, exps);
  require_real(f, "the magnetic Grushin inequality");
  const double g = geom.gamma, beta = flux.beta;
  const Region reg = grushin_region(f, geom.m, geom.gamma);
  // 0: lhs, 1: weighted norm, 2: gradient part, 3: potential part
  const auto v = integrate_multi(reg, spec, 4, [&](const Node& n, double* out) {
    const LocalJet& j = *n.jet;
    const double y2 = y_sq(j);
    const double B = radial::weight_B(g, exps, j.r, y2);
    const int sz = grushin_size(j);
    const double f2 = std::norm(j.value);
    out[0] = B * norm_sq(magnetic_grad(GradKind::Grushin, g, beta, j), sz);
    out[1] = B * std::pow(j.r, 2.0 * g) / radial::rho_pow(g, j.r, y2) * f2;
    out[2] = B * norm_sq(grushin_grad(g, j), sz);
    out[3] = B * norm_sq(grushin_potential(g, j), sz) * f2;
  }, &f);

  InequalityReport rep;
  rep.theorem_id = "magnetic_grushin";
  rep.sharp_constant = hardy_constant(geom, exps) + beta * beta;
  rep.lhs = v[0];
  rep.rhs_terms = {{"main", rep.sharp_constant * v[1], true}};
  rep.diagnostics = {{"weighted_norm", v[1]},
                     {"gradient_part", v[2]},
                     {"potential_part", beta * beta * v[3]}};
  rep.params = {{"geometry", geom_json(geom)}, {"weights", exps_json(exps)},
                {"beta", beta}, {"function", function_json(f)}};
  rep.resolution = to_json(spec);
  finish(rep, v[1]);
  return rep;
}

IdentityReport check_hardy2_split(const GrushinGeometry& geom,
                                  const WeightExponents& exps, FluxParam flux,
                                  const TestFunction& f,
                                  const QuadratureSpec& spec) {
  const InequalityReport r = verify_magnetic_grushin(geom, exps, flux, f, spec);
  const double grad = r.diagnostics[1].second, pot = r.diagnostics[2].second;
  IdentityReport rep = identity("hardy2_split", r.lhs, grad + pot,
                                std::abs(grad) + std::abs(pot));
  rep.params = r.params;
  rep.resolution = r.resolution;
  rep.diagnostics = {{"gradient_part", grad}, {"potential_part", pot}};
  return rep;
}

InequalityReport verify_ab_hardy(const GrushinGeometry& geom,
                                 const WeightExponents& exps, FluxParam flux,
                                 const TestFunction& f,
                                 const QuadratureSpec& spec, Admissibility adm) {
  check_ky(geom, f);
  InequalityReport rep;
  rep.params = {{"geometry", geom_json(geom)}, {"weights", exps_json(exps)},
                {"beta", flux.beta}};
  ab_admissible(geom, exps, adm, rep.params);
  rep.params["function"] = function_json(f);
  const double g = geom.gamma, beta = flux.beta;
  const Region reg = grushin_region(f, 2, geom.gamma);
  // 0: lhs, 1: weighted norm, 2: mode remainder, 3: cross term,
  // 4: angular energy, 5: radial + y energy
  const auto v = integrate_multi(reg, spec, 6, [&](const Node& n, double* out) {
    const LocalJet& j = *n.jet;
    const double y2 = y_sq(j);
    const double B = radial::weight_B(g, exps, j.r, y2);
    const double G = radial::grad_rho_sq_over_rho_sq(g, j.r, y2);
    const double ir2 = 1.0 / (j.r * j.r);
    const cplx dp = d_phi(j);
    out[0] = B * norm_sq(magnetic_grad(GradKind::Tilde, g, beta, j), tilde_size(j));
    out[1] = B * G * std::norm(j.value);
    out[2] = B * (std::norm(j.value) - std::norm(n.f0)) * ir2;
    out[3] = 2.0 * beta * B * G * (dp * std::conj(j.value)).imag();
    out[4] = B * std::norm(dp) * ir2;
    out[5] = B * (std::norm(d_r(j)) + std::pow(j.r, 2.0 * g) * dy_sq(j));
  }, &f);

  rep.theorem_id = "ab_hardy";
  rep.sharp_constant = ab_constant(geom, exps, beta);
  rep.lhs = v[0];
  rep.rhs_terms = {{"main", rep.sharp_constant * v[1], true},
                   {"remainder", v[2], true}};
  // Exact polar decomposition: lhs = radial + angular + beta^2 norm + cross.
  const double exact = v[5] + v[4] + beta * beta * v[1] + v[3];
  rep.diagnostics = {{"weighted_norm", v[1]},
                     {"cross_term", v[3]},
                     {"fourier_step_lhs", v[4]},
                     {"fourier_step_rhs", v[2]},
                     {"radial_energy", v[5]},
                     {"polar_decomposition_residual", v[0] - exact}};
  rep.resolution = to_json(spec);
  finish(rep, v[1]);
  return rep;
}

InequalityReport verify_uncertainty_grushin(const GrushinGeometry& geom,
                                            const WeightExponents& exps,
                                            FluxParam flux, const TestFunction& f,
                                            const QuadratureSpec& spec,
                                            UncertaintyVariant variant,
                                            Admissibility adm) {
  check_ky(geom, f);
  InequalityReport rep;
  rep.params = {{"geometry", geom_json(geom)}, {"weights", exps_json(exps)},
                {"beta", flux.beta}};
  const bool ab = variant == UncertaintyVariant::AB;
  double C;
  if (ab) {
    ab_admissible(geom, exps, adm, rep.params);
    C = ab_constant(geom, exps, flux.beta);
  } else {
    radial_admissible(geom, exps);
    require_real(f, "the lemma-based uncertainty principle");
    C = hardy_constant(geom, exps) + flux.beta * flux.beta;
  }
  rep.params["variant"] = ab ? "ab" : "lemma";
  rep.params["function"] = function_json(f);
  const double g = geom.gamma, beta = flux.beta;
  const GradKind kind = ab ? GradKind::Tilde : GradKind::Grushin;
  const Region reg = grushin_region(f, ab ? 2 : geom.m, geom.gamma);
  // 0: weighted magnetic energy, 1: |f|^2, 2: rhs integral
  const auto v = integrate_multi(reg, spec, 3, [&](const Node& n, double* out) {
    const LocalJet& j = *n.jet;
    const double y2 = y_sq(j);
    const double B = radial::weight_B(g, exps, j.r, y2);
    const int sz = ab ? tilde_size(j) : grushin_size(j);
    const double f2 = std::norm(j.value);
    out[0] = B * norm_sq(magnetic_grad(kind, g, beta, j), sz);
    out[1] = f2;
    // |x|^g / rho^{g+1} = sqrt(r^{2g} / rho^{2g+2})
    out[2] = std::sqrt(B * radial::grad_rho_sq_over_rho_sq(g, j.r, y2)) * f2;
  }, &f);

  rep.theorem_id = ab ? "uncertainty_ab" : "uncertainty_lemma";
  rep.sharp_constant = std::sqrt(C);
  rep.lhs = std::sqrt(v[0]) * std::sqrt(v[1]);
  rep.rhs_terms = {{"main", rep.sharp_constant * v[2], true}};
  rep.diagnostics = {{"magnetic_energy", v[0]}, {"l2_norm_sq", v[1]},
                     {"weighted_integral", v[2]}};
  rep.resolution = to_json(spec);
  finish(rep, v[2]);
  return rep;
}

InequalityReport verify_constant_field(const GrushinGeometry& geom,
                                       const WeightExponents& exps,
                                       const ConstantFieldPotentials& pots,
                                       const TestFunction& f,
                                       const QuadratureSpec& spec) {
  check_ky(geom, f);
  if (geom.m != geom.k) throw DomainError("the constant-field form needs m = k = n");
  if (geom.m > 2) throw DomainError("the constant-field form is implemented for n <= 2");
  const int n = geom.m;
  if (static_cast<int>(pots.psi1.size()) != n || static_cast<int>(pots.psi2.size()) != n)
    throw DomainError("constant-field potentials need n entries each");
  const double Q = hom_dim(geom);
  if (!(Q + exps.alpha1 - 2.0 > 0.0))
    throw AdmissibilityError("need n(2 + gamma) + alpha1 - 2 > 0");
  if (!(n + exps.alpha2 * geom.gamma > 0.0))
    throw AdmissibilityError("need n + alpha2 gamma > 0");
  require_real(f, "the constant-field inequality");
  const double g = geom.gamma;
  const Region reg = grushin_region(f, n, geom.gamma);
  // 0: lhs, 1: weighted norm, 2: potential term, 3: Grushin energy
  const auto v = integrate_multi(reg, spec, 4, [&](const Node& nd, double* out) {
    const LocalJet& j = *nd.jet;
    const double y2 = y_sq(j);
    const double B = radial::weight_B(g, exps, j.r, y2);
    const double f2 = std::norm(j.value);
    double pot = 0.0;
    for (int i = 0; i < n; ++i) {
      const double p1 = pots.psi1[i](j.y[i]), p2 = pots.psi2[i](j.x[i]);
      pot += p1 * p1 + p2 * p2;
    }
    out[0] = B * norm_sq(constant_field_grad(pots, g, j), 2 * n);
    out[1] = B * radial::grad_rho_sq_over_rho_sq(g, j.r, y2) * f2;
    out[2] = B * pot * f2;
    out[3] = B * norm_sq(grushin_grad(g, j), grushin_size(j));
  }, &f);

  const double c = (Q + exps.alpha1 - 2.0) / 2.0;
  InequalityReport rep;
  rep.theorem_id = "constant_field";
  rep.sharp_constant = c * c;
  rep.lhs = v[0];
  rep.rhs_terms = {{"main", c * c * v[1], true}, {"potential", v[2], true}};
  rep.diagnostics = {{"weighted_norm", v[1]},
                     {"linear_constant", c},
                     {"main_linear", c * v[1]},
                     {"margin_linear", v[0] - c * v[1] - v[2]},
                     {"split_residual", v[0] - v[3] - v[2]}};
  rep.params = {{"geometry", geom_json(geom)}, {"weights", exps_json(exps)},
                {"potentials", pots.label}, {"function", function_json(f)}};
  rep.resolution = to_json(spec);
  finish(rep, v[1]);
  return rep;
}

// -- Landau -----------------------------------------------------------------

namespace {

void require_in_ball(const Region& reg, double R, const char* what) {
  if (!(R > 0.0) || !std::isfinite(R))
    throw DomainError(std::string(what) + " needs a ball radius R_Omega > 0");
  if (!reg.empty && reg.t_hi > std::log(R) + 1e-12)
    throw DomainError(std::string(what) + ": f must be supported in the ball");
}

Json psi_json(const RadialPotential& psi) { return psi.describe(); }

void check_superweight(const SuperweightParams& s, double Q) {
  if (!(s.a > 0.0 && s.b > 0.0)) throw AdmissibilityError("need a, b > 0");
  if (!(s.theta2 * s.theta3 < 0.0))
    throw AdmissibilityError("need theta2 theta3 < 0");
  if (!(s.p * s.theta4 - s.theta2 * s.theta3 <= Q - s.p))
    throw AdmissibilityError("need p theta4 - theta2 theta3 <= Q - p");
}

}  // namespace

IdentityReport check_twisted_polar_identity(const RadialPotential& psi,
                                            const RadialPotential& kappa,
                                            const TestFunction& f,
                                            const QuadratureSpec& spec) {
  require_plane(f, "the twisted gradient");
  const Region reg = make_region(f, 2);
  // 0: lhs, 1: polar form as displayed, 2: cross term
  const auto v = integrate_multi(reg, spec, 3, [&](const Node& n, double* out) {
    const LocalJet& j = *n.jet;
    const double k = kappa(j.r);
    if (!(k > 0.0)) throw DomainError("kappa must be positive on the support of f");
    const double ps = psi(j.r);
    const auto tg = twisted_grad_psi(ps, j);
    const cplx dp = d_phi(j);
    out[0] = (std::norm(tg[0]) + std::norm(tg[1])) / k;
    out[1] = (std::norm(d_r(j)) + std::norm(dp) / (j.r * j.r) +
              ps * ps * j.r * j.r * std::norm(j.value)) / k;
    out[2] = 2.0 * ps * (dp * std::conj(j.value)).imag() / k;
  }, &f);
  IdentityReport rep = identity("twisted_polar", v[0], v[1], std::abs(v[1]));
  rep.params = {{"psi", psi_json(psi)}, {"kappa", kappa.describe()},
                {"function", function_json(f)}};
  rep.resolution = to_json(spec);
  rep.diagnostics = {{"cross_term", v[2]},
                     {"residual_with_cross_term", v[0] - v[1] - v[2]}};
  return rep;
}

InequalityReport verify_landau(LandauVariant variant, const RadialPotential& psi,
                               const SuperweightParams& sw, const TestFunction& f,
                               const QuadratureSpec& spec, double R_Omega) {
  require_plane(f, "the Landau form");
  const Region reg = make_region(f, 2);
  InequalityReport rep;
  rep.theorem_id = std::string("landau_") + to_string(variant);
  rep.params = {{"variant", to_string(variant)}, {"psi", psi_json(psi)}};

  // gradient weight 1/kappa as a function of (t = log r, r)
  std::function<double(double, double)> wg;
  switch (variant) {
    case LandauVariant::HardySobolev:
      if (!(sw.theta1 != 0.0) || !std::isfinite(sw.theta1))
        throw AdmissibilityError("need theta1 != 0");
      rep.params["theta1"] = sw.theta1;
      wg = [th = sw.theta1](double, double r) { return std::pow(r, -2.0 * th); };
      break;
    case LandauVariant::Log:
      wg = [](double t, double) { return t * t; };
      break;
    case LandauVariant::Poincare:
      require_in_ball(reg, R_Omega, "the Poincare inequality");
      rep.params["R"] = R_Omega;
      wg = [](double, double) { return 1.0; };
      break;
    case LandauVariant::Superweight: {
      SuperweightParams s = sw;
      s.p = 2.0;
      check_superweight(s, 2.0);
      rep.params["a"] = s.a;
      rep.params["b"] = s.b;
      rep.params["theta2"] = s.theta2;
      rep.params["theta3"] = s.theta3;
      rep.params["theta4"] = s.theta4;
      wg = [s](double, double r) {
        return std::pow(s.a + s.b * std::pow(r, s.theta2), s.theta3) *
               std::pow(r, -2.0 * s.theta4);
      };
      break;
    }
  }
  rep.params["function"] = function_json(f);

  // 0: lhs, 1: w|f|^2/r^2, 2: |f|^2/r^2, 3: |f|^2, 4: psi term,
  // 5: remainder, 6: cross term, 7: radial energy
  const auto v = integrate_multi(reg, spec, 8, [&](const Node& n, double* out) {
    const LocalJet& j = *n.jet;
    const double w = wg(n.t, j.r), ps = psi(j.r);
    const double ir2 = 1.0 / (j.r * j.r);
    const double f2 = std::norm(j.value);
    const auto tg = twisted_grad_psi(ps, j);
    out[0] = w * (std::norm(tg[0]) + std::norm(tg[1]));
    out[1] = w * f2 * ir2;
    out[2] = f2 * ir2;
    out[3] = f2;
    out[4] = w * ps * ps * j.r * j.r * f2;
    out[5] = w * (f2 - std::norm(n.f0)) * ir2;
    out[6] = 2.0 * w * ps * (d_phi(j) * std::conj(j.value)).imag();
    out[7] = w * std::norm(d_r(j));
  }, &f);

  double main_int = 0.0;
  rep.lhs = v[0];
  switch (variant) {
    case LandauVariant::HardySobolev:
      rep.sharp_constant = sw.theta1 * sw.theta1;
      main_int = v[1];
      break;
    case LandauVariant::Log:
      // Gated on the 1/|z|^2 form implied by the logarithmic radial
      // inequality; the displayed unweighted form is kept as a diagnostic.
      rep.sharp_constant = 0.25;
      main_int = v[2];
      rep.diagnostics.push_back({"main_as_printed", 0.25 * v[3]});
      rep.diagnostics.push_back({"margin_as_printed", v[0] - 0.25 * v[3] - v[4] - v[5]});
      break;
    case LandauVariant::Poincare:
      rep.sharp_constant = 1.0 / (R_Omega * R_Omega);
      main_int = v[3];
      break;
    case LandauVariant::Superweight: {
      const double c = (sw.theta2 * sw.theta3 - 2.0 * sw.theta4) / 2.0;
      rep.sharp_constant = c * c;
      main_int = v[1];
      rep.diagnostics.push_back({"linear_constant", c});
      rep.diagnostics.push_back({"margin_linear", v[0] - c * v[1] - v[4] - v[5]});
      break;
    }
  }
  rep.rhs_terms = {{"main", rep.sharp_constant * main_int, true},
                   {"psi_term", v[4], true},
                   {"remainder", v[5], true}};
  rep.diagnostics.push_back({"main_integral", main_int});
  rep.diagnostics.push_back({"radial_energy", v[7]});
  rep.diagnostics.push_back({"cross_term", v[6]});
  rep.resolution = to_json(spec);
  finish(rep, main_int);
  return rep;
}

namespace {

// |grad_L f|^2 and |grad f|^2 at a node of C^n = R^{2n}. For n >= 2, f is
// radial and the point z = r u with u = (1, ..., 1)/sqrt(2n) is used.
std::pair<double, double> real_landau_density(int n, const LocalJet& j) {
  if (n == 1) {
    const auto tg = twisted_grad_psi(0.5, j);
    return {std::norm(tg[0]) + std::norm(tg[1]),
            std::norm(j.dx[0]) + std::norm(j.dx[1])};
  }
  const double u = 1.0 / std::sqrt(2.0 * n);
  const double zc = j.r * u;  // every coordinate of z
  const cplx fr = j.dx[0];
  const cplx half_if = cplx(0.0, 0.5) * j.value;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    s += std::norm(u * fr - half_if * zc);  // X_i f = d_{x_i} f - i y_i f / 2
    s += std::norm(u * fr + half_if * zc);  // Y_i f = d_{y_i} f + i x_i f / 2
  }
  return {s, std::norm(fr)};
}

void real_landau_pre(int n, const TestFunction& f) {
  if (n < 1) throw DomainError("n must be >= 1");
  require_plane(f, "the Landau gradient");
  require_real(f, "the real Landau inequalities");
}

}  // namespace

IdentityReport check_real_landau_identity(int n, const TestFunction& f,
                                          const QuadratureSpec& spec) {
  real_landau_pre(n, f);
  const Region reg = make_region(f, 2 * n);
  const auto v = integrate_multi(reg, spec, 3, [&](const Node& nd, double* out) {
    const auto [gl, g] = real_landau_density(n, *nd.jet);
    out[0] = gl;
    out[1] = g;
    out[2] = nd.r * nd.r / 4.0 * std::norm(nd.jet->value);
  }, &f);
  IdentityReport rep = identity("real_landau_identity", v[0], v[1] + v[2],
                                std::abs(v[1]) + std::abs(v[2]));
  rep.params = {{"n", n}, {"function", function_json(f)}};
  rep.resolution = to_json(spec);
  rep.diagnostics = {{"dirichlet", v[1]}, {"harmonic", v[2]}};
  return rep;
}

InequalityReport verify_real_landau(RealLandauVariant variant, int n,
                                    const TestFunction& f,
                                    const QuadratureSpec& spec, double R_Omega,
                                    double R) {
  real_landau_pre(n, f);
  const Region reg = make_region(f, 2 * n);
  const bool critical = variant == RealLandauVariant::Critical ||
                        variant == RealLandauVariant::UncertaintyCritical;
  InequalityReport rep;
  rep.theorem_id = std::string("real_landau_") + to_string(variant);
  rep.params = {{"variant", to_string(variant)}, {"n", n}};
  if (critical) {
    if (n != 1) throw AdmissibilityError("the critical inequality is for n = 1");
    require_in_ball(reg, R_Omega, "the critical Hardy inequality");
    if (!(R >= std::exp(1.0) * R_Omega))
      throw AdmissibilityError("need R >= e sup|z| over Omega");
    rep.params["R_Omega"] = R_Omega;
    rep.params["R"] = R;
  }
  rep.params["function"] = function_json(f);
  const double c2 = (n - 1.0) * (n - 1.0);

  // 0: |grad_L f|^2, 1: Hardy weight |f|^2, 2: |z|^2/4 |f|^2, 3: |f|^2,
  // 4: uncertainty rhs
  const auto v = integrate_multi(reg, spec, 5, [&](const Node& nd, double* out) {
    const LocalJet& j = *nd.jet;
    const double f2 = std::norm(j.value);
    const double r2 = nd.r * nd.r;
    double hw;
    if (critical) {
      const double l = std::log(R) - nd.t;
      hw = 0.25 / (r2 * l * l);
    } else {
      hw = c2 / r2;
    }
    out[0] = real_landau_density(n, j).first;
    out[1] = (critical ? 4.0 * hw : 1.0 / r2) * f2;
    out[2] = r2 / 4.0 * f2;
    out[3] = f2;
    out[4] = std::sqrt(hw + r2 / 4.0) * f2;
  }, &f);

  double main_int;
  switch (variant) {
    case RealLandauVariant::Hardy:
    case RealLandauVariant::Critical:
      rep.sharp_constant = critical ? 0.25 : c2;
      rep.lhs = v[0];
      rep.rhs_terms = {{"main", rep.sharp_constant * v[1], true},
                       {"harmonic", v[2], true}};
      main_int = v[1];
      break;
    default:
      rep.sharp_constant = 1.0;
      rep.lhs = std::sqrt(v[0]) * std::sqrt(v[3]);
      rep.rhs_terms = {{"main", v[4], true}};
      main_int = v[4];
      break;
  }
  rep.diagnostics = {{"landau_energy", v[0]}, {"l2_norm_sq", v[3]},
                     {"main_integral", main_int}};
  rep.resolution = to_json(spec);
  finish(rep, main_int);
  return rep;
}

// -- radial L^p ---------------------------------------------------------------

namespace {

// Interior zeros of h >= 0 on the region's t range: strict local minima of a
// 4096-point scan, refined by golden section, kept if h is negligible there.
void add_zero_breaks(Region& reg, const std::function<double(double)>& h) {
  constexpr int n = 4096;
  const double lo = reg.t_lo, dt = (reg.t_hi - reg.t_lo) / n;
  std::vector<double> v(n + 1);
  double top = 0.0;
  for (int i = 0; i <= n; ++i) top = std::max(top, v[i] = h(lo + i * dt));
  if (!(top > 0.0)) return;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int i = 1; i < n; ++i) {
    if (!(v[i] < v[i - 1] && v[i] < v[i + 1] && v[i] < 1e-2 * top)) continue;
    double a = lo + (i - 1) * dt, b = lo + (i + 1) * dt;
    double c = b - g * (b - a), d = a + g * (b - a);
    for (int it = 0; it < 80 && b - a > 1e-15 * (1.0 + std::abs(a)); ++it) {
      if (h(c) < h(d)) b = d;
      else a = c;
      c = b - g * (b - a);
      d = a + g * (b - a);
    }
    const double t = 0.5 * (a + b);
    if (h(t) <= 1e-6 * top) reg.t_breaks.push_back(t);
  }
}

}  // namespace

InequalityReport verify_radial_p(RadialPVariant variant, double Q, double p,
                                 const RadialPParams& prm, const TestFunction& f,
                                 const QuadratureSpec& spec) {
  if (f.ky() != 0 || f.has_nonzero_modes())
    throw DomainError("the radial L^p inequalities take radial functions");
  if (!(p > 1.0) || !std::isfinite(p)) throw AdmissibilityError("need p > 1");
  if (!(Q > 0.0) || !std::isfinite(Q)) throw AdmissibilityError("need Q > 0");
  InequalityReport rep;
  rep.theorem_id = std::string("radial_p_") + to_string(variant);
  rep.params = {{"variant", to_string(variant)}, {"Q", Q}, {"p", p}};
  const Region reg = make_region(f, 2);
  const SuperweightParams& s = prm.sw;
  switch (variant) {
    case RadialPVariant::Weighted:
      if (!std::isfinite(prm.theta) || prm.theta * p == Q)
        throw AdmissibilityError("need theta p != Q (use the log variant)");
      rep.params["theta"] = prm.theta;
      rep.sharp_constant = std::pow(std::abs((Q - prm.theta * p) / p), p);
      break;
    case RadialPVariant::Log:
      rep.sharp_constant = std::pow(p, -p);
      break;
    case RadialPVariant::Poincare:
      require_in_ball(reg, prm.R, "the Poincare inequality");
      rep.params["R"] = prm.R;
      rep.sharp_constant = std::pow(Q / (prm.R * p), p);
      break;
    case RadialPVariant::Superweight: {
      SuperweightParams sp = s;
      sp.p = p;
      check_superweight(sp, Q);
      rep.params["a"] = s.a;
      rep.params["b"] = s.b;
      rep.params["theta2"] = s.theta2;
      rep.params["theta3"] = s.theta3;
      rep.params["theta4"] = s.theta4;
      const double c = (Q - p * s.theta4 + s.theta2 * s.theta3 - p) / p;
      rep.sharp_constant = std::pow(c, p);
      rep.diagnostics.push_back({"linear_constant", c});
      break;
    }
  }
  rep.params["function"] = function_json(f);

  // |g|^p has a kink wherever g vanishes inside the support (p not even):
  // break the panels there so Gauss-Legendre keeps its convergence
  Region kinked = reg;
  if (!spec.oracle && reg.loglog_sign == 0 && !reg.empty &&
      !(p == std::round(p) && std::fmod(p, 2.0) == 0.0)) {
    const std::span<const double> none;
    add_zero_breaks(kinked, [&](double t) { return std::abs(f.partials(t, 0.0, none).d_t); });
    add_zero_breaks(kinked, [&](double t) { return std::abs(f.value(t, 0.0, none)); });
    if (variant == RadialPVariant::Log) kinked.t_breaks.push_back(0.0);
  }
  const RadialRule rule = spec.oracle ? radial_oracle_rule(reg, spec.oracle_n_r)
                                      : radial_rule(kinked, spec.n_r);
  KahanSum lhs, main;
  const std::span<const double> no_y;
  for (std::size_t i = 0; i < rule.t.size(); ++i) {
    const double t = rule.t[i], r = std::exp(t);
    const Partials P = f.partials(t, 0.0, no_y);
    const double fa = std::pow(std::abs(P.value), p);
    double gl = 0.0, gm = 0.0;  // densities against r^{Q-1} dr
    switch (variant) {
      case RadialPVariant::Weighted: {
        const double w = std::pow(r, -prm.theta * p);
        gl = std::pow(std::abs(P.d_t), p) * w;
        gm = fa * w;
        break;
      }
      case RadialPVariant::Log:
        gl = std::pow(std::abs(P.d_t) * std::abs(t), p) * std::pow(r, -Q);
        gm = fa * std::pow(r, -Q);
        break;
      case RadialPVariant::Poincare:
        gl = std::pow(std::abs(P.d_r), p);
        gm = fa;
        break;
      case RadialPVariant::Superweight: {
        const double w = std::pow(s.a + s.b * std::pow(r, s.theta2), s.theta3) *
                         std::pow(r, -p * s.theta4);
        gl = w * std::pow(std::abs(P.d_r), p);
        gm = w * fa * std::pow(r, -p);
        break;
      }
    }
    const double jac = rule.w[i] * std::exp(Q * t);  // r^{Q-1} dr = r^Q dt
    if (!std::isfinite(gl) || !std::isfinite(gm))
      throw NonFiniteError("non-finite radial density at t = " + std::to_string(t));
    lhs.add(jac * gl);
    main.add(jac * gm);
  }
  rep.lhs = lhs.value();
  rep.rhs_terms = {{"main", rep.sharp_constant * main.value(), true}};
  rep.diagnostics.push_back({"main_integral", main.value()});
  if (variant == RadialPVariant::Superweight)
    rep.diagnostics.push_back(
        {"margin_linear", rep.lhs - rep.diagnostics[0].second * main.value()});
  rep.resolution = to_json(spec);
  finish(rep, main.value());
  return rep;
}

}  // namespace mhardy
