#include "mhardy/sharpness.hpp"

#include <algorithm>
#include <cmath>

#include "mhardy/errors.hpp"

namespace mhardy {

namespace {

bool is_grushin(const std::string& id) {
  return id == "radial_hardy" || id == "magnetic_grushin" || id == "ab_hardy";
}

// Exponent E with the extremal r^{-E/p} for the superweight form, taken at
// the end where b r^theta2 dominates a.
double superweight_E(const SuperweightParams& s, double Q, double p) {
  return Q - p + s.theta2 * s.theta3 - p * s.theta4;
}

// Plateau start for the superweight trial: far enough into the dominant end
// that a / (b r^theta2) < e^-12.
double superweight_anchor(const SuperweightParams& s) {
  return (std::log(s.a / s.b) + 12.0) / s.theta2;
}

double grushin_quotient(const SharpnessSetup& st, double eps,
                        const QuadratureSpec& spec) {
  const TestFunction f = sharpness_trial(st, eps);
  const double L = 1.0 / eps;
  // Exact reduction for functions of rho: with s = log rho,
  //   lhs / main = int g_s^2 e^{(Q+a1-2)s} ds / int g^2 e^{(Q+a1-2)s} ds,
  // evaluated along y = 0 where rho = |x|.
  Region reg;
  reg.m = 1;
  reg.t_lo = -L / 2;
  reg.t_hi = L / 2;
  const double w = L / 4;
  reg.t_breaks = {reg.t_lo, reg.t_lo + w, reg.t_hi - w, reg.t_hi};
  const RadialRule rule = spec.oracle ? radial_oracle_rule(reg, spec.oracle_n_r)
                                      : radial_rule(reg, spec.n_r);
  const double e = hom_dim(st.geom) + st.exps.alpha1 - 2.0;
  const YVec zero{};
  const std::span<const double> y(zero.data(), static_cast<std::size_t>(st.geom.k));
  KahanSum num, den;
  for (std::size_t i = 0; i < rule.t.size(); ++i) {
    const double t = rule.t[i];
    const Partials P = f.partials(t, 0.0, y);
    const double jac = rule.w[i] * std::exp(e * t);
    num.add(jac * std::norm(P.d_t));
    den.add(jac * std::norm(P.value));
  }
  double q = num.value() / den.value();
  if (st.theorem_id != "radial_hardy") q += st.beta * st.beta;
  return q;
}

}  // namespace

std::vector<std::string> sharpness_ids() {
  return {"radial_hardy",         "magnetic_grushin",  "ab_hardy",
          "landau_hardy_sobolev", "landau_log",        "landau_superweight",
          "radial_p_weighted",    "radial_p_log",      "radial_p_superweight"};
}

TrialBase expected_family(const std::string& id) {
  if (is_grushin(id)) return TrialBase::RhoPower;
  if (id == "landau_hardy_sobolev" || id == "radial_p_weighted")
    return TrialBase::InversePower;
  if (id == "landau_log" || id == "radial_p_log") return TrialBase::LogPower;
  if (id == "landau_superweight" || id == "radial_p_superweight")
    return TrialBase::Power;
  throw DomainError("no trial family for theorem id '" + id + "'");
}

std::vector<double> default_schedule() { return {0.5, 0.2, 0.1, 0.05, 0.02}; }

TestFunction sharpness_trial(const SharpnessSetup& st, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps))
    throw DomainError("schedule epsilon must be positive");
  const double L = 1.0 / eps;
  const std::string& id = st.theorem_id;
  TrialFamily fam;
  fam.base = expected_family(id);
  if (is_grushin(id)) {
    fam.lo = -L / 2;
    fam.hi = L / 2;
    return make_trial(fam, st.geom, st.exps);
  }
  const bool landau = id.rfind("landau_", 0) == 0;
  const double Q = landau ? 2.0 : st.Q, p = landau ? 2.0 : st.p;
  switch (fam.base) {
    case TrialBase::InversePower: {
      const double theta = landau ? st.sw.theta1 + 1.0 : st.theta;
      fam.exponent = (Q - theta * p) / p;  // r^{-C}
      fam.lo = -L / 2;
      fam.hi = L / 2;
      break;
    }
    case TrialBase::LogPower:
      // |log r|^{-1/p}; in s = log|log r| the plateau ends at |log r| = 40
      fam.exponent = -1.0 / p;
      fam.sign = 1;
      fam.hi = std::log(40.0);
      fam.lo = fam.hi - L;
      break;
    case TrialBase::Power: {
      SuperweightParams s = st.sw;
      fam.exponent = -superweight_E(s, Q, p) / p;
      const double t0 = superweight_anchor(s);
      if (s.theta2 > 0) {
        fam.lo = t0;
        fam.hi = t0 + L;
      } else {
        fam.lo = t0 - L;
        fam.hi = t0;
      }
      break;
    }
    case TrialBase::RhoPower:
      break;
  }
  return make_trial(fam);
}

SharpnessResult estimate_sharpness(const SharpnessSetup& st, TrialBase base,
                                   std::span<const double> schedule,
                                   const QuadratureSpec& spec) {
  const std::string& id = st.theorem_id;
  if (expected_family(id) != base)
    throw DomainError(std::string("theorem '") + id + "' expects the " +
                      to_string(expected_family(id)) + " family, not " +
                      to_string(base));
  if (schedule.empty()) throw DomainError("empty sharpness schedule");

  SharpnessResult res;
  res.theorem_id = id;
  res.params = {{"family", to_string(base)}};
  const RadialPotential no_psi = RadialPotential::constant(0.0);

  for (double eps : schedule) {
    double q = 0.0, sharp = 0.0;
    if (is_grushin(id)) {
      // admissibility and the constant come from the verifier contracts
      const GrushinGeometry& g = st.geom;
      const double c = (hom_dim(g) + st.exps.alpha1 - 2.0) / 2.0;
      if (id == "ab_hardy") {
        if (g.m != 2) throw DomainError("ab_hardy lives on R^2 x R^k");
        if (!(st.exps.alpha1 + g.k * (g.gamma + 1.0) > 0.0))
          throw AdmissibilityError("need alpha1 + k(gamma + 1) > 0");
        const bool ok = st.adm == Admissibility::Thm2
                            ? st.exps.alpha2 + 2.0 * g.gamma > 0.0
                            : st.exps.alpha2 * g.gamma + 2.0 > 0.0;
        if (!ok) throw AdmissibilityError("second admissibility condition fails");
      } else {
        if (!(c > 0.0)) throw AdmissibilityError("need Q + alpha1 - 2 > 0");
        if (!(g.m + st.exps.alpha2 * g.gamma > 0.0))
          throw AdmissibilityError("need m + alpha2 gamma > 0");
      }
      sharp = c * c + (id == "radial_hardy" ? 0.0 : st.beta * st.beta);
      q = grushin_quotient(st, eps, spec);
      res.method = "exact reduction to log rho along y = 0";
    } else if (id.rfind("landau_", 0) == 0) {
      const TestFunction f = sharpness_trial(st, eps);
      const LandauVariant v = id == "landau_hardy_sobolev" ? LandauVariant::HardySobolev
                              : id == "landau_log"         ? LandauVariant::Log
                                                           : LandauVariant::Superweight;
      const InequalityReport r = verify_landau(v, no_psi, st.sw, f, spec);
      sharp = r.sharp_constant;
      // (lhs - psi term - remainder) / main integral; psi = 0, f radial
      q = (r.lhs - r.rhs_terms[1].value - r.rhs_terms[2].value) /
          (r.rhs_terms[0].value / (sharp != 0.0 ? sharp : 1.0));
      if (sharp == 0.0) q = r.ratio;
      res.method = "planar quadrature of the radial trial";
    } else {
      const TestFunction f = sharpness_trial(st, eps);
      RadialPParams prm;
      prm.theta = st.theta;
      prm.sw = st.sw;
      const RadialPVariant v = id == "radial_p_weighted" ? RadialPVariant::Weighted
                               : id == "radial_p_log"    ? RadialPVariant::Log
                                                         : RadialPVariant::Superweight;
      const InequalityReport r = verify_radial_p(v, st.Q, st.p, prm, f, spec);
      sharp = r.sharp_constant;
      q = r.ratio;
      res.method = "radial quadrature of the trial";
    }
    res.sharp_constant = sharp;
    res.schedule.push_back({eps, q});
  }

  const double tol = 1e-9 * std::max(1.0, std::abs(res.sharp_constant));
  res.best_quotient = res.schedule.front().quotient;
  for (std::size_t i = 0; i < res.schedule.size(); ++i) {
    const double q = res.schedule[i].quotient;
    res.best_quotient = std::min(res.best_quotient, q);
    if (q < res.sharp_constant - tol) res.one_sided = false;
    if (i > 0 && q > res.schedule[i - 1].quotient + tol) res.monotone = false;
  }
  res.gap = res.sharp_constant != 0.0
                ? (res.best_quotient - res.sharp_constant) / res.sharp_constant
                : res.best_quotient - res.sharp_constant;
  return res;
}

}  // namespace mhardy
