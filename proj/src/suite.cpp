#include "mhardy/suite.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <variant>

#include "mhardy/errors.hpp"

namespace mhardy {

namespace {

// -- schema helpers -----------------------------------------------------------

void check_keys(const Json& obj, std::initializer_list<const char*> allowed,
                const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, _] : obj.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double num(const Json& obj, const char* key, double def, const std::string& where) {
  if (!obj.contains(key)) return def;
  const Json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(where + "." + key + ": expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(where + "." + key + ": not finite");
  return d;
}

int integer(const Json& obj, const char* key, int def, const std::string& where) {
  if (!obj.contains(key)) return def;
  const Json& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

std::uint64_t seed_of(const Json& obj, std::uint64_t def, const std::string& where) {
  if (!obj.contains("seed")) return def;
  const Json& v = obj.at("seed");
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0))
    throw ConfigError(where + ".seed: expected a nonnegative integer");
  return v.get<std::uint64_t>();
}

std::optional<Admissibility> adm_of(const Json& obj, const std::string& where) {
  if (!obj.contains("admissibility")) return std::nullopt;
  const Json& v = obj.at("admissibility");
  if (!v.is_string()) throw ConfigError(where + ".admissibility: expected a string");
  auto a = admissibility_from_string(v.get<std::string>());
  if (!a) throw ConfigError(where + ".admissibility: expected 'thm2' or 'corollary'");
  return a;
}

QuadratureSpec parse_quadrature(const Json& j, QuadratureSpec q, const std::string& where) {
  check_keys(j, {"n_r", "n_phi", "n_y", "oracle", "oracle_n_r", "oracle_n_y"}, where);
  q.n_r = integer(j, "n_r", q.n_r, where);
  q.n_phi = integer(j, "n_phi", q.n_phi, where);
  q.n_y = integer(j, "n_y", q.n_y, where);
  q.oracle_n_r = integer(j, "oracle_n_r", q.oracle_n_r, where);
  q.oracle_n_y = integer(j, "oracle_n_y", q.oracle_n_y, where);
  if (j.contains("oracle")) {
    if (!j.at("oracle").is_boolean()) throw ConfigError(where + ".oracle: expected a boolean");
    q.oracle = j.at("oracle").get<bool>();
  }
  if (q.n_r < 2 || q.n_phi < 4 || q.n_y < 2 || q.oracle_n_r < 2 || q.oracle_n_y < 2 ||
      q.n_r > 100000 || q.n_phi > 100000 || q.n_y > 100000)
    throw ConfigError(where + ": resolution out of range");
  return q;
}

void check_potential(const Json& j, const std::string& where) {
  check_keys(j, {"kind", "c", "s"}, where);
  if (!j.contains("kind")) return;
  const Json& k = j.at("kind");
  if (!k.is_string() || (k != "constant" && k != "power"))
    throw ConfigError(where + ".kind: expected 'constant' or 'power'");
  num(j, "c", 0.0, where);
  num(j, "s", 0.0, where);
}

RadialPotential make_potential(const Json& j, double default_c) {
  const std::string kind = j.value("kind", std::string("constant"));
  const double c = j.value("c", default_c);
  if (kind == "power") return RadialPotential::power(c, j.value("s", 0.0));
  return RadialPotential::constant(c);
}

// -- function specs -------------------------------------------------------------

struct ModeSpec {
  int k = 0;
  cplx amp{1.0, 0.0};
};

cplx parse_amp(const Json& a, const std::string& where) {
  if (a.is_number()) return {a.get<double>(), 0.0};
  if (a.is_array() && a.size() == 2 && a[0].is_number() && a[1].is_number())
    return {a[0].get<double>(), a[1].get<double>()};
  throw ConfigError(where + ": amp must be a number or [re, im]");
}

std::vector<ModeSpec> parse_modes(const Json& fs, const std::string& where) {
  std::vector<ModeSpec> out;
  if (!fs.contains("modes")) return {ModeSpec{}};
  const Json& ms = fs.at("modes");
  if (!ms.is_array() || ms.empty()) throw ConfigError(where + ".modes: expected a nonempty list");
  for (std::size_t i = 0; i < ms.size(); ++i) {
    const std::string w = where + ".modes[" + std::to_string(i) + "]";
    ModeSpec m;
    if (ms[i].is_number_integer()) {
      m.k = ms[i].get<int>();
    } else {
      check_keys(ms[i], {"k", "amp"}, w);
      m.k = integer(ms[i], "k", 0, w);
      if (ms[i].contains("amp")) m.amp = parse_amp(ms[i].at("amp"), w);
    }
    out.push_back(m);
  }
  return out;
}

std::vector<std::pair<double, double>> parse_y_box(const Json& fs, int ky,
                                                   const std::string& where) {
  std::vector<std::pair<double, double>> box(ky, {-1.0, 1.0});
  if (!fs.contains("y_box")) return box;
  const Json& b = fs.at("y_box");
  if (!b.is_array() || static_cast<int>(b.size()) != ky)
    throw ConfigError(where + ".y_box: expected one [lo, hi] per y axis");
  for (int i = 0; i < ky; ++i) {
    if (!b[i].is_array() || b[i].size() != 2 || !b[i][0].is_number() || !b[i][1].is_number())
      throw ConfigError(where + ".y_box: expected [lo, hi] pairs");
    box[i] = {b[i][0].get<double>(), b[i][1].get<double>()};
  }
  return box;
}

// Uniform in [0, 1) from the top 53 bits; portable across standard libraries.
double unit(std::mt19937_64& g) { return static_cast<double>(g() >> 11) * 0x1.0p-53; }
double uniform(std::mt19937_64& g, double lo, double hi) { return lo + (hi - lo) * unit(g); }

TestFunction random_function(const Json& fs, int ky, std::uint64_t seed,
                             const std::string& where) {
  std::mt19937_64 g(seed);
  const bool real = fs.value("real", false);
  std::vector<int> ks;
  if (fs.contains("modes")) {
    for (const ModeSpec& m : parse_modes(fs, where)) ks.push_back(m.k);
  } else {
    for (int k = -2; k <= 2; ++k)
      if (unit(g) < 0.5) ks.push_back(k);
    if (ks.empty()) ks.push_back(0);
  }
  std::set<int> uniq;
  for (int k : ks) uniq.insert(real ? std::abs(k) : k);
  std::vector<AngularMode> modes;
  for (int k : uniq) {
    const double r_lo = std::exp(uniform(g, -1.5, 0.0));
    const double r_hi = r_lo * std::exp(uniform(g, 0.5, 2.5));
    std::vector<std::pair<double, double>> box;
    for (int i = 0; i < ky; ++i) {
      const double c = uniform(g, -0.5, 0.5), h = uniform(g, 0.5, 1.5);
      box.push_back({c - h, c + h});
    }
    std::vector<Factor> fac = make_bump(r_lo, r_hi, box);
    fac.push_back(Factor::exp_t(uniform(g, -1.0, 1.0)));
    const cplx amp(uniform(g, -1.0, 1.0), real && k == 0 ? 0.0 : uniform(g, -1.0, 1.0));
    if (real && k != 0) {
      modes.push_back({k, amp, fac});
      modes.push_back({-k, std::conj(amp), fac});
    } else {
      modes.push_back({k, real ? cplx(amp.real() + (amp.real() >= 0 ? 0.1 : -0.1), 0.0) : amp,
                       fac});
    }
  }
  return TestFunction(ky, std::move(modes));
}

// -- id tables ------------------------------------------------------------------

struct IdInfo {
  const char* id;
  const char* kind;
  const char* constant;
  const char* conditions;
  const char* anchor;
};

const IdInfo kIds[] = {
    {"radial_hardy", "inequality", "((Q + alpha1 - 2)/2)^2",
     "Q + alpha1 - 2 > 0, m + alpha2 gamma > 0",
     "weighted Hardy inequality for the radial Grushin gradient"},
    {"grushin_ibp", "identity", "-",
     "Q + alpha1 - 2 > 0, m + alpha2 gamma > 0; any real alpha",
     "integration-by-parts identity behind the radial Hardy inequality"},
    {"magnetic_grushin", "inequality", "((Q + alpha1 - 2)/2)^2 + beta^2",
     "as radial_hardy; real-valued f",
     "magnetic Hardy inequality with potential grad_g rho / rho"},
    {"hardy2_split", "identity", "-", "as magnetic_grushin",
     "energy split |(grad_g + i beta A) f|^2 = |grad_g f|^2 + beta^2 |A|^2 |f|^2 for real f"},
    {"ab_hardy", "inequality",
     "((alpha1 + k(gamma + 1))/2)^2 + beta^2, plus remainder int B (|f|^2 - |f0|^2)/|x|^2",
     "m = 2, alpha1 + k(gamma + 1) > 0; thm2: alpha2 + 2 gamma > 0 | corollary: alpha2 gamma + 2 > 0",
     "Aharonov-Bohm type Hardy inequality on R^2 x R^k with angular remainder"},
    {"uncertainty_lemma", "inequality", "sqrt(((Q + alpha1 - 2)/2)^2 + beta^2)",
     "as magnetic_grushin", "uncertainty principle from the magnetic Grushin inequality"},
    {"uncertainty_ab", "inequality",
     "sqrt(((alpha1 + k(gamma + 1))/2)^2 + beta^2)", "as ab_hardy",
     "uncertainty principle from the Aharonov-Bohm type inequality"},
    {"constant_field", "inequality",
     "((n(2 + gamma) + alpha1 - 2)/2)^2 (unsquared reading reported alongside)",
     "m = k = n <= 2, n(2 + gamma) + alpha1 - 2 > 0, n + alpha2 gamma > 0; real-valued f",
     "Grushin form with a constant magnetic field"},
    {"twisted_polar", "identity", "-", "f on R^2, kappa > 0",
     "polar form of the generalized twisted gradient"},
    {"landau_hardy_sobolev", "inequality",
     "theta1^2, plus psi term and angular remainder", "theta1 != 0; f on R^2",
     "Hardy-Sobolev type inequality for the twisted gradient"},
    {"landau_log", "inequality",
     "1/4 against int |f|^2/|z|^2 (the unweighted reading is reported alongside)",
     "f on R^2", "logarithmic Hardy inequality for the twisted gradient"},
    {"landau_poincare", "inequality", "1/R^2", "supp f inside the ball of radius R",
     "Poincare type inequality for the twisted gradient"},
    {"landau_superweight", "inequality", "((theta2 theta3 - 2 theta4)/2)^2",
     "a, b > 0, theta2 theta3 < 0, 2 theta4 - theta2 theta3 <= 0",
     "superweighted Hardy inequality for the twisted gradient"},
    {"real_landau_identity", "identity", "-", "real-valued f on C^n",
     "|grad_L f|^2 = |grad f|^2 + |z|^2/4 |f|^2 for real f"},
    {"real_landau_hardy", "inequality", "(n - 1)^2, plus int |z|^2/4 |f|^2",
     "real-valued f on C^n", "Hardy inequality for the Landau gradient"},
    {"real_landau_critical", "inequality",
     "1/4 against int |f|^2 / (|z|^2 log^2(R/|z|)), plus int |z|^2/4 |f|^2",
     "n = 1, supp f in the ball of radius R_Omega, R >= e R_Omega",
     "critical Hardy inequality for the Landau gradient"},
    {"real_landau_uncertainty", "inequality", "1",
     "real-valued f on C^n", "uncertainty principle for the Landau gradient"},
    {"real_landau_uncertainty_critical", "inequality", "1",
     "as real_landau_critical", "critical uncertainty principle for the Landau gradient"},
    {"radial_p_weighted", "inequality", "|(Q - theta p)/p|^p", "p > 1, theta p != Q",
     "weighted L^p Hardy inequality for the Euler operator"},
    {"radial_p_log", "inequality", "p^-p", "p > 1",
     "logarithmic L^p Hardy inequality for the Euler operator"},
    {"radial_p_poincare", "inequality", "(Q/(R p))^p", "p > 1, supp f in the ball of radius R",
     "L^p Poincare inequality"},
    {"radial_p_superweight", "inequality", "((Q - p theta4 + theta2 theta3 - p)/p)^p",
     "a, b > 0, theta2 theta3 < 0, p theta4 - theta2 theta3 <= Q - p",
     "superweighted L^p Hardy inequality"},
};

const IdInfo* find_id(const std::string& id) {
  for (const IdInfo& i : kIds)
    if (id == i.id) return &i;
  return nullptr;
}

bool starts_with(const std::string& s, const char* p) { return s.rfind(p, 0) == 0; }

bool is_grushin_id(const std::string& id) {
  return id == "radial_hardy" || id == "grushin_ibp" || id == "magnetic_grushin" ||
         id == "hardy2_split" || id == "ab_hardy" || starts_with(id, "uncertainty_") ||
         id == "constant_field";
}

// -- running ------------------------------------------------------------------

using AnyReport = std::variant<InequalityReport, IdentityReport>;

Json default_function(const RunSpec& run) {
  Json fs = {{"family", "bump"}};
  double R_ball = 0.0;
  if (run.theorem_id == "landau_poincare" || run.theorem_id == "radial_p_poincare")
    R_ball = run.theorem_id == "landau_poincare" ? run.R_Omega : run.R;
  if (starts_with(run.theorem_id, "real_landau_") &&
      run.theorem_id.find("critical") != std::string::npos)
    R_ball = run.R_Omega;
  if (R_ball > 0.0) {
    fs["r_lo"] = 0.2 * R_ball;
    fs["r_hi"] = 0.9 * R_ball;
  }
  return fs;
}

AnyReport evaluate(const RunSpec& run, Admissibility adm, const QuadratureSpec& q) {
  const std::string& id = run.theorem_id;
  const bool grushin = is_grushin_id(id);
  const int ky = grushin ? run.geom.k : 0;
  if (grushin) run.geom.validate();
  Json fs = run.function.empty() ? default_function(run) : run.function;
  if (fs.value("family", std::string()) == "random" && !fs.contains("modes") &&
      (starts_with(id, "radial_p_") || (grushin && run.geom.m != 2)))
    fs["modes"] = Json::array({0});
  const TestFunction f = build_function(fs, ky, run.geom, run.exps, run.seed);
  const FluxParam flux{run.beta};
  const RadialPotential psi = make_potential(run.psi, 0.5);

  if (id == "radial_hardy") return verify_radial_hardy(run.geom, run.exps, f, q);
  if (id == "grushin_ibp")
    return check_grushin_ibp_identity(run.geom, run.exps, f, run.alpha, q);
  if (id == "magnetic_grushin")
    return verify_magnetic_grushin(run.geom, run.exps, flux, f, q);
  if (id == "hardy2_split") return check_hardy2_split(run.geom, run.exps, flux, f, q);
  if (id == "ab_hardy") return verify_ab_hardy(run.geom, run.exps, flux, f, q, adm);
  if (id == "uncertainty_lemma")
    return verify_uncertainty_grushin(run.geom, run.exps, flux, f, q,
                                      UncertaintyVariant::Lemma, adm);
  if (id == "uncertainty_ab")
    return verify_uncertainty_grushin(run.geom, run.exps, flux, f, q,
                                      UncertaintyVariant::AB, adm);
  if (id == "constant_field") {
    const int n = run.geom.m;
    const std::string kind = run.potentials.value("kind", std::string("linear"));
    const ConstantFieldPotentials pots =
        kind == "zero" ? ConstantFieldPotentials::zero(n)
                       : ConstantFieldPotentials::linear(n, run.potentials.value("c", 0.5));
    return verify_constant_field(run.geom, run.exps, pots, f, q);
  }
  if (id == "twisted_polar")
    return check_twisted_polar_identity(psi, make_potential(run.kappa, 1.0), f, q);
  if (starts_with(id, "landau_")) {
    const std::string v = id.substr(7);
    const LandauVariant lv = v == "hardy_sobolev" ? LandauVariant::HardySobolev
                             : v == "log"         ? LandauVariant::Log
                             : v == "poincare"    ? LandauVariant::Poincare
                                                  : LandauVariant::Superweight;
    return verify_landau(lv, psi, run.sw, f, q, run.R_Omega);
  }
  if (id == "real_landau_identity") return check_real_landau_identity(run.n, f, q);
  if (starts_with(id, "real_landau_")) {
    const std::string v = id.substr(12);
    const RealLandauVariant rv = v == "hardy"         ? RealLandauVariant::Hardy
                                 : v == "critical"    ? RealLandauVariant::Critical
                                 : v == "uncertainty" ? RealLandauVariant::Uncertainty
                                                      : RealLandauVariant::UncertaintyCritical;
    return verify_real_landau(rv, run.n, f, q, run.R_Omega, run.R);
  }
  const std::string v = id.substr(9);
  const RadialPVariant pv = v == "weighted"   ? RadialPVariant::Weighted
                            : v == "log"      ? RadialPVariant::Log
                            : v == "poincare" ? RadialPVariant::Poincare
                                              : RadialPVariant::Superweight;
  RadialPParams prm;
  prm.theta = run.theta;
  prm.R = run.R;
  prm.sw = run.sw;
  return verify_radial_p(pv, run.Q, run.p, prm, f, q);
}

double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s > 0.0 ? std::abs(a - b) / s : 0.0;
}

Json oracle_comparison(const AnyReport& main, const AnyReport& orc) {
  Json j = Json::object();
  double worst = 0.0;
  auto add = [&](const std::string& name, double a, double b) {
    const double d = rel_diff(a, b);
    j[name] = {{"main", a}, {"oracle", b}, {"rel_diff", d}};
    worst = std::max(worst, d);
  };
  if (const auto* m = std::get_if<InequalityReport>(&main)) {
    const auto& o = std::get<InequalityReport>(orc);
    add("lhs", m->lhs, o.lhs);
    for (std::size_t i = 0; i < m->rhs_terms.size(); ++i)
      add(m->rhs_terms[i].name, m->rhs_terms[i].value, o.rhs_terms[i].value);
  } else {
    const auto& m2 = std::get<IdentityReport>(main);
    const auto& o = std::get<IdentityReport>(orc);
    add("lhs", m2.lhs, o.lhs);
    add("rhs", m2.rhs, o.rhs);
  }
  j["max_rel_diff"] = worst;
  return j;
}

Json error_json(const char* kind, const std::string& msg) {
  return {{"kind", kind}, {"message", msg}};
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string file_stem(const RunSpec& run, std::size_t index) {
  std::string base = run.name.empty() ? run.theorem_id : run.name;
  for (char& c : base)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) c = '_';
  char idx[16];
  std::snprintf(idx, sizeof idx, "%03zu", index);
  return std::string(idx) + "_" + base;
}

Admissibility resolve_adm(const RunSpec& run, const SuiteConfig& cfg,
                          const SuiteOptions& opt) {
  if (opt.admissibility) return *opt.admissibility;
  if (run.admissibility) return *run.admissibility;
  if (cfg.admissibility) return *cfg.admissibility;
  return Admissibility::Corollary;
}

}  // namespace

// -- config parsing -----------------------------------------------------------

std::vector<std::string> theorem_ids() {
  std::vector<std::string> out;
  for (const IdInfo& i : kIds) out.push_back(i.id);
  return out;
}

bool is_identity_id(const std::string& id) {
  const IdInfo* i = find_id(id);
  return i && std::string(i->kind) == "identity";
}

SuiteConfig parse_suite_config(const Json& j) {
  check_keys(j, {"seed", "admissibility", "quadrature", "runs"}, "config");
  SuiteConfig cfg;
  cfg.seed = seed_of(j, 0, "config");
  cfg.admissibility = adm_of(j, "config");
  QuadratureSpec base;
  if (j.contains("quadrature")) base = parse_quadrature(j.at("quadrature"), base, "config.quadrature");
  if (!j.contains("runs")) return cfg;
  const Json& runs = j.at("runs");
  if (!runs.is_array()) throw ConfigError("config.runs: expected a list");
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const std::string w = "runs[" + std::to_string(i) + "]";
    const Json& r = runs[i];
    check_keys(r, {"name", "theorem_id", "geometry", "weights", "beta", "alpha",
                   "superweight", "psi", "kappa", "potentials", "function", "n",
                   "R_Omega", "R", "Q", "p", "theta", "quadrature", "seed",
                   "admissibility", "schedule", "family", "oracle_check"},
               w);
    RunSpec run;
    run.raw = r;
    if (!r.contains("theorem_id") || !r.at("theorem_id").is_string())
      throw ConfigError(w + ".theorem_id: required string");
    run.theorem_id = r.at("theorem_id").get<std::string>();
    if (!find_id(run.theorem_id))
      throw ConfigError(w + ".theorem_id: unknown id '" + run.theorem_id + "'");
    if (r.contains("name")) {
      if (!r.at("name").is_string()) throw ConfigError(w + ".name: expected a string");
      run.name = r.at("name").get<std::string>();
    }
    if (r.contains("geometry")) {
      const Json& g = r.at("geometry");
      check_keys(g, {"m", "k", "gamma"}, w + ".geometry");
      run.geom.m = integer(g, "m", run.geom.m, w + ".geometry");
      run.geom.k = integer(g, "k", run.geom.k, w + ".geometry");
      run.geom.gamma = num(g, "gamma", run.geom.gamma, w + ".geometry");
      if (run.geom.m < 1 || run.geom.k < 1 || run.geom.k > kMaxY || run.geom.gamma < 0.0)
        throw ConfigError(w + ".geometry: need m >= 1, 1 <= k <= 4, gamma >= 0");
    }
    if (r.contains("weights")) {
      const Json& e = r.at("weights");
      check_keys(e, {"alpha1", "alpha2"}, w + ".weights");
      run.exps.alpha1 = num(e, "alpha1", 0.0, w + ".weights");
      run.exps.alpha2 = num(e, "alpha2", 0.0, w + ".weights");
    }
    run.beta = num(r, "beta", 0.0, w);
    run.alpha = num(r, "alpha", 0.0, w);
    if (r.contains("superweight")) {
      const Json& s = r.at("superweight");
      const std::string ws = w + ".superweight";
      check_keys(s, {"a", "b", "theta1", "theta2", "theta3", "theta4"}, ws);
      run.sw.a = num(s, "a", run.sw.a, ws);
      run.sw.b = num(s, "b", run.sw.b, ws);
      run.sw.theta1 = num(s, "theta1", run.sw.theta1, ws);
      run.sw.theta2 = num(s, "theta2", run.sw.theta2, ws);
      run.sw.theta3 = num(s, "theta3", run.sw.theta3, ws);
      run.sw.theta4 = num(s, "theta4", run.sw.theta4, ws);
    }
    if (r.contains("psi")) {
      check_potential(r.at("psi"), w + ".psi");
      run.psi = r.at("psi");
    }
    if (r.contains("kappa")) {
      check_potential(r.at("kappa"), w + ".kappa");
      run.kappa = r.at("kappa");
    }
    if (r.contains("potentials")) {
      const Json& p = r.at("potentials");
      check_keys(p, {"kind", "c"}, w + ".potentials");
      if (p.contains("kind") && (!p.at("kind").is_string() ||
                                 (p.at("kind") != "linear" && p.at("kind") != "zero")))
        throw ConfigError(w + ".potentials.kind: expected 'linear' or 'zero'");
      num(p, "c", 0.5, w + ".potentials");
      run.potentials = p;
    }
    if (r.contains("function")) {
      const Json& fs = r.at("function");
      if (!fs.is_object() || !fs.contains("family") || !fs.at("family").is_string())
        throw ConfigError(w + ".function: needs a 'family' tag");
      run.function = fs;
    }
    run.n = integer(r, "n", 1, w);
    run.R_Omega = num(r, "R_Omega", 0.0, w);
    run.R = num(r, "R", 0.0, w);
    run.Q = num(r, "Q", 2.0, w);
    run.p = num(r, "p", 2.0, w);
    run.theta = num(r, "theta", 0.0, w);
    run.quadrature = r.contains("quadrature")
                         ? parse_quadrature(r.at("quadrature"), base, w + ".quadrature")
                         : base;
    run.seed = seed_of(r, cfg.seed + i, w);
    run.admissibility = adm_of(r, w);
    if (r.contains("schedule")) {
      const Json& s = r.at("schedule");
      if (!s.is_array() || s.empty()) throw ConfigError(w + ".schedule: expected a nonempty list");
      for (const Json& e : s) {
        if (!e.is_number() || !(e.get<double>() > 0.0))
          throw ConfigError(w + ".schedule: entries must be positive numbers");
        run.schedule.push_back(e.get<double>());
      }
    }
    if (r.contains("family")) {
      if (!r.at("family").is_string()) throw ConfigError(w + ".family: expected a string");
      run.family = trial_base_from_string(r.at("family").get<std::string>());
      if (!run.family) throw ConfigError(w + ".family: unknown trial family");
    }
    if (r.contains("oracle_check")) {
      if (!r.at("oracle_check").is_boolean())
        throw ConfigError(w + ".oracle_check: expected a boolean");
      run.oracle_check = r.at("oracle_check").get<bool>();
    }
    // validate the function spec eagerly so malformed specs are config errors
    if (!run.function.empty()) {
      const bool grushin = is_grushin_id(run.theorem_id);
      try {
        build_function(run.function, grushin ? run.geom.k : 0, run.geom, run.exps, run.seed);
      } catch (const ConfigError&) {
        throw;
      } catch (const Error&) {
        // domain problems with valid syntax are per-run errors
      }
    }
    cfg.runs.push_back(std::move(run));
  }
  return cfg;
}

SuiteConfig load_suite_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_suite_config(j);
}

TestFunction build_function(const Json& fs, int ky, const GrushinGeometry& geom,
                            const WeightExponents& exps, std::uint64_t seed) {
  const std::string w = "function";
  const std::string family = fs.value("family", std::string());
  if (family == "bump") {
    check_keys(fs, {"family", "r_lo", "r_hi", "y_box", "modes"}, w);
    const double r_lo = num(fs, "r_lo", 0.5, w), r_hi = num(fs, "r_hi", 2.0, w);
    const auto box = parse_y_box(fs, ky, w);
    const auto fac = make_bump(r_lo, r_hi, box);
    std::vector<AngularMode> modes;
    for (const ModeSpec& m : parse_modes(fs, w)) modes.push_back({m.k, m.amp, fac});
    return TestFunction(ky, std::move(modes));
  }
  if (family == "gaussian") {
    // exp(-a r^2) cut off between r_flat and r_zero; y: plateau box per axis
    check_keys(fs, {"family", "a", "r_flat", "r_zero", "y_box", "modes"}, w);
    const double a = num(fs, "a", 0.5, w);
    const double r_flat = num(fs, "r_flat", 6.0, w), r_zero = num(fs, "r_zero", 8.0, w);
    std::vector<Factor> fac = {Factor::gaussian_r(a), Factor::outer_step(r_flat, r_zero)};
    const auto box = parse_y_box(fs, ky, w);
    for (int i = 0; i < ky; ++i) fac.push_back(Factor::y_plateau(i, box[i].first, box[i].second));
    std::vector<AngularMode> modes;
    for (const ModeSpec& m : parse_modes(fs, w)) modes.push_back({m.k, m.amp, fac});
    return TestFunction(ky, std::move(modes));
  }
  if (family == "trial") {
    check_keys(fs, {"family", "base", "exponent", "epsilon", "lo", "hi", "sign"}, w);
    if (!fs.contains("base") || !fs.at("base").is_string())
      throw ConfigError("function.base: required trial family name");
    const auto base = trial_base_from_string(fs.at("base").get<std::string>());
    if (!base) throw ConfigError("function.base: unknown trial family");
    TrialFamily t;
    t.base = *base;
    t.exponent = num(fs, "exponent", 0.0, w);
    t.epsilon = num(fs, "epsilon", 0.0, w);
    t.lo = num(fs, "lo", -1.0, w);
    t.hi = num(fs, "hi", 1.0, w);
    t.sign = integer(fs, "sign", 1, w);
    if (t.base == TrialBase::RhoPower) {
      if (ky != geom.k) throw DomainError("rho_power trials live on the Grushin space");
      return make_trial(t, geom, exps);
    }
    if (ky != 0) throw DomainError("radial trial families have no y variables");
    return make_trial(t);
  }
  if (family == "random") {
    check_keys(fs, {"family", "modes", "real"}, w);
    if (fs.contains("real") && !fs.at("real").is_boolean())
      throw ConfigError("function.real: expected a boolean");
    return random_function(fs, ky, seed, w);
  }
  throw ConfigError("function.family: unknown family '" + family +
                    "' (bump, gaussian, trial, random)");
}

// -- JSON ----------------------------------------------------------------------

Json to_json(const InequalityReport& r) {
  Json terms = Json::array();
  for (const Term& t : r.rhs_terms)
    terms.push_back({{"name", t.name}, {"value", t.value}, {"nonneg", t.nonneg}});
  Json diag = Json::object();
  for (const auto& [k, v] : r.diagnostics) diag[k] = v;
  return {{"theorem_id", r.theorem_id}, {"lhs", r.lhs},
          {"rhs_terms", terms},          {"margin", r.margin},
          {"tol", r.tol},                {"sharp_constant", r.sharp_constant},
          {"ratio", r.ratio},            {"ok", r.ok()},
          {"params", r.params},          {"resolution", r.resolution},
          {"diagnostics", diag}};
}

Json to_json(const IdentityReport& r) {
  Json diag = Json::object();
  for (const auto& [k, v] : r.diagnostics) diag[k] = v;
  return {{"identity_id", r.identity_id}, {"lhs", r.lhs},
          {"rhs", r.rhs},                 {"rel_err", r.rel_err},
          {"tol", r.tol},                 {"ok", r.ok()},
          {"params", r.params},           {"resolution", r.resolution},
          {"diagnostics", diag}};
}

Json to_json(const SharpnessResult& r) {
  Json sched = Json::array();
  for (const SchedulePoint& p : r.schedule)
    sched.push_back({{"epsilon", p.epsilon}, {"quotient", p.quotient}});
  return {{"theorem_id", r.theorem_id},
          {"schedule", sched},
          {"best_quotient", r.best_quotient},
          {"sharp_constant", r.sharp_constant},
          {"gap", r.gap},
          {"one_sided", r.one_sided},
          {"monotone", r.monotone},
          {"method", r.method},
          {"params", r.params}};
}

// -- suite ---------------------------------------------------------------------

Json execute_run(const RunSpec& run, Admissibility adm, bool* ok) {
  Json out = {{"theorem_id", run.theorem_id}};
  if (!run.name.empty()) out["name"] = run.name;
  out["kind"] = is_identity_id(run.theorem_id) ? "identity" : "inequality";
  out["seed"] = run.seed;
  out["admissibility"] = to_string(adm);
  bool good = true;
  try {
    const AnyReport rep = evaluate(run, adm, run.quadrature);
    if (const auto* ir = std::get_if<InequalityReport>(&rep)) {
      out["report"] = to_json(*ir);
      good = ir->ok();
    } else {
      const auto& id = std::get<IdentityReport>(rep);
      out["report"] = to_json(id);
      good = id.ok();
    }
    if (run.oracle_check) {
      QuadratureSpec q = run.quadrature;
      q.oracle = true;
      out["oracle"] = oracle_comparison(rep, evaluate(run, adm, q));
    }
    out["status"] = good ? "pass" : "fail";
  } catch (const Error& e) {
    good = false;
    out["status"] = "error";
    out["error"] = error_json(e.kind(), e.what());
  } catch (const std::exception& e) {
    good = false;
    out["status"] = "error";
    out["error"] = error_json("InternalError", e.what());
  }
  if (ok) *ok = good;
  return out;
}

SuiteOutcome run_suite(const SuiteConfig& cfg, const SuiteOptions& opt) {
  SuiteOutcome res;
  Json runs = Json::array();
  int passed = 0, failed = 0, errors = 0;
  for (std::size_t i = 0; i < cfg.runs.size(); ++i) {
    const RunSpec& run = cfg.runs[i];
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    Json r = execute_run(run, resolve_adm(run, cfg, opt), &ok);
    if (opt.timings)
      r["wall_clock_s"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r["status"] == "pass") ++passed;
    else if (r["status"] == "fail") ++failed;
    else ++errors;
    res.ok = res.ok && ok;
    Json entry = {{"index", i}};
    entry.update(r);
    runs.push_back(std::move(entry));
  }
  res.report = {{"version", kReportVersion},
                {"tool_version", kToolVersion},
                {"seed", cfg.seed},
                {"runs", runs},
                {"summary",
                 {{"runs", cfg.runs.size()}, {"passed", passed}, {"failed", failed},
                  {"errors", errors}, {"ok", res.ok}}}};
  return res;
}

std::string sweep_csv(const SharpnessResult& r) {
  std::string s = "theorem_id,epsilon,quotient,sharp_constant,gap\n";
  for (const SchedulePoint& p : r.schedule) {
    const double gap = r.sharp_constant != 0.0
                           ? (p.quotient - r.sharp_constant) / r.sharp_constant
                           : p.quotient - r.sharp_constant;
    s += r.theorem_id + "," + fmt(p.epsilon) + "," + fmt(p.quotient) + "," +
         fmt(r.sharp_constant) + "," + fmt(gap) + "\n";
  }
  return s;
}

SweepOutcome sweep_sharpness(const SuiteConfig& cfg, const SuiteOptions& opt) {
  const auto ids = sharpness_ids();
  for (std::size_t i = 0; i < cfg.runs.size(); ++i)
    if (std::find(ids.begin(), ids.end(), cfg.runs[i].theorem_id) == ids.end())
      throw ConfigError("runs[" + std::to_string(i) + "]: '" + cfg.runs[i].theorem_id +
                        "' has no trial family for a sharpness sweep");
  SweepOutcome res;
  Json runs = Json::array();
  for (std::size_t i = 0; i < cfg.runs.size(); ++i) {
    const RunSpec& run = cfg.runs[i];
    SharpnessSetup st;
    st.theorem_id = run.theorem_id;
    st.geom = run.geom;
    st.exps = run.exps;
    st.beta = run.beta;
    st.adm = resolve_adm(run, cfg, opt);
    st.sw = run.sw;
    st.Q = run.Q;
    st.p = run.p;
    st.theta = run.theta;
    const std::vector<double> sched = run.schedule.empty() ? default_schedule() : run.schedule;
    Json entry = {{"index", i}, {"theorem_id", run.theorem_id}};
    if (!run.name.empty()) entry["name"] = run.name;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const SharpnessResult r = estimate_sharpness(
          st, run.family.value_or(expected_family(run.theorem_id)), sched, run.quadrature);
      const std::string file = file_stem(run, i) + ".csv";
      res.tables.push_back({file, sweep_csv(r)});
      entry["status"] = "ok";
      entry["csv"] = file;
      entry["result"] = to_json(r);
    } catch (const Error& e) {
      res.ok = false;
      entry["status"] = "error";
      entry["error"] = error_json(e.kind(), e.what());
    }
    if (opt.timings)
      entry["wall_clock_s"] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    runs.push_back(std::move(entry));
  }
  res.combined = {{"version", kSweepVersion},
                  {"tool_version", kToolVersion},
                  {"seed", cfg.seed},
                  {"runs", runs}};
  return res;
}

std::string list_theorems() {
  std::ostringstream os;
  for (const IdInfo& i : kIds) {
    os << i.id << "  [" << i.kind << "]\n";
    os << "    " << i.anchor << "\n";
    if (std::string(i.constant) != "-") os << "    constant: " << i.constant << "\n";
    os << "    admissible: " << i.conditions << "\n";
  }
  return os.str();
}

}  // namespace mhardy
