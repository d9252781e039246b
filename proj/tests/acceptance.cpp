// Acceptance gate: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Failures are reported, never retuned away.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "cases.hpp"
#include "mhardy/errors.hpp"
#include "mhardy/sharpness.hpp"

using namespace mhardy;
using cases::Rng;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

Point random_point(Rng& r, const GrushinGeometry& g) {
  Point p;
  for (int i = 0; i < g.m; ++i) p.x.push_back(r.uniform(-3.0, 3.0));
  for (int i = 0; i < g.k; ++i) p.y.push_back(r.uniform(-3.0, 3.0));
  return p;
}

double norm2(const std::vector<double>& v, std::size_t from, std::size_t to) {
  double s = 0.0;
  for (std::size_t i = from; i < to; ++i) s += v[i] * v[i];
  return s;
}

// 1. |d_r rho/rho|^2 + r^{2g} |grad_y rho/rho|^2 = |grad_g rho|^2/rho^2
Outcome c1() {
  Rng r(101);
  double worst = 0.0;
  for (int s = 0; s < 10; ++s) {
    const GrushinGeometry g = cases::random_geometry(r, 0, 3);
    for (int i = 0; i < 1000; ++i) {
      const Point p = random_point(r, g);
      const double rx = std::sqrt(norm2(p.x, 0, p.x.size()));
      const double y2 = norm2(p.y, 0, p.y.size());
      // closed form with S = rho^{2(1+g)}: d_r rho/rho = r^{2g+1}/S,
      // d_{y_j} rho/rho = (1+g) y_j / S
      const double S = std::pow(rx, 2 * (1 + g.gamma)) + (1 + g.gamma) * (1 + g.gamma) * y2;
      const double lhs = std::pow(std::pow(rx, 2 * g.gamma + 1) / S, 2) +
                         std::pow(rx, 2 * g.gamma) * (1 + g.gamma) * (1 + g.gamma) * y2 / (S * S);
      const auto gr = grad_rho(g, p);
      const double rh = rho(g, p);
      const double rhs = norm2(gr, 0, gr.size()) / (rh * rh);
      worst = std::max(worst, std::abs(lhs - rhs) / std::abs(rhs));
      // the node-layer form must agree too
      const double node = radial::grad_rho_sq_over_rho_sq(g.gamma, rx, y2);
      worst = std::max(worst, std::abs(node - rhs) / std::abs(rhs));
    }
  }
  return {worst <= 1e-12, "max rel err " + fmt("%.3g", worst) + " over 10 x 1000 points"};
}

// 2. rho(delta_l z) = l rho(z) and |grad_g rho| = |x|^g / rho^g
Outcome c2() {
  Rng r(101);
  double worst_h = 0.0, worst_n = 0.0;
  for (int s = 0; s < 10; ++s) {
    const GrushinGeometry g = cases::random_geometry(r, 0, 3);
    for (int i = 0; i < 1000; ++i) {
      const Point p = random_point(r, g);
      const double lam = std::exp(r.uniform(-2.0, 2.0));
      const double a = rho(g, dilate(g, lam, p)), b = lam * rho(g, p);
      worst_h = std::max(worst_h, std::abs(a - b) / b);
      const auto gr = grad_rho(g, p);
      const double rx = std::sqrt(norm2(p.x, 0, p.x.size()));
      const double n = std::sqrt(norm2(gr, 0, gr.size()));
      const double e = std::pow(rx / rho(g, p), g.gamma);
      worst_n = std::max(worst_n, std::abs(n - e) / e);
    }
  }
  return {worst_h <= 1e-12 && worst_n <= 1e-12,
          "homogeneity " + fmt("%.3g", worst_h) + ", gradient norm " + fmt("%.3g", worst_n)};
}

// 3. integration-by-parts identity, 20 random cases; convergence under n_r doubling
Outcome c3() {
  Rng r(303);
  double worst = 0.0;
  int not_halving = 0;
  QuadratureSpec coarse;
  coarse.n_r = 24;
  coarse.n_y = 48;
  QuadratureSpec fine = coarse;
  fine.n_r = 48;
  for (int s = 0; s < 20; ++s) {
    const GrushinGeometry g = cases::random_geometry(r);
    const WeightExponents e = cases::random_exponents(r, g);
    const double alpha = r.uniform(-3.0, 3.0);
    const TestFunction f = cases::random_bump(r, g.k, false, g.m != 2);
    worst = std::max(worst, check_grushin_ibp_identity(g, e, f, alpha).rel_err);
    const double a = check_grushin_ibp_identity(g, e, f, alpha, coarse).rel_err;
    const double b = check_grushin_ibp_identity(g, e, f, alpha, fine).rel_err;
    // at the rounding floor no further halving is possible
    if (!(b <= 0.5 * a || b <= 1e-13)) ++not_halving;
  }
  return {worst <= 1e-8 && not_halving == 0,
          "max rel_err " + fmt("%.3g", worst) + " at default resolution; " +
              std::to_string(not_halving) + "/20 cases failed to halve (n_r 24 -> 48)"};
}

// 4. twisted polar identity and the real-field Hardy2 split
Outcome c4() {
  Rng r(404);
  double tw_real = 0.0, tw_cplx = 0.0, tw_cplx_cross = 0.0, split = 0.0;
  for (int s = 0; s < 20; ++s) {
    const RadialPotential psi = cases::random_psi(r);
    const RadialPotential kappa = RadialPotential::power(r.uniform(0.5, 2.0), r.uniform(-1.0, 1.0));
    const TestFunction fr = cases::random_function(r, 0, true, false);
    const TestFunction fc = cases::random_function(r, 0, false, false);
    tw_real = std::max(tw_real, check_twisted_polar_identity(psi, kappa, fr).rel_err);
    const IdentityReport c = check_twisted_polar_identity(psi, kappa, fc);
    tw_cplx = std::max(tw_cplx, c.rel_err);
    tw_cplx_cross = std::max(tw_cplx_cross,
                             std::abs(c.diagnostics[1].second) / std::abs(c.lhs));
    const GrushinGeometry g = cases::random_geometry(r);
    const WeightExponents e = cases::random_exponents(r, g);
    const TestFunction fg = cases::random_bump(r, g.k, true, g.m != 2);
    split = std::max(split,
                     check_hardy2_split(g, e, FluxParam{r.uniform(-1.0, 1.0)}, fg).rel_err);
  }
  const bool pass = tw_real <= 1e-8 && tw_cplx <= 1e-8 && split <= 1e-8;
  return {pass, "twisted polar: real f " + fmt("%.3g", tw_real) + ", complex f " +
                    fmt("%.3g", tw_cplx) + " (with the cross term restored " +
                    fmt("%.3g", tw_cplx_cross) + "); Hardy2 split " + fmt("%.3g", split)};
}

// 5. real Landau identity on the truncated Gaussian: lhs = 5 pi / 4
Outcome c5() {
  const Json fs = {{"family", "gaussian"}, {"a", 0.5}, {"r_flat", 7.0}, {"r_zero", 8.0}};
  const TestFunction f = build_function(fs, 0, {}, {}, 0);
  const IdentityReport a = check_real_landau_identity(1, f);
  QuadratureSpec o;
  o.oracle = true;
  const IdentityReport b = check_real_landau_identity(1, f, o);
  const double exact = 1.25 * std::numbers::pi;
  const double ea = std::abs(a.lhs - exact) / exact, eb = std::abs(b.lhs - exact) / exact;
  return {ea <= 1e-6 && eb <= 1e-6 && a.ok(),
          "rel err " + fmt("%.3g", ea) + " (oracle " + fmt("%.3g", eb) + "), identity rel_err " +
              fmt("%.3g", a.rel_err)};
}

// 6. margins on >= 100 random admissible cases per theorem id
Outcome c6() {
  QuadratureSpec q;
  q.n_r = 128;
  q.n_phi = 16;
  q.n_y = 24;
  Rng r(606);
  Outcome out;
  std::string bad;
  int total = 0;
  for (const std::string& id : cases::margin_ids()) {
    int fails = 0, unexplained = 0;
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const InequalityReport rep = cases::random_case(id, r, q);
      ++total;
      const double scale = rep.tol / kMarginTol;
      worst = std::min(worst, rep.margin / scale);
      if (rep.ok()) continue;
      ++fails;
      // complex f: does restoring the dropped polar cross term close the gap?
      double cross = 0.0;
      for (const auto& [k, v] : rep.diagnostics)
        if (k == "cross_term") cross = v;
      if (rep.margin - cross < -rep.tol) ++unexplained;
    }
    if (fails > 0) {
      out.pass = false;
      bad += " " + id + "(" + std::to_string(fails) + " fails, " + std::to_string(unexplained) +
             " not explained by the cross term, worst margin/scale " + fmt("%.3g", worst) + ")";
    }
  }
  out.detail = std::to_string(total) + " cases;" + (bad.empty() ? " all margins >= -tol" : bad);
  return out;
}

// 7. Fourier remainder: nonnegative, 0 for radial f, equality for |k| <= 1
Outcome c7() {
  Rng r(707);
  double neg = 0.0, radial = 0.0, eq = 0.0;
  for (int s = 0; s < 30; ++s) {
    const GrushinGeometry g = cases::random_geometry(r, 2);
    const WeightExponents e = cases::random_exponents(r, g);
    const FluxParam flux{r.uniform(-1.0, 1.0)};
    const TestFunction f = cases::random_bump(r, g.k, false, false);
    const InequalityReport a = verify_ab_hardy(g, e, flux, f);
    neg = std::min(neg, a.rhs_terms[1].value / a.tol);
    const TestFunction f0 = cases::random_bump(r, g.k, false, true);
    const InequalityReport b = verify_ab_hardy(g, e, flux, f0);
    radial = std::max(radial, std::abs(b.rhs_terms[1].value) / std::abs(b.lhs));
    const TestFunction f1 = cases::random_bump(r, g.k, false, false, 1);
    const InequalityReport c = verify_ab_hardy(g, e, flux, f1);
    const double lhs = c.diagnostics[2].second, rhs = c.diagnostics[3].second;
    eq = std::max(eq, std::abs(lhs - rhs) / std::abs(lhs));
  }
  return {neg >= -1.0 && radial <= 1e-12 && eq <= 1e-10,
          "min remainder/tol " + fmt("%.3g", neg) + ", radial " + fmt("%.3g", radial) +
              ", |k|<=1 equality " + fmt("%.3g", eq)};
}

// 8. sharpness reproduction at the end of the default schedule
Outcome c8() {
  const auto sched = default_schedule();
  auto gap = [&](SharpnessSetup st) {
    return estimate_sharpness(st, expected_family(st.theorem_id), sched);
  };
  SharpnessSetup h;
  h.theorem_id = "radial_hardy";
  h.geom = {2, 1, 1.0};
  const auto rh = gap(h);
  SharpnessSetup ab = h;
  ab.theorem_id = "ab_hardy";
  ab.beta = 0.5;
  const auto rab = gap(ab);
  ab.beta = -0.5;
  const auto rabn = gap(ab);
  SharpnessSetup lg;
  lg.theorem_id = "landau_log";
  const auto rl = gap(lg);
  SharpnessSetup sw;
  sw.theorem_id = "landau_superweight";
  sw.sw.a = 1;
  sw.sw.b = 1;
  sw.sw.theta2 = -2;
  sw.sw.theta3 = 1;
  sw.sw.theta4 = -2;
  const auto rs = gap(sw);
  const bool pass = rh.gap <= 0.02 && std::abs(rh.sharp_constant - 1.0) < 1e-15 &&
                    rab.gap <= 0.03 && rabn.gap <= 0.03 &&
                    std::abs(rab.sharp_constant - 1.25) < 1e-15 && rl.gap <= 0.05 &&
                    rl.sharp_constant == 0.25 && rs.gap <= 0.05 &&
                    std::abs(rs.sharp_constant - 1.0) < 1e-15 && rh.one_sided && rab.one_sided &&
                    rl.one_sided && rs.one_sided;
  return {pass, "radial Hardy " + fmt("%.4f", rh.best_quotient) + " (gap " + fmt("%.4f", rh.gap) +
                    "), AB beta=+-1/2 " + fmt("%.4f", rab.best_quotient) + "/" +
                    fmt("%.4f", rabn.best_quotient) + " (gap " + fmt("%.4f", rab.gap) +
                    "), log " + fmt("%.4f", rl.best_quotient) + " (gap " + fmt("%.4f", rl.gap) +
                    "), superweight " + fmt("%.4f", rs.best_quotient) + " (gap " +
                    fmt("%.4f", rs.gap) + ")"};
}

// central fourth-order difference
double fd(const std::function<double(double)>& g, double x, double h) {
  return (-g(x + 2 * h) + 8 * g(x + h) - 8 * g(x - h) + g(x - 2 * h)) / (12 * h);
}

// 9. analytic derivatives vs central finite differences
Outcome c9() {
  Rng r(909);
  double worst_f = 0.0, worst_rho = 0.0, worst_pot = 0.0;
  const double h = 1e-4;
  for (int s = 0; s < 100; ++s) {
    const int ky = r.pick(0, 2);
    const TestFunction f = cases::random_function(r, ky, false, false);
    const Support sup = f.support();
    // points deep in the exp(-1/u) tails vary on scales far below h, where
    // differences say nothing; draw until |f| is not negligible
    double t = 0.0, phi = 0.0;
    std::vector<double> y(ky);
    do {
      t = r.uniform(sup.t_lo, sup.t_hi);
      phi = r.uniform(0.0, 6.283);
      for (int j = 0; j < ky; ++j) y[j] = r.uniform(sup.y_box[j].first, sup.y_box[j].second);
    } while (std::abs(f.value(t, phi, y)) < 1e-8);
    const Partials P = f.partials(t, phi, y);
    // each complex partial against differences of Re and Im
    std::vector<cplx> an = {P.d_t, P.d_phi, P.d_r * std::exp(t)};
    std::vector<cplx> num;
    auto diff = [&](auto eval, double x0) {
      const double re = fd([&](double x) { return eval(x).real(); }, x0, h);
      const double im = fd([&](double x) { return eval(x).imag(); }, x0, h);
      return cplx(re, im);
    };
    num.push_back(diff([&](double x) { return f.value(x, phi, y); }, t));
    num.push_back(diff([&](double x) { return f.value(t, x, y); }, phi));
    num.push_back(num[0]);  // r d_r = d_t
    for (int j = 0; j < ky; ++j) {
      an.push_back(P.d_y[j]);
      num.push_back(diff([&](double x) {
        auto yy = y;
        yy[j] = x;
        return f.value(t, phi, yy);
      }, y[j]));
    }
    double e = 0.0, n = 0.0;
    for (std::size_t i = 0; i < an.size(); ++i) {
      e += std::norm(an[i] - num[i]);
      n += std::norm(an[i]);
    }
    if (n > 0.0) worst_f = std::max(worst_f, std::sqrt(e / n));

    // grad_g rho and grad_g rho / rho on a random point
    const GrushinGeometry g = cases::random_geometry(r, 0, 3);
    const Point p = random_point(r, g);
    const auto gr = grad_rho(g, p);
    const auto pot = grushin_potential(g, p);
    const double rx = std::sqrt(norm2(p.x, 0, p.x.size()));
    double er = 0.0, nr = 0.0, ep = 0.0, np = 0.0;
    for (int i = 0; i < g.m + g.k; ++i) {
      auto along = [&](double x) {
        Point q = p;
        if (i < g.m) q.x[i] = x;
        else q.y[i - g.m] = x;
        return q;
      };
      const double x0 = i < g.m ? p.x[i] : p.y[i - g.m];
      const double fac = i < g.m ? 1.0 : std::pow(rx, g.gamma);
      const double d = fac * fd([&](double x) { return rho(g, along(x)); }, x0, h);
      const double dl = fac * fd([&](double x) { return std::log(rho(g, along(x))); }, x0, h);
      er += (gr[i] - d) * (gr[i] - d);
      nr += gr[i] * gr[i];
      ep += (pot[i] - dl) * (pot[i] - dl);
      np += pot[i] * pot[i];
    }
    worst_rho = std::max(worst_rho, std::sqrt(er / nr));
    worst_pot = std::max(worst_pot, std::sqrt(ep / np));
  }
  return {worst_f <= 1e-6 && worst_rho <= 1e-6 && worst_pot <= 1e-6,
          "test-function partials " + fmt("%.3g", worst_f) + ", grad rho " +
              fmt("%.3g", worst_rho) + ", grad rho / rho " + fmt("%.3g", worst_pot) +
              " over 100 random (f, p)"};
}

// 10. main engine vs midpoint oracle on every verifier integrand
Outcome c10() {
  Rng r(1010);
  QuadratureSpec main_q, orc;
  orc.oracle = true;
  double worst = 0.0;
  std::string where;
  auto compare = [&](const std::string& id, double a, double b, double scale) {
    const double d = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12 * scale});
    if (d > worst) {
      worst = d;
      where = id;
    }
  };
  for (const std::string& id : cases::margin_ids()) {
    for (int i = 0; i < 2; ++i) {
      const std::uint64_t seed = r.next();
      Rng a(seed), b(seed);
      InequalityReport x, y;
      try {
        // k = 1 keeps the uniform oracle grid affordable
        x = cases::random_case(id, a, main_q, 1);
        y = cases::random_case(id, b, orc, 1);
      } catch (const Error&) {
        continue;
      }
      const double scale = x.tol / kMarginTol;
      compare(id, x.lhs, y.lhs, scale);
      for (std::size_t t = 0; t < x.rhs_terms.size(); ++t)
        compare(id, x.rhs_terms[t].value, y.rhs_terms[t].value, scale);
    }
  }
  return {worst <= 1e-7, "max rel diff " + fmt("%.3g", worst) + " (" + where + ")"};
}

// 11. byte-identical reports across two single-threaded runs
Outcome c11() {
  const Json cfg = Json::parse(R"({
    "seed": 11,
    "runs": [
      {"theorem_id": "radial_hardy", "function": {"family": "random"}},
      {"theorem_id": "ab_hardy", "beta": 0.5, "function": {"family": "random"}},
      {"theorem_id": "landau_log", "function": {"family": "random"}},
      {"theorem_id": "twisted_polar", "function": {"family": "random"}},
      {"theorem_id": "radial_p_weighted", "Q": 3, "p": 2.5, "theta": 0.3},
      {"theorem_id": "real_landau_identity", "n": 1, "function": {"family": "gaussian"}},
      {"theorem_id": "radial_hardy", "weights": {"alpha1": -9}}
    ]})");
  const SuiteConfig sc = parse_suite_config(cfg);
  const char* old = std::getenv("MHARDY_THREADS");
  const std::string saved = old ? old : "";
  setenv("MHARDY_THREADS", "1", 1);
  const std::string a = run_suite(sc).report.dump(2);
  const std::string b = run_suite(sc).report.dump(2);
  setenv("MHARDY_THREADS", "4", 1);
  const std::string c = run_suite(sc).report.dump(2);
  if (old) setenv("MHARDY_THREADS", saved.c_str(), 1);
  else unsetenv("MHARDY_THREADS");
  return {a == b, std::string(a == b ? "identical" : "different") + " bytes (" +
                      std::to_string(a.size()) + "); 4 threads " +
                      (a == c ? "identical" : "different")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"pointwise gauge identity", c1},
      {"homogeneity and gradient norm", c2},
      {"integration-by-parts identity", c3},
      {"twisted polar identity and Hardy2 split", c4},
      {"real Landau identity on the Gaussian", c5},
      {"randomized margin sweeps", c6},
      {"Fourier remainder", c7},
      {"sharpness reproduction", c8},
      {"finite-difference cross-checks", c9},
      {"quadrature oracle agreement", c10},
      {"determinism", c11},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::printf("criterion %2zu %s: %s -- %s [%.1fs]\n", i + 1, o.pass ? "PASS" : "FAIL",
                criteria[i].first, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
