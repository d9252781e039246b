#include "mhardy/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "mhardy/errors.hpp"

namespace mhardy {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;
constexpr double kTailWidth = 40.0;  // t-range kept below t_hi when t_lo = -inf

[[noreturn]] void non_finite(int out, double t, double phi,
                             std::span<const double> y) {
  std::ostringstream os;
  os.precision(17);
  os << "density output " << out << " is not finite at t=" << t
     << " (r=" << std::exp(t) << "), phi=" << phi;
  for (std::size_t j = 0; j < y.size(); ++j) os << ", y" << j << "=" << y[j];
  throw NonFiniteError(os.str());
}

struct Axis {
  std::vector<double> x;
  std::vector<double> w;
};

Axis gl_axis(double lo, double hi, int n) {
  const auto& [nodes, weights] = gauss_legendre(n);
  Axis a;
  const double c = 0.5 * (lo + hi), h = 0.5 * (hi - lo);
  for (int i = 0; i < n; ++i) {
    a.x.push_back(c + h * nodes[i]);
    a.w.push_back(h * weights[i]);
  }
  return a;
}

// Gauss-Legendre on panels between the breakpoints inside (lo, hi). Nodes are
// allotted by length with a floor of n/3 per panel: a full exp(-1/u)
// transition needs ~30 nodes for 1e-10.
Axis panel_axis(double lo, double hi, const std::vector<double>& breaks, int n) {
  std::vector<double> edges{lo, hi};
  const double len = hi - lo;
  for (double b : breaks)
    if (b > lo + 1e-12 * len && b < hi - 1e-12 * len) edges.push_back(b);
  std::sort(edges.begin(), edges.end());
  std::vector<double> uniq{edges.front()};
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i] - uniq.back() > 1e-12 * len) uniq.push_back(edges[i]);
  if (uniq.back() < hi) uniq.back() = hi;
  Axis a;
  for (std::size_t p = 0; p + 1 < uniq.size(); ++p) {
    const double plen = uniq[p + 1] - uniq[p];
    const int np = std::max({8, (n + 2) / 3, std::min(32, n / 2),
                             static_cast<int>(std::lround(n * plen / len))});
    const Axis part = gl_axis(uniq[p], uniq[p + 1], np);
    a.x.insert(a.x.end(), part.x.begin(), part.x.end());
    a.w.insert(a.w.end(), part.w.begin(), part.w.end());
  }
  return a;
}

Axis midpoint_axis(double lo, double hi, int n) {
  Axis a;
  const double h = (hi - lo) / n;
  for (int i = 0; i < n; ++i) {
    a.x.push_back(lo + (i + 0.5) * h);
    a.w.push_back(h);
  }
  return a;
}

// y-axis rule: plain GL, or GL in u with y = s sinh(u) for rho-shaped supports.
Axis y_axis(const Region& reg, int j, int n) {
  const auto [lo, hi] = reg.y_box[j];
  if (reg.y_scale <= 0.0) return panel_axis(lo, hi, reg.y_breaks[j], n);
  const double s = reg.y_scale;
  std::vector<double> ub;
  for (double b : reg.y_breaks[j]) ub.push_back(std::asinh(b / s));
  Axis u = panel_axis(std::asinh(lo / s), std::asinh(hi / s), ub, n);
  for (std::size_t i = 0; i < u.x.size(); ++i) {
    u.w[i] *= s * std::cosh(u.x[i]);
    u.x[i] = s * std::sinh(u.x[i]);
  }
  return u;
}

struct Angular {
  std::vector<double> phi;
  std::vector<double> w;
};

Angular angular_rule(int m, int n_phi) {
  Angular a;
  if (m == 2) {
    for (int l = 0; l < n_phi; ++l) {
      a.phi.push_back(kTwoPi * l / n_phi);
      a.w.push_back(kTwoPi / n_phi);
    }
  } else if (m == 1) {
    a.phi = {0.0, M_PI};
    a.w = {1.0, 1.0};
  } else {
    a.phi = {0.0};
    a.w = {sphere_measure(m)};
  }
  return a;
}

// Tensor grid over the y axes, flattened.
struct YGrid {
  int ky = 0;
  std::vector<double> pts;  // ky values per point
  std::vector<double> w;
};

YGrid tensor_y(const std::vector<Axis>& axes) {
  YGrid g;
  g.ky = static_cast<int>(axes.size());
  if (g.ky == 0) {
    g.w = {1.0};
    return g;
  }
  std::vector<int> idx(g.ky, 0);
  while (true) {
    double w = 1.0;
    for (int j = 0; j < g.ky; ++j) {
      g.pts.push_back(axes[j].x[idx[j]]);
      w *= axes[j].w[idx[j]];
    }
    g.w.push_back(w);
    int j = g.ky - 1;
    while (j >= 0 && ++idx[j] == static_cast<int>(axes[j].x.size())) idx[j--] = 0;
    if (j < 0) break;
  }
  return g;
}

void check_modes(const Region& reg, const QuadratureSpec& spec,
                 const TestFunction* f) {
  if (f && f->ky() != reg.ky)
    throw DomainError("test function y dimension does not match the region");
  if (f && reg.m != 2 && f->has_nonzero_modes())
    throw DomainError("for m != 2 test functions must be radial in x");
  if (reg.m == 2 && spec.n_phi < 4 * (reg.max_mode + 1))
    throw DomainError("n_phi = " + std::to_string(spec.n_phi) +
                      " is below 4 (max|k| + 1) = " +
                      std::to_string(4 * (reg.max_mode + 1)));
}

// Runs body(i) for i in [0, n) on the configured threads; rethrows the first
// exception by index order.
template <class Body>
void parallel_rows(int n, Body body) {
  const int nt = std::min(thread_count(), std::max(n, 1));
  if (nt <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::exception_ptr> errs(n);
  std::vector<std::thread> pool;
  for (int w = 0; w < nt; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += nt) {
        try {
          body(i);
        } catch (...) {
          errs[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

std::vector<double> reduce_rows(const std::vector<double>& rows, int n_rows,
                                int n_out) {
  std::vector<double> out(n_out);
  for (int o = 0; o < n_out; ++o) {
    KahanSum s;
    for (int i = 0; i < n_rows; ++i) s.add(rows[static_cast<std::size_t>(i) * n_out + o]);
    out[o] = s.value();
  }
  return out;
}

}  // namespace

Domain Domain::ball(double R) {
  if (!(R > 0.0) || !std::isfinite(R))
    throw DomainError("ball radius must be positive and finite");
  Domain d;
  d.kind = Kind::Ball;
  d.R_Omega = R;
  return d;
}

double sphere_measure(int m) {
  if (m < 1) throw DomainError("sphere dimension must be positive");
  return 2.0 * std::pow(M_PI, 0.5 * m) / std::tgamma(0.5 * m);
}

Region make_region(const TestFunction& f, int m, const Domain& domain) {
  if (m < 1) throw DomainError("x dimension must be positive");
  const Support s = f.support();
  Region reg;
  reg.m = m;
  reg.ky = f.ky();
  reg.max_mode = f.max_abs_mode();
  reg.phi_band_limited = true;
  if (s.empty(reg.ky)) {
    reg.empty = true;
    return reg;
  }
  reg.t_lo = s.t_lo;
  reg.t_hi = s.t_hi;
  if (domain.kind == Domain::Kind::Ball) {
    if (reg.ky != 0)
      throw DomainError("ball domains are implemented for functions on R^m (ky = 0)");
    reg.t_hi = std::min(reg.t_hi, std::log(domain.R_Omega));
  }
  if (!std::isfinite(reg.t_hi))
    throw DomainError("test function has unbounded radial support");
  if (!std::isfinite(reg.t_lo)) reg.t_lo = reg.t_hi - kTailWidth;
  for (int j = 0; j < reg.ky; ++j) {
    reg.y_box[j] = s.y_box[j];
    if (!std::isfinite(s.y_box[j].first) || !std::isfinite(s.y_box[j].second))
      throw DomainError("test function has unbounded support in y" +
                        std::to_string(j));
  }
  reg.loglog_sign = s.loglog_sign;
  reg.s_lo = s.s_lo;
  reg.s_hi = s.s_hi;
  reg.y_scale = s.y_scale;
  reg.t_breaks = s.t_breaks;
  for (int j = 0; j < reg.ky; ++j) reg.y_breaks[j] = s.y_breaks[j];
  if (reg.t_lo >= reg.t_hi) reg.empty = true;
  return reg;
}

void apply_gauge_scale(Region& reg, double gamma) {
  if (reg.empty || reg.ky == 0 || reg.y_scale > 0.0) return;
  const double g1 = 1.0 + gamma;
  const double s = std::exp(g1 * reg.t_lo) / g1;
  double half = 0.0;
  for (int j = 0; j < reg.ky; ++j)
    half = std::max({half, std::abs(reg.y_box[j].first), std::abs(reg.y_box[j].second)});
  if (s < 0.25 * half) reg.y_scale = s;
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
  if (n < 1) throw DomainError("Gauss-Legendre needs n >= 1");
  static std::mutex mu;
  static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  std::vector<double> x(n), w(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    // Tricomi initial guess, then Newton on P_n
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p1 = z, p0 = 1.0;
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = z;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (z * p1 - p0) / (z * z - 1.0);
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (n % 2 == 1) x[n / 2] = 0.0;
  return cache.emplace(n, std::make_pair(std::move(x), std::move(w))).first->second;
}

RadialRule radial_rule(const Region& reg, int n) {
  RadialRule rule;
  if (reg.empty) return rule;
  if (reg.loglog_sign != 0) {
    const Axis a = panel_axis(reg.s_lo, reg.s_hi, reg.t_breaks, n);
    for (std::size_t i = 0; i < a.x.size(); ++i) {
      const double at = std::exp(a.x[i]);
      rule.t.push_back(reg.loglog_sign * at);
      rule.w.push_back(a.w[i] * at);
    }
    return rule;
  }
  const Axis a = panel_axis(reg.t_lo, reg.t_hi, reg.t_breaks, n);
  rule.t = a.x;
  rule.w = a.w;
  return rule;
}

RadialRule radial_oracle_rule(const Region& reg, int n) {
  RadialRule rule;
  if (reg.empty) return rule;
  const bool ll = reg.loglog_sign != 0;
  const double h = ll ? (reg.s_hi - reg.s_lo) / n : (reg.t_hi - reg.t_lo) / n;
  for (int i = 0; i < n; ++i) {
    if (ll) {
      const double at = std::exp(reg.s_lo + (i + 0.5) * h);
      rule.t.push_back(reg.loglog_sign * at);
      rule.w.push_back(h * at);
    } else {
      rule.t.push_back(reg.t_lo + (i + 0.5) * h);
      rule.w.push_back(h);
    }
  }
  return rule;
}

std::vector<double> integrate_multi(const Region& reg, const QuadratureSpec& spec,
                                    int n_out, const MultiDensity& density,
                                    const TestFunction* f) {
  if (spec.oracle) return oracle_integrate(reg, spec, n_out, density, f);
  if (n_out < 1) throw DomainError("need at least one density output");
  if (reg.empty) return std::vector<double>(n_out, 0.0);
  if (spec.n_r < 2 || spec.n_phi < 1 || (reg.ky > 0 && spec.n_y < 2))
    throw DomainError("quadrature resolution too small");
  check_modes(reg, spec, f);

  const RadialRule tr = radial_rule(reg, spec.n_r);
  const int n_phi = reg.phi_band_limited ? std::min(spec.n_phi, 4 * (reg.max_mode + 1))
                                         : spec.n_phi;
  const Angular ang = angular_rule(reg.m, n_phi);
  std::vector<Axis> axes;
  for (int j = 0; j < reg.ky; ++j) axes.push_back(y_axis(reg, j, spec.n_y));
  const YGrid yg = tensor_y(axes);
  const int n_rows = static_cast<int>(tr.t.size());
  std::vector<double> rows(static_cast<std::size_t>(n_rows) * n_out, 0.0);

  parallel_rows(n_rows, [&](int i) {
    const double t = tr.t[i];
    const double r = std::exp(t);
    const double wt = tr.w[i] * std::exp(reg.m * t);  // r^m dt
    std::vector<KahanSum> acc(n_out);
    std::vector<double> vals(n_out);
    std::vector<ModeJet> jets;
    const std::size_t n_ypts = yg.w.size();
    for (std::size_t q = 0; q < n_ypts; ++q) {
      const std::span<const double> y(yg.pts.data() + q * reg.ky,
                                      static_cast<std::size_t>(reg.ky));
      if (f) {
        f->mode_jets(t, y, jets);
        if (jets.empty()) continue;  // f and its derivatives vanish here
      }
      cplx f0;
      for (const ModeJet& mj : jets)
        if (mj.k == 0) f0 = mj.v;
      for (std::size_t l = 0; l < ang.phi.size(); ++l) {
        const double phi = ang.phi[l];
        LocalJet jet;
        Node node{t, r, phi, y, nullptr, f0};
        if (f) {
          jet = jet_from_partials(TestFunction::combine(jets, t, phi, reg.ky),
                                  reg.m, reg.ky, t, phi, y);
          node.jet = &jet;
        }
        density(node, vals.data());
        const double w = wt * yg.w[q] * ang.w[l];
        for (int o = 0; o < n_out; ++o) {
          if (!std::isfinite(vals[o])) non_finite(o, t, phi, y);
          acc[o].add(w * vals[o]);
        }
      }
    }
    for (int o = 0; o < n_out; ++o)
      rows[static_cast<std::size_t>(i) * n_out + o] = acc[o].value();
  });
  return reduce_rows(rows, n_rows, n_out);
}

cplx integrate_polar(const std::function<cplx(const Node&)>& density,
                     const Region& region, const QuadratureSpec& spec,
                     const TestFunction* f) {
  const auto v = integrate_multi(
      region, spec, 2,
      [&](const Node& n, double* out) {
        const cplx c = density(n);
        out[0] = c.real();
        out[1] = c.imag();
      },
      f);
  return {v[0], v[1]};
}

std::vector<double> oracle_integrate(const Region& reg, const QuadratureSpec& spec,
                                     int n_out, const MultiDensity& density,
                                     const TestFunction* f) {
  if (n_out < 1) throw DomainError("need at least one density output");
  if (reg.empty) return std::vector<double>(n_out, 0.0);
  if (f && f->ky() != reg.ky)
    throw DomainError("test function y dimension does not match the region");
  if (f && reg.m != 2 && f->has_nonzero_modes())
    throw DomainError("for m != 2 test functions must be radial in x");

  // uniform in y, or in asinh(y / s) when the region carries a y scale
  std::vector<Axis> axes;
  for (int j = 0; j < reg.ky; ++j) {
    const auto [lo, hi] = reg.y_box[j];
    if (reg.y_scale <= 0.0) {
      axes.push_back(midpoint_axis(lo, hi, spec.oracle_n_y));
      continue;
    }
    const double s = reg.y_scale;
    Axis u = midpoint_axis(std::asinh(lo / s), std::asinh(hi / s), spec.oracle_n_y);
    for (std::size_t i = 0; i < u.x.size(); ++i) {
      u.w[i] *= s * std::cosh(u.x[i]);
      u.x[i] = s * std::sinh(u.x[i]);
    }
    axes.push_back(std::move(u));
  }
  const YGrid yg = tensor_y(axes);

  auto eval = [&](double t, double phi, std::span<const double> y, double w,
                  std::vector<KahanSum>& acc, std::vector<double>& vals) {
    LocalJet jet;
    Node node{t, std::exp(t), phi, y, nullptr, {}};
    if (f) {
      jet = jet_from_partials(f->partials(t, phi, y), reg.m, reg.ky, t, phi, y);
      node.jet = &jet;
      node.f0 = f->mode_value(0, t, y);
    }
    density(node, vals.data());
    for (int o = 0; o < n_out; ++o) {
      if (!std::isfinite(vals[o])) non_finite(o, t, phi, y);
      acc[o].add(w * vals[o]);
    }
  };

  // Uniform midpoint in t (or s), uniform phi, uniform midpoint per y axis
  const RadialRule tr = radial_oracle_rule(reg, spec.oracle_n_r);
  Angular ang;
  if (reg.m == 2) {
    const int n_phi = 4 * (reg.max_mode + 1) + 4;
    for (int l = 0; l < n_phi; ++l) {
      ang.phi.push_back(kTwoPi * (l + 0.5) / n_phi);
      ang.w.push_back(kTwoPi / n_phi);
    }
  } else {
    ang = angular_rule(reg.m, 1);
  }
  const int n = static_cast<int>(tr.t.size());
  std::vector<double> rows(static_cast<std::size_t>(n) * n_out, 0.0);
  parallel_rows(n, [&](int i) {
    std::vector<KahanSum> acc(n_out);
    std::vector<double> vals(n_out);
    const double t = tr.t[i];
    const double jac = tr.w[i] * std::exp(reg.m * t);
    for (std::size_t l = 0; l < ang.phi.size(); ++l)
      for (std::size_t q = 0; q < yg.w.size(); ++q) {
        const std::span<const double> y(yg.pts.data() + q * reg.ky,
                                        static_cast<std::size_t>(reg.ky));
        eval(t, ang.phi[l], y, jac * ang.w[l] * yg.w[q], acc, vals);
      }
    for (int o = 0; o < n_out; ++o)
      rows[static_cast<std::size_t>(i) * n_out + o] = acc[o].value();
  });
  return reduce_rows(rows, n, n_out);
}

double integrate_radial(const std::function<double(double)>& density, double Q,
                        double w, double r_lo, double r_hi,
                        const QuadratureSpec& spec) {
  if (!(r_lo > 0.0) || !(r_lo < r_hi) || !std::isfinite(r_hi))
    throw DomainError("integrate_radial needs 0 < r_lo < r_hi < inf");
  const double e = Q - w;  // r^{Q-1-w} dr = r^{Q-w} dt
  KahanSum s;
  if (spec.oracle) {
    const Axis a = midpoint_axis(r_lo, r_hi, spec.oracle_n_r);
    for (std::size_t i = 0; i < a.x.size(); ++i) {
      const double v = density(a.x[i]) * std::pow(a.x[i], e - 1.0);
      if (!std::isfinite(v)) non_finite(0, std::log(a.x[i]), 0.0, {});
      s.add(a.w[i] * v);
    }
    return s.value();
  }
  const Axis a = gl_axis(std::log(r_lo), std::log(r_hi), spec.n_r);
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    const double r = std::exp(a.x[i]);
    const double v = density(r) * std::exp(e * a.x[i]);
    if (!std::isfinite(v)) non_finite(0, a.x[i], 0.0, {});
    s.add(a.w[i] * v);
  }
  return s.value();
}

ConvergenceStudy convergence_study(const Region& region,
                                   std::span<const QuadratureSpec> schedule,
                                   const MultiDensity& density,
                                   const TestFunction* f) {
  if (schedule.size() < 3)
    throw DomainError("convergence study needs at least 3 resolutions");
  ConvergenceStudy st;
  for (const QuadratureSpec& sp : schedule) {
    ConvergenceRow row;
    row.spec = sp;
    row.value = integrate_multi(region, sp, 1, density, f)[0];
    if (!st.rows.empty()) row.delta = std::abs(row.value - st.rows.back().value);
    st.rows.push_back(row);
  }
  const double scale = std::max(std::abs(st.rows.back().value), 1e-300);
  st.converged = true;
  for (std::size_t i = 2; i < st.rows.size(); ++i) {
    const double prev = st.rows[i - 1].delta, cur = st.rows[i].delta;
    // at the rounding floor further shrinking is not required
    if (cur > prev && cur > 1e-13 * scale) st.converged = false;
  }
  const double d1 = st.rows[st.rows.size() - 2].delta, d2 = st.rows.back().delta;
  if (d1 > 0.0 && d2 > 0.0) st.observed_order = std::log2(d1 / d2);
  if (st.rows.back().delta > 1e-3 * scale) st.converged = false;
  return st;
}

int thread_count() {
  const char* s = std::getenv("MHARDY_THREADS");
  if (!s) return 1;
  const int n = std::atoi(s);
  return n >= 1 ? n : 1;
}

}  // namespace mhardy
