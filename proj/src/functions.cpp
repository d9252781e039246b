#include "mhardy/functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mhardy/errors.hpp"

namespace mhardy {

double smooth_step(double u) {
  if (u <= 0.0) return 0.0;
  if (u >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  return a / (a + b);
}

double smooth_step_deriv(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / u);
  const double b = std::exp(-1.0 / (1.0 - u));
  const double s = a + b;
  const double v = 1.0 - u;
  return a * b * (1.0 / (u * u) + 1.0 / (v * v)) / (s * s);
}

namespace {

struct Bump {
  double v;
  double d;
};

// Plateau on [a, b], identically 1 on the middle half.
Bump plateau(double x, double a, double b) {
  if (x <= a || x >= b) return {0.0, 0.0};
  const double w = 0.25 * (b - a);
  const double u1 = (x - a) / w;
  const double u2 = (b - x) / w;
  const double s1 = smooth_step(u1);
  const double s2 = smooth_step(u2);
  return {s1 * s2,
          (smooth_step_deriv(u1) * s2 - s1 * smooth_step_deriv(u2)) / w};
}

void require(bool ok, const std::string& what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

// -- Factor -----------------------------------------------------------------

Factor Factor::log_plateau(double t_lo, double t_hi) {
  require(std::isfinite(t_lo) && std::isfinite(t_hi) && t_lo < t_hi,
          "log plateau needs finite t_lo < t_hi");
  Factor f;
  f.kind = FactorKind::LogPlateau;
  f.a = t_lo;
  f.b = t_hi;
  return f;
}

Factor Factor::exp_t(double c) {
  require(std::isfinite(c), "exponent must be finite");
  Factor f;
  f.kind = FactorKind::ExpT;
  f.a = c;
  return f;
}

Factor Factor::abs_log_power(double c, int sign) {
  require(std::isfinite(c), "exponent must be finite");
  require(sign == 1 || sign == -1, "side must be +1 or -1");
  Factor f;
  f.kind = FactorKind::AbsLogPower;
  f.a = c;
  f.axis = sign;
  return f;
}

Factor Factor::loglog_plateau(double s_lo, double s_hi, int sign) {
  require(std::isfinite(s_lo) && std::isfinite(s_hi) && s_lo < s_hi,
          "loglog plateau needs finite s_lo < s_hi");
  require(sign == 1 || sign == -1, "side must be +1 or -1");
  Factor f;
  f.kind = FactorKind::LogLogPlateau;
  f.a = s_lo;
  f.b = s_hi;
  f.axis = sign;
  return f;
}

Factor Factor::gaussian_r(double a) {
  require(a > 0.0 && std::isfinite(a), "gaussian rate must be positive");
  Factor f;
  f.kind = FactorKind::GaussianR;
  f.a = a;
  return f;
}

Factor Factor::outer_step(double r_flat, double r_zero) {
  require(r_flat > 0.0 && r_flat < r_zero && std::isfinite(r_zero),
          "outer step needs 0 < r_flat < r_zero");
  Factor f;
  f.kind = FactorKind::OuterStep;
  f.a = r_flat;
  f.b = r_zero;
  return f;
}

Factor Factor::y_plateau(int axis, double lo, double hi) {
  require(axis >= 0 && axis < kMaxY, "y axis out of range");
  require(std::isfinite(lo) && std::isfinite(hi) && lo < hi,
          "y plateau needs finite lo < hi");
  Factor f;
  f.kind = FactorKind::YPlateau;
  f.axis = axis;
  f.a = lo;
  f.b = hi;
  return f;
}

Factor Factor::y_gaussian(const YVec& center, double width) {
  require(width > 0.0 && std::isfinite(width), "gaussian width must be positive");
  Factor f;
  f.kind = FactorKind::YGaussian;
  f.a = width;
  f.center = center;
  return f;
}

Factor Factor::rho_power(double c, double gamma) {
  require(std::isfinite(c) && gamma >= 0.0, "invalid rho power");
  Factor f;
  f.kind = FactorKind::RhoPower;
  f.a = c;
  f.gamma = gamma;
  return f;
}

Factor Factor::rho_plateau(double log_rho_lo, double log_rho_hi, double gamma) {
  require(std::isfinite(log_rho_lo) && std::isfinite(log_rho_hi) &&
              log_rho_lo < log_rho_hi && gamma >= 0.0,
          "rho plateau needs finite log_rho_lo < log_rho_hi");
  Factor f;
  f.kind = FactorKind::RhoPlateau;
  f.a = log_rho_lo;
  f.b = log_rho_hi;
  f.gamma = gamma;
  return f;
}

bool Factor::is_radial() const {
  switch (kind) {
    case FactorKind::YPlateau:
    case FactorKind::YGaussian:
    case FactorKind::RhoPower:
    case FactorKind::RhoPlateau:
      return false;
    default:
      return true;
  }
}

FactorValue eval_factor(const Factor& f, double t, double r,
                        std::span<const double> y) {
  FactorValue out;
  switch (f.kind) {
    case FactorKind::LogPlateau: {
      const Bump b = plateau(t, f.a, f.b);
      out.v = b.v;
      out.dt = b.d;
      break;
    }
    case FactorKind::ExpT:
      out.v = std::exp(f.a * t);
      out.dt = f.a * out.v;
      break;
    case FactorKind::AbsLogPower: {
      if (f.axis * t <= 0.0) break;
      const double at = std::abs(t);
      out.v = std::pow(at, f.a);
      out.dt = f.a * out.v / t;
      break;
    }
    case FactorKind::LogLogPlateau: {
      if (f.axis * t <= 0.0) break;
      const Bump b = plateau(std::log(std::abs(t)), f.a, f.b);
      out.v = b.v;
      out.dt = b.d / t;
      break;
    }
    case FactorKind::GaussianR: {
      const double r2 = r * r;
      out.v = std::exp(-f.a * r2);
      out.dt = -2.0 * f.a * r2 * out.v;
      break;
    }
    case FactorKind::OuterStep: {
      const double w = f.b - f.a;
      const double u = (r - f.a) / w;
      out.v = 1.0 - smooth_step(u);
      out.dt = -r * smooth_step_deriv(u) / w;
      break;
    }
    case FactorKind::YPlateau: {
      if (f.axis >= static_cast<int>(y.size())) break;
      const Bump b = plateau(y[f.axis], f.a, f.b);
      out.v = b.v;
      out.dy[f.axis] = b.d;
      break;
    }
    case FactorKind::YGaussian: {
      double q = 0.0;
      for (std::size_t j = 0; j < y.size(); ++j) {
        const double d = y[j] - f.center[j];
        q += d * d;
      }
      const double w2 = f.a * f.a;
      out.v = std::exp(-0.5 * q / w2);
      for (std::size_t j = 0; j < y.size(); ++j)
        out.dy[j] = -(y[j] - f.center[j]) / w2 * out.v;
      break;
    }
    case FactorKind::RhoPower:
    case FactorKind::RhoPlateau: {
      double y2 = 0.0;
      for (double a : y) y2 += a * a;
      const double rp = radial::rho_pow(f.gamma, r, y2);
      const double g1 = 1.0 + f.gamma;
      const double log_rho = std::log(rp) / (2.0 * g1);
      // d log rho / dt and d log rho / dy_j
      const double dlt = std::pow(r, 2.0 * g1) / rp;
      const double dly = g1 / rp;
      double dv = 0.0;
      if (f.kind == FactorKind::RhoPower) {
        out.v = std::exp(f.a * log_rho);
        dv = f.a * out.v;
      } else {
        const Bump b = plateau(log_rho, f.a, f.b);
        out.v = b.v;
        dv = b.d;
      }
      out.dt = dv * dlt;
      for (std::size_t j = 0; j < y.size(); ++j) out.dy[j] = dv * dly * y[j];
      break;
    }
  }
  return out;
}

// -- Support ----------------------------------------------------------------

Support::Support() { y_box.fill({-kInf, kInf}); }

bool Support::empty(int ky) const {
  if (!(t_lo < t_hi)) return true;
  for (int j = 0; j < ky; ++j)
    if (!(y_box[j].first < y_box[j].second)) return true;
  return false;
}

namespace {

void add_plateau_breaks(std::vector<double>& v, double a, double b) {
  const double w = 0.25 * (b - a);
  v.insert(v.end(), {a, a + w, b - w, b});
}

Support mode_support(const AngularMode& mode, int ky) {
  Support s;
  for (const Factor& f : mode.factors) {
    switch (f.kind) {
      case FactorKind::LogPlateau:
        s.t_lo = std::max(s.t_lo, f.a);
        s.t_hi = std::min(s.t_hi, f.b);
        add_plateau_breaks(s.t_breaks, f.a, f.b);
        break;
      case FactorKind::AbsLogPower:
        if (f.axis > 0)
          s.t_lo = std::max(s.t_lo, 0.0);
        else
          s.t_hi = std::min(s.t_hi, 0.0);
        break;
      case FactorKind::LogLogPlateau: {
        const double lo = std::exp(f.a), hi = std::exp(f.b);
        if (f.axis > 0) {
          s.t_lo = std::max(s.t_lo, lo);
          s.t_hi = std::min(s.t_hi, hi);
        } else {
          s.t_lo = std::max(s.t_lo, -hi);
          s.t_hi = std::min(s.t_hi, -lo);
        }
        s.loglog_sign = f.axis;
        s.s_lo = std::max(s.s_lo, f.a);
        s.s_hi = std::min(s.s_hi, f.b);
        add_plateau_breaks(s.t_breaks, f.a, f.b);
        break;
      }
      case FactorKind::OuterStep:
        s.t_hi = std::min(s.t_hi, std::log(f.b));
        s.t_breaks.push_back(std::log(f.a));
        s.t_breaks.push_back(std::log(f.b));
        break;
      // Gaussians: effective support where the factor exceeds e^-60
      case FactorKind::GaussianR:
        s.t_hi = std::min(s.t_hi, 0.5 * std::log(60.0 / f.a));
        break;
      case FactorKind::YGaussian:
        for (int j = 0; j < ky; ++j) {
          s.y_box[j].first = std::max(s.y_box[j].first, f.center[j] - 11.0 * f.a);
          s.y_box[j].second = std::min(s.y_box[j].second, f.center[j] + 11.0 * f.a);
        }
        break;
      case FactorKind::YPlateau:
        if (f.axis < ky) {
          s.y_box[f.axis].first = std::max(s.y_box[f.axis].first, f.a);
          s.y_box[f.axis].second = std::min(s.y_box[f.axis].second, f.b);
          add_plateau_breaks(s.y_breaks[f.axis], f.a, f.b);
        }
        break;
      case FactorKind::RhoPlateau: {
        const double g1 = 1.0 + f.gamma;
        s.t_hi = std::min(s.t_hi, f.b);
        const double ymax = std::exp(g1 * f.b) / g1;
        for (int j = 0; j < ky; ++j) {
          s.y_box[j].first = std::max(s.y_box[j].first, -ymax);
          s.y_box[j].second = std::min(s.y_box[j].second, ymax);
        }
        const double scale = std::exp(g1 * f.a) / g1;
        s.y_scale = s.y_scale > 0.0 ? std::min(s.y_scale, scale) : scale;
        break;
      }
      default:
        break;
    }
  }
  return s;
}

}  // namespace

// -- TestFunction -------------------------------------------------------------

TestFunction::TestFunction(int ky, std::vector<AngularMode> modes)
    : ky_(ky), modes_(std::move(modes)) {
  require(ky >= 0 && ky <= kMaxY,
          "y dimension must lie in [0, " + std::to_string(kMaxY) + "]");
  for (std::size_t i = 0; i < modes_.size(); ++i)
    for (std::size_t j = i + 1; j < modes_.size(); ++j)
      require(modes_[i].k != modes_[j].k,
              "angular mode " + std::to_string(modes_[i].k) + " repeated");
  std::sort(modes_.begin(), modes_.end(),
            [](const AngularMode& a, const AngularMode& b) { return a.k < b.k; });
}

int TestFunction::max_abs_mode() const {
  int m = 0;
  for (const auto& mode : modes_) m = std::max(m, std::abs(mode.k));
  return m;
}

bool TestFunction::has_nonzero_modes() const {
  return std::any_of(modes_.begin(), modes_.end(),
                     [](const AngularMode& m) { return m.k != 0; });
}

namespace {

struct ModeEval {
  double v = 1.0;
  double dt = 0.0;
  YVec dy{};
};

ModeEval eval_mode(const AngularMode& mode, double t, double r,
                   std::span<const double> y) {
  ModeEval acc;
  const std::size_t ky = y.size();
  for (const Factor& f : mode.factors) {
    const FactorValue fv = eval_factor(f, t, r, y);
    acc.dt = acc.dt * fv.v + acc.v * fv.dt;
    for (std::size_t j = 0; j < ky; ++j)
      acc.dy[j] = acc.dy[j] * fv.v + acc.v * fv.dy[j];
    acc.v *= fv.v;
    if (acc.v == 0.0 && acc.dt == 0.0) {
      bool all_zero = true;
      for (std::size_t j = 0; j < ky; ++j) all_zero = all_zero && acc.dy[j] == 0.0;
      if (all_zero) return ModeEval{0.0, 0.0, {}};
    }
  }
  return acc;
}

}  // namespace

cplx TestFunction::value(double t, double phi, std::span<const double> y) const {
  return partials(t, phi, y).value;
}

void TestFunction::mode_jets(double t, std::span<const double> y,
                             std::vector<ModeJet>& out) const {
  out.clear();
  const double te = t + t_shift_;
  const double re = std::exp(te);
  std::array<double, kMaxY> ys{};
  for (int j = 0; j < ky_; ++j) ys[j] = y[j] * y_scale_;
  const std::span<const double> yv(ys.data(), static_cast<std::size_t>(ky_));
  for (const AngularMode& mode : modes_) {
    const ModeEval e = eval_mode(mode, te, re, yv);
    bool any = e.v != 0.0 || e.dt != 0.0;
    for (int j = 0; j < ky_ && !any; ++j) any = e.dy[j] != 0.0;
    if (!any) continue;
    ModeJet mj;
    mj.k = mode.k;
    mj.v = mode.amp * e.v;
    mj.dt = mode.amp * e.dt;
    for (int j = 0; j < ky_; ++j) mj.dy[j] = mode.amp * e.dy[j] * y_scale_;
    out.push_back(mj);
  }
}

Partials TestFunction::combine(std::span<const ModeJet> jets, double t,
                               double phi, int ky) {
  Partials p;
  for (const ModeJet& mj : jets) {
    const cplx e = mj.k == 0 ? cplx(1.0, 0.0) : std::polar(1.0, mj.k * phi);
    const cplx v = mj.v * e;
    p.value += v;
    p.d_t += mj.dt * e;
    p.d_phi += cplx(-mj.k * v.imag(), mj.k * v.real());
    for (int j = 0; j < ky; ++j) p.d_y[j] += mj.dy[j] * e;
  }
  p.d_r = p.d_t * std::exp(-t);
  return p;
}

Partials TestFunction::partials(double t, double phi,
                                std::span<const double> y) const {
  std::vector<ModeJet> jets;
  jets.reserve(modes_.size());
  mode_jets(t, y, jets);
  return combine(jets, t, phi, ky_);
}

cplx TestFunction::mode_value(int k, double t, std::span<const double> y) const {
  std::vector<ModeJet> jets;
  mode_jets(t, y, jets);
  for (const ModeJet& mj : jets)
    if (mj.k == k) return mj.v;
  return {0.0, 0.0};
}

Support TestFunction::support() const {
  Support u;
  bool first = true;
  for (const AngularMode& mode : modes_) {
    Support s = mode_support(mode, ky_);
    if (s.empty(ky_)) continue;
    // undo the dilation: f_l(t, y) = f(t + shift, y * scale)
    s.t_lo -= t_shift_;
    s.t_hi -= t_shift_;
    if (s.loglog_sign == 0)
      for (double& b : s.t_breaks) b -= t_shift_;
    for (int j = 0; j < ky_; ++j) {
      s.y_box[j].first /= y_scale_;
      s.y_box[j].second /= y_scale_;
      for (double& b : s.y_breaks[j]) b /= y_scale_;
    }
    s.y_scale /= y_scale_;
    if (first) {
      u = s;
      first = false;
      continue;
    }
    u.t_lo = std::min(u.t_lo, s.t_lo);
    u.t_hi = std::max(u.t_hi, s.t_hi);
    u.t_breaks.insert(u.t_breaks.end(), s.t_breaks.begin(), s.t_breaks.end());
    for (int j = 0; j < ky_; ++j)
      u.y_breaks[j].insert(u.y_breaks[j].end(), s.y_breaks[j].begin(),
                           s.y_breaks[j].end());
    for (int j = 0; j < ky_; ++j) {
      u.y_box[j].first = std::min(u.y_box[j].first, s.y_box[j].first);
      u.y_box[j].second = std::max(u.y_box[j].second, s.y_box[j].second);
    }
    if (s.loglog_sign != u.loglog_sign)
      throw DomainError("modes mix loglog and ordinary radial supports");
    u.s_lo = std::min(u.s_lo, s.s_lo);
    u.s_hi = std::max(u.s_hi, s.s_hi);
    if (s.y_scale > 0.0)
      u.y_scale = u.y_scale > 0.0 ? std::min(u.y_scale, s.y_scale) : s.y_scale;
  }
  if (first) {
    u.t_lo = 0.0;
    u.t_hi = 0.0;
  }
  return u;
}

bool TestFunction::is_real_valued() const {
  for (const AngularMode& mode : modes_) {
    if (mode.k == 0) {
      if (mode.amp.imag() != 0.0) return false;
      continue;
    }
    const auto partner =
        std::find_if(modes_.begin(), modes_.end(),
                     [&](const AngularMode& m) { return m.k == -mode.k; });
    if (partner == modes_.end()) return false;
    if (partner->amp != std::conj(mode.amp)) return false;
    if (partner->factors != mode.factors) return false;
  }
  return true;
}

TestFunction TestFunction::dilated(double lambda, double gamma) const {
  require(lambda > 0.0 && std::isfinite(lambda), "dilation factor must be positive");
  for (const auto& mode : modes_)
    for (const auto& f : mode.factors)
      require(f.kind != FactorKind::LogLogPlateau && f.kind != FactorKind::AbsLogPower,
              "log-type factors are not dilation covariant");
  TestFunction out = *this;
  out.t_shift_ += std::log(lambda);
  out.y_scale_ *= std::pow(lambda, 1.0 + gamma);
  return out;
}

TestFunction TestFunction::scaled(cplx c) const {
  TestFunction out = *this;
  for (auto& mode : out.modes_) mode.amp *= c;
  return out;
}

TestFunction angular_average(const TestFunction& f) {
  // copy, then filter in place so the dilation state survives
  TestFunction out = f;
  std::erase_if(out.modes_, [](const AngularMode& m) { return m.k != 0; });
  return out;
}

std::vector<Factor> make_bump(double r_lo, double r_hi,
                              std::span<const std::pair<double, double>> y_box) {
  require(r_lo > 0.0 && r_lo < r_hi && std::isfinite(r_hi),
          "bump needs 0 < r_lo < r_hi");
  require(y_box.size() <= static_cast<std::size_t>(kMaxY), "too many y axes");
  std::vector<Factor> out;
  out.push_back(Factor::log_plateau(std::log(r_lo), std::log(r_hi)));
  for (std::size_t j = 0; j < y_box.size(); ++j)
    out.push_back(Factor::y_plateau(static_cast<int>(j), y_box[j].first,
                                    y_box[j].second));
  return out;
}

TestFunction single_mode(int ky, int k, cplx amp, std::vector<Factor> factors) {
  return TestFunction(ky, {AngularMode{k, amp, std::move(factors)}});
}

const char* to_string(TrialBase base) {
  switch (base) {
    case TrialBase::InversePower: return "inverse_power";
    case TrialBase::LogPower: return "log_power";
    case TrialBase::Power: return "power";
    case TrialBase::RhoPower: return "rho_power";
  }
  return "?";
}

std::optional<TrialBase> trial_base_from_string(const std::string& s) {
  for (TrialBase b : {TrialBase::InversePower, TrialBase::LogPower,
                      TrialBase::Power, TrialBase::RhoPower})
    if (s == to_string(b)) return b;
  return std::nullopt;
}

TestFunction make_trial(const TrialFamily& family) {
  require(std::isfinite(family.lo) && std::isfinite(family.hi) &&
              family.lo < family.hi,
          "trial support needs lo < hi");
  switch (family.base) {
    case TrialBase::InversePower:
      return single_mode(0, 0, 1.0,
                         {Factor::exp_t(-family.exponent),
                          Factor::log_plateau(family.lo, family.hi)});
    case TrialBase::Power:
      return single_mode(0, 0, 1.0,
                         {Factor::exp_t(family.exponent),
                          Factor::log_plateau(family.lo, family.hi)});
    case TrialBase::LogPower:
      return single_mode(0, 0, 1.0,
                         {Factor::abs_log_power(family.exponent, family.sign),
                          Factor::loglog_plateau(family.lo, family.hi, family.sign)});
    case TrialBase::RhoPower:
      break;
  }
  throw DomainError("rho_power trials need a Grushin geometry");
}

TestFunction make_trial(const TrialFamily& family, const GrushinGeometry& geom,
                        const WeightExponents& exps) {
  geom.validate();
  if (family.base != TrialBase::RhoPower)
    throw DomainError(std::string(to_string(family.base)) +
                      " trials are radial; use make_trial(family)");
  require(std::isfinite(family.lo) && std::isfinite(family.hi) &&
              family.lo < family.hi,
          "trial support needs lo < hi");
  require(geom.k <= kMaxY, "y dimension too large");
  const double lam = 0.5 * (hom_dim(geom) + exps.alpha1 - 2.0);
  require(lam > 0.0, "rho_power trial needs Q + alpha1 - 2 > 0");
  return single_mode(geom.k, 0, 1.0,
                     {Factor::rho_power(-lam + family.epsilon, geom.gamma),
                      Factor::rho_plateau(family.lo, family.hi, geom.gamma)});
}

}  // namespace mhardy
