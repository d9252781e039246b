#include "mhardy/fields.hpp"

#include <cmath>
#include <sstream>

#include "mhardy/errors.hpp"

namespace mhardy {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_m2(const LocalJet& j, const char* what) {
  if (j.nx != 2) throw DomainError(std::string(what) + " needs m = 2");
}

}  // namespace

// -- RadialPotential -------------------------------------------------------------

RadialPotential RadialPotential::constant(double c) {
  RadialPotential p;
  p.kind_ = Kind::Constant;
  p.c_ = c;
  return p;
}

RadialPotential RadialPotential::power(double c, double s) {
  RadialPotential p;
  p.kind_ = Kind::Power;
  p.c_ = c;
  p.s_ = s;
  return p;
}

RadialPotential RadialPotential::user(std::function<double(double)> fn,
                                      std::string label) {
  if (!fn) throw DomainError("user potential needs a callable");
  RadialPotential p;
  p.kind_ = Kind::User;
  p.fn_ = std::move(fn);
  p.label_ = std::move(label);
  return p;
}

double RadialPotential::operator()(double r) const {
  switch (kind_) {
    case Kind::Constant:
      return c_;
    case Kind::Power:
      if (r == 0.0 && s_ < 0.0)
        throw OriginError("psi = c r^s with s < 0 is undefined at the origin");
      return c_ * std::pow(r, s_);
    case Kind::User:
      return fn_(r);
  }
  return 0.0;
}

std::string RadialPotential::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case Kind::Constant: os << "constant(" << c_ << ")"; break;
    case Kind::Power: os << "power(" << c_ << ", " << s_ << ")"; break;
    case Kind::User: os << label_; break;
  }
  return os.str();
}

ConstantFieldPotentials ConstantFieldPotentials::linear(int n, double c) {
  ConstantFieldPotentials p;
  for (int j = 0; j < n; ++j) {
    p.psi1.emplace_back([c](double v) { return c * v; });
    p.psi2.emplace_back([c](double v) { return c * v; });
  }
  std::ostringstream os;
  os.precision(17);
  os << "linear(" << c << ")";
  p.label = os.str();
  return p;
}

ConstantFieldPotentials ConstantFieldPotentials::zero(int n) {
  ConstantFieldPotentials p = linear(n, 0.0);
  p.label = "zero";
  return p;
}

// -- jets -------------------------------------------------------------------

LocalJet jet_from_partials(const Partials& p, int m, int ky, double t,
                           double phi, std::span<const double> y) {
  LocalJet j;
  j.ky = ky;
  j.r = std::exp(t);
  for (int i = 0; i < ky; ++i) j.y[i] = y[i];
  j.value = p.value;
  for (int i = 0; i < ky; ++i) j.dy[i] = p.d_y[i];
  if (m == 2) {
    const double c = std::cos(phi), s = std::sin(phi);
    j.nx = 2;
    j.x = {j.r * c, j.r * s};
    const cplx dphi_r = p.d_phi / j.r;
    j.dx = {c * p.d_r - s * dphi_r, s * p.d_r + c * dphi_r};
    return j;
  }
  j.nx = 1;
  if (m == 1) {
    const double c = std::cos(phi);
    j.x = {j.r * c, 0.0};
    j.dx = {c * p.d_r, 0.0};
  } else {
    j.x = {j.r, 0.0};
    j.dx = {p.d_r, 0.0};
  }
  return j;
}

LocalJet local_jet(const TestFunction& f, int m, double t, double phi,
                   std::span<const double> y) {
  if (m < 1) throw DomainError("x dimension must be positive");
  if (m != 2 && f.has_nonzero_modes())
    throw DomainError("for m != 2 test functions must be radial in x");
  return jet_from_partials(f.partials(t, phi, y), m, f.ky(), t, phi, y);
}

// -- node layer -------------------------------------------------------------

int grushin_size(const LocalJet& j) { return j.nx + j.ky; }
int tilde_size(const LocalJet& j) { return j.nx + 2 * j.ky; }

CVec grushin_grad(double gamma, const LocalJet& j) {
  CVec out{};
  for (int i = 0; i < j.nx; ++i) out[i] = j.dx[i];
  const double rg = std::pow(j.r, gamma);
  for (int i = 0; i < j.ky; ++i) out[j.nx + i] = rg * j.dy[i];
  return out;
}

RVec grushin_potential(double gamma, const LocalJet& j) {
  double y2 = 0.0;
  for (int i = 0; i < j.ky; ++i) y2 += j.y[i] * j.y[i];
  const double rp = radial::rho_pow(gamma, j.r, y2);
  const double ax = std::pow(j.r, 2.0 * gamma) / rp;
  const double ay = std::pow(j.r, gamma) * (1.0 + gamma) / rp;
  RVec out{};
  for (int i = 0; i < j.nx; ++i) out[i] = j.x[i] * ax;
  for (int i = 0; i < j.ky; ++i) out[j.nx + i] = j.y[i] * ay;
  return out;
}

CVec tilde_grad(double gamma, const LocalJet& j) {
  require_m2(j, "tilde gradient");
  CVec out{};
  out[0] = j.dx[0];
  out[1] = j.dx[1];
  const double w = std::pow(j.r, gamma) * kInvSqrt2;
  for (int i = 0; i < j.ky; ++i) {
    out[2 + i] = w * j.dy[i];
    out[2 + j.ky + i] = w * j.dy[i];
  }
  return out;
}

RVec ab_potential(double gamma, const LocalJet& j) {
  require_m2(j, "Aharonov-Bohm potential");
  const RVec a = grushin_potential(gamma, j);
  RVec out{};
  out[0] = -a[1];
  out[1] = a[0];
  for (int i = 0; i < j.ky; ++i) {
    out[2 + i] = -kInvSqrt2 * a[2 + i];
    out[2 + j.ky + i] = kInvSqrt2 * a[2 + i];
  }
  return out;
}

CVec magnetic_grad(GradKind kind, double gamma, double beta, const LocalJet& j) {
  CVec g;
  RVec a;
  int n;
  if (kind == GradKind::Grushin) {
    g = grushin_grad(gamma, j);
    a = grushin_potential(gamma, j);
    n = grushin_size(j);
  } else {
    g = tilde_grad(gamma, j);
    a = ab_potential(gamma, j);
    n = tilde_size(j);
  }
  const cplx ibf = cplx(0.0, beta) * j.value;
  for (int i = 0; i < n; ++i) g[i] += a[i] * ibf;
  return g;
}

std::array<cplx, 2> twisted_grad_psi(double psi_r, const LocalJet& j) {
  require_m2(j, "twisted gradient");
  if (j.ky != 0) throw DomainError("twisted gradient acts on functions on R^2");
  const cplx ipf = cplx(0.0, psi_r) * j.value;
  return {j.dx[0] - ipf * j.x[1], j.dx[1] + ipf * j.x[0]};
}

CVec constant_field_grad(const ConstantFieldPotentials& pots, double gamma,
                         const LocalJet& j) {
  const int n = j.nx;
  if (j.ky != n) throw DomainError("constant-field gradient needs m = k");
  if (static_cast<int>(pots.psi1.size()) != n ||
      static_cast<int>(pots.psi2.size()) != n)
    throw DomainError("constant-field potentials need n entries each");
  const cplx I(0.0, 1.0);
  const double rg = std::pow(j.r, gamma);
  CVec out{};
  for (int i = 0; i < n; ++i) {
    out[i] = I * j.dx[i] + pots.psi1[i](j.y[i]) * j.value;
    out[n + i] = I * rg * j.dy[i] + pots.psi2[i](j.x[i]) * j.value;
  }
  return out;
}

double norm_sq(const CVec& v, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::norm(v[i]);
  return s;
}

double norm_sq(const RVec& v, int n) {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += v[i] * v[i];
  return s;
}

// -- point layer ------------------------------------------------------------

namespace {

void check_point(const GrushinGeometry& geom, const Point& p) {
  geom.validate();
  if (static_cast<int>(p.x.size()) != geom.m ||
      static_cast<int>(p.y.size()) != geom.k)
    throw DomainError("point dimensions do not match the geometry");
  for (double a : p.x)
    if (std::isnan(a)) throw DomainError("NaN coordinate in x");
  for (double a : p.y)
    if (std::isnan(a)) throw DomainError("NaN coordinate in y");
}

double x_norm(const Point& p) {
  double s = 0.0;
  for (double a : p.x) s += a * a;
  return std::sqrt(s);
}

struct PointJet {
  LocalJet jet;
  bool zero = false;  // point outside the representable region, f == 0 there
};

PointJet point_jet(int m, const TestFunction& f, const Point& p) {
  if (f.ky() != static_cast<int>(p.y.size()))
    throw DomainError("test function y dimension does not match the point");
  const double r = x_norm(p);
  PointJet out;
  if (r == 0.0) {
    // t = log r is -inf; only functions supported away from x = 0 vanish here
    if (f.support().t_lo > -kInf) {
      out.zero = true;
      out.jet.nx = m == 2 ? 2 : 1;
      out.jet.ky = f.ky();
      return out;
    }
    throw OriginError("test function is not representable on {x = 0}");
  }
  double phi = 0.0;
  if (m == 2)
    phi = std::atan2(p.x[1], p.x[0]);
  else if (m == 1)
    phi = p.x[0] >= 0.0 ? 0.0 : M_PI;
  out.jet = local_jet(f, m, std::log(r), phi, p.y);
  if (m == 2) out.jet.x = {p.x[0], p.x[1]};  // exact coordinates
  if (m == 1) out.jet.x = {p.x[0], 0.0};
  return out;
}

// Expands the x-part of a node vector to m Cartesian components.
template <class V, class T>
std::vector<T> expand(const V& v, const LocalJet& j, int m, int tail,
                      const Point& p) {
  std::vector<T> out;
  out.reserve(m + tail);
  if (m <= 2) {
    for (int i = 0; i < m; ++i) out.push_back(v[i]);
  } else {
    const double r = x_norm(p);
    for (int i = 0; i < m; ++i) out.push_back(v[0] * (p.x[i] / r));
  }
  for (int i = 0; i < tail; ++i) out.push_back(v[j.nx + i]);
  return out;
}

void reject_origin(const Point& p) {
  double s = 0.0;
  for (double a : p.x) s += a * a;
  for (double a : p.y) s += a * a;
  if (s == 0.0) throw OriginError("potential is undefined at the origin");
}

}  // namespace

std::vector<double> grushin_potential(const GrushinGeometry& geom, const Point& p) {
  check_point(geom, p);
  reject_origin(p);
  std::vector<double> g = grad_rho(geom, p);
  const double rh = rho(geom, p);
  for (double& a : g) a /= rh;
  return g;
}

std::vector<double> ab_potential(const GrushinGeometry& geom, const Point& p) {
  check_point(geom, p);
  if (geom.m != 2) throw DomainError("Aharonov-Bohm potential needs m = 2");
  const std::vector<double> a = grushin_potential(geom, p);
  std::vector<double> out;
  out.reserve(2 + 2 * geom.k);
  out.push_back(-a[1]);
  out.push_back(a[0]);
  for (int i = 0; i < geom.k; ++i) out.push_back(-kInvSqrt2 * a[2 + i]);
  for (int i = 0; i < geom.k; ++i) out.push_back(kInvSqrt2 * a[2 + i]);
  return out;
}

std::vector<cplx> grushin_grad(const GrushinGeometry& geom, const TestFunction& f,
                               const Point& p) {
  check_point(geom, p);
  const PointJet pj = point_jet(geom.m, f, p);
  if (pj.zero) return std::vector<cplx>(geom.m + geom.k);
  return expand<CVec, cplx>(grushin_grad(geom.gamma, pj.jet), pj.jet, geom.m,
                            geom.k, p);
}

std::vector<cplx> tilde_grad(const GrushinGeometry& geom, const TestFunction& f,
                             const Point& p) {
  check_point(geom, p);
  if (geom.m != 2) throw DomainError("tilde gradient needs m = 2");
  const PointJet pj = point_jet(2, f, p);
  if (pj.zero) return std::vector<cplx>(2 + 2 * geom.k);
  return expand<CVec, cplx>(tilde_grad(geom.gamma, pj.jet), pj.jet, 2,
                            2 * geom.k, p);
}

std::vector<cplx> magnetic_grad(GradKind kind, const GrushinGeometry& geom,
                                FluxParam flux, const TestFunction& f,
                                const Point& p) {
  check_point(geom, p);
  reject_origin(p);
  if (kind == GradKind::Tilde && geom.m != 2)
    throw DomainError("tilde gradient needs m = 2");
  const PointJet pj = point_jet(geom.m, f, p);
  const int tail = kind == GradKind::Grushin ? geom.k : 2 * geom.k;
  if (pj.zero) return std::vector<cplx>(geom.m + tail);
  return expand<CVec, cplx>(magnetic_grad(kind, geom.gamma, flux.beta, pj.jet),
                            pj.jet, geom.m, tail, p);
}

std::vector<cplx> twisted_grad_psi(const RadialPotential& psi,
                                   const TestFunction& f, const Point& p) {
  if (p.x.size() != 1 || p.y.size() != 1)
    throw DomainError("twisted gradient takes a plane point (x, y)");
  if (f.ky() != 0) throw DomainError("twisted gradient acts on functions on R^2");
  const double x = p.x[0], y = p.y[0];
  if (std::isnan(x) || std::isnan(y)) throw DomainError("NaN coordinate");
  const double r = std::hypot(x, y);
  const double ps = psi(r);
  if (r == 0.0) {
    if (f.support().t_lo > -kInf) return {0.0, 0.0};
    throw OriginError("test function is not representable at z = 0");
  }
  LocalJet j = local_jet(f, 2, std::log(r), std::atan2(y, x), {});
  j.x = {x, y};
  const auto g = twisted_grad_psi(ps, j);
  return {g[0], g[1]};
}

std::vector<cplx> constant_field_grad(const ConstantFieldPotentials& pots,
                                      const GrushinGeometry& geom,
                                      const TestFunction& f, const Point& p) {
  check_point(geom, p);
  reject_origin(p);
  if (geom.m != geom.k || geom.m > 2)
    throw DomainError("constant-field gradient is implemented for m = k = n <= 2");
  const PointJet pj = point_jet(geom.m, f, p);
  if (pj.zero) return std::vector<cplx>(2 * geom.m);
  const CVec v = constant_field_grad(pots, geom.gamma, pj.jet);
  return std::vector<cplx>(v.begin(), v.begin() + 2 * geom.m);
}

}  // namespace mhardy
