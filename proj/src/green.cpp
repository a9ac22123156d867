#include "greenlevel/green.hpp"

#include <cmath>
#include <limits>

#include "greenlevel/rigorous.hpp"

namespace greenlevel {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

struct Quadratic {
  double re;
  double im;
};

// q(w) = 3w^2 - 3w + 1, written so conjugate inputs give conjugate outputs
// bit for bit.
Quadratic denominator(double x, double y) {
  return {3.0 * (x * x - y * y) - 3.0 * x + 1.0, 3.0 * y * (2.0 * x - 1.0)};
}

// The denominator vanishes to working precision: the root lies within the
// rounding noise of the evaluation.
bool denominator_vanishes(double x, double y) {
  const Quadratic q = denominator(x, y);
  const double mod2 = x * x + y * y;
  const double scale = 3.0 * mod2 + 3.0 * std::sqrt(mod2) + 1.0;
  return std::hypot(q.re, q.im) <= 8.0 * kEps * scale;
}

// G(w) - t0.
double offset(double x, double y) {
  if (x == 0.0 && y == 0.0) return -kInf;
  if (denominator_vanishes(x, y)) return kInf;
  const double dx = x - 1.0;
  if (std::hypot(dx, y) >= 0.25) {
    const Quadratic q = denominator(x, y);
    return std::log(std::hypot(x, y)) - std::log(std::hypot(q.re, q.im)) / 3.0;
  }
  // u = (w - 1)/w = (x(x-1) + y^2 + i y) / |w|^2, v = u^3,
  // |1 - v|^2 = 1 + s with s = -2 Re v + |v|^2.
  const double m = x * x + y * y;
  const double a = (x * dx + y * y) / m;
  const double b = y / m;
  const double re_v = a * (a * a - 3.0 * b * b);
  const double mod2_u = a * a + b * b;
  const double s = -2.0 * re_v + mod2_u * mod2_u * mod2_u;
  if (s <= -1.0) return kInf;
  return -std::log1p(s) / 6.0;
}

}  // namespace

GreenParams GreenParams::with_radius(double r) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("hole radius r must lie in (0, 1)");
  GreenParams p;
  p.custom_r_ = r;
  return p;
}

double GreenParams::r() const { return custom_r_ ? *custom_r_ : std::exp(-1.0 / 3.0); }

double GreenParams::log_r() const { return custom_r_ ? std::log(*custom_r_) : -1.0 / 3.0; }

ScalarInterval GreenParams::log_r_enclosure() const {
  if (!custom_r_) return rigorous::rational(-1, 3);
  return rigorous::log(ScalarInterval(*custom_r_));
}

double GreenParams::critical_value() const {
  return custom_r_ ? std::log(*custom_r_) / 3.0 : -1.0 / 9.0;
}

ScalarInterval GreenParams::critical_value_enclosure() const {
  if (!custom_r_) return rigorous::rational(-1, 9);
  return log_r_enclosure() * rigorous::rational(1, 3);
}

double eval_G(const ComplexPoint& w, const GreenParams& p) {
  const double d = offset(w.re, w.im);
  if (std::isinf(d)) return d;
  return p.critical_value() + d;
}

double eval_G_offset(const ComplexPoint& w) { return offset(w.re, w.im); }

PolynomialEnclosure enclose_polynomials(const PlaneBox& box) {
  const ScalarInterval& x = box.x;
  const ScalarInterval& y = box.y;
  const ScalarInterval mod2 = sqr(x) + sqr(y);
  const ScalarInterval mod2c(std::max(0.0, mod2.lo()), mod2.hi());

  // Re q = 3(x - 1/2)^2 - 3y^2 + 1/4 and Im q = 3y(2x - 1): each variable
  // occurs once per component, so both enclosures are tight.
  const ScalarInterval re_q = 3.0 * sqr(x - 0.5) - 3.0 * sqr(y) + 0.25;
  const ScalarInterval im_q = 3.0 * (y * (2.0 * x - 1.0));
  const ScalarInterval den = sqr(re_q) + sqr(im_q);
  return {cube_nonnegative(mod2c), ScalarInterval(std::max(0.0, den.lo()), den.hi())};
}

ScalarInterval enclose_offset_form(const PlaneBox& box) {
  const ScalarInterval d = sqr(box.x) + sqr(box.y);
  if (!(d.lo() > 0.0)) throw std::invalid_argument("offset form needs a box excluding 0");
  // u = 1 - 1/w = 1 - (x - iy)/|w|^2
  const ScalarInterval a = ScalarInterval(1.0) - box.x / d;
  const ScalarInterval b = box.y / d;
  const ScalarInterval a2 = sqr(a);
  const ScalarInterval b2 = sqr(b);
  const ScalarInterval vr = a * (a2 - 3.0 * b2);
  const ScalarInterval vi = b * (3.0 * a2 - b2);
  return sqr(vr) + sqr(vi) - 2.0 * vr;
}

ScalarInterval eval_G_interval(const PlaneBox& box, const GreenParams& p) {
  const PolynomialEnclosure e = enclose_polynomials(box);
  // log |h|^2 where h = w^3 / q.
  const ScalarInterval log_h2 = rigorous::log(divide_nonnegative(e.numerator, e.denominator));
  return log_h2 * rigorous::rational(1, 6) + p.log_r_enclosure() * rigorous::rational(1, 3);
}

FDerivatives eval_f_derivs(const ComplexPoint& w) {
  if (w.re == 0.0 && w.im == 0.0) throw SingularInput("f' is undefined at the pole w = 0");
  if (denominator_vanishes(w.re, w.im))
    throw SingularInput("f' is undefined at a root of 3w^2 - 3w + 1");
  const Complex z = w.value();
  const Complex q = 3.0 * z * z - 3.0 * z + 1.0;
  const Complex dq = 6.0 * z - 3.0;
  const Complex zm1 = z - 1.0;
  const Complex d = z * q;
  // f' = 3/w - q'/q = 3(w-1)^2 / (w q)
  const Complex first = 3.0 * zm1 * zm1 / d;
  const Complex second = 3.0 * zm1 * (2.0 * z * q - zm1 * (q + z * dq)) / (d * d);
  return {first, second};
}

double Gradient::norm() const { return std::hypot(dx, dy); }

Gradient eval_gradient(const ComplexPoint& w) {
  const Complex fp = eval_f_derivs(w).first;
  return {fp.real() / 3.0, -fp.imag() / 3.0};
}

namespace {

using Poly = std::vector<double>;  // coefficients, lowest degree first

Poly poly_derivative(const Poly& a) {
  Poly d;
  for (std::size_t k = 1; k < a.size(); ++k) d.push_back(static_cast<double>(k) * a[k]);
  return d;
}

Poly poly_axpy(double alpha, const Poly& a, double beta, const Poly& b) {
  Poly r(std::max(a.size(), b.size()), 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) r[k] += alpha * a[k];
  for (std::size_t k = 0; k < b.size(); ++k) r[k] += beta * b[k];
  while (r.size() > 1 && r.back() == 0.0) r.pop_back();
  return r;
}

Poly poly_shift(const Poly& a) {  // multiply by w
  Poly r(a.size() + 1, 0.0);
  for (std::size_t k = 0; k < a.size(); ++k) r[k + 1] = a[k];
  return r;
}

}  // namespace

std::vector<CriticalPoint> critical_points(const GreenParams& p) {
  const Poly q = {1.0, -3.0, 3.0};
  // Numerator of f' = (3 q - w q') / (w q).
  const Poly num = poly_axpy(GreenParams::kExponent, q, -1.0, poly_shift(poly_derivative(q)));

  std::vector<CriticalPoint> out;
  if (num.size() == 2) {
    out.push_back({{-num[0] / num[1], 0.0}, 1});
  } else if (num.size() == 3) {
    const double a = num[2];
    const double b = num[1];
    const double c = num[0];
    const double disc = b * b - 4.0 * a * c;
    if (disc == 0.0) {
      out.push_back({{-b / (2.0 * a), 0.0}, 2});
    } else if (disc > 0.0) {
      const double s = std::sqrt(disc);
      const double r1 = (-b - std::copysign(s, b)) / (2.0 * a);
      out.push_back({{r1, 0.0}, 1});
      out.push_back({{c / (a * r1), 0.0}, 1});
    } else {
      const double s = std::sqrt(-disc);
      out.push_back({{-b / (2.0 * a), s / (2.0 * a)}, 1});
      out.push_back({{-b / (2.0 * a), -s / (2.0 * a)}, 1});
    }
  }

  std::vector<CriticalPoint> kept;
  for (const auto& c : out) {
    // Common zeros with w q would cancel rather than be critical points.
    if (c.point.re == 0.0 && c.point.im == 0.0) continue;
    if (denominator_vanishes(c.point.re, c.point.im)) continue;
    if (std::abs(eval_f_derivs(c.point).first) > 1e-10) continue;
    if (!(eval_G(c.point, p) < 0.0)) continue;
    kept.push_back(c);
  }
  return kept;
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::Inside: return "inside";
    case Membership::Outside: return "outside";
    case Membership::NearBoundary: return "near-boundary";
  }
  return "unknown";
}

Membership membership(const ComplexPoint& w, const GreenParams& p, double boundary_tol) {
  if (!(boundary_tol >= 0.0)) throw std::invalid_argument("boundary tolerance must be >= 0");
  const double g = eval_G(w, p);
  if (g < -boundary_tol) return Membership::Inside;
  if (g > boundary_tol) return Membership::Outside;
  return Membership::NearBoundary;
}

bool in_omega1(const Complex& eta, const GreenParams& p) { return std::abs(eta + 1.0) > p.r(); }

bool in_omega2(const Complex& tau, const GreenParams& p) {
  return std::abs(tau * tau * tau + 1.0) > p.r();
}

bool in_omega3(const Complex& sigma, const GreenParams& p) {
  const Complex s = sigma - 1.0;
  return std::abs(s * s * s + 1.0) > p.r();
}

bool in_omega4(const Complex& w, const GreenParams& p) {
  const Complex s = 1.0 / w - 1.0;
  return std::abs(s * s * s + 1.0) > p.r();
}

ChainResult construction_chain(const ComplexPoint& w, const GreenParams& p) {
  ChainResult r;
  if (w.re == 0.0 && w.im == 0.0) {
    r.pole = true;
    return r;
  }
  const Complex z = w.value();
  const Complex sigma = 1.0 / z;
  const Complex tau = sigma - 1.0;
  const Complex eta = tau * tau * tau;
  r.in_omega1 = in_omega1(eta, p);
  r.in_omega2 = in_omega2(tau, p);
  r.in_omega3 = in_omega3(sigma, p);
  r.in_omega4 = in_omega4(z, p);
  return r;
}

double taylor_ratio(double rho, double theta, const GreenParams& p) {
  (void)p;  // G(w) - G(1) does not depend on r
  if (!(rho > 0.0 && rho < 0.5)) throw std::invalid_argument("taylor_ratio needs 0 < rho < 0.5");
  const ComplexPoint w{1.0 + rho * std::cos(theta), rho * std::sin(theta)};
  const double d = offset(w.re, w.im);
  if (std::isinf(d)) throw SingularInput("taylor_ratio sample hit a singular point");
  return d / (rho * rho * rho);
}

}  // namespace greenlevel
