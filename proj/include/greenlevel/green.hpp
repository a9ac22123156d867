#pragma once

// The Green function of the triply connected domain
//
//   Omega = { w : |(1/w - 1)^3 + 1| > r },
//
// with pole at the origin:
//
//   G(w) = (1/3) log |w^3 / (3w^2 - 3w + 1)| + (1/3) log r.
//
// Omega is exactly { G < 0 }. The only finite critical point is w = 1, a
// double zero of the complex derivative, where G(1) = (1/3) log r.

#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "greenlevel/interval.hpp"

namespace greenlevel {

using Complex = std::complex<double>;

// A point of the plane. Kept distinct from Complex so that parsing and
// printing conventions live in one place.
struct ComplexPoint {
  double re = 0.0;
  double im = 0.0;

  Complex value() const { return {re, im}; }
  ComplexPoint conj() const { return {re, -im}; }
  friend bool operator==(const ComplexPoint&, const ComplexPoint&) = default;
};

// Raised for inputs on which a quantity is undefined (pole, denominator
// root, degenerate parameters).
class SingularInput : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Parameters of the domain. The exponent (3) and pole (0) are fixed; only the
// hole radius r in (0, 1) may vary. The default radius is e^(-1/3), for which
// the critical value is exactly -1/9.
class GreenParams {
 public:
  GreenParams() = default;

  static GreenParams with_radius(double r);

  bool is_default() const { return !custom_r_.has_value(); }
  double r() const;
  double log_r() const;
  // Enclosure of log r (exact value, not of the rounded double r()).
  ScalarInterval log_r_enclosure() const;

  // t0 = (1/3) log r, the value of G at the critical point.
  double critical_value() const;
  ScalarInterval critical_value_enclosure() const;

  static constexpr int kExponent = 3;

 private:
  std::optional<double> custom_r_;
};

// Extended-real value of G: -inf at w = 0, +inf at the roots of 3w^2-3w+1
// (any w at which that polynomial vanishes to working precision).
double eval_G(const ComplexPoint& w, const GreenParams& p);

// G(w) - t0 without cancellation near w = 1, where it behaves like
// (1/3) Re (w-1)^3. Uses G - t0 = -(1/3) log |1 - u^3| with u = (w-1)/w.
double eval_G_offset(const ComplexPoint& w);

// Enclosure of G over every point of the box.
ScalarInterval eval_G_interval(const PlaneBox& box, const GreenParams& p);

// Enclosure of |w|^6 and |3w^2-3w+1|^2 over a box. G < t holds exactly where
// |w|^6 < exp(6t - 2 log r) |3w^2-3w+1|^2, which is how cells are classified
// without evaluating logarithms.
struct PolynomialEnclosure {
  ScalarInterval numerator;    // |w|^6
  ScalarInterval denominator;  // |3w^2 - 3w + 1|^2
};
PolynomialEnclosure enclose_polynomials(const PlaneBox& box);

// Enclosure of |q|^2 / |w|^6 - 1 = |1 - u^3|^2 - 1, u = (w-1)/w, over a box
// that excludes 0. Near w = 1 the two enclosures above nearly cancel; this
// one has width O(|w-1|^2 h) there, so G < t0 + c can be decided from
// D > exp(-6c) - 1 much closer to the critical point.
ScalarInterval enclose_offset_form(const PlaneBox& box);

// Derivatives of the local holomorphic branch f = log(w^3 / (3w^2-3w+1)),
// for which G = (1/3) Re f + const.
struct FDerivatives {
  Complex first;
  Complex second;
};
FDerivatives eval_f_derivs(const ComplexPoint& w);

// Gradient of G as a plane vector: (1/3)(Re f', -Im f').
struct Gradient {
  double dx = 0.0;
  double dy = 0.0;
  double norm() const;
};
Gradient eval_gradient(const ComplexPoint& w);

struct CriticalPoint {
  ComplexPoint point;
  int multiplicity = 0;
};
// All finite zeros of f'. Found from the numerator polynomial
// 3 q(w) - w q'(w) of f' = 3/w - q'/q, with q = 3w^2 - 3w + 1.
std::vector<CriticalPoint> critical_points(const GreenParams& p);

enum class Membership { Inside, Outside, NearBoundary };
std::string to_string(Membership m);

Membership membership(const ComplexPoint& w, const GreenParams& p, double boundary_tol);

// The four coordinate models of the domain: the complement of a disc
// (eta), three discs (tau), the translate (sigma) and the bounded domain (w).
bool in_omega1(const Complex& eta, const GreenParams& p);
bool in_omega2(const Complex& tau, const GreenParams& p);
bool in_omega3(const Complex& sigma, const GreenParams& p);
bool in_omega4(const Complex& w, const GreenParams& p);

struct ChainResult {
  bool in_omega1 = true;
  bool in_omega2 = true;
  bool in_omega3 = true;
  bool in_omega4 = true;
  bool pole = false;  // w = 0 maps to infinity, which is interior in every model

  bool agree() const {
    return in_omega1 == in_omega2 && in_omega2 == in_omega3 && in_omega3 == in_omega4;
  }
};
// Evaluates the four predicates at sigma = 1/w, tau = sigma - 1, eta = tau^3
// and w.
ChainResult construction_chain(const ComplexPoint& w, const GreenParams& p);

// (G(1 + rho e^{i theta}) - G(1)) / rho^3, which tends to (1/3) cos 3 theta.
double taylor_ratio(double rho, double theta, const GreenParams& p);

}  // namespace greenlevel
