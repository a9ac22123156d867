#pragma once

// Closed intervals of binary64 numbers with outward rounding.
//
// Every arithmetic result is computed in round-to-nearest and then pushed one
// ulp outward on each side. IEEE-754 basic operations are correctly rounded,
// so the exact result always lies inside the widened interval; this gives the
// same guarantees as switching the FPU rounding mode, without depending on
// the compiler honouring fesetround().

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

namespace greenlevel {

inline double next_up(double x) {
  if (std::isnan(x) || x == std::numeric_limits<double>::infinity()) return x;
  if (x == 0.0) return std::numeric_limits<double>::denorm_min();
  auto bits = std::bit_cast<std::uint64_t>(x);
  bits = x > 0.0 ? bits + 1 : bits - 1;
  return std::bit_cast<double>(bits);
}

inline double next_down(double x) { return -next_up(-x); }

class ScalarInterval {
 public:
  constexpr ScalarInterval() = default;
  constexpr explicit ScalarInterval(double v) : lo_(v), hi_(v) {}
  constexpr ScalarInterval(double lo, double hi) : lo_(lo), hi_(hi) {}

  static constexpr ScalarInterval entire() {
    return {-std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  }

  constexpr double lo() const { return lo_; }
  constexpr double hi() const { return hi_; }
  double width() const { return next_up(hi_ - lo_); }
  double mid() const { return 0.5 * lo_ + 0.5 * hi_; }
  bool valid() const { return lo_ <= hi_; }
  bool contains(double v) const { return lo_ <= v && v <= hi_; }
  bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }
  bool is_point() const { return lo_ == hi_; }

 private:
  double lo_ = 0.0;
  double hi_ = 0.0;
};

inline std::ostream& operator<<(std::ostream& os, const ScalarInterval& x) {
  return os << '[' << x.lo() << ", " << x.hi() << ']';
}

inline ScalarInterval operator-(const ScalarInterval& a) { return {-a.hi(), -a.lo()}; }

inline ScalarInterval operator+(const ScalarInterval& a, const ScalarInterval& b) {
  return {next_down(a.lo() + b.lo()), next_up(a.hi() + b.hi())};
}

inline ScalarInterval operator-(const ScalarInterval& a, const ScalarInterval& b) {
  return {next_down(a.lo() - b.hi()), next_up(a.hi() - b.lo())};
}

namespace detail {
// 0 * inf is taken as 0: an infinite endpoint stands for "unbounded", and a
// zero factor annihilates any finite value it stands for.
inline double mul0(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}
}  // namespace detail

inline ScalarInterval operator*(const ScalarInterval& a, const ScalarInterval& b) {
  const double p1 = detail::mul0(a.lo(), b.lo());
  const double p2 = detail::mul0(a.lo(), b.hi());
  const double p3 = detail::mul0(a.hi(), b.lo());
  const double p4 = detail::mul0(a.hi(), b.hi());
  return {next_down(std::min({p1, p2, p3, p4})), next_up(std::max({p1, p2, p3, p4}))};
}

inline ScalarInterval operator+(const ScalarInterval& a, double b) { return a + ScalarInterval(b); }
inline ScalarInterval operator-(const ScalarInterval& a, double b) { return a - ScalarInterval(b); }
inline ScalarInterval operator*(double a, const ScalarInterval& b) { return ScalarInterval(a) * b; }

// Reciprocal; an interval containing zero maps to the whole line.
inline ScalarInterval reciprocal(const ScalarInterval& a) {
  if (a.contains_zero()) return ScalarInterval::entire();
  return {next_down(1.0 / a.hi()), next_up(1.0 / a.lo())};
}

inline ScalarInterval operator/(const ScalarInterval& a, const ScalarInterval& b) {
  if (b.contains_zero()) return ScalarInterval::entire();
  const double q1 = a.lo() / b.lo();
  const double q2 = a.lo() / b.hi();
  const double q3 = a.hi() / b.lo();
  const double q4 = a.hi() / b.hi();
  return {next_down(std::min({q1, q2, q3, q4})), next_up(std::max({q1, q2, q3, q4}))};
}

// Quotient of two nonnegative intervals; a denominator touching zero yields
// an infinite upper endpoint instead of the whole line.
inline ScalarInterval divide_nonnegative(const ScalarInterval& num, const ScalarInterval& den) {
  const double lo = den.hi() == std::numeric_limits<double>::infinity()
                        ? 0.0
                        : std::max(0.0, next_down(num.lo() / den.hi()));
  const double hi = den.lo() <= 0.0 ? std::numeric_limits<double>::infinity()
                                    : next_up(num.hi() / den.lo());
  return {lo, hi};
}

// Tight square (no dependency overestimate).
inline ScalarInterval sqr(const ScalarInterval& a) {
  const double l = std::fabs(a.lo());
  const double h = std::fabs(a.hi());
  if (a.contains_zero()) return {0.0, next_up(std::max(l, h) * std::max(l, h))};
  const double m = std::min(l, h);
  const double M = std::max(l, h);
  return {std::max(0.0, next_down(m * m)), next_up(M * M)};
}

// Cube of a nonnegative interval.
inline ScalarInterval cube_nonnegative(const ScalarInterval& a) {
  const double l = a.lo() * a.lo();
  const double h = a.hi() * a.hi();
  return {std::max(0.0, next_down(next_down(l) * a.lo())), next_up(next_up(h) * a.hi())};
}

inline ScalarInterval sqrt(const ScalarInterval& a) {
  return {std::max(0.0, next_down(std::sqrt(std::max(0.0, a.lo())))),
          next_up(std::sqrt(std::max(0.0, a.hi())))};
}

inline ScalarInterval hull(const ScalarInterval& a, const ScalarInterval& b) {
  return {std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi())};
}

// Axis-aligned box in the complex plane.
struct PlaneBox {
  ScalarInterval x;
  ScalarInterval y;

  double area() const { return (x.hi() - x.lo()) * (y.hi() - y.lo()); }
  bool contains(double px, double py) const { return x.contains(px) && y.contains(py); }
};

}  // namespace greenlevel
