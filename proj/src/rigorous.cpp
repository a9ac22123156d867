#include "greenlevel/rigorous.hpp"

#include <mpfr.h>

#include <limits>

namespace greenlevel::rigorous {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// RAII wrapper around one binary64-precision MPFR variable.
class Mpfr {
 public:
  Mpfr() { mpfr_init2(v_, 53); }
  ~Mpfr() { mpfr_clear(v_); }
  Mpfr(const Mpfr&) = delete;
  Mpfr& operator=(const Mpfr&) = delete;

  mpfr_ptr get() { return v_; }

 private:
  mpfr_t v_;
};

template <class Fn>
double apply(Fn fn, double x, mpfr_rnd_t rnd) {
  Mpfr a;
  Mpfr r;
  mpfr_set_d(a.get(), x, MPFR_RNDN);  // exact: 53-bit target
  fn(r.get(), a.get(), rnd);
  return mpfr_get_d(r.get(), rnd);
}

}  // namespace

double log_down(double x) {
  if (x <= 0.0) return -kInf;
  if (x == kInf) return kInf;
  return apply(mpfr_log, x, MPFR_RNDD);
}

double log_up(double x) {
  if (x <= 0.0) return -kInf;
  if (x == kInf) return kInf;
  return apply(mpfr_log, x, MPFR_RNDU);
}

double exp_down(double x) {
  if (x == -kInf) return 0.0;
  return apply(mpfr_exp, x, MPFR_RNDD);
}

double exp_up(double x) {
  if (x == -kInf) return 0.0;
  return apply(mpfr_exp, x, MPFR_RNDU);
}

ScalarInterval log(const ScalarInterval& x) { return {log_down(x.lo()), log_up(x.hi())}; }

ScalarInterval exp(const ScalarInterval& x) { return {exp_down(x.lo()), exp_up(x.hi())}; }

ScalarInterval pow_two_thirds(double x) {
  auto one = [x](mpfr_rnd_t rnd) {
    Mpfr a;
    Mpfr r;
    mpfr_set_d(a.get(), x, MPFR_RNDN);
    mpfr_cbrt(r.get(), a.get(), rnd);
    mpfr_sqr(r.get(), r.get(), rnd);
    return mpfr_get_d(r.get(), rnd);
  };
  return {one(MPFR_RNDD), one(MPFR_RNDU)};
}

ScalarInterval pi() {
  Mpfr a;
  mpfr_const_pi(a.get(), MPFR_RNDD);
  const double lo = mpfr_get_d(a.get(), MPFR_RNDD);
  mpfr_const_pi(a.get(), MPFR_RNDU);
  const double hi = mpfr_get_d(a.get(), MPFR_RNDU);
  return {lo, hi};
}

ScalarInterval rational(long p, long q) {
  Mpfr a;
  mpfr_set_si(a.get(), p, MPFR_RNDN);
  mpfr_div_si(a.get(), a.get(), q, MPFR_RNDD);
  const double lo = mpfr_get_d(a.get(), MPFR_RNDD);
  mpfr_set_si(a.get(), p, MPFR_RNDN);
  mpfr_div_si(a.get(), a.get(), q, MPFR_RNDU);
  const double hi = mpfr_get_d(a.get(), MPFR_RNDU);
  return {lo, hi};
}

}  // namespace greenlevel::rigorous
