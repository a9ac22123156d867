#pragma once

// Directed-rounding elementary functions backed by MPFR.
//
// MPFR rounds every result correctly in the requested direction, so these are
// valid enclosures of the exact mathematical value. They are comparatively
// slow and are used for constants, thresholds and the interval extension of
// the Green function, never inside the quadtree hot loop.

#include "greenlevel/interval.hpp"

namespace greenlevel::rigorous {

double log_down(double x);
double log_up(double x);
double exp_down(double x);
double exp_up(double x);

// Enclosures of log and exp over an interval (monotone, so endpoint-wise).
// log of a nonpositive lower endpoint gives -inf.
ScalarInterval log(const ScalarInterval& x);
ScalarInterval exp(const ScalarInterval& x);

// x^(2/3) for x > 0.
ScalarInterval pow_two_thirds(double x);

ScalarInterval pi();

// Enclosure of p/q for small integers.
ScalarInterval rational(long p, long q);

}  // namespace greenlevel::rigorous
