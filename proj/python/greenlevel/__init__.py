"""Green function level-set areas and convexity checks."""

import json

from . import _core
from ._core import (
    SingularInput,
    TraceError,
    critical_points,
    critical_value,
    eval_G,
    f_prime,
    gradient,
    membership,
)

__version__ = _core.__version__


def certified_area(t, t_lo=None, *, r=None, tol=1e-5, max_depth=40, cell_budget=20_000_000, threads=1):
    """Certified enclosure of area{G < t}, or of area{t_lo < G < t}.

    Levels may be floats or strings such as "t0" and "t0-1e-3".
    """
    return json.loads(_core._certified_area(t, t_lo, r, tol, max_depth, cell_budget, threads))


def level_measure(t, *, r=None, threads=1):
    return json.loads(_core._level_measure(t, r, threads))


def monte_carlo_area(t_hi, t_lo=float("-inf"), *, n=1_000_000, seed=0, r=None, threads=1):
    return json.loads(_core._monte_carlo_area(t_lo, t_hi, n, seed, r, threads))


def verify(which="all", *, r=None, tol=None, seed=0, threads=1, eps=()):
    """Runs a verification check; returns the report as a dict."""
    return json.loads(_core._verify(which, r, tol, seed, threads, list(eps)))
