"""Scalar kernel for the gamma special functions used throughout the package.

Provides log-gamma, the regularized lower and upper incomplete gamma
functions P(a, x) and Q(a, x) = 1 - P(a, x), and the inverse of P in its
second argument.  P(a, x) is the CDF at x of a gamma distribution with
shape a and unit scale, so the inverse is the gamma quantile function.

P and Q are evaluated by the classic power series for x < a + 1 and by a
modified Lentz continued fraction for x >= a + 1.  In each region one of
the pair is computed directly and the other as its one-minus complement,
so P(a, x) + Q(a, x) sums to 1.0 exactly in floating point.  The inverse
starts from a Wilson-Hilferty estimate and polishes it with Newton steps
safeguarded by a bisection bracket.
"""

import math

from .errors import ConvergenceError, DomainError

__all__ = [
    "ln_gamma",
    "reg_lower_gamma",
    "reg_upper_gamma",
    "inv_reg_lower_gamma",
]

_EPS = 1.0e-16            # relative termination threshold for series/fraction
_TINY = 1.0e-300          # Lentz guard against vanishing divisors
_LOG_UNDERFLOW = -746.0   # below this, exp() is 0.0 even as a denormal
_MAX_TERMS = 800
_MAX_INVERSE_ITER = 200


def _check_shape(a: float) -> None:
    if not (isinstance(a, (int, float)) and math.isfinite(a) and a > 0.0):
        raise DomainError(f"gamma shape must be positive and finite, got {a!r}")


def ln_gamma(a: float) -> float:
    """Natural log of the gamma function for positive finite a."""
    _check_shape(a)
    return math.lgamma(a)


def _log_prefactor(a: float, x: float) -> float:
    # log of x^a e^-x / Gamma(a), the factor common to both expansions
    return a * math.log(x) - x - math.lgamma(a)


def _lower_series(a: float, x: float) -> float:
    """P(a, x) by the ascending series; accurate and fast for x < a + 1."""
    log_pref = _log_prefactor(a, x)
    if log_pref < _LOG_UNDERFLOW:
        return 0.0
    term = 1.0 / a
    total = term
    for n in range(1, _MAX_TERMS):
        term *= x / (a + n)
        total += term
        if term < total * _EPS:
            return total * math.exp(log_pref)
    raise ConvergenceError(f"incomplete gamma series stalled at a={a}, x={x}")


def _upper_fraction(a: float, x: float) -> float:
    """Q(a, x) by a modified Lentz continued fraction; for x >= a + 1."""
    log_pref = _log_prefactor(a, x)
    if log_pref < _LOG_UNDERFLOW:
        return 0.0
    b = x + 1.0 - a
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_TERMS):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _TINY:
            d = _TINY
        c = b + an / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h * math.exp(log_pref)
    raise ConvergenceError(f"incomplete gamma fraction stalled at a={a}, x={x}")


def _check_x(x: float) -> None:
    if math.isnan(x) or x < 0.0:
        raise DomainError(f"incomplete gamma argument must be >= 0, got {x!r}")


def reg_lower_gamma(a: float, x: float) -> float:
    """Regularized lower incomplete gamma P(a, x)."""
    _check_shape(a)
    _check_x(x)
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return _lower_series(a, x)
    return 1.0 - _upper_fraction(a, x)


def reg_upper_gamma(a: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x)."""
    _check_shape(a)
    _check_x(x)
    if x == 0.0:
        return 1.0
    if math.isinf(x):
        return 0.0
    if x < a + 1.0:
        return 1.0 - _lower_series(a, x)
    return _upper_fraction(a, x)


def _normal_quantile(p: float) -> float:
    # Abramowitz & Stegun 26.2.23 rational fit, ~4.5e-4 absolute error;
    # only used to seed Newton, so that is plenty.
    if p > 0.5:
        return -_normal_quantile(1.0 - p)
    t = math.sqrt(-2.0 * math.log(p))
    num = 2.515517 + t * (0.802853 + t * 0.010328)
    den = 1.0 + t * (1.432788 + t * (0.189269 + t * 0.001308))
    return num / den - t


def _inverse_start(a: float, p: float) -> float:
    """Rough starting point for the quantile iteration."""
    if a > 1.0:
        # Wilson-Hilferty: cube of a shifted normal quantile
        z = _normal_quantile(p)
        d = 1.0 / (9.0 * a)
        y = 1.0 - d + z * math.sqrt(d)
        x = a * y * y * y
    else:
        # small-shape switch between the power and exponential tails
        t = 1.0 - a * (0.253 + 0.12 * a)
        if p < t:
            x = math.pow(p / t, 1.0 / a)
        else:
            x = 1.0 - math.log1p(-(p - t) / (1.0 - t))
    if not (x > 0.0 and math.isfinite(x)):
        # deep lower tail: invert the leading term P ~ x^a / Gamma(a+1)
        x = math.exp((math.log(p) + math.lgamma(a + 1.0)) / a)
    if not (x > 0.0 and math.isfinite(x)):
        x = max(a, 1.0)
    return x


def inv_reg_lower_gamma(a: float, p: float) -> float:
    """The x solving P(a, x) = p, for p in [0, 1)."""
    _check_shape(a)
    if math.isnan(p) or p < 0.0 or p >= 1.0:
        raise DomainError(f"quantile probability must lie in [0, 1), got {p!r}")
    if p == 0.0:
        return 0.0

    x = _inverse_start(a, p)
    lo = 0.0
    hi = x
    for _ in range(_MAX_INVERSE_ITER):
        if reg_lower_gamma(a, hi) >= p:
            break
        lo = hi
        hi *= 4.0
    else:
        raise ConvergenceError(f"could not bracket gamma quantile at a={a}, p={p}")

    if not lo < x <= hi:
        x = 0.5 * (lo + hi)
    log_norm = math.lgamma(a)
    for _ in range(_MAX_INVERSE_ITER):
        err = reg_lower_gamma(a, x) - p
        if err < 0.0:
            lo = x
        else:
            hi = x
        if abs(err) <= 1.0e-13 * p or (hi - lo) <= 4.0 * _EPS * x:
            return x
        # Newton step on P(a, x) - p; fall back to bisection when the
        # density underflows or the step leaves the bracket
        pdf = math.exp((a - 1.0) * math.log(x) - x - log_norm)
        if pdf > 0.0 and math.isfinite(pdf):
            x_new = x - err / pdf
            if not lo < x_new < hi:
                x_new = 0.5 * (lo + hi)
        else:
            x_new = 0.5 * (lo + hi)
        x = x_new
    raise ConvergenceError(f"gamma quantile did not converge at a={a}, p={p}")
