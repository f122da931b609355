"""Special functions backing the local tests: chi-square and normal quantiles
and the F distribution function.

Everything is computed from scratch with the classic series / continued
fraction split for the regularized incomplete gamma and beta functions, so no
statistical tables or external distribution libraries are involved. Root
finding is safeguarded Newton with a bisection fallback. Accuracy targets are
1e-10 absolute in probability space.
"""

import math

from .errors import ConvergenceError

_EPS = 1e-15
_FPMIN = 1e-300
_MAX_SERIES_ITER = 500
_MAX_NEWTON_ITER = 200


def gamma_p(a: float, x: float) -> float:
    """Regularized lower incomplete gamma function P(a, x).

    Series expansion for x < a + 1, continued fraction (modified Lentz)
    for the complementary function otherwise.
    """
    if a <= 0.0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    if x < 0.0:
        raise ValueError(f"x must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    if x < a + 1.0:
        return _gamma_p_series(a, x)
    return 1.0 - _gamma_q_contfrac(a, x)


def _gamma_p_series(a, x):
    ap = a
    total = 1.0 / a
    term = total
    for _ in range(_MAX_SERIES_ITER):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * _EPS:
            return total * math.exp(-x + a * math.log(x) - math.lgamma(a))
    raise ConvergenceError(f"incomplete gamma series failed for a={a}, x={x}")


def _gamma_q_contfrac(a, x):
    b = x + 1.0 - a
    c = 1.0 / _FPMIN
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_SERIES_ITER):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = b + an / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h
    raise ConvergenceError(f"incomplete gamma fraction failed for a={a}, x={x}")


def beta_inc(a: float, b: float, x: float) -> float:
    """Regularized incomplete beta function I_x(a, b)."""
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"shape parameters must be positive, got a={a}, b={b}")
    if x < 0.0 or x > 1.0:
        raise ValueError(f"x must be in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    front = math.exp(
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    # Continued fraction converges fast for x below the pivot; use the
    # symmetry I_x(a,b) = 1 - I_{1-x}(b,a) above it.
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_contfrac(a, b, x) / a
    return 1.0 - front * _beta_contfrac(b, a, 1.0 - x) / b


def _beta_contfrac(a, b, x):
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _MAX_SERIES_ITER):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            return h
    raise ConvergenceError(f"incomplete beta fraction failed for a={a}, b={b}, x={x}")


def std_normal_cdf(z: float) -> float:
    """Standard normal distribution function via erfc."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def std_normal_quantile(prob: float) -> float:
    """Inverse of the standard normal distribution function.

    Newton iteration on the erfc-based CDF from a log-tail starting point,
    safeguarded by a hard bracket. |Phi(z) - prob| <= 1e-10 or better.
    """
    if not 0.0 < prob < 1.0:
        raise ValueError(f"probability must be in (0, 1), got {prob}")
    if prob == 0.5:
        return 0.0
    # Crude but monotone start: sqrt(-2 log tail), signed.
    tail = min(prob, 1.0 - prob)
    z = math.sqrt(-2.0 * math.log(tail))
    if prob < 0.5:
        z = -z
    lo, hi = -40.0, 40.0
    for _ in range(_MAX_NEWTON_ITER):
        err = std_normal_cdf(z) - prob
        if err > 0.0:
            hi = min(hi, z)
        elif err < 0.0:
            lo = max(lo, z)
        pdf = math.exp(-0.5 * z * z) / math.sqrt(2.0 * math.pi)
        if pdf > 0.0:
            step = err / pdf
            z_new = z - step
        else:
            z_new = 0.5 * (lo + hi)
        if not lo <= z_new <= hi:
            z_new = 0.5 * (lo + hi)
        if abs(z_new - z) <= 1e-14 * max(1.0, abs(z)):
            z = z_new
            break
        z = z_new
    if abs(std_normal_cdf(z) - prob) > 1e-10:
        raise ConvergenceError(f"normal quantile failed to converge for prob={prob}")
    return z


def chi2_cdf(x: float, df: int) -> float:
    """Chi-square distribution function P(chi2_df <= x)."""
    _check_df(df)
    if x < 0.0:
        raise ValueError(f"x must be nonnegative, got {x}")
    return gamma_p(df / 2.0, x / 2.0)


def chi2_quantile(prob: float, df: int) -> float:
    """Inverse chi-square distribution function.

    Wilson-Hilferty starting point, then safeguarded Newton on the
    regularized incomplete gamma. Converges to |P(x) - prob| <= 1e-10;
    raises ConvergenceError after 200 iterations otherwise.
    """
    if not 0.0 < prob < 1.0:
        raise ValueError(f"probability must be in (0, 1), got {prob}")
    _check_df(df)
    a = df / 2.0
    z = std_normal_quantile(prob)
    # Wilson-Hilferty cube approximation; clamp to keep the start positive.
    t = 1.0 - 2.0 / (9.0 * df) + z * math.sqrt(2.0 / (9.0 * df))
    x = df * t * t * t if t > 0.0 else df * math.exp(z * math.sqrt(2.0 / df))
    x = max(x, 1e-100)
    lo, hi = 0.0, math.inf
    for _ in range(_MAX_NEWTON_ITER):
        err = gamma_p(a, x / 2.0) - prob
        if err > 0.0:
            hi = min(hi, x)
        elif err < 0.0:
            lo = max(lo, x)
        else:
            return x
        log_pdf = (a - 1.0) * math.log(x / 2.0) - x / 2.0 - math.lgamma(a) - math.log(2.0)
        pdf = math.exp(log_pdf)
        if pdf > 0.0:
            x_new = x - err / pdf
        else:
            x_new = 0.5 * (lo + hi) if math.isfinite(hi) else 2.0 * x
        if not lo < x_new < hi:
            x_new = 0.5 * (lo + hi) if math.isfinite(hi) else 2.0 * max(x, lo)
        if abs(x_new - x) <= 1e-13 * max(1.0, abs(x)):
            x = x_new
            break
        x = x_new
    if abs(gamma_p(a, x / 2.0) - prob) > 1e-10:
        raise ConvergenceError(f"chi-square quantile failed for prob={prob}, df={df}")
    return x


def f_cdf(x: float, d1: int, d2: int) -> float:
    """F distribution function P(F_{d1,d2} <= x) via the incomplete beta."""
    _check_df(d1)
    _check_df(d2)
    if x < 0.0:
        raise ValueError(f"x must be nonnegative, got {x}")
    if x == 0.0:
        return 0.0
    t = d1 * x / (d1 * x + d2)
    return beta_inc(d1 / 2.0, d2 / 2.0, t)


def _check_df(df):
    if not isinstance(df, (int,)) or isinstance(df, bool) or df < 1:
        raise ValueError(f"degrees of freedom must be a positive integer, got {df!r}")
