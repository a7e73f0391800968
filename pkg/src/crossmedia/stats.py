"""Statistical kernel: Pearson correlation, least squares, t/F tests, and the
distribution CDFs they need.  Everything here is a pure function of its inputs."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TestResult",
    "OLSFit",
    "pearson",
    "ols_fit",
    "welch_t_test",
    "f_test_nested",
    "t_cdf",
    "f_cdf",
    "regularized_incomplete_beta",
]

# Continued-fraction evaluation of the incomplete beta function.
_BETA_RTOL = 1e-12
_BETA_MAX_ITER = 300
_FPMIN = 1e-300

# Slack allowed on the nested-SSR precondition before it is treated as a
# genuine violation rather than floating-point noise.
_SSR_TOL = 1e-9


@dataclass(frozen=True)
class TestResult:
    """A test statistic with its two-sided (t) or upper-tail (F) p-value."""

    statistic: float
    p_value: float
    df: float | tuple[float, float]


@dataclass(frozen=True)
class OLSFit:
    coefficients: np.ndarray
    ssr: float


def pearson(x, y) -> float | None:
    """Sample Pearson correlation, or None when either input is constant."""
    xv = np.asarray(x, dtype=float)
    yv = np.asarray(y, dtype=float)
    if xv.ndim != 1 or yv.ndim != 1:
        raise ValueError("pearson expects one-dimensional sequences")
    if xv.shape[0] != yv.shape[0]:
        raise ValueError(f"length mismatch: {xv.shape[0]} vs {yv.shape[0]}")
    if xv.shape[0] < 2:
        raise ValueError("pearson needs at least 2 observations")
    if np.ptp(xv) == 0.0 or np.ptp(yv) == 0.0:
        return None
    dx = xv - xv.mean()
    dy = yv - yv.mean()
    sxx = float(np.dot(dx, dx))
    syy = float(np.dot(dy, dy))
    if sxx == 0.0 or syy == 0.0:
        return None
    r = float(np.dot(dx, dy)) / math.sqrt(sxx * syy)
    return min(1.0, max(-1.0, r))


def ols_fit(design, y) -> OLSFit:
    """Least squares via QR; raises on a rank-deficient design, naming the
    first offending column."""
    x = np.asarray(design, dtype=float)
    yv = np.asarray(y, dtype=float)
    if x.ndim != 2:
        raise ValueError("design must be a 2-D matrix")
    n, k = x.shape
    if yv.shape != (n,):
        raise ValueError(f"response length {yv.shape} does not match {n} rows")
    if n <= k:
        raise ValueError(f"need more observations than regressors (n={n}, k={k})")
    q, r = np.linalg.qr(x)
    diag = np.abs(np.diag(r))
    tol = np.finfo(float).eps * max(n, k) * (float(diag.max()) if diag.size else 0.0)
    deficient = np.nonzero(diag <= tol)[0]
    if deficient.size:
        raise ValueError(
            f"design is rank deficient: column {int(deficient[0])} is collinear "
            "with earlier columns"
        )
    coef = np.linalg.solve(r, q.T @ yv)
    resid = yv - x @ coef
    return OLSFit(coefficients=coef, ssr=float(np.dot(resid, resid)))


def welch_t_test(a, b, pooled: bool = False) -> TestResult:
    """Two-sample t-test: Welch by default, pooled-variance when asked.

    Two-sided p-value via the Student-t CDF; df is Welch-Satterthwaite
    unless `pooled`.
    """
    xa = np.asarray(a, dtype=float)
    xb = np.asarray(b, dtype=float)
    na, nb = xa.shape[0], xb.shape[0]
    if na < 2 or nb < 2:
        raise ValueError("each sample needs at least 2 observations")
    va = float(xa.var(ddof=1))
    vb = float(xb.var(ddof=1))
    if va == 0.0 and vb == 0.0:
        raise ValueError("degenerate samples: both inputs are constant")
    diff = float(xa.mean() - xb.mean())
    if pooled:
        df: float = na + nb - 2
        sp2 = ((na - 1) * va + (nb - 1) * vb) / df
        se = math.sqrt(sp2 * (1.0 / na + 1.0 / nb))
    else:
        ra = va / na
        rb = vb / nb
        se = math.sqrt(ra + rb)
        df = (ra + rb) ** 2 / (ra**2 / (na - 1) + rb**2 / (nb - 1))
    t = diff / se
    p = 2.0 * (1.0 - t_cdf(abs(t), df))
    return TestResult(statistic=t, p_value=min(1.0, max(0.0, p)), df=df)


def f_test_nested(
    ssr_restricted: float, ssr_unrestricted: float, q: int, df_denom: int
) -> TestResult:
    """Nested-model F-test from restricted and unrestricted residual sums of
    squares: F = ((ssr_r - ssr_u)/q) / (ssr_u/df_denom)."""
    if q < 1 or df_denom < 1:
        raise ValueError("q and df_denom must be positive integers")
    if not (math.isfinite(ssr_restricted) and math.isfinite(ssr_unrestricted)):
        raise ValueError("SSR values must be finite")
    if ssr_unrestricted < 0.0 or ssr_restricted < 0.0:
        raise ValueError("SSR values must be non-negative")
    slack = _SSR_TOL * max(1.0, ssr_unrestricted)
    if ssr_restricted < ssr_unrestricted - slack:
        raise ValueError(
            "nested-model precondition violated: restricted SSR "
            f"{ssr_restricted!r} < unrestricted SSR {ssr_unrestricted!r}"
        )
    if ssr_unrestricted == 0.0:
        return TestResult(statistic=math.inf, p_value=0.0, df=(float(q), float(df_denom)))
    num = max(ssr_restricted - ssr_unrestricted, 0.0) / q
    f = num / (ssr_unrestricted / df_denom)
    p = 1.0 - f_cdf(f, q, df_denom)
    return TestResult(statistic=f, p_value=p, df=(float(q), float(df_denom)))


def t_cdf(x: float, df: float) -> float:
    """Student-t CDF via the regularized incomplete beta function."""
    if not (math.isfinite(x) and math.isfinite(df)):
        raise ValueError("t_cdf requires finite arguments")
    if df <= 0:
        raise ValueError("df must be positive")
    if x == 0.0:
        return 0.5
    tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, df / (df + x * x))
    return 1.0 - tail if x > 0 else tail


def f_cdf(x: float, d1: float, d2: float) -> float:
    """F-distribution CDF via the regularized incomplete beta function."""
    if not (math.isfinite(x) and math.isfinite(d1) and math.isfinite(d2)):
        raise ValueError("f_cdf requires finite arguments")
    if d1 <= 0 or d2 <= 0:
        raise ValueError("degrees of freedom must be positive")
    if x <= 0.0:
        return 0.0
    return regularized_incomplete_beta(0.5 * d1, 0.5 * d2, d1 * x / (d1 * x + d2))


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) by the standard continued fraction, symmetrized so the
    fraction always converges fast."""
    if a <= 0 or b <= 0:
        raise ValueError("shape parameters must be positive")
    if not math.isfinite(x):
        raise ValueError("x must be finite")
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    ln_front = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, x) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - x) / b


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    # Modified Lentz evaluation; terms come in (odd, even) pairs.
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for m in range(1, _BETA_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
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
        if abs(delta - 1.0) < _BETA_RTOL:
            return h
    raise RuntimeError(
        f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})"
    )
