"""Hot numeric kernels, each in a loop form (numba-compiled) and a numpy form.

The module-level names (``ndtr``, ``ndtri``, ``pair_sums``, ``team_totals``,
``pair_residuals``) are bound to the numba loops unless
``HOMEFIELD_DISABLE_NUMBA`` is set or numba is missing.  Both forms run the
same arithmetic with the same fixed term counts; they can still differ in the
last bit because ``math.exp`` and ``np.exp`` are different libm routines.

Validation lives in the callers.  Kernels assume well-formed float64 input.
"""

import math

import numpy as np

from ._backend import USE_NUMBA, njit

SQRT2 = math.sqrt(2.0)
SQRT2PI = math.sqrt(2.0 * math.pi)
TWO_OVER_SQRTPI = 2.0 / math.sqrt(math.pi)
INV_SQRTPI = 1.0 / math.sqrt(math.pi)

# erfc switches from the erf power series to the continued fraction here.
ERFC_SPLIT = 2.0
SERIES_TERMS = 40
CF_TERMS = 60

# Rational approximation to the normal quantile (P. J. Acklam), refined by one
# Halley step against ``ndtr``.
_A0, _A1, _A2, _A3, _A4, _A5 = (
    -3.969683028665376e01,
    2.209460984245205e02,
    -2.759285104469687e02,
    1.383577518672690e02,
    -3.066479806614716e01,
    2.506628277459239e00,
)
_B0, _B1, _B2, _B3, _B4 = (
    -5.447609879822406e01,
    1.615858368580409e02,
    -1.556989798598866e02,
    6.680131188771972e01,
    -1.328068155288572e01,
)
_C0, _C1, _C2, _C3, _C4, _C5 = (
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e00,
    -2.549732539343734e00,
    4.374664141464968e00,
    2.938163982698783e00,
)
_D0, _D1, _D2, _D3 = (
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e00,
    3.754408661907416e00,
)
P_LOW = 0.02425


# ---------------------------------------------------------------------------
# loop forms
# ---------------------------------------------------------------------------


@njit
def _erfc_scalar(z):
    # z >= 0
    if z < ERFC_SPLIT:
        z2 = 2.0 * z * z
        term = z
        total = z
        for k in range(1, SERIES_TERMS + 1):
            term = term * z2 / (2.0 * k + 1.0)
            total += term
        return 1.0 - TWO_OVER_SQRTPI * math.exp(-z * z) * total
    t = z
    for k in range(CF_TERMS, 0, -1):
        t = z + (0.5 * k) / t
    return INV_SQRTPI * math.exp(-z * z) / t


@njit
def _ndtr_scalar(x):
    if x != x:
        return x
    if x < 0.0:
        return 0.5 * _erfc_scalar(-x / SQRT2)
    return 1.0 - 0.5 * _erfc_scalar(x / SQRT2)


@njit
def _ndtri_lower(q):
    # 0 < q <= 0.5, returns x <= 0
    if q < P_LOW:
        r = math.sqrt(-2.0 * math.log(q))
        x = (((((_C0 * r + _C1) * r + _C2) * r + _C3) * r + _C4) * r + _C5) / (
            (((_D0 * r + _D1) * r + _D2) * r + _D3) * r + 1.0
        )
    else:
        c = q - 0.5
        r = c * c
        x = (
            (((((_A0 * r + _A1) * r + _A2) * r + _A3) * r + _A4) * r + _A5)
            * c
            / (((((_B0 * r + _B1) * r + _B2) * r + _B3) * r + _B4) * r + 1.0)
        )
    e = 0.5 * _erfc_scalar(-x / SQRT2) - q
    u = e * SQRT2PI * math.exp(0.5 * x * x)
    return x - u / (1.0 + 0.5 * x * u)


@njit
def _ndtri_scalar(p):
    if p != p:
        return p
    if p <= 0.0:
        return -np.inf
    if p >= 1.0:
        return np.inf
    if p > 0.5:
        return -_ndtri_lower(1.0 - p)
    return _ndtri_lower(p)


@njit
def _ndtr_loop(x):
    out = np.empty(x.shape[0])
    for k in range(x.shape[0]):
        out[k] = _ndtr_scalar(x[k])
    return out


@njit
def _ndtri_loop(p):
    out = np.empty(p.shape[0])
    for k in range(p.shape[0]):
        out[k] = _ndtri_scalar(p[k])
    return out


@njit
def _pair_sums_loop(y):
    n = y.shape[0]
    m = n * (n - 1) // 2
    pi = np.empty(m, np.int64)
    pj = np.empty(m, np.int64)
    s = np.empty(m)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            pi[k] = i
            pj[k] = j
            s[k] = y[i, j] + y[j, i]
            k += 1
    return pi, pj, s


@njit
def _team_totals_loop(n, pi, pj, s):
    out = np.zeros(n)
    for k in range(s.shape[0]):
        out[pi[k]] += s[k]
        out[pj[k]] += s[k]
    return out


@njit
def _pair_residuals_loop(beta, pi, pj, s):
    r = np.empty(s.shape[0])
    for k in range(s.shape[0]):
        r[k] = beta[pi[k]] + beta[pj[k]] - s[k]
    return r


# ---------------------------------------------------------------------------
# numpy forms
# ---------------------------------------------------------------------------


def _erfc_numpy(z):
    z = np.asarray(z, dtype=np.float64)
    out = np.empty_like(z)
    lo = z < ERFC_SPLIT
    if lo.any():
        zl = z[lo]
        z2 = 2.0 * zl * zl
        term = zl.copy()
        total = zl.copy()
        for k in range(1, SERIES_TERMS + 1):
            term = term * z2 / (2.0 * k + 1.0)
            total += term
        out[lo] = 1.0 - TWO_OVER_SQRTPI * np.exp(-zl * zl) * total
    hi = ~lo
    if hi.any():
        zh = z[hi]
        t = zh.copy()
        for k in range(CF_TERMS, 0, -1):
            t = zh + (0.5 * k) / t
        out[hi] = INV_SQRTPI * np.exp(-zh * zh) / t
    return out


def _ndtr_numpy(x):
    x = np.asarray(x, dtype=np.float64)
    neg = x < 0.0
    tail = 0.5 * _erfc_numpy(np.abs(x) / SQRT2)
    return np.where(neg, tail, 1.0 - tail)


def _ndtri_numpy(p):
    p = np.asarray(p, dtype=np.float64)
    flip = p > 0.5
    q = np.where(flip, 1.0 - p, p)
    inside = q > 0.0
    qs = np.where(inside, q, 0.5)
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.sqrt(-2.0 * np.log(qs))
        tail = (((((_C0 * r + _C1) * r + _C2) * r + _C3) * r + _C4) * r + _C5) / (
            (((_D0 * r + _D1) * r + _D2) * r + _D3) * r + 1.0
        )
        c = qs - 0.5
        r2 = c * c
        central = (
            (((((_A0 * r2 + _A1) * r2 + _A2) * r2 + _A3) * r2 + _A4) * r2 + _A5)
            * c
            / (((((_B0 * r2 + _B1) * r2 + _B2) * r2 + _B3) * r2 + _B4) * r2 + 1.0)
        )
    x = np.where(qs < P_LOW, tail, central)
    e = 0.5 * _erfc_numpy(-x / SQRT2) - qs
    u = e * SQRT2PI * np.exp(0.5 * x * x)
    x = x - u / (1.0 + 0.5 * x * u)
    x = np.where(inside, x, -np.inf)
    x = np.where(flip, -x, x)
    return np.where(np.isnan(p), np.nan, x)


def _pair_sums_numpy(y):
    y = np.asarray(y, dtype=np.float64)
    pi, pj = np.triu_indices(y.shape[0], k=1)
    return pi.astype(np.int64), pj.astype(np.int64), y[pi, pj] + y[pj, pi]


def _team_totals_numpy(n, pi, pj, s):
    return np.bincount(pi, weights=s, minlength=n) + np.bincount(pj, weights=s, minlength=n)


def _pair_residuals_numpy(beta, pi, pj, s):
    return beta[pi] + beta[pj] - s


numba_impl = {
    "ndtr": _ndtr_loop,
    "ndtri": _ndtri_loop,
    "pair_sums": _pair_sums_loop,
    "team_totals": _team_totals_loop,
    "pair_residuals": _pair_residuals_loop,
}
numpy_impl = {
    "ndtr": _ndtr_numpy,
    "ndtri": _ndtri_numpy,
    "pair_sums": _pair_sums_numpy,
    "team_totals": _team_totals_numpy,
    "pair_residuals": _pair_residuals_numpy,
}

_active = numba_impl if USE_NUMBA else numpy_impl

ndtr = _active["ndtr"]
ndtri = _active["ndtri"]
pair_sums = _active["pair_sums"]
team_totals = _active["team_totals"]
pair_residuals = _active["pair_residuals"]

ndtr_scalar = _ndtr_scalar
ndtri_scalar = _ndtri_scalar
