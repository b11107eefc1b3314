"""Scalar special functions used by every kernel module.

Exponentially scaled modified Bessel functions are the only exposed I/K
entry points: kernel arguments reach ``sqrt(x)/mu ~ 1e5`` in the strongly
coupled regime, so unscaled values overflow doubles and all exponents are
carried separately (see :mod:`hek.scaled`).

Standard functions (scaled I/K seeds, J, log-gamma) are backed by
``scipy.special``; the series that scipy does not cover at the required
argument ranges (Wright's generalized Bessel function at negative argument,
the confluent hypergeometric function at complex first parameter) are
implemented here with explicit truncation control and, where double
precision provably loses the cancellation battle, an arbitrary-precision
fallback.
"""

from __future__ import annotations

import math
from typing import Tuple

import mpmath
import numpy as np
import scipy.special as sc

from .errors import DomainError, TruncationError

__all__ = [
    "ln_gamma",
    "bessel_i_scaled",
    "bessel_i_scaled_all",
    "bessel_k_scaled",
    "ln_bessel_k_scaled_all",
    "bessel_j",
    "bessel_j_int",
    "wright_bessel",
    "wright_bessel_with_tail",
    "laguerre",
    "kummer_m",
    "kummer_m_regularized",
]

_SERIES_EPS = 1e-15
_SERIES_MIN_TERMS = 10


def ln_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0.

    Relative error is at the level of ``math.lgamma`` (< 1e-15 ulp-wise),
    comfortably inside the 1e-13 contract.
    """
    if x <= 0.0:
        raise DomainError(f"ln_gamma requires x > 0, got {x}")
    return math.lgamma(x)


def _signed_ln_gamma(x: float) -> Tuple[float, float]:
    """(sign, ln |Gamma(x)|) for real x; sign 0 at nonpositive-integer poles."""
    if x > 0.0:
        return 1.0, math.lgamma(x)
    if x == math.floor(x):
        return 0.0, math.inf
    return float(sc.gammasgn(x)), math.lgamma(x)


# ---------------------------------------------------------------------------
# Modified Bessel functions, exponentially scaled
# ---------------------------------------------------------------------------


def bessel_i_scaled(n: int, x: float) -> float:
    """``exp(-x) * I_n(x)`` for integer order n >= 0 and x >= 0.

    Values are bounded by 1 for all (n, x); orders far above the argument
    underflow gradually to 0, which downstream sums absorb harmlessly
    because their coefficients decay faster.
    """
    if n < 0 or n != int(n):
        raise DomainError(f"bessel_i_scaled requires integer n >= 0, got {n}")
    if x < 0.0:
        raise DomainError(f"bessel_i_scaled requires x >= 0, got {x}")
    return float(sc.ive(int(n), x))


def bessel_i_scaled_all(n_max: int, x: float) -> np.ndarray:
    """Array of ``exp(-x) * I_k(x)`` for k = 0..n_max."""
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    if x < 0.0:
        raise DomainError(f"bessel_i_scaled_all requires x >= 0, got {x}")
    return sc.ive(np.arange(n_max + 1), x)


def bessel_k_scaled(n: int, x: float) -> float:
    """``exp(x) * K_n(x)`` for integer order n >= 0 and x > 0.

    K_0 and K_1 come from scipy's kve; higher orders use the upward
    recurrence K_{m+1} = K_{m-1} + (2m/x) K_m, which is stable because K
    is the dominant solution in increasing order.  Overflows to ``inf``
    once the result exceeds double range; use
    :func:`ln_bessel_k_scaled_all` in that regime.
    """
    if n < 0 or n != int(n):
        raise DomainError(f"bessel_k_scaled requires integer n >= 0, got {n}")
    if x <= 0.0:
        raise DomainError(f"bessel_k_scaled requires x > 0 (K diverges at 0), got {x}")
    n = int(n)
    if n <= 1:
        return float(sc.kve(n, x))
    km1 = float(sc.kve(0, x))
    k = float(sc.kve(1, x))
    for m in range(1, n):
        km1, k = k, km1 + (2.0 * m / x) * k
        if math.isinf(k):
            return math.inf
    return k


def ln_bessel_k_scaled_all(order0: int, count: int, x: float) -> np.ndarray:
    """``log(exp(x) * K_{order0+j}(x))`` for j = 0..count-1.

    Upward recurrence with periodic rescaling, so arbitrarily large orders
    are fine even when the scaled values exceed double range.
    """
    if order0 < 0 or count < 1:
        raise DomainError("order0 must be >= 0 and count >= 1")
    if x <= 0.0:
        raise DomainError(f"ln_bessel_k_scaled_all requires x > 0, got {x}")
    out = np.empty(count)
    a = float(sc.kve(order0, x))
    out[0] = math.log(a)
    if count == 1:
        return out
    b = float(sc.kve(order0 + 1, x))
    out[1] = math.log(b)
    offset = 0.0
    for j in range(2, count):
        m = order0 + j - 1
        a, b = b, a + (2.0 * m / x) * b
        if b > 1e250:
            scale = 1.0 / b
            a *= scale
            offset -= math.log(scale)
            b = 1.0
        out[j] = math.log(b) + offset
    return out


# ---------------------------------------------------------------------------
# Bessel J
# ---------------------------------------------------------------------------


def bessel_j(nu: float, x: float) -> float:
    """Bessel function of the first kind, order nu > -1, x >= 0."""
    if nu <= -1.0:
        raise DomainError(f"bessel_j requires nu > -1, got {nu}")
    if x < 0.0:
        raise DomainError(f"bessel_j requires x >= 0, got {x}")
    if x == 0.0:
        return 1.0 if nu == 0.0 else 0.0
    return float(sc.jv(nu, x))


def bessel_j_int(m: int, x: float) -> float:
    """J_m for any integer order, using J_{-m} = (-1)^m J_m."""
    if m >= 0:
        return bessel_j(float(m), x)
    return (-1.0) ** (-m) * bessel_j(float(-m), x)


# ---------------------------------------------------------------------------
# Wright's generalized Bessel function
# ---------------------------------------------------------------------------


def wright_bessel_with_tail(a: float, b: float, x: float) -> Tuple[float, float]:
    """Wright series ``sum_j (-x)^j / (j! Gamma(a + b j))`` with a tail bound.

    Terms whose Gamma argument lands on a nonpositive integer contribute 0
    (reciprocal-gamma convention).  Returns ``(value, tail_bound)`` where
    the bound dominates the discarded remainder.

    The alternating series loses ``exp(max_term_log - result_log)`` digits
    to cancellation; once that exceeds the double budget the summation is
    redone in mpmath at a working precision sized to the loss.
    """
    if b <= 0.0:
        raise DomainError(f"wright_bessel requires b > 0, got {b}")
    if x < 0.0:
        raise DomainError(f"wright_bessel requires x >= 0, got {x}")
    if x == 0.0:
        return float(sc.rgamma(a)), 0.0

    ln_x = math.log(x)
    total = 0.0
    comp = 0.0  # Kahan carry
    max_log = -math.inf
    last_mag = math.inf
    j = 0
    tail = math.inf
    while j < 10_000:
        gsign, glog = _signed_ln_gamma(a + b * j)
        if gsign == 0.0:
            mag = 0.0
            term = 0.0
        else:
            log_mag = j * ln_x - math.lgamma(j + 1) - glog
            max_log = max(max_log, log_mag)
            mag = math.exp(log_mag) if log_mag > -745.0 else 0.0
            term = gsign * mag * (-1.0 if j % 2 else 1.0)
        y = term - comp
        t = total + y
        comp = (t - total) - y
        total = t
        if j >= _SERIES_MIN_TERMS and mag < _SERIES_EPS * abs(total) and mag <= last_mag:
            ratio = x / ((j + 1) * max(b, 1.0))
            tail = mag * (ratio / (1.0 - ratio) if ratio < 0.5 else 2.0)
            break
        last_mag = mag if mag > 0.0 else last_mag
        j += 1
    else:
        raise TruncationError("wright_bessel series did not converge in 10000 terms")

    loss = max_log - (math.log(abs(total)) if total != 0.0 else -math.inf)
    if loss > 16.0:  # fewer than ~9 reliable digits left in double
        dps = 25 + int(loss / math.log(10.0))
        with mpmath.workdps(dps):
            s = mpmath.mpf(0)
            term = mpmath.mpf(1)
            mx = mpmath.mpf(x)
            k = 0
            while k < 100_000:
                t = term * mpmath.rgamma(a + b * k)
                s += t
                if k >= _SERIES_MIN_TERMS and abs(t) < mpmath.mpf(10) ** (-dps) * abs(s):
                    break
                term *= -mx / (k + 1)
                k += 1
            total = float(s)
        tail = abs(total) * 10.0 ** (-(dps - 22))
    return total, tail


def wright_bessel(a: float, b: float, x: float) -> float:
    """Wright's generalized Bessel function (see :func:`wright_bessel_with_tail`)."""
    return wright_bessel_with_tail(a, b, x)[0]


# ---------------------------------------------------------------------------
# Generalized Laguerre polynomials
# ---------------------------------------------------------------------------


def laguerre(n: int, nu: float, x):
    """Generalized Laguerre polynomial L_n^(nu)(x) by three-term recurrence.

    Exact for polynomial degree; accepts scalar or ndarray x.
    """
    if n < 0 or n != int(n):
        raise DomainError(f"laguerre requires integer n >= 0, got {n}")
    n = int(n)
    x = np.asarray(x, dtype=float)
    l_prev = np.ones_like(x)
    if n == 0:
        return float(l_prev) if l_prev.ndim == 0 else l_prev
    l_cur = nu + 1.0 - x
    for m in range(1, n):
        l_prev, l_cur = l_cur, (
            (2.0 * m + nu + 1.0 - x) * l_cur - (m + nu) * l_prev
        ) / (m + 1.0)
    return float(l_cur) if np.ndim(l_cur) == 0 else l_cur


# ---------------------------------------------------------------------------
# Confluent hypergeometric function (Kummer M)
# ---------------------------------------------------------------------------


def _log_of_complex(z: complex) -> complex:
    if z == 0:
        return complex(-math.inf, 0.0)
    return complex(math.log(abs(z)), math.atan2(z.imag, z.real))


def _kummer_reg_log_series(a: complex, b: float, x: float) -> complex:
    """log of M(a,b,x)/Gamma(b) by direct series, x in [-30, 30]."""
    total = 0.0 + 0.0j
    poch = 1.0 + 0.0j  # (a)_k
    xpow = 1.0  # x^k / k!
    max_mag = 0.0
    for k in range(0, 10_000):
        rg = float(sc.rgamma(b + k))
        term = poch * xpow * rg
        total += term
        mag = abs(term)
        max_mag = max(max_mag, mag)
        if k >= _SERIES_MIN_TERMS and mag < _SERIES_EPS * max(abs(total), 1e-300):
            nxt = abs(poch * (a + k)) * abs(xpow * x / (k + 1)) * abs(
                sc.rgamma(b + k + 1)
            )
            if nxt < _SERIES_EPS * max(abs(total), 1e-300):
                return _log_of_complex(total)
        poch *= a + k
        xpow *= x / (k + 1)
    raise TruncationError("kummer series did not converge in 10000 terms")


def _kummer_reg_log_big_positive(a: complex, b: float, x: float) -> complex:
    """log of M(a,b,x)/Gamma(b) for large positive x, in log space."""
    log_terms = []
    log_t = 0.0 + 0.0j
    ln_x = math.log(x)
    k = 0
    best = -math.inf
    while k < 200_000:
        gsign, glog = _signed_ln_gamma(b + k)
        if gsign != 0.0:
            lt = log_t - glog + (0.0 if gsign > 0 else math.pi * 1j)
            log_terms.append(lt)
            best = max(best, lt.real)
            if k > x and lt.real < best - 40.0:
                break
        log_t = log_t + _log_of_complex(a + k) + ln_x - math.log(k + 1)
        k += 1
    arr = np.array(log_terms, dtype=complex)
    m = float(arr.real.max())
    s = complex(np.exp(arr - m).sum())
    return m + _log_of_complex(s)


def _kummer_reg_log_asymptotic(a: complex, b: float, x: float) -> complex:
    """log of M(a,b,x)/Gamma(b) ~ (-x)^(-a)/Gamma(b-a) as x -> -inf.

    Correction terms (a)_k (a-b+1)_k / (k! (-x)^k) are added until they
    stop decreasing.
    """
    z = -x
    s = 1.0 + 0.0j
    term = 1.0 + 0.0j
    last = math.inf
    for k in range(0, 40):
        term = term * (a + k) * (a - b + 1 + k) / ((k + 1) * z)
        if abs(term) >= last:
            break
        s += term
        last = abs(term)
        if last < 1e-18 * abs(s):
            break
    return -sc.loggamma(complex(b) - a) - a * math.log(z) + _log_of_complex(s)


def _kummer_reg_log(a: complex, b: float, x: float) -> complex:
    """log of the regularized Kummer function M(a,b,x)/Gamma(b).

    Entire in b (nonpositive-integer b is fine).  Branches:

    * ``x >= -30`` small: direct series;
    * large positive x: log-space series (terms peak near exp(x));
    * ``-3000 < x < -30``: Kummer transform ``exp(x) M(b-a, b, -x)``,
      which trades the catastrophically alternating series for a
      same-sign one;
    * ``x <= -3000``: saturated asymptotic expansion.
    """
    if -30.0 <= x <= 30.0:
        return _kummer_reg_log_series(a, b, x)
    if x > 30.0:
        return _kummer_reg_log_big_positive(a, b, x)
    if x > -3000.0:
        return x + _kummer_reg_log(complex(b) - a, b, -x)
    return _kummer_reg_log_asymptotic(a, b, x)


def kummer_m_regularized(a: complex, b: float, x: float) -> complex:
    """Regularized confluent hypergeometric function M(a,b,x)/Gamma(b)."""
    lg = _kummer_reg_log(complex(a), b, x)
    if lg.real < -745.0:
        return 0.0 + 0.0j
    return complex(np.exp(lg))


def kummer_m(a: float, b: float, x: float) -> float:
    """Kummer's confluent hypergeometric function M(a; b; x) for real input."""
    if b <= 0.0 and b == math.floor(b):
        raise DomainError(f"kummer_m pole: b must not be a nonpositive integer, got {b}")
    lg = _kummer_reg_log(complex(a), b, x) + math.lgamma(b)
    val = np.exp(lg)
    return float(val.real)
