"""Exact finite-size quantities for the coupled two-matrix ensemble.

The squared singular values of the product of two coupled Gaussian matrices
form a determinantal process whose kernel is a finite sum of products of a
polynomial-in-sqrt(x) combination of modified Bessel I functions and a
matching combination of K functions.  Every evaluation here runs through
log-scaled arithmetic: each term's magnitude is assembled in log space and
rows are combined with exact compensated summation, so the kernel stays
computable deep into the strongly coupled regime where the raw Bessel
factors span thousands of orders of magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np
import scipy.special as sc

from .errors import DomainError, PoleError
from .scaled import ScaledReal, signed_logsumexp
from .specfun import bessel_i_scaled_all, laguerre, ln_bessel_k_scaled_all

__all__ = [
    "CoupledParams",
    "CDCoeffs",
    "cd_coeffs",
    "biorth_p",
    "biorth_q",
    "biorth_p_log_all",
    "biorth_q_log_all",
    "kernel",
    "kernel_scaled",
    "kernel_cd",
    "kernel_diag",
    "joint_density",
    "independent_joint_density",
    "laguerre_kernel",
    "contour_kernel_poly",
]


@dataclass(frozen=True)
class CoupledParams:
    """Coupled-ensemble configuration: matrix size N, index nu, coupling mu."""

    n_size: int
    nu: int
    mu: float

    def __post_init__(self):
        if self.n_size < 1:
            raise DomainError(f"n_size must be >= 1, got {self.n_size}")
        if self.nu < 0:
            raise DomainError(f"nu must be >= 0, got {self.nu}")
        if not 0.0 < self.mu < 1.0:
            raise DomainError(f"mu must lie strictly in (0, 1), got {self.mu}")


@dataclass(frozen=True)
class CDCoeffs:
    """The four index-shift coefficients of the closed kernel formula."""

    a_m2: float
    a_m1: float
    a_p1: float
    a_p2: float


def cd_coeffs(params: CoupledParams, n: int) -> CDCoeffs:
    """Coefficients a_{-2,n}, a_{-1,n}, a_{1,n}, a_{2,n} at index n."""
    mu, nu = params.mu, float(params.nu)
    m2 = (1.0 - mu) ** 2
    a_p2 = m2 / (4.0 * (n + 2.0) * (n + 1.0))
    a_p1 = mu + m2 * (2.0 * n + nu + 2.0) / (2.0 * (n + 1.0))
    a_m1 = mu * n**2 * (n + nu) * (3.0 * n + nu) + 0.5 * m2 * n**2 * (
        nu + 2.0 * n
    ) * (nu + n)
    a_m2 = mu * n**2 * (n - 1.0) ** 2 * (n + nu) * (n + nu - 1.0) + 0.25 * m2 * (
        nu + n
    ) * (nu + n - 1.0) * n**2 * (n - 1.0) ** 2
    return CDCoeffs(a_m2=a_m2, a_m1=a_m1, a_p1=a_p1, a_p2=a_p2)


def _ln_pochhammer(a: float, k: np.ndarray) -> np.ndarray:
    # ln (a)_k for a > 0
    return sc.gammaln(a + k) - sc.gammaln(a)


def biorth_p_log_all(
    params: CoupledParams, n_max: int, x: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Signs and log-magnitudes of the polynomial-side functions P_0..P_{n_max}.

    Each P_n is an alternating finite sum of scaled Bessel-I terms sharing
    the common exponent ``(1-mu)*sqrt(x)/mu``; the row is accumulated with
    ``math.fsum`` after a max-shift.
    """
    if x <= 0.0:
        raise DomainError(f"biorth_p requires x > 0, got {x}")
    mu, nu = params.mu, params.nu
    rx = math.sqrt(x)
    arg = (1.0 - mu) / mu * rx
    ln_base = math.log(2.0 * rx / (1.0 - mu))

    k = np.arange(n_max + 1)
    with np.errstate(divide="ignore"):
        ln_ive = np.log(bessel_i_scaled_all(n_max, arg))
    ln_k_part = k * ln_base - _ln_pochhammer(nu + 1.0, k) - sc.gammaln(k + 1.0) + ln_ive

    n = np.arange(n_max + 1)
    # ln |(-n)_k| = lgamma(n+1) - lgamma(n-k+1), valid for k <= n
    diff = n[:, None] - k[None, :] + 1.0
    valid = diff >= 1.0
    ln_binom = np.where(valid, sc.gammaln(n[:, None] + 1.0) - sc.gammaln(np.where(valid, diff, 1.0)), -np.inf)
    log_terms = ln_binom + ln_k_part[None, :]

    signs = np.empty(n_max + 1)
    logs = np.empty(n_max + 1)
    term_signs = np.where(k % 2 == 0, 1.0, -1.0)
    for i in range(n_max + 1):
        row = log_terms[i, : i + 1]
        m = row.max()
        if not np.isfinite(m):
            signs[i], logs[i] = 0.0, -np.inf
            continue
        total = math.fsum((term_signs[: i + 1] * np.exp(row - m)).tolist())
        if total == 0.0:
            signs[i], logs[i] = 0.0, -np.inf
            continue
        ln_pref = (
            sc.gammaln(nu + i + 1.0)
            + sc.gammaln(i + 1.0)
            - sc.gammaln(nu + 1.0)
            - 0.5 * math.log(mu)
        )
        signs[i] = math.copysign(1.0, total) * (1.0 if i % 2 == 0 else -1.0)
        logs[i] = m + math.log(abs(total)) + ln_pref + arg
    return signs, logs


def biorth_q_log_all(
    params: CoupledParams, n_max: int, y: float
) -> Tuple[np.ndarray, np.ndarray]:
    """Signs and log-magnitudes of the Bessel-K-side functions Q_0..Q_{n_max}."""
    if y <= 0.0:
        raise DomainError(f"biorth_q requires y > 0, got {y}")
    mu, nu = params.mu, params.nu
    ry = math.sqrt(y)
    arg = (1.0 + mu) / mu * ry
    ln_base = math.log(2.0 * ry / (1.0 + mu))

    el = np.arange(n_max + 1)
    ln_kve = ln_bessel_k_scaled_all(nu, n_max + 1, arg)
    ln_l_part = (
        (el + nu) * ln_base
        - _ln_pochhammer(nu + 1.0, el)
        - sc.gammaln(el + 1.0)
        + ln_kve
    )

    n = np.arange(n_max + 1)
    diff = n[:, None] - el[None, :] + 1.0
    valid = diff >= 1.0
    ln_binom = np.where(valid, sc.gammaln(n[:, None] + 1.0) - sc.gammaln(np.where(valid, diff, 1.0)), -np.inf)
    log_terms = ln_binom + ln_l_part[None, :]

    signs = np.empty(n_max + 1)
    logs = np.empty(n_max + 1)
    term_signs = np.where(el % 2 == 0, 1.0, -1.0)
    for i in range(n_max + 1):
        row = log_terms[i, : i + 1]
        m = row.max()
        if not np.isfinite(m):
            signs[i], logs[i] = 0.0, -np.inf
            continue
        total = math.fsum((term_signs[: i + 1] * np.exp(row - m)).tolist())
        if total == 0.0:
            signs[i], logs[i] = 0.0, -np.inf
            continue
        ln_pref = (
            math.log(2.0)
            - 2.0 * sc.gammaln(i + 1.0)
            - sc.gammaln(nu + 1.0)
            - 0.5 * math.log(mu)
        )
        signs[i] = math.copysign(1.0, total) * (1.0 if i % 2 == 0 else -1.0)
        logs[i] = m + math.log(abs(total)) + ln_pref - arg
    return signs, logs


def biorth_p(params: CoupledParams, n: int, x: float) -> ScaledReal:
    """P_n(x) as a ScaledReal (common Bessel exponent carried analytically)."""
    if n < 0 or n > params.n_size + 1:
        raise DomainError(f"biorth_p index n must be in [0, N+1], got {n}")
    signs, logs = biorth_p_log_all(params, n, x)
    return ScaledReal.from_log(signs[n], logs[n])


def biorth_q(params: CoupledParams, n: int, y: float) -> ScaledReal:
    """Q_n(y) as a ScaledReal."""
    if n < 0 or n > params.n_size + 1:
        raise DomainError(f"biorth_q index n must be in [0, N+1], got {n}")
    signs, logs = biorth_q_log_all(params, n, y)
    return ScaledReal.from_log(signs[n], logs[n])


def kernel_scaled(params: CoupledParams, x: float, y: float) -> ScaledReal:
    """Correlation kernel K_N(x, y) = sum_{n<N} P_n(x) Q_n(y), log-scaled."""
    n_top = params.n_size - 1
    ps, pl = biorth_p_log_all(params, n_top, x)
    qs, ql = biorth_q_log_all(params, n_top, y)
    return signed_logsumexp(pl + ql, ps * qs)


def kernel(
    params: CoupledParams, x: float, y: float, gauge_exponent: float = 0.0
) -> float:
    """Correlation kernel as a float, optionally conjugated by exp(gauge).

    The gauge exponent is added to the combined log-scale before
    exponentiating, so conjugated kernels never overflow.
    """
    return kernel_scaled(params, x, y).value(gauge_exponent)


def kernel_cd(
    params: CoupledParams, x: float, y: float, gauge_exponent: float = 0.0
) -> float:
    """Closed (index-shift) form of the kernel; requires N >= 2.

    Near the diagonal (|x - y| < 1e-6 max(x, y)) the 0/0 cancellation makes
    this form useless, so evaluation falls back to the exact sum form.
    """
    big_n = params.n_size
    if big_n < 2:
        raise DomainError("kernel_cd requires n_size >= 2")
    if abs(x - y) < 1e-6 * max(x, y):
        return kernel(params, x, y, gauge_exponent)
    ps, pl = biorth_p_log_all(params, big_n + 1, x)
    qs, ql = biorth_q_log_all(params, big_n + 1, y)
    c_n = cd_coeffs(params, big_n)
    c_np1 = cd_coeffs(params, big_n + 1)
    c_nm1 = cd_coeffs(params, big_n - 1)
    c_nm2 = cd_coeffs(params, big_n - 2)
    combos = [
        (-c_n.a_m2, big_n - 2, big_n),
        (-c_np1.a_m2, big_n - 1, big_n + 1),
        (-c_n.a_m1, big_n - 1, big_n),
        (c_nm1.a_p1, big_n, big_n - 1),
        (c_nm2.a_p2, big_n, big_n - 2),
        (c_nm1.a_p2, big_n + 1, big_n - 1),
    ]
    logs = []
    signs = []
    for coeff, ip, iq in combos:
        if coeff == 0.0:
            continue
        logs.append(math.log(abs(coeff)) + pl[ip] + ql[iq])
        signs.append(math.copysign(1.0, coeff) * ps[ip] * qs[iq])
    total = signed_logsumexp(logs, signs)
    return (total * (1.0 / (x - y))).value(gauge_exponent)


def kernel_diag(params: CoupledParams, y: float) -> float:
    """One-point density K_N(y, y); the Bessel exponents cancel exactly."""
    return kernel(params, y, y)


def _ln_z_coupled(params: CoupledParams) -> float:
    big_n, nu, mu = params.n_size, params.nu, params.mu
    j = np.arange(1, big_n + 1)
    return (
        math.lgamma(big_n + 1)
        - (big_n * nu + big_n**2) * math.log(2.0)
        + big_n * math.log(mu)
        + big_n * nu * math.log1p(mu)
        + 0.5 * big_n * (big_n - 1) * math.log1p(-(mu**2))
        + float(np.sum(sc.gammaln(j) + sc.gammaln(j + nu)))
    )


def joint_density(params: CoupledParams, ys: Sequence[float]) -> float:
    """Joint density of the N squared singular values of the coupled product.

    Both determinants are evaluated with the per-row Bessel exponentials
    extracted into log space before the LU factorization.
    """
    big_n, nu, mu = params.n_size, params.nu, params.mu
    y = np.asarray(ys, dtype=float)
    if y.shape != (big_n,):
        raise DomainError(f"expected {big_n} coordinates, got shape {y.shape}")
    if np.any(y <= 0.0):
        raise DomainError("all coordinates must be positive")
    ry = np.sqrt(y)
    arg_i = (1.0 - mu) / mu * ry
    arg_k = (1.0 + mu) / mu * ry
    j = np.arange(big_n)

    mat_i = np.empty((big_n, big_n))
    mat_k = np.empty((big_n, big_n))
    for i in range(big_n):
        mat_i[i] = bessel_i_scaled_all(big_n - 1, arg_i[i]) * ry[i] ** j
        ln_kv = ln_bessel_k_scaled_all(nu, big_n, arg_k[i])
        mat_k[i] = np.exp(ln_kv + (j + nu) * np.log(ry[i]))
    sg_i, ld_i = np.linalg.slogdet(mat_i)
    sg_k, ld_k = np.linalg.slogdet(mat_k)
    if sg_i == 0.0 or sg_k == 0.0:
        return 0.0
    log_val = ld_i + ld_k + float(np.sum(arg_i) - np.sum(arg_k)) - _ln_z_coupled(params)
    return float(sg_i * sg_k) * math.exp(log_val)


def independent_joint_density(big_n: int, nu: int, ys: Sequence[float]) -> float:
    """Joint squared-singular-value density for two independent factors."""
    if big_n < 1 or nu < 0:
        raise DomainError("need big_n >= 1 and nu >= 0")
    y = np.asarray(ys, dtype=float)
    if y.shape != (big_n,):
        raise DomainError(f"expected {big_n} coordinates, got shape {y.shape}")
    if np.any(y <= 0.0):
        raise DomainError("all coordinates must be positive")
    ry = np.sqrt(y)
    j = np.arange(big_n)
    mat_v = y[:, None] ** j[None, :]
    mat_k = np.empty((big_n, big_n))
    for i in range(big_n):
        ln_kv = ln_bessel_k_scaled_all(nu, big_n, 2.0 * ry[i])
        mat_k[i] = 2.0 * np.exp(ln_kv + (j + nu) * np.log(ry[i]))
    sg_v, ld_v = np.linalg.slogdet(mat_v)
    sg_k, ld_k = np.linalg.slogdet(mat_k)
    if sg_v == 0.0 or sg_k == 0.0:
        return 0.0
    jj = np.arange(1, big_n + 1)
    ln_z = math.lgamma(big_n + 1) + float(
        np.sum(2.0 * sc.gammaln(jj) + sc.gammaln(jj + nu))
    )
    log_val = ld_v + ld_k - float(np.sum(2.0 * ry)) - ln_z
    return float(sg_v * sg_k) * math.exp(log_val)


def _laguerre_log_factors(
    nu: int, x: float, y: float, mu: float | None
) -> float:
    rx, ry = math.sqrt(x), math.sqrt(y)
    lf = (
        0.5 * nu * math.log(2.0 * rx)
        - rx
        - 0.25 * math.log(x)
        + 0.5 * nu * math.log(2.0 * ry)
        - ry
        - 0.25 * math.log(y)
        + 0.5 * nu * (math.log(ry) - math.log(rx))
    )
    if mu is not None:
        lf += (rx - ry) / mu
    return lf


def laguerre_kernel(
    big_n: int,
    nu: int,
    x: float,
    y: float,
    mu: float | None = None,
    form: str = "cd",
) -> float:
    """Correlation kernel of the single-matrix (Laguerre-type) ensemble.

    ``mu`` enters only through the pure gauge factor exp((sqrt(x)-sqrt(y))/mu);
    pass ``None`` for the gauge-free kernel.  ``form`` selects the closed
    two-term expression ("cd") or the order-sum ("sum"); on the diagonal the
    sum form is always used.
    """
    if x <= 0.0 or y <= 0.0:
        raise DomainError("laguerre_kernel requires x, y > 0")
    if form not in ("cd", "sum"):
        raise DomainError(f"unknown form {form!r}")
    vx, vy = 2.0 * math.sqrt(x), 2.0 * math.sqrt(y)
    lf = _laguerre_log_factors(nu, x, y, mu)
    if form == "sum" or abs(vx - vy) < 1e-12 * max(vx, vy):
        total = 0.0
        for n in range(big_n):
            w = math.exp(sc.gammaln(n + 1.0) - sc.gammaln(n + 1.0 + nu))
            total += w * laguerre(n, nu, vx) * laguerre(n, nu, vy)
        return total * math.exp(lf)
    pref = -math.exp(sc.gammaln(big_n + 1.0) - sc.gammaln(big_n + float(nu)))
    bracket = (
        laguerre(big_n, nu, vx) * laguerre(big_n - 1, nu, vy)
        - laguerre(big_n, nu, vy) * laguerre(big_n - 1, nu, vx)
    ) / (vx - vy)
    return pref * bracket * math.exp(lf)


def contour_kernel_poly(s: float, t: float, params: CoupledParams) -> float:
    """Polynomial factor of the contour form of the finite-size kernel.

    Simple poles sit at s = N+1 and t = N+1; evaluation exactly there is an
    error.
    """
    big_n, nu, mu = float(params.n_size), float(params.nu), params.mu
    if s == big_n + 1.0 or t == big_n + 1.0:
        raise PoleError("contour_kernel_poly pole at index N + 1")
    p2 = (1.0 + mu) ** 2 / 4.0
    m2 = (1.0 - mu) ** 2
    return (
        -p2 * (t - big_n) * (t - big_n + 1.0)
        - p2 * (nu + big_n + 1.0) * (big_n + 1.0) * (t - big_n) / (s - big_n - 1.0)
        - mu * (3.0 * big_n + nu) * (t - big_n)
        - 0.5 * m2 * (2.0 * big_n + nu) * (t - big_n)
        + mu * big_n * (s - big_n)
        + 0.5 * m2 * (2.0 * big_n + nu) * (s - big_n)
        + 0.25 * m2 * (s - big_n) * (s - big_n + 1.0)
        + 0.25 * m2 * (big_n + 1.0) * (nu + big_n + 1.0) * (s - big_n) / (t - big_n - 1.0)
    )
