"""Limiting kernels at the hard edge of the squared-singular-value spectrum.

Three families live here:

* the classical Bessel kernel of the single-matrix ensemble,
* the one-parameter interpolating kernel of the strongly coupled product
  (deformation parameter g), in both its integrable form (built from four
  I-side and four K-side functions) and as a direct double residue sum,
* the unfolded microscopic densities derived from both.

Every contour that encircles the nonnegative integers is evaluated as a
residue sum; there is no two-dimensional numerical contour quadrature
anywhere.  Series carry explicit truncation control (:class:`Truncation`)
and the diagonal evaluator escalates to arbitrary precision when the
double-sum cancellation exceeds what doubles can absorb.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, Tuple

import mpmath
import numpy as np
import scipy.special as sc

from .errors import DomainError, TruncationError
from .meijer import MBQuadSpec
from .scaled import ScaledReal, signed_logsumexp
from .specfun import (
    bessel_i_scaled_all,
    bessel_j,
    bessel_j_int,
    kummer_m_regularized,
    ln_bessel_k_scaled_all,
)

__all__ = [
    "Truncation",
    "InterpParams",
    "interp_poly",
    "interp_poly_expanded",
    "phi_funcs",
    "f_funcs",
    "f_funcs_mb",
    "interp_kernel",
    "interp_kernel_scaled",
    "interp_kernel_sum_scaled",
    "interp_density",
    "bessel_kernel",
    "residue_j_moments",
    "RESIDUE_WEIGHTS",
    "rho_micro_bessel",
    "rho_micro_interp",
    "identity_sum",
    "bessel_limit_sum",
]

#: above this deformation strength the K-side residue series loses
#: exp(4 sqrt(g)) digits to cancellation, so the Mellin-Barnes route is used
F_SERIES_G_LIMIT = 16.0


@dataclass(frozen=True)
class Truncation:
    """Relative tail target and hard cap for all residue series."""

    eps: float = 1e-14
    k_max: int = 400

    def __post_init__(self):
        if not 0.0 < self.eps <= 1e-6:
            raise DomainError(f"trunc.eps must lie in (0, 1e-6], got {self.eps}")
        if self.k_max < 16:
            raise DomainError(f"trunc.k_max must be >= 16, got {self.k_max}")


@dataclass(frozen=True)
class InterpParams:
    """Interpolating-kernel configuration: index nu, coupling g, truncation."""

    nu: int
    g: float
    trunc: Truncation = field(default_factory=Truncation)

    def __post_init__(self):
        if self.nu < 0:
            raise DomainError(f"nu must be >= 0, got {self.nu}")
        if self.g <= 0.0:
            raise DomainError(f"g must be > 0, got {self.g}")


def interp_poly(s: float, t: float, nu: float) -> float:
    """Antisymmetric cubic polynomial entering the interpolating kernel."""
    return 0.25 * (t - s) * (t * t + s * s + (t + s) * (nu - 1.0) - nu)


def interp_poly_expanded(s: float, t: float, nu: float) -> float:
    """Expanded (six-term) form of :func:`interp_poly`; equal on all inputs."""
    return -0.25 * (
        s * (s + nu) * (s + nu - 1.0)
        - t * (t + nu) * (t + nu - 1.0)
        - nu * s * (s + nu)
        + nu * t * (t + nu)
        + t * (t + nu) * s
        - s * (s + nu) * t
    )


# ---------------------------------------------------------------------------
# The four I-side and four K-side building functions
# ---------------------------------------------------------------------------


def _weights(k: np.ndarray, nu: float) -> Tuple[np.ndarray, ...]:
    return (
        np.ones_like(k, dtype=float),
        k.astype(float),
        k * (k + nu),
        k * (k + nu) * (k + nu - 1.0),
    )


def _cutoff_index(total_log: np.ndarray, thresh: float, k_min: int = 16) -> int:
    """First index past the peak with three consecutive terms below thresh."""
    peak_at = int(np.nanargmax(total_log))
    for k in range(max(k_min, peak_at + 1, 2), len(total_log)):
        if (total_log[k - 2 : k + 1] < thresh).all():
            return k
    raise TruncationError("series cap reached before the tail bound was met")


def _series_cutoff(base_log: np.ndarray, trunc: Truncation, extra: np.ndarray) -> int:
    """Cutoff for a weighted residue series: terms below eps * peak term."""
    total_log = base_log + extra
    return _cutoff_index(total_log, np.max(total_log) + math.log(trunc.eps))


def phi_funcs(params: InterpParams, x: float) -> Tuple[ScaledReal, ...]:
    """The four I-side functions of the integrable form, order 1, k, k(k+nu),
    k(k+nu)(k+nu-1), each as a ScaledReal with common exponent x/(2g)."""
    if x <= 0.0:
        raise DomainError(f"phi_funcs requires x > 0, got {x}")
    nu, g, trunc = params.nu, params.g, params.trunc
    arg = x / (2.0 * g)
    k = np.arange(trunc.k_max + 1)
    with np.errstate(divide="ignore"):
        ln_ive = np.log(bessel_i_scaled_all(trunc.k_max, arg))
        base_log = (
            k * math.log(x)
            - sc.gammaln(k + 1.0)
            - sc.gammaln(k + nu + 1.0)
            + ln_ive
        )
        w4_log = np.log(np.maximum(k * (k + nu) * (k + nu - 1.0), 1.0))
    cut = _series_cutoff(base_log, trunc, w4_log)
    kk = k[:cut]
    signs = np.where(kk % 2 == 0, -1.0, 1.0)  # overall leading minus sign
    out = []
    for w in _weights(kk, float(nu)):
        with np.errstate(divide="ignore"):
            log_terms = base_log[:cut] + np.log(np.abs(w))
        out.append(signed_logsumexp(log_terms, signs * np.sign(w)).shifted(arg))
    return tuple(out)


def f_funcs(params: InterpParams, y: float) -> Tuple[ScaledReal, ...]:
    """The four K-side functions of the integrable form as ScaledReals.

    The residue series loses ~exp(4 sqrt(g)) to cancellation; inside its
    comfort zone (g below :data:`F_SERIES_G_LIMIT`) it is exact to roundoff.
    """
    if y <= 0.0:
        raise DomainError(f"f_funcs requires y > 0, got {y}")
    nu, g, trunc = params.nu, params.g, params.trunc
    arg = y / (2.0 * g)
    k = np.arange(trunc.k_max + 1)
    ln_kve = ln_bessel_k_scaled_all(nu, trunc.k_max + 1, arg)
    with np.errstate(divide="ignore"):
        base_log = (
            (k + nu) * math.log(y)
            - sc.gammaln(k + 1.0)
            - sc.gammaln(k + nu + 1.0)
            + ln_kve
        )
        w4_log = np.log(np.maximum(k * (k + nu) * (k + nu - 1.0), 1.0))
    cut = _series_cutoff(base_log, trunc, w4_log)
    kk = k[:cut]
    signs = np.where(kk % 2 == 0, -1.0, 1.0)
    out = []
    for w in _weights(kk, float(nu)):
        with np.errstate(divide="ignore"):
            log_terms = base_log[:cut] + np.log(np.abs(w))
        out.append(signed_logsumexp(log_terms, signs * np.sign(w)).shifted(-arg))
    return tuple(out)


def f_funcs_mb(
    params: InterpParams, y: float, quad: MBQuadSpec | None = None
) -> Tuple[ScaledReal, ...]:
    """K-side functions via their Kummer-function Mellin-Barnes forms.

    Vertical-line quadrature at offset c in (0, 1); the confluent
    hypergeometric factor is evaluated in regularized form so integer nu=0
    needs no special casing.  This route stays accurate for arbitrarily
    large g, where the residue series of :func:`f_funcs` is numerically
    dead.
    """
    if y <= 0.0:
        raise DomainError(f"f_funcs_mb requires y > 0, got {y}")
    nu, g = params.nu, params.g
    if quad is None:
        quad = MBQuadSpec(offset=0.5, step=0.05, cutoff=40.0)
    if not 0.0 < quad.offset < 1.0:
        raise DomainError("f_funcs_mb requires offset in (0, 1)")
    tau = np.arange(-quad.cutoff, quad.cutoff + quad.step / 2, quad.step)
    s = quad.offset + 1j * tau
    ln_ratio = -2.0 * s * math.log(y / (4.0 * g))

    # (gamma pair, regularized-Kummer b, power of 4g, overall sign)
    recipes = [
        ((nu, 0.0), float(nu), nu + 1.0, float(nu), -1.0),
        ((nu + 1.0, 0.0), float(nu + 1), nu + 2.0, nu + 1.0, 1.0),
        ((nu + 1.0, 0.0), float(nu + 1), nu + 1.0, nu + 1.0, 1.0),
        ((nu + 1.0, 0.0), float(nu + 1), float(nu), nu + 1.0, 1.0),
    ]
    out = []
    for (off1, off2), a_off, b_reg, g_pow, sign in recipes:
        phi = np.array(
            [kummer_m_regularized(complex(sv + a_off), b_reg, -4.0 * g) for sv in s]
        )
        vals = np.exp(sc.loggamma(s + off1) + sc.loggamma(s + off2) + ln_ratio) * phi
        total = complex(vals.sum()) * quad.step / (2.0 * math.pi)
        if abs(total.imag) > 1e-10 * max(abs(total.real), 1e-280):
            raise DomainError("f_funcs_mb line integral has nonreal residue")
        pref_log = g_pow * math.log(4.0 * g) - math.log(2.0)
        mag = abs(total.real)
        if mag == 0.0:
            out.append(ScaledReal.zero())
            continue
        out.append(
            ScaledReal.from_log(
                sign * math.copysign(1.0, total.real), math.log(mag) + pref_log
            )
        )
    return tuple(out)


# ---------------------------------------------------------------------------
# The interpolating kernel
# ---------------------------------------------------------------------------


def interp_kernel_scaled(
    params: InterpParams, x: float, y: float, f_route: str = "auto"
) -> ScaledReal:
    """Interpolating kernel in its integrable form, as a ScaledReal.

    The eight building functions carry exponents x/(2g) and -y/(2g); all
    bilinear products therefore share the single analytic exponent
    (x - y)/(2g), which is combined exactly before any subtraction.
    """
    if x <= 0.0 or y <= 0.0:
        raise DomainError("interp_kernel requires x, y > 0")
    nu, g = float(params.nu), params.g
    if abs(x - y) < 1e-6 * max(x, y):
        mid = 0.5 * (x + y)
        dens = interp_density(params, mid)
        return ScaledReal.from_float(dens).shifted((x - y) / (2.0 * g))
    p1, p2, p3, p4 = phi_funcs(params, x)
    if f_route == "series" or (f_route == "auto" and g <= F_SERIES_G_LIMIT):
        f1, f2, f3, f4 = f_funcs(params, y)
    elif f_route in ("auto", "mb"):
        f1, f2, f3, f4 = f_funcs_mb(params, y)
    else:
        raise DomainError(f"unknown f_route {f_route!r}")
    bracket_a = (
        p1 * f4 - p4 * f1 - nu * (p1 * f3) + nu * (p3 * f1) + p3 * f2 - p2 * f3
    )
    bracket_b = p1 * f3 + p3 * f1 - nu * (p2 * f1) - p2 * f2
    denom = x * x - y * y
    return bracket_a * (-1.0 / (g * denom)) + bracket_b * (-4.0 / denom)


def interp_kernel(
    params: InterpParams, x: float, y: float, f_route: str = "auto"
) -> float:
    """Interpolating kernel as a float (may overflow for extreme (x-y)/g)."""
    return interp_kernel_scaled(params, x, y, f_route).value()


def _double_sum_cutoffs(
    log_k: np.ndarray, log_l: np.ndarray, trunc: Truncation
) -> Tuple[int, int]:
    """Per-axis cutoffs; the 25-nat margin absorbs cubic bracket growth."""
    ck = _cutoff_index(log_k, np.max(log_k) + math.log(trunc.eps) - 25.0)
    cl = _cutoff_index(log_l, np.max(log_l) + math.log(trunc.eps) - 25.0)
    return ck, cl


def interp_kernel_sum_scaled(
    params: InterpParams, x: float, y: float
) -> ScaledReal:
    """Direct double residue sum for the interpolating kernel (cross-check).

    Mathematically identical to the integrable form; implemented
    independently from it.
    """
    if x <= 0.0 or y <= 0.0 or x == y:
        raise DomainError("interp_kernel_sum requires x, y > 0 and x != y")
    nu, g, trunc = float(params.nu), params.g, params.trunc
    ax, ay = x / (2.0 * g), y / (2.0 * g)
    k = np.arange(trunc.k_max + 1)
    with np.errstate(divide="ignore"):
        log_k = (
            k * math.log(x) - sc.gammaln(k + 1.0) - sc.gammaln(k + nu + 1.0)
            + np.log(bessel_i_scaled_all(trunc.k_max, ax))
        )
        log_l = (
            (k + nu) * math.log(y)
            - sc.gammaln(k + 1.0)
            - sc.gammaln(k + nu + 1.0)
            + ln_bessel_k_scaled_all(params.nu, trunc.k_max + 1, ay)
        )
    ck, cl = _double_sum_cutoffs(log_k, log_l, trunc)
    kk = k[:ck].astype(float)
    ll = k[:cl].astype(float)
    bracket = interp_poly(ll[None, :], kk[:, None], nu) - g * (
        ll[None, :] ** 2 + kk[:, None] ** 2 + nu * ll[None, :] - ll[None, :] * kk[:, None]
    )
    with np.errstate(divide="ignore"):
        log_terms = log_k[:ck, None] + log_l[None, :cl] + np.log(np.abs(bracket))
    signs = np.where((kk[:, None] + ll[None, :]) % 2 == 0, 1.0, -1.0) * np.sign(bracket)
    total = signed_logsumexp(log_terms.ravel(), signs.ravel())
    return (total * (4.0 / (g * (x * x - y * y)))).shifted((x - y) / (2.0 * g))


def _interp_density_double(params: InterpParams, x: float) -> Tuple[float, float]:
    """(value, cancellation loss in nats) of the diagonal double sum."""
    nu, g, trunc = float(params.nu), params.g, params.trunc
    arg = x / (2.0 * g)
    k = np.arange(trunc.k_max + 1)
    ive = bessel_i_scaled_all(trunc.k_max + 1, arg)
    # I_{k-1} with I_{-1} = I_1 at the k = 0 term
    ive_shift = np.empty(trunc.k_max + 1)
    ive_shift[0] = ive[1]
    ive_shift[1:] = ive[: trunc.k_max]
    with np.errstate(divide="ignore"):
        log_k = (
            k * math.log(x) - sc.gammaln(k + 1.0) - sc.gammaln(k + nu + 1.0)
            + np.log(ive_shift)
        )
        log_l = (
            (k + nu) * math.log(x)
            - sc.gammaln(k + 1.0)
            - sc.gammaln(k + nu + 1.0)
            + ln_bessel_k_scaled_all(params.nu, trunc.k_max + 1, arg)
        )
    ck, cl = _double_sum_cutoffs(log_k, log_l, trunc)
    kk = k[:ck].astype(float)
    ll = k[:cl].astype(float)
    bracket = interp_poly(ll[None, :], kk[:, None], nu) - g * (
        ll[None, :] ** 2 + kk[:, None] ** 2 + nu * ll[None, :] - ll[None, :] * kk[:, None]
    )
    with np.errstate(divide="ignore"):
        log_terms = log_k[:ck, None] + log_l[None, :cl] + np.log(np.abs(bracket))
    signs = np.where((kk[:, None] + ll[None, :]) % 2 == 0, 1.0, -1.0) * np.sign(bracket)
    total = signed_logsumexp(log_terms.ravel(), signs.ravel())
    scaled = total * (1.0 / (g * g * x))
    peak = float(np.max(log_terms[np.isfinite(log_terms)]))
    loss = peak - total.log_abs() if total.significand != 0.0 else math.inf
    return scaled.value(), loss


def _interp_density_mp(params: InterpParams, x: float, loss: float) -> float:
    """Diagonal double sum in arbitrary precision, sized to the known loss."""
    nu, g = params.nu, params.g
    dps = 25 + int(loss / math.log(10.0))
    with mpmath.workdps(dps):
        mx = mpmath.mpf(x)
        mg = mpmath.mpf(g)
        arg = mx / (2 * mg)
        kmax = int(3.2 * math.sqrt(x) + nu + 30)
        iv = [mpmath.besseli(kk - 1, arg) for kk in range(kmax + 1)]
        iv[0] = mpmath.besseli(1, arg)
        kv = [mpmath.besselk(ll + nu, arg) for ll in range(kmax + 1)]
        total = mpmath.mpf(0)
        for kk in range(kmax + 1):
            ck = (-1) ** kk * mx**kk / (
                mpmath.factorial(kk) * mpmath.gamma(kk + nu + 1)
            ) * iv[kk]
            for ll in range(kmax + 1):
                br = interp_poly(ll, kk, nu) - g * (
                    ll * ll + kk * kk + nu * ll - ll * kk
                )
                if br == 0.0:
                    continue
                cl = (-1) ** ll * mx ** (ll + nu) / (
                    mpmath.factorial(ll) * mpmath.gamma(ll + nu + 1)
                ) * kv[ll]
                total += ck * cl * br
        return float(total / (mg * mg * mx))


def interp_density(params: InterpParams, x: float) -> float:
    """One-point density of the interpolating process at x > 0.

    The double residue sum cancels down from terms of size ~exp(4 sqrt(x));
    once the measured loss crosses the double-precision budget the sum is
    repeated in arbitrary precision.
    """
    if x <= 0.0:
        raise DomainError(f"interp_density requires x > 0, got {x}")
    val, loss = _interp_density_double(params, x)
    if loss > 16.0:
        return _interp_density_mp(params, x, loss)
    return val


# ---------------------------------------------------------------------------
# Bessel kernel and residue moments
# ---------------------------------------------------------------------------


def bessel_kernel(nu: int, x: float, y: float) -> float:
    """Hard-edge Bessel kernel in squared variables; diagonal-safe."""
    if x <= 0.0 or y <= 0.0:
        raise DomainError("bessel_kernel requires x, y > 0")
    if abs(x - y) < 1e-8 * max(x, y):
        z = 2.0 * math.sqrt(0.5 * (x + y))
        jm = bessel_j_int(nu - 1, z)
        j0 = bessel_j_int(nu, z)
        jp = bessel_j_int(nu + 1, z)
        return (j0 * j0 - jp * jm) * 4.0 / (z * z)
    rx, ry = math.sqrt(x), math.sqrt(y)
    num = 2.0 * rx * bessel_j_int(nu - 1, 2.0 * rx) * bessel_j_int(nu, 2.0 * ry) - (
        2.0 * ry * bessel_j_int(nu - 1, 2.0 * ry) * bessel_j_int(nu, 2.0 * rx)
    )
    return -num / ((x - y) * rx * ry) * (y / x) ** (0.5 * nu)


RESIDUE_WEIGHTS: Dict[str, Callable[[np.ndarray, float], np.ndarray]] = {
    "1": lambda t, nu: np.ones_like(t),
    "t": lambda t, nu: t,
    "t(t+nu)": lambda t, nu: t * (t + nu),
    "t(t+nu)(t+nu-1)": lambda t, nu: t * (t + nu) * (t + nu - 1.0),
    "t^2": lambda t, nu: t * t,
    "t^2(t+nu)": lambda t, nu: t * t * (t + nu),
    "t^2(t+nu)(t+nu-1)": lambda t, nu: t * t * (t + nu) * (t + nu - 1.0),
}


def residue_j_moments(
    nu: int, weight: str, xi: float, trunc: Truncation | None = None
) -> float:
    """Residue series sum_k (-1)^{k+1} w(k) xi^k / (k! Gamma(k+nu+1)).

    Each supported polynomial weight makes the sum collapse to a closed
    Bessel-J expression; the series here is the direct evaluation used to
    verify those closed forms.
    """
    if xi <= 0.0:
        raise DomainError(f"residue_j_moments requires xi > 0, got {xi}")
    if weight not in RESIDUE_WEIGHTS:
        raise DomainError(f"unknown weight {weight!r}")
    trunc = trunc or Truncation()
    k = np.arange(trunc.k_max + 1)
    with np.errstate(divide="ignore"):
        base_log = k * math.log(xi) - sc.gammaln(k + 1.0) - sc.gammaln(k + nu + 1.0)
    w = RESIDUE_WEIGHTS[weight](k.astype(float), float(nu))
    cut = _series_cutoff(base_log, trunc, np.log(np.maximum(np.abs(w), 1.0)))
    kk = k[:cut]
    with np.errstate(divide="ignore"):
        log_terms = base_log[:cut] + np.log(np.abs(w[:cut]))
    signs = np.where(kk % 2 == 0, -1.0, 1.0) * np.sign(w[:cut])
    return signed_logsumexp(log_terms, signs).value()


def rho_micro_bessel(nu: int, x: float) -> float:
    """Unfolded Bessel one-point density; tends to 1/pi for large x."""
    if x <= 0.0:
        raise DomainError(f"rho_micro_bessel requires x > 0, got {x}")
    z = 2.0 * x
    return x * (
        bessel_j(float(nu), z) ** 2
        - bessel_j_int(nu - 1, z) * bessel_j_int(nu + 1, z)
    )


def rho_micro_interp(params: InterpParams, x: float) -> float:
    """Unfolded interpolating one-point density x^3 S(x^2, x^2; g)."""
    if x <= 0.0:
        raise DomainError(f"rho_micro_interp requires x > 0, got {x}")
    return x**3 * interp_density(params, x * x)


# ---------------------------------------------------------------------------
# Double residue sums for the vanishing integral identities and the
# strongly-coupled-to-Bessel limit
# ---------------------------------------------------------------------------


def _paired_double_sum(
    nu: float,
    x: float,
    bracket_fn: Callable[[np.ndarray, np.ndarray], np.ndarray],
    trunc: Truncation,
    y: float | None = None,
) -> Tuple[float, float]:
    """Generic sum over (k, l) of residue pairs with a polynomial bracket.

    Returns (sum, max term magnitude); the latter normalizes the vanishing
    identities.  Index convention: l pairs with the y-type factor, k with
    the x-type factor; bracket_fn receives (l, k).
    """
    yy = x if y is None else y
    k = np.arange(trunc.k_max + 1)
    with np.errstate(divide="ignore"):
        log_k = k * math.log(x) - sc.gammaln(k + 1.0) - sc.gammaln(k + nu + 1.0)
        log_l = (k + nu) * math.log(yy) - sc.gammaln(k + 1.0) - sc.gammaln(
            k + nu + 1.0
        )
    ck, cl = _double_sum_cutoffs(log_k, log_l, trunc)
    kk = k[:ck].astype(float)
    ll = k[:cl].astype(float)
    bracket = bracket_fn(ll[None, :], kk[:, None])
    with np.errstate(divide="ignore"):
        log_terms = log_k[:ck, None] + log_l[None, :cl] + np.log(np.abs(bracket))
    signs = np.where((kk[:, None] + ll[None, :]) % 2 == 0, 1.0, -1.0) * np.sign(bracket)
    finite = np.isfinite(log_terms)
    peak = float(np.max(log_terms[finite])) if finite.any() else -math.inf
    total = signed_logsumexp(log_terms.ravel(), signs.ravel())
    return total.value(), math.exp(peak) if math.isfinite(peak) else 0.0


def identity_sum(which: int, nu: int, x: float, trunc: Truncation | None = None) -> Tuple[float, float]:
    """The three vanishing double-sum identities (1, 2, 3) at order g^which.

    Returns (value, largest term magnitude); the identity holds when the
    former is a tiny fraction of the latter.
    """
    trunc = trunc or Truncation()
    nuf = float(nu)

    if which == 1:
        def bracket(l, k):
            return interp_poly(l, k, nuf) / x
    elif which == 2:
        def bracket(l, k):
            return interp_poly(l, k, nuf) * ((l + nuf) ** 2 - k**2) / (x * x) - (
                l**2 + k**2 + nuf * l - l * k
            ) / x
    elif which == 3:
        def bracket(l, k):
            a = (l + nuf) ** 2 - k**2
            return interp_poly(l, k, nuf) * (
                a * a - 2.0 * ((l + nuf) ** 2 + k**2) + 1.0
            ) / x**3 - (l**2 + k**2 + nuf * l - l * k) * a / (x * x)
    else:
        raise DomainError(f"identity index must be 1, 2 or 3, got {which}")
    return _paired_double_sum(nuf, x, bracket, trunc)


def bessel_limit_sum(
    nu: int, x: float, y: float, trunc: Truncation | None = None
) -> float:
    """Double residue sum of the weak-coupling limit of the rescaled kernel.

    Evaluates to the Bessel kernel at (2 sqrt(x), 2 sqrt(y)) in squared
    variables; used as an independent consistency route.
    """
    trunc = trunc or Truncation()
    nuf = float(nu)
    rx, ry = 2.0 * math.sqrt(x), 2.0 * math.sqrt(y)

    def bracket(l, k):
        return -4.0 * interp_poly(l, k, nuf)

    total, _ = _paired_double_sum(nuf, rx, bracket, trunc, y=ry)
    return -total / (8.0 * (x - y) * (x * y) ** 0.25)
