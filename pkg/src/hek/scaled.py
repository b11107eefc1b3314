"""Log-scaled real arithmetic.

Kernel evaluations multiply exponentially large Bessel factors against
exponentially small coefficients.  Carrying a number as
``significand * exp(exponent)`` keeps every intermediate in range; the
exponent is only collapsed into a float at the very end (optionally shifted
by a gauge exponent first).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np


@dataclass(frozen=True)
class ScaledReal:
    """A real number stored as ``significand * exp(exponent)``.

    After :meth:`normalized`, the significand is 0 or has magnitude in
    [1/e, e).  The exponent is on the natural-log scale.
    """

    significand: float
    exponent: float

    @staticmethod
    def zero() -> "ScaledReal":
        return ScaledReal(0.0, 0.0)

    @staticmethod
    def from_float(value: float) -> "ScaledReal":
        return ScaledReal(float(value), 0.0).normalized()

    @staticmethod
    def from_log(sign: float, log_magnitude: float) -> "ScaledReal":
        """Build from a sign and the log of the magnitude."""
        if sign == 0.0 or log_magnitude == -math.inf:
            return ScaledReal.zero()
        return ScaledReal(math.copysign(1.0, sign), log_magnitude).normalized()

    def normalized(self) -> "ScaledReal":
        s = self.significand
        if s == 0.0 or not math.isfinite(s):
            return ScaledReal(s if math.isfinite(s) else s, 0.0)
        shift = round(math.log(abs(s)))
        if shift == 0:
            return self
        return ScaledReal(s * math.exp(-shift), self.exponent + shift)

    @property
    def sign(self) -> float:
        if self.significand == 0.0:
            return 0.0
        return math.copysign(1.0, self.significand)

    def log_abs(self) -> float:
        """log|value|; -inf for zero."""
        if self.significand == 0.0:
            return -math.inf
        return math.log(abs(self.significand)) + self.exponent

    def value(self, gauge_exponent: float = 0.0) -> float:
        """Collapse to a float, optionally multiplying by exp(gauge_exponent)."""
        if self.significand == 0.0:
            return 0.0
        log_mag = math.log(abs(self.significand)) + self.exponent + gauge_exponent
        if log_mag > 709.0:
            return math.copysign(math.inf, self.significand)
        if log_mag < -745.0:
            return math.copysign(0.0, self.significand)
        return math.copysign(math.exp(log_mag), self.significand)

    def __mul__(self, other: "ScaledReal | float") -> "ScaledReal":
        if isinstance(other, ScaledReal):
            return ScaledReal(
                self.significand * other.significand,
                self.exponent + other.exponent,
            ).normalized()
        return ScaledReal(self.significand * float(other), self.exponent).normalized()

    __rmul__ = __mul__

    def __neg__(self) -> "ScaledReal":
        return ScaledReal(-self.significand, self.exponent)

    def __add__(self, other: "ScaledReal") -> "ScaledReal":
        if self.significand == 0.0:
            return other
        if other.significand == 0.0:
            return self
        hi, lo = (self, other) if self.exponent >= other.exponent else (other, self)
        delta = lo.exponent - hi.exponent
        if delta < -745.0:
            return hi
        return ScaledReal(
            hi.significand + lo.significand * math.exp(delta), hi.exponent
        ).normalized()

    def __sub__(self, other: "ScaledReal") -> "ScaledReal":
        return self + (-other)

    def shifted(self, delta: float) -> "ScaledReal":
        """Multiply by exp(delta) by adjusting the exponent only."""
        return ScaledReal(self.significand, self.exponent + delta)


def signed_logsumexp(log_mags: Sequence[float], signs: Sequence[float]) -> ScaledReal:
    """Exact-compensated sum of ``sign_i * exp(log_mag_i)`` as a ScaledReal.

    Entries with ``log_mag = -inf`` are skipped.  The shifted significands
    are accumulated with :func:`math.fsum`, so the only rounding left is the
    final exponential of each shifted term.
    """
    lm = np.asarray(log_mags, dtype=float)
    sg = np.asarray(signs, dtype=float)
    mask = np.isfinite(lm) & (sg != 0.0)
    if not mask.any():
        return ScaledReal.zero()
    lm = lm[mask]
    sg = sg[mask]
    m = float(lm.max())
    terms = sg * np.exp(lm - m)
    total = math.fsum(terms.tolist())
    if total == 0.0:
        return ScaledReal.zero()
    return ScaledReal(total, m).normalized()


def scaled_sum(values: Sequence[ScaledReal]) -> ScaledReal:
    """Sum ScaledReals by aligning all exponents to the largest one."""
    vals = [v for v in values if v.significand != 0.0]
    if not vals:
        return ScaledReal.zero()
    m = max(v.exponent for v in vals)
    total = math.fsum(v.significand * math.exp(v.exponent - m) for v in vals)
    if total == 0.0:
        return ScaledReal.zero()
    return ScaledReal(total, m).normalized()
