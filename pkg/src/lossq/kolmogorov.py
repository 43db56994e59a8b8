"""Limit laws of the scaled sup-deviation statistics and their quantiles.

Three laws are covered: the classical Kolmogorov alternating-series law of
the two-sided statistic, the one-sided law ``1 - exp(-2 z^2)``, and the law
of the *sum* of the two one-sided statistics (the convolution of the
one-sided law with itself, in closed form).  Quantiles are found by
bisection and turned into additive confidence widths ``z* / sqrt(N)`` for
the moment coefficients.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

__all__ = [
    "LimitLaw",
    "ConfidenceSpec",
    "kolmogorov_cdf",
    "one_sided_cdf",
    "conv_cdf",
    "normal_cdf",
    "law_cdf",
    "quantile",
    "width_for",
    "crossing_point",
]

_SERIES_TOL = 1e-17
_SMALL_Z = 0.1
_DUAL_SWITCH = 0.75
_BISECT_LO, _BISECT_HI = 0.0, 10.0
_BISECT_TOL = 1e-12


class LimitLaw(enum.Enum):
    """Which scaled statistic's limit law to use."""

    TWO_SIDED = "two-sided"
    ONE_SIDED = "one-sided"
    ONE_SIDED_SUM = "one-sided-sum"


@dataclass(frozen=True)
class ConfidenceSpec:
    """A confidence level resolved to an additive width for a sample size."""

    confidence: float
    n_obs: int
    law: LimitLaw
    width: float

    def __post_init__(self) -> None:
        if not 0.0 < self.confidence < 1.0:
            raise ValueError("confidence must lie strictly between 0 and 1")
        if self.n_obs < 1:
            raise ValueError("n_obs must be at least 1")
        if self.width <= 0.0:
            raise ValueError("width must be positive")


def kolmogorov_cdf(z: float) -> float:
    """Limit law of the scaled two-sided statistic.

    For z <= 0.1 the value is below 1e-100 and is returned as 0.  For small
    z the alternating series cancels catastrophically, so a theta-transformed
    form of the same function with all-positive terms is summed instead; for
    larger z the symmetric-in-j alternating series is used.  Both branches
    sum until the next term falls below 1e-17, keeping the evaluation strictly
    monotone and everywhere below the one-sided law at float resolution.
    """
    if z <= _SMALL_Z:
        return 0.0
    if z <= _DUAL_SWITCH:
        # sqrt(2 pi)/z * sum over odd j of exp(-j^2 pi^2 / (8 z^2))
        scale = math.pi * math.pi / (8.0 * z * z)
        total = 0.0
        j = 1
        while True:
            term = math.exp(-j * j * scale)
            if term < _SERIES_TOL:
                break
            total += term
            j += 2
        return min(1.0, max(0.0, math.sqrt(2.0 * math.pi) / z * total))
    total = 0.0
    sign = -1.0
    j = 1
    while True:
        term = math.exp(-2.0 * j * j * z * z)
        if term < _SERIES_TOL:
            break
        total += sign * term
        sign = -sign
        j += 1
    return min(1.0, max(0.0, 1.0 + 2.0 * total))


def one_sided_cdf(z: float) -> float:
    """Limit law of either scaled one-sided statistic: 1 - exp(-2 z^2)."""
    if z <= 0.0:
        return 0.0
    return 1.0 - math.exp(-2.0 * z * z)


def normal_cdf(z: float) -> float:
    """Standard normal CDF via the complementary error function."""
    return 0.5 * math.erfc(-z / math.sqrt(2.0))


def conv_cdf(z: float) -> float:
    """Law of the sum of the two independent one-sided statistics.

    Closed form: 1 - exp(-2 z^2) - sqrt(pi) z exp(-z^2) (2 Phi(sqrt(2) z) - 1).
    """
    if z <= 0.0:
        return 0.0
    value = (
        1.0
        - math.exp(-2.0 * z * z)
        - math.sqrt(math.pi)
        * z
        * math.exp(-z * z)
        * (2.0 * normal_cdf(math.sqrt(2.0) * z) - 1.0)
    )
    return min(1.0, max(0.0, value))


_LAW_CDFS = {
    LimitLaw.TWO_SIDED: kolmogorov_cdf,
    LimitLaw.ONE_SIDED: one_sided_cdf,
    LimitLaw.ONE_SIDED_SUM: conv_cdf,
}


def law_cdf(law: LimitLaw, z: float) -> float:
    """Evaluate the chosen limit law at z."""
    return _LAW_CDFS[law](z)


def quantile(law: LimitLaw, p: float) -> float:
    """Solve law(z*) = p by bisection on [0, 10] to a 1e-12 bracket."""
    if not 0.0 < p < 1.0:
        raise ValueError("quantile level must lie strictly between 0 and 1")
    cdf = _LAW_CDFS[law]
    lo, hi = _BISECT_LO, _BISECT_HI
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if cdf(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def width_for(law: LimitLaw, confidence: float, n_obs: int) -> ConfidenceSpec:
    """Resolve a confidence level to the additive width z*/sqrt(n_obs)."""
    if n_obs < 1:
        raise ValueError("n_obs must be at least 1")
    z = quantile(law, confidence)
    return ConfidenceSpec(
        confidence=confidence, n_obs=n_obs, law=law, width=z / math.sqrt(n_obs)
    )


def crossing_point() -> tuple[float, float]:
    """Where ``1 - exp(-x^2/2)`` crosses the sum law, and the common value.

    The difference of the two CDFs changes sign exactly once on [0.5, 3];
    bisection refines the root to a 1e-12 bracket.  Below the returned
    level, a target one-sided confidence makes the sum law the wider
    requirement; above it the two-sided law is wider.
    """

    def diff(x: float) -> float:
        return -math.expm1(-0.5 * x * x) - conv_cdf(x)

    lo, hi = 0.5, 3.0
    flo = diff(lo)
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if (diff(mid) > 0.0) == (flo > 0.0):
            lo = mid
        else:
            hi = mid
    x0 = 0.5 * (lo + hi)
    level = 0.5 * ((-math.expm1(-0.5 * x0 * x0)) + conv_cdf(x0))
    return x0, level
