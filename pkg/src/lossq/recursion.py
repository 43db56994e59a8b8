"""Point estimates of finite-buffer loss-system characteristics.

The expected busy period, expected served and lost counts per busy cycle,
and the stationary loss probability all satisfy the same linear convolution
recursion in the Poisson-weighted moment coefficients:

    Q_1 = Q_0 / r_0
    Q_k = [(1 - r_1) Q_{k-1} - sum_{i=2}^{k-1} r_i Q_{k-i}] / r_0

They differ only in the seed Q_0 and in the map from the recursion scale to
the natural scale.  Estimates are returned raw — a negative value on a
nonnegative characteristic is reported via sign-anomaly flags, never
silently clamped.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneracyError
from .moments import MomentVector

__all__ = [
    "Characteristic",
    "CharacteristicSpec",
    "RecursionResult",
    "solve_recursion",
    "estimate_characteristic",
]


class Characteristic(enum.Enum):
    """Output characteristic of a finite-buffer loss system."""

    BUSY_PERIOD = "busy"
    SERVED_CUSTOMERS = "served"
    LOST_CUSTOMERS = "lost"
    LOSS_PROBABILITY = "loss-prob"


@dataclass(frozen=True)
class CharacteristicSpec:
    """Which characteristic to estimate, plus the rates that seed it.

    The arrival-side characteristics (busy period, served, lost) need the
    arrival rate; busy period and lost additionally need the mean service
    time.  The loss probability is driven from the service side and needs
    the service rate only.
    """

    kind: Characteristic
    arrival_rate: float | None = None
    mean_service: float | None = None
    service_rate: float | None = None

    def __post_init__(self) -> None:
        def positive(name: str) -> float:
            v = getattr(self, name)
            if v is None:
                raise ValueError(f"{self.kind.value} requires {name}")
            if v <= 0.0 or not math.isfinite(v):
                raise ValueError(f"{name} must be positive and finite")
            return v

        if self.kind in (Characteristic.BUSY_PERIOD, Characteristic.LOST_CUSTOMERS):
            positive("arrival_rate")
            positive("mean_service")
        elif self.kind is Characteristic.SERVED_CUSTOMERS:
            positive("arrival_rate")
        else:
            positive("service_rate")

    @classmethod
    def busy_period(cls, arrival_rate: float, mean_service: float) -> "CharacteristicSpec":
        return cls(Characteristic.BUSY_PERIOD, arrival_rate=arrival_rate,
                   mean_service=mean_service)

    @classmethod
    def served_customers(cls, arrival_rate: float) -> "CharacteristicSpec":
        return cls(Characteristic.SERVED_CUSTOMERS, arrival_rate=arrival_rate)

    @classmethod
    def lost_customers(cls, arrival_rate: float, mean_service: float) -> "CharacteristicSpec":
        return cls(Characteristic.LOST_CUSTOMERS, arrival_rate=arrival_rate,
                   mean_service=mean_service)

    @classmethod
    def loss_probability(cls, service_rate: float) -> "CharacteristicSpec":
        return cls(Characteristic.LOSS_PROBABILITY, service_rate=service_rate)

    @property
    def weighting_rate(self) -> float:
        """Rate the moment coefficients must be weighted at."""
        if self.kind is Characteristic.LOSS_PROBABILITY:
            return self.service_rate
        return self.arrival_rate

    @property
    def seed(self) -> float:
        """Recursion seed Q_0 for this characteristic."""
        if self.kind is Characteristic.BUSY_PERIOD:
            return self.mean_service
        if self.kind is Characteristic.LOST_CUSTOMERS:
            return self.arrival_rate * self.mean_service - 1.0
        return 1.0

    def to_natural(self, q: float) -> float:
        """Map a recursion-scale value to the characteristic's own scale."""
        if self.kind is Characteristic.LOST_CUSTOMERS:
            return q + 1.0
        if self.kind is Characteristic.LOSS_PROBABILITY:
            return 1.0 / q
        return q


@dataclass(frozen=True, eq=False)
class RecursionResult:
    """Recursion-scale values Q_1..Q_n plus natural-scale values for levels
    0..n; ``sign_anomalies`` lists levels whose natural value is negative."""

    q_values: np.ndarray
    natural_values: np.ndarray
    order: int
    sign_anomalies: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        q = np.asarray(self.q_values, dtype=float)
        nat = np.asarray(self.natural_values, dtype=float)
        if q.size != self.order or nat.size != self.order + 1:
            raise ValueError("result sizes must match the recursion order")
        for arr in (q, nat):
            arr.setflags(write=False)
        object.__setattr__(self, "q_values", q)
        object.__setattr__(self, "natural_values", nat)


def solve_recursion(seed: float, moments: MomentVector, order: int) -> RecursionResult:
    """Run the convolution recursion up to the given level.

    Needs coefficients r_0..r_{order-1}; r_0 = 0 raises
    :class:`DegeneracyError` (every level divides by it).
    """
    if order < 1:
        raise ValueError("order must be at least 1")
    if moments.order < order - 1:
        raise ValueError(
            f"level {order} needs coefficients up to order {order - 1}, "
            f"got {moments.order}"
        )
    r = moments.values
    if r[0] == 0.0:
        raise DegeneracyError("leading moment coefficient is zero; cannot divide")
    q = np.empty(order + 1)
    q[0] = seed
    q[1] = seed / r[0]
    for k in range(2, order + 1):
        acc = (1.0 - r[1]) * q[k - 1]
        if k > 2:
            acc -= float(np.dot(r[2:k], q[k - 2:0:-1]))
        q[k] = acc / r[0]
    return RecursionResult(q_values=q[1:], natural_values=q.copy(), order=order)


def estimate_characteristic(
    spec: CharacteristicSpec, moments: MomentVector, order: int
) -> RecursionResult:
    """Point estimates of a characteristic for buffer levels 0..order.

    For the loss probability any non-positive recursion value makes the
    reciprocal meaningless and raises :class:`DegeneracyError`.
    """
    if moments.rate != spec.weighting_rate:
        raise ValueError(
            f"moment vector was built at rate {moments.rate}, but this "
            f"characteristic weights at rate {spec.weighting_rate}"
        )
    raw = solve_recursion(spec.seed, moments, order)
    if spec.kind is Characteristic.LOSS_PROBABILITY and np.any(raw.q_values <= 0.0):
        raise DegeneracyError(
            "loss-probability recursion produced a non-positive value; "
            "the reciprocal estimate is undefined"
        )
    full = np.concatenate(([spec.seed], raw.q_values))
    natural = np.array([spec.to_natural(float(v)) for v in full])
    anomalies = tuple(int(k) for k in np.flatnonzero(natural < 0.0))
    return RecursionResult(
        q_values=raw.q_values,
        natural_values=natural,
        order=order,
        sign_anomalies=anomalies,
    )
