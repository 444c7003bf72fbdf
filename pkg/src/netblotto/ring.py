"""Interior equilibria of the 2-regular ring game.

On the ring, player i can hunt field i or field i+1 (mod n), so a mixed
strategy is a single number p_i, the probability of hunting field i.
At an interior equilibrium every player is indifferent between its two
fields:

    w_i (r + (1 - r) p_{i-1}) = w_{i+1} (1 - (1 - r) p_{i+1})

which is linear in p. Dividing through by (1 - r) gives rows with
coefficients w_i at column i-1 and w_{i+1} at column i+1, and right-hand
side (w_{i+1} - r w_i) / (1 - r). At r = 1/2 this is
``w_i p_{i-1} + w_{i+1} p_{i+1} = 2 w_{i+1} - w_i``.
"""

from __future__ import annotations

import csv
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .errors import InvalidDimensions, OutOfRange, ParameterError, SingularSystem
from .model import GameSpec, StrategyProfile, expected_payoffs, make_regular_network

PIVOT_TOL = 1e-10
RESIDUAL_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class RingGame:
    n: int
    weights: np.ndarray
    tie_factor: float = 0.5

    def __post_init__(self):
        if self.n < 3:
            raise InvalidDimensions(f"ring needs n >= 3, got {self.n}")
        w = np.array(self.weights, dtype=float)
        if w.shape != (self.n,):
            raise InvalidDimensions(f"expected {self.n} weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ParameterError("weights must be finite and strictly positive")
        if not 0.0 <= self.tie_factor < 1.0:
            raise ParameterError(f"tie factor must lie in [0, 1), got {self.tie_factor}")
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)

    @classmethod
    def equal(cls, n: int, tie_factor: float = 0.5) -> "RingGame":
        return cls(n, np.ones(n), tie_factor)

    @classmethod
    def arithmetic(cls, n: int, epsilon: float, tie_factor: float = 0.5) -> "RingGame":
        return cls(n, arithmetic_weights(n, epsilon), tie_factor)

    def spec(self) -> GameSpec:
        """The same game as a general :class:`GameSpec` (no hunting cost)."""
        return GameSpec(make_regular_network(self.n, self.n, 2), self.weights, self.tie_factor, 0.0)


@dataclass(frozen=True, eq=False)
class RingEquilibrium:
    p: np.ndarray
    residual: float
    interior: bool


def arithmetic_weights(n: int, epsilon: float) -> np.ndarray:
    """Weights 1 + (j - ceil(n/2)) * epsilon for 1-based field labels j."""
    if epsilon < 0 or epsilon >= 2.0 / n:
        raise ParameterError(f"epsilon must lie in [0, 2/n) = [0, {2.0 / n:g}), got {epsilon}")
    centre = math.ceil(n / 2)
    return np.array([1.0 + (j - centre) * epsilon for j in range(1, n + 1)])


def indifference_system(ring: RingGame) -> tuple[np.ndarray, np.ndarray]:
    n, w, r = ring.n, ring.weights, ring.tie_factor
    a = np.zeros((n, n))
    b = np.zeros(n)
    for i in range(n):
        nxt = (i + 1) % n
        a[i, (i - 1) % n] += w[i]
        a[i, nxt] += w[nxt]
        b[i] = (w[nxt] - r * w[i]) / (1.0 - r)
    return a, b


def is_invertible_ring(n: int) -> bool:
    if n < 3:
        raise InvalidDimensions(f"ring needs n >= 3, got {n}")
    return n % 4 != 0


def solve_ring(ring: RingGame) -> RingEquilibrium:
    """Solve the indifference system by pivoted LU.

    Singularity is judged from the LU pivots alone, so the n mod 4 rule stays
    something to test rather than an assumption. A solution outside (0, 1)
    is still returned, flagged ``interior=False``; it satisfies the
    indifference equations but is not a strategy profile.
    """
    a, b = indifference_system(ring)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a)
    scale = np.abs(a).max()
    if np.abs(np.diag(lu)).min() < PIVOT_TOL * scale:
        raise SingularSystem(ring.n)
    p = scipy.linalg.lu_solve((lu, piv), b)
    residual = float(np.abs(a @ p - b).max())
    if not residual <= RESIDUAL_TOL:
        raise SingularSystem(ring.n, f"ill-conditioned indifference system for n={ring.n}: residual {residual:.3g}")
    interior = bool(np.all((p > 0) & (p < 1)))
    return RingEquilibrium(p, residual, interior)


def to_profile(ring: RingGame, eq: RingEquilibrium) -> StrategyProfile:
    p = np.asarray(eq.p, dtype=float)
    if p.shape != (ring.n,):
        raise InvalidDimensions(f"expected {ring.n} probabilities, got shape {p.shape}")
    if np.any(p < 0) or np.any(p > 1):
        raise OutOfRange(f"ring probabilities must lie in [0, 1], got {p.tolist()}")
    n = ring.n
    hunt = np.zeros((n, n))
    idx = np.arange(n)
    hunt[idx, idx] = p
    hunt[idx, (idx + 1) % n] = 1.0 - p
    return StrategyProfile(hunt, np.zeros(n))


def ring_survival(p) -> np.ndarray:
    """Per-field probability of being left alone: player j-1 stays on j-1 and player j moves on."""
    p = np.asarray(p, dtype=float)
    return np.roll(p, 1) * (1.0 - p)


def ring_payoffs(ring: RingGame, eq: RingEquilibrium) -> np.ndarray:
    """Expected payoffs at the solved profile.

    Inside [0, 1] this goes through the general payoff evaluator. Outside,
    there is no profile; the value reported is the common worth of player i's
    two actions under the indifference solution, w_i (r + (1 - r) p_{i-1}).
    """
    p = np.asarray(eq.p, dtype=float)
    if np.all((p >= 0) & (p <= 1)):
        return expected_payoffs(ring.spec(), to_profile(ring, eq))
    r = ring.tie_factor
    return ring.weights * (r + (1.0 - r) * np.roll(p, 1))


@dataclass(frozen=True)
class SweepRow:
    epsilon: float
    p: np.ndarray
    payoffs: np.ndarray
    average_payoff: float
    survival_rate: float
    interior: bool


def dispersion_sweep(n: int, epsilon_grid: Iterable[float], tie_factor: float = 0.5) -> list[SweepRow]:
    rows = []
    for eps in epsilon_grid:
        ring = RingGame.arithmetic(n, float(eps), tie_factor)
        eq = solve_ring(ring)
        payoffs = ring_payoffs(ring, eq)
        rows.append(
            SweepRow(
                epsilon=float(eps),
                p=eq.p,
                payoffs=payoffs,
                average_payoff=float(payoffs.mean()),
                survival_rate=float(ring_survival(eq.p).mean()),
                interior=eq.interior,
            )
        )
    return rows


def sweep_header(n: int) -> list[str]:
    return (
        ["epsilon", "avg_payoff", "survival_rate"]
        + [f"p_{i}" for i in range(1, n + 1)]
        + [f"payoff_{i}" for i in range(1, n + 1)]
    )


def write_sweep_csv(rows: Sequence[SweepRow], n: int, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(sweep_header(n))
    for row in rows:
        values = [row.epsilon, row.average_payoff, row.survival_rate, *row.p, *row.payoffs]
        writer.writerow([repr(float(x)) for x in values])
