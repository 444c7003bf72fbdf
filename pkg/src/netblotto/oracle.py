"""Brute-force reference computations.

Nothing here uses the factorized expectation in :mod:`netblotto.model` or
the linear algebra in :mod:`netblotto.ring`. Payoffs are evaluated term by
term from the winnings formula: a hunter of field j collects ``w_j`` times
a factor per opponent, 1 if that opponent stays off j and r if it is also on j.
"""

from __future__ import annotations

import itertools
import math
from typing import TYPE_CHECKING

import numpy as np

from .errors import InvalidDimensions, OutOfRange, TooLarge
from .model import GameSpec, StrategyProfile

if TYPE_CHECKING:
    from .ring import RingEquilibrium, RingGame

ENUMERATION_LIMIT = 10**7

ABSTAIN = -1


def _supports(hunt: np.ndarray, abstain: np.ndarray) -> list[list[tuple[int, float]]]:
    out = []
    for i in range(hunt.shape[0]):
        s = [(ABSTAIN, float(abstain[i]))] if abstain[i] > 0 else []
        s += [(int(j), float(hunt[i, j])) for j in range(hunt.shape[1]) if hunt[i, j] > 0]
        out.append(s)
    return out


def _winnings(weights, r: float, v: float, own: int, others) -> float:
    if own == ABSTAIN:
        return 0.0
    value = weights[own]
    for choice in others:
        value *= r if choice == own else 1.0
    return value - v


def _enumerate(weights, r, v, hunt, abstain, player: int, prune: bool) -> float:
    supports = _supports(hunt, abstain)
    own = supports[player]
    opponents = [s for p, s in enumerate(supports) if p != player]
    if prune:
        fields = {a for a, _ in own if a != ABSTAIN}
        opponents = [s for s in opponents if any(a in fields for a, _ in s)]
    size = math.prod(len(s) for s in opponents)
    if size > ENUMERATION_LIMIT:
        raise TooLarge(f"enumeration over {size} opponent profiles exceeds {ENUMERATION_LIMIT}")
    total = 0.0
    for combo in itertools.product(*opponents):
        weight = math.prod(q for _, q in combo)
        choices = [a for a, _ in combo]
        for a, q in own:
            total += q * weight * _winnings(weights, r, v, a, choices)
    return total


def brute_force_payoff(spec: GameSpec, profile: StrategyProfile, player: int) -> float:
    """Exact expected net payoff of ``player`` by full enumeration of opponents' pure profiles."""
    profile.validate(spec.network)
    return _enumerate(
        spec.weights, spec.tie_factor, spec.hunting_cost, profile.hunt, profile.abstain, player, prune=False
    )


def ring_matrix(n: int) -> list[list[int]]:
    """The 0/1 circulant with ones on the two cyclic off-diagonals."""
    return [[1 if (j - i) % n in (1, n - 1) else 0 for j in range(n)] for i in range(n)]


def integer_determinant(a: list[list[int]]) -> int:
    """Fraction-free (Bareiss) elimination; exact for integer matrices."""
    a = [list(map(int, row)) for row in a]
    n = len(a)
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def brute_force_determinant(n: int) -> int:
    if not 3 <= n <= 12:
        raise InvalidDimensions(f"brute_force_determinant supports 3 <= n <= 12, got {n}")
    return integer_determinant(ring_matrix(n))


def _ring_hunt(n: int, p) -> np.ndarray:
    hunt = np.zeros((n, n))
    for i in range(n):
        hunt[i, i] = p[i]
        hunt[i, (i + 1) % n] = 1.0 - p[i]
    return hunt


def grid_best_response(ring: "RingGame", eq: "RingEquilibrium", player: int, grid_size: int) -> tuple[float, float]:
    """Scan the player's own mixing probability on an even grid over [0, 1].

    Returns ``(best payoff on the grid, payoff at the equilibrium's own p)``.
    """
    if grid_size < 2:
        raise InvalidDimensions("grid_size must be at least 2")
    p = np.asarray(eq.p, dtype=float)
    if np.any(p < 0) or np.any(p > 1):
        raise OutOfRange("ring probabilities must lie in [0, 1]")
    n = ring.n
    w, r = np.asarray(ring.weights, dtype=float), ring.tie_factor

    def payoff_at(x: float) -> float:
        q = p.copy()
        q[player] = x
        hunt = _ring_hunt(n, q)
        return _enumerate(w, r, 0.0, hunt, np.zeros(n), player, prune=True)

    best = max(payoff_at(x) for x in np.linspace(0.0, 1.0, grid_size))
    return best, payoff_at(float(p[player]))
