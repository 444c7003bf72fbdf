"""Game data types and payoff evaluation for the Boolean network Blotto game.

Players ("cheetahs") each hold one indivisible unit of effort and either
abstain or hunt one field ("gazelle") they can access. A field entered by
``c`` players pays each entrant ``w * r**(c - 1)``; a field nobody enters
pays nothing, and every hunting player pays the hunting cost ``v``.

Indices are 0-based throughout the library. Player ``i`` of the 0-based API
is player ``i + 1`` in 1-based labels, and likewise for fields.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import InvalidAction, InvalidDimensions, InvalidProfile, ParameterError

PROB_TOL = 1e-12


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class AccessibilityNetwork:
    """Bipartite player/field adjacency; ``adjacency[i, j]`` iff player i can hunt field j."""

    adjacency: np.ndarray

    def __post_init__(self):
        adj = np.array(self.adjacency, dtype=bool)
        if adj.ndim != 2 or adj.shape[0] < 1 or adj.shape[1] < 1:
            raise InvalidDimensions(f"adjacency must be a non-empty n x m matrix, got shape {adj.shape}")
        empty = np.flatnonzero(~adj.any(axis=1))
        if empty.size:
            raise InvalidDimensions(f"players {empty.tolist()} cannot access any field")
        object.__setattr__(self, "adjacency", _frozen(adj))

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    @property
    def m(self) -> int:
        return self.adjacency.shape[1]

    def accessible(self, player: int) -> np.ndarray:
        return np.flatnonzero(self.adjacency[player])

    def __eq__(self, other):
        if not isinstance(other, AccessibilityNetwork):
            return NotImplemented
        return np.array_equal(self.adjacency, other.adjacency)


@dataclass(frozen=True, eq=False)
class GameSpec:
    """A full game instance: network, field weights, tie factor and hunting cost."""

    network: AccessibilityNetwork
    weights: np.ndarray
    tie_factor: float = 0.5
    hunting_cost: float = 0.0

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        if w.shape != (self.network.m,):
            raise InvalidDimensions(f"expected {self.network.m} weights, got shape {w.shape}")
        if not np.all(np.isfinite(w)) or np.any(w <= 0):
            raise ParameterError("weights must be finite and strictly positive")
        r, v = float(self.tie_factor), float(self.hunting_cost)
        if not (0.0 <= r < 1.0):
            raise ParameterError(f"tie factor must lie in [0, 1), got {r}")
        if not (math.isfinite(v) and v >= 0.0):
            raise ParameterError(f"hunting cost must be finite and nonnegative, got {v}")
        object.__setattr__(self, "weights", _frozen(w))
        object.__setattr__(self, "tie_factor", r)
        object.__setattr__(self, "hunting_cost", v)

    @property
    def n(self) -> int:
        return self.network.n

    @property
    def m(self) -> int:
        return self.network.m

    def __eq__(self, other):
        if not isinstance(other, GameSpec):
            return NotImplemented
        return (
            self.network == other.network
            and np.array_equal(self.weights, other.weights)
            and self.tie_factor == other.tie_factor
            and self.hunting_cost == other.hunting_cost
        )


@dataclass(frozen=True)
class PureAction:
    """Abstain (``field is None``) or hunt a single field."""

    field: int | None = None

    @classmethod
    def hunt(cls, field: int) -> "PureAction":
        return cls(int(field))

    @property
    def is_abstain(self) -> bool:
        return self.field is None

    def __str__(self):
        return "Abstain" if self.field is None else f"Hunt({self.field})"


ABSTAIN = PureAction()


@dataclass(frozen=True, eq=False)
class StrategyProfile:
    """Independent mixed strategies, one row per player.

    ``hunt[i, j]`` is the probability that player i hunts field j and
    ``abstain[i]`` the probability that it stays home.
    """

    hunt: np.ndarray
    abstain: np.ndarray

    def __post_init__(self):
        h = np.array(self.hunt, dtype=float)
        a = np.array(self.abstain, dtype=float)
        if h.ndim != 2 or a.shape != (h.shape[0],):
            raise InvalidProfile(f"inconsistent profile shapes {h.shape} and {a.shape}")
        object.__setattr__(self, "hunt", _frozen(h))
        object.__setattr__(self, "abstain", _frozen(a))

    @property
    def n(self) -> int:
        return self.hunt.shape[0]

    @classmethod
    def from_hunt(cls, hunt) -> "StrategyProfile":
        """Build a profile whose abstention probability is whatever mass ``hunt`` leaves over."""
        h = np.asarray(hunt, dtype=float)
        return cls(h, 1.0 - h.sum(axis=1))

    @classmethod
    def pure(cls, m: int, actions: Sequence[PureAction]) -> "StrategyProfile":
        h = np.zeros((len(actions), m))
        a = np.zeros(len(actions))
        for i, act in enumerate(actions):
            if act.is_abstain:
                a[i] = 1.0
            else:
                h[i, act.field] = 1.0
        return cls(h, a)

    @classmethod
    def uniform_hunting(cls, network: AccessibilityNetwork, hunt_prob: float) -> "StrategyProfile":
        """Every player hunts with ``hunt_prob``, spread evenly over its accessible fields."""
        adj = network.adjacency.astype(float)
        h = hunt_prob * adj / adj.sum(axis=1, keepdims=True)
        return cls(h, np.full(network.n, 1.0 - hunt_prob))

    def validate(self, network: AccessibilityNetwork) -> None:
        if self.hunt.shape != network.adjacency.shape:
            raise InvalidProfile(f"profile shape {self.hunt.shape} does not match network {network.adjacency.shape}")
        if not (np.all(np.isfinite(self.hunt)) and np.all(np.isfinite(self.abstain))):
            raise InvalidProfile("profile contains non-finite probabilities")
        if np.any(self.hunt < 0) or np.any(self.abstain < 0):
            raise InvalidProfile("profile contains negative probabilities")
        stray = np.argwhere((self.hunt > 0) & ~network.adjacency)
        if stray.size:
            i, j = stray[0]
            raise InvalidProfile(f"player {i} puts mass on inaccessible field {j}")
        totals = self.hunt.sum(axis=1) + self.abstain
        bad = np.flatnonzero(np.abs(totals - 1.0) > PROB_TOL)
        if bad.size:
            i = bad[0]
            raise InvalidProfile(f"player {i} probabilities sum to {totals[i]!r}, not 1")

    def support(self, player: int) -> list[tuple[PureAction, float]]:
        """Actions with positive probability, abstention first."""
        out = []
        if self.abstain[player] > 0:
            out.append((ABSTAIN, float(self.abstain[player])))
        for j in np.flatnonzero(self.hunt[player] > 0):
            out.append((PureAction.hunt(j), float(self.hunt[player, j])))
        return out


def realized_payoffs(spec: GameSpec, actions: Sequence[PureAction]) -> np.ndarray:
    """Net payoff of every player under one pure action profile."""
    if len(actions) != spec.n:
        raise InvalidAction(f"expected {spec.n} actions, got {len(actions)}")
    adj = spec.network.adjacency
    counts = np.zeros(spec.m, dtype=int)
    for i, act in enumerate(actions):
        if act.is_abstain:
            continue
        if not (0 <= act.field < spec.m) or not adj[i, act.field]:
            raise InvalidAction(f"player {i} cannot hunt field {act.field}")
        counts[act.field] += 1
    out = np.zeros(spec.n)
    r, v = spec.tie_factor, spec.hunting_cost
    for i, act in enumerate(actions):
        if not act.is_abstain:
            j = act.field
            out[i] = spec.weights[j] * r ** (counts[j] - 1) - v
    return out


def _check_player(spec: GameSpec, player: int) -> int:
    player = int(player)
    if not 0 <= player < spec.n:
        raise InvalidDimensions(f"player index {player} out of range for n={spec.n}")
    return player


def hunt_values(spec: GameSpec, profile: StrategyProfile, player: int) -> np.ndarray:
    """Expected net payoff of ``Hunt(j)`` for each field j, with opponents mixing per ``profile``.

    Opponents act independently, so the chance that nobody else spoils a
    tie-free win factorizes: each opponent on field j contributes a factor
    ``1 - (1 - r) * q`` where q is its probability of hunting j. Entries for
    inaccessible fields are computed all the same; callers filter by adjacency.
    """
    profile.validate(spec.network)
    player = _check_player(spec, player)
    factors = 1.0 - (1.0 - spec.tie_factor) * profile.hunt
    others = np.delete(factors, player, axis=0)
    return spec.weights * np.prod(others, axis=0) - spec.hunting_cost


def expected_payoff(spec: GameSpec, profile: StrategyProfile, player: int) -> float:
    values = hunt_values(spec, profile, player)
    return float(np.dot(profile.hunt[player], values))


def expected_payoffs(spec: GameSpec, profile: StrategyProfile) -> np.ndarray:
    return np.array([expected_payoff(spec, profile, i) for i in range(spec.n)])


def deviation_gain(spec: GameSpec, profile: StrategyProfile, player: int) -> tuple[float, PureAction]:
    """Best pure-action improvement available to ``player`` and an action achieving it.

    The gain is never meaningfully negative: a mixture cannot beat its best
    support element. Ties go to the first candidate in the order
    Abstain, Hunt(0), Hunt(1), ...
    """
    values = hunt_values(spec, profile, player)
    current = float(np.dot(profile.hunt[player], values))
    best, best_action = 0.0, ABSTAIN
    for j in spec.network.accessible(player):
        if values[j] > best:
            best, best_action = float(values[j]), PureAction.hunt(j)
    return best - current, best_action


def make_regular_network(n: int, m: int, k: int) -> AccessibilityNetwork:
    """Player i accesses fields i, i+1, ..., i+k-1 (mod m).

    In 1-based labels player i gets fields i..i+k-1, so the 0-based layout here
    is the same band shifted by one in both indices.
    """
    if n < 1 or m < 1 or not 1 <= k <= m:
        raise InvalidDimensions(f"need n, m >= 1 and 1 <= k <= m, got n={n}, m={m}, k={k}")
    adj = np.zeros((n, m), dtype=bool)
    for i in range(n):
        adj[i, [(i + d) % m for d in range(k)]] = True
    return AccessibilityNetwork(adj)


def make_random_network(n: int, m: int, k: int, seed: int) -> AccessibilityNetwork:
    """Each player draws an independent uniformly random k-subset of the fields."""
    if n < 1 or m < 1 or not 1 <= k <= m:
        raise InvalidDimensions(f"need n, m >= 1 and 1 <= k <= m, got n={n}, m={m}, k={k}")
    rng = np.random.default_rng(seed)
    adj = np.zeros((n, m), dtype=bool)
    for i in range(n):
        adj[i, rng.choice(m, size=k, replace=False)] = True
    return AccessibilityNetwork(adj)


# -- JSON ------------------------------------------------------------------


def _reject_constant(name):
    raise ParameterError(f"non-finite number {name} is not allowed")


def _loads(text: str):
    return json.loads(text, parse_constant=_reject_constant)


def spec_to_dict(spec: GameSpec) -> dict:
    return {
        "n": spec.n,
        "m": spec.m,
        "adjacency": spec.network.adjacency.astype(int).tolist(),
        "weights": spec.weights.tolist(),
        "r": spec.tie_factor,
        "v": spec.hunting_cost,
    }


def spec_from_dict(doc: dict) -> GameSpec:
    try:
        n, m = int(doc["n"]), int(doc["m"])
        adj = np.array(doc["adjacency"])
        weights = doc["weights"]
        r = doc["r"]
        v = doc.get("v", 0.0)
    except (KeyError, TypeError) as exc:
        raise ParameterError(f"malformed game spec: {exc}") from None
    if adj.shape != (n, m):
        raise InvalidDimensions(f"adjacency shape {adj.shape} does not match n={n}, m={m}")
    if not np.isin(adj, (0, 1)).all():
        raise ParameterError("adjacency entries must be 0 or 1")
    for x in [*weights, r, v]:
        if isinstance(x, bool) or not isinstance(x, (int, float)):
            raise ParameterError(f"expected a number, got {x!r}")
    return GameSpec(AccessibilityNetwork(adj.astype(bool)), np.array(weights, dtype=float), float(r), float(v))


def dumps_spec(spec: GameSpec) -> str:
    return json.dumps(spec_to_dict(spec), indent=2)


def loads_spec(text: str) -> GameSpec:
    doc = _loads(text)
    if not isinstance(doc, dict):
        raise ParameterError("game spec must be a JSON object")
    return spec_from_dict(doc)


def load_spec(path) -> GameSpec:
    return loads_spec(Path(path).read_text())


def profile_to_dict(profile: StrategyProfile) -> dict:
    return {"hunt": profile.hunt.tolist(), "abstain": profile.abstain.tolist()}


def profile_from_dict(doc: dict) -> StrategyProfile:
    try:
        return StrategyProfile(np.array(doc["hunt"], dtype=float), np.array(doc["abstain"], dtype=float))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidProfile(f"malformed profile: {exc}") from None


def load_profile(path) -> StrategyProfile:
    doc = _loads(Path(path).read_text())
    if not isinstance(doc, dict):
        raise InvalidProfile("profile must be a JSON object")
    return profile_from_dict(doc)
