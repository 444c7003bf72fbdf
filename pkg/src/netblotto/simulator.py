"""Monte Carlo play of the network Blotto game.

Reproducibility contract: replications are grouped into fixed blocks of
``BLOCK`` consecutive indices. Block b draws from a Philox stream keyed by
the seed with counter (0, 0, 0, b), so what replication t sees depends only
on (seed, t). Blocks may run on any number of worker threads; their
statistics are merged in block order, which makes reports bit-identical
whatever the parallelism.

Survival is pooled over fields: each replication contributes the fraction
of fields nobody entered, and the standard error is taken across
replications.
"""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDimensions, ParameterError
from ._kernels import play_profile_block, play_random_block
from .model import GameSpec, PureAction, StrategyProfile, deviation_gain, make_random_network

BLOCK = 8192
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class SimConfig:
    replications: int
    seed: int = 0
    topology_resample: bool = True
    workers: int = 1

    def __post_init__(self):
        if self.replications < 1:
            raise ParameterError(f"replications must be >= 1, got {self.replications}")
        if self.workers < 1:
            raise ParameterError(f"workers must be >= 1, got {self.workers}")


@dataclass(frozen=True)
class SimReport:
    mean_payoffs: np.ndarray
    payoff_stderr: np.ndarray
    survival_rate: float
    survival_stderr: float
    replications: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "mean_payoffs": [float(x) for x in self.mean_payoffs],
            "payoff_stderr": [float(x) for x in self.payoff_stderr],
            "survival_rate": float(self.survival_rate),
            "survival_stderr": float(self.survival_stderr),
            "replications": self.replications,
            "seed": self.seed,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def block_generator(seed: int, block: int) -> np.random.Generator:
    bitgen = np.random.Philox(key=int(seed) & _MASK64, counter=[0, 0, 0, block])
    return np.random.Generator(bitgen)


@dataclass
class _Moments:
    """Count, mean and sum of squared deviations, merged with Chan's pairwise update."""

    count: int = 0
    mean: np.ndarray | float = 0.0
    m2: np.ndarray | float = 0.0

    def merge(self, other: "_Moments") -> "_Moments":
        if self.count == 0:
            return other
        total = self.count + other.count
        delta = other.mean - self.mean
        mean = self.mean + delta * (other.count / total)
        m2 = self.m2 + other.m2 + delta**2 * (self.count * other.count / total)
        return _Moments(total, mean, m2)

    def stderr(self):
        if self.count < 2:
            return np.zeros_like(np.asarray(self.mean, dtype=float))
        return np.sqrt(self.m2 / (self.count - 1) / self.count)


def _tie_values(n: int, r: float) -> np.ndarray:
    # entry c is what each of c entrants on a field gets per unit weight; entry 0 is unused
    return r ** np.maximum(np.arange(n + 1) - 1, 0).astype(float)


def _run_blocks(work, config: SimConfig, n: int) -> SimReport:
    blocks = [(b, min(BLOCK, config.replications - b * BLOCK)) for b in range(-(-config.replications // BLOCK))]

    def one(block):
        index, size = block
        mean, m2, s_mean, s_m2 = work(block_generator(config.seed, index), size)
        return _Moments(size, mean, m2), _Moments(size, s_mean, s_m2)

    if config.workers > 1 and len(blocks) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            results = list(pool.map(one, blocks))
    else:
        results = [one(b) for b in blocks]

    pay, surv = _Moments(), _Moments()
    for p, s in results:
        pay, surv = pay.merge(p), surv.merge(s)
    return SimReport(
        mean_payoffs=np.asarray(pay.mean, dtype=float).reshape(n),
        payoff_stderr=np.asarray(pay.stderr(), dtype=float).reshape(n),
        survival_rate=float(surv.mean),
        survival_stderr=float(surv.stderr()),
        replications=config.replications,
        seed=config.seed,
    )


def simulate(spec: GameSpec, profile: StrategyProfile, config: SimConfig) -> SimReport:
    """Sample independent play from ``profile`` and average realized payoffs.

    Replication t uses one uniform per player, mapped to an action by
    inverse CDF over that player's support (abstain first, then fields in
    index order).
    """
    profile.validate(spec.network)
    n, m = spec.n, spec.m
    supports = [profile.support(i) for i in range(n)]
    width = max(len(s) for s in supports)
    cum = np.full((n, width), np.inf)
    codes = np.full((n, width), m, dtype=np.int64)
    widths = np.array([len(s) for s in supports], dtype=np.int64)
    for i, support in enumerate(supports):
        codes[i, : len(support)] = [m if a.is_abstain else a.field for a, _ in support]
        cum[i, : len(support) - 1] = np.cumsum([q for _, q in support])[:-1]
    weights_ext = np.append(spec.weights, 0.0)
    tie_value = _tie_values(n, spec.tie_factor)

    def work(rng, size):
        u = rng.random((size, n))
        return play_profile_block(u, cum, codes, widths, weights_ext, tie_value, m, spec.hunting_cost)

    return _run_blocks(work, config, n)


def simulate_random_ensemble(
    n: int, m: int, k: int, v: float, r: float, hunt_prob: float, config: SimConfig
) -> SimReport:
    """Play the symmetric profile on k-random access networks.

    Every player hunts with probability ``hunt_prob``, choosing uniformly
    among its k accessible fields. With ``topology_resample`` every
    replication draws fresh access sets for all players; otherwise one
    network drawn from the seed is held fixed and the game is simulated on it.
    """
    if n < 1 or m < 1 or not 1 <= k <= m:
        raise InvalidDimensions(f"need n, m >= 1 and 1 <= k <= m, got n={n}, m={m}, k={k}")
    if not 0.0 <= hunt_prob <= 1.0:
        raise ParameterError(f"hunt probability must lie in [0, 1], got {hunt_prob}")
    if not config.topology_resample:
        network = make_random_network(n, m, k, config.seed)
        spec = GameSpec(network, np.ones(m), r, v)
        return simulate(spec, StrategyProfile.uniform_hunting(network, hunt_prob), config)

    weights_ext = np.append(np.ones(m), 0.0)
    tie_value = _tie_values(n, r)

    def work(rng, size):
        u = rng.random((size, n, k + 2))
        return play_random_block(u, m, k, float(hunt_prob), weights_ext, tie_value, float(v))

    return _run_blocks(work, config, n)


@dataclass(frozen=True)
class EquilibriumReport:
    gains: np.ndarray
    improving_actions: list[PureAction]
    tolerance: float
    max_gain: float = field(init=False)
    is_equilibrium: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "max_gain", float(np.max(self.gains)))
        object.__setattr__(self, "is_equilibrium", self.max_gain <= self.tolerance)

    def to_dict(self) -> dict:
        return {
            "gains": [float(g) for g in self.gains],
            "best_actions": [str(a) for a in self.improving_actions],
            "max_gain": self.max_gain,
            "tolerance": self.tolerance,
            "epsilon_equilibrium": self.is_equilibrium,
        }


def verify_equilibrium(spec: GameSpec, profile: StrategyProfile, tolerance: float) -> EquilibriumReport:
    """Exact per-player deviation gains; no sampling involved."""
    results = [deviation_gain(spec, profile, i) for i in range(spec.n)]
    return EquilibriumReport(
        gains=np.array([g for g, _ in results]),
        improving_actions=[a for _, a in results],
        tolerance=float(tolerance),
    )
