"""Symmetric equilibria of the equal-weight game with a hunting cost.

Every player hunts with probability p, uniformly over its k accessible
fields, and otherwise abstains. Field values are 1, so the cost v is in
units of field value and abstaining is worth 0.

Regular topology (player i sees fields i..i+k-1, n = m): each field has
k-1 potential rivals of a hunter, each present with probability p/k, so
hunting is worth

    (1 - (1 - r) p / k) ** (k - 1).

Random topology (independent uniform k-subsets): each of the n-1 rivals
lands on a given field with probability p/m whatever k is, so hunting is
worth

    (1 - (1 - r) p / m) ** (n - 1).

At equilibrium either everyone hunts (cost below the full-participation
value) or players are indifferent, which pins p down in closed form.
"""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from typing import Iterable

from .errors import DomainError, InvalidDimensions, ParameterError


class Topology(str, enum.Enum):
    REGULAR = "regular"
    RANDOM = "random"


class Case(str, enum.Enum):
    BOTH_SATURATED = "BothSaturated"
    MIXED = "Mixed"
    BOTH_INTERIOR = "BothInterior"


@dataclass(frozen=True)
class SymmetricParams:
    n: int
    m: int
    k: int
    v: float
    r: float

    def __post_init__(self):
        if self.n < 2:
            raise InvalidDimensions(f"need n >= 2, got {self.n}")
        if not 1 <= self.k <= self.m:
            raise InvalidDimensions(f"need 1 <= k <= m, got k={self.k}, m={self.m}")
        if not (math.isfinite(self.v) and self.v >= 0):
            raise ParameterError(f"hunting cost must be finite and nonnegative, got {self.v}")
        if not 0.0 <= self.r < 1.0:
            raise ParameterError(f"tie factor must lie in [0, 1), got {self.r}")


@dataclass(frozen=True)
class TopologyComparison:
    s_reg: float
    s_rnd: float
    w_reg: float
    w_rnd: float
    case: Case
    p_reg: float
    p_rnd: float
    a_reg: float
    a_rnd: float


def participation_value(p: float, rivals: int, spread: int, r: float) -> float:
    """Worth of hunting one field when ``rivals`` others each land on it with probability p/spread."""
    return (1.0 - (1.0 - r) * p / spread) ** rivals


def _interior_prob(v: float, rivals: int, spread: int, r: float) -> float:
    # 1 - v**(1/rivals), via expm1 to keep precision when rivals is large
    return -spread * math.expm1(math.log(v) / rivals) / (1.0 - r)


def regular_threshold(k: int, r: float) -> float:
    if k < 1:
        raise InvalidDimensions(f"need k >= 1, got {k}")
    return participation_value(1.0, k - 1, k, r)


def regular_hunt_prob(params: SymmetricParams) -> float:
    k, v, r = params.k, params.v, params.r
    if v < regular_threshold(k, r):
        return 1.0
    if v >= 1.0 or k == 1:
        return 0.0
    return _interior_prob(v, k - 1, k, r)


def regular_survival(params: SymmetricParams) -> float:
    p = regular_hunt_prob(params)
    return (1.0 - p / params.k) ** params.k


def random_threshold(n: int, m: int, r: float) -> float:
    if n < 2 or m < 1:
        raise InvalidDimensions(f"need n >= 2 and m >= 1, got n={n}, m={m}")
    return participation_value(1.0, n - 1, m, r)


def random_hunt_prob(params: SymmetricParams) -> float:
    """Equilibrium hunting probability on the random topology; k plays no part."""
    n, m, v, r = params.n, params.m, params.v, params.r
    if v < random_threshold(n, m, r):
        return 1.0
    if v >= 1.0:
        return 0.0
    if v == 0.0:
        # threshold is 0 only for a single field with r = 0: hunting is free and weakly dominant
        return 1.0
    p = _interior_prob(v, n - 1, m, r)
    if not 0.0 <= p <= 1.0:
        raise ParameterError(f"interior hunting probability {p!r} outside [0, 1] at v={v} >= threshold")
    return p


def random_survival(params: SymmetricParams) -> float:
    p = random_hunt_prob(params)
    return (1.0 - p / params.m) ** params.n


def hunt_prob_limit(v: float, r: float) -> float:
    """Limit of the random-topology hunting probability as n = m grows.

    The raw value -ln(v) / (1 - r) is returned even when it exceeds 1; see
    :func:`hunt_prob_limit_saturated`.
    """
    if not v > 0:
        raise DomainError(f"limit needs v > 0, got {v}")
    if not 0.0 <= r < 1.0:
        raise ParameterError(f"tie factor must lie in [0, 1), got {r}")
    return -math.log(v) / (1.0 - r)


def hunt_prob_limit_saturated(v: float, r: float) -> bool:
    """True when the limit exceeds 1, i.e. large games sit on the everyone-hunts branch."""
    return hunt_prob_limit(v, r) > 1.0


def survival_growth_fn(x: float, v: float, r: float) -> float:
    """Interior-branch survival probability when a field has x potential hunters.

    Only meaningful as a probability where the interior branch is active,
    ``v >= (1 - (1 - r) / x) ** (x - 1)``. Elsewhere the bare formula is
    returned, unless its base goes negative, which raises DomainError.
    """
    if not x > 1:
        raise DomainError(f"need x > 1, got {x}")
    if not 0 < v <= 1:
        raise DomainError(f"need 0 < v <= 1, got {v}")
    base = 1.0 + math.expm1(math.log(v) / (x - 1)) / (1.0 - r)
    if base < 0:
        raise DomainError(f"f({x}) undefined at v={v}, r={r}: interior branch inactive")
    return base**x


def expected_net_payoff(topology: Topology | str, params: SymmetricParams) -> float:
    """Equilibrium net payoff per player.

    On an interior branch players are indifferent with abstaining, so the
    payoff is 0; on the saturated branch it is the full-participation value
    minus the cost.
    """
    topology = Topology(topology)
    if topology is Topology.REGULAR:
        threshold = regular_threshold(params.k, params.r)
    else:
        threshold = random_threshold(params.n, params.m, params.r)
    return threshold - params.v if params.v < threshold else 0.0


def compare_topologies(params: SymmetricParams) -> TopologyComparison:
    if params.m != params.n:
        raise ParameterError(f"topology comparison needs m = n, got n={params.n}, m={params.m}")
    if not 2 <= params.k < params.n:
        raise ParameterError(
            f"topology comparison needs 2 <= k < n, got k={params.k}, n={params.n} (k >= n makes both topologies complete)"
        )
    a_reg = regular_threshold(params.k, params.r)
    a_rnd = random_threshold(params.n, params.m, params.r)
    if params.v < a_rnd:
        case = Case.BOTH_SATURATED
    elif params.v < a_reg:
        case = Case.MIXED
    else:
        case = Case.BOTH_INTERIOR
    return TopologyComparison(
        s_reg=regular_survival(params),
        s_rnd=random_survival(params),
        w_reg=expected_net_payoff(Topology.REGULAR, params),
        w_rnd=expected_net_payoff(Topology.RANDOM, params),
        case=case,
        p_reg=regular_hunt_prob(params),
        p_rnd=random_hunt_prob(params),
        a_reg=a_reg,
        a_rnd=a_rnd,
    )


COMPARE_HEADER = ["v", "r", "k", "n", "case", "s_reg", "s_rnd", "w_reg", "w_rnd"]
CURVE_HEADER = ["x", "f_x"]


def write_compare_csv(params_list: Iterable[SymmetricParams], stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(COMPARE_HEADER)
    for params in params_list:
        c = compare_topologies(params)
        writer.writerow(
            [repr(params.v), repr(params.r), params.k, params.n, c.case.value]
            + [repr(x) for x in (c.s_reg, c.s_rnd, c.w_reg, c.w_rnd)]
        )


def write_curve_csv(xs: Iterable[int], v: float, r: float, stream) -> None:
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(CURVE_HEADER)
    for x in xs:
        writer.writerow([x, repr(survival_growth_fn(x, v, r))])
