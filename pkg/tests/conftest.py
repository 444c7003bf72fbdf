import numpy as np
import pytest
from hypothesis import strategies as st

from netblotto.model import AccessibilityNetwork, GameSpec, StrategyProfile


@st.composite
def games(draw, max_n=5, max_m=5, with_cost=True):
    """A random spec with n, m <= 5 and a random valid profile on it."""
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, max_m))
    rows = []
    for _ in range(n):
        row = draw(st.lists(st.booleans(), min_size=m, max_size=m))
        if not any(row):
            row[draw(st.integers(0, m - 1))] = True
        rows.append(row)
    adj = np.array(rows)
    weights = draw(st.lists(st.floats(0.1, 5.0), min_size=m, max_size=m))
    r = draw(st.floats(0.0, 0.99))
    v = draw(st.floats(0.0, 2.0)) if with_cost else 0.0
    spec = GameSpec(AccessibilityNetwork(adj), np.array(weights), r, v)

    hunt = np.zeros((n, m))
    abstain = np.zeros(n)
    for i in range(n):
        raw = np.array(draw(st.lists(st.floats(0.0, 1.0), min_size=m + 1, max_size=m + 1)))
        raw[:m] *= adj[i]
        if raw.sum() == 0:
            raw[m] = 1.0
        raw /= raw.sum()
        hunt[i], abstain[i] = raw[:m], raw[m]
        # renormalizing by the float sum can leave ~1e-16 drift; absorb it into abstention
        abstain[i] = max(0.0, 1.0 - hunt[i].sum()) if abstain[i] > 0 else abstain[i]
    profile = StrategyProfile(hunt, abstain)
    profile.validate(spec.network)
    return spec, profile


def random_game(rng: np.random.Generator, n: int, m: int):
    """Non-hypothesis counterpart of :func:`games`, for seeded loops."""
    adj = rng.random((n, m)) < 0.6
    for i in range(n):
        if not adj[i].any():
            adj[i, rng.integers(m)] = True
    spec = GameSpec(AccessibilityNetwork(adj), rng.uniform(0.1, 3.0, m), rng.uniform(0, 0.95), rng.uniform(0, 1.5))
    raw = rng.random((n, m + 1))
    raw[:, :m] *= adj
    raw /= raw.sum(axis=1, keepdims=True)
    hunt = raw[:, :m]
    profile = StrategyProfile(hunt, 1.0 - hunt.sum(axis=1))
    return spec, profile


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, filled in by test_acceptance and echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
