"""Compiled inner loops for the simulator.

Kernels consume pre-drawn uniforms only and never touch an RNG themselves,
so the random numbers behind every replication are fixed by the caller's
stream layout. Each kernel plays one block and returns its moments:
per-player payoff mean and sum of squared deviations, and the same pair for
the per-replication survival fraction.
"""

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def _score_replication(actions, counts, weights_ext, tie_value, m, v, payoffs_row):
    # weights_ext[m] == 0, so abstainers score 0 without a branch
    n = actions.shape[0]
    for i in range(n):
        a = actions[i]
        payoffs_row[i] = weights_ext[a] * tie_value[counts[a]] - v * (a < m)
    empty = 0
    for j in range(m):
        if counts[j] == 0:
            empty += 1
    return empty / m


@njit(cache=True, nogil=True)
def _moments(payoffs, survival):
    size, n = payoffs.shape
    mean = np.zeros(n)
    m2 = np.zeros(n)
    for b in range(size):
        for i in range(n):
            mean[i] += payoffs[b, i]
    for i in range(n):
        mean[i] /= size
    for b in range(size):
        for i in range(n):
            d = payoffs[b, i] - mean[i]
            m2[i] += d * d
    s_mean = 0.0
    for b in range(size):
        s_mean += survival[b]
    s_mean /= size
    s_m2 = 0.0
    for b in range(size):
        d = survival[b] - s_mean
        s_m2 += d * d
    return mean, m2, s_mean, s_m2


@njit(cache=True, nogil=True)
def play_profile_block(u, cum, codes, widths, weights_ext, tie_value, m, v):
    """Inverse-CDF sampling of each player's action from ``u[b, i]``.

    ``cum[i, :widths[i] - 1]`` holds player i's cumulative support
    probabilities and ``codes[i, s]`` the action of support element s
    (a field index, or m for abstain).
    """
    size, n = u.shape
    payoffs = np.empty((size, n))
    survival = np.empty(size)
    actions = np.empty(n, dtype=np.int64)
    counts = np.zeros(m + 1, dtype=np.int64)
    for b in range(size):
        counts[:] = 0
        for i in range(n):
            x = u[b, i]
            s = 0
            for c in range(widths[i] - 1):
                s += x >= cum[i, c]
            a = codes[i, s]
            actions[i] = a
            counts[a] += 1
        survival[b] = _score_replication(actions, counts, weights_ext, tie_value, m, v, payoffs[b])
    return _moments(payoffs, survival)


@njit(cache=True, nogil=True)
def play_random_block(u, m, k, hunt_prob, weights_ext, tie_value, v):
    """Symmetric play on freshly drawn k-random access sets.

    Per player, ``u[b, i, :k]`` drives Floyd's k-subset sampler,
    ``u[b, i, k]`` the hunt/abstain decision and ``u[b, i, k + 1]`` which of
    the k accessible fields is hunted.
    """
    size, n, _ = u.shape
    payoffs = np.empty((size, n))
    survival = np.empty(size)
    actions = np.empty(n, dtype=np.int64)
    counts = np.zeros(m + 1, dtype=np.int64)
    chosen = np.empty(k, dtype=np.int64)
    for b in range(size):
        counts[:] = 0
        for i in range(n):
            for step in range(k):
                j = m - k + step
                t = min(int(u[b, i, step] * (j + 1)), j)
                for s in range(step):
                    if chosen[s] == t:
                        t = j
                        break
                chosen[step] = t
            if u[b, i, k] < hunt_prob:
                a = chosen[min(int(u[b, i, k + 1] * k), k - 1)]
            else:
                a = m
            actions[i] = a
            counts[a] += 1
        survival[b] = _score_replication(actions, counts, weights_ext, tie_value, m, v, payoffs[b])
    return _moments(payoffs, survival)
