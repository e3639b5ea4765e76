"""Zebra optimization: foraging toward the pioneer, then one of two defence strategies."""
import numpy as np

from ._common import init_noop as init, one_or_two  # noqa: F401

DEFAULTS = {"R": 0.01}


def step(state, evaluate, space, t, rng, p):
    x = state.positions
    n, d = x.shape
    pioneer = state.best_position
    cand = x + rng.random((n, d)) * (pioneer - one_or_two(rng, n) * x)
    cand, f = evaluate(cand)
    state.greedy(cand, f)

    x = state.positions
    escape = (rng.random(n) < 0.5)[:, None]
    flee = x + p["R"] * (2 * rng.random((n, d)) - 1) * (1 - t / state.iterations) * x
    attacked = x[rng.integers(n, size=n)]
    confront = x + rng.random((n, d)) * (attacked - one_or_two(rng, n) * x)
    cand, f = evaluate(np.where(escape, flee, confront))
    state.greedy(cand, f)
