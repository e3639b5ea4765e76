"""Pelican optimization: move toward a random prey, then a shrinking local search."""
import numpy as np

from ._common import init_noop as init, one_or_two  # noqa: F401

DEFAULTS = {"R": 0.2}


def step(state, evaluate, space, t, rng, p):
    x = state.positions
    n, d = x.shape
    k = int(rng.integers(n))
    prey, prey_f = x[k].copy(), state.fitness[k]
    intensity = one_or_two(rng, n)
    r = rng.random((n, d))
    towards = (prey_f < state.fitness)[:, None]
    cand = np.where(towards, x + r * (prey - intensity * x), x + r * (x - prey))
    cand, f = evaluate(cand)
    state.greedy(cand, f)

    x = state.positions
    shrink = p["R"] * (1 - t / state.iterations)
    cand, f = evaluate(x + shrink * (2 * rng.random((n, d)) - 1) * x)
    state.greedy(cand, f)
