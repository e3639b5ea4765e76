"""Osprey optimization: dive at a better fish, then carry it to a nearby spot."""
import numpy as np

from ._common import init_noop as init, one_or_two  # noqa: F401

DEFAULTS = {}


def step(state, evaluate, space, t, rng, p):
    x = state.positions
    fit = state.fitness
    n, d = x.shape
    order = np.argsort(fit, kind="stable")
    ranked = fit[order]
    n_better = np.searchsorted(ranked, fit, side="left")
    use_best = (n_better == 0) | (rng.random(n) < 0.5)
    pick = np.minimum((rng.random(n) * n_better).astype(int), np.maximum(n_better - 1, 0))
    fish = np.where(use_best[:, None], state.best_position, x[order[pick]])
    cand = x + rng.random((n, d)) * (fish - one_or_two(rng, n) * x)
    cand, f = evaluate(cand)
    state.greedy(cand, f)

    x = state.positions
    cand, f = evaluate(x + (space.lower + rng.random((n, d)) * space.width) / t)
    state.greedy(cand, f)
