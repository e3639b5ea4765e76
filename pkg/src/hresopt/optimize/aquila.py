"""Aquila optimizer: two exploration moves for the first two thirds, two exploitation moves after."""
import numpy as np

from ._common import init_noop as init, levy  # noqa: F401

DEFAULTS = {"levy_scale": 0.01, "levy_beta": 1.5, "r1": 10.0, "U": 0.00565, "omega": 0.005,
            "alpha": 0.1, "delta": 0.1}


def step(state, evaluate, space, t, rng, p):
    x = state.positions
    n, d = x.shape
    big_t = state.iterations
    best = state.best_position
    frac = t / big_t
    pick_first = (rng.random(n) < 0.5)[:, None]
    if t <= 2 * big_t / 3:
        mean = x.mean(axis=0)
        expanded = best * (1 - frac) + (mean - best * rng.random((n, 1)))
        dims = np.arange(1, d + 1)
        theta = -p["omega"] * dims + 3 * np.pi / 2
        radius = p["r1"] + p["U"] * dims
        spiral = radius * np.cos(theta) - radius * np.sin(theta)
        partner = x[rng.integers(n, size=n)]
        narrowed = (best * p["levy_scale"] * levy(rng, (n, d), p["levy_beta"]) + partner
                    + spiral * rng.random((n, 1)))
        cand = np.where(pick_first, expanded, narrowed)
    else:
        mean = x.mean(axis=0)
        landing = ((best - mean) * p["alpha"] - rng.random((n, 1))
                   + (space.width * rng.random((n, 1)) + space.lower) * p["delta"])
        qf = t ** ((2 * rng.random((n, 1)) - 1) / max((1 - big_t) ** 2, 1))
        g1 = 2 * rng.random((n, 1)) - 1
        g2 = 2 * (1 - frac)
        grab = (qf * best - g1 * x * rng.random((n, 1))
                - g2 * p["levy_scale"] * levy(rng, (n, d), p["levy_beta"]) + rng.random((n, 1)) * g1)
        cand = np.where(pick_first, landing, grab)
    cand, f = evaluate(cand)
    state.greedy(cand, f)
