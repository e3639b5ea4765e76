"""Gazelle optimization: grazing (Brownian) or fleeing (Lévy), then a predator-success jump."""
import numpy as np

from ._common import init_noop as init, levy  # noqa: F401

DEFAULTS = {"S": 0.88, "PSRs": 0.34, "levy_scale": 0.05, "levy_beta": 1.5}


def step(state, evaluate, space, t, rng, p):
    x = state.positions
    n, d = x.shape
    s = p["S"]
    frac = t / state.iterations
    cf = (1 - frac) ** (2 * frac)
    elite = state.best_position
    rl = p["levy_scale"] * levy(rng, (n, d), p["levy_beta"])
    rb = rng.standard_normal((n, d))
    big_r = rng.random((n, d))
    r = rng.random((n, d))
    idx = np.arange(n)
    mu = np.where(idx % 2 == 1, -1.0, 1.0)[:, None]
    second_half = (idx + 1 > n / 2)[:, None]

    graze = x + s * big_r * (rb * (elite - rb * x))
    chase = x + s * mu * cf * (rb * (rl * elite - x))
    run = x + s * mu * big_r * (rl * (elite - rl * x))
    cand = np.where(r > 0.5, graze, np.where(second_half, chase, run))
    cand, f = evaluate(cand)
    state.greedy(cand, f)

    x = state.positions
    if rng.random() < p["PSRs"]:
        u = rng.random((n, d)) < p["PSRs"]
        cand = x + cf * ((space.lower + rng.random((n, d)) * space.width) * u)
    else:
        rr = rng.random()
        cand = x + (p["PSRs"] * (1 - rr) + rr) * (x[rng.permutation(n)] - x[rng.permutation(n)])
    cand, f = evaluate(cand)
    state.greedy(cand, f)
