"""Dandelion optimizer: rising, descending and landing stages; the population is replaced each generation."""
import numpy as np

from ._common import init_noop as init, levy  # noqa: F401

DEFAULTS = {"levy_scale": 0.01, "levy_beta": 1.5, "rise_threshold": 1.5}


def _lognormal_pdf(x):
    out = np.zeros_like(x)
    pos = x > 0
    lx = np.log(x[pos])
    out[pos] = np.exp(-0.5 * lx * lx) / (x[pos] * np.sqrt(2 * np.pi))
    return out


def step(state, evaluate, space, t, rng, p):
    x = state.positions
    n, d = x.shape
    big_t = state.iterations
    frac = t / big_t
    beta = rng.standard_normal((n, d))
    alpha = rng.random() * (frac * frac - 2 * frac + 1)
    # quadratic that falls from 1 at t=1 to 0 at t=T; flat when T=1
    a = 1.0 / (big_t * big_t - 2 * big_t + 1) if big_t > 1 else 0.0
    b = -2 * a
    c = 1 - a - b
    k = 1 - rng.random() * (c + a * t * t + b * t)

    if rng.standard_normal() < p["rise_threshold"]:
        lam = np.abs(rng.standard_normal((n, d)))
        theta = (2 * rng.random((n, 1)) - 1) * np.pi
        row = np.exp(-theta)
        vx, vy = row * np.cos(theta), row * np.sin(theta)
        drift = space.lower + rng.random((n, d)) * space.width
        risen = x + alpha * vx * vy * _lognormal_pdf(lam) * (drift - x)
    else:
        risen = x * k
    risen = np.clip(risen, space.lower, space.upper)

    mean = risen.mean(axis=0)
    fallen = np.clip(risen - beta * alpha * (mean - beta * alpha * risen), space.lower, space.upper)

    elite = state.best_position
    jump = p["levy_scale"] * levy(rng, (n, d), p["levy_beta"])
    landed = elite + jump * alpha * (elite - fallen * (2 * t / big_t))
    landed, f = evaluate(landed)
    state.positions, state.fitness = landed, f
    state.offer(landed, f)
