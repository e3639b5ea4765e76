"""Particle swarm with linearly decreasing inertia."""
import numpy as np

DEFAULTS = {"w_max": 0.9, "w_min": 0.4, "c1": 2.0, "c2": 2.0, "v_max_fraction": 0.2}


def init(state, space, rng, p):
    state.memory["velocity"] = np.zeros_like(state.positions)
    state.memory["pbest"] = state.positions.copy()
    state.memory["pbest_fitness"] = state.fitness.copy()


def step(state, evaluate, space, t, rng, p):
    m = state.memory
    x = state.positions
    big_t = state.iterations
    w = p["w_max"] - (p["w_max"] - p["w_min"]) * (t - 1) / max(big_t - 1, 1)
    r1 = rng.random(x.shape)
    r2 = rng.random(x.shape)
    v = (w * m["velocity"] + p["c1"] * r1 * (m["pbest"] - x)
         + p["c2"] * r2 * (state.best_position - x))
    v_max = p["v_max_fraction"] * space.width
    v = np.clip(v, -v_max, v_max)
    x, f = evaluate(x + v)
    m["velocity"] = v
    improved = f < m["pbest_fitness"]
    m["pbest"][improved] = x[improved]
    m["pbest_fitness"][improved] = f[improved]
    state.positions, state.fitness = x, f
    state.offer(x, f)
