import math

import numpy as np


def levy(rng, shape, beta=1.5):
    """Mantegna's Lévy-stable step with index ``beta`` (unscaled)."""
    sigma = (math.gamma(1 + beta) * math.sin(math.pi * beta / 2)
             / (math.gamma((1 + beta) / 2) * beta * 2 ** ((beta - 1) / 2))) ** (1 / beta)
    u = rng.normal(0.0, sigma, shape)
    v = rng.normal(0.0, 1.0, shape)
    return u / np.abs(v) ** (1 / beta)


def one_or_two(rng, n):
    """Per-individual intensity factor I in {1, 2}."""
    return rng.integers(1, 3, size=(n, 1)).astype(float)


def init_noop(state, space, rng, params):
    pass
