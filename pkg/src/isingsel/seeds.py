"""Deterministic seeding utilities.

Every stochastic routine in this package takes an explicit seed (or an
already-constructed generator); there is no global RNG state. Streams are
built on the counter-based Philox bit generator so that independent cells
of an experiment sweep can derive their own seeds without coordination.
"""

import numpy as np

_MASK64 = (1 << 64) - 1


def splitmix64(x):
    """One round of the splitmix64 mixer (stable across platforms)."""
    x = (x + 0x9E3779B97F4A7C15) & _MASK64
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def mix(*parts):
    """Mix integer parts into one 64-bit seed.

    Used to derive per-cell seeds from (base_seed, coordinates...) so that
    adding sweep cells never perturbs the streams of existing ones.
    """
    h = 0
    for v in parts:
        h = splitmix64((h ^ (int(v) & _MASK64)) & _MASK64)
    return h


def make_rng(seed):
    """Philox-backed Generator for a 64-bit integer seed."""
    return np.random.Generator(np.random.Philox(key=int(seed) & _MASK64))


def as_rng(rng):
    """Accept either an integer seed or a ready Generator."""
    if isinstance(rng, np.random.Generator):
        return rng
    return make_rng(rng)
