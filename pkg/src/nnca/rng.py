"""Deterministic random streams for simulations.

Streams are built on the counter-based Philox generator: ``stream(seed,
*key)`` feeds the seed plus a structured key (a domain label and indices
such as the replicate number) through ``numpy.random.SeedSequence`` as a
spawn key, so every (seed, key) pair is an independent, reproducible
stream that can be drawn in any order and in parallel.  Uniform variates
use numpy's standard 53-bit construction (top 53 bits of a 64-bit word
scaled by 2**-53).
"""

import numpy as np


def _key_parts(key):
    parts = []
    for part in key:
        if isinstance(part, str):
            parts.extend(ord(ch) for ch in part)
        else:
            parts.append(int(part))
    return tuple(parts)


def stream(seed, *key):
    """Generator for the (seed, key) stream, e.g. ``stream(7, "scenario-a", 12)``."""
    seq = np.random.SeedSequence(int(seed), spawn_key=_key_parts(key))
    return np.random.Generator(np.random.Philox(seq))


def child_seed(seed, *key):
    """A derived integer seed, for handing a sub-experiment its own stream space."""
    seq = np.random.SeedSequence(int(seed), spawn_key=_key_parts(key))
    return int(seq.generate_state(1, np.uint64)[0])
