"""Deterministic seed derivation for replicated experiments.

Every sampler in this package takes an explicit seed and is pure given it.
Parallel replication therefore needs distinct, reproducible child seeds.  The
splitting scheme is ``SeedSequence(master, spawn_key=(stream, index))``: the
master seed plus a small stream tag and a replication index are hashed into an
independent child stream.  The same (master, stream, index) triple always
yields the same generator, regardless of the order replications run in.
"""

from __future__ import annotations

import numpy as np

# Stream tags. Keeping them distinct guarantees e.g. coefficient draws never
# reuse innovation randomness even when both derive from one master seed.
INNOVATION_STREAM = 0
COEFFICIENT_STREAM = 1
POISSON_STREAM = 2
MARK_STREAM = 3
NOISE_STREAM = 4


def child_sequence(master_seed: int, *key: int) -> np.random.SeedSequence:
    """Derive a child SeedSequence from a master seed and an index key."""
    return np.random.SeedSequence(entropy=master_seed, spawn_key=tuple(key))


def rng_for(master_seed: int, *key: int) -> np.random.Generator:
    """Generator for the child stream identified by ``key``."""
    return np.random.default_rng(child_sequence(master_seed, *key))


def replication_seed(master_seed: int, stream: int, index: int) -> np.random.Generator:
    """Generator for replication ``index`` of a named stream."""
    return rng_for(master_seed, stream, index)
