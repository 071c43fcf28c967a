"""Deterministic random-stream derivation.

All randomness in the framework flows from a single master seed. Substreams
are derived with ``numpy.random.SeedSequence([master_seed, *path])``, where
the path encodes (replication index, stream kind, ...). SeedSequence mixing
is stable across numpy versions, platforms, and process boundaries, so the
same (seed, path) always yields the same stream regardless of how work is
scheduled.

Within one replication four independent streams exist:

* instance  - samples arm means and per-arm delay parameters
* rewards   - Bernoulli reward draws inside the environment
* delays    - delay draws inside the environment
* policy    - posterior samples and tie-breaking, one stream per policy name

Keeping reward/delay/policy draws on separate streams means two policies on
the same replication face an identical environment even though they consume
different numbers of policy draws.
"""

from __future__ import annotations

import zlib

import numpy as np

# Stream-kind tags appended to (master_seed, replication) paths.
INSTANCE_STREAM = 0
ENV_STREAM = 1
POLICY_STREAM = 2


def substream(master_seed: int, *path: int) -> np.random.Generator:
    """Return a Generator for the stream identified by (master_seed, *path)."""
    return np.random.default_rng(np.random.SeedSequence([master_seed, *path]))


def seed_sequence(master_seed: int, *path: int) -> np.random.SeedSequence:
    """Return the SeedSequence for (master_seed, *path) without instantiating a Generator."""
    return np.random.SeedSequence([master_seed, *path])


def policy_stream(master_seed: int, replication: int, policy_name: str) -> np.random.Generator:
    """Derive the policy stream for one (replication, policy) pair.

    The policy name enters via CRC32 so the stream depends on the policy's
    identity, not its position in a list: adding or reordering policies never
    changes the draws another policy sees.
    """
    tag = zlib.crc32(policy_name.encode("utf-8"))
    return substream(master_seed, replication, POLICY_STREAM, tag)
