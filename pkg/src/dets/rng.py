"""Seeded random streams with a pinned cross-platform determinism contract.

Every stochastic operation in the package draws from an RngStream. A stream is
identified by (seed, stream_id) and always produces the same draw sequence:
the generator family is pinned to numpy's PCG64 keyed by
SeedSequence(entropy=seed, spawn_key=(stream_id,)). Stream id 0 is reserved
for the environment; agent i uses stream id i + 1.

Draw accounting (relied on by replay tests): `random` consumes one generator
word per double; `open_uniform` consumes one word per value (the bound is a
power of two, so the underlying bounded-integer draw never rejects).
"""

import numpy as np

ENV_STREAM = 0

_OPEN_BITS = 53
_OPEN_SCALE = 2.0 ** -_OPEN_BITS


def agent_stream_id(agent_id: int) -> int:
    return agent_id + 1


class RngStream:
    """Single-owner deterministic random stream."""

    def __init__(self, seed: int, stream_id: int = ENV_STREAM):
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=(self.stream_id,))
        self._gen = np.random.Generator(np.random.PCG64(ss))

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id})"

    def random(self, size: int | None = None):
        """Uniform double(s) in [0, 1); a block of n equals n scalar draws."""
        return self._gen.random(size)

    def open_uniform(self, size: int | None = None):
        """Uniform double(s) in the open interval (0, 1).

        Uses bit-center placement, (k + 0.5) / 2^53 for a 53-bit draw k, so
        neither endpoint is ever returned.
        """
        k = self._gen.integers(0, 1 << _OPEN_BITS, size=size)
        return (k + 0.5) * _OPEN_SCALE
