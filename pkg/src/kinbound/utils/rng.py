"""Counter-based random streams.

Every random word is addressed by (seed, stream, index) through the Philox
block cipher, so a value does not depend on how the work was partitioned:
particle i at step s always reads word s·N + i of its stream, whether the
ensemble is processed serially, in chunks or across threads.
"""

import numpy as np
from scipy import special

from kinbound.errors import DomainError
from kinbound.geometry.models import FloatArray

WORDS_PER_BLOCK = 4
_MANTISSA_SHIFT = np.uint64(11)
_MANTISSA_SCALE = 2.0**-53


def _check_key(seed: int, stream: int) -> None:
    if seed < 0 or stream < 0:
        msg = f"Seed and stream must be non-negative, got seed={seed}, stream={stream}"
        raise DomainError(msg)


def counter_generator(seed: int, stream: int = 0) -> np.random.Generator:
    """Return a Philox-backed generator keyed by (seed, stream)."""
    _check_key(seed, stream)
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


class CounterStream:
    """Random words of one (seed, stream) pair addressed by absolute index."""

    def __init__(self, seed: int, stream: int = 0) -> None:
        """Key the stream.

        Args:
            seed: Non-negative run seed.
            stream: Non-negative stream number (one per independent use).

        """
        _check_key(seed, stream)
        self.seed = seed
        self.stream = stream
        self._key = np.array([seed, stream], dtype=np.uint64)

    def raw(self, start: int, count: int) -> np.ndarray:
        """Return the 64-bit words with indices [start, start + count)."""
        block, offset = divmod(start, WORDS_PER_BLOCK)
        counter = np.array([block, 0, 0, 0], dtype=np.uint64)
        bit_generator = np.random.Philox(counter=counter, key=self._key)
        return bit_generator.random_raw(count + offset)[offset:]

    def uniforms(self, start: int, count: int) -> FloatArray:
        """Uniform values in the open interval (0, 1) for word indices [start, start + count)."""
        mantissa = (self.raw(start, count) >> _MANTISSA_SHIFT).astype(np.float64)
        return (mantissa + 0.5) * _MANTISSA_SCALE

    def normals(self, start: int, count: int) -> FloatArray:
        """Standard normal values by inverse-CDF transform of :meth:`uniforms`."""
        return special.ndtri(self.uniforms(start, count))

    def step_normals(self, step: int, first: int, count: int, population: int) -> FloatArray:
        """Normals for particles [first, first + count) of a population at a time step."""
        return self.normals(step * population + first, count)

    def __repr__(self) -> str:
        """Return string representation."""
        return f"CounterStream(seed={self.seed}, stream={self.stream})"
