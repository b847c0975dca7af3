"""Counter-based random streams keyed by (seed, sample index).

Sample ``i`` of a stream always reads the same Philox counter block, so a
range of samples can be drawn in one call or split across workers in any
way without changing a single value.
"""

import numpy as np

_MASK64 = (1 << 64) - 1

# Philox emits four 64-bit words per counter increment.
_WORDS_PER_BLOCK = 4

CHANNEL_STREAM = 0
LEMMA4_STREAM = 1


class SampleStream:
    """Uniform and complex Gaussian draws addressed by sample index.

    Parameters
    ----------
    seed : int
        64-bit seed (first Philox key word).
    stream : int
        Independent sub-stream id (second key word).
    """

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream = int(stream) & _MASK64

    def _generator(self, counter: int) -> np.random.Generator:
        bitgen = np.random.Philox(key=[self.seed, self.stream], counter=[counter, 0, 0, 0])
        return np.random.Generator(bitgen)

    def uniforms(self, start: int, count: int, per_sample: int) -> np.ndarray:
        """``(count, per_sample)`` uniforms on [0, 1) for samples start..start+count-1."""
        if start < 0 or count < 0 or per_sample < 1:
            raise ValueError("start, count must be >= 0 and per_sample >= 1")
        blocks = -(-per_sample // _WORDS_PER_BLOCK)
        width = blocks * _WORDS_PER_BLOCK
        raw = self._generator(start * blocks).random(count * width)
        return raw.reshape(count, width)[:, :per_sample]

    def complex_normal(self, start: int, count: int, shape: tuple) -> np.ndarray:
        """Circularly-symmetric unit-variance complex Gaussians, ``(count, *shape)``.

        Box-Muller on two uniforms per entry, so each sample consumes a
        fixed number of draws.
        """
        size = int(np.prod(shape))
        u = self.uniforms(start, count, 2 * size)
        radius = np.sqrt(-np.log1p(-u[:, :size]))
        phase = np.exp(2j * np.pi * u[:, size:])
        return (radius * phase).reshape((count, *shape))
