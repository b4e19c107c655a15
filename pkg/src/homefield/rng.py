"""Named, per-replicate random substreams.

Every (seed, replicate, stream) triple maps to its own Philox generator through
``SeedSequence`` spawn keys, so replicate ``k`` can be regenerated on its own and
results do not depend on execution order.  Normal variates come from the
package's quantile kernel applied to raw 64-bit draws, not numpy's samplers.
"""

import numpy as np

from . import kernels

STREAMS = {"beta": 0, "alpha": 1, "epsilon": 2}
_HALF_ULP = 0.5
_SCALE = 2.0**-53


def check_seed(seed) -> int:
    seed = int(seed)
    if not 0 <= seed < 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return seed


def substream(seed: int, replicate: int, name: str) -> np.random.Generator:
    if name not in STREAMS:
        raise KeyError(f"unknown stream {name!r}")
    ss = np.random.SeedSequence(entropy=check_seed(seed), spawn_key=(int(replicate), STREAMS[name]))
    return np.random.Generator(np.random.Philox(ss))


def open_uniforms(gen: np.random.Generator, size: int) -> np.ndarray:
    """Uniforms on the open interval (0, 1): 53 random bits, shifted half a step."""
    bits = gen.bit_generator.random_raw(size)
    return ((bits >> np.uint64(11)).astype(np.float64) + _HALF_ULP) * _SCALE


def standard_normals(gen: np.random.Generator, size: int) -> np.ndarray:
    return kernels.ndtri(open_uniforms(gen, size))
