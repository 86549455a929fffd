"""Named, counter-based random streams derived from one master seed."""

import numpy as np

STREAM_IDS = {
    "bath": 1,
    "noise": 2,
}


def stream(seed: int, name: str, *index: int) -> np.random.Generator:
    """Independent generator for sub-stream `name` at position `index`.

    The same (seed, name, index) always yields the same sequence, whatever
    order or thread it is requested from.
    """
    sequence = np.random.SeedSequence(seed, spawn_key=(STREAM_IDS[name], *index))
    return np.random.Generator(np.random.Philox(sequence))
