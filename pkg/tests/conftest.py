import itertools
import random

import pytest

from lzdp import Alphabet, CompressionConfig, Text, Variant

ABCD = Alphabet.from_symbols("abcd")
AB = Alphabet.from_symbols("ab")

ALL_VARIANTS = tuple(Variant)


def synthetic_alphabet(k: int) -> Alphabet:
    return Alphabet(tuple(chr(i) for i in range(k)))


def all_texts(n: int, k: int):
    """Every length-n text over a size-k alphabet."""
    alpha = synthetic_alphabet(k)
    for tup in itertools.product(range(k), repeat=n):
        yield Text.from_indices(alpha, tup)


def random_byte_text(rng: random.Random, n: int) -> Text:
    return Text.from_bytes(rng.randbytes(n))


def window_grid(n: int):
    """The window sizes exercised by the roundtrip properties."""
    grid = {1, 2, max(1, (n + 1) // 2), max(1, n)}
    return sorted(grid)


def standard_configs(n: int):
    for window in window_grid(n):
        for variant in ALL_VARIANTS:
            yield CompressionConfig(window=None if window >= max(1, n) else window, variant=variant)


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
