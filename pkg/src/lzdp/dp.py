"""Differentially private padding around the compressor.

The wrapper appends ``0`` followed by ``p - 1`` one-bits to the compressed
payload, where ``p = max(1, ceil(Z + k))``, ``Z`` is Laplace noise with scale
``gs_bits / epsilon`` and ``k = (gs_bits/epsilon) * ln(1/(2*delta)) + gs_bits + 1``.
The observable length of the result is then (epsilon, delta)-differentially
private over single-symbol substitutions, provided ``gs_bits`` upper-bounds
the worst-case payload-length change such a substitution can cause.

``gs_upper_bound`` supplies that worst case in closed form for every variant
and window regime.  Stripping the padding needs no side channel: remove the
maximal trailing run of one-bits, then one zero-bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (
    BitWriter,
    Bits,
    CompressedFile,
    CompressionConfig,
    DomainError,
    LzdpError,
    ParseError,
    Text,
    Variant,
    _blocks_from_bits,
    _decode_header,
    _encode_header,
    bits_per_int,
    payload_bits,
)
from .lz77 import compress

_CBRT3 = 3.0 ** (1.0 / 3.0)
_CBRT9 = 9.0 ** (1.0 / 3.0)
_CBRT81 = 81.0 ** (1.0 / 3.0)


class CorruptPaddingError(LzdpError):
    """The padded bitstring has no terminating zero-bit."""


@dataclass(frozen=True)
class DPParams:
    """Everything the padding mechanism consumes."""

    epsilon: float
    delta: float
    gs_bits: int
    seed: int = 0

    def __post_init__(self):
        if not self.epsilon > 0:
            raise DomainError(f"epsilon must be > 0, got {self.epsilon}")
        if not 0 < self.delta < 1:
            raise DomainError(f"delta must be in (0, 1), got {self.delta}")
        if self.gs_bits < 1:
            raise DomainError(f"gs_bits must be >= 1, got {self.gs_bits}")

    @property
    def scale(self) -> float:
        return self.gs_bits / self.epsilon

    @property
    def k(self) -> float:
        return self.scale * math.log(1.0 / (2.0 * self.delta)) + self.gs_bits + 1

    def make_rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)


@dataclass(frozen=True)
class PaddedBitstring:
    """Padded payload bits plus the drawn pad length (kept for tests only)."""

    bits: Bits
    p: int


def laplace_sample(scale: float, rng: np.random.Generator, size: int | None = None):
    """Zero-mean Laplace noise by inverse CDF: -scale*sign(U)*ln(1-2|U|).

    U is uniform on the open interval (-1/2, 1/2); the measure-zero endpoint
    is redrawn so the log never sees zero.  Mean absolute value equals scale.
    """
    if scale <= 0:
        raise DomainError(f"scale must be > 0, got {scale}")
    if size is None:
        u = rng.random() - 0.5
        while u == -0.5:
            u = rng.random() - 0.5
        return -scale * math.copysign(1.0, u) * math.log1p(-2.0 * abs(u))
    u = rng.random(size) - 0.5
    while True:
        bad = u == -0.5
        if not bad.any():
            break
        u[bad] = rng.random(int(bad.sum())) - 0.5
    return -scale * np.sign(u) * np.log1p(-2.0 * np.abs(u))


def _bound_expr(x: int, windowed: bool, self_ref: bool) -> float:
    if windowed:
        return _CBRT81 / 2 * x ** (2 / 3) + _CBRT9 / 2 * x ** (1 / 3) + (5 if self_ref else 3)
    return _CBRT9 / 2 * x ** (2 / 3) + _CBRT3 / 2 * x ** (1 / 3) + (3 if self_ref else 1)


def gs_upper_bound(n: int, window: int | None, k: int, variant: Variant) -> int:
    """Closed-form bound, in bits, on the payload-length change across any
    pair of length-n inputs differing in a single symbol.

    The unbounded regime (window = n) uses the n-form with additive constant
    1 (non-overlapping) or 3 (self-referencing); a bounded window uses the
    tighter W-form with constant 3 or 5.
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    if k < 1:
        raise DomainError(f"alphabet size must be >= 1, got {k}")
    w = n if window is None else window
    if w < 1:
        raise DomainError(f"window must be >= 1, got {w}")
    if w > n:
        raise DomainError(f"window {w} exceeds n = {n}")
    self_ref = variant is Variant.SELF_REFERENCING
    expr = _bound_expr(w if w < n else n, windowed=w < n, self_ref=self_ref)
    return math.ceil(expr * (2 * bits_per_int(n) + bits_per_int(k)))


def bound_table(n: int, window: int | None, k: int) -> list[dict]:
    """Both closed forms for both variants at (n, window), as table rows.

    The row gs_upper_bound itself would pick for these arguments is marked
    ``selected``.
    """
    if n < 1 or k < 1:
        raise DomainError("need n >= 1 and alphabet size >= 1")
    w = n if window is None else window
    if not 1 <= w <= n:
        raise DomainError(f"window must be in [1, n], got {w}")
    width = 2 * bits_per_int(n) + bits_per_int(k)
    rows = []
    for variant in Variant:
        self_ref = variant is Variant.SELF_REFERENCING
        for form, x, windowed in (("unbounded", n, False), ("windowed", w, True)):
            rows.append(
                {
                    "variant": variant.value,
                    "form": form,
                    "bound_bits": math.ceil(_bound_expr(x, windowed, self_ref) * width),
                    "selected": (w == n) == (form == "unbounded"),
                }
            )
    return rows


def pad_length(params: DPParams, rng: np.random.Generator) -> int:
    """One draw of the pad length p = max(1, ceil(Z + k))."""
    z = laplace_sample(params.scale, rng)
    return max(1, math.ceil(z + params.k))


def pad_lengths(params: DPParams, rng: np.random.Generator, size: int) -> np.ndarray:
    """Vectorized pad_length for Monte Carlo work; same formula per draw."""
    z = laplace_sample(params.scale, rng, size=size)
    return np.maximum(1, np.ceil(z + params.k)).astype(np.int64)


def dp_pad(payload: Bits, p: int) -> PaddedBitstring:
    """Append 0, then p-1 one-bits, then one-bits up to the byte boundary."""
    if p < 1:
        raise DomainError(f"pad length must be >= 1, got {p}")
    w = BitWriter()
    w.write_bits(payload)
    w.write_bit(0)
    w.write_run(1, p - 1)
    w.write_run(1, (-w.bit_count) % 8)
    return PaddedBitstring(bits=w.to_bits(), p=p)


def dp_compress(
    text: Text,
    config: CompressionConfig,
    params: DPParams,
    rng: np.random.Generator,
) -> PaddedBitstring:
    """Compress, serialize to payload bits, and pad with a fresh draw."""
    return dp_pad(payload_bits(compress(text, config)), pad_length(params, rng))


def dp_strip(padded: Bits) -> Bits:
    """Drop the maximal trailing run of one-bits and the zero before it."""
    data = padded.data
    i = padded.nbits - 1
    while i >= 0:
        byte_i = i // 8
        take = i - 8 * byte_i + 1
        chunk = data[byte_i] >> (8 - take)
        trailing_ones = (chunk ^ (chunk + 1)).bit_length() - 1
        if trailing_ones < take:
            return padded.prefix(i - trailing_ones)
        i -= take
    raise CorruptPaddingError("no terminating zero-bit found in the padded stream")


def pack_padded_container(file: CompressedFile, padded: PaddedBitstring) -> bytes:
    """Container bytes for a padded file: header with the dp flag, no payload
    bit count (its presence would leak the unpadded length), padded bits."""
    if padded.bits.nbits % 8:
        raise DomainError("padded bitstrings must be byte-aligned")
    return _encode_header(file, dp_padded=True) + padded.bits.data


def read_padded_container(data: bytes) -> CompressedFile:
    """Parse a padded container back into its block list."""
    n, config, alphabet, dp_padded, off = _decode_header(data)
    if not dp_padded:
        raise ParseError("container is not dp-padded", offset=5)
    body = data[off:]
    try:
        payload = dp_strip(Bits(body, 8 * len(body)))
    except CorruptPaddingError as exc:
        raise ParseError(str(exc), offset=off) from exc
    blocks = _blocks_from_bits(payload, n, alphabet)
    try:
        return CompressedFile(n=n, config=config, alphabet=alphabet, blocks=blocks)
    except DomainError as exc:
        raise ParseError(f"inconsistent block list: {exc}", offset=off) from exc
