"""Greedy sliding-window compressor and its decompressor.

Both variants are implemented.  NON_OVERLAPPING requires the match source to
lie entirely inside the window (in particular it must end at or before the
last encoded symbol); SELF_REFERENCING only constrains the source *start* to
the window, so a copy may run into the region it is producing and is decoded
symbol by symbol.

The compressor is deterministic: at each step it takes the longest admissible
match, capped so that a trailing literal symbol always exists, and breaks
length ties by the leftmost source start.  Determinism is what makes
compressed length a function of the input, which the sensitivity tooling
relies on.
"""

from __future__ import annotations

from .core import (
    Block,
    CompressedFile,
    CompressionConfig,
    CorruptFileError,
    Text,
    Variant,
)


def _longest_match(codes: str, ctc: int, window: int, cap: int, self_ref: bool):
    """Longest admissible match for the suffix starting at 0-based ``ctc``.

    Returns ``(length, q0)`` with q0 the leftmost 0-based source start, or
    ``(0, -1)`` when no admissible match exists.  Built on str.find: each
    round asks "does any admissible source match one symbol more than the
    best so far?", which is exact and fast because the scan runs in C.
    """
    if cap <= 0 or ctc == 0:
        return 0, -1
    lo = max(0, ctc - window)
    best = 0
    target = 1
    while target <= cap:
        sub = codes[ctc : ctc + target]
        # non-overlapping sources must fit before ctc; self-referencing
        # sources only need to *start* before ctc.
        end = ctc if not self_ref else ctc - 1 + target
        q0 = codes.find(sub, lo, end)
        if q0 < 0:
            break
        limit = cap if self_ref else min(cap, ctc - q0)
        length = target
        while length < limit and codes[q0 + length] == codes[ctc + length]:
            length += 1
        best = length
        target = length + 1
    if best == 0:
        return 0, -1
    sub = codes[ctc : ctc + best]
    end = ctc if not self_ref else ctc - 1 + best
    return best, codes.find(sub, lo, end)


def longest_match_reference(codes: str, ctc: int, window: int, cap: int, self_ref: bool):
    """Brute-force scan over every admissible source start.

    Reference oracle for ``_longest_match``: same contract, independent
    implementation.  Quadratic, so only suitable for small inputs.
    """
    lo = max(0, ctc - window)
    best, best_q0 = 0, -1
    for q0 in range(lo, ctc):
        limit = cap if self_ref else min(cap, ctc - q0)
        length = 0
        while length < limit and codes[q0 + length] == codes[ctc + length]:
            length += 1
        if length > best:
            best, best_q0 = length, q0
    return best, best_q0


def _compress_with(matcher, text: Text, config: CompressionConfig) -> CompressedFile:
    codes = text.codes
    n = len(codes)
    window = config.effective_window(n)
    self_ref = config.variant is Variant.SELF_REFERENCING
    blocks = []
    ctc = 0
    while ctc < n:
        cap = n - ctc - 1
        length, q0 = matcher(codes, ctc, window, cap, self_ref)
        if length == 0:
            blocks.append(Block(0, 0, ord(codes[ctc])))
            ctc += 1
        else:
            blocks.append(Block(q0 + 1, length, ord(codes[ctc + length])))
            ctc += length + 1
    return CompressedFile(n=n, config=config, alphabet=text.alphabet, blocks=tuple(blocks))


def compress(text: Text, config: CompressionConfig | None = None) -> CompressedFile:
    """Compress ``text`` greedily, left to right."""
    return _compress_with(_longest_match, text, config or CompressionConfig())


def compress_reference(text: Text, config: CompressionConfig | None = None) -> CompressedFile:
    """Same contract as compress(), driven by the brute-force match scan."""
    return _compress_with(longest_match_reference, text, config or CompressionConfig())


def decompress(file: CompressedFile) -> Text:
    """Reconstruct the original text from a block list."""
    # bytearray keeps large byte-alphabet files compact; wide alphabets fall
    # back to code-point appends
    wide = file.alphabet.size > 256
    out: list | bytearray = [] if wide else bytearray()
    for i, b in enumerate(file.blocks):
        if not b.is_literal:
            q0 = b.q - 1
            if q0 >= len(out):
                raise CorruptFileError(
                    f"block {i + 1} copies from position {b.q} but only "
                    f"{len(out)} symbols are reconstructed"
                )
            if q0 + b.length <= len(out):
                out.extend(out[q0 : q0 + b.length])
            else:
                # overlapped copy: realize it one symbol at a time
                for r in range(b.length):
                    out.append(out[q0 + r])
        out.append(b.lit)
    if wide:
        return Text(file.alphabet, "".join(map(chr, out)))
    return Text(file.alphabet, bytes(out).decode("latin-1"))


def block_spans(file: CompressedFile) -> tuple[tuple[int, int], ...]:
    """1-based destination spans (s_i, f_i) of each block; f_i - s_i = len_i."""
    spans = []
    pos = 1
    for b in file.blocks:
        spans.append((pos, pos + b.length))
        pos += b.length + 1
    return tuple(spans)
