"""Two-sided symbol words, their orders, and dyadic coordinate embeddings.

A bi-infinite itinerary splits at the dot into a tail (symbols at negative
indices, read leftward from the dot) and a head (symbols at non-negative
indices).  Finite words carry a finite block of each side and stand for the
cylinder of all bi-infinite extensions.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .errors import EmptyHead, Incomparable

MINUS = -1
PLUS = 1

_CHAR_TO_SYMBOL = {"+": PLUS, "-": MINUS}
_SYMBOL_TO_CHAR = {PLUS: "+", MINUS: "-"}
# Accept both the ASCII dot and the middle dot on input; emit the ASCII dot.
_DOTS = ".·"


def _check_symbols(symbols: tuple[int, ...], side: str) -> None:
    for s in symbols:
        if s != PLUS and s != MINUS:
            raise ValueError(f"{side} symbol must be +1 or -1, got {s!r}")


@dataclass(frozen=True)
class Word:
    """A finite symbol block with a dot.

    ``tail`` stores (eps_{-m}, ..., eps_{-1}) in increasing index order, so
    ``tail[-j]`` is the symbol at index -j.  ``head`` stores
    (eps_0, ..., eps_{n-1}) and ``head[i]`` is the symbol at index i.
    """

    tail: tuple[int, ...]
    head: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "tail", tuple(self.tail))
        object.__setattr__(self, "head", tuple(self.head))
        _check_symbols(self.tail, "tail")
        _check_symbols(self.head, "head")

    @property
    def tail_len(self) -> int:
        return len(self.tail)

    @property
    def head_len(self) -> int:
        return len(self.head)

    def to_string(self) -> str:
        tail = "".join(_SYMBOL_TO_CHAR[s] for s in self.tail)
        head = "".join(_SYMBOL_TO_CHAR[s] for s in self.head)
        return f"{tail}.{head}"

    @classmethod
    def from_string(cls, text: str) -> "Word":
        dot_positions = [i for i, ch in enumerate(text) if ch in _DOTS]
        if len(dot_positions) != 1:
            raise ValueError(f"word text needs exactly one dot: {text!r}")
        cut = dot_positions[0]
        try:
            tail = tuple(_CHAR_TO_SYMBOL[ch] for ch in text[:cut])
            head = tuple(_CHAR_TO_SYMBOL[ch] for ch in text[cut + 1 :])
        except KeyError as exc:
            raise ValueError(f"word text may only use '+'/'-': {text!r}") from exc
        return cls(tail, head)

    def __str__(self) -> str:
        return self.to_string()


def shift(w: Word) -> Word:
    """Move the dot one step right: the first head symbol joins the tail."""
    if w.head_len == 0:
        raise EmptyHead("cannot shift a word with an empty head")
    return Word(w.tail + (w.head[0],), w.head[1:])


def redot(w: Word, k: int) -> Word:
    """Re-dot the same symbol block k places to the right (k may be negative).

    Equivalent to applying ``shift`` k times (or its inverse -k times); the
    block of symbols is unchanged.  Raises ValueError when the dot would
    leave the block on either side.
    """
    if k == 0:
        return w
    block = w.tail + w.head
    cut = w.tail_len + k
    if cut < 0 or cut > len(block):
        raise ValueError(f"cannot re-dot by {k}: block has {len(block)} symbols")
    return Word(block[:cut], block[cut:])


def compare_heads(u: tuple[int, ...], v: tuple[int, ...]) -> int:
    """Order heads: base order -1 < +1 at the first disagreement i, flipped
    when the count of +1 symbols before i is odd.

    Returns -1, 0, or +1.  Words that agree on their common range but have
    different lengths are Incomparable (neither determines the other's
    cylinder order).
    """
    flips = 0
    for i in range(min(len(u), len(v))):
        if u[i] != v[i]:
            base = -1 if u[i] < v[i] else 1
            return -base if flips % 2 else base
        if u[i] == PLUS:
            flips += 1
    if len(u) == len(v):
        return 0
    raise Incomparable("heads agree on their common range but differ in length")


def compare_tails(u: tuple[int, ...], v: tuple[int, ...], b_sign: int = PLUS) -> int:
    """Order tails by the disagreement closest to the dot.

    Scanning i = -1, -2, ... the first index where the tails differ decides;
    base order -1 < +1 is flipped when the parity window (the symbols strictly
    between i and the dot) holds an odd count of -1 symbols for b_sign >= 0,
    of +1 symbols for b_sign < 0.
    """
    counted = MINUS if b_sign >= 0 else PLUS
    flips = 0
    for j in range(1, min(len(u), len(v)) + 1):
        if u[-j] != v[-j]:
            base = -1 if u[-j] < v[-j] else 1
            return -base if flips % 2 else base
        if u[-j] == counted:
            flips += 1
    if len(u) == len(v):
        return 0
    raise Incomparable("tails agree on their common range but differ in length")


def head_coordinate(head: tuple[int, ...]) -> float:
    """Order-preserving dyadic embedding of heads into [0, 1].

    Bit i of the binary expansion is (eps_i == +1) xor (odd count of +1 before
    i); folding the flip parity into the bits makes the expansion monotone for
    the head order.  Exact in binary floating point for lengths <= 52.
    """
    x = 0.0
    scale = 0.5
    flips = 0
    for s in head:
        bit = 1 if s == PLUS else 0
        if flips % 2:
            bit ^= 1
        x += bit * scale
        scale *= 0.5
        if s == PLUS:
            flips += 1
    return x


def tail_coordinate(tail: tuple[int, ...], b_sign: int = PLUS) -> float:
    """Order-preserving dyadic embedding of tails into [0, 1].

    Read leftward from the dot; bit k folds the parity of the counted symbol
    (-1 for b_sign >= 0, +1 for b_sign < 0) seen so far, mirroring
    ``compare_tails``.
    """
    counted = MINUS if b_sign >= 0 else PLUS
    x = 0.0
    scale = 0.5
    flips = 0
    for j in range(1, len(tail) + 1):
        s = tail[-j]
        bit = 1 if s == PLUS else 0
        if flips % 2:
            bit ^= 1
        x += bit * scale
        scale *= 0.5
        if s == counted:
            flips += 1
    return x


def enumerate_heads(n: int) -> Iterator[tuple[int, ...]]:
    """All 2^n heads of length n, in increasing head_coordinate order."""
    for code in range(1 << n):
        yield _head_from_coordinate_code(code, n)


def enumerate_tails(m: int, b_sign: int = PLUS) -> Iterator[tuple[int, ...]]:
    """All 2^m tails of length m, in increasing tail_coordinate order."""
    for code in range(1 << m):
        yield _tail_from_coordinate_code(code, m, b_sign)


def enumerate_words(m: int, n: int) -> Iterator[Word]:
    """All 2^(m+n) words with tail length m and head length n.

    Ordered by (tail_coordinate, head_coordinate): the raster cell layout.
    """
    for tail in enumerate_tails(m):
        for head in enumerate_heads(n):
            yield Word(tail, head)


def _head_from_coordinate_code(code: int, n: int) -> tuple[int, ...]:
    # Invert the coordinate folding: bit k of code (MSB first) is the k-th
    # binary digit of the coordinate.
    head = []
    flips = 0
    for k in range(n):
        bit = (code >> (n - 1 - k)) & 1
        if flips % 2:
            bit ^= 1
        s = PLUS if bit else MINUS
        head.append(s)
        if s == PLUS:
            flips += 1
    return tuple(head)


def _tail_from_coordinate_code(code: int, m: int, b_sign: int) -> tuple[int, ...]:
    counted = MINUS if b_sign >= 0 else PLUS
    rev = []
    flips = 0
    for k in range(m):
        bit = (code >> (m - 1 - k)) & 1
        if flips % 2:
            bit ^= 1
        s = PLUS if bit else MINUS
        rev.append(s)
        if s == counted:
            flips += 1
    return tuple(reversed(rev))
