"""Pruning pair (p, q) with certified truncation bounds, cylinder verdicts,
pruned-region rasters, and admissible-word counting.

Evaluation strategy: every continued-fraction level and every series term is
computed in interval form.  The innermost, unknown continuation of a finite
word enters as the a-priori interval [-1/(a-|b|), 1/(a-|b|)], which the level
map 1/(±a e + b x) keeps invariant whenever a > 1 + |b|.  Endpoint arithmetic
uses ordinary floats (no directed rounding); the enclosures are validated by
the depth-doubling tests rather than formally proven.  By construction the
resulting interval contains the true value for every bi-infinite extension of
the word, and refining the word or deepening the series never widens it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BudgetExceeded, InsufficientWord, NotHyperbolic, WrongHead
from .symbolic import MINUS, PLUS, Word, redot


@dataclass(frozen=True)
class Params:
    """Lozi parameter pair (a, b)."""

    a: float
    b: float

    @property
    def hyperbolic(self) -> bool:
        return self.a > 1.0 + abs(self.b)

    def require_hyperbolic(self) -> None:
        if not self.hyperbolic:
            raise NotHyperbolic(f"need a > 1 + |b|, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class BoundedValue:
    """A float with a certified absolute error bound."""

    value: float
    err: float

    @classmethod
    def from_interval(cls, lo: float, hi: float) -> "BoundedValue":
        return cls(0.5 * (lo + hi), 0.5 * (hi - lo))

    @property
    def lo(self) -> float:
        return self.value - self.err

    @property
    def hi(self) -> float:
        return self.value + self.err


class Verdict(Enum):
    CERTIFIED_PRUNED = "CertifiedPruned"
    CERTIFIED_ADMISSIBLE_WINDOW = "CertifiedAdmissibleWindow"
    UNKNOWN = "Unknown"


def special_head(n: int) -> tuple[int, ...]:
    """The head (+1, -1, -1, ...) maximizing q at (2, 0); closed form known."""
    if n <= 0:
        return ()
    return (PLUS,) + (MINUS,) * (n - 1)


# ---------------------------------------------------------------------------
# scalar interval arithmetic (tuples of floats; no rounding control)

def _iv_scale(t: float, x: tuple[float, float]) -> tuple[float, float]:
    return (t * x[0], t * x[1]) if t >= 0 else (t * x[1], t * x[0])


def _iv_mul(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    p = (x[0] * y[0], x[0] * y[1], x[1] * y[0], x[1] * y[1])
    return (min(p), max(p))


def _iv_recip_shifted(shift: float, x: tuple[float, float]) -> tuple[float, float]:
    # 1 / (shift + x); the denominator must not straddle zero.
    lo = shift + x[0]
    hi = shift + x[1]
    if lo <= 0.0 <= hi:
        raise ArithmeticError("continued-fraction denominator straddles zero")
    return (1.0 / hi, 1.0 / lo)


def _radius(params: Params) -> float:
    # |s_n|, |r_n| <= 1/(a-|b|): the level map preserves this disc when
    # a > 1 + |b|, and the truncation seed 1/a lies inside it.
    return 1.0 / (params.a - abs(params.b))


# ---------------------------------------------------------------------------
# continued-fraction chains

def _s_chain(tail: tuple[int, ...], params: Params, want_max_j: int) -> dict[int, tuple[float, float]]:
    """Enclosures of s_{-j} for j = 2..want_max_j from one bottom-up sweep.

    The sweep starts at the unknown continuation below the word's deepest
    symbol and climbs to the dot, so every returned interval is uniform over
    all extensions of the tail.
    """
    a, b = params.a, params.b
    rad = _radius(params)
    m = len(tail)
    x = (-rad, rad)
    out: dict[int, tuple[float, float]] = {}
    for j in range(m, 1, -1):
        x = _iv_recip_shifted(-a * tail[-j], _iv_scale(b, x))
        if j <= want_max_j:
            out[j] = x
    return out


def _r_chain(head: tuple[int, ...], params: Params, want_max_j: int) -> dict[int, tuple[float, float]]:
    """Enclosures of r_j for j = 0..want_max_j, swept from the head's far end."""
    a, b = params.a, params.b
    rad = _radius(params)
    x = (-rad, rad)
    out: dict[int, tuple[float, float]] = {}
    for j in range(len(head) - 1, -1, -1):
        x = _iv_recip_shifted(a * head[j], _iv_scale(b, x))
        if j <= want_max_j:
            out[j] = x
    return out


def eval_s(w: Word, n: int, depth: int, params: Params) -> BoundedValue:
    """Depth-truncated enclosure of s_n (n <= -2) over all extensions of w."""
    params.require_hyperbolic()
    if n > -2:
        raise ValueError(f"s_n is used for indices n <= -2, got {n}")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    j0 = -n
    if w.tail_len < j0 + depth:
        raise InsufficientWord(
            f"tail of length {w.tail_len} cannot supply symbols down to index {n - depth}"
        )
    a, b = params.a, params.b
    rad = _radius(params)
    x = (-rad, rad)
    for j in range(j0 + depth, j0 - 1, -1):
        x = _iv_recip_shifted(-a * w.tail[-j], _iv_scale(b, x))
    return BoundedValue.from_interval(*x)


def eval_r(w: Word, n: int, depth: int, params: Params) -> BoundedValue:
    """Depth-truncated enclosure of r_n (n >= 0) over all extensions of w."""
    params.require_hyperbolic()
    if n < 0:
        raise ValueError(f"r_n is defined for indices n >= 0, got {n}")
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if w.head_len < n + depth + 1:
        raise InsufficientWord(
            f"head of length {w.head_len} cannot supply symbols up to index {n + depth}"
        )
    a, b = params.a, params.b
    rad = _radius(params)
    x = (-rad, rad)
    for j in range(n + depth, n - 1, -1):
        x = _iv_recip_shifted(a * w.head[j], _iv_scale(b, x))
    return BoundedValue.from_interval(*x)


def _p_interval(tail: tuple[int, ...], depth: int, params: Params) -> tuple[float, float]:
    """Enclosure of p over all extensions of the tail; series depth capped by
    the available symbols.  Terms are products of (-b * s_{-j}) intervals;
    the untaken part of the series is covered by the geometric majorant with
    ratio |b|/(a-|b|) (infinite when that ratio reaches 1)."""
    a, b = params.a, params.b
    c = a - abs(b)
    d_eff = max(0, min(depth, len(tail) - 1))
    lo, hi = 1.0, 1.0
    prod = (1.0, 1.0)
    if d_eff >= 1:
        chain = _s_chain(tail, params, d_eff + 1)
        for j in range(2, d_eff + 2):
            prod = _iv_mul(prod, _iv_scale(-b, chain[j]))
            lo += prod[0]
            hi += prod[1]
    # Every untaken term extends the last partial product by factors of
    # magnitude <= |b|/c, so the remainder is geometric from that product.
    ratio = abs(b) / c
    prod_max = max(abs(prod[0]), abs(prod[1]))
    tail_bound = prod_max * ratio / (1.0 - ratio) if ratio < 1.0 else math.inf
    return (lo - tail_bound, hi + tail_bound)


def _q_interval(head: tuple[int, ...], depth: int, params: Params) -> tuple[float, float]:
    """Enclosure of q over all extensions of the head; series depth capped.

    The term majorant (a-|b|)^-(n+1) always sums geometrically in the
    hyperbolic region, so the enclosure is finite even for an empty head."""
    c = params.a - abs(params.b)
    d_eff = min(depth, len(head) - 1)
    lo, hi = 0.0, 0.0
    prod = (1.0, 1.0)
    if d_eff >= 0:
        chain = _r_chain(head, params, d_eff)
        for n in range(d_eff + 1):
            prod = _iv_mul(prod, chain[n])
            term = prod if n % 2 == 0 else (-prod[1], -prod[0])
            lo += term[0]
            hi += term[1]
    # Remainder: the last partial product times factors of magnitude <= 1/c.
    prod_max = max(abs(prod[0]), abs(prod[1]))
    tail_bound = prod_max / (c - 1.0)
    return (lo - tail_bound, hi + tail_bound)


def eval_p(w: Word, depth: int, params: Params) -> BoundedValue:
    """Enclosure of the tail pruning value p(w)(a, b).

    Series terms k = 1..depth use s_{-2}..s_{-(depth+1)}; the word must hold
    at least depth+2 tail symbols so even the deepest term sees one refined
    continued-fraction level.
    """
    params.require_hyperbolic()
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if w.tail_len < depth + 2:
        raise InsufficientWord(f"tail length {w.tail_len} < depth + 2 = {depth + 2}")
    return BoundedValue.from_interval(*_p_interval(w.tail, depth, params))


def eval_q(w: Word, depth: int, params: Params) -> BoundedValue:
    """Enclosure of the head pruning value q(w)(a, b).

    Series terms n = 0..depth use r_0..r_depth, so the head must hold at
    least depth+1 symbols.
    """
    params.require_hyperbolic()
    if depth < 0:
        raise ValueError("depth must be >= 0")
    if w.head_len < depth + 1:
        raise InsufficientWord(f"head length {w.head_len} < depth + 1 = {depth + 1}")
    return BoundedValue.from_interval(*_q_interval(w.head, depth, params))


def closed_form_q(params: Params, head: tuple[int, ...] | None = None) -> float:
    """q for the head (+1, -1, -1, ...) in closed form.

    With x = (a - sqrt(a^2 + 4b))/2: q = b / ((a + x)(b + x)), continued at
    b = 0 by its limit 1/(a - 1).  If a head is supplied it must be a prefix
    of the special head.
    """
    params.require_hyperbolic()
    if head is not None and head != special_head(len(head)):
        raise WrongHead("closed form covers only the head (+1, -1, -1, ...)")
    a, b = params.a, params.b
    if b == 0.0:
        return 1.0 / (a - 1.0)
    # Rationalized root: (a - sqrt(a^2+4b))/2 cancels catastrophically as
    # b -> 0, which would poison finite differences of this function.
    x = -2.0 * b / (a + math.sqrt(a * a + 4.0 * b))
    return b / ((a + x) * (b + x))


def eval_pq_cylinder(w: Word, depth: int, params: Params) -> tuple[float, float]:
    """Enclosure of (p - q) over every bi-infinite extension of w.

    Series depths are capped by the symbols the word actually holds; short or
    empty sides simply widen the enclosure, they never raise.
    """
    params.require_hyperbolic()
    plo, phi = _p_interval(w.tail, depth, params)
    qlo, qhi = _q_interval(w.head, depth, params)
    return (plo - qhi, phi - qlo)


def classify_cylinder(w: Word, depth: int, shift_window: int, params: Params) -> Verdict:
    """Classify the cylinder of w.

    CertifiedPruned: the unshifted enclosure is entirely negative, so every
    extension of w lies in the pruned region.  CertifiedAdmissibleWindow: the
    enclosure is entirely non-negative at the dot and at every re-dotting
    within shift_window that keeps a nonempty head inside the word.  Anything
    else is Unknown.
    """
    params.require_hyperbolic()
    lo, hi = eval_pq_cylinder(w, depth, params)
    if hi < 0.0:
        return Verdict.CERTIFIED_PRUNED
    certified = lo >= 0.0
    if certified:
        m, n = w.tail_len, w.head_len
        for k in range(max(-shift_window, 1 - m), min(shift_window, n - 1) + 1):
            if k == 0:
                continue
            slo, _ = eval_pq_cylinder(redot(w, k), depth, params)
            if slo < 0.0:
                certified = False
                break
    return Verdict.CERTIFIED_ADMISSIBLE_WINDOW if certified else Verdict.UNKNOWN


# ---------------------------------------------------------------------------
# vectorized engines

# PGM gray codes for raster cells.
PGM_PRUNED = 0
PGM_UNKNOWN = 128
PGM_ADMISSIBLE = 255

_VERDICT_CODE = {
    Verdict.CERTIFIED_PRUNED: PGM_PRUNED,
    Verdict.UNKNOWN: PGM_UNKNOWN,
    Verdict.CERTIFIED_ADMISSIBLE_WINDOW: PGM_ADMISSIBLE,
}
_CODE_VERDICT = {v: k for k, v in _VERDICT_CODE.items()}


def verdict_code(v: Verdict) -> int:
    return _VERDICT_CODE[v]


def code_verdict(code: int) -> Verdict:
    return _CODE_VERDICT[code]


def _vec_recip_shifted(shift: np.ndarray, lo: np.ndarray, hi: np.ndarray):
    den_lo = shift + lo
    den_hi = shift + hi
    if not bool(np.all((den_lo > 0.0) | (den_hi < 0.0))):
        raise ArithmeticError("continued-fraction denominator straddles zero")
    return 1.0 / den_hi, 1.0 / den_lo


def _vec_scale(b: float, lo: np.ndarray, hi: np.ndarray):
    return (b * lo, b * hi) if b >= 0 else (b * hi, b * lo)


def _vec_mul(alo, ahi, blo, bhi):
    p1 = alo * blo
    p2 = alo * bhi
    p3 = ahi * blo
    p4 = ahi * bhi
    return np.minimum(np.minimum(p1, p2), np.minimum(p3, p4)), np.maximum(
        np.maximum(p1, p2), np.maximum(p3, p4)
    )


def _heads_matrix_coordinate_order(n: int) -> np.ndarray:
    """Symbols (+-1) of all length-n heads, row rank = head_coordinate order."""
    codes = np.arange(1 << n, dtype=np.int64)
    sym = np.empty((1 << n, n), dtype=np.int8)
    parity = np.zeros(1 << n, dtype=np.int64)
    for k in range(n):
        bit = (codes >> (n - 1 - k)) & 1
        s_bit = bit ^ parity
        sym[:, k] = (2 * s_bit - 1).astype(np.int8)
        parity = parity ^ s_bit
    return sym


def _tails_matrix_coordinate_order(m: int, b_sign: int = PLUS) -> np.ndarray:
    """Symbols of all length-m tails, row rank = tail_coordinate order.

    Column d holds the symbol at index -(d+1): depth-major layout, matching
    the order the continued-fraction sweep consumes symbols.
    """
    codes = np.arange(1 << m, dtype=np.int64)
    sym = np.empty((1 << m, m), dtype=np.int8)
    parity = np.zeros(1 << m, dtype=np.int64)
    counted_bit = 0 if b_sign >= 0 else 1
    for k in range(m):
        bit = (codes >> (m - 1 - k)) & 1
        s_bit = bit ^ parity
        sym[:, k] = (2 * s_bit - 1).astype(np.int8)
        parity = parity ^ (s_bit ^ counted_bit ^ 1)
    return sym


def _p_intervals_for_tails(sym_by_depth: np.ndarray, depth: int, params: Params):
    """Vectorized _p_interval over tail rows; column d = symbol at index -(d+1)."""
    a, b = params.a, params.b
    c = a - abs(b)
    rad = 1.0 / c
    rows, m = sym_by_depth.shape
    d_eff = max(0, min(depth, m - 1))
    shape = (rows,)
    xlo = np.full(shape, -rad)
    xhi = np.full(shape, rad)
    chain = {}
    for j in range(m, 1, -1):
        slo, shi = _vec_scale(b, xlo, xhi)
        xlo, xhi = _vec_recip_shifted(-a * sym_by_depth[:, j - 1].astype(np.float64), slo, shi)
        if j <= d_eff + 1:
            chain[j] = (xlo, xhi)
    plo = np.ones(shape)
    phi = np.ones(shape)
    prod_lo = np.ones(shape)
    prod_hi = np.ones(shape)
    for j in range(2, d_eff + 2):
        flo, fhi = _vec_scale(-b, *chain[j])
        prod_lo, prod_hi = _vec_mul(prod_lo, prod_hi, flo, fhi)
        plo += prod_lo
        phi += prod_hi
    ratio = abs(b) / c
    prod_max = np.maximum(np.abs(prod_lo), np.abs(prod_hi))
    tail_bound = prod_max * (ratio / (1.0 - ratio)) if ratio < 1.0 else math.inf
    return plo - tail_bound, phi + tail_bound


def _q_intervals_for_heads(sym: np.ndarray, depth: int, params: Params):
    """Vectorized _q_interval over head rows; column i = symbol at index i."""
    a, b = params.a, params.b
    c = a - abs(b)
    rad = 1.0 / c
    rows, n = sym.shape
    d_eff = min(depth, n - 1)
    shape = (rows,)
    xlo = np.full(shape, -rad)
    xhi = np.full(shape, rad)
    chain = {}
    for j in range(n - 1, -1, -1):
        slo, shi = _vec_scale(b, xlo, xhi)
        xlo, xhi = _vec_recip_shifted(a * sym[:, j].astype(np.float64), slo, shi)
        if j <= d_eff:
            chain[j] = (xlo, xhi)
    qlo = np.zeros(shape)
    qhi = np.zeros(shape)
    prod_lo = np.ones(shape)
    prod_hi = np.ones(shape)
    for t in range(d_eff + 1):
        prod_lo, prod_hi = _vec_mul(prod_lo, prod_hi, *chain[t])
        if t % 2 == 0:
            qlo += prod_lo
            qhi += prod_hi
        else:
            qlo -= prod_hi
            qhi -= prod_lo
    prod_max = np.maximum(np.abs(prod_lo), np.abs(prod_hi))
    tail_bound = prod_max / (c - 1.0)
    return qlo - tail_bound, qhi + tail_bound


@dataclass(frozen=True)
class Raster:
    """Verdict grid over all (tail, head) cylinders of a fixed word length.

    cells[i, j] is the PGM code of the word whose tail has rank i and head
    rank j in the respective coordinate orders (rank 0 = coordinate 0).
    """

    params: Params
    word_len: int
    depth: int
    cells: np.ndarray

    @property
    def width(self) -> int:
        return int(self.cells.shape[1])

    @property
    def height(self) -> int:
        return int(self.cells.shape[0])

    @property
    def pruned_count(self) -> int:
        return int(np.count_nonzero(self.cells == PGM_PRUNED))

    @property
    def admissible_count(self) -> int:
        return int(np.count_nonzero(self.cells == PGM_ADMISSIBLE))

    @property
    def unknown_count(self) -> int:
        return int(np.count_nonzero(self.cells == PGM_UNKNOWN))


def pruned_region_raster(
    params: Params, word_len: int, depth: int, cell_limit: int = 1 << 22
) -> Raster:
    """Classify all 4^word_len cylinders with word_len symbols per side.

    Cells certify membership of the whole cylinder: entirely negative
    enclosure of (p - q) at the dot -> pruned; entirely non-negative ->
    admissible window; otherwise unknown.
    """
    params.require_hyperbolic()
    if word_len < 1:
        raise ValueError("word_len must be >= 1")
    cells_total = 1 << (2 * word_len)
    if cells_total > cell_limit:
        raise BudgetExceeded(f"4^{word_len} = {cells_total} cells exceed limit {cell_limit}")
    tails = _tails_matrix_coordinate_order(word_len, PLUS if params.b >= 0 else MINUS)
    heads = _heads_matrix_coordinate_order(word_len)
    plo, phi = _p_intervals_for_tails(tails, depth, params)
    qlo, qhi = _q_intervals_for_heads(heads, depth, params)
    diff_lo = plo[:, None] - qhi[None, :]
    diff_hi = phi[:, None] - qlo[None, :]
    cells = np.full(diff_lo.shape, PGM_UNKNOWN, dtype=np.uint8)
    cells[diff_hi < 0.0] = PGM_PRUNED
    cells[diff_lo >= 0.0] = PGM_ADMISSIBLE
    return Raster(params=params, word_len=word_len, depth=depth, cells=cells)


def _binary_symbols(n: int) -> np.ndarray:
    codes = np.arange(1 << n, dtype=np.int64)
    sym = np.empty((1 << n, n), dtype=np.int8)
    for k in range(n):
        sym[:, k] = (2 * ((codes >> k) & 1) - 1).astype(np.int8)
    return sym


def _window_masks(params: Params, n: int, depth: int):
    """Per-word masks over all 2^n symbol blocks of length n.

    pruned_any[w]: some dot placement inside the block has an entirely
    negative enclosure, so the block cannot occur in any admissible sequence.
    cert_all[w]: every placement has an entirely non-negative enclosure.
    """
    a, b = params.a, params.b
    c = a - abs(b)
    rad = 1.0 / c
    count = 1 << n
    sym = _binary_symbols(n).astype(np.float64)

    # R[j] encloses the ascending continued fraction r_j of the suffix j..n-1.
    r_chain: list[tuple[np.ndarray, np.ndarray]] = [None] * n
    xlo = np.full(count, -rad)
    xhi = np.full(count, rad)
    for j in range(n - 1, -1, -1):
        slo, shi = _vec_scale(b, xlo, xhi)
        xlo, xhi = _vec_recip_shifted(a * sym[:, j], slo, shi)
        r_chain[j] = (xlo, xhi)

    # Y[t] encloses the descending continued fraction ending at position t,
    # i.e. s_{-(k-t)} for the placement with the dot at k.
    y_chain: list[tuple[np.ndarray, np.ndarray]] = [None] * n
    ylo = np.full(count, -rad)
    yhi = np.full(count, rad)
    for t in range(n):
        slo, shi = _vec_scale(b, ylo, yhi)
        ylo, yhi = _vec_recip_shifted(-a * sym[:, t], slo, shi)
        y_chain[t] = (ylo, yhi)

    ratio = abs(b) / c
    pruned_any = np.zeros(count, dtype=bool)
    cert_all = np.ones(count, dtype=bool)
    for k in range(n):
        # q side of the placement: head = positions k..n-1.
        dq = min(depth, n - k - 1)
        qlo = np.zeros(count)
        qhi = np.zeros(count)
        prod_lo = np.ones(count)
        prod_hi = np.ones(count)
        for t in range(dq + 1):
            prod_lo, prod_hi = _vec_mul(prod_lo, prod_hi, *r_chain[k + t])
            if t % 2 == 0:
                qlo += prod_lo
                qhi += prod_hi
            else:
                qlo -= prod_hi
                qhi -= prod_lo
        q_tail = np.maximum(np.abs(prod_lo), np.abs(prod_hi)) / (c - 1.0)
        qlo -= q_tail
        qhi += q_tail

        # p side: tail = positions 0..k-1; term k' uses s_{-(k'+1)} = Y[k-k'-1].
        dp = max(0, min(depth, k - 1))
        plo = np.ones(count)
        phi = np.ones(count)
        prod_lo = np.ones(count)
        prod_hi = np.ones(count)
        for kk in range(1, dp + 1):
            flo, fhi = _vec_scale(-b, *y_chain[k - kk - 1])
            prod_lo, prod_hi = _vec_mul(prod_lo, prod_hi, flo, fhi)
            plo += prod_lo
            phi += prod_hi
        if ratio < 1.0:
            p_tail = np.maximum(np.abs(prod_lo), np.abs(prod_hi)) * (ratio / (1.0 - ratio))
        else:
            p_tail = math.inf
        plo -= p_tail
        phi += p_tail

        pruned_any |= (phi - qlo) < 0.0
        cert_all &= (plo - qhi) >= 0.0
    return pruned_any, cert_all


def admissible_word_count(
    params: Params, n: int, depth: int, budget: int = 1 << 24
) -> tuple[int, int]:
    """Bracket the number of admissible length-n blocks.

    upper counts blocks with no certified-pruned dot placement; lower counts
    blocks certified non-negative at every placement.  Unknown verdicts stay
    in upper and leave lower, so lower <= true count <= upper holds whenever
    the enclosures do.
    """
    params.require_hyperbolic()
    if n < 1:
        raise ValueError("n must be >= 1")
    if (1 << n) * n > budget:
        raise BudgetExceeded(f"2^{n} blocks of length {n} exceed the budget {budget}")
    pruned_any, cert_all = _window_masks(params, n, depth)
    upper = int(np.count_nonzero(~pruned_any))
    lower = int(np.count_nonzero(cert_all & ~pruned_any))
    return lower, upper


def entropy_estimate(params: Params, n_max: int, depth: int) -> tuple[float, float]:
    """Entropy bracket from admissible block counts.

    h_upper = min over n <= n_max of log(upper_n)/n (upper counts are
    submultiplicative, so every n gives an upper bound); h_lower =
    log(lower_{n_max})/n_max, clamped into [0, h_upper].
    """
    counts = [admissible_word_count(params, n, depth) for n in range(1, n_max + 1)]
    h_upper = math.inf
    for n, (_, upper) in enumerate(counts, start=1):
        h_upper = min(h_upper, math.log(upper) / n if upper > 0 else 0.0)
    h_upper = max(h_upper, 0.0)
    lower = counts[-1][0]
    h_lower = math.log(lower) / n_max if lower > 0 else 0.0
    h_lower = min(max(h_lower, 0.0), h_upper)
    return h_lower, h_upper
