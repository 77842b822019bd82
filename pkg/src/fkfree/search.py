"""Exact ex(n, F_k) at small orders.

Two independent routes to the same number:

* ``exhaustive_max`` scans every 0-1 matrix with a vectorised numpy kernel
  (its own saturating power code, sharing nothing with ``core``).
* ``bnb_max`` is a depth-first branch and bound over arc slots that prunes on
  F_k violations, which are monotone under arc addition.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from typing import Iterator, Optional

import numpy as np

from .constructions import SIMPLE, STRICT, check_mode
from .core import Digraph, is_fk_free, rows_fk_free

EXHAUSTIVE_MAX_N = 5
CANONICAL_MAX_N = 8
DEFAULT_MAX_NODES = 10**8
DEFAULT_TIME_LIMIT = 300.0
_CHUNK_BITS = 20

EXACT = "exact"
LOWER_BOUND = "lower-bound"


@dataclass
class SearchStats:
    nodes: int = 0
    violation_prunes: int = 0
    bound_prunes: int = 0
    wall_time: float = 0.0

    @property
    def prunes(self) -> int:
        return self.violation_prunes + self.bound_prunes


@dataclass
class ExtremalResult:
    n: int
    k: int
    mode: str
    best: int
    witness: Digraph
    status: str
    stats: SearchStats = field(default_factory=SearchStats)

    @property
    def exact(self) -> bool:
        return self.status == EXACT


def arc_slots(n: int, mode: str) -> list[tuple[int, int]]:
    """Legal arc slots in row-major order."""
    check_mode(mode)
    return [(i, j) for i in range(n) for j in range(n) if mode == SIMPLE or i != j]


def _check_params(n: int, k: int) -> None:
    if n < 1:
        raise ValueError(f"order must be >= 1, got {n}")
    if k < 1:
        raise ValueError(f"walk length must be >= 1, got {k}")


# ---------------------------------------------------------------------------
# exhaustive oracle


def _slot_codes(n: int, mode: str, chunk: np.ndarray) -> np.ndarray:
    """Expand compressed slot indices into row-major n*n bit codes."""
    if mode == SIMPLE:
        return chunk
    codes = np.zeros_like(chunk)
    for b, (i, j) in enumerate(arc_slots(n, mode)):
        codes |= ((chunk >> np.uint64(b)) & np.uint64(1)) << np.uint64(i * n + j)
    return codes


def _scan(n: int, k: int, mode: str) -> Iterator[tuple[np.ndarray, np.ndarray]]:
    """Yield (codes, arc counts) of every F_k-free matrix, chunk by chunk."""
    slots = len(arc_slots(n, mode))
    total = 1 << slots
    step = min(total, 1 << _CHUNK_BITS)
    row_mask = np.uint64((1 << n) - 1)
    for start in range(0, total, step):
        chunk = np.arange(start, start + step, dtype=np.uint64)
        codes = _slot_codes(n, mode, chunk)
        rows = [((codes >> np.uint64(n * i)) & row_mask).astype(np.uint8) for i in range(n)]
        ones = list(rows)
        twos = [np.zeros_like(r) for r in rows]
        for _ in range(k - 1):
            new_ones, new_twos = [], []
            for o, t in zip(ones, twos):
                acc1 = np.zeros_like(o)
                acc2 = np.zeros_like(o)
                for l in range(n):
                    hit = (o >> np.uint8(l)) & np.uint8(1)
                    sel = np.uint8(0) - hit
                    heavy = np.uint8(0) - ((t >> np.uint8(l)) & np.uint8(1))
                    r = rows[l] & sel
                    acc2 |= (r & heavy) | (acc1 & r)
                    acc1 |= r
                new_ones.append(acc1)
                new_twos.append(acc2)
            ones, twos = new_ones, new_twos
        bad = np.zeros(step, dtype=bool)
        for t in twos:
            bad |= t != 0
        good = codes[~bad]
        yield good, np.bitwise_count(good).astype(np.int64)


def _code_to_digraph(n: int, code: int) -> Digraph:
    mask = (1 << n) - 1
    return Digraph(n, [(code >> (n * i)) & mask for i in range(n)])


def _scan_extremal(n: int, k: int, mode: str) -> tuple[int, list[int], SearchStats]:
    _check_params(n, k)
    check_mode(mode)
    if n > EXHAUSTIVE_MAX_N:
        raise ValueError(
            f"exhaustive search is capped at n={EXHAUSTIVE_MAX_N} (2^(n^2) matrices); "
            f"use bnb_max for n={n}"
        )
    t0 = time.perf_counter()
    best = -1
    winners: list[np.ndarray] = []
    scanned = 0
    for codes, counts in _scan(n, k, mode):
        scanned += 1 << min(len(arc_slots(n, mode)), _CHUNK_BITS)
        if not len(codes):
            continue
        top = int(counts.max())
        if top > best:
            best, winners = top, []
        if top == best:
            winners.append(codes[counts == best])
    stats = SearchStats(nodes=scanned, wall_time=time.perf_counter() - t0)
    found = sorted(int(c) for block in winners for c in block)
    return best, found, stats


def exhaustive_max(n: int, k: int, mode: str = SIMPLE) -> ExtremalResult:
    best, codes, stats = _scan_extremal(n, k, mode)
    witness = _code_to_digraph(n, codes[0])
    return ExtremalResult(n, k, mode, best, witness, EXACT, stats)


# ---------------------------------------------------------------------------
# branch and bound


class _BudgetExhausted(Exception):
    pass


def bnb_max(
    n: int,
    k: int,
    mode: str = SIMPLE,
    max_nodes: int = DEFAULT_MAX_NODES,
    time_limit: float = DEFAULT_TIME_LIMIT,
    seed: Optional[Digraph] = None,
) -> ExtremalResult:
    """Largest F_k-free digraph by depth-first branch and bound over arc slots.

    Slots are decided in row-major order, inclusion first. A branch is cut when
    the partial digraph already contains a member of F_k (no completion can
    remove it) or when it cannot beat the incumbent even if every undecided
    slot is included. ``status`` is exact only if the tree was exhausted within
    budget.
    """
    _check_params(n, k)
    check_mode(mode)
    if seed is not None:
        if seed.n != n:
            raise ValueError(f"seed has order {seed.n}, expected {n}")
        if mode == STRICT and not seed.is_strict():
            raise ValueError("strict search seeded with a digraph that has loops")
        if not is_fk_free(seed, k):
            raise ValueError(f"seed is not F_{k}-free")

    slots = arc_slots(n, mode)
    total = len(slots)
    stats = SearchStats()
    rows = [0] * n
    best = seed.size if seed is not None else 0
    best_rows = list(seed.rows) if seed is not None else [0] * n
    t0 = time.perf_counter()
    deadline = t0 + time_limit

    def visit(depth: int, size: int) -> None:
        nonlocal best, best_rows
        stats.nodes += 1
        if stats.nodes > max_nodes or (stats.nodes & 0xFFF == 0 and time.perf_counter() > deadline):
            raise _BudgetExhausted
        if size > best:
            best, best_rows = size, list(rows)
        if depth == total:
            return
        if size + total - depth <= best:
            stats.bound_prunes += 1
            return
        i, j = slots[depth]
        bit = 1 << j
        rows[i] |= bit
        if rows_fk_free(rows, k):
            visit(depth + 1, size + 1)
        else:
            stats.violation_prunes += 1
        rows[i] &= ~bit
        if size + total - depth - 1 > best:
            visit(depth + 1, size)
        else:
            stats.bound_prunes += 1

    status = EXACT
    try:
        visit(0, 0)
    except _BudgetExhausted:
        status = LOWER_BOUND
    stats.wall_time = time.perf_counter() - t0
    return ExtremalResult(n, k, mode, best, Digraph(n, best_rows), status, stats)


# ---------------------------------------------------------------------------
# isomorphism classes


@dataclass(frozen=True, order=True)
class CanonicalForm:
    n: int
    bits: str


def canonical_form(D: Digraph) -> CanonicalForm:
    """Lexicographically least row-major adjacency string over all relabelings."""
    n = D.n
    if n > CANONICAL_MAX_N:
        raise ValueError(f"canonical_form is capped at n={CANONICAL_MAX_N}, got {n}")
    mat = D.matrix()
    best = None
    for perm in itertools.permutations(range(n)):
        key = tuple(
            sum(mat[perm[i]][perm[j]] << (n - 1 - j) for j in range(n)) for i in range(n)
        )
        if best is None or key < best:
            best = key
    bits = "".join(format(r, f"0{n}b") for r in best)
    return CanonicalForm(n, bits)


def digraph_from_canonical(form: CanonicalForm) -> Digraph:
    n = form.n
    return Digraph.from_matrix(
        [[int(form.bits[i * n + j]) for j in range(n)] for i in range(n)]
    )


def enumerate_extremal(n: int, k: int, mode: str = SIMPLE) -> list[Digraph]:
    """One representative (in canonical labeling) per class of EX(n, F_k)."""
    _, codes, _ = _scan_extremal(n, k, mode)
    forms = {canonical_form(_code_to_digraph(n, c)) for c in codes}
    return [digraph_from_canonical(f) for f in sorted(forms)]
