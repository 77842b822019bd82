"""Blow-ups and the extremal families B, H, T and T_{3,n}.

Parts always occupy contiguous index ranges: V1 first, then V2, then V3.
An extra arc is described by positions inside its part; ``(p, p)`` is a loop.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import Digraph

SIMPLE = "simple"
STRICT = "strict"
MODES = (SIMPLE, STRICT)


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    return mode


@dataclass(frozen=True)
class PartitionSpec:
    sizes: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(self.sizes))
        if not self.sizes or any(s < 1 for s in self.sizes):
            raise ValueError(f"part sizes must all be >= 1, got {self.sizes}")

    @property
    def n(self) -> int:
        return sum(self.sizes)

    def balanced(self) -> bool:
        return max(self.sizes) - min(self.sizes) <= 1

    def offsets(self) -> list[int]:
        out, acc = [], 0
        for s in self.sizes:
            out.append(acc)
            acc += s
        return out


@dataclass(frozen=True, order=True)
class T3Variant:
    """A member of T_{3,n}: balanced part sizes plus the extra arc inside V2."""

    sizes: tuple[int, int, int]
    extra: tuple[int, int]

    def __post_init__(self):
        object.__setattr__(self, "sizes", tuple(self.sizes))
        object.__setattr__(self, "extra", tuple(self.extra))
        if len(self.sizes) != 3 or any(s < 1 for s in self.sizes):
            raise ValueError(f"need three positive part sizes, got {self.sizes}")
        n = self.n
        lo, hi = n // 3, -(-n // 3)
        if any(s not in (lo, hi) for s in self.sizes):
            raise ValueError(f"sizes {self.sizes} are not balanced for n={n}")
        p, q = self.extra
        n2 = self.sizes[1]
        if not (0 <= p < n2 and 0 <= q < n2):
            raise ValueError(f"extra arc {self.extra} not inside the middle part of size {n2}")

    @property
    def n(self) -> int:
        return sum(self.sizes)

    @property
    def loop(self) -> bool:
        return self.extra[0] == self.extra[1]

    def extra_arc(self) -> tuple[int, int]:
        """The extra arc in global vertex indices."""
        base = self.sizes[0]
        return base + self.extra[0], base + self.extra[1]

    def label(self) -> str:
        kind = "loop" if self.loop else "arc"
        return f"T3{self.sizes}+{kind}{self.extra}"


def blow_up(D: Digraph, spec: PartitionSpec | Sequence[int]) -> Digraph:
    if not isinstance(spec, PartitionSpec):
        spec = PartitionSpec(tuple(spec))
    if len(spec.sizes) != D.n:
        raise ValueError(f"{len(spec.sizes)} part sizes given for a digraph of order {D.n}")
    offsets = spec.offsets()
    part_masks = [((1 << s) - 1) << off for s, off in zip(spec.sizes, offsets)]
    rows = []
    for i, size in enumerate(spec.sizes):
        row = 0
        for j in range(D.n):
            if D.has_arc(i, j):
                row |= part_masks[j]
        rows.extend([row] * size)
    return Digraph(spec.n, rows)


def transitive_tournament(order: int) -> Digraph:
    return Digraph.from_arcs(order, [(i, j) for i in range(order) for j in range(i + 1, order)])


def build_B(n1: int, n2: int) -> Digraph:
    return blow_up(Digraph.from_arcs(2, [(0, 1)]), (n1, n2))


def build_T(sizes: Sequence[int]) -> Digraph:
    return blow_up(transitive_tournament(3), tuple(sizes))


def balanced_triples(n: int) -> list[tuple[int, int, int]]:
    if n < 3:
        raise ValueError(f"T_{{3,n}} needs n >= 3, got {n}")
    lo, hi = n // 3, -(-n // 3)
    choices = sorted({lo, hi})
    return [
        (a, b, c)
        for a in choices
        for b in choices
        for c in choices
        if a + b + c == n
    ]


def build_T3(variant: T3Variant) -> Digraph:
    return build_T(variant.sizes).with_arc(*variant.extra_arc())


def enumerate_T3_family(n: int, mode: str = SIMPLE) -> list[T3Variant]:
    """One variant per isomorphism class of T_{3,n} in the given mode."""
    check_mode(mode)
    variants = []
    for sizes in balanced_triples(n):
        if mode == SIMPLE:
            variants.append(T3Variant(sizes, (0, 0)))
        if sizes[1] >= 2:
            variants.append(T3Variant(sizes, (0, 1)))
    return variants


def build_H(n1: int, n2: int, extra: tuple[int, int] = (0, 0)) -> Digraph:
    """B(V1, V2) plus one arc or loop inside V1."""
    if n1 < 1 or n2 < 0:
        raise ValueError(f"need n1 >= 1 and n2 >= 0, got ({n1}, {n2})")
    p, q = extra
    if not (0 <= p < n1 and 0 <= q < n1):
        raise ValueError(f"extra arc {extra} has an end outside V1 of size {n1}")
    if n2 == 0:
        base = Digraph.empty(n1)
    else:
        base = build_B(n1, n2)
    return base.with_arc(p, q)


def recognize_T3(D: Digraph) -> Optional[T3Variant]:
    """Recover the T_{3,n} variant D is isomorphic to, or None."""
    n = D.n
    if n < 3:
        return None
    v3 = [v for v in range(n) if not D.rows[v]]
    v1 = [v for v in range(n) if not D.cols[v]]
    if set(v1) & set(v3):
        return None
    taken = set(v1) | set(v3)
    v2 = [v for v in range(n) if v not in taken]
    sizes = (len(v1), len(v2), len(v3))
    if min(sizes) < 1:
        return None
    lo, hi = n // 3, -(-n // 3)
    if any(s not in (lo, hi) for s in sizes):
        return None
    if D.size != sizes[0] * sizes[1] + sizes[0] * sizes[2] + sizes[1] * sizes[2] + 1:
        return None
    m2 = sum(1 << v for v in v2)
    m3 = sum(1 << v for v in v3)
    for v in v1:
        if D.rows[v] != m2 | m3:
            return None
    extra = None
    for v in v2:
        inside = D.rows[v] & m2
        if D.rows[v] & ~(m2 | m3) or D.rows[v] & m3 != m3:
            return None
        if inside:
            if extra is not None or inside.bit_count() != 1:
                return None
            extra = (v, inside.bit_length() - 1)
    if extra is None:
        return None
    pos = {v: idx for idx, v in enumerate(v2)}
    p, q = pos[extra[0]], pos[extra[1]]
    # relabel to the canonical placement; any placement is isomorphic
    canonical = (0, 0) if p == q else (0, 1)
    return T3Variant(sizes, canonical)
