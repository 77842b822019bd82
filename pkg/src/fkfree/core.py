"""Digraphs as bit tables, saturating walk counts and the forbidden-walk predicates.

A vertex set is always ``range(n)``. Row ``i`` of the arc table is an int whose
bit ``j`` is set iff the arc ``i -> j`` is present; loops sit on the diagonal.
"""

from __future__ import annotations

from typing import Iterable, Iterator, Optional, Sequence


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _transpose(rows: Sequence[int], n: int) -> tuple[int, ...]:
    cols = [0] * n
    for i, row in enumerate(rows):
        bit = 1 << i
        for j in _bits(row):
            cols[j] |= bit
    return tuple(cols)


class Digraph:
    """Immutable simple digraph on vertices ``0..n-1`` (loops allowed)."""

    __slots__ = ("n", "rows", "cols", "_size")

    def __init__(self, n: int, rows: Sequence[int], cols: Optional[Sequence[int]] = None):
        if n < 1:
            raise ValueError(f"digraph order must be >= 1, got {n}")
        if len(rows) != n:
            raise ValueError(f"expected {n} rows, got {len(rows)}")
        full = (1 << n) - 1
        for i, row in enumerate(rows):
            if row < 0 or row & ~full:
                raise ValueError(f"row {i} has bits outside 0..{n - 1}")
        self.n = n
        self.rows = tuple(rows)
        self.cols = tuple(cols) if cols is not None else _transpose(self.rows, n)
        self._size = sum(row.bit_count() for row in self.rows)

    @classmethod
    def empty(cls, n: int) -> "Digraph":
        return cls(n, [0] * n, [0] * n)

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int]]) -> "Digraph":
        rows = [0] * n
        for i, j in arcs:
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"arc ({i}, {j}) out of range for n={n}")
            rows[i] |= 1 << j
        return cls(n, rows)

    @classmethod
    def from_matrix(cls, matrix: Sequence[Sequence[int]]) -> "Digraph":
        n = len(matrix)
        rows = []
        for i, line in enumerate(matrix):
            if len(line) != n:
                raise ValueError(f"row {i} has length {len(line)}, expected {n}")
            row = 0
            for j, value in enumerate(line):
                if value not in (0, 1):
                    raise ValueError(f"entry ({i}, {j}) is {value!r}, expected 0 or 1")
                if value:
                    row |= 1 << j
            rows.append(row)
        return cls(n, rows)

    @property
    def size(self) -> int:
        """Number of arcs, loops included."""
        return self._size

    def has_arc(self, i: int, j: int) -> bool:
        return bool(self.rows[i] >> j & 1)

    def arcs(self) -> list[tuple[int, int]]:
        """All arcs in row-major order."""
        return [(i, j) for i, row in enumerate(self.rows) for j in _bits(row)]

    def matrix(self) -> list[list[int]]:
        return [[row >> j & 1 for j in range(self.n)] for row in self.rows]

    def is_strict(self) -> bool:
        return not any(row >> i & 1 for i, row in enumerate(self.rows))

    def with_arc(self, i: int, j: int) -> "Digraph":
        self._check_vertex(i)
        self._check_vertex(j)
        rows = list(self.rows)
        cols = list(self.cols)
        rows[i] |= 1 << j
        cols[j] |= 1 << i
        return Digraph(self.n, rows, cols)

    def without_arc(self, i: int, j: int) -> "Digraph":
        self._check_vertex(i)
        self._check_vertex(j)
        rows = list(self.rows)
        cols = list(self.cols)
        rows[i] &= ~(1 << j)
        cols[j] &= ~(1 << i)
        return Digraph(self.n, rows, cols)

    def relabel(self, perm: Sequence[int]) -> "Digraph":
        """Image of the digraph under ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise ValueError("perm must be a permutation of range(n)")
        rows = [0] * self.n
        for i, row in enumerate(self.rows):
            image = 0
            for j in _bits(row):
                image |= 1 << perm[j]
            rows[perm[i]] = image
        return Digraph(self.n, rows)

    def out_neighbours(self, v: int) -> set[int]:
        return set(_bits(self.rows[v]))

    def in_neighbours(self, v: int) -> set[int]:
        return set(_bits(self.cols[v]))

    def out_degree(self, v: int) -> int:
        return self.rows[v].bit_count()

    def in_degree(self, v: int) -> int:
        return self.cols[v].bit_count()

    def _check_vertex(self, v: int) -> None:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for n={self.n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self.n == other.n and self.rows == other.rows

    def __hash__(self) -> int:
        return hash((self.n, self.rows))

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, arcs={self.arcs()})"


class SaturatedMatrix:
    """Square matrix of non-negative counts clipped at ``cap`` (``cap`` reads as ">= cap")."""

    __slots__ = ("n", "cap", "entries")

    def __init__(self, entries: Sequence[Sequence[int]], cap: int = 2):
        if cap < 1:
            raise ValueError("cap must be >= 1")
        self.n = len(entries)
        self.cap = cap
        self.entries = tuple(tuple(min(cap, int(x)) for x in row) for row in entries)
        for row in self.entries:
            if len(row) != self.n:
                raise ValueError("matrix must be square")
            if any(x < 0 for x in row):
                raise ValueError("entries must be non-negative")

    @classmethod
    def from_digraph(cls, D: Digraph, cap: int = 2) -> "SaturatedMatrix":
        return cls(D.matrix(), cap)

    def _value_planes(self) -> list[list[int]]:
        # planes[i][v] = bitmask of columns j with entry (i, j) == v, for v in 1..cap
        planes = []
        for row in self.entries:
            masks = [0] * (self.cap + 1)
            for j, x in enumerate(row):
                if x:
                    masks[x] |= 1 << j
            planes.append(masks)
        return planes

    def __matmul__(self, other: "SaturatedMatrix") -> "SaturatedMatrix":
        if other.n != self.n or other.cap != self.cap:
            raise ValueError("operands must share dimension and cap")
        n, cap = self.n, self.cap
        left = self._value_planes()
        # column planes of the right operand
        right = [[0] * (cap + 1) for _ in range(n)]
        for l, row in enumerate(other.entries):
            for j, x in enumerate(row):
                if x:
                    right[j][x] |= 1 << l
        out = []
        for i in range(n):
            masks = left[i]
            if not any(masks):
                out.append([0] * n)
                continue
            row = []
            for j in range(n):
                total = 0
                for a in range(1, cap + 1):
                    if not masks[a]:
                        continue
                    for b in range(1, cap + 1):
                        hit = masks[a] & right[j][b]
                        if hit:
                            total += a * b * hit.bit_count()
                            if total >= cap:
                                break
                    if total >= cap:
                        break
                row.append(min(total, cap))
            out.append(row)
        return SaturatedMatrix(out, cap)

    def max_entry(self) -> int:
        return max((max(row) for row in self.entries), default=0)

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SaturatedMatrix):
            return NotImplemented
        return self.cap == other.cap and self.entries == other.entries

    def __repr__(self) -> str:
        return f"SaturatedMatrix(cap={self.cap}, entries={[list(r) for r in self.entries]})"


def _multiply_rows(
    rows: Sequence[int], n: int, cap: int, counts: list[list[int]]
) -> list[list[int]]:
    # counts @ A where A is given by its bit rows; short-circuits saturated rows
    full = (1 << n) - 1
    out = []
    for crow in counts:
        acc = [0] * n
        saturated = 0
        for l, c in enumerate(crow):
            if not c:
                continue
            target = rows[l] & ~saturated
            for j in _bits(target):
                x = acc[j] + c
                if x >= cap:
                    x = cap
                    saturated |= 1 << j
                acc[j] = x
            if saturated == full:
                break
        out.append(acc)
    return out


def walk_counts(D: Digraph, k: int, cap: int = 2) -> SaturatedMatrix:
    """Entry (i, j) is min(cap, number of length-k walks from i to j)."""
    if k < 1:
        raise ValueError(f"walk length must be >= 1, got {k}")
    if cap < 2:
        raise ValueError(f"cap must be >= 2, got {cap}")
    counts = D.matrix()
    for _ in range(k - 1):
        counts = _multiply_rows(D.rows, D.n, cap, counts)
    return SaturatedMatrix(counts, cap)


def _power_planes(rows: Sequence[int], k: int) -> tuple[list[int], list[int]]:
    # A^k saturated at 2 as two bitplanes: ones[i] = {j : count >= 1}, twos[i] = {j : count >= 2}
    ones = list(rows)
    twos = [0] * len(rows)
    for _ in range(k - 1):
        new_ones = []
        new_twos = []
        for o, t in zip(ones, twos):
            acc1 = acc2 = 0
            for l in _bits(o):
                r = rows[l]
                if t >> l & 1:
                    acc2 |= r
                else:
                    acc2 |= acc1 & r
                acc1 |= r
            new_ones.append(acc1)
            new_twos.append(acc2)
        ones, twos = new_ones, new_twos
    return ones, twos


def rows_fk_free(rows: Sequence[int], k: int) -> bool:
    """F_k-freeness straight from bit rows; the hot path used by the search code."""
    _, twos = _power_planes(rows, k)
    return not any(twos)


def is_fk_free(D: Digraph, k: int) -> bool:
    """True iff no two distinct length-k walks share both endpoints."""
    if k < 1:
        raise ValueError(f"walk length must be >= 1, got {k}")
    return rows_fk_free(D.rows, k)


def witness_walk_pair(D: Digraph, k: int) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Two distinct length-k walks with common endpoints, or None if D is F_k-free."""
    if k < 1:
        raise ValueError(f"walk length must be >= 1, got {k}")
    _, twos = _power_planes(D.rows, k)
    pair = next(((s, (t & -t).bit_length() - 1) for s, t in enumerate(twos) if t), None)
    if pair is None:
        return None
    s, t = pair
    # reach[r] = vertices with a walk of length r to t
    reach = [1 << t]
    for _ in range(k):
        prev = reach[-1]
        reach.append(sum(1 << v for v in range(D.n) if D.rows[v] & prev))

    found: list[tuple[int, ...]] = []

    def extend(walk: list[int]) -> None:
        remaining = k - (len(walk) - 1)
        if remaining == 0:
            found.append(tuple(walk))
            return
        for v in _bits(D.rows[walk[-1]] & reach[remaining - 1]):
            walk.append(v)
            extend(walk)
            walk.pop()
            if len(found) == 2:
                return

    extend([s])
    return found[0], found[1]


def find_walk(D: Digraph, k: int) -> Optional[tuple[int, ...]]:
    """Some walk of length k (lexicographically first start), or None if there is none."""
    if k < 1:
        raise ValueError(f"walk length must be >= 1, got {k}")
    # alive[r] = vertices that start some walk of length r
    alive = [(1 << D.n) - 1]
    for _ in range(k):
        prev = alive[-1]
        alive.append(sum(1 << v for v in range(D.n) if D.rows[v] & prev))
    if not alive[k]:
        return None
    v = (alive[k] & -alive[k]).bit_length() - 1
    walk = [v]
    for r in range(k - 1, -1, -1):
        nxt = D.rows[v] & alive[r]
        v = (nxt & -nxt).bit_length() - 1
        walk.append(v)
    return tuple(walk)


def no_double_walk2_terminal(D: Digraph) -> bool:
    """True iff every vertex ends at most one length-2 walk (over all initial vertices)."""
    covered = 0
    for u in range(D.n):
        indeg = D.cols[u].bit_count()
        if not indeg or not D.rows[u]:
            continue
        if indeg >= 2 or covered & D.rows[u]:
            return False
        covered |= D.rows[u]
    return True


def _vertex_mask(D: Digraph, vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        if not 0 <= v < D.n:
            raise IndexError(f"vertex {v} out of range for n={D.n}")
        mask |= 1 << v
    return mask


def arc_count_between(D: Digraph, S: Iterable[int], T: Iterable[int]) -> int:
    """Number of arcs with tail in S and head in T."""
    smask = _vertex_mask(D, S)
    tmask = _vertex_mask(D, T)
    return sum((D.rows[s] & tmask).bit_count() for s in _bits(smask))


def max_out_degree(D: Digraph) -> int:
    return max(row.bit_count() for row in D.rows)
