"""SAT and ILP encodings of "is there an F_k-free digraph of order n with >= m arcs?".

Variable layout (1-based, contiguous): arc slots in row-major order, then one
indicator per length-k walk (vertex sequences in lexicographic order), then
the sequential-counter auxiliaries of the cardinality constraint.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from math import comb
from typing import Optional, Sequence

from .constructions import SIMPLE, STRICT, check_mode
from .core import Digraph, is_fk_free
from .search import arc_slots

CNF_MAX_N = 6
CNF_MAX_K = 4
LP_MAX_N = 8
LP_MAX_K = 4
_TERMS_PER_LINE = 8


class EncodingError(ValueError):
    """Base class for encoding and decoding failures."""


class EncodingLimitError(EncodingError):
    pass


class MalformedModelError(EncodingError):
    pass


class ModelSizeError(EncodingError):
    pass


class VariableMapError(EncodingError):
    pass


class EncoderCheckError(EncodingError):
    """A decoded model is not F_k-free, which means the encoder is wrong."""


def legal_walks(n: int, k: int, mode: str) -> list[tuple[int, ...]]:
    check_mode(mode)
    walks = itertools.product(range(n), repeat=k + 1)
    if mode == SIMPLE:
        return list(walks)
    return [w for w in walks if all(a != b for a, b in zip(w, w[1:]))]


def _pair_group_sizes(n: int, k: int, mode: str) -> list[int]:
    # number of legal walks s -> t for every ordered pair, by exact counting
    allowed = [[1 if mode == SIMPLE or i != j else 0 for j in range(n)] for i in range(n)]
    power = allowed
    for _ in range(k - 1):
        power = [
            [sum(power[i][l] * allowed[l][j] for l in range(n)) for j in range(n)]
            for i in range(n)
        ]
    return [power[i][j] for i in range(n) for j in range(n)]


def _counter_size(total: int, m: int) -> tuple[int, int]:
    """(aux variables, clauses) of the at-least-m sequential counter over ``total`` literals."""
    if m <= 0:
        return 0, 0
    if m > total:
        return 0, 1
    bound = total - m
    if bound == 0:
        return 0, total
    if total == 1 or bound >= total:
        return 0, 0
    aux = (total - 1) * bound
    clauses = bound + 1 + (total - 2) * (2 * bound + 1)
    return aux, clauses


def cnf_size(n: int, k: int, m: int, mode: str = SIMPLE) -> tuple[int, int]:
    """Exact (variables, clauses) of ``to_cnf(n, k, m, mode)`` without building it."""
    check_mode(mode)
    arcs = len(arc_slots(n, mode))
    groups = _pair_group_sizes(n, k, mode)
    walks = sum(groups)
    aux, counter = _counter_size(arcs, m)
    amo = sum(comb(g, 2) for g in groups)
    return arcs + walks + aux, walks + amo + counter


@dataclass
class EncodingManifest:
    n: int
    k: int
    m: Optional[int]
    mode: str
    arc_vars: dict[tuple[int, int], int]
    walk_vars: dict[tuple[int, ...], int]
    aux_range: tuple[int, int] = (0, -1)
    num_vars: int = 0
    num_clauses: int = 0

    def header_lines(self) -> list[str]:
        walk_ids = list(self.walk_vars.values())
        lines = [
            "fkfree encoding",
            f"n={self.n} k={self.k} m={self.m} mode={self.mode}",
            f"arc_vars={min(self.arc_vars.values(), default=0)}..{max(self.arc_vars.values(), default=-1)}",
            f"walk_vars={min(walk_ids, default=0)}..{max(walk_ids, default=-1)}",
            f"aux_vars={self.aux_range[0]}..{self.aux_range[1]}",
            f"num_vars={self.num_vars} num_clauses={self.num_clauses}",
        ]
        lines.extend(f"arc {v} {i} {j}" for (i, j), v in self.arc_vars.items())
        return lines


def _build_manifest(n: int, k: int, m: Optional[int], mode: str) -> EncodingManifest:
    arc_vars = {slot: idx + 1 for idx, slot in enumerate(arc_slots(n, mode))}
    base = len(arc_vars)
    walk_vars = {w: base + idx + 1 for idx, w in enumerate(legal_walks(n, k, mode))}
    return EncodingManifest(n, k, m, mode, arc_vars, walk_vars)


def _sequential_counter(lits: Sequence[int], bound: int, next_var: int) -> tuple[list[list[int]], int]:
    """Clauses for "at most ``bound`` of ``lits`` are true"; aux vars start at ``next_var``."""
    total = len(lits)
    if bound >= total or total == 1 and bound >= 1:
        return [], next_var
    if bound == 0:
        return [[-x] for x in lits], next_var
    s = [[next_var + i * bound + j for j in range(bound)] for i in range(total - 1)]
    clauses = [[-lits[0], s[0][0]]]
    clauses += [[-s[0][j]] for j in range(1, bound)]
    for i in range(1, total - 1):
        x = lits[i]
        clauses.append([-x, s[i][0]])
        clauses.append([-s[i - 1][0], s[i][0]])
        for j in range(1, bound):
            clauses.append([-x, -s[i - 1][j - 1], s[i][j]])
            clauses.append([-s[i - 1][j], s[i][j]])
        clauses.append([-x, -s[i - 1][bound - 1]])
    clauses.append([-lits[-1], -s[-1][bound - 1]])
    return clauses, next_var + (total - 1) * bound


@dataclass
class CnfDocument:
    manifest: EncodingManifest
    clauses: list[list[int]] = field(default_factory=list)

    def dimacs(self) -> str:
        out = [f"c {line}" for line in self.manifest.header_lines()]
        out.append(f"p cnf {self.manifest.num_vars} {len(self.clauses)}")
        out.extend(" ".join(map(str, c + [0])) for c in self.clauses)
        return "\n".join(out) + "\n"

    def evaluate(self, assignment: dict[int, bool]) -> bool:
        return all(any(assignment[abs(l)] == (l > 0) for l in c) for c in self.clauses)


def to_cnf(n: int, k: int, m: int, mode: str = SIMPLE) -> CnfDocument:
    check_mode(mode)
    if n < 1 or k < 1:
        raise EncodingError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    if n > CNF_MAX_N or k > CNF_MAX_K:
        nv, nc = cnf_size(n, k, m, mode)
        raise EncodingLimitError(
            f"CNF capped at n<={CNF_MAX_N}, k<={CNF_MAX_K}; "
            f"n={n}, k={k} would need {nv} variables and {nc} clauses"
        )
    man = _build_manifest(n, k, m, mode)
    clauses: list[list[int]] = []
    groups: dict[tuple[int, int], list[int]] = {}
    for walk, w in man.walk_vars.items():
        arcs = dict.fromkeys(man.arc_vars[(a, b)] for a, b in zip(walk, walk[1:]))
        clauses.append([-x for x in arcs] + [w])
        groups.setdefault((walk[0], walk[-1]), []).append(w)
    for ws in groups.values():
        clauses.extend([-a, -b] for a, b in itertools.combinations(ws, 2))
    lits = [-x for x in man.arc_vars.values()]
    first_aux = len(man.arc_vars) + len(man.walk_vars) + 1
    if m > len(lits):
        counter, next_var = [[]], first_aux
    elif m <= 0:
        counter, next_var = [], first_aux
    else:
        counter, next_var = _sequential_counter(lits, len(lits) - m, first_aux)
    clauses.extend(counter)
    man.aux_range = (first_aux, next_var - 1)
    man.num_vars = next_var - 1
    man.num_clauses = len(clauses)
    return CnfDocument(man, clauses)


def canonical_assignment(doc: CnfDocument, D: Digraph) -> dict[int, bool]:
    """Arc values from D, walk indicators exact, counter registers computed bottom-up."""
    man = doc.manifest
    if D.n != man.n:
        raise EncodingError(f"digraph order {D.n} does not match manifest n={man.n}")
    value = {v: D.has_arc(i, j) for (i, j), v in man.arc_vars.items()}
    for walk, w in man.walk_vars.items():
        value[w] = all(D.has_arc(a, b) for a, b in zip(walk, walk[1:]))
    first, last = man.aux_range
    if last >= first:
        lits = [-x for x in man.arc_vars.values()]
        bound = (last - first + 1) // (len(lits) - 1)
        running = 0
        for i, lit in enumerate(lits[:-1]):
            running += not value[abs(lit)]
            for j in range(bound):
                value[first + i * bound + j] = running >= j + 1
    return value


_HEADER_RE = re.compile(r"n=(\d+) k=(\d+) m=(\S+) mode=(\w+)")


def parse_manifest(text: str) -> EncodingManifest:
    """Rebuild the manifest from the comment header of an emitted DIMACS file."""
    params = None
    arcs: dict[tuple[int, int], int] = {}
    aux = (0, -1)
    num_vars = num_clauses = None
    for line in text.splitlines():
        if not line.startswith("c "):
            continue
        body = line[2:].strip()
        if (match := _HEADER_RE.fullmatch(body)) is not None:
            n, k, m, mode = match.groups()
            params = (int(n), int(k), None if m == "None" else int(m), mode)
        elif body.startswith("arc "):
            v, i, j = map(int, body.split()[1:])
            arcs[(i, j)] = v
        elif body.startswith("aux_vars="):
            lo, hi = body.split("=")[1].split("..")
            aux = (int(lo), int(hi))
        elif body.startswith("num_vars="):
            parts = dict(p.split("=") for p in body.split())
            num_vars, num_clauses = int(parts["num_vars"]), int(parts["num_clauses"])
    if params is None or num_vars is None:
        raise EncodingError("no fkfree manifest found in the comment header")
    n, k, m, mode = params
    man = _build_manifest(n, k, m, mode)
    man.arc_vars = arcs
    man.aux_range = aux
    man.num_vars = num_vars
    man.num_clauses = num_clauses
    return man


def decode_dimacs_model(text: str, manifest: EncodingManifest) -> Digraph:
    """Digraph of the true arc variables in a solver's ``v``-line model."""
    for (i, j), v in manifest.arc_vars.items():
        if not (0 <= i < manifest.n and 0 <= j < manifest.n):
            raise VariableMapError(f"arc variable {v} maps to slot ({i}, {j}) outside n={manifest.n}")
        if manifest.mode == STRICT and i == j:
            raise VariableMapError(f"arc variable {v} maps to diagonal slot ({i}, {i}) in strict mode")
    literals: list[int] = []
    terminated = False
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if line.startswith("s"):
            if "UNSAT" in line.upper():
                raise MalformedModelError(f"line {lineno}: solver reported {line[1:].strip()}")
            continue
        if not line.startswith("v"):
            raise MalformedModelError(f"line {lineno}: unexpected content {raw!r}")
        if terminated:
            raise MalformedModelError(f"line {lineno}: literals after the terminating 0")
        for tok in line[1:].split():
            try:
                lit = int(tok)
            except ValueError:
                raise MalformedModelError(f"line {lineno}: bad literal {tok!r}") from None
            if lit == 0:
                terminated = True
                break
            literals.append(lit)
    if not terminated:
        raise MalformedModelError("model is truncated: no terminating 0")
    assigned: dict[int, bool] = {}
    for lit in literals:
        var = abs(lit)
        if var > manifest.num_vars:
            raise ModelSizeError(f"literal {lit} exceeds the manifest's {manifest.num_vars} variables")
        if var in assigned:
            raise MalformedModelError(f"variable {var} assigned twice")
        assigned[var] = lit > 0
    if len(assigned) != manifest.num_vars:
        raise ModelSizeError(f"model assigns {len(assigned)} of {manifest.num_vars} variables")
    D = Digraph.from_arcs(manifest.n, [slot for slot, v in manifest.arc_vars.items() if assigned[v]])
    if not is_fk_free(D, manifest.k):
        raise EncoderCheckError(f"decoded digraph contains a member of F_{manifest.k}: {D.arcs()}")
    return D


def model_text(assignment: dict[int, bool]) -> str:
    """Render an assignment as DIMACS ``v`` lines."""
    lits = [v if assignment[v] else -v for v in sorted(assignment)]
    lines = ["s SATISFIABLE"]
    for start in range(0, len(lits), 10):
        lines.append("v " + " ".join(map(str, lits[start:start + 10])))
    lines.append("v 0")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# LP format


def _lp_terms(terms: Sequence[tuple[int, str]]) -> list[str]:
    parts = []
    for idx, (coef, name) in enumerate(terms):
        sign = "-" if coef < 0 else "+"
        mag = abs(coef)
        text = name if mag == 1 else f"{mag} {name}"
        parts.append(f"{sign} {text}" if idx or coef < 0 else text)
    return [" ".join(parts[i:i + _TERMS_PER_LINE]) for i in range(0, len(parts), _TERMS_PER_LINE)]


def arc_name(i: int, j: int) -> str:
    return f"x_{i}_{j}"


def walk_name(index: int) -> str:
    return f"w_{index}"


def to_lp(n: int, k: int, mode: str = SIMPLE) -> tuple[str, EncodingManifest]:
    """LP-format model whose optimum is ex(n, F_k) in the given mode."""
    check_mode(mode)
    if n < 1 or k < 1:
        raise EncodingError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    if n > LP_MAX_N or k > LP_MAX_K:
        raise EncodingLimitError(f"LP capped at n<={LP_MAX_N}, k<={LP_MAX_K}; got n={n}, k={k}")
    man = _build_manifest(n, k, None, mode)
    lines = [f"\\ {line}" for line in man.header_lines()[:2]]
    lines.append("Maximize")
    obj = _lp_terms([(1, arc_name(i, j)) for i, j in man.arc_vars])
    lines.append(" obj: " + (obj[0] if obj else "0"))
    lines.extend("  " + chunk for chunk in obj[1:])
    lines.append("Subject To")
    groups: dict[tuple[int, int], list[int]] = {}
    rows = 0
    for walk, var in man.walk_vars.items():
        idx = var - len(man.arc_vars)
        use: dict[tuple[int, int], int] = {}
        for a, b in zip(walk, walk[1:]):
            use[(a, b)] = use.get((a, b), 0) + 1
        terms = [(1, walk_name(idx))] + [(-c, arc_name(*slot)) for slot, c in use.items()]
        chunks = _lp_terms(terms)
        chunks[-1] += f" >= {-(k - 1)}"
        lines.append(f" walk_{idx}: " + chunks[0])
        lines.extend("  " + c for c in chunks[1:])
        groups.setdefault((walk[0], walk[-1]), []).append(idx)
        rows += 1
    for (s, t), idxs in groups.items():
        chunks = _lp_terms([(1, walk_name(i)) for i in idxs])
        chunks[-1] += " <= 1"
        lines.append(f" pair_{s}_{t}: " + chunks[0])
        lines.extend("  " + c for c in chunks[1:])
        rows += 1
    lines.append("Bounds")
    for var in man.walk_vars.values():
        lines.append(f" 0 <= {walk_name(var - len(man.arc_vars))} <= 1")
    lines.append("Binary")
    for i, j in man.arc_vars:
        lines.append(f" {arc_name(i, j)}")
    lines.append("End")
    man.num_vars = len(man.arc_vars) + len(man.walk_vars)
    man.num_clauses = rows
    return "\n".join(lines) + "\n", man
