import re

import numpy as np
import pytest
from scipy.optimize import Bounds, LinearConstraint, milp

from conftest import all_matrices, exact_fk_free
from fkfree.constructions import T3Variant, build_T3
from fkfree.core import Digraph
from fkfree.encode import (
    EncoderCheckError,
    EncodingLimitError,
    MalformedModelError,
    ModelSizeError,
    VariableMapError,
    canonical_assignment,
    cnf_size,
    decode_dimacs_model,
    legal_walks,
    model_text,
    parse_manifest,
    to_cnf,
    to_lp,
)
from fkfree.search import exhaustive_max


def count_dimacs(text):
    header = next(l for l in text.splitlines() if l.startswith("p cnf"))
    _, _, nv, nc = header.split()
    body = [l for l in text.splitlines() if l and not l.startswith(("c", "p"))]
    max_var = max((abs(int(t)) for l in body for t in l.split()), default=0)
    return int(nv), int(nc), len(body), max_var


class TestCnf:
    def test_satisfied_by_extremal_witness(self):
        doc = to_cnf(2, 3, 2)
        D = exhaustive_max(2, 3).witness
        assert D.size == 2
        assert doc.evaluate(canonical_assignment(doc, D))

    def test_three_arcs_on_two_vertices_unsat(self):
        doc = to_cnf(2, 3, 3)
        for A in all_matrices(2):
            assert not doc.evaluate(canonical_assignment(doc, Digraph.from_matrix(A)))

    def test_t3_witness_at_three(self):
        doc = to_cnf(3, 3, 4)
        assert doc.evaluate(canonical_assignment(doc, build_T3(T3Variant((1, 1, 1), (0, 0)))))

    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("mode", ["simple", "strict"])
    def test_evaluation_soundness(self, n, mode):
        k = 3
        strict = mode == "strict"
        slots = n * n - (n if strict else 0)
        for m in range(0, slots + 2):
            doc = to_cnf(n, k, m, mode)
            for A in all_matrices(n, strict):
                D = Digraph.from_matrix(A)
                expected = exact_fk_free(A, k) and D.size >= m
                assert doc.evaluate(canonical_assignment(doc, D)) == expected, (m, A)

    def test_evaluation_soundness_other_lengths(self):
        for k in (1, 2, 4):
            for m in (0, 2, 4, 5):
                doc = to_cnf(2, k, m)
                for A in all_matrices(2):
                    D = Digraph.from_matrix(A)
                    assert doc.evaluate(canonical_assignment(doc, D)) == (exact_fk_free(A, k) and D.size >= m)

    def test_walk_flip_breaks_assignment(self):
        # a present walk with its indicator cleared must violate clause (i)
        doc = to_cnf(2, 3, 1)
        D = Digraph.from_arcs(2, [(0, 0)])
        value = canonical_assignment(doc, D)
        value[doc.manifest.walk_vars[(0, 0, 0, 0)]] = False
        assert not doc.evaluate(value)

    @pytest.mark.parametrize("n, k, m, mode", [(2, 3, 2, "simple"), (3, 3, 4, "strict"), (4, 2, 7, "simple"), (3, 4, 0, "simple"), (2, 2, 9, "simple")])
    def test_manifest_counts(self, n, k, m, mode):
        doc = to_cnf(n, k, m, mode)
        text = doc.dimacs()
        nv, nc, body, max_var = count_dimacs(text)
        man = doc.manifest
        assert (nv, nc) == (man.num_vars, man.num_clauses) == cnf_size(n, k, m, mode)
        assert body == nc
        assert max_var <= nv

    def test_variable_layout(self):
        man = to_cnf(3, 2, 4, "strict").manifest
        arcs = sorted(man.arc_vars.values())
        walks = sorted(man.walk_vars.values())
        assert arcs == list(range(1, 7))
        assert walks == list(range(7, 7 + len(walks)))
        assert man.aux_range[0] == 7 + len(walks)
        assert len(walks) == 3 * 2 * 2

    def test_walk_count_simple(self):
        assert len(to_cnf(3, 3, 1).manifest.walk_vars) == 3 ** 4

    def test_limits(self):
        with pytest.raises(EncodingLimitError, match="variables"):
            to_cnf(7, 3, 10)
        with pytest.raises(EncodingLimitError):
            to_cnf(3, 5, 1)

    def test_header_format(self):
        text = to_cnf(2, 3, 2).dimacs()
        lines = text.splitlines()
        assert all(l.startswith("c ") for l in lines[: lines.index(next(l for l in lines if l.startswith("p ")))])
        assert re.search(r"^p cnf \d+ \d+$", text, re.M)
        assert "c n=2 k=3 m=2 mode=simple" in lines


class TestDecode:
    def _round_trip(self, n, k, m, D, mode="simple"):
        doc = to_cnf(n, k, m, mode)
        man = parse_manifest(doc.dimacs())
        return decode_dimacs_model(model_text(canonical_assignment(doc, D)), man)

    def test_single_arc(self):
        D = Digraph.from_arcs(2, [(0, 1)])
        assert self._round_trip(2, 3, 1, D) == D

    def test_two_cycle(self):
        D = Digraph.from_arcs(2, [(0, 1), (1, 0)])
        assert self._round_trip(2, 3, 2, D) == D

    def test_strict(self):
        D = build_T3(T3Variant((1, 2, 1), (0, 1)))
        assert self._round_trip(4, 3, 6, D, "strict") == D

    def test_parse_manifest_matches(self):
        doc = to_cnf(3, 2, 4, "strict")
        man = parse_manifest(doc.dimacs())
        assert man.arc_vars == doc.manifest.arc_vars
        assert man.walk_vars == doc.manifest.walk_vars
        assert (man.num_vars, man.num_clauses, man.aux_range) == (
            doc.manifest.num_vars, doc.manifest.num_clauses, doc.manifest.aux_range)

    def test_truncated(self):
        doc = to_cnf(2, 3, 2)
        text = model_text(canonical_assignment(doc, Digraph.from_arcs(2, [(0, 1), (1, 0)])))
        with pytest.raises(MalformedModelError):
            decode_dimacs_model(text[: len(text) // 2], doc.manifest)

    def test_missing_variables(self):
        doc = to_cnf(2, 3, 2)
        with pytest.raises(ModelSizeError):
            decode_dimacs_model("v 1 -2 0\n", doc.manifest)

    def test_out_of_range_literal(self):
        doc = to_cnf(2, 3, 2)
        nv = doc.manifest.num_vars
        text = "v " + " ".join(str(-v) for v in range(1, nv + 2)) + " 0\n"
        with pytest.raises(ModelSizeError):
            decode_dimacs_model(text, doc.manifest)

    def test_garbage(self):
        with pytest.raises(MalformedModelError):
            decode_dimacs_model("v 1 x 0\n", to_cnf(2, 3, 2).manifest)

    def test_diagonal_slot_in_strict_manifest(self):
        doc = to_cnf(2, 3, 1, "strict")
        man = doc.manifest
        man.arc_vars[(0, 0)] = 1
        with pytest.raises(VariableMapError):
            decode_dimacs_model("v 1 0\n", man)

    def test_violating_model_is_encoder_error(self):
        doc = to_cnf(2, 3, 0)
        full = Digraph.from_matrix([[1, 1], [1, 1]])
        value = canonical_assignment(doc, full)
        with pytest.raises(EncoderCheckError):
            decode_dimacs_model(model_text(value), doc.manifest)


def parse_lp(text):
    """Minimal reader for the LP files we emit: returns c, A_ub rows, bounds and integrality."""
    section = None
    objective = {}
    rows = []
    bounds = {}
    binaries = []
    current = None
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("\\"):
            continue
        if line in ("Maximize", "Subject To", "Bounds", "Binary", "General", "End"):
            section = line
            continue
        if section == "Maximize":
            line = line.split(":", 1)[1] if ":" in line else line
            for coef, name in re.findall(r"([+-]?\s*\d*)\s*([a-z]_[\d_]+)", line):
                objective[name] = 1
        elif section == "Subject To":
            if ":" in line:
                current = {"terms": {}, "sense": None, "rhs": None}
                rows.append(current)
                line = line.split(":", 1)[1]
            m = re.search(r"(>=|<=)\s*(-?\d+)$", line)
            if m:
                current["sense"], current["rhs"] = m.group(1), int(m.group(2))
                line = line[: m.start()]
            for sign, coef, name in re.findall(r"([+-]?)\s*(\d*)\s*([a-z]_[\d_]+)", line):
                value = int(coef or 1) * (-1 if sign == "-" else 1)
                current["terms"][name] = current["terms"].get(name, 0) + value
        elif section == "Bounds":
            lo, name, hi = re.fullmatch(r"(\S+) <= (\S+) <= (\S+)", line).groups()
            bounds[name] = (float(lo), float(hi))
        elif section == "Binary":
            binaries.append(line)
    return objective, rows, bounds, binaries


def solve_lp(text):
    objective, rows, bounds, binaries = parse_lp(text)
    names = sorted({n for r in rows for n in r["terms"]} | set(objective) | set(binaries))
    if not names:
        return 0
    index = {n: i for i, n in enumerate(names)}
    c = np.zeros(len(names))
    for name in objective:
        c[index[name]] = -1.0
    A = np.zeros((len(rows), len(names)))
    lo = np.full(len(rows), -np.inf)
    hi = np.full(len(rows), np.inf)
    for r, row in enumerate(rows):
        for name, coef in row["terms"].items():
            A[r, index[name]] = coef
        if row["sense"] == ">=":
            lo[r] = row["rhs"]
        else:
            hi[r] = row["rhs"]
    var_lo = np.zeros(len(names))
    var_hi = np.ones(len(names))
    for name, (a, b) in bounds.items():
        var_lo[index[name]], var_hi[index[name]] = a, b
    integrality = np.array([1 if n in binaries else 0 for n in names])
    res = milp(c, constraints=LinearConstraint(A, lo, hi), bounds=Bounds(var_lo, var_hi), integrality=integrality)
    assert res.success
    return round(-res.fun)


class TestLp:
    @pytest.mark.parametrize("n", [1, 2, 3])
    @pytest.mark.parametrize("k", [2, 3])
    @pytest.mark.parametrize("mode", ["simple", "strict"])
    def test_optimum_matches_exhaustive(self, n, k, mode):
        text, _ = to_lp(n, k, mode)
        assert solve_lp(text) == exhaustive_max(n, k, mode).best

    def test_three_vertices_value(self):
        text, _ = to_lp(3, 3)
        assert solve_lp(text) == 4 == exhaustive_max(3, 3).best

    def test_two_vertices_value(self):
        text, _ = to_lp(2, 3)
        assert solve_lp(text) == 2

    @pytest.mark.parametrize("k", [2, 3])
    def test_optimum_at_four(self, k):
        text, _ = to_lp(4, k)
        assert solve_lp(text) == exhaustive_max(4, k).best

    def test_zero_point_feasible(self):
        text, man = to_lp(3, 3)
        _, rows, _, _ = parse_lp(text)
        for row in rows:
            # every variable at 0
            if row["sense"] == ">=":
                assert 0 >= row["rhs"]
            else:
                assert 0 <= row["rhs"]

    def test_structure(self):
        text, man = to_lp(2, 2, "strict")
        assert text.splitlines()[2] == "Maximize"
        for section in ("Subject To", "Bounds", "Binary", "End"):
            assert section in text.splitlines()
        assert man.num_vars == 2 + len(legal_walks(2, 2, "strict"))

    def test_limits(self):
        with pytest.raises(EncodingLimitError):
            to_lp(9, 2)
        with pytest.raises(EncodingLimitError):
            to_lp(4, 5)

    def test_repeated_slot_counts_multiplicity(self):
        text, _ = to_lp(1, 3)
        assert "w_1 - 3 x_0_0 >= -2" in text
