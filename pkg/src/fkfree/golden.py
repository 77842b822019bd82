"""Committed small-order ground truth.

Values are produced by the exhaustive scan (and, where noted, a completed
branch and bound run) and frozen in ``data/golden.json``. Regenerate with
``python -m fkfree.golden`` after changing either search route.
"""

from __future__ import annotations

import itertools
import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .constructions import MODES, build_T3, enumerate_T3_family
from .search import bnb_max, canonical_form, enumerate_extremal, exhaustive_max

GOLDEN_FILE = "golden.json"


def _key(n: int, k: int, mode: str) -> str:
    return f"{n},{k},{mode}"


def brute_force_lemma4(n: int) -> int:
    """Largest size among all digraphs whose exact squared adjacency has column sums <= 1."""
    best = 0
    slots = [(i, j) for i in range(n) for j in range(n)]
    for bits in itertools.product((0, 1), repeat=len(slots)):
        A = [[0] * n for _ in range(n)]
        for (i, j), b in zip(slots, bits):
            A[i][j] = b
        ok = True
        for v in range(n):
            walks = sum(A[s][u] * A[u][v] for s in range(n) for u in range(n))
            if walks > 1:
                ok = False
                break
        if ok:
            best = max(best, sum(bits))
    return best


def generate() -> dict:
    ex = {}
    for n in range(1, 6):
        for k in (2, 3, 4):
            for mode in MODES:
                ex[_key(n, k, mode)] = {"value": exhaustive_max(n, k, mode).best, "method": "exhaustive"}
    for mode in MODES:
        seed = build_T3(enumerate_T3_family(6, mode)[-1])
        res = bnb_max(6, 3, mode, seed=seed, time_limit=3600)
        if res.exact:
            ex[_key(6, 3, mode)] = {"value": res.best, "method": "bnb"}
    classes = {
        _key(n, k, "simple"): [canonical_form(D).bits for D in enumerate_extremal(n, k, "simple")]
        for n, k in ((1, 3), (2, 3), (3, 3), (4, 2))
    }
    return {
        "ex": ex,
        "lemma4": {str(n): brute_force_lemma4(n) for n in range(1, 5)},
        "extremal_classes": classes,
    }


@lru_cache(maxsize=None)
def load() -> dict:
    text = resources.files("fkfree").joinpath("data", GOLDEN_FILE).read_text()
    return json.loads(text)


def golden_ex(n: int, k: int, mode: str) -> int | None:
    entry = load()["ex"].get(_key(n, k, mode))
    return None if entry is None else entry["value"]


def golden_lemma4(n: int) -> int | None:
    return load()["lemma4"].get(str(n))


def golden_classes(n: int, k: int, mode: str = "simple") -> list[str] | None:
    return load()["extremal_classes"].get(_key(n, k, mode))


if __name__ == "__main__":
    target = Path(__file__).parent / "data" / GOLDEN_FILE
    target.write_text(json.dumps(generate(), indent=2, sort_keys=True) + "\n")
    print(f"wrote {target}")
