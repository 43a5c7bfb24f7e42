"""JSON file formats. Index tuples in files are 1-based."""

from __future__ import annotations

import itertools
import json
from pathlib import Path

from .exact_algebra import LaurentPoly
from .flat_geometry import FlatMetric, FormatError, SymTensorField
from .hesse_frobenius import HesseFrobenius, check_symmetry


def structure_to_json(hf: HesseFrobenius) -> dict:
    return {
        "name": hf.name,
        "dim": hf.dim,
        "metric": hf.metric.to_json()["g"],
        "C": [
            {"i": [i + 1 for i in k], "poly": p.to_json()}
            for k, p in sorted(hf.C.components.items())
        ],
    }


def structure_from_json(data: dict) -> tuple:
    """Parse a structure document; returns ``(structure, symmetry report of the raw entries)``."""
    try:
        n = int(data["dim"])
        rows = data["metric"]
        for r in rows:
            for v in r:
                if not isinstance(v, (str, int)):
                    raise FormatError("metric entries must be constant rationals")
        g = FlatMetric.from_json({"g": rows})
        if g.dim != n:
            raise FormatError(f"metric is {g.dim}x{g.dim}, dim says {n}")
        raw = {}
        for entry in data.get("C", []):
            idx = tuple(int(i) - 1 for i in entry["i"])
            if len(idx) != 3 or any(not 0 <= i < n for i in idx):
                raise FormatError(f"bad index {entry['i']}")
            raw[idx] = LaurentPoly.from_json(n, entry["poly"])
    except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, FormatError):
            raise
        raise FormatError(f"malformed structure file: {exc}") from exc
    # a file may list any one ordering of an index triple; only conflicting orderings are asymmetric
    filled = {}
    for idx, p in raw.items():
        key = tuple(sorted(idx))
        filled.setdefault(key, {})[idx] = p
    full = {}
    for key, given in filled.items():
        ref = next(iter(given.values()))
        for perm in set(itertools.permutations(key)):
            full[perm] = given.get(perm, ref)
    report = check_symmetry(full)
    # on asymmetric input the sorted ordering (or the first one given) is kept; callers check the report
    comps = {k: v.get(k, next(iter(v.values()))) for k, v in filled.items()}
    C = SymTensorField(n, 3, comps)
    hf = HesseFrobenius(g, C, str(data.get("name", "")))
    return hf, report


def load_structure(path) -> tuple:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    return structure_from_json(data)


def save_structure(hf: HesseFrobenius, path) -> None:
    Path(path).write_text(json.dumps(structure_to_json(hf), indent=1) + "\n", encoding="utf-8")


def dumps(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True)
