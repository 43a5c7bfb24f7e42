"""check -> structure tensor -> potentials -> compatible Killing tensors -> certificate."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import lru_cache

from . import catalog as cat
from .hesse_frobenius import HesseFrobenius, check_axioms, structure_tensor
from .killing import CompatibleSystem, compatible_killing, inheritance_report
from .potential_solver import ExponentWindow, PotentialFamily, solve_potentials
from .verify import Certificate, brackets_vanish, certify

log = logging.getLogger(__name__)

EXIT_OK, EXIT_AXIOM, EXIT_FAMILY, EXIT_RANK, EXIT_IO = 0, 2, 3, 4, 5


class PipelineError(RuntimeError):
    def __init__(self, stage: str, message: str, exit_code: int):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage
        self.exit_code = exit_code


@dataclass
class RunReport:
    name: str
    dim: int
    axioms: list
    family: PotentialFamily | None = None
    compatible: CompatibleSystem | None = None
    certificate: Certificate | None = None
    inheritance: dict | None = None
    bracket_failures: list = field(default_factory=list)
    expected: tuple | None = None

    @property
    def triple(self) -> tuple:
        return (
            self.family.dim if self.family else None,
            self.compatible.dim if self.compatible else None,
            self.certificate.rank if self.certificate else None,
        )

    def to_json(self, full: bool = False) -> dict:
        out = {
            "name": self.name,
            "dim": self.dim,
            "axioms": [r.to_json() for r in self.axioms],
            "dim_family": self.family.dim if self.family else None,
            "dim_compatible": self.compatible.dim if self.compatible else None,
            "rank": self.certificate.rank if self.certificate else None,
            "expected": list(self.expected) if self.expected else None,
            "bracket_failures": [list(b) for b in self.bracket_failures],
        }
        if self.family:
            out["family"] = self.family.to_json()
        if self.compatible:
            out["compatible_basis"] = [K.to_json() for K in self.compatible.basis]
            if full:
                out["companions"] = [[W.to_json() for W in row] for row in self.compatible.companions]
        if self.certificate:
            out["certificate"] = self.certificate.to_json(with_integrals=full)
        if self.inheritance:
            out["inheritance"] = self.inheritance
        return out


def run_pipeline(hf: HesseFrobenius, window: ExponentWindow | None = None, seed: int = 0,
                 name: str = "", raw_symmetry=None, strict_family: bool = True) -> RunReport:
    name = name or hf.name
    axioms = check_axioms(hf)
    if raw_symmetry is not None:
        axioms[0] = raw_symmetry
    report = RunReport(name, hf.dim, axioms, expected=cat.expected(name) if name else None)
    for r in axioms:
        if not r:
            raise PipelineError("check_" + r.identity, r.first_failure(), EXIT_AXIOM)
    structure_tensor(hf)
    report.family = solve_potentials(hf, window)
    if strict_family and report.family.dim != hf.dim + 2 and hf.dim >= 2:
        raise PipelineError("solve_potentials", report.family.warnings[0], EXIT_FAMILY)
    report.compatible = compatible_killing(hf, report.family)
    report.bracket_failures = brackets_vanish(report.compatible)
    if report.bracket_failures:
        raise PipelineError("poisson_bracket", f"nonzero brackets for (nu, mu) {report.bracket_failures[:5]}", EXIT_RANK)
    report.certificate = certify(report.compatible, seed=seed, system=name)
    if not report.certificate.valid:
        raise PipelineError("certify", "; ".join(report.certificate.notes) or "certificate invalid", EXIT_RANK)
    if cat.factors(name):
        report.inheritance = inheritance_breakdown(name)
    return report


@lru_cache(maxsize=None)
def _compatible_for(name: str) -> CompatibleSystem:
    hf = cat.catalog(name)
    return compatible_killing(hf, solve_potentials(hf))


def inheritance_breakdown(name: str) -> dict:
    """Walk the glue tree of a catalog entry and count compatible tensors by origin.

    ``levels[h]`` counts tensors that first appear at height h of the tree:
    leaves (h = 0) contribute their whole compatible space, inner nodes only
    the tensors not inherited from their factors. Repeated factors count once
    per occurrence.
    """
    nodes: dict = {}
    levels: list = []

    def walk(node: str) -> int:
        kids = cat.factors(node)
        comp = _compatible_for(node)
        if not kids:
            nodes[node] = {"total": comp.dim, "new": comp.dim, "height": 0}
            height, new = 0, comp.dim
        else:
            height = max(walk(k) for k, _ in kids) + 1
            rep = inheritance_report(comp, [_compatible_for(k) for k, _ in kids], [list(p) for _, p in kids])
            nodes[node] = {
                "total": rep.total,
                "factors": [k for k, _ in kids],
                "factor_dims": rep.factor_dims,
                "inherited": rep.inherited,
                "new": rep.mixed,
                "height": height,
            }
            new = rep.mixed
        while len(levels) <= height:
            levels.append(0)
        levels[height] += new
        return height

    walk(name)
    return {"nodes": nodes, "levels": levels}
