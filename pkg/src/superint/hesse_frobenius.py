"""Hesse-Frobenius structures: a flat metric plus a symmetric cubic tensor ``C``.

The product of vector fields is ``(X*Y)^l = C_ijk X^i Y^j g^kl``. A structure
is Hesse-Frobenius when ``C`` is totally symmetric, satisfies the WDVV
(associativity) equation and the differential identity
``d_l C_ijk = C_ija g^ab C_klb``.

Semi-simple sign convention: the nonzero canonical eigenvalue is
``lambda_j = -1/x_j``. It solves ``d lambda = lambda^2``, which is what the
differential identity reduces to on the diagonal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exact_algebra import LaurentPoly
from .flat_geometry import (
    DimensionMismatch,
    FlatMetric,
    IndexedTensor,
    SymTensorField,
    metric_trace,
    raise_last_index,
)


@dataclass(frozen=True)
class HesseFrobenius:
    metric: FlatMetric
    C: SymTensorField
    name: str = ""

    def __post_init__(self):
        if self.C.dim != self.metric.dim or self.C.degree != 3:
            raise DimensionMismatch("C must be a degree-3 tensor of the metric's dimension")

    @property
    def dim(self) -> int:
        return self.metric.dim

    def product(self, X: Sequence, Y: Sequence, point: Sequence) -> list:
        """``X * Y`` evaluated at a point, for constant component vectors X, Y."""
        n = self.dim
        Cv = {k: p.evaluate(point) for k, p in self.C.components.items()}
        lowered = [Fraction(0)] * n
        for i in range(n):
            if not X[i]:
                continue
            for j in range(n):
                if not Y[j]:
                    continue
                for k in range(n):
                    c = Cv.get(tuple(sorted((i, j, k))))
                    if c:
                        lowered[k] += c * X[i] * Y[j]
        return [sum((self.metric.g_inv[l][k] * lowered[k] for k in range(n)), Fraction(0)) for l in range(n)]


@dataclass
class AxiomReport:
    """Outcome of one axiom check. Truthy iff the identity holds everywhere."""

    identity: str
    failures: list = field(default_factory=list)  # (index tuple, residual)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.ok

    def first_failure(self) -> str:
        if self.ok:
            return ""
        idx, res = self.failures[0]
        return f"{self.identity} fails at {tuple(i + 1 for i in idx)}: residual {res}"

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "ok": self.ok,
            "failures": [
                {"index": [i + 1 for i in idx], "residual": str(res)} for idx, res in self.failures[:20]
            ],
            "n_failures": len(self.failures),
        }


def check_symmetry(C) -> AxiomReport:
    """Total symmetry of raw cubic input.

    ``C`` may be a :class:`HesseFrobenius`/:class:`SymTensorField` (symmetric by
    construction) or a raw mapping from arbitrary index triples to polynomials.
    """
    report = AxiomReport("symmetry")
    if isinstance(C, HesseFrobenius):
        C = C.C
    if isinstance(C, SymTensorField):
        return report
    raw = {tuple(k): p for k, p in C.items()}
    for idx, p in sorted(raw.items()):
        for perm in set(itertools.permutations(idx)):
            other = raw.get(perm)
            if other is None:
                if p:
                    report.failures.append((perm, -p))
            elif other != p:
                report.failures.append((perm, other - p))
    return report


def symmetric_from_raw(dim: int, raw: Mapping[tuple, LaurentPoly]) -> SymTensorField:
    rep = check_symmetry(raw)
    if not rep:
        raise ValueError(rep.first_failure())
    return SymTensorField(dim, 3, {k: p for k, p in raw.items()})


def _quadratic_contraction(hf: HesseFrobenius) -> dict:
    """``A[(i,j),(k,l)] = C_ija g^ab C_klb`` for sorted pairs."""
    n = hf.dim
    g = hf.metric
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    raised = {}
    for (i, j) in pairs:
        row = {}
        for a in range(n):
            c = hf.C[i, j, a]
            if not c:
                continue
            for b, gab in g.inv_nonzero(a):
                term = c.scale(gab)
                row[b] = row[b] + term if b in row else term
        raised[(i, j)] = {b: p for b, p in row.items() if p}
    lowered = {(k, l): {b: hf.C[k, l, b] for b in range(n) if hf.C[k, l, b]} for (k, l) in pairs}
    A = {}
    for p1 in pairs:
        r = raised[p1]
        for p2 in pairs:
            if p2 < p1:
                continue
            low = lowered[p2]
            acc = LaurentPoly.zero(n)
            for b, x in r.items():
                y = low.get(b)
                if y is not None:
                    acc = acc + x * y
            A[(p1, p2)] = acc
            A[(p2, p1)] = acc  # g symmetric
    return A


def _pair(i, j):
    return (i, j) if i <= j else (j, i)


def check_wdvv(hf: HesseFrobenius, A: dict | None = None) -> AxiomReport:
    """``g^ab (C_ija C_klb - C_ika C_jlb) = 0`` for all (i, j, k, l)."""
    report = AxiomReport("wdvv")
    A = _quadratic_contraction(hf) if A is None else A
    n = hf.dim
    for i, j, k, l in itertools.product(range(n), repeat=4):
        res = A[(_pair(i, j), _pair(k, l))] - A[(_pair(i, k), _pair(j, l))]
        if res:
            report.failures.append(((i, j, k, l), res))
    return report


def check_differential(hf: HesseFrobenius, A: dict | None = None) -> AxiomReport:
    """``d_l C_ijk = C_ija g^ab C_klb`` for all (i, j, k, l)."""
    report = AxiomReport("differential")
    A = _quadratic_contraction(hf) if A is None else A
    n = hf.dim
    for i, j, k, l in itertools.product(range(n), repeat=4):
        res = hf.C[i, j, k].partial(l) - A[(_pair(i, j), _pair(k, l))]
        if res:
            report.failures.append(((i, j, k, l), res))
    return report


def check_axioms(hf: HesseFrobenius, raw=None) -> list:
    """All three reports, symmetry first.

    ``raw`` is the unsymmetrized input if any, either as a mapping of index
    triples or as the symmetry report already produced by the file loader.
    """
    A = _quadratic_contraction(hf)
    if isinstance(raw, AxiomReport):
        sym = raw
    else:
        sym = check_symmetry(raw if raw is not None else hf)
    return [
        sym,
        check_wdvv(hf, A),
        check_differential(hf, A),
    ]


def is_hesse_frobenius(hf: HesseFrobenius) -> bool:
    return all(check_axioms(hf))


@dataclass(frozen=True)
class StructurePair:
    """``T_ijk = 3 (C_ijk - g_ij tr_k / n)`` and ``That[(i,j,k)] = T_ija g^ak``.

    ``T`` is symmetric in (i, j) only; both are stored with full index tuples.
    """

    T: IndexedTensor
    That: IndexedTensor

    def that_by_pair(self) -> dict:
        """``{(i,j): [(k, That^k_ij), ...]}`` for i <= j."""
        out: dict = {}
        for (i, j, k), p in self.That.items():
            if i <= j:
                out.setdefault((i, j), []).append((k, p))
        return out


def structure_tensor(hf: HesseFrobenius) -> StructurePair:
    n = hf.dim
    g = hf.metric
    tr = metric_trace(hf.C, g)
    inv_n = Fraction(1, n)
    T = {}
    for i, j, k in itertools.product(range(n), repeat=3):
        val = hf.C[i, j, k]
        gij = g.g[i][j]
        if gij and tr[k]:
            val = val - tr[k].scale(gij * inv_n)
        if val:
            T[(i, j, k)] = val.scale(3)
    Tt = IndexedTensor(n, 3, T)
    return StructurePair(Tt, raise_last_index(Tt, g))


def from_frobenius_potential(phi: LaurentPoly, g: FlatMetric, name: str = "") -> HesseFrobenius:
    """``C = third derivatives of phi``; axioms are not assumed."""
    if phi.arity != g.dim:
        raise DimensionMismatch("potential arity does not match metric")
    n = g.dim
    comps = {}
    for i in range(n):
        di = phi.partial(i)
        for j in range(i, n):
            dij = di.partial(j)
            for k in range(j, n):
                comps[(i, j, k)] = dij.partial(k)
    return HesseFrobenius(g, SymTensorField(n, 3, comps), name)


def semisimple_lambda(n: int, j: int, sign: int = -1) -> LaurentPoly:
    """Canonical eigenvalue ``sign / x_j``; ``sign=-1`` is the Hesse-Frobenius branch."""
    e = [0] * n
    e[j] = -1
    return LaurentPoly(n, {tuple(e): sign})


def semisimple_structure(n: int, mask: Sequence, sign: int = -1, min_dim: int = 3) -> HesseFrobenius:
    """Euclidean metric, ``C_jjj = lambda_j`` where mask_j is set, else 0."""
    if n < min_dim:
        raise ValueError(f"semi-simple structures need n >= {min_dim}, got {n}")
    mask = [bool(int(m)) if isinstance(m, str) else bool(m) for m in mask]
    if len(mask) != n:
        raise ValueError(f"mask has length {len(mask)}, expected {n}")
    comps = {(j, j, j): semisimple_lambda(n, j, sign) for j in range(n) if mask[j]}
    label = "".join("1" if m else "0" for m in mask)
    return HesseFrobenius(FlatMetric.euclidean(n), SymTensorField(n, 3, comps), f"semisimple:{n}:{label}")


def zero_structure(g: FlatMetric, name: str = "") -> HesseFrobenius:
    return HesseFrobenius(g, SymTensorField.zero(g.dim, 3), name)


def glue(a: HesseFrobenius, b: HesseFrobenius, name: str = "") -> HesseFrobenius:
    """Product structure: block-diagonal metric, C the direct sum (no mixed entries)."""
    n = a.dim + b.dim
    g = FlatMetric.block_diagonal(a.metric, b.metric)
    pa = list(range(a.dim))
    pb = list(range(a.dim, n))
    C = a.C.embed(n, pa) + b.C.embed(n, pb)
    return HesseFrobenius(g, C, name or f"glue({a.name or '?'},{b.name or '?'})")


def relabel(hf: HesseFrobenius, perm: Sequence[int], name: str = "") -> HesseFrobenius:
    """Rename coordinates: old coordinate i becomes new coordinate perm[i]."""
    if sorted(perm) != list(range(hf.dim)):
        raise ValueError("perm must be a permutation")
    return HesseFrobenius(hf.metric.permuted(perm), hf.C.embed(hf.dim, perm), name or hf.name)
