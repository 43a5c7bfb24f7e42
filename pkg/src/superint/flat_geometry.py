"""Constant (pseudo-Euclidean) metrics in affine coordinates and tensor fields over them.

With a constant metric all Christoffel symbols vanish, so covariant
derivatives are plain coordinate derivatives.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exact_algebra import LaurentPoly, as_rational, reduced_echelon


class DimensionMismatch(ValueError):
    pass


class FormatError(ValueError):
    pass


def _invert(g: list) -> list:
    n = len(g)
    aug = [{**{j: g[i][j] for j in range(n) if g[i][j]}, **{n + i: Fraction(1)}} for i in range(n)]
    piv = reduced_echelon(aug)
    if sorted(piv) != list(range(n)):
        raise ValueError("metric is degenerate")
    return [[piv[i].get(n + j, Fraction(0)) for j in range(n)] for i in range(n)]


@dataclass(frozen=True)
class FlatMetric:
    """Constant symmetric nondegenerate metric ``g_ij`` with cached inverse ``g^ij``."""

    g: tuple
    g_inv: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        rows = [[as_rational(v) for v in r] for r in self.g]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise FormatError("metric must be a non-empty square matrix")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise FormatError(f"metric is not symmetric at ({i + 1},{j + 1})")
        object.__setattr__(self, "g", tuple(tuple(r) for r in rows))
        object.__setattr__(self, "g_inv", tuple(tuple(r) for r in _invert(rows)))

    @classmethod
    def euclidean(cls, n: int) -> "FlatMetric":
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @classmethod
    def block_diagonal(cls, *blocks: "FlatMetric") -> "FlatMetric":
        n = sum(b.dim for b in blocks)
        rows = [[Fraction(0)] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.dim):
                for j in range(b.dim):
                    rows[off + i][off + j] = b.g[i][j]
            off += b.dim
        return cls(tuple(tuple(r) for r in rows))

    @property
    def dim(self) -> int:
        return len(self.g)

    def inv_nonzero(self, i: int) -> list:
        """Pairs ``(b, g^ib)`` with nonzero entries; metrics are usually very sparse."""
        return [(b, v) for b, v in enumerate(self.g_inv[i]) if v]

    def nonzero(self, i: int) -> list:
        return [(b, v) for b, v in enumerate(self.g[i]) if v]

    def permuted(self, perm: Sequence[int]) -> "FlatMetric":
        """Metric in relabelled coordinates: new coordinate perm[i] is old coordinate i."""
        n = self.dim
        rows = [[Fraction(0)] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                rows[perm[i]][perm[j]] = self.g[i][j]
        return FlatMetric(tuple(tuple(r) for r in rows))

    def to_json(self) -> dict:
        return {"dim": self.dim, "g": [[_qstr(v) for v in r] for r in self.g]}

    @classmethod
    def from_json(cls, data) -> "FlatMetric":
        rows = data["g"] if isinstance(data, Mapping) else data
        try:
            return cls(tuple(tuple(as_rational(v) for v in r) for r in rows))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"bad metric: {exc}") from exc


def _qstr(v: Fraction) -> str:
    return f"{v.numerator}/{v.denominator}"


class SymTensorField:
    """Fully symmetric covariant tensor field; only sorted index tuples are stored."""

    __slots__ = ("dim", "degree", "components")

    def __init__(self, dim: int, degree: int, components: Mapping[tuple, LaurentPoly] | None = None):
        self.dim = dim
        self.degree = degree
        comps = {}
        for idx, p in (components or {}).items():
            idx = tuple(idx)
            if len(idx) != degree or any(not 0 <= i < dim for i in idx):
                raise DimensionMismatch(f"bad index tuple {idx} for dim {dim}, degree {degree}")
            if p.arity != dim:
                raise DimensionMismatch(f"component {idx} has arity {p.arity}, expected {dim}")
            key = tuple(sorted(idx))
            if key in comps and comps[key] != p:
                raise ValueError(f"conflicting values for symmetric index {key}")
            if p:
                comps[key] = p
        self.components = comps

    @classmethod
    def zero(cls, dim: int, degree: int) -> "SymTensorField":
        return cls(dim, degree)

    def __getitem__(self, idx) -> LaurentPoly:
        if isinstance(idx, int):
            idx = (idx,)
        return self.components.get(tuple(sorted(idx))) or LaurentPoly.zero(self.dim)

    def items(self):
        return self.components.items()

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other) -> bool:
        if not isinstance(other, SymTensorField):
            return NotImplemented
        return (self.dim, self.degree, self.components) == (other.dim, other.degree, other.components)

    def __add__(self, other: "SymTensorField") -> "SymTensorField":
        if (self.dim, self.degree) != (other.dim, other.degree):
            raise DimensionMismatch("tensor shapes differ")
        out = dict(self.components)
        for k, p in other.components.items():
            out[k] = out[k] + p if k in out else p
        return SymTensorField(self.dim, self.degree, {k: p for k, p in out.items() if p})

    def scale(self, c) -> "SymTensorField":
        return SymTensorField(self.dim, self.degree, {k: p.scale(c) for k, p in self.components.items()})

    def full_components(self) -> dict:
        """All index tuples (not just sorted ones) with nonzero entries."""
        out = {}
        for k, p in self.components.items():
            for perm in set(itertools.permutations(k)):
                out[perm] = p
        return out

    def embed(self, dim: int, positions: Sequence[int]) -> "SymTensorField":
        return SymTensorField(
            dim,
            self.degree,
            {tuple(positions[i] for i in k): p.embed(dim, positions) for k, p in self.components.items()},
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{tuple(i + 1 for i in k)}: {p}" for k, p in sorted(self.components.items()))
        return f"SymTensorField(dim={self.dim}, degree={self.degree}, {{{body}}})"


class IndexedTensor:
    """Tensor field without symmetry assumptions, keyed by full index tuples.

    Used for the structure tensor, which is only symmetric in its first index
    pair, and for mixed tensors where the last index is contravariant.
    """

    __slots__ = ("dim", "rank", "data")

    def __init__(self, dim: int, rank: int, data: Mapping[tuple, LaurentPoly] | None = None):
        self.dim = dim
        self.rank = rank
        self.data = {tuple(k): p for k, p in (data or {}).items() if p}

    def __getitem__(self, idx) -> LaurentPoly:
        return self.data.get(tuple(idx)) or LaurentPoly.zero(self.dim)

    def items(self):
        return self.data.items()

    def is_zero(self) -> bool:
        return not self.data

    def __eq__(self, other) -> bool:
        if not isinstance(other, IndexedTensor):
            return NotImplemented
        return (self.dim, self.rank, self.data) == (other.dim, other.rank, other.data)

    @classmethod
    def from_sym(cls, t: SymTensorField) -> "IndexedTensor":
        return cls(t.dim, t.degree, t.full_components())


def _check_dims(t, g: FlatMetric):
    if t.dim != g.dim:
        raise DimensionMismatch(f"tensor dim {t.dim} vs metric dim {g.dim}")


def raise_last_index(t, g: FlatMetric) -> IndexedTensor:
    """``t_{i..j a} g^{a k}``, returned keyed by ``(i, .., j, k)``."""
    _check_dims(t, g)
    full = t.full_components() if isinstance(t, SymTensorField) else t.data
    out: dict = {}
    for idx, p in full.items():
        head, a = idx[:-1], idx[-1]
        for k, gak in g.inv_nonzero(a):
            key = head + (k,)
            term = p.scale(gak)
            out[key] = out[key] + term if key in out else term
    rank_ = t.degree if isinstance(t, SymTensorField) else t.rank
    return IndexedTensor(t.dim, rank_, out)


def lower_last_index(t: IndexedTensor, g: FlatMetric) -> IndexedTensor:
    _check_dims(t, g)
    out: dict = {}
    for idx, p in t.data.items():
        head, a = idx[:-1], idx[-1]
        for k, gak in g.nonzero(a):
            key = head + (k,)
            term = p.scale(gak)
            out[key] = out[key] + term if key in out else term
    return IndexedTensor(t.dim, t.rank, out)


def metric_trace(t: SymTensorField, g: FlatMetric) -> SymTensorField:
    """``g^{ab} t_{abk}`` for a symmetric degree-3 tensor."""
    _check_dims(t, g)
    if t.degree != 3:
        raise DimensionMismatch("metric_trace expects a degree-3 tensor")
    n = g.dim
    out = {}
    for k in range(n):
        acc = LaurentPoly.zero(n)
        for a in range(n):
            for b, gab in g.inv_nonzero(a):
                c = t[a, b, k]
                if c:
                    acc = acc + c.scale(gab)
        if acc:
            out[(k,)] = acc
    return SymTensorField(n, 1, out)


def hessian(V: LaurentPoly, g: FlatMetric) -> SymTensorField:
    if V.arity != g.dim:
        raise DimensionMismatch(f"potential arity {V.arity} vs metric dim {g.dim}")
    n = g.dim
    first = [V.partial(i) for i in range(n)]
    return SymTensorField(n, 2, {(i, j): first[i].partial(j) for i in range(n) for j in range(i, n)})


def laplacian(V: LaurentPoly, g: FlatMetric) -> LaurentPoly:
    if V.arity != g.dim:
        raise DimensionMismatch(f"potential arity {V.arity} vs metric dim {g.dim}")
    n = g.dim
    acc = LaurentPoly.zero(n)
    for a in range(n):
        da = V.partial(a)
        if not da:
            continue
        for b, gab in g.inv_nonzero(a):
            acc = acc + da.partial(b).scale(gab)
    return acc


def trace2(t: SymTensorField, g: FlatMetric) -> LaurentPoly:
    """``g^{ab} t_{ab}`` for a symmetric 2-tensor."""
    acc = LaurentPoly.zero(g.dim)
    for a in range(g.dim):
        for b, gab in g.inv_nonzero(a):
            c = t[a, b]
            if c:
                acc = acc + c.scale(gab)
    return acc
