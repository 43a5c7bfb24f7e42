"""Solve the trace-free Hessian equation for superintegrable potentials.

The equation is ``d_i d_j V = That^k_ij d_k V + g_ij (Lap V) / n``. The
solution space is found by a finite Laurent-monomial ansatz: every monomial of
an :class:`ExponentWindow` is pushed through the linear residual operator and
the exact kernel of the resulting coefficient-matching system is returned.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact_algebra import LaurentPoly, order_key, reduced_echelon, sparse_nullspace
from .flat_geometry import SymTensorField, laplacian
from .hesse_frobenius import HesseFrobenius, StructurePair, structure_tensor

log = logging.getLogger(__name__)


class EmptyWindow(ValueError):
    pass


class SplitMismatch(ValueError):
    pass


@dataclass(frozen=True)
class ExponentWindow:
    """Monomials ``x^e`` with ``lo <= e <= hi`` and ``sum(|e_j|) <= total_degree_cap``."""

    lo: tuple
    hi: tuple
    total_degree_cap: int = 4

    def __post_init__(self):
        object.__setattr__(self, "lo", tuple(int(v) for v in self.lo))
        object.__setattr__(self, "hi", tuple(int(v) for v in self.hi))
        if len(self.lo) != len(self.hi):
            raise ValueError("lo and hi must have the same length")
        if any(a > b for a, b in zip(self.lo, self.hi)):
            raise ValueError("window needs lo <= hi componentwise")

    @property
    def dim(self) -> int:
        return len(self.lo)

    def monomials(self) -> list:
        """Exponent vectors in canonical order (highest graded-lex first)."""
        cap = self.total_degree_cap
        out = []

        def rec(j, prefix, used):
            if j == self.dim:
                out.append(tuple(prefix))
                return
            for e in range(self.lo[j], self.hi[j] + 1):
                u = used + abs(e)
                if u <= cap:
                    prefix.append(e)
                    rec(j + 1, prefix, u)
                    prefix.pop()

        rec(0, [], 0)
        if not out:
            raise EmptyWindow("exponent window contains no monomials")
        out.sort(key=order_key, reverse=True)
        return out

    @classmethod
    def uniform(cls, n: int, lo: int, hi: int, cap: int = 4) -> "ExponentWindow":
        return cls((lo,) * n, (hi,) * n, cap)


def default_window(hf: HesseFrobenius, sp: StructurePair | None = None, hi: int = 3, cap: int = 4) -> ExponentWindow:
    """Negative exponents (down to -2) only where the structure tensor has poles."""
    sp = sp or structure_tensor(hf)
    n = hf.dim
    lo = [0] * n
    for p in sp.That.data.values():
        for j, m in enumerate(p.min_exponents()):
            if m < 0:
                lo[j] = -2
    return ExponentWindow(tuple(lo), (hi,) * n, cap)


@dataclass
class PotentialFamily:
    hf: HesseFrobenius
    basis: list
    window: ExponentWindow | None = None
    warnings: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def combine(self, coeffs: Sequence) -> LaurentPoly:
        acc = LaurentPoly.zero(self.hf.dim)
        for c, V in zip(coeffs, self.basis):
            acc = acc + V.scale(c)
        return acc

    def contains(self, V: LaurentPoly) -> bool:
        return in_span(self.basis, V)

    def to_json(self) -> dict:
        return {"dim_family": self.dim, "basis": [V.to_json() for V in self.basis]}


def poly_rows(polys: Sequence[LaurentPoly]):
    """Coefficient rows of polynomials over a shared monomial index."""
    index: dict = {}
    rows = []
    for p in polys:
        row = {}
        for e, c in p.terms.items():
            j = index.setdefault(e, len(index))
            row[j] = c
        rows.append(row)
    return rows, index


def span_rank(polys: Sequence[LaurentPoly]) -> int:
    rows, _ = poly_rows(polys)
    return len(reduced_echelon(rows))


def in_span(basis: Sequence[LaurentPoly], V: LaurentPoly) -> bool:
    return span_rank(list(basis) + [V]) == span_rank(basis)


def wilczynski_residual(hf: HesseFrobenius, V: LaurentPoly, sp: StructurePair | None = None) -> SymTensorField:
    """``d_i d_j V - That^k_ij d_k V - g_ij Lap(V) / n`` as a symmetric 2-tensor."""
    sp = sp or structure_tensor(hf)
    return _residual(hf, V, sp.that_by_pair())


def _residual(hf: HesseFrobenius, V: LaurentPoly, that: dict) -> SymTensorField:
    n = hf.dim
    g = hf.metric.g
    grad = [V.partial(k) for k in range(n)]
    lap_n = laplacian(V, hf.metric).scale(Fraction(1, n))
    comps = {}
    for i in range(n):
        for j in range(i, n):
            r = grad[i].partial(j)
            for k, t in that.get((i, j), ()):
                if grad[k]:
                    r = r - t * grad[k]
            if g[i][j] and lap_n:
                r = r - lap_n.scale(g[i][j])
            if r:
                comps[(i, j)] = r
    return SymTensorField(n, 2, comps)


def solve_potentials(hf: HesseFrobenius, window: ExponentWindow | None = None) -> PotentialFamily:
    """Exact solution space of the potential equation within `window`."""
    sp = structure_tensor(hf)
    window = window or default_window(hf, sp)
    if window.dim != hf.dim:
        raise ValueError("window dimension does not match the structure")
    monos = window.monomials()
    that = sp.that_by_pair()
    n = hf.dim

    # columns = ansatz monomials; rows = (component, residual monomial)
    row_index: dict = {}
    rows: list = []
    for col, e in enumerate(monos):
        res = _residual(hf, LaurentPoly._raw(n, {e: Fraction(1)}), that)
        for ij, p in res.items():
            for re, c in p.terms.items():
                key = (ij, re)
                r = row_index.get(key)
                if r is None:
                    r = row_index[key] = len(rows)
                    rows.append({})
                rows[r][col] = c
    kernel = sparse_nullspace(rows, len(monos))
    basis = [LaurentPoly._raw(n, {monos[j]: c for j, c in enumerate(v) if c}) for v in kernel]
    basis = _rref_polys(basis, monos)
    fam = PotentialFamily(hf, basis, window)
    if fam.dim != n + 2:
        msg = f"potential family has dimension {fam.dim}, expected {n + 2} (window too small or structure not abundant)"
        # in one dimension the equation is vacuous and every window monomial solves it
        (log.warning if n > 1 else log.debug)(msg)
        fam.warnings.append(msg)
    return fam


def _rref_polys(polys: Sequence[LaurentPoly], monos: Sequence) -> list:
    """Reduced echelon basis of the span with respect to the canonical monomial order."""
    if not polys:
        return []
    col = {e: j for j, e in enumerate(monos)}
    rows = [{col[e]: c for e, c in p.terms.items()} for p in polys]
    piv = reduced_echelon(rows)
    n = polys[0].arity
    return [LaurentPoly._raw(n, {monos[j]: c for j, c in piv[k].items()}) for k in sorted(piv)]


@dataclass
class SeparationReport:
    split: tuple
    separated: bool  # no basis element has a monomial mixing both blocks
    mixed_basis: list  # indices of basis elements with mixed monomials
    dim_family: int
    dim_pure_first: int  # functions of the first block only (constants included)
    dim_pure_second: int
    coupled: int  # parameters tying both blocks together
    factor_dims: tuple | None = None
    deficit: int | None = None

    def to_json(self) -> dict:
        return dict(self.__dict__)


def _subspace_avoiding(basis: Sequence[LaurentPoly], forbidden) -> int:
    """Dimension of the subspace of span(basis) whose monomials all avoid `forbidden`."""
    index: dict = {}
    cols: list = []
    for p in basis:
        col = {}
        for e, c in p.terms.items():
            if forbidden(e):
                col[index.setdefault(e, len(index))] = c
        cols.append(col)
    rows: dict = {}
    for j, col in enumerate(cols):
        for r, c in col.items():
            rows.setdefault(r, {})[j] = c
    return len(sparse_nullspace(list(rows.values()), len(basis)))


def check_separation(family: PotentialFamily, split: Sequence[int], factor_dims: Sequence[int] | None = None) -> SeparationReport:
    """Additive separation of a family on a glued structure with block sizes `split`."""
    split = tuple(split)
    n = family.hf.dim
    if sum(split) != n or len(split) not in (1, 2) or any(s < 0 for s in split):
        raise SplitMismatch(f"split {split} does not partition dimension {n}")
    if len(split) == 1 or 0 in split:
        return SeparationReport(split, True, [], family.dim, family.dim, family.dim, 0,
                                tuple(factor_dims) if factor_dims else None, None)
    na = split[0]

    def touches_first(e):
        return any(e[:na])

    def touches_second(e):
        return any(e[na:])

    mixed = [k for k, V in enumerate(family.basis) if any(touches_first(e) and touches_second(e) for e in V.terms)]
    pure_first = _subspace_avoiding(family.basis, touches_second)
    pure_second = _subspace_avoiding(family.basis, touches_first)
    coupled = family.dim - (pure_first + pure_second - 1)
    deficit = None
    if factor_dims is not None:
        deficit = sum(factor_dims) - family.dim
    return SeparationReport(split, not mixed, mixed, family.dim, pure_first, pure_second, coupled,
                            tuple(factor_dims) if factor_dims else None, deficit)
