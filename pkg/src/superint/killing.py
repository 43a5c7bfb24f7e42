"""Killing tensors of flat metrics and their compatibility with potential families.

Killing tensors are stored with lower indices, ``K = K_ij dx^i dx^j``, where
``dx^i dx^j`` is the symmetric product. The associated quadratic integral is
``F = K^ij p_i p_j + W`` with ``K^ij`` obtained by raising both indices; so
``K = g`` gives ``F = H``.

Compatibility with a potential ``V`` means the 1-form ``w_i = K_i^a d_a V``
is closed; then ``W`` with ``dW = w`` completes ``F`` to an integral.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .exact_algebra import (
    IncrementalBasis,
    LaurentPoly,
    RatMatrix,
    reduced_echelon,
    sparse_nullspace,
)
from .flat_geometry import FlatMetric, SymTensorField
from .hesse_frobenius import HesseFrobenius, StructurePair, structure_tensor
from .potential_solver import PotentialFamily

log = logging.getLogger(__name__)


class NotClosed(ValueError):
    pass


class LogObstruction(ValueError):
    """The antiderivative would need a logarithm."""


class KernelMismatch(RuntimeError):
    pass


def thompson_dimension(n: int) -> int:
    """Dimension of the space of Killing 2-tensors of flat n-space."""
    return n * (n + 1) ** 2 * (n + 2) // 12


class KillingTensor(SymTensorField):
    def __init__(self, dim: int, components=None):
        super().__init__(dim, 2, components)

    @classmethod
    def from_sym(cls, t: SymTensorField) -> "KillingTensor":
        return cls(t.dim, t.components)

    @classmethod
    def sym_product(cls, alpha: Sequence[LaurentPoly], beta: Sequence[LaurentPoly]) -> "KillingTensor":
        """``alpha beta = (alpha (x) beta + beta (x) alpha) / 2`` for 1-forms."""
        n = len(alpha)
        comps = {}
        for i in range(n):
            for j in range(i, n):
                p = (alpha[i] * beta[j] + alpha[j] * beta[i]).scale(Fraction(1, 2))
                if p:
                    comps[(i, j)] = p
        return cls(n, comps)

    def coefficient_vector(self, index: dict) -> dict:
        """Sparse coordinates w.r.t. ``index[(i, j, exponent)] -> column``."""
        out = {}
        for (i, j), p in self.components.items():
            for e, c in p.terms.items():
                out[index.setdefault((i, j, e), len(index))] = c
        return out

    def __add__(self, other):
        return KillingTensor.from_sym(SymTensorField.__add__(self, other))

    def scale(self, c):
        return KillingTensor.from_sym(SymTensorField.scale(self, c))

    def to_json(self) -> list:
        return [{"i": [i + 1, j + 1], "poly": p.to_json()} for (i, j), p in sorted(self.components.items())]


def check_killing(K: SymTensorField, g: FlatMetric | None = None) -> bool:
    """``d_i K_jk + d_j K_ki + d_k K_ij = 0`` identically (lower indices, affine coordinates).

    The metric is accepted for symmetry with the other geometric checks; with
    lower indices and constant g the equation does not involve it.
    """
    n = K.dim
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                s = K[j, k].partial(i) + K[k, i].partial(j) + K[i, j].partial(k)
                if s:
                    return False
    return True


def killing_vectors(n: int) -> list:
    """Killing 1-forms: translations ``dx_a``, then rotations ``x_b dx_a - x_a dx_b``."""
    x = [LaurentPoly.variable(n, i) for i in range(n)]
    zero = LaurentPoly.zero(n)
    one = LaurentPoly.constant(n, 1)
    out = []
    for a in range(n):
        v = [zero] * n
        v[a] = one
        out.append(v)
    for a in range(n):
        for b in range(a + 1, n):
            v = [zero] * n
            v[a] = x[b]
            v[b] = -x[a]
            out.append(v)
    return out


def killing_basis(g: FlatMetric | int) -> list:
    """Basis of Killing 2-tensors from symmetric products of Killing 1-forms.

    With lower indices in affine coordinates the result does not depend on the
    metric's signature, only on its dimension.
    """
    n = g if isinstance(g, int) else g.dim
    vecs = killing_vectors(n)
    index: dict = {}
    basis = IncrementalBasis()
    out = []
    for a, b in itertools.combinations_with_replacement(range(len(vecs)), 2):
        K = KillingTensor.sym_product(vecs[a], vecs[b])
        if basis.add(K.coefficient_vector(index)):
            out.append(K)
    expected = thompson_dimension(n)
    if len(out) != expected:
        raise AssertionError(f"Killing basis has {len(out)} elements, expected {expected}")
    return out


def raise_second(K: SymTensorField, g: FlatMetric) -> list:
    """Matrix ``K_i^l = K_ib g^bl`` as nested lists of polynomials."""
    n = K.dim
    out = [[LaurentPoly.zero(n) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for b in range(n):
            c = K[i, b]
            if not c:
                continue
            for l, gbl in g.inv_nonzero(b):
                out[i][l] = out[i][l] + c.scale(gbl)
    return out


def raise_both(K: SymTensorField, g: FlatMetric) -> dict:
    """``K^ij`` for i <= j."""
    n = K.dim
    mixed = raise_second(K, g)
    out = {}
    for i in range(n):
        for j in range(i, n):
            acc = LaurentPoly.zero(n)
            for a, gia in g.inv_nonzero(i):
                if mixed[a][j]:
                    acc = acc + mixed[a][j].scale(gia)
            if acc:
                out[(i, j)] = acc
    return out


def companion_form(Kmixed: list, grad: Sequence[LaurentPoly]) -> list:
    """``w_i = K_i^a d_a V``."""
    n = len(grad)
    out = []
    for i in range(n):
        acc = LaurentPoly.zero(n)
        for a in range(n):
            if Kmixed[i][a] and grad[a]:
                acc = acc + Kmixed[i][a] * grad[a]
        out.append(acc)
    return out


def curl(w: Sequence[LaurentPoly]) -> dict:
    """``{(i,j): d_i w_j - d_j w_i}`` for i < j, zero entries dropped."""
    n = len(w)
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            c = w[j].partial(i) - w[i].partial(j)
            if c:
                out[(i, j)] = c
    return out


def _assemble(columns: Sequence[dict]) -> RatMatrix:
    """Columns given as ``{row_key: value}`` -> sparse matrix with rows in first-seen order."""
    row_index: dict = {}
    rows: list = []
    for col, entries in enumerate(columns):
        for key, v in entries.items():
            r = row_index.get(key)
            if r is None:
                r = row_index[key] = len(rows)
                rows.append({})
            rows[r][col] = v
    return RatMatrix.from_sparse_rows(rows, len(columns))


def bd_system(hf: HesseFrobenius, family: PotentialFamily, basis: Sequence[SymTensorField]) -> RatMatrix:
    """Closedness of ``K(dV)`` for every basis potential, linear in the basis coefficients."""
    for K in basis:
        if not check_killing(K):
            raise ValueError("bd_system only accepts Killing tensors")
    g = hf.metric
    grads = [[V.partial(a) for a in range(hf.dim)] for V in family.basis]
    columns = []
    for K in basis:
        Km = raise_second(K, g)
        entries = {}
        for mu, grad in enumerate(grads):
            for ij, p in curl(companion_form(Km, grad)).items():
                for e, c in p.terms.items():
                    entries[(mu, ij, e)] = c
        columns.append(entries)
    return _assemble(columns)


def bd_system_structure(hf: HesseFrobenius, family: PotentialFamily, basis: Sequence[SymTensorField],
                        sp: StructurePair | None = None) -> RatMatrix:
    """Same condition with second derivatives of V eliminated via the potential equation.

    Rows come from ``(d_j K_i^k - d_i K_j^k + K_i^a That^k_aj - K_j^a That^k_ai) d_k V / 2``
    for i < j, which equals the curl of ``K(dV)`` whenever V solves the potential equation.
    """
    sp = sp or structure_tensor(hf)
    n = hf.dim
    g = hf.metric
    that = {}
    for (a, j, k), p in sp.That.items():
        that.setdefault((a, j), []).append((k, p))
    grads = [[V.partial(a) for a in range(n)] for V in family.basis]
    half = Fraction(1, 2)
    columns = []
    for K in basis:
        Km = raise_second(K, g)
        # coefficient 1-forms A_ij^k, antisymmetric in (i, j)
        A = {}
        for i in range(n):
            for j in range(i + 1, n):
                row = {}
                for k in range(n):
                    p = Km[i][k].partial(j) - Km[j][k].partial(i)
                    if p:
                        row[k] = p
                for a in range(n):
                    if Km[i][a]:
                        for k, t in that.get((a, j), ()):
                            row[k] = row.get(k, LaurentPoly.zero(n)) + Km[i][a] * t
                    if Km[j][a]:
                        for k, t in that.get((a, i), ()):
                            row[k] = row.get(k, LaurentPoly.zero(n)) - Km[j][a] * t
                row = {k: p for k, p in row.items() if p}
                if row:
                    A[(i, j)] = row
        entries = {}
        for mu, grad in enumerate(grads):
            for ij, row in A.items():
                acc = LaurentPoly.zero(n)
                for k, p in row.items():
                    if grad[k]:
                        acc = acc + p * grad[k]
                for e, c in acc.terms.items():
                    entries[(mu, ij, e)] = c * half
        columns.append(entries)
    return _assemble(columns)


def integrate_companion(K: SymTensorField, V: LaurentPoly, g: FlatMetric) -> LaurentPoly:
    """``W`` with ``dW = K(dV)`` and zero constant term."""
    w = companion_form(raise_second(K, g), [V.partial(a) for a in range(V.arity)])
    return integrate_closed_form(w)


def integrate_closed_form(w: Sequence[LaurentPoly]) -> LaurentPoly:
    """Potential of an exact Laurent 1-form, by integrating one coordinate at a time."""
    n = len(w)
    rest = list(w)
    W = LaurentPoly.zero(n)
    for i in range(n):
        piece = {}
        for e, c in rest[i].terms.items():
            k = e[i]
            if k == -1:
                raise LogObstruction(f"term with x{i + 1}^-1 in component {i + 1} has no Laurent antiderivative")
            ne = list(e)
            ne[i] = k + 1
            piece[tuple(ne)] = c / (k + 1)
        P = LaurentPoly._raw(n, piece)
        W = W + P
        for j in range(i + 1, n):
            rest[j] = rest[j] - P.partial(j)
    # a non-closed form still integrates coordinate by coordinate, just to the wrong answer
    for i in range(n):
        if W.partial(i) != w[i]:
            raise NotClosed(f"1-form is not closed (component {i + 1} not reproduced)")
    return W


@dataclass
class CompatibleSystem:
    hf: HesseFrobenius
    family: PotentialFamily
    basis: list  # compatible KillingTensor list
    companions: list  # companions[nu][mu] = W for basis[nu], family.basis[mu]
    diagnostics: list = field(default_factory=list)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, K: SymTensorField) -> bool:
        return tensor_in_span(self.basis, K)

    def to_json(self) -> dict:
        return {
            "dim_compatible": self.dim,
            "basis": [K.to_json() for K in self.basis],
            "companions": [[W.to_json() for W in row] for row in self.companions],
        }


def tensor_rank(tensors: Sequence[SymTensorField]) -> int:
    index: dict = {}
    basis = IncrementalBasis()
    for K in tensors:
        basis.add(KillingTensor.coefficient_vector(K, index))
    return basis.rank


def tensor_in_span(span: Sequence[SymTensorField], K: SymTensorField) -> bool:
    return tensor_rank(list(span) + [K]) == tensor_rank(span)


def _tensor_key(i, j, e):
    # highest degree first, so tensors pivoting on constants come out constant
    return (-sum(abs(v) for v in e), i != j, i, j, tuple(-v for v in e))


def _rref_tensors(tensors: Sequence[SymTensorField], n: int) -> list:
    keys = sorted({(i, j, e) for K in tensors for (i, j), p in K.components.items() for e in p.terms},
                  key=lambda t: _tensor_key(*t))
    col = {k: c for c, k in enumerate(keys)}
    rows = [{col[(i, j, e)]: c for (i, j), p in K.components.items() for e, c in p.terms.items()} for K in tensors]
    piv = reduced_echelon(rows)
    out = []
    for pc in sorted(piv):
        comps: dict = {}
        for c, v in piv[pc].items():
            i, j, e = keys[c]
            comps.setdefault((i, j), {})[e] = v
        out.append(KillingTensor(n, {ij: LaurentPoly(n, t) for ij, t in comps.items()}))
    return out


def compatible_killing(hf: HesseFrobenius, family: PotentialFamily, basis: Sequence[SymTensorField] | None = None,
                       cross_check: bool = False) -> CompatibleSystem:
    """Killing tensors compatible with every potential of the family, with companion potentials."""
    if not family.basis:
        raise ValueError("potential family is empty")
    n = hf.dim
    basis = list(basis) if basis is not None else killing_basis(hf.metric)
    m = bd_system(hf, family, basis)
    kernel = sparse_nullspace(m.sparse_rows(), m.cols)
    diagnostics = []
    if cross_check:
        m2 = bd_system_structure(hf, family, basis)
        k2 = sparse_nullspace(m2.sparse_rows(), m2.cols)
        same = len(k2) == len(kernel) and _same_span(kernel, k2)
        if not same:
            msg = f"closedness kernel ({len(kernel)}) and structure-tensor kernel ({len(k2)}) differ"
            log.error(msg)
            diagnostics.append(msg)
            raise KernelMismatch(msg)
        diagnostics.append(f"kernel cross-check passed ({len(kernel)})")
    tensors = []
    for beta in kernel:
        acc = KillingTensor(n)
        for b, K in zip(beta, basis):
            if b:
                acc = acc + K.scale(b)
        tensors.append(acc)
    tensors = _rref_tensors(tensors, n)
    companions = [[integrate_companion(K, V, hf.metric) for V in family.basis] for K in tensors]
    return CompatibleSystem(hf, family, tensors, companions, diagnostics)


def _same_span(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    def rows(vs):
        return [{j: x for j, x in enumerate(v) if x} for v in vs]

    ra = len(reduced_echelon(rows(a)))
    return ra == len(reduced_echelon(rows(b))) == len(reduced_echelon(rows(list(a) + list(b))))


@dataclass
class InheritanceReport:
    total: int
    factor_dims: list  # compatible dimension of each factor
    inherited: list  # dimension of each embedded factor space lying in the product space
    mixed: int  # tensors of the product not accounted for by any factor

    def to_json(self) -> dict:
        return dict(self.__dict__)


def inheritance_report(product: CompatibleSystem, factors: Sequence[CompatibleSystem],
                       embeddings: Sequence[Sequence[int]] | None = None) -> InheritanceReport:
    """Split the product's compatible dimension into tensors inherited from factors and new ones.

    ``embeddings[f][i]`` is the product coordinate of factor f's coordinate i;
    by default factors occupy consecutive blocks.
    """
    n = product.hf.dim
    if embeddings is None:
        embeddings, off = [], 0
        for f in factors:
            embeddings.append(list(range(off, off + f.hf.dim)))
            off += f.hf.dim
    total = product.dim
    inherited = []
    for f, pos in zip(factors, embeddings):
        emb = [KillingTensor.from_sym(K.embed(n, pos)) for K in f.basis]
        # dim(A ∩ B) = dim A + dim B - dim(A + B)
        inherited.append(len(emb) + total - tensor_rank(list(product.basis) + emb))
    return InheritanceReport(total, [f.dim for f in factors], inherited, total - sum(inherited))
