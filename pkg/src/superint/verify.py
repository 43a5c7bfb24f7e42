"""Ground-truth certification with phase-space polynomials.

A :class:`PhasePoly` is polynomial in the momenta with Laurent-polynomial
coefficients in the positions. Brackets are computed symbolically; functional
independence is certified by exact gradient ranks at random rational points.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .exact_algebra import IncrementalBasis, LaurentPoly, PoleAtPoint, as_rational
from .flat_geometry import FlatMetric, SymTensorField
from .killing import CompatibleSystem, raise_both


class BracketNonzero(AssertionError):
    pass


class PhasePoly:
    """``sum_m coeff_m(x) p^m`` keyed by non-negative momentum exponent tuples."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[tuple, LaurentPoly] | None = None):
        self.dim = dim
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != dim or any(k < 0 for k in m):
                raise ValueError(f"bad momentum exponent {m}")
            if c.arity != dim:
                raise ValueError("coefficient arity does not match dimension")
            if m in clean:
                c = clean[m] + c
            if c:
                clean[m] = c
            else:
                clean.pop(m, None)
        self.terms = clean

    @classmethod
    def from_position(cls, V: LaurentPoly) -> "PhasePoly":
        return cls(V.arity, {(0,) * V.arity: V})

    @classmethod
    def momentum(cls, n: int, i: int) -> "PhasePoly":
        m = [0] * n
        m[i] = 1
        return cls(n, {tuple(m): LaurentPoly.constant(n, 1)})

    @classmethod
    def quadratic(cls, upper: Mapping[tuple, LaurentPoly], W: LaurentPoly) -> "PhasePoly":
        """``Q^ij p_i p_j + W`` from the upper-triangular entries of a symmetric Q."""
        n = W.arity
        terms = {(0,) * n: W}
        for (i, j), q in upper.items():
            m = [0] * n
            m[i] += 1
            m[j] += 1
            m = tuple(m)
            c = q if i == j else q.scale(2)
            terms[m] = terms[m] + c if m in terms else c
        return cls(n, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        return isinstance(other, PhasePoly) and self.dim == other.dim and self.terms == other.terms

    def __add__(self, other: "PhasePoly") -> "PhasePoly":
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out[m] + c if m in out else c
        return PhasePoly(self.dim, out)

    def __neg__(self) -> "PhasePoly":
        return PhasePoly(self.dim, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "PhasePoly") -> "PhasePoly":
        return self + (-other)

    def scale(self, c) -> "PhasePoly":
        return PhasePoly(self.dim, {m: p.scale(c) for m, p in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                p = c1 * c2
                out[m] = out[m] + p if m in out else p
        return PhasePoly(self.dim, out)

    __rmul__ = __mul__

    def dx(self, i: int) -> "PhasePoly":
        return PhasePoly(self.dim, {m: c.partial(i) for m, c in self.terms.items()})

    def dp(self, i: int) -> "PhasePoly":
        out = {}
        for m, c in self.terms.items():
            k = m[i]
            if k:
                nm = list(m)
                nm[i] = k - 1
                out[tuple(nm)] = c.scale(k)
        return PhasePoly(self.dim, out)

    def momentum_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def evaluate(self, x: Sequence, p: Sequence) -> Fraction:
        p = [as_rational(v) for v in p]
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c.evaluate(x)
            for pk, k in zip(p, m):
                if k:
                    v *= pk ** k
            total += v
        return total

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=lambda m: (sum(m), m), reverse=True):
            mono = "*".join(f"p{i + 1}" if k == 1 else f"p{i + 1}^{k}" for i, k in enumerate(m) if k)
            c = str(self.terms[m])
            parts.append(f"({c})*{mono}" if mono else f"({c})")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"PhasePoly({self.dim}, {str(self)!r})"

    def to_json(self) -> list:
        return [{"p": list(m), "coeff": c.to_json()} for m, c in sorted(self.terms.items(), reverse=True)]


def poisson_bracket(F: PhasePoly, G: PhasePoly) -> PhasePoly:
    """``{F, G} = sum_j dF/dx_j dG/dp_j - dG/dx_j dF/dp_j``."""
    if F.dim != G.dim:
        raise ValueError("dimension mismatch")
    acc = PhasePoly(F.dim)
    for j in range(F.dim):
        acc = acc + F.dx(j) * G.dp(j) - G.dx(j) * F.dp(j)
    return acc


def build_hamiltonian(g: FlatMetric, V: LaurentPoly) -> PhasePoly:
    """``H = g^ij p_i p_j + V`` with the inverse metric."""
    if V.arity != g.dim:
        raise ValueError("potential arity does not match metric")
    n = g.dim
    upper = {}
    for i in range(n):
        for j in range(i, n):
            if g.g_inv[i][j]:
                upper[(i, j)] = LaurentPoly.constant(n, g.g_inv[i][j])
    return PhasePoly.quadratic(upper, V)


def build_integral(K: SymTensorField, W: LaurentPoly, g: FlatMetric) -> PhasePoly:
    """``F = K^ij p_i p_j + W``."""
    return PhasePoly.quadratic(raise_both(K, g), W)


def gradient(F: PhasePoly, x: Sequence, p: Sequence) -> list:
    n = F.dim
    return [F.dx(i).evaluate(x, p) for i in range(n)] + [F.dp(i).evaluate(x, p) for i in range(n)]


def independence_rank(fns: Sequence[PhasePoly], point: Sequence) -> int:
    """Exact rank of the phase-space gradients at ``point = (x_1..x_n, p_1..p_n)``."""
    if not fns:
        return 0
    n = fns[0].dim
    if len(point) != 2 * n:
        raise ValueError(f"point must have {2 * n} coordinates")
    x, p = point[:n], point[n:]
    basis = IncrementalBasis()
    for F in fns:
        basis.add(dict(enumerate(gradient(F, x, p))))
    return basis.rank


def random_rational(rng: random.Random) -> Fraction:
    a = rng.choice([v for v in range(-9, 10) if v])
    return Fraction(a, rng.randint(1, 9))


def random_point(rng: random.Random, n: int) -> list:
    """2n nonzero rationals a/b with a in [-9,9]\\{0}, b in [1,9]; never on a pole."""
    return [random_rational(rng) for _ in range(2 * n)]


@dataclass
class Certificate:
    system: str
    n: int
    integrals: list  # PhasePoly, H first
    bracket_zero: bool
    rank: int
    target: int
    selected: list  # indices into the compatible basis
    witness_point: list
    seed: int
    coefficients: list
    points_tried: int
    max_rank_all: int
    upper_bound_ok: bool
    notes: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.bracket_zero and self.rank == self.target and self.upper_bound_ok

    def to_json(self, with_integrals: bool = True) -> dict:
        out = {
            "system": self.system,
            "n": self.n,
            "valid": self.valid,
            "bracket_zero": self.bracket_zero,
            "rank": self.rank,
            "target": self.target,
            "selected": self.selected,
            "witness_point": [str(v) for v in self.witness_point],
            "seed": self.seed,
            "coefficients": [str(c) for c in self.coefficients],
            "points_tried": self.points_tried,
            "max_rank_all": self.max_rank_all,
            "upper_bound_ok": self.upper_bound_ok,
            "notes": self.notes,
        }
        if with_integrals:
            out["integrals"] = [F.to_json() for F in self.integrals]
        return out


def system_integrals(compat: CompatibleSystem, coeffs: Sequence) -> tuple:
    """``(H, [F_nu])`` for the potential ``sum_mu coeffs[mu] V_mu``."""
    g = compat.hf.metric
    V = compat.family.combine(coeffs)
    H = build_hamiltonian(g, V)
    Fs = []
    for K, Ws in zip(compat.basis, compat.companions):
        W = LaurentPoly.zero(compat.hf.dim)
        for c, w in zip(coeffs, Ws):
            W = W + w.scale(c)
        Fs.append(build_integral(K, W, g))
    return H, Fs


def brackets_vanish(compat: CompatibleSystem) -> list:
    """Every (nu, mu) whose integral fails to commute with the matching Hamiltonian."""
    g = compat.hf.metric
    bad = []
    for mu, V in enumerate(compat.family.basis):
        H = build_hamiltonian(g, V)
        for nu, K in enumerate(compat.basis):
            if poisson_bracket(build_integral(K, compat.companions[nu][mu], g), H):
                bad.append((nu, mu))
    return bad


def _is_diagonal(K: SymTensorField) -> bool:
    return all(i == j for i, j in K.components)


def certify(compat: CompatibleSystem, seed: int = 0, max_points: int = 5, system: str = "") -> Certificate:
    """Brackets vanish identically and 2n-2 integrals plus H reach gradient rank 2n-1."""
    if not compat.basis:
        raise ValueError("no compatible Killing tensors")
    n = compat.hf.dim
    rng = random.Random(seed)
    coeffs = [random_rational(rng) for _ in compat.family.basis]
    H, Fs = system_integrals(compat, coeffs)
    for nu, F in enumerate(Fs):
        if poisson_bracket(F, H):
            raise BracketNonzero(f"integral {nu} does not commute with H")
    target = 2 * n - 1
    order = sorted(range(len(Fs)), key=lambda k: (not _is_diagonal(compat.basis[k]), k))
    best = (-1, [], None)
    max_all = 0
    upper_ok = True
    tried = 0
    for _ in range(max_points):
        tried += 1
        pt = random_point(rng, n)
        x, p = pt[:n], pt[n:]
        try:
            gH = gradient(H, x, p)
            grads = {k: gradient(Fs[k], x, p) for k in order}
        except PoleAtPoint:
            continue
        basis = IncrementalBasis()
        basis.add(dict(enumerate(gH)))
        chosen = []
        for k in order:
            if len(chosen) == target - 1:
                break
            if basis.add(dict(enumerate(grads[k]))):
                chosen.append(k)
        full = IncrementalBasis()
        full.add(dict(enumerate(gH)))
        for k in order:
            full.add(dict(enumerate(grads[k])))
        max_all = max(max_all, full.rank)
        upper_ok = upper_ok and full.rank <= target
        if basis.rank > best[0]:
            best = (basis.rank, chosen, pt)
        if basis.rank == target:
            break
    rank, chosen, pt = best
    integrals = [H] + [Fs[k] for k in chosen]
    cert = Certificate(system or compat.hf.name, n, integrals, True, rank, target, chosen, pt or [], seed,
                       coeffs, tried, max_all, upper_ok)
    if rank < target:
        cert.notes.append(f"rank deficient: reached {rank} of {target} after {tried} points")
    return cert
