"""Exact rational arithmetic: sparse Laurent polynomials and linear algebra over Q.

Every scalar function used downstream (structure tensors, potentials, Killing
tensor components) is a :class:`LaurentPoly`, a sparse map from integer
exponent vectors to nonzero :class:`fractions.Fraction` coefficients.

Example:
    >>> x1, x2 = variables(2)
    >>> p = (x1 + x2) ** 2
    >>> str(p)
    'x1^2 + 2*x1*x2 + x2^2'
    >>> str(p.partial(0))
    '2*x1 + 2*x2'
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction
Exponent = tuple  # tuple[int, ...]


class ArityMismatch(ValueError):
    pass


class PoleAtPoint(ZeroDivisionError):
    """Raised when a Laurent polynomial is evaluated on a pole."""


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        raise TypeError("floating-point input is not exact; pass a Fraction or string")
    return Fraction(value)


def order_key(exps: Exponent) -> tuple:
    """Graded-lex key; larger keys come first in canonical order."""
    return (sum(exps), exps)


class LaurentPoly:
    """Sparse multivariate Laurent polynomial with exact rational coefficients.

    Instances are immutable. Stored coefficients are never zero, so two equal
    polynomials always have identical term maps.
    """

    __slots__ = ("arity", "terms", "_hash")

    def __init__(self, arity: int, terms: Mapping[Exponent, object] | None = None):
        if arity < 0:
            raise ValueError("arity must be non-negative")
        self.arity = arity
        clean = {}
        if terms:
            for e, c in terms.items():
                e = tuple(int(v) for v in e)
                if len(e) != arity:
                    raise ArityMismatch(f"exponent {e} does not have length {arity}")
                c = as_rational(c)
                if c:
                    clean[e] = clean.get(e, 0) + c
                    if not clean[e]:
                        del clean[e]
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, arity: int, terms: dict) -> "LaurentPoly":
        # trusted constructor: terms already canonical
        obj = cls.__new__(cls)
        obj.arity = arity
        obj.terms = terms
        obj._hash = None
        return obj

    # constructors
    @classmethod
    def zero(cls, arity: int) -> "LaurentPoly":
        return cls._raw(arity, {})

    @classmethod
    def constant(cls, arity: int, c=1) -> "LaurentPoly":
        c = as_rational(c)
        return cls._raw(arity, {(0,) * arity: c} if c else {})

    @classmethod
    def monomial(cls, arity: int, exps: Sequence[int], c=1) -> "LaurentPoly":
        return cls(arity, {tuple(exps): c})

    @classmethod
    def variable(cls, arity: int, i: int) -> "LaurentPoly":
        if not 0 <= i < arity:
            raise IndexError(f"variable index {i} out of range for arity {arity}")
        e = [0] * arity
        e[i] = 1
        return cls._raw(arity, {tuple(e): Fraction(1)})

    # basic protocol
    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other) -> bool:
        if isinstance(other, LaurentPoly):
            return self.arity == other.arity and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == LaurentPoly.constant(self.arity, other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.arity, frozenset(self.terms.items())))
        return self._hash

    def __len__(self) -> int:
        return len(self.terms)

    def sorted_terms(self) -> list:
        """Terms in canonical (descending graded-lex) order."""
        return sorted(self.terms.items(), key=lambda t: order_key(t[0]), reverse=True)

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            if other.arity != self.arity:
                raise ArityMismatch(f"arity {self.arity} vs {other.arity}")
            return other
        if isinstance(other, (int, Fraction)):
            return LaurentPoly.constant(self.arity, other)
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for e, c in small.items():
            v = out.get(e)
            if v is None:
                out[e] = c
            else:
                v += c
                if v:
                    out[e] = v
                else:
                    del out[e]
        return LaurentPoly._raw(self.arity, out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.arity, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "LaurentPoly":
        c = as_rational(c)
        if not c:
            return LaurentPoly.zero(self.arity)
        return LaurentPoly._raw(self.arity, {e: v * c for e, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                v = out.get(e, 0) + c1 * c2
                if v:
                    out[e] = v
                else:
                    out.pop(e, None)
        return LaurentPoly._raw(self.arity, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(1 / Fraction(other))
        if isinstance(other, LaurentPoly):
            return self * other ** -1
        return NotImplemented

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            if len(self.terms) != 1:
                raise ValueError("only monomials can be inverted in the Laurent ring")
            (e, c), = self.terms.items()
            return LaurentPoly._raw(self.arity, {tuple(k * v for v in e): c ** k})
        result = LaurentPoly.constant(self.arity, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # calculus
    def partial(self, i: int) -> "LaurentPoly":
        if not 0 <= i < self.arity:
            raise IndexError(f"coordinate {i} out of range for arity {self.arity}")
        out = {}
        for e, c in self.terms.items():
            k = e[i]
            if k:
                ne = list(e)
                ne[i] = k - 1
                out[tuple(ne)] = c * k
        return LaurentPoly._raw(self.arity, out)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.arity:
            raise ArityMismatch(f"point has {len(point)} coordinates, expected {self.arity}")
        pt = [as_rational(v) for v in point]
        total = Fraction(0)
        for e, c in self.terms.items():
            term = c
            for x, k in zip(pt, e):
                if k < 0:
                    if not x:
                        raise PoleAtPoint(f"pole of {self} at {point}")
                    term /= x ** (-k)
                elif k:
                    term *= x ** k
            total += term
        return total

    # structural queries
    def min_exponents(self) -> tuple:
        if not self.terms:
            return (0,) * self.arity
        return tuple(min(col) for col in zip(*self.terms))

    def max_exponents(self) -> tuple:
        if not self.terms:
            return (0,) * self.arity
        return tuple(max(col) for col in zip(*self.terms))

    def support_vars(self) -> set:
        return {i for e in self.terms for i, k in enumerate(e) if k}

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.arity, Fraction(0))

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def embed(self, arity: int, positions: Sequence[int]) -> "LaurentPoly":
        """Re-express in a larger coordinate system; variable i goes to positions[i]."""
        out = {}
        for e, c in self.terms.items():
            ne = [0] * arity
            for i, k in enumerate(e):
                ne[positions[i]] = k
            out[tuple(ne)] = c
        return LaurentPoly._raw(arity, out)

    # text
    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"LaurentPoly({self.arity}, {str(self)!r})"

    # serialization
    def to_json(self) -> list:
        return [
            {"c": f"{c.numerator}/{c.denominator}", "e": list(e)}
            for e, c in self.sorted_terms()
        ]

    @classmethod
    def from_json(cls, arity: int, data: Iterable[Mapping]) -> "LaurentPoly":
        return cls(arity, {tuple(t["e"]): Fraction(t["c"]) for t in data})


def variables(n: int) -> list:
    return [LaurentPoly.variable(n, i) for i in range(n)]


def add(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a + b


def mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def partial(a: LaurentPoly, i: int) -> LaurentPoly:
    return a.partial(i)


def evaluate(a: LaurentPoly, point: Sequence) -> Fraction:
    return a.evaluate(point)


# ---------------------------------------------------------------------------
# linear algebra


class RatMatrix:
    """Rational matrix with sparse row storage.

    Rows are dicts ``{col: Fraction}`` without zero entries; ``entries`` gives
    the dense view. Large coefficient-matching systems are mostly zeros, so the
    elimination routines below work on the sparse rows directly.
    """

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, rows: int, cols: int, data=None):
        self.rows = rows
        self.cols = cols
        self._data = [dict() for _ in range(rows)] if data is None else data

    @classmethod
    def from_dense(cls, entries: Sequence[Sequence]) -> "RatMatrix":
        entries = [list(r) for r in entries]
        cols = len(entries[0]) if entries else 0
        data = []
        for r in entries:
            if len(r) != cols:
                raise ValueError("ragged matrix")
            data.append({j: as_rational(v) for j, v in enumerate(r) if v})
        return cls(len(entries), cols, data)

    @classmethod
    def from_sparse_rows(cls, rows: Iterable[Mapping[int, object]], cols: int) -> "RatMatrix":
        data = []
        for r in rows:
            row = {}
            for j, v in r.items():
                if not 0 <= j < cols:
                    raise IndexError(f"column {j} out of range")
                v = as_rational(v)
                if v:
                    row[j] = v
            data.append(row)
        return cls(len(data), cols, data)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls(n, n, [{i: Fraction(1)} for i in range(n)])

    @property
    def entries(self) -> list:
        return [[row.get(j, Fraction(0)) for j in range(self.cols)] for row in self._data]

    def sparse_rows(self) -> list:
        return self._data

    def __getitem__(self, idx):
        i, j = idx
        return self._data[i].get(j, Fraction(0))

    def apply(self, v: Sequence) -> list:
        v = [as_rational(x) for x in v]
        return [sum((c * v[j] for j, c in row.items()), Fraction(0)) for row in self._data]


def _reduce_into(pivots: dict, row: dict) -> int | None:
    """Reduce `row` against normalized pivot rows; store it if a new pivot appears.

    Returns the new pivot column, or None if the row reduced to zero.
    """
    while row:
        c = min(row)
        piv = pivots.get(c)
        if piv is None:
            lead = row[c]
            if lead != 1:
                inv = 1 / lead
                row = {j: v * inv for j, v in row.items()}
            pivots[c] = row
            return c
        f = row[c]
        for j, v in piv.items():
            w = row.get(j)
            if w is None:
                row[j] = -f * v
            else:
                w -= f * v
                if w:
                    row[j] = w
                else:
                    del row[j]
    return None


def echelon(rows: Iterable[Mapping[int, object]]) -> dict:
    """Row-echelon form as ``{pivot_col: normalized row}``."""
    pivots: dict = {}
    seen = set()
    for r in rows:
        row = {j: as_rational(v) for j, v in r.items() if v}
        if not row:
            continue
        # duplicate rows (up to scale) are common in coefficient matching
        lead = row[min(row)]
        key = frozenset((j, v / lead) for j, v in row.items())
        if key in seen:
            continue
        seen.add(key)
        _reduce_into(pivots, row)
    return pivots


def reduced_echelon(rows: Iterable[Mapping[int, object]]) -> dict:
    """Reduced row-echelon form as ``{pivot_col: row}``."""
    pivots = echelon(rows)
    order = sorted(pivots)
    for c in reversed(order):
        prow = pivots[c]
        for c2 in order:
            if c2 >= c:
                break
            row = pivots[c2]
            f = row.get(c)
            if f is None:
                continue
            for j, v in prow.items():
                w = row.get(j, 0) - f * v
                if w:
                    row[j] = w
                else:
                    row.pop(j, None)
    return pivots


def sparse_nullspace(rows: Iterable[Mapping[int, object]], cols: int) -> list:
    """Kernel basis, one vector per free column, read off the reduced echelon form."""
    pivots = reduced_echelon(rows)
    free = [j for j in range(cols) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for c, row in pivots.items():
            x = row.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return basis


def nullspace(m: RatMatrix) -> list:
    return sparse_nullspace(m.sparse_rows(), m.cols)


def rank(m: RatMatrix) -> int:
    return len(echelon(m.sparse_rows()))


def sparse_rank(rows: Iterable[Mapping[int, object]]) -> int:
    return len(echelon(rows))


class IncrementalBasis:
    """Greedy independence test: feed vectors one at a time, keep those that raise the rank."""

    def __init__(self):
        self._pivots: dict = {}

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def add(self, vec: Mapping[int, object]) -> bool:
        row = {j: as_rational(v) for j, v in vec.items() if v}
        return _reduce_into(self._pivots, row) is not None

    def contains(self, vec: Mapping[int, object]) -> bool:
        row = {j: as_rational(v) for j, v in vec.items() if v}
        probe = dict(self._pivots)
        return _reduce_into(probe, row) is None
