"""Reference potentials and integral lists for the catalog systems, transcribed literally.

Each Killing tensor is written as a sum of symmetric products of 1-forms.
Entries are transcribed literally, including suspected misprints; the
``span_verdicts`` helper reports which ones the computed systems reproduce.
"""

from __future__ import annotations

from fractions import Fraction

from .exact_algebra import LaurentPoly, variables
from .killing import CompatibleSystem, KillingTensor, check_killing, tensor_in_span, tensor_rank


def _forms(n):
    x = variables(n)
    zero = LaurentPoly.zero(n)
    one = LaurentPoly.constant(n, 1)

    def d(i):
        v = [zero] * n
        v[i - 1] = one
        return v

    def form(*pairs):
        """form((coef, i), ...) = sum coef * dx_i."""
        v = [zero] * n
        for c, i in pairs:
            v[i - 1] = v[i - 1] + (c if isinstance(c, LaurentPoly) else LaurentPoly.constant(n, c))
        return v

    def rot(a, b):
        """x_a dx_b - x_b dx_a."""
        return form((x[a - 1], b), (-x[b - 1], a))

    def sp(alpha, beta, c=1):
        return KillingTensor.sym_product(alpha, beta).scale(Fraction(c))

    return x, d, form, rot, sp


def sw4d_potentials():
    x1, x2, x3, x4 = variables(4)
    return [
        x4 ** 2 / 2 + (x1 ** 2 + x2 ** 2 + x3 ** 2) / 8,
        x4,
        x1 ** -2 * Fraction(-1, 2),
        x2 ** -2 * Fraction(-1, 2),
        x3 ** -2 * Fraction(-1, 2),
        LaurentPoly.constant(4, 1),
    ]


def sw4d_integrals():
    x, d, form, rot, sp = _forms(4)
    return {
        "K1": sp(d(1), d(1)),
        "K2": sp(d(2), d(2)),
        "K3": sp(d(3), d(3)),
        "K4": sp(d(4), d(4)),
        "K5": sp(rot(2, 1), rot(2, 1)),
        "K6": sp(rot(3, 2), rot(3, 2)),
        "K7": sp(rot(3, 1), rot(3, 1)),
        "K8": sp(rot(4, 3), d(3)),
        "K9": sp(rot(4, 1), d(1)),
        "K10": sp(rot(4, 2), d(2)),
    }


def nilpotent4d_potentials():
    x1, x2, x3, x4 = variables(4)
    return [
        x1 ** 3 / 2 + x1 * x3 + x2 * (x2 ** 2 + 2 * x4) / 2,
        3 * x1 ** 2 / 2 + x3,
        3 * x2 ** 2 / 2 + x4,
        x1,
        x2,
        LaurentPoly.constant(4, 1),
    ]


def nilpotent4d_integrals():
    x, d, form, rot, sp = _forms(4)
    x1, x2, x3, x4 = x
    half = Fraction(1, 2)
    one = LaurentPoly.constant(4, 1)
    return {
        "K1": _k(one, 1, 1),
        "K2": _k(one, 2, 2),
        "K3": _k(one, 1, 3),
        "K4": _k(one, 2, 4),
        "K5": _k(x3, 1, 1) + _k(-x1, 1, 3) + _k(one.scale(half), 3, 3),
        "K6": _k(x4, 2, 2) + _k(-x2, 2, 4) + _k(one.scale(half), 4, 4),
        "K7": _k(one, 1, 2),
        "K8": _k(x2, 1, 1) + _k(-x1, 1, 2) + _k(one, 2, 3),
        "K9": _k(x1, 2, 2) + _k(-x2, 1, 2) + _k(one, 2, 4),
        "K10": _k(x4 - x2 ** 2 * half, 1, 1) + _k(x3 - x1 ** 2 * half, 2, 2)
        + sp(form((x1, 1), (-1, 3)), form((x2, 2), (-1, 4))),
    }


def _k(p, i, j):
    """Single-term tensor ``p dx_i dx_j`` (symmetric product)."""
    n = p.arity
    if i == j:
        return KillingTensor(n, {(i - 1, i - 1): p})
    return KillingTensor(n, {(i - 1, j - 1): p.scale(Fraction(1, 2))})


def glued8d_potential(c):
    """The ten-parameter potential with coefficients c[0..9]."""
    basis = glued8d_potentials()
    acc = LaurentPoly.zero(8)
    for ci, V in zip(c, basis):
        acc = acc + V.scale(ci)
    return acc


def glued8d_potentials():
    x1, x2, x3, x4, x5, x6, x7, x8 = variables(8)
    return [
        x1 ** 3 / 2 + x2 ** 3 / 2 + x1 * x3 + x2 * x4 + (x5 ** 2 + x6 ** 2 + x7 ** 2) / 8 + x8 ** 2 / 2,
        3 * x1 ** 2 / 2 + x3,
        3 * x2 ** 2 / 2 + x4,
        x1,
        x2,
        x8,
        x5 ** -2 * Fraction(-1, 2),
        x6 ** -2 * Fraction(-1, 2),
        x7 ** -2 * Fraction(-1, 2),
        LaurentPoly.constant(8, 1),
    ]


def glued8d_integrals():
    x, d, form, rot, sp = _forms(8)
    x1, x2, x3, x4, x5, x6, x7, x8 = x
    half = Fraction(1, 2)
    out = {}
    for i in (1, 2, 5, 6, 7, 8):
        out[f"dx{i}^2"] = sp(d(i), d(i))
    for i, j in ((1, 2), (1, 3), (2, 4), (1, 8), (2, 8)):
        out[f"dx{i}dx{j}"] = sp(d(i), d(j))
    # (x_a dx_b - x_b dx_a) dx_b
    for a, b in ((8, 5), (8, 6), (8, 7), (1, 7), (2, 7), (2, 5), (1, 6), (2, 6), (1, 5)):
        out[f"(x{a}dx{b}-x{b}dx{a})dx{b}"] = sp(rot(a, b), d(b))
    out["(x1dx2-x2dx1)dx2+dx1dx4"] = sp(rot(1, 2), d(2)) + sp(d(1), d(4))
    out["(x8dx2-x2dx8)dx2+dx4dx8"] = sp(rot(8, 2), d(2)) + sp(d(4), d(8))
    out["(x2dx1-x1dx2)dx1+dx2dx3"] = sp(rot(2, 1), d(1)) + sp(d(2), d(3))
    out["(x8dx1-x1dx8)dx1+dx3dx8"] = sp(rot(8, 1), d(1)) + sp(d(3), d(8))
    out["(x3dx1-x1dx3)dx1+dx3^2/2"] = sp(rot(3, 1), d(1)) + sp(d(3), d(3), half)
    out["(x4dx2-x2dx4)dx2+dx4^2/2"] = sp(rot(4, 2), d(2)) + sp(d(4), d(4), half)
    out["(x7dx6-x6dx7)^2"] = sp(rot(7, 6), rot(7, 6))
    out["(x6dx5-x5dx6)^2"] = sp(rot(6, 5), rot(6, 5))
    out["(x7dx5-x5dx7)^2"] = sp(rot(7, 5), rot(7, 5))
    out["(x6dx1-x1dx6)dx1/2+(x6dx3-x3dx6)dx6"] = sp(rot(6, 1), d(1), half) + sp(rot(6, 3), d(6))
    out["(x7dx1-x1dx7)dx1/2+(x7dx3-x3dx7)dx7"] = sp(rot(7, 1), d(1), half) + sp(rot(7, 3), d(7))
    # transcribed with "x1 dx1" inside the first factor and dx5 as the second factor
    out["(x5dx1-x1dx1)dx5/2+(x5dx3-x3dx5)dx5"] = (
        sp(form((x5, 1), (-x1, 1)), d(5), half) + sp(rot(5, 3), d(5))
    )
    out["(x6dx2-x2dx6)dx2/2+(x6dx4-x4dx6)dx6"] = sp(rot(6, 2), d(2), half) + sp(rot(6, 4), d(6))
    out["(x7dx2-x2dx7)dx2/2+(x7dx4-x4dx7)dx7"] = sp(rot(7, 2), d(2), half) + sp(rot(7, 4), d(7))
    out["(x5dx2-x2dx5)dx2/2+(x5dx4-x4dx5)dx5"] = sp(rot(5, 2), d(2), half) + sp(rot(5, 4), d(5))
    out["K10(nilpotent block)"] = (
        _k(x4 - x2 ** 2 * half, 1, 1) + _k(x3 - x1 ** 2 * half, 2, 2)
        + sp(form((x1, 1), (-1, 3)), form((x2, 2), (-1, 4)))
    )
    return out


def suggested_readings(system: str) -> dict:
    """Alternative readings of listed tensors that fail the span test as transcribed."""
    if system == "nilpotent4d":
        x1, x2, x3, x4 = variables(4)
        one = LaurentPoly.constant(4, 1)
        return {"K9": _k(x1, 2, 2) + _k(-x2, 1, 2) + _k(one, 1, 4)}
    if system == "glued8d":
        x, d, form, rot, sp = _forms(8)
        half = Fraction(1, 2)
        out = {}
        for a, b, c in ((6, 1, 3), (7, 1, 3), (5, 1, 3), (6, 2, 4), (7, 2, 4), (5, 2, 4)):
            label = (f"(x{a}dx{b}-x{b}dx{a})dx{b}/2+(x{a}dx{c}-x{c}dx{a})dx{a}" if a != 5 or b != 1
                     else "(x5dx1-x1dx1)dx5/2+(x5dx3-x3dx5)dx5")
            # squared rotation instead of a product with dx_b
            out[label] = sp(rot(a, b), rot(a, b), half) + sp(rot(a, c), d(a))
        return out
    return {}


def span_verdicts(compat: CompatibleSystem, tensors: dict) -> dict:
    """``{label: {"killing": bool, "in_span": bool}}`` for each listed tensor."""
    out = {}
    for label, K in tensors.items():
        out[label] = {"killing": check_killing(K), "in_span": tensor_in_span(compat.basis, K)}
    return out


def list_rank(tensors: dict) -> int:
    return tensor_rank(list(tensors.values()))
