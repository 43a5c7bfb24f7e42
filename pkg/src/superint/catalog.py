"""Named Hesse-Frobenius structures and their expected invariants.

Names:

* ``semisimple:<n>:<mask>`` -- Euclidean, ``C_jjj = -1/x_j`` where mask bit j is 1
* ``nilpotent2d`` -- split metric ``2 dx1 dx2``, Frobenius potential ``x1^3/6``
* ``nilpotent4d`` -- split metric pairing (1,3) and (2,4), potential ``(x1^3 + x2^3)/6``
* ``sw3d`` -- ``semisimple:3:111``
* ``oscillator1d`` -- 1D Euclidean, ``C = 0``
* ``sw4d`` -- ``glue(sw3d, oscillator1d)``, identical to ``semisimple:4:1110``
* ``glued8d`` -- ``glue(nilpotent4d, sw4d)``
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .exact_algebra import variables
from .flat_geometry import FlatMetric
from .hesse_frobenius import (
    HesseFrobenius,
    from_frobenius_potential,
    glue,
    semisimple_structure,
    zero_structure,
)


class UnknownName(KeyError):
    pass


SPLIT_2D = FlatMetric(((0, 1), (1, 0)))
SPLIT_4D = FlatMetric(((0, 0, 1, 0), (0, 0, 0, 1), (1, 0, 0, 0), (0, 1, 0, 0)))


def nilpotent2d() -> HesseFrobenius:
    x1, _ = variables(2)
    return from_frobenius_potential(x1 ** 3 / 6, SPLIT_2D, "nilpotent2d")


def nilpotent4d() -> HesseFrobenius:
    x1, x2, _, _ = variables(4)
    return from_frobenius_potential((x1 ** 3 + x2 ** 3) / 6, SPLIT_4D, "nilpotent4d")


def sw3d() -> HesseFrobenius:
    hf = semisimple_structure(3, "111")
    return HesseFrobenius(hf.metric, hf.C, "sw3d")


def oscillator1d() -> HesseFrobenius:
    return zero_structure(FlatMetric.euclidean(1), "oscillator1d")


def sw4d() -> HesseFrobenius:
    return glue(sw3d(), oscillator1d(), "sw4d")


def glued8d() -> HesseFrobenius:
    return glue(nilpotent4d(), sw4d(), "glued8d")


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    build: Callable[[], HesseFrobenius]
    # (potential family dim, compatible Killing dim, independence rank); None = not pinned
    expected: tuple
    description: str
    # glue decomposition: (factor name, product coordinates of the factor's coordinates)
    factors: tuple = field(default=())


ENTRIES = {
    e.name: e
    for e in [
        CatalogEntry("nilpotent2d", nilpotent2d, (4, 3, 3), "2D nilpotent structure on a split plane"),
        CatalogEntry(
            "nilpotent4d", nilpotent4d, (6, 10, 7), "4D nilpotent structure, product of two 2D ones",
            (("nilpotent2d", (0, 2)), ("nilpotent2d", (1, 3))),
        ),
        CatalogEntry("sw3d", sw3d, (5, 6, 5), "3D Smorodinski-Winternitz (all three directions semi-simple)"),
        CatalogEntry("oscillator1d", oscillator1d, (None, 1, 1), "1D harmonic oscillator (C = 0)"),
        CatalogEntry(
            "sw4d", sw4d, (6, 10, 7), "4D Smorodinski-Winternitz, semisimple:4:1110",
            (("sw3d", (0, 1, 2)), ("oscillator1d", (3,))),
        ),
        CatalogEntry(
            "glued8d", glued8d, (10, 36, 15), "8D product of nilpotent4d and sw4d",
            (("nilpotent4d", (0, 1, 2, 3)), ("sw4d", (4, 5, 6, 7))),
        ),
    ]
}

# base structures for pairwise gluing sweeps
BASE_NAMES = ("nilpotent2d", "nilpotent4d", "sw3d", "oscillator1d", "sw4d")


def names() -> list:
    return list(ENTRIES)


def catalog(name: str) -> HesseFrobenius:
    if name in ENTRIES:
        return ENTRIES[name].build()
    if name.startswith("semisimple:"):
        parts = name.split(":")
        if len(parts) != 3 or not parts[1].isdigit() or set(parts[2]) - {"0", "1"}:
            raise UnknownName(name)
        n = int(parts[1])
        if len(parts[2]) != n:
            raise UnknownName(f"{name}: mask length must equal {n}")
        return semisimple_structure(n, parts[2])
    raise UnknownName(name)


def expected(name: str) -> tuple | None:
    if name in ENTRIES:
        return ENTRIES[name].expected
    if name.startswith("semisimple:"):
        n = int(name.split(":")[1])
        return (n + 2, n * (n + 1) // 2, 2 * n - 1)
    return None


def factors(name: str) -> tuple:
    e = ENTRIES.get(name)
    if e is not None:
        return e.factors
    if name == "semisimple:4:1110":
        return ENTRIES["sw4d"].factors
    return ()
