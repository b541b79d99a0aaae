"""Built-in rings, modules and ideals, including the monomial family
k[X_1..X_d, Z_1..Z_c]/(Z_1^a_1, ..., Z_c^a_c)."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .poly import PolyRing
from .resolve import ModulePresentation, cyclic_module, free_module, residue_field, syzygy
from .ring import CIRing, IdealData, make_ci_ring

DEFAULT_P = 101


def family_ring(d: int, c: int, a: Sequence[int], p: int = DEFAULT_P) -> CIRing:
    """k[X_1..X_d, Z_1..Z_c]/(Z_j^a_j) with all variables of degree 1.

    Variable names follow the fixtures: x (or x1..xd) and z (or z1..zc).
    """
    if d < 1 or c < 0 or len(a) != c or any(e < 2 for e in a):
        raise ValueError("need d >= 1 and exponents a_j >= 2, one per Z")
    xs = ["x"] if d == 1 else [f"x{i + 1}" for i in range(d)]
    zs = ["z"] if c == 1 else [f"z{j + 1}" for j in range(c)]
    P = PolyRing(xs + zs, p)
    f = [P.parse(f"{z}^{e}") for z, e in zip(zs, a)]
    return make_ci_ring(P, f)


def _xs(A: CIRing) -> list[dict]:
    return [A.P.var(i) for i, nm in enumerate(A.P.names) if nm.startswith("x")]


def _zs(A: CIRing) -> list[dict]:
    return [A.P.var(i) for i, nm in enumerate(A.P.names) if nm.startswith("z")]


IDEAL_KINDS = ("maximal", "parameter", "mparameter", "cx:<i>")


def family_ideal(A: CIRing, kind: str) -> IdealData:
    """Ideals of the family ring.

    maximal     the irrelevant ideal (powers have complexity c)
    parameter   (X_1..X_d), powers of finite projective dimension
    mparameter  m (X_1..X_d)
    cx:i        (X_1..X_d, Z_1..Z_i), powers of complexity i
    """
    P = A.P
    xs, zs = _xs(A), _zs(A)
    if kind == "maximal":
        return IdealData(A, xs + zs, "m")
    if kind == "parameter":
        return IdealData(A, xs, "X")
    if kind == "mparameter":
        m = IdealData(A, xs + zs, "m")
        return IdealData(A, m.times(IdealData(A, xs)).gens, "mX")
    if kind.startswith("cx:"):
        i = int(kind[3:])
        if not 0 <= i <= len(zs):
            raise ValueError(f"complexity {i} out of range")
        return IdealData(A, xs + zs[:i], f"(X,Z1..Z{i})")
    raise ValueError(f"unknown ideal kind {kind!r}; expected one of {IDEAL_KINDS}")


# -- the named fixtures -------------------------------------------------------------------


def A1() -> CIRing:
    return family_ring(1, 1, [2])


def A2() -> CIRing:
    return family_ring(1, 2, [2, 2])


def A3() -> CIRing:
    """The d = 2 ring k[x1, x2, z]/(z^2)."""
    return family_ring(2, 1, [2])


def M1(A: CIRing | None = None) -> ModulePresentation:
    A = A or A1()
    return cyclic_module(A, [A.P.parse("z")], "M1")


def M2(A: CIRing | None = None) -> ModulePresentation:
    A = A or A2()
    return cyclic_module(A, [A.P.parse("z1")], "M2")


def ideal(A: CIRing, gens: str, name: str = "") -> IdealData:
    return IdealData(A, [A.P.parse(g) for g in gens.split(",")], name or f"({gens})")


@dataclass
class Instance:
    """A (module, ideal) pair with a label."""

    name: str
    M: ModulePresentation
    I: IdealData
    cx: int  # complexity of M
    kind: str  # maximal / parameter / mparameter / mixed


def suite() -> list[Instance]:
    """The fixture suite: c in {1, 2}, complexities 0, 1, 2, ideals of each kind."""
    a1, a2 = A1(), A2()
    m1 = family_ideal(a1, "maximal")
    j1 = family_ideal(a1, "parameter")
    mj1 = family_ideal(a1, "mparameter")
    m2 = family_ideal(a2, "maximal")
    x2 = family_ideal(a2, "parameter")
    l2 = family_ideal(a2, "cx:1")
    k1 = syzygy(residue_field(a1), 1)
    k1.name = "Omega1(k)"
    k2 = syzygy(residue_field(a2), 1)
    k2.name = "Omega1(k)"
    n2 = cyclic_module(a2, [a2.P.parse("z2")], "A2/(z2)")
    mm1, mm2 = M1(a1), M2(a2)
    return [
        Instance("A1:M1:m", mm1, m1, 1, "maximal"),
        Instance("A1:M1:x", mm1, j1, 1, "parameter"),
        Instance("A1:M1:mx", mm1, mj1, 1, "mparameter"),
        Instance("A1:A:m", free_module(a1), m1, 0, "maximal"),
        Instance("A1:Omega1k:m", k1, m1, 1, "maximal"),
        Instance("A2:M2:m", mm2, m2, 1, "maximal"),
        Instance("A2:M2:x", mm2, x2, 1, "parameter"),
        Instance("A2:Omega1k:m", k2, m2, 2, "maximal"),
        Instance("A2:Omega1k:x", k2, x2, 2, "parameter"),
        Instance("A2:M2:(x,z1)", mm2, l2, 1, "mixed"),
        Instance("A2:A2/(z2):(x,z1)", n2, l2, 1, "mixed"),
    ]


def d2_fixtures() -> list[tuple[str, ModulePresentation, IdealData]]:
    """The two dimension-two pairs for the power-ideal bound."""
    A = A3()
    return [
        ("A3:A:m", free_module(A), family_ideal(A, "maximal")),
        ("A3:A:(x1^2,x2^2,z)", free_module(A), ideal(A, "x1^2,x2^2,z")),
    ]
