"""Graded complete intersection rings A = P/(f_1..f_c), ideals and finite quotients."""
from __future__ import annotations

from collections import deque
from functools import cached_property
from typing import Sequence

import numpy as np

from . import modp
from .errors import DegreeError, NotFiniteLengthError, RegularSequenceError, StructuralError
from .poly import (
    DEGREVLEX,
    FreeSubmodule,
    GroebnerBasis,
    PolyRing,
    TermOrder,
    _divides,
    hilbert_series,
    pdeg,
    pmul,
    poly_nf,
    vec_from_polys,
    vmul_poly,
)


class CIRing:
    """A = P/(f) for a homogeneous regular sequence f of degree >= 2.

    ``c == 0`` gives the polynomial ring itself, which the package uses
    internally (for example to resolve over k[y]).
    """

    def __init__(self, P: PolyRing, f: Sequence[dict], d: int, order: TermOrder = DEGREVLEX):
        self.P = P
        self.f = [dict(g) for g in f]
        self.c = len(self.f)
        self.d = d
        self.p = P.p
        self.order = order
        self.fdeg = [pdeg(g, P) for g in self.f]

    def __repr__(self):
        fs = ", ".join(self.P.fmt(g) for g in self.f)
        return f"CIRing({self.P.names}, f=[{fs}], d={self.d}, c={self.c}, p={self.p})"

    def with_order(self, order: TermOrder) -> "CIRing":
        return CIRing(self.P, self.f, self.d, order)

    @cached_property
    def fideal(self) -> FreeSubmodule:
        return FreeSubmodule.ideal(self.P, self.f)

    @cached_property
    def fgb(self) -> GroebnerBasis:
        return self.fideal.gb(self.order)

    def reduce(self, g: dict) -> dict:
        """Canonical representative of g in A (normal form modulo f)."""
        if not self.f or not g:
            return dict(g)
        return poly_nf(g, self.fgb)

    def fcols(self, rank: int) -> list[dict]:
        """The vectors f_l e_k spanning f P^rank."""
        return [{(k, e): c for e, c in g.items()} for k in range(rank) for g in self.f]

    def basis(self, degree: int) -> list[tuple]:
        """Standard monomials of A in the given degree."""
        cache = self.__dict__.setdefault("_basis", {})
        out = cache.get(degree)
        if out is None:
            lead = self.fgb.leading_exps(0) if self.f else []
            out = [e for e in self.P.monomials(degree) if not any(_divides(l, e) for l in lead)]
            cache[degree] = out
        return out

    def basis_index(self, degree: int) -> dict:
        cache = self.__dict__.setdefault("_bindex", {})
        out = cache.get(degree)
        if out is None:
            out = {e: k for k, e in enumerate(self.basis(degree))}
            cache[degree] = out
        return out

    def var_mult(self, i: int, degree: int) -> np.ndarray:
        """Matrix of x_i : A_degree -> A_{degree + w_i} in standard-monomial coordinates."""
        cache = self.__dict__.setdefault("_vmult", {})
        key = (i, degree)
        m = cache.get(key)
        if m is None:
            src = self.basis(degree)
            tgt = self.basis_index(degree + self.P.weights[i])
            m = np.zeros((len(tgt), len(src)), dtype=np.int64)
            for k, e in enumerate(src):
                e2 = e[:i] + (e[i] + 1,) + e[i + 1 :]
                for e3, c in self.reduce({e2: 1}).items():
                    m[tgt[e3], k] = c
            cache[key] = m
        return m

    def hilbert(self):
        return hilbert_series(self.fgb) if self.f else hilbert_series(FreeSubmodule.ideal(self.P, []))

    def fingerprint(self) -> dict:
        return {
            "p": self.p,
            "vars": list(self.P.names),
            "f": [self.P.fmt(g) for g in self.f],
            "d": self.d,
            "c": self.c,
        }


def make_ci_ring(P: PolyRing, f: Sequence[dict], allow_artinian: bool = False, order: TermOrder = DEGREVLEX) -> CIRing:
    """Build A = P/(f), checking that f is a homogeneous regular sequence in degree >= 2."""
    f = [dict(g) for g in f]
    for g in f:
        dg = pdeg(g, P)
        if dg is None:
            raise RegularSequenceError("zero element in the sequence")
        if dg < 2:
            raise DegreeError(f"{P.fmt(g)} has degree {dg}; elements must lie in the square of the maximal ideal")
    if f:
        hs = hilbert_series(FreeSubmodule.ideal(P, f), order)
        d = hs.dimension()
    else:
        d = P.n
    if d != P.n - len(f):
        raise RegularSequenceError(f"dim P/(f) = {d} but dim P - c = {P.n - len(f)}: not a regular sequence")
    if d < 1 and not allow_artinian:
        raise DegreeError("the ring must have dimension at least 1")
    return CIRing(P, f, d, order)


def polynomial_ring(P: PolyRing) -> CIRing:
    return CIRing(P, [], P.n)


# -- finite dimensional quotients -------------------------------------------------


class QuotientSpace:
    """The finite dimensional space P^rank / U, with coordinates.

    Basis: standard monomials of the Groebner basis of U, grouped by position.
    """

    def __init__(self, U: FreeSubmodule, order: TermOrder = DEGREVLEX):
        self.U = U
        self.ring = U.ring
        self.rank = U.rank
        self.shifts = U.shifts
        self.p = U.ring.p
        self.gb = U.gb(order)
        P = self.ring
        terms: list[tuple] = []
        for pos in range(self.rank):
            lead = self.gb.leading_exps(pos)
            for i in range(P.n):
                if not any(all(a == 0 for j, a in enumerate(l) if j != i) for l in lead):
                    raise NotFiniteLengthError("quotient is not finite dimensional")
            seen = set()
            start = P.zero_exp
            if any(_divides(l, start) for l in lead):
                continue
            queue = deque([start])
            seen.add(start)
            while queue:
                e = queue.popleft()
                terms.append((pos, e))
                for i in range(P.n):
                    e2 = e[:i] + (e[i] + 1,) + e[i + 1 :]
                    if e2 not in seen and not any(_divides(l, e2) for l in lead):
                        seen.add(e2)
                        queue.append(e2)
        terms.sort(key=lambda t: (self.shifts[t[0]] + P.deg(t[1]), t[0], t[1]))
        self.terms = terms
        self.index = {t: k for k, t in enumerate(terms)}
        self.dim = len(terms)
        self.degrees = np.array([self.shifts[t[0]] + P.deg(t[1]) for t in terms], dtype=np.int64)
        self._var_mats: dict = {}
        self._mono_mats: dict = {}

    def coords(self, v: dict) -> np.ndarray:
        out = np.zeros(self.dim, dtype=np.int64)
        for t, c in self.gb.normal_form(v).items():
            out[self.index[t]] = c
        return out

    def vector(self, coords) -> dict:
        return {self.terms[k]: int(c) % self.p for k, c in enumerate(coords) if int(c) % self.p}

    def var_matrix(self, i: int) -> np.ndarray:
        m = self._var_mats.get(i)
        if m is None:
            P = self.ring
            m = np.zeros((self.dim, self.dim), dtype=np.int64)
            for k, (pos, e) in enumerate(self.terms):
                e2 = e[:i] + (e[i] + 1,) + e[i + 1 :]
                m[:, k] = self.coords({(pos, e2): 1})
            self._var_mats[i] = m
        return m

    def mono_matrix(self, e: tuple) -> np.ndarray:
        m = self._mono_mats.get(e)
        if m is None:
            if not any(e):
                m = np.eye(self.dim, dtype=np.int64)
            else:
                i = next(j for j, a in enumerate(e) if a)
                rest = e[:i] + (e[i] - 1,) + e[i + 1 :]
                m = modp.matmul(self.var_matrix(i), self.mono_matrix(rest), self.p)
            self._mono_mats[e] = m
        return m

    def poly_matrix(self, g: dict) -> np.ndarray:
        """Matrix of multiplication by the polynomial g."""
        m = np.zeros((self.dim, self.dim), dtype=np.int64)
        for e, c in g.items():
            m = (m + c * self.mono_matrix(e)) % self.p
        return m

    def subspace(self, vecs) -> np.ndarray:
        """Columns spanning the image of the given vectors."""
        if not vecs:
            return np.zeros((self.dim, 0), dtype=np.int64)
        return modp.col_basis(np.column_stack([self.coords(v) for v in vecs]), self.p)


def quotient_module(U: FreeSubmodule) -> QuotientSpace:
    return QuotientSpace(U)


class GradedCoords:
    """Coordinates on the graded pieces of the free module A^r with given shifts."""

    def __init__(self, A: CIRing, shifts: Sequence[int]):
        self.A = A
        self.shifts = tuple(shifts)
        self._layout: dict = {}
        self._mult: dict = {}

    def layout(self, e: int) -> tuple[list, dict]:
        out = self._layout.get(e)
        if out is None:
            terms = [(pos, m) for pos, s in enumerate(self.shifts) for m in self.A.basis(e - s)]
            out = (terms, {t: k for k, t in enumerate(terms)})
            self._layout[e] = out
        return out

    def dim(self, e: int) -> int:
        return len(self.layout(e)[0])

    def coords(self, v: dict, e: int) -> np.ndarray:
        terms, index = self.layout(e)
        out = np.zeros(len(terms), dtype=np.int64)
        A = self.A
        polys: dict = {}
        for (i, ex), c in v.items():
            polys.setdefault(i, {})[ex] = c
        for i, g in polys.items():
            for ex, c in A.reduce(g).items():
                out[index[(i, ex)]] = (out[index[(i, ex)]] + c) % A.p
        return out

    def vector(self, coords, e: int) -> dict:
        terms, _ = self.layout(e)
        p = self.A.p
        return {terms[k]: int(c) % p for k, c in enumerate(coords) if int(c) % p}

    def mult(self, i: int, e: int) -> np.ndarray:
        """Matrix of x_i : (A^r)_e -> (A^r)_{e + w_i}."""
        key = (i, e)
        m = self._mult.get(key)
        if m is None:
            w = self.A.P.weights[i]
            src, _ = self.layout(e)
            tgt, _ = self.layout(e + w)
            m = np.zeros((len(tgt), len(src)), dtype=np.int64)
            r0 = c0 = 0
            for s in self.shifts:
                a = len(self.A.basis(e - s))
                b = len(self.A.basis(e + w - s))
                if a and b:
                    m[r0 : r0 + b, c0 : c0 + a] = self.A.var_mult(i, e - s)
                r0 += b
                c0 += a
            self._mult[key] = m
        return m

    def poly_mult(self, g: dict, e: int) -> np.ndarray:
        """Matrix of multiplication by a homogeneous polynomial g."""
        P = self.A.P
        dg = P.deg(next(iter(g)))
        tgt = self.dim(e + dg)
        out = np.zeros((tgt, self.dim(e)), dtype=np.int64)
        for ex, c in g.items():
            m = np.eye(self.dim(e), dtype=np.int64)
            cur = e
            for i, a in enumerate(ex):
                for _ in range(a):
                    m = (self.mult(i, cur) @ m) % self.A.p
                    cur += P.weights[i]
            out = (out + c * m) % self.A.p
        return out


# -- ideals ---------------------------------------------------------------------


class IdealData:
    """A homogeneous ideal of A given by generators, with cached powers."""

    def __init__(self, A: CIRing, gens: Sequence[dict], name: str = ""):
        self.A = A
        self.gens = [A.reduce(g) for g in gens]
        self.gens = [g for g in self.gens if g]
        self.degs = [pdeg(g, A.P) for g in self.gens]
        self.name = name
        self._powers: dict[int, list[dict]] = {0: [A.P.const(1)]}
        self._lifts: dict[int, FreeSubmodule] = {}

    def __repr__(self):
        gs = ", ".join(self.A.P.fmt(g) for g in self.gens)
        return f"IdealData(({gs}))"

    def power_gens(self, n: int) -> list[dict]:
        """Generators of I^n in A (reduced, without redundant duplicates)."""
        if n in self._powers:
            return self._powers[n]
        prev = self.power_gens(n - 1)
        p = self.A.p
        seen = {}
        for a in prev:
            for b in self.gens:
                g = self.A.reduce(pmul(a, b, p))
                if g:
                    key = tuple(sorted(g.items()))
                    seen.setdefault(key, g)
        gens = list(seen.values())
        # keep a reduced Groebner basis of the lift, minus the f part, as generators
        lift = FreeSubmodule.ideal(self.A.P, gens + self.A.f)
        gb = lift.gb(self.A.order)
        out = [self.A.reduce({e: c for (_i, e), c in v.items()}) for v in gb.elems]
        out = [g for g in out if g]
        self._powers[n] = out
        self._lifts[n] = FreeSubmodule.ideal(self.A.P, out + self.A.f)
        self._lifts[n]._gb[self.A.order.tag()] = gb
        return out

    def lift(self, n: int = 1) -> FreeSubmodule:
        """I^n + (f) as an ideal of P."""
        if n == 0:
            return FreeSubmodule.ideal(self.A.P, [self.A.P.const(1)])
        self.power_gens(n)
        return self._lifts[n]

    def power(self, n: int) -> "IdealData":
        out = IdealData(self.A, self.power_gens(n), name=f"({self.name})^{n}" if self.name else "")
        return out

    def times(self, other: "IdealData") -> "IdealData":
        p = self.A.p
        return IdealData(self.A, [pmul(a, b, p) for a in self.gens for b in other.gens])

    def module_power(self, n: int, rank: int) -> list[dict]:
        """Generators of I^n P^rank as vectors."""
        return [{(k, e): c for e, c in g.items()} for k in range(rank) for g in self.power_gens(n)]


def is_m_primary(I: IdealData) -> bool:
    hs = hilbert_series(I.lift(1), I.A.order)
    return hs.dimension() == 0


def length(U: FreeSubmodule) -> int:
    """Length of P^rank / U (the submodule must already contain f)."""
    num, dim = hilbert_series(U).reduced()
    if dim > 0:
        raise NotFiniteLengthError("module does not have finite length")
    return sum(num)


def quotient_length(A: CIRing, I: IdealData, n: int) -> int:
    """l(A / I^n)."""
    return length(I.lift(n))


# -- quotient by a linear form -----------------------------------------------------


class LinearQuotient:
    """B = A/(x) for a linear form x, realised by eliminating one variable."""

    def __init__(self, A: CIRing, x: dict, allow_artinian: bool = True):
        P = A.P
        self.A = A
        if not x or pdeg(x, P) != 1:
            raise DegreeError("x must be a nonzero linear form")
        # eliminate the last variable appearing in x
        lin = {e.index(1): c for e, c in x.items()}
        v = max(lin)
        self.v = v
        inv = pow(lin[v], -1, P.p)
        # x_v = -inv * sum_{j != v} c_j x_j
        self.sub = {j: (-c * inv) % P.p for j, c in lin.items() if j != v}
        names = [nm for j, nm in enumerate(P.names) if j != v]
        weights = [w for j, w in enumerate(P.weights) if j != v]
        self.Q = PolyRing(names, P.p, weights)
        fs = [self.map_poly(g) for g in A.f]
        self.B = make_ci_ring(self.Q, fs, allow_artinian=allow_artinian, order=A.order)

    def map_exp_poly(self, e: tuple) -> dict:
        p = self.Q.p
        base = tuple(a for j, a in enumerate(e) if j != self.v)
        out = {base: 1}
        k = e[self.v]
        if k:
            lin = {}
            for j, c in self.sub.items():
                jj = j if j < self.v else j - 1
                ee = [0] * self.Q.n
                ee[jj] = 1
                lin[tuple(ee)] = c
            for _ in range(k):
                out = pmul(out, lin, p)
        return out

    def map_poly(self, g: dict) -> dict:
        p = self.Q.p
        out: dict = {}
        for e, c in g.items():
            for e2, c2 in self.map_exp_poly(e).items():
                out[e2] = (out.get(e2, 0) + c * c2) % p
        return {e: c for e, c in out.items() if c}

    def map_vec(self, v: dict) -> dict:
        p = self.Q.p
        out: dict = {}
        for (i, e), c in v.items():
            for e2, c2 in self.map_exp_poly(e).items():
                t = (i, e2)
                out[t] = (out.get(t, 0) + c * c2) % p
        return {t: c for t, c in out.items() if c}


def quotient_by_linear_form(A: CIRing, x: dict, allow_artinian: bool = True) -> LinearQuotient:
    return LinearQuotient(A, x, allow_artinian)
