"""Polynomials over F_p and Groebner bases of submodules of free modules.

A polynomial is a dict mapping exponent tuples to residues.  A module
element ("vector") is a dict mapping (position, exponent) pairs to residues;
ideals are handled as rank-1 modules.  All dicts are treated as immutable once
handed out.
"""
from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import NonHomogeneousError, StructuralError

Exp = tuple
Term = tuple  # (pos, exp)
Vec = dict


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    q = 3
    while q * q <= p:
        if p % q == 0:
            return False
        q += 2
    return True


class PolyRing:
    """Graded polynomial ring F_p[x_1..x_n] with positive integer weights."""

    def __init__(self, names: Sequence[str], p: int = 101, weights: Sequence[int] | None = None):
        if not is_prime(p) or p == 2 or p >= 2**31:
            raise ValueError(f"p must be an odd prime below 2**31, got {p}")
        self.names = tuple(names)
        self.n = len(self.names)
        self.p = p
        self.weights = tuple(weights) if weights is not None else (1,) * self.n
        if len(self.weights) != self.n or any(w <= 0 for w in self.weights):
            raise ValueError("weights must be positive, one per variable")
        self.zero_exp = (0,) * self.n

    def __repr__(self):
        return f"PolyRing({list(self.names)}, p={self.p}, weights={list(self.weights)})"

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.names == other.names
            and self.p == other.p
            and self.weights == other.weights
        )

    def __hash__(self):
        return hash((self.names, self.p, self.weights))

    def deg(self, e: Exp) -> int:
        return sum(w * a for w, a in zip(self.weights, e))

    def var(self, i: int | str) -> dict:
        if isinstance(i, str):
            i = self.names.index(i)
        e = [0] * self.n
        e[i] = 1
        return {tuple(e): 1}

    def const(self, c: int) -> dict:
        c %= self.p
        return {self.zero_exp: c} if c else {}

    def monomials(self, d: int) -> list[Exp]:
        """All exponents of weighted degree d, in a fixed order."""
        out: list[Exp] = []

        def rec(i, left, acc):
            if i == self.n:
                if left == 0:
                    out.append(tuple(acc))
                return
            w = self.weights[i]
            for a in range(left // w, -1, -1):
                acc.append(a)
                rec(i + 1, left - a * w, acc)
                acc.pop()

        if d >= 0:
            rec(0, d, [])
        return out

    # -- parsing / printing --------------------------------------------------

    def parse(self, text: str) -> dict:
        from .polyparse import parse_poly

        return parse_poly(text, self)

    def fmt(self, f: dict) -> str:
        if not f:
            return "0"
        keys = sorted(f, key=lambda e: (-self.deg(e), tuple(-a for a in e)))
        parts = []
        for e in keys:
            c = f[e]
            if c > self.p // 2:
                sign, c = "-", self.p - c
            else:
                sign = "+"
            mono = "*".join(
                nm if a == 1 else f"{nm}^{a}" for nm, a in zip(self.names, e) if a
            )
            if not mono:
                body = str(c)
            elif c == 1:
                body = mono
            else:
                body = f"{c}*{mono}"
            parts.append((sign, body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += f" {sign} {body}"
        return s


# -- polynomial arithmetic (exponent dicts) ----------------------------------


def padd(f: dict, g: dict, p: int) -> dict:
    h = dict(f)
    for e, c in g.items():
        v = (h.get(e, 0) + c) % p
        if v:
            h[e] = v
        else:
            h.pop(e, None)
    return h


def psub(f: dict, g: dict, p: int) -> dict:
    h = dict(f)
    for e, c in g.items():
        v = (h.get(e, 0) - c) % p
        if v:
            h[e] = v
        else:
            h.pop(e, None)
    return h


def pscale(f: dict, c: int, p: int) -> dict:
    c %= p
    if not c:
        return {}
    return {e: v * c % p for e, v in f.items()}


def pmul(f: dict, g: dict, p: int) -> dict:
    if not f or not g:
        return {}
    h: dict = {}
    for e1, c1 in f.items():
        for e2, c2 in g.items():
            e = tuple(a + b for a, b in zip(e1, e2))
            h[e] = (h.get(e, 0) + c1 * c2) % p
    return {e: c for e, c in h.items() if c}


def ppow(f: dict, k: int, p: int, n: int) -> dict:
    out = {(0,) * n: 1}
    for _ in range(k):
        out = pmul(out, f, p)
    return out


def pdeg(f: dict, ring: PolyRing) -> int | None:
    """Weighted degree of a homogeneous polynomial (None for zero)."""
    if not f:
        return None
    ds = {ring.deg(e) for e in f}
    if len(ds) != 1:
        raise NonHomogeneousError(f"polynomial {ring.fmt(f)} is not homogeneous")
    return ds.pop()


def ptotal_deg(f: dict, ring: PolyRing) -> int:
    return max((ring.deg(e) for e in f), default=0)


# -- vector arithmetic --------------------------------------------------------


def vec_from_polys(polys: Sequence[dict]) -> Vec:
    v = {}
    for i, f in enumerate(polys):
        for e, c in f.items():
            v[(i, e)] = c
    return v


def vec_to_polys(v: Vec, rank: int) -> list[dict]:
    out: list[dict] = [dict() for _ in range(rank)]
    for (i, e), c in v.items():
        out[i][e] = c
    return out


def vadd(a: Vec, b: Vec, p: int) -> Vec:
    h = dict(a)
    for t, c in b.items():
        v = (h.get(t, 0) + c) % p
        if v:
            h[t] = v
        else:
            h.pop(t, None)
    return h


def vscale(a: Vec, c: int, p: int) -> Vec:
    c %= p
    if not c:
        return {}
    return {t: v * c % p for t, v in a.items()}


def vmul_poly(a: Vec, f: dict, p: int) -> Vec:
    if not a or not f:
        return {}
    h: dict = {}
    for (i, e1), c1 in a.items():
        for e2, c2 in f.items():
            t = (i, tuple(x + y for x, y in zip(e1, e2)))
            h[t] = (h.get(t, 0) + c1 * c2) % p
    return {t: c for t, c in h.items() if c}


def vshift_pos(a: Vec, off: int) -> Vec:
    return {(i + off, e): c for (i, e), c in a.items()}


def vdeg(a: Vec, ring: PolyRing, shifts: Sequence[int]) -> int | None:
    if not a:
        return None
    ds = {shifts[i] + ring.deg(e) for (i, e) in a}
    if len(ds) != 1:
        raise NonHomogeneousError("vector is not homogeneous")
    return ds.pop()


def vsugar(a: Vec, ring: PolyRing, shifts: Sequence[int]) -> int:
    return max((shifts[i] + ring.deg(e) for (i, e) in a), default=0)


# -- term orders --------------------------------------------------------------


class TermOrder:
    """A module term order, realised as a sort key (smaller key = larger term).

    kind: "degrevlex", "lex" or "elim" (block elimination of ``elim`` variables
    followed by degrevlex).  module: "pot" (position over term, lowest position
    largest) or "top" (term over position, using the degree shifts).
    """

    def __init__(self, kind: str = "degrevlex", module: str = "pot", elim: Sequence[int] = ()):
        if kind not in ("degrevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {kind!r}")
        if module not in ("pot", "top"):
            raise ValueError(f"unknown module order {module!r}")
        self.kind = kind
        self.module = module
        self.elim = tuple(elim)

    def __repr__(self):
        extra = f", elim={list(self.elim)}" if self.elim else ""
        return f"TermOrder({self.kind!r}, {self.module!r}{extra})"

    def tag(self) -> str:
        return f"{self.kind}/{self.module}" + (f"/{','.join(map(str, self.elim))}" if self.elim else "")

    def mono_key(self, e: Exp, ring: PolyRing):
        if self.kind == "lex":
            return tuple(-a for a in e)
        base = (-ring.deg(e), e[::-1])
        if self.kind == "elim":
            return (-sum(ring.weights[i] * e[i] for i in self.elim),) + base
        return base

    def keyfunc(self, ring: PolyRing, shifts: Sequence[int]):
        """Return a memoised key function on terms (pos, exp)."""
        memo: dict = {}
        mk = self.mono_key
        if self.module == "pot":

            if self.kind == "elim":
                # the elimination degree dominates across positions too, so
                # that elimination works for submodules of free modules

                def key(t):
                    k = memo.get(t)
                    if k is None:
                        m = mk(t[1], ring)
                        k = (m[0], t[0], m[1:])
                        memo[t] = k
                    return k

            else:

                def key(t):
                    k = memo.get(t)
                    if k is None:
                        k = (t[0], mk(t[1], ring))
                        memo[t] = k
                    return k

        else:

            def key(t):
                k = memo.get(t)
                if k is None:
                    k = (-(shifts[t[0]] + ring.deg(t[1])), mk(t[1], ring), t[0])
                    memo[t] = k
                return k

        return key


DEGREVLEX = TermOrder()


# -- Groebner bases -------------------------------------------------------------


def _divides(a: Exp, b: Exp) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _lcm(a: Exp, b: Exp) -> Exp:
    return tuple(x if x > y else y for x, y in zip(a, b))


def _sub(a: Exp, b: Exp) -> Exp:
    return tuple(x - y for x, y in zip(a, b))


class _Reducer:
    """Reduction of vectors modulo a growing list of monic basis elements."""

    def __init__(self, ring: PolyRing, key):
        self.ring = ring
        self.p = ring.p
        self.key = key
        self.elems: list[Vec] = []
        self.lts: list[Term] = []
        self.alive: list[bool] = []
        self.by_pos: dict[int, list[int]] = {}

    def add(self, v: Vec, lt: Term) -> int:
        idx = len(self.elems)
        self.elems.append(v)
        self.lts.append(lt)
        self.alive.append(True)
        self.by_pos.setdefault(lt[0], []).append(idx)
        return idx

    def find(self, t: Term) -> int:
        pos, e = t
        for j in self.by_pos.get(pos, ()):
            if self.alive[j] and _divides(self.lts[j][1], e):
                return j
        return -1

    def reduce(self, v: Vec, full: bool = True, skip: int = -1) -> Vec:
        """Reduce v; with full=False only until the leading term is irreducible."""
        p = self.p
        key = self.key
        h = dict(v)
        heap = [(key(t), t) for t in h]
        heapq.heapify(heap)
        rem: Vec = {}
        while heap:
            _, t = heapq.heappop(heap)
            c = h.get(t)
            if c is None:
                continue
            j = self.find(t)
            if j == skip:
                j = -1
            if j < 0:
                del h[t]
                rem[t] = c
                if not full:
                    rem.update(h)
                    return rem
                continue
            g = self.elems[j]
            ge = self.lts[j][1]
            shift = _sub(t[1], ge)
            # g is monic, so subtracting c * x^shift * g cancels t
            for (gi, gx), gc in g.items():
                u = (gi, tuple(a + b for a, b in zip(gx, shift)))
                old = h.get(u)
                nv = ((old or 0) - c * gc) % p
                if nv:
                    h[u] = nv
                    if old is None:
                        heapq.heappush(heap, (key(u), u))
                elif old is not None:
                    del h[u]
        return rem


def _leading(v: Vec, key) -> Term:
    return min(v, key=key)


def _monic(v: Vec, lt: Term, p: int) -> Vec:
    inv = pow(v[lt], -1, p)
    if inv == 1:
        return v
    return {t: c * inv % p for t, c in v.items()}


@dataclass
class GroebnerBasis:
    """A reduced Groebner basis together with the data that produced it."""

    ring: PolyRing
    rank: int
    shifts: tuple
    order: TermOrder
    elems: list = field(default_factory=list)
    lts: list = field(default_factory=list)

    def __post_init__(self):
        self._key = self.order.keyfunc(self.ring, self.shifts)
        self._red = None

    @property
    def key(self):
        return self._key

    def reducer(self) -> _Reducer:
        if self._red is None:
            r = _Reducer(self.ring, self._key)
            for v, lt in zip(self.elems, self.lts):
                r.add(v, lt)
            self._red = r
        return self._red

    def normal_form(self, v: Vec) -> Vec:
        if not v:
            return {}
        return self.reducer().reduce(v)

    def contains(self, v: Vec) -> bool:
        return not self.normal_form(v)

    def leading_exps(self, pos: int) -> list[Exp]:
        return [lt[1] for lt in self.lts if lt[0] == pos]

    def __len__(self):
        return len(self.elems)


def buchberger(
    gens: Iterable[Vec],
    ring: PolyRing,
    rank: int,
    shifts: Sequence[int] | None = None,
    order: TermOrder = DEGREVLEX,
    degree_bound: int | None = None,
) -> GroebnerBasis:
    """Reduced Groebner basis of the submodule of P^rank generated by gens.

    Pairs are processed by the normal strategy (smallest sugar, then smallest
    lcm), with the Gebauer-Moeller criteria.  With degree_bound set, pairs of
    sugar above the bound are dropped (a truncated basis for homogeneous input).
    """
    p = ring.p
    shifts = tuple(shifts) if shifts is not None else (0,) * rank
    if len(shifts) != rank:
        raise StructuralError("shift list does not match the rank")
    key = order.keyfunc(ring, shifts)
    red = _Reducer(ring, key)
    sugar: list[int] = []
    pairs: list = []  # heap of (sugar, lcm key, counter, i, j, lcm term)
    counter = itertools.count()
    is_ideal = rank == 1

    def tdeg(t: Term) -> int:
        return shifts[t[0]] + ring.deg(t[1])

    def update(h: int):
        """Gebauer-Moeller update of the pair set and basis after adding h."""
        nonlocal pairs
        lt_h = red.lts[h]
        pos = lt_h[0]
        eh = lt_h[1]
        C = []
        for i in red.by_pos.get(pos, ()):
            if i == h or not red.alive[i]:
                continue
            ei = red.lts[i][1]
            cop = is_ideal and all(a == 0 or b == 0 for a, b in zip(ei, eh))
            C.append((i, _lcm(ei, eh), cop))
        D = []
        for k, (i, l, cop) in enumerate(C):
            if cop:
                D.append((i, l, cop))
                continue
            covered = False
            for (_j, l2, _c) in C[k + 1:]:
                if _divides(l2, l):
                    covered = True
                    break
            if not covered:
                for (_j, l2, _c) in D:
                    if _divides(l2, l):
                        covered = True
                        break
            if not covered:
                D.append((i, l, cop))
        if pairs:
            kept = []
            for item in pairs:
                _, _, _, i, j, lt = item
                if lt[0] == pos and _divides(eh, lt[1]):
                    if _lcm(red.lts[i][1], eh) != lt[1] and _lcm(red.lts[j][1], eh) != lt[1]:
                        continue
                kept.append(item)
            if len(kept) != len(pairs):
                heapq.heapify(kept)
                pairs = kept
        for i, l, cop in D:
            if cop:
                continue
            s = max(
                sugar[i] + ring.deg(l) - ring.deg(red.lts[i][1]),
                sugar[h] + ring.deg(l) - ring.deg(eh),
            )
            if degree_bound is not None and s > degree_bound:
                continue
            t = (pos, l)
            heapq.heappush(pairs, (s, key(t), next(counter), i, h, t))
        for i in red.by_pos.get(pos, ()):
            if i != h and red.alive[i] and _divides(eh, red.lts[i][1]):
                red.alive[i] = False

    def insert(v: Vec, s: int):
        lt = _leading(v, key)
        v = _monic(v, lt, p)
        idx = red.add(v, lt)
        sugar.append(s)
        update(idx)

    # initial generators, smallest first so that early ones reduce later ones
    start = [dict(g) for g in gens if g]
    for g in start:
        for (i, _e) in g:
            if i < 0 or i >= rank:
                raise StructuralError(f"generator has position {i} outside rank {rank}")
    start.sort(key=lambda g: (vsugar(g, ring, shifts), key(_leading(g, key))))
    for g in start:
        s = vsugar(g, ring, shifts)
        if degree_bound is not None and s > degree_bound:
            continue
        h = red.reduce(g, full=False)
        if h:
            insert(h, s)

    while pairs:
        s, _, _, i, j, t = heapq.heappop(pairs)
        gi, gj = red.elems[i], red.elems[j]
        mi = _sub(t[1], red.lts[i][1])
        mj = _sub(t[1], red.lts[j][1])
        spoly: Vec = {}
        for (pi, e), c in gi.items():
            spoly[(pi, tuple(a + b for a, b in zip(e, mi)))] = c
        for (pj, e), c in gj.items():
            u = (pj, tuple(a + b for a, b in zip(e, mj)))
            nv = (spoly.get(u, 0) - c) % p
            if nv:
                spoly[u] = nv
            else:
                spoly.pop(u, None)
        if not spoly:
            continue
        h = red.reduce(spoly, full=False)
        if h:
            insert(h, s)

    # reduced basis: alive elements, tails fully reduced, sorted by leading term
    alive = [k for k in range(len(red.elems)) if red.alive[k]]
    final = _Reducer(ring, key)
    for k in alive:
        final.add(red.elems[k], red.lts[k])
    elems, lts = [], []
    for idx, k in enumerate(alive):
        v = red.elems[k]
        lt = red.lts[k]
        c = v[lt]
        tail = dict(v)
        del tail[lt]
        tail = final.reduce(tail, skip=idx) if tail else {}
        out = {lt: c}
        out.update(tail)
        elems.append(out)
        lts.append(lt)
    order_idx = sorted(range(len(elems)), key=lambda k: key(lts[k]))
    gb = GroebnerBasis(ring, rank, shifts, order)
    gb.elems = [elems[k] for k in order_idx]
    gb.lts = [lts[k] for k in order_idx]
    return gb


# -- free submodules ------------------------------------------------------------


class FreeSubmodule:
    """A submodule of the graded free module P^rank given by generators."""

    def __init__(self, ring: PolyRing, rank: int, gens: Iterable[Vec], shifts: Sequence[int] | None = None):
        self.ring = ring
        self.rank = rank
        self.shifts = tuple(shifts) if shifts is not None else (0,) * rank
        if len(self.shifts) != rank:
            raise StructuralError("shift list does not match the rank")
        self.gens = [dict(g) for g in gens if g]
        for g in self.gens:
            for (i, _e) in g:
                if not 0 <= i < rank:
                    raise StructuralError(f"generator position {i} outside rank {rank}")
        self._gb: dict = {}

    @classmethod
    def ideal(cls, ring: PolyRing, polys: Iterable[dict]) -> "FreeSubmodule":
        return cls(ring, 1, [vec_from_polys([f]) for f in polys])

    def __repr__(self):
        return f"FreeSubmodule(rank={self.rank}, ngens={len(self.gens)})"

    def gb(self, order: TermOrder = DEGREVLEX) -> GroebnerBasis:
        k = order.tag()
        if k not in self._gb:
            self._gb[k] = buchberger(self.gens, self.ring, self.rank, self.shifts, order)
        return self._gb[k]

    def groebner(self, order: TermOrder = DEGREVLEX) -> "FreeSubmodule":
        g = self.gb(order)
        out = FreeSubmodule(self.ring, self.rank, g.elems, self.shifts)
        out._gb[order.tag()] = g
        return out

    def contains(self, v: Vec, order: TermOrder = DEGREVLEX) -> bool:
        return self.gb(order).contains(v)

    def contains_module(self, other: "FreeSubmodule") -> bool:
        g = self.gb()
        return all(g.contains(v) for v in other.gens)

    def equals(self, other: "FreeSubmodule") -> bool:
        return self.contains_module(other) and other.contains_module(self)

    def is_homogeneous(self) -> bool:
        try:
            for g in self.gens:
                vdeg(g, self.ring, self.shifts)
        except NonHomogeneousError:
            return False
        return True

    def gen_degrees(self) -> list[int]:
        return [vdeg(g, self.ring, self.shifts) for g in self.gens]

    def polys(self) -> list[dict]:
        """Generators of a rank-1 submodule as polynomials."""
        if self.rank != 1:
            raise StructuralError("not an ideal")
        return [vec_to_polys(g, 1)[0] for g in self.gens]

    def sum(self, other: "FreeSubmodule") -> "FreeSubmodule":
        self._check(other)
        return FreeSubmodule(self.ring, self.rank, self.gens + other.gens, self.shifts)

    def _check(self, other: "FreeSubmodule"):
        if self.rank != other.rank or self.ring != other.ring:
            raise StructuralError("submodules live in different free modules")


def groebner(basis: FreeSubmodule, order: TermOrder = DEGREVLEX) -> FreeSubmodule:
    return basis.groebner(order)


def normal_form(v, gb: FreeSubmodule, order: TermOrder = DEGREVLEX):
    """Normal form of v: a vector, or a polynomial when gb is an ideal."""
    if not v:
        return {}
    k = next(iter(v))
    if isinstance(k[1], tuple):
        return gb.gb(order).normal_form(v)
    nf = gb.gb(order).normal_form(vec_from_polys([v]))
    return vec_to_polys(nf, 1)[0]


def poly_nf(f: dict, gb: GroebnerBasis) -> dict:
    """Normal form of a polynomial modulo an ideal basis."""
    if not f:
        return {}
    return {e: c for (_i, e), c in gb.normal_form({(0, e): c for e, c in f.items()}).items()}


def _tagged(ring, rank, shifts, gens, tags_shifts):
    """Build vectors (g_j, e_j) in P^(rank + len(gens))."""
    out = []
    for j, g in enumerate(gens):
        v = dict(g)
        v[(rank + j, ring.zero_exp)] = 1
        out.append(v)
    return out, tuple(shifts) + tuple(tags_shifts)


def _elim_part(gb: GroebnerBasis, rank: int) -> list[Vec]:
    """Elements of a POT basis lying entirely in the trailing summand."""
    out = []
    for v, lt in zip(gb.elems, gb.lts):
        if lt[0] >= rank:
            out.append({(i - rank, e): c for (i, e), c in v.items()})
    return out


def _gen_shift(g: Vec, ring: PolyRing, shifts) -> int:
    try:
        d = vdeg(g, ring, shifts)
    except NonHomogeneousError:
        d = vsugar(g, ring, shifts)
    return d if d is not None else 0


def syzygies(gens: FreeSubmodule, order: TermOrder = DEGREVLEX) -> FreeSubmodule:
    """Kernel of the map P^s -> P^rank sending e_j to the j-th generator.

    The result lives in P^s with shifts equal to the generator degrees.
    """
    ring = gens.ring
    gl = gens.gens
    s = len(gl)
    degs = [_gen_shift(g, ring, gens.shifts) for g in gl]
    if s == 0:
        return FreeSubmodule(ring, 0, [], ())
    vecs, sh = _tagged(ring, gens.rank, gens.shifts, gl, degs)
    pot = TermOrder(order.kind, "pot", order.elim)
    gb = buchberger(vecs, ring, gens.rank + s, sh, pot)
    return FreeSubmodule(ring, s, _elim_part(gb, gens.rank), degs)


def intersect(U: FreeSubmodule, V: FreeSubmodule, order: TermOrder = DEGREVLEX) -> FreeSubmodule:
    """Generators of U ∩ V (tag elimination in P^r ⊕ P^r)."""
    U._check(V)
    r = U.rank
    ring = U.ring
    vecs = []
    for u in U.gens:
        v = dict(u)
        v.update(vshift_pos(u, r))
        vecs.append(v)
    vecs.extend(dict(v) for v in V.gens)
    pot = TermOrder(order.kind, "pot", order.elim)
    gb = buchberger(vecs, ring, 2 * r, U.shifts + U.shifts, pot)
    return FreeSubmodule(ring, r, _elim_part(gb, r), U.shifts)


def colon(U: FreeSubmodule, g: dict, ambient: FreeSubmodule | None = None, order: TermOrder = DEGREVLEX) -> FreeSubmodule:
    """{v in ambient : g v in U}; ambient defaults to the whole free module."""
    ring = U.ring
    r = U.rank
    if ambient is None:
        ambient = FreeSubmodule(ring, r, [{(i, ring.zero_exp): 1} for i in range(r)], U.shifts)
    U._check(ambient)
    vecs = []
    for a in ambient.gens:
        v = vmul_poly(a, g, ring.p)
        v.update(vshift_pos(a, r))
        vecs.append(v)
    vecs.extend(dict(u) for u in U.gens)
    try:
        dg = pdeg(g, ring) or 0
    except NonHomogeneousError:
        dg = ptotal_deg(g, ring)
    pot = TermOrder(order.kind, "pot", order.elim)
    sh = tuple(x + dg for x in U.shifts) + U.shifts
    gb = buchberger(vecs, ring, 2 * r, sh, pot)
    return FreeSubmodule(ring, r, _elim_part(gb, r), U.shifts)


def ideal_quotient(U: FreeSubmodule, J: Sequence[dict], ambient: FreeSubmodule | None = None) -> FreeSubmodule:
    """{v : J v ⊆ U} as the intersection of the colons by the generators of J."""
    out = None
    for g in J:
        c = colon(U, g, ambient)
        out = c if out is None else intersect(out, c)
    if out is None:
        raise StructuralError("empty ideal in quotient")
    return out


class Lifter:
    """Express members of a submodule in terms of its given generators."""

    def __init__(self, U: FreeSubmodule, order: TermOrder = DEGREVLEX):
        ring = U.ring
        self.U = U
        self.rank = U.rank
        self.p = ring.p
        degs = [_gen_shift(g, ring, U.shifts) for g in U.gens]
        vecs, sh = _tagged(ring, U.rank, U.shifts, U.gens, degs)
        pot = TermOrder(order.kind, "pot", order.elim)
        self.gb = buchberger(vecs, ring, U.rank + len(U.gens), sh, pot)

    def lift(self, v: Vec) -> list[dict] | None:
        """Cofactors a_j with v = sum a_j g_j, or None if v is not in U."""
        nf = self.gb.normal_form(v)
        if any(i < self.rank for (i, _e) in nf):
            return None
        n = len(self.U.gens)
        out: list[dict] = [dict() for _ in range(n)]
        for (i, e), c in nf.items():
            out[i - self.rank][e] = (-c) % self.p
        return out


def lift(v: Vec, U: FreeSubmodule) -> list[dict] | None:
    return Lifter(U).lift(v)


# -- Hilbert series -------------------------------------------------------------


@dataclass(frozen=True)
class HilbertSeries:
    """sum_n dim_n s^n = numerator(s) / (1 - s)^nvars (standard grading).

    numerator[k] is the coefficient of s^k; shifts may make it start below
    zero, recorded by ``low`` (the exponent of numerator[0]).
    """

    numerator: tuple
    nvars: int
    low: int = 0

    def reduced(self) -> tuple[tuple, int]:
        """(numerator, dim) with the series equal to numerator / (1 - s)^dim
        and numerator(1) != 0.  The zero module gives ((), -1)."""
        num = list(self.numerator)
        if not any(num):
            return (), -1
        order = 0
        while sum(num) == 0:
            # divide by (1 - s)
            q, acc = [], 0
            for c in num[:-1]:
                acc += c
                q.append(acc)
            num = q
            order += 1
        while len(num) > 1 and num[-1] == 0:
            num.pop()
        return tuple(num), self.nvars - order

    def dimension(self) -> int:
        """Krull dimension: nvars minus the order of vanishing at s = 1."""
        return self.reduced()[1]

    def multiplicity(self) -> int:
        return sum(self.reduced()[0])

    def coefficients(self, upto: int) -> list[int]:
        """dim in degrees low .. upto (inclusive), index 0 = degree self.low."""
        from math import comb

        out = []
        for n in range(self.low, upto + 1):
            tot = 0
            for k, c in enumerate(self.numerator):
                m = n - (self.low + k)
                if m < 0 or not c:
                    continue
                tot += c * (comb(m + self.nvars - 1, self.nvars - 1) if self.nvars else (1 if m == 0 else 0))
            out.append(tot)
        return out

    def value(self, n: int) -> int:
        if n < self.low:
            return 0
        return self.coefficients(n)[-1]


def _mono_numerator(gens: list[Exp], nvars: int) -> dict[int, int]:
    """Numerator of the Hilbert series of P / (monomials), standard grading."""
    gens = _minimal_monos(gens)
    if not gens:
        return {0: 1}
    # pivot on the last generator: N(I) = N(I') - s^deg(m) N(I' : m)
    m = gens[-1]
    rest = gens[:-1]
    a = _mono_numerator(rest, nvars)
    quot = [tuple(max(x - y, 0) for x, y in zip(g, m)) for g in rest]
    b = _mono_numerator(quot, nvars)
    dm = sum(m)
    out = dict(a)
    for k, c in b.items():
        out[k + dm] = out.get(k + dm, 0) - c
    return {k: c for k, c in out.items() if c}


def _minimal_monos(gens: list[Exp]) -> list[Exp]:
    gens = sorted(set(gens), key=lambda e: (sum(e), e))
    out: list[Exp] = []
    for g in gens:
        if not any(_divides(h, g) for h in out):
            out.append(g)
    return out


def hilbert_series(U: FreeSubmodule | GroebnerBasis, order: TermOrder = DEGREVLEX) -> HilbertSeries:
    """Hilbert series of P^rank / U for a homogeneous submodule U.

    Variables must all have weight 1.
    """
    gb = U if isinstance(U, GroebnerBasis) else None
    if gb is None:
        if not U.is_homogeneous():
            raise NonHomogeneousError("hilbert_series needs homogeneous input")
        gb = U.gb(order)
    ring = gb.ring
    if any(w != 1 for w in ring.weights):
        raise ValueError("hilbert_series supports standard grading only")
    total: dict[int, int] = {}
    for pos in range(gb.rank):
        num = _mono_numerator(gb.leading_exps(pos), ring.n)
        for k, c in num.items():
            k2 = k + gb.shifts[pos]
            total[k2] = total.get(k2, 0) + c
    total = {k: c for k, c in total.items() if c}
    if not total:
        return HilbertSeries((0,), ring.n, 0)
    lo, hi = min(total), max(total)
    return HilbertSeries(tuple(total.get(k, 0) for k in range(lo, hi + 1)), ring.n, lo)


def standard_monomials(gb: GroebnerBasis, pos: int, degree: int) -> list[Exp]:
    """Exponents e of the given weighted degree with (pos, e) not a leading term multiple."""
    lead = gb.leading_exps(pos)
    return [e for e in gb.ring.monomials(degree - gb.shifts[pos]) if not any(_divides(l, e) for l in lead)]
