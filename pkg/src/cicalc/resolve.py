"""Graded presentations and minimal free resolutions over a CI ring.

All Groebner work happens over the ambient polynomial ring P: a module
A^r / U is the quotient P^r / (U + f P^r).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import modp
from .errors import (
    ComplexityTooLowError,
    GenericityFailure,
    NotMCMError,
    RegularSequenceError,
    StructuralError,
    TheoremViolation,
)
from .poly import (
    FreeSubmodule,
    TermOrder,
    buchberger,
    hilbert_series,
    HilbertSeries,
    pdeg,
    pmul,
    padd,
    pscale,
    vdeg,
    vec_from_polys,
    vec_to_polys,
    vmul_poly,
    vadd,
    vscale,
    _elim_part,
)
from .ring import CIRing, GradedCoords, IdealData, QuotientSpace, polynomial_ring


# -- matrices ------------------------------------------------------------------


class HMatrix:
    """A homogeneous matrix over A: column j is the image of the j-th source basis vector.

    row_degs are the degrees of the target basis, col_degs those of the source.
    """

    def __init__(self, A: CIRing, cols: Sequence[dict], row_degs: Sequence[int], col_degs: Sequence[int]):
        self.A = A
        self.cols = [dict(c) for c in cols]
        self.row_degs = tuple(row_degs)
        self.col_degs = tuple(col_degs)
        if len(self.cols) != len(self.col_degs):
            raise StructuralError("column count and source degrees differ")

    @property
    def shape(self):
        return (len(self.row_degs), len(self.cols))

    def entries(self) -> list[list[dict]]:
        m = [[{} for _ in self.cols] for _ in self.row_degs]
        for j, col in enumerate(self.cols):
            for (i, e), c in col.items():
                m[i][j][e] = c
        return m

    def entry(self, i: int, j: int) -> dict:
        return {e: c for (k, e), c in self.cols[j].items() if k == i}

    def is_minimal(self) -> bool:
        """True when no entry is a unit (a nonzero constant)."""
        z = self.A.P.zero_exp
        return not any((i, z) in col for col in self.cols for i in range(len(self.row_degs)))

    def compose(self, other: "HMatrix", reduce: bool = True) -> "HMatrix":
        """self * other (apply other first)."""
        if other.shape[0] != self.shape[1]:
            raise StructuralError("matrix shapes do not compose")
        p = self.A.p
        ents = self.entries()
        out = []
        for col in other.cols:
            v: dict = {}
            for (k, e), c in col.items():
                v = vadd(v, vmul_poly(self.cols[k], {e: c}, p), p)
            out.append(reduce_vec(self.A, v) if reduce else v)
        return HMatrix(self.A, out, self.row_degs, other.col_degs)

    def is_zero(self) -> bool:
        return not any(self.cols)

    def to_strings(self) -> list[list[str]]:
        fmt = self.A.P.fmt
        return [[fmt(x) for x in row] for row in self.entries()]


def reduce_vec(A: CIRing, v: dict) -> dict:
    if not A.f or not v:
        return dict(v)
    polys: dict = {}
    for (i, e), c in v.items():
        polys.setdefault(i, {})[e] = c
    out = {}
    for i in sorted(polys):
        for e, c in A.reduce(polys[i]).items():
            out[(i, e)] = c
    return out


def kernel_gens(A: CIRing, cols: Sequence[dict], row_degs: Sequence[int], col_degs: Sequence[int]) -> list[dict]:
    """Generators (lifted to P) of the kernel of A^s -> A^r given by the columns."""
    r, s = len(row_degs), len(cols)
    if s == 0:
        return []
    vecs = []
    for j, col in enumerate(cols):
        v = dict(col)
        v[(r + j, A.P.zero_exp)] = 1
        vecs.append(v)
    vecs.extend(A.fcols(r))
    pot = TermOrder(A.order.kind, "pot", A.order.elim)
    gb = buchberger(vecs, A.P, r + s, tuple(row_degs) + tuple(col_degs), pot)
    out = []
    for v in _elim_part(gb, r):
        w = reduce_vec(A, v)
        if w:
            out.append(w)
    return out


def minimal_subset(A: CIRing, vecs: Sequence[dict], shifts: Sequence[int]) -> list[int]:
    """Indices of a minimal generating set chosen greedily, degree by degree.

    A candidate of degree e is kept when it is not in the span of
    (A_1 * K)_e plus the candidates already kept in degree e.
    """
    if not vecs:
        return []
    p = A.p
    P = A.P
    degs = [vdeg(v, P, shifts) for v in vecs]
    cc = GradedCoords(A, shifts)
    by_deg: dict[int, list[int]] = {}
    for j, d in enumerate(degs):
        if d is not None:
            by_deg.setdefault(d, []).append(j)
    if not by_deg:
        return []
    K: dict[int, np.ndarray] = {}
    kept = []
    lo, hi = min(by_deg), max(by_deg)
    for e in range(lo, hi + 1):
        n = cc.dim(e)
        rows = []
        for i, w in enumerate(P.weights):
            prev = K.get(e - w)
            if prev is not None and prev.shape[0]:
                rows.append((prev @ cc.mult(i, e - w).T) % p)
        base = modp.row_basis(np.vstack(rows), p) if rows else np.zeros((0, n), dtype=np.int64)
        rk = base.shape[0]
        for j in by_deg.get(e, ()):
            v = cc.coords(vecs[j], e)
            if not v.any():
                continue
            trial = np.vstack([base, v[None, :]])
            r2 = modp.rank(trial, p)
            if r2 > rk:
                kept.append(j)
                base = modp.row_basis(trial, p)
                rk = r2
        K[e] = base
    return kept


def prune_units(A: CIRing, gen_degs: list[int], rels: list[dict]) -> tuple[list[int], list[dict], list[int]]:
    """Remove generators made redundant by relations with a unit entry.

    Returns (new generator degrees, new relations, indices of surviving
    generators in the old numbering).
    """
    p = A.p
    z = A.P.zero_exp
    gens = list(range(len(gen_degs)))
    degs = list(gen_degs)
    rels = [reduce_vec(A, r) for r in rels]
    rels = [r for r in rels if r]
    while True:
        hit = None
        for ci, col in enumerate(rels):
            for k in range(len(degs)):
                if (k, z) in col:
                    hit = (ci, k)
                    break
            if hit:
                break
        if hit is None:
            break
        ci, k = hit
        col = rels[ci]
        uinv = pow(col[(k, z)], -1, p)
        new = []
        for cj, other in enumerate(rels):
            if cj == ci:
                continue
            ent = {e: c for (i, e), c in other.items() if i == k}
            if ent:
                other = vadd(other, vmul_poly(col, pscale(ent, -uinv, p), p), p)
                other = reduce_vec(A, other)
            # drop row k
            other = {(i - (i > k), e): c for (i, e), c in other.items() if i != k}
            if other:
                new.append(other)
        rels = new
        del degs[k]
        del gens[k]
    return degs, rels, gens


# -- modules --------------------------------------------------------------------


class ModulePresentation:
    """M = A^r / (relations), with generator degrees."""

    def __init__(self, A: CIRing, gen_degrees: Sequence[int], relations: Sequence[dict] = (), name: str = ""):
        self.A = A
        self.gen_degrees = tuple(gen_degrees)
        self.relations = [reduce_vec(A, r) for r in relations]
        self.relations = [r for r in self.relations if r]
        self.name = name
        for r in self.relations:
            for (i, _e) in r:
                if not 0 <= i < len(self.gen_degrees):
                    raise StructuralError("relation refers to a missing generator")
            vdeg(r, A.P, self.gen_degrees)  # homogeneity check

    def __repr__(self):
        return f"ModulePresentation(rank={self.rank}, nrels={len(self.relations)}{', ' + self.name if self.name else ''})"

    @property
    def rank(self) -> int:
        return len(self.gen_degrees)

    def rel_degrees(self) -> list[int]:
        return [vdeg(r, self.A.P, self.gen_degrees) for r in self.relations]

    def matrix(self) -> HMatrix:
        return HMatrix(self.A, self.relations, self.gen_degrees, self.rel_degrees())

    def submodule(self, extra: Sequence[dict] = ()) -> FreeSubmodule:
        """Relations + f P^r (+ extra) as a submodule of P^r."""
        return FreeSubmodule(
            self.A.P, self.rank, list(self.relations) + self.A.fcols(self.rank) + list(extra), self.gen_degrees
        )

    def hilbert_series(self) -> HilbertSeries:
        return hilbert_series(self.submodule(), self.A.order)

    def dimension(self) -> int:
        return self.hilbert_series().dimension()

    def is_zero(self) -> bool:
        return self.rank == 0 or self.dimension() < 0

    def modulo(self, I: IdealData, n: int) -> QuotientSpace:
        """The finite dimensional space M / I^n M."""
        return QuotientSpace(self.submodule(I.module_power(n, self.rank)), self.A.order)

    def mod_element(self, x: dict) -> "ModulePresentation":
        """M / xM."""
        extra = [{(k, e): c for e, c in x.items()} for k in range(self.rank)]
        return ModulePresentation(self.A, self.gen_degrees, self.relations + extra, f"{self.name}/x" if self.name else "")

    def minimalized(self) -> "ModulePresentation":
        degs, rels, _ = prune_units(self.A, list(self.gen_degrees), self.relations)
        keep = minimal_subset(self.A, rels, degs)
        return ModulePresentation(self.A, degs, [rels[j] for j in keep], self.name)

    def with_ring(self, A: CIRing) -> "ModulePresentation":
        return ModulePresentation(A, self.gen_degrees, self.relations, self.name)

    def fingerprint(self) -> dict:
        return {
            "gen_degrees": list(self.gen_degrees),
            "relations": self.matrix().to_strings() if self.relations else [],
        }


def direct_sum(*mods: ModulePresentation) -> ModulePresentation:
    A = mods[0].A
    degs: list[int] = []
    rels: list[dict] = []
    off = 0
    for M in mods:
        degs.extend(M.gen_degrees)
        rels.extend({(i + off, e): c for (i, e), c in r.items()} for r in M.relations)
        off += M.rank
    return ModulePresentation(A, degs, rels, "+".join(M.name for M in mods if M.name))


def free_module(A: CIRing, degrees: Sequence[int] = (0,)) -> ModulePresentation:
    return ModulePresentation(A, degrees, [], "free")


def cyclic_module(A: CIRing, gens: Sequence[dict], name: str = "") -> ModulePresentation:
    """A / (gens)."""
    return ModulePresentation(A, [0], [{(0, e): c for e, c in g.items()} for g in gens], name)


def residue_field(A: CIRing) -> ModulePresentation:
    return cyclic_module(A, [A.P.var(i) for i in range(A.P.n)], "k")


def ideal_module(A: CIRing, gens: Sequence[dict], name: str = "") -> ModulePresentation:
    """The ideal (gens) of A as a module, presented by its syzygies."""
    gens = [A.reduce(g) for g in gens]
    gens = [g for g in gens if g]
    degs = [pdeg(g, A.P) for g in gens]
    cols = [{(0, e): c for e, c in g.items()} for g in gens]
    rels = kernel_gens(A, cols, [0], degs)
    return ModulePresentation(A, degs, rels, name).minimalized()


# -- resolutions ------------------------------------------------------------------


@dataclass
class FreeResolution:
    """F_N -> ... -> F_0, truncated at homological degree ``cutoff``.

    degrees[i] lists the generator degrees of F_i; diffs[i] is the matrix of
    d_i : F_i -> F_{i-1} (diffs[0] is None).
    """

    module: ModulePresentation
    cutoff: int
    degrees: list
    diffs: list
    minimal: bool = True

    @property
    def A(self) -> CIRing:
        return self.module.A

    @property
    def betti(self) -> list[int]:
        return [len(d) for d in self.degrees]

    def graded_betti(self) -> list[dict]:
        out = []
        for degs in self.degrees:
            t: dict = {}
            for d in degs:
                t[d] = t.get(d, 0) + 1
            out.append(dict(sorted(t.items())))
        return out

    def check_complex(self) -> bool:
        """d_i d_{i+1} = 0 exactly over A."""
        for i in range(1, self.cutoff):
            if self.diffs[i].shape[1] and self.diffs[i + 1].shape[1]:
                if not self.diffs[i].compose(self.diffs[i + 1]).is_zero():
                    return False
        return True

    def check_minimal(self) -> bool:
        return all(self.diffs[i].is_minimal() for i in range(1, self.cutoff + 1))

    def check_exact(self) -> bool:
        """ker d_i = im d_{i+1} for 1 <= i < cutoff, by Groebner membership."""
        A = self.A
        for i in range(1, self.cutoff):
            d = self.diffs[i]
            ker = kernel_gens(A, d.cols, d.row_degs, d.col_degs)
            im = FreeSubmodule(A.P, len(d.col_degs), self.diffs[i + 1].cols + A.fcols(len(d.col_degs)), d.col_degs)
            if not all(im.contains(v) for v in ker):
                return False
        return True

    def fingerprint(self) -> dict:
        return {
            "betti": self.betti,
            "graded_betti": [{str(k): v for k, v in g.items()} for g in self.graded_betti()],
            "minimal": self.minimal,
            "cutoff": self.cutoff,
        }


def minimal_resolution(M: ModulePresentation, cutoff: int = 10, minimize: bool = True) -> FreeResolution:
    """Minimal graded free resolution of M up to homological degree ``cutoff``.

    With minimize=False the syzygies are taken as produced by the Groebner
    basis, giving a (usually) non-minimal resolution.
    """
    if cutoff < 1:
        raise ValueError("cutoff must be at least 1")
    A = M.A
    if minimize:
        M0 = M.minimalized()
        degs0, rels = list(M0.gen_degrees), M0.relations
    else:
        degs0, rels = list(M.gen_degrees), list(M.relations)
    degrees = [degs0]
    diffs: list = [None]
    cur = HMatrix(A, rels, degs0, [vdeg(r, A.P, degs0) for r in rels])
    diffs.append(cur)
    degrees.append(list(cur.col_degs))
    for _i in range(2, cutoff + 1):
        ker = kernel_gens(A, cur.cols, cur.row_degs, cur.col_degs)
        if minimize:
            keep = minimal_subset(A, ker, cur.col_degs)
            ker = [ker[j] for j in keep]
        kd = [vdeg(v, A.P, cur.col_degs) for v in ker]
        order = sorted(range(len(ker)), key=lambda j: kd[j])
        ker = [ker[j] for j in order]
        kd = [kd[j] for j in order]
        cur = HMatrix(A, ker, cur.col_degs, kd)
        diffs.append(cur)
        degrees.append(kd)
    return FreeResolution(M, cutoff, degrees, diffs, minimal=minimize)


def perturbed_resolution(res: FreeResolution, seed: int = 0) -> FreeResolution:
    """A non-minimal resolution of the same module.

    Adds a split summand A(-a) --1--> A(-a) in every pair of adjacent
    homological degrees and applies a random graded change of basis to
    each free module.
    """
    A = res.A
    p = A.p
    rng = random.Random(seed)
    N = res.cutoff
    degrees = [list(d) for d in res.degrees]
    diffs = [None] + [HMatrix(A, d.cols, d.row_degs, d.col_degs) for d in res.diffs[1:]]
    # trivial summands: for i = 1..N, glue a copy of A(-a_i) into F_i and F_{i-1}
    for i in range(1, N + 1):
        a = (max(degrees[i - 1]) if degrees[i - 1] else 0) + 1
        k_prev = len(degrees[i - 1])
        k_cur = len(degrees[i])
        degrees[i - 1].append(a)
        degrees[i].append(a)
        # d_i gains the unit column
        d = diffs[i]
        cols = [dict(c) for c in d.cols] + [{(k_prev, A.P.zero_exp): 1}]
        diffs[i] = HMatrix(A, cols, degrees[i - 1], degrees[i])
        # d_{i-1} gains a zero column (the new summand of F_{i-1} maps to zero)
        if i - 1 >= 1:
            d2 = diffs[i - 1]
            diffs[i - 1] = HMatrix(A, d2.cols + [{}], degrees[i - 2], degrees[i - 1])
        # d_{i+1} keeps its columns but its target F_i grew
        if i + 1 <= N:
            d3 = diffs[i + 1]
            diffs[i + 1] = HMatrix(A, d3.cols, degrees[i], d3.col_degs)
    # random change of basis Q_i on each F_i: d_i -> Q_{i-1}^{-1} d_i Q_i
    Qs, Qinv = [], []
    for i in range(N + 1):
        q, qi = _random_graded_automorphism(A, degrees[i], rng)
        Qs.append(q)
        Qinv.append(qi)
    for i in range(1, N + 1):
        d = diffs[i]
        d = Qinv[i - 1].compose(d.compose(Qs[i]))
        diffs[i] = d
    module = res.module
    if N >= 1:
        # F_0 changed: present M by the new d_1
        module = ModulePresentation(A, degrees[0], diffs[1].cols, res.module.name)
    return FreeResolution(module, N, degrees, diffs, minimal=False)


def _random_graded_automorphism(A: CIRing, degs: Sequence[int], rng: random.Random):
    """A unipotent-times-scalar graded automorphism of the free module and its inverse."""
    p = A.p
    n = len(degs)
    z = A.P.zero_exp
    cols = []
    for j in range(n):
        col = {(j, z): rng.randrange(1, p)}
        for i in range(n):
            if i == j:
                continue
            gap = degs[j] - degs[i]
            if gap > 0 or (gap == 0 and i < j):
                mons = A.basis(gap)
                if mons and rng.random() < 0.5:
                    e = rng.choice(mons)
                    col[(i, e)] = rng.randrange(1, p)
        cols.append(col)
    Q = HMatrix(A, cols, degs, degs)
    # inverse by the Neumann series of the nilpotent part after scaling
    diag_inv = [pow(cols[j][(j, z)], -1, p) for j in range(n)]
    Dinv = HMatrix(A, [{(j, z): diag_inv[j]} for j in range(n)], degs, degs)
    U = Dinv.compose(Q)  # unit diagonal, nilpotent off-diagonal part
    Nm = HMatrix(A, [{t: c for t, c in col.items() if t != (j, z)} for j, col in enumerate(U.cols)], degs, degs)
    # U^{-1} = sum_k (-N)^k
    inv = HMatrix(A, [{(j, z): 1} for j in range(n)], degs, degs)
    term = inv
    for _ in range(n + 1):
        term = term.compose(Nm)
        term = HMatrix(A, [vscale(c, -1, p) for c in term.cols], degs, degs)
        if term.is_zero():
            break
        inv = HMatrix(A, [vadd(a, b, p) for a, b in zip(inv.cols, term.cols)], degs, degs)
    Qinv = inv.compose(Dinv)
    return Q, Qinv


def syzygy(M: ModulePresentation, i: int, res: FreeResolution | None = None) -> ModulePresentation:
    """Omega^i(M), presented as coker(d_{i+1}) with generators F_i."""
    if i == 0:
        return M
    if res is None or res.cutoff < i + 1:
        res = minimal_resolution(M, i + 1)
    d = res.diffs[i + 1]
    name = f"Omega^{i}({M.name})" if M.name else ""
    return ModulePresentation(M.A, res.degrees[i], d.cols, name)


def projective_dimension_over_P(M: ModulePresentation) -> int | None:
    """pd of M as a module over the ambient polynomial ring (None for M = 0)."""
    A = M.A
    Pring = polynomial_ring(A.P)
    MP = ModulePresentation(Pring, M.gen_degrees, M.relations + A.fcols(M.rank))
    res = minimal_resolution(MP, A.P.n + 1)
    b = res.betti
    if b[0] == 0:
        return None
    return max(i for i, x in enumerate(b) if x)


def depth(M: ModulePresentation) -> int | None:
    """depth M via Auslander-Buchsbaum over P (depth_A M = depth_P M).

    Returns None for the zero module (depth infinity).
    """
    pd = projective_dimension_over_P(M)
    if pd is None:
        return None
    return M.A.P.n - pd


def is_mcm(M: ModulePresentation) -> bool:
    dp = depth(M)
    return dp is None or dp == M.A.d


# -- Ext modules against free modules ------------------------------------------


def homology_module(A: CIRing, ker_cols: Sequence[dict], ker_degs, im_cols: Sequence[dict], shifts) -> ModulePresentation:
    """(span ker_cols) / (span im_cols) inside A^r, assuming im ⊆ ker."""
    m = len(ker_cols)
    r = len(shifts)
    if m == 0:
        return ModulePresentation(A, [], [])
    cols = list(ker_cols) + list(im_cols)
    degs = list(ker_degs) + [vdeg(v, A.P, shifts) for v in im_cols]
    syz = kernel_gens(A, cols, shifts, degs)
    rels = []
    for v in syz:
        w = {(i, e): c for (i, e), c in v.items() if i < m}
        if w:
            rels.append(w)
    return ModulePresentation(A, ker_degs, rels).minimalized()


def transpose(d: HMatrix) -> HMatrix:
    """Dual map Hom(F_{i-1}, A) -> Hom(F_i, A), with negated degrees."""
    A = d.A
    ents = d.entries()
    rows, cols = d.shape
    out = []
    for k in range(rows):
        v = {}
        for j in range(cols):
            for e, c in ents[k][j].items():
                v[(j, e)] = c
        out.append(v)
    return HMatrix(A, out, [-x for x in d.col_degs], [-x for x in d.row_degs])


def ext_free_module(res: FreeResolution, j: int) -> ModulePresentation:
    """Ext^j(M, A) as a graded module, from the dualised resolution."""
    if j + 1 > res.cutoff:
        raise ValueError("resolution too short")
    A = res.A
    dn = transpose(res.diffs[j + 1])  # Hom(F_j) -> Hom(F_{j+1})
    shifts = [-x for x in res.degrees[j]]
    ker = kernel_gens(A, dn.cols, dn.row_degs, dn.col_degs)
    ker = [ker[k] for k in minimal_subset(A, ker, shifts)]
    kd = [vdeg(v, A.P, shifts) for v in ker]
    im = transpose(res.diffs[j]).cols if j >= 1 else []
    return homology_module(A, ker, kd, im, shifts)


# -- MCM tools -------------------------------------------------------------------


@dataclass
class Cosyzygy:
    module: ModulePresentation  # Omega^{-1} M
    embedding: HMatrix  # M -> G, columns are images of the generators of M
    dual_gens: list  # generators of M* as vectors in Hom(F_0, A)


def cosyzygy_data(M: ModulePresentation, check: bool = True) -> Cosyzygy:
    A = M.A
    if check and not is_mcm(M):
        raise NotMCMError("cosyzygy needs a maximal Cohen-Macaulay module")
    M = M.minimalized()
    r = M.rank
    if not M.relations:
        dual = [{(k, A.P.zero_exp): 1} for k in range(r)]
    else:
        d1 = M.matrix()
        dt = transpose(d1)
        dual = kernel_gens(A, dt.cols, dt.row_degs, dt.col_degs)
        dual = [dual[j] for j in minimal_subset(A, dual, [-x for x in M.gen_degrees])]
    ddeg = [vdeg(v, A.P, [-x for x in M.gen_degrees]) for v in dual]
    # M -> G = A^m, generator e_k maps to (phi_1(e_k), ..., phi_m(e_k)); G has degrees -ddeg
    gdeg = [-x for x in ddeg]
    cols = []
    for k in range(r):
        v = {}
        for j, phi in enumerate(dual):
            for (pos, e), c in phi.items():
                if pos == k:
                    v[(j, e)] = c
        cols.append(v)
    emb = HMatrix(A, cols, gdeg, M.gen_degrees)
    Q = ModulePresentation(A, gdeg, cols, f"Omega^-1({M.name})" if M.name else "")
    return Cosyzygy(Q, emb, dual)


def cosyzygy(M: ModulePresentation) -> ModulePresentation:
    """Omega^{-1}(M) for an MCM module over the Gorenstein ring A."""
    return cosyzygy_data(M).module.minimalized()


def free_summand_degrees(M: ModulePresentation) -> list[int]:
    """Degrees of the free summands of M, from the evaluation pairing M* x M -> k."""
    A = M.A
    M = M.minimalized()
    if M.rank == 0:
        return []
    if not M.relations:
        return list(M.gen_degrees)
    cz = cosyzygy_data(M, check=False)
    z = A.P.zero_exp
    out = []
    for a in sorted(set(M.gen_degrees)):
        rows = [k for k, d in enumerate(M.gen_degrees) if d == a]
        mat = np.array(
            [[phi.get((k, z), 0) for k in rows] for phi in cz.dual_gens], dtype=np.int64
        ).reshape(len(cz.dual_gens), len(rows))
        out.extend([a] * modp.rank(mat, A.p))
    return out


def stable_equivalent(M: ModulePresentation, N: ModulePresentation, cutoff: int = 4, hf_degree: int = 8) -> bool:
    """Sound but incomplete test that M and N agree up to free summands.

    Compares graded betti tables in homological degrees >= 1, the number of
    generators left after removing free summands, and the Hilbert functions
    with the free summands subtracted.
    """
    A = M.A
    rm = minimal_resolution(M, cutoff)
    rn = minimal_resolution(N, cutoff)
    if rm.graded_betti()[1:] != rn.graded_betti()[1:]:
        return False
    fm = free_summand_degrees(M)
    fn = free_summand_degrees(N)
    if rm.betti[0] - len(fm) != rn.betti[0] - len(fn):
        return False
    hA = A.hilbert()

    def hf(mod, free, n):
        hs = mod.hilbert_series() if mod.rank else None
        v = hs.value(n) if hs is not None else 0
        return v - sum(hA.value(n - a) for a in free)

    lo = min(list(M.gen_degrees) + list(N.gen_degrees) + [0])
    return all(hf(M, fm, n) == hf(N, fn, n) for n in range(lo, lo + hf_degree + 1))


@dataclass
class ModuleMap:
    source: ModulePresentation
    target: ModulePresentation
    images: list  # image of each source generator, as a vector in A^{target.rank}


@dataclass
class ConeWitness:
    map: ModuleMap
    module: ModulePresentation  # C(f)
    quotient: ModulePresentation  # Omega^{-1} M
    n_to_c: HMatrix
    c_to_q: HMatrix
    exact: bool
    checks: dict = field(default_factory=dict)


def _injective_on_coker(source: ModulePresentation, target: ModulePresentation, images: Sequence[dict]) -> bool:
    """Whether the induced map source -> target is injective.

    Eliminates the target block from the submodule generated by
    (images_k, e_k) and (target relations, 0) and compares with the source
    relations.
    """
    A = source.A
    r, s = target.rank, source.rank
    vecs = []
    for k, im in enumerate(images):
        v = dict(im)
        v[(r + k, A.P.zero_exp)] = 1
        vecs.append(v)
    vecs.extend(target.relations)
    vecs.extend(A.fcols(r))
    pot = TermOrder(A.order.kind, "pot", A.order.elim)
    gb = buchberger(vecs, A.P, r + s, tuple(target.gen_degrees) + tuple(source.gen_degrees), pot)
    ker = _elim_part(gb, r)
    srcsub = source.submodule()
    return all(srcsub.contains(v) for v in ker)


def cone(fmap: ModuleMap, check_mcm: bool = True) -> ConeWitness:
    """Pushout C(f) of f: M -> N along M -> G, with G free and G/M = Omega^{-1}M."""
    M, N = fmap.source, fmap.target
    A = M.A
    if check_mcm and not (is_mcm(M) and is_mcm(N)):
        raise NotMCMError("cone needs maximal Cohen-Macaulay modules")
    # keep M's generators as given so the map images stay valid
    cz = cosyzygy_data(M, check=False) if M.relations else None
    if cz is None:
        gdeg = list(M.gen_degrees)
        emb_cols = [{(k, A.P.zero_exp): 1} for k in range(M.rank)]
    else:
        # cosyzygy_data minimalizes M; guard against a change of generators
        Mm = M.minimalized()
        if Mm.gen_degrees != M.gen_degrees or Mm.rank != M.rank:
            raise StructuralError("cone expects a minimally presented source module")
        gdeg = list(cz.embedding.row_degs)
        emb_cols = cz.embedding.cols
    rN = N.rank
    p = A.p
    degs = list(N.gen_degrees) + gdeg
    rels = [dict(r) for r in N.relations]
    for k in range(M.rank):
        v = dict(fmap.images[k])
        for (j, e), c in emb_cols[k].items():
            v[(rN + j, e)] = (-c) % p
        rels.append(v)
    C = ModulePresentation(A, degs, rels, "cone")
    Q = ModulePresentation(A, gdeg, emb_cols, "cosyz")
    z = A.P.zero_exp
    n_to_c = HMatrix(A, [{(k, z): 1} for k in range(rN)], degs, N.gen_degrees)
    c_to_q = HMatrix(
        A, [{} for _ in range(rN)] + [{(j, z): 1} for j in range(len(gdeg))], gdeg, degs
    )
    checks = {}
    # N -> C injective
    checks["injective"] = _injective_on_coker(N, C, n_to_c.cols)
    # C -> Q well defined: relations of C map into relations of Q
    qsub = Q.submodule()
    img = c_to_q.compose(HMatrix(A, C.relations, degs, C.rel_degrees())) if C.relations else None
    checks["well_defined"] = img is None or all(qsub.contains(v) for v in img.cols)
    # additivity of Hilbert series gives exactness in the middle
    hc, hn, hq = C.hilbert_series(), N.hilbert_series(), Q.hilbert_series()
    top = 12 + max(degs + [0])
    lo = min(degs + [0])
    checks["additive"] = all(hc.value(n) == hn.value(n) + hq.value(n) for n in range(lo, top))
    checks["additive_series"] = _series_equal(hc, _series_add(hn, hq))
    exact = all(checks.values())
    return ConeWitness(fmap, C, Q, n_to_c, c_to_q, exact, checks)


def _series_add(a: HilbertSeries, b: HilbertSeries) -> HilbertSeries:
    lo = min(a.low, b.low)
    hi = max(a.low + len(a.numerator), b.low + len(b.numerator))
    num = [0] * (hi - lo)
    for s in (a, b):
        for k, c in enumerate(s.numerator):
            num[s.low + k - lo] += c
    return HilbertSeries(tuple(num), a.nvars, lo)


def _series_equal(a: HilbertSeries, b: HilbertSeries) -> bool:
    def norm(s):
        num = list(s.numerator)
        lo = s.low
        while num and num[0] == 0:
            num.pop(0)
            lo += 1
        while num and num[-1] == 0:
            num.pop()
        return (tuple(num), lo if num else 0)

    return norm(a) == norm(b)


def is_regular_element(M: ModulePresentation, x: dict) -> bool:
    """x is a nonzerodivisor on M iff HS(M/xM) = (1 - s^deg x) HS(M)."""
    dx = pdeg(x, M.A.P)
    if M.rank == 0:
        return True
    h = M.hilbert_series()
    hx = M.mod_element(x).hilbert_series()
    shifted = HilbertSeries(tuple(-c for c in h.numerator), h.nvars, h.low + dx)
    return _series_equal(hx, _series_add(h, shifted))


def multiplication_map(M: ModulePresentation, x: dict) -> ModuleMap:
    """x : M(-deg x) -> M."""
    imgs = [{(k, e): c for e, c in x.items()} for k in range(M.rank)]
    dx = pdeg(x, M.A.P)
    return ModuleMap(_shift(M, -dx), M, imgs)


def _shift(M: ModulePresentation, k: int) -> ModulePresentation:
    """M(k): generator degrees lowered by k."""
    return ModulePresentation(M.A, [a - k for a in M.gen_degrees], M.relations, M.name)


@dataclass
class Approximation:
    V: ModulePresentation
    target: ModulePresentation  # M / xs M
    Y: ModulePresentation
    pd_Y: int | None
    depth_V: int | None
    cones: list
    checks: dict


def mcm_approx(M: ModulePresentation, xs: Sequence[dict], cutoff: int | None = None) -> Approximation:
    """Iterated cones V_i = C(V_{i-1} --x_i--> V_{i-1}) and the sequence 0 -> Y -> V -> M/xM -> 0."""
    A = M.A
    if not is_mcm(M):
        raise NotMCMError("mcm_approx needs a maximal Cohen-Macaulay module")
    Acur = free_module(A)
    for x in xs:
        if not is_regular_element(Acur, x):
            raise RegularSequenceError("sequence is not regular on A")
        Acur = Acur.mod_element(x)
    V = M.minimalized()
    cones = []
    for x in xs:
        fm = multiplication_map(V, x)
        w = cone(fm, check_mcm=False)
        cones.append(w)
        V = w.module
    target = M.minimalized()
    for x in xs:
        target = target.mod_element(x)
    # V -> M/xsM: the first block of V's generators is the identity onto M's generators
    r = target.rank
    z = A.P.zero_exp
    imgs = [{(k, z): 1} if k < r else {} for k in range(V.rank)]
    # kernel Y: preimage of the relations of the target
    cols = imgs + target.relations
    degs = list(V.gen_degrees) + target.rel_degrees()
    syz = kernel_gens(A, cols, target.gen_degrees, degs)
    ygens = []
    for v in syz:
        w = {(i, e): c for (i, e), c in v.items() if i < V.rank}
        if w:
            ygens.append(w)
    # present Y as a submodule of V
    ycols = ygens + V.relations
    ydeg = [vdeg(v, A.P, V.gen_degrees) for v in ygens]
    ysyz = kernel_gens(A, ycols, V.gen_degrees, ydeg + V.rel_degrees())
    yrels = []
    for v in ysyz:
        w = {(i, e): c for (i, e), c in v.items() if i < len(ygens)}
        if w:
            yrels.append(w)
    Y = ModulePresentation(A, ydeg, yrels, "Y").minimalized()
    cutoff = cutoff or (A.d + 2)
    if Y.rank:
        ry = minimal_resolution(Y, cutoff)
        nz = [i for i, b in enumerate(ry.betti) if b]
        pdY = max(nz) if ry.betti[-1] == 0 else None
    else:
        pdY = None
    depth_V = depth(V)
    checks = {
        "cones_exact": all(w.exact for w in cones),
        "pd_Y_finite": Y.rank == 0 or (pdY is not None and pdY <= A.d),
        "V_is_mcm": depth_V is None or depth_V == A.d,
        # l-additivity on a window: HS(V) = HS(Y) + HS(M/xM)
        "additive": _series_equal(V.hilbert_series(), _series_add(Y.hilbert_series(), target.hilbert_series()))
        if Y.rank
        else _series_equal(V.hilbert_series(), target.hilbert_series()),
    }
    return Approximation(V, target, Y, pdY, depth_V, cones, checks)


# -- complexity reduction ------------------------------------------------------------


@dataclass
class ComplexityReduction:
    K: ModulePresentation
    i0: int
    beta: list
    seed: int
    attempts: int
    betti_K: list
    expected: list
    cx_M: int
    cx_K: int


def reduce_complexity(M: ModulePresentation, cutoff: int = 10, seed: int = 0, burn_in: int = 2, retries: int = 40) -> ComplexityReduction:
    """Find v = sum beta_j t_j surjective on the window and return its kernel module K."""
    from .operators import complexity, eisenbud_operators

    A = M.A
    res = minimal_resolution(M, cutoff)
    cx = complexity(M, cutoff=cutoff, res=res).value
    if cx <= 1:
        raise ComplexityTooLowError(f"complexity {cx} is below 2")
    ops = eisenbud_operators(res)
    p = A.p
    rng = random.Random(seed)
    tried = []
    b = res.betti
    for attempt in range(retries):
        beta = [rng.randrange(p) for _ in range(A.c)]
        tried.append(beta)
        if not any(beta):
            continue
        # surjectivity of v: F_{i+2} -> F_i modulo the maximal ideal
        const = {}
        ok_from = None
        for i in range(cutoff - 2, -1, -1):
            T = sum(c * ops.constant_matrix(j, i + 2) for j, c in enumerate(beta)) % p
            if b[i] and modp.rank(T, p) < b[i]:
                break
            ok_from = i
        if ok_from is None or ok_from > max(burn_in, 0) or cutoff - 2 - ok_from < 3:
            continue
        i0 = ok_from
        # kernel of v on F_{i0+2}, then K = G_{i0} / (G_{i0} ∩ im d_{i0+3})
        v = ops.combination(beta, i0 + 2)
        G = kernel_gens(A, v.cols, v.row_degs, v.col_degs)
        G = [G[k] for k in minimal_subset(A, G, v.col_degs)]
        gdeg = [vdeg(g, A.P, v.col_degs) for g in G]
        d3 = res.diffs[i0 + 3]
        syz = kernel_gens(A, G + d3.cols, v.col_degs, gdeg + list(d3.col_degs))
        rels = []
        for s in syz:
            w = {(i, e): c for (i, e), c in s.items() if i < len(G)}
            if w:
                rels.append(w)
        K = ModulePresentation(A, gdeg, rels, "K").minimalized()
        n = cutoff - 2 - i0
        rk = minimal_resolution(K, max(n - 1, 1)) if K.rank else None
        bK = rk.betti if rk else [0]
        expected = [b[j + i0 + 2] - b[j + i0] for j in range(len(bK))]
        if bK != expected:
            raise TheoremViolation(f"betti numbers of K {bK} differ from rank differences {expected}")
        cxK = complexity(K, cutoff=cutoff).value if K.rank else 0
        return ComplexityReduction(K, i0, beta, seed, attempt + 1, bK, expected, cx, cxK)
    raise GenericityFailure(f"no surjective operator found in {retries} draws (seed {seed})", seeds=tried)
