"""Eisenbud operators, the Ext(M, k) module over S = k[t_1..t_c], support
varieties and complexity."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Sequence

import numpy as np

from . import modp
from .errors import StructuralError, TheoremViolation
from .fit import NEG_INFINITY, InconclusiveFit, fit_degree
from .poly import (
    FreeSubmodule,
    Lifter,
    PolyRing,
    TermOrder,
    buchberger,
    hilbert_series,
    padd,
    pmul,
    pscale,
    vadd,
    vscale,
)
from .resolve import FreeResolution, HMatrix, ModulePresentation, cyclic_module, minimal_resolution, reduce_vec
from .ring import CIRing, IdealData


def _f_lifter(A: CIRing) -> Lifter:
    lf = A.__dict__.get("_f_lifter")
    if lf is None:
        lf = Lifter(A.fideal, A.order)
        A.__dict__["_f_lifter"] = lf
    return lf


@dataclass
class OperatorSet:
    """t[i][j] is the matrix of t_j : F_i -> F_{i-2} (lifted to P), 2 <= i <= cutoff."""

    res: FreeResolution
    t: dict

    @property
    def A(self) -> CIRing:
        return self.res.A

    @property
    def c(self) -> int:
        return self.A.c

    def reduced(self, j: int, i: int) -> HMatrix:
        """t_j on F_i over A."""
        H = self.t[i][j]
        return HMatrix(self.A, [reduce_vec(self.A, v) for v in H.cols], H.row_degs, H.col_degs)

    def combination(self, beta: Sequence[int], i: int) -> HMatrix:
        """sum_j beta_j t_j on F_i, over A."""
        p = self.A.p
        H0 = self.t[i][0]
        cols = []
        for k in range(len(H0.cols)):
            v: dict = {}
            for j, b in enumerate(beta):
                if b:
                    v = vadd(v, vscale(self.t[i][j].cols[k], b, p), p)
            cols.append(reduce_vec(self.A, v))
        return HMatrix(self.A, cols, H0.row_degs, H0.col_degs)

    def constant_matrix(self, j: int, i: int) -> np.ndarray:
        """t_j (x) k : F_i (x) k -> F_{i-2} (x) k, a b_{i-2} x b_i matrix."""
        H = self.t[i][j]
        z = self.A.P.zero_exp
        m = np.zeros((len(H.row_degs), len(H.cols)), dtype=np.int64)
        for c_, col in enumerate(H.cols):
            for (r, e), v in col.items():
                if e == z:
                    m[r, c_] = v
        return m

    def check_lift_identity(self) -> bool:
        """d~_{i-1} d~_i = sum_j f_j t~_j exactly over P."""
        A = self.A
        p = A.p
        for i in range(2, self.res.cutoff + 1):
            prod = self.res.diffs[i - 1].compose(self.res.diffs[i], reduce=False)
            for k in range(len(prod.cols)):
                v: dict = {}
                for j, fj in enumerate(A.f):
                    v = vadd(v, _vmul(self.t[i][j].cols[k], fj, p), p)
                if vadd(prod.cols[k], vscale(v, -1, p), p):
                    return False
        return True

    def check_chain_maps(self) -> bool:
        """d_{i-2} t_j = t_j d_i over A for 3 <= i <= cutoff."""
        for i in range(3, self.res.cutoff + 1):
            for j in range(self.c):
                left = self.res.diffs[i - 2].compose(self.t[i][j])
                right = self.t[i - 1][j].compose(self.res.diffs[i])
                p = self.A.p
                for a, b in zip(left.cols, right.cols):
                    if vadd(a, vscale(b, -1, p), p):
                        return False
        return True


def _vmul(v: dict, g: dict, p: int) -> dict:
    out: dict = {}
    for (i, e), c in v.items():
        for e2, c2 in g.items():
            t = (i, tuple(a + b for a, b in zip(e, e2)))
            out[t] = (out.get(t, 0) + c * c2) % p
    return {t: c for t, c in out.items() if c}


def eisenbud_operators(res: FreeResolution) -> OperatorSet:
    """Split d~^2 along f entrywise, using the normal-form lift of each differential."""
    A = res.A
    if A.c < 1:
        raise StructuralError("Eisenbud operators need c >= 1")
    lf = _f_lifter(A)
    t: dict = {}
    for i in range(2, res.cutoff + 1):
        prod = res.diffs[i - 1].compose(res.diffs[i], reduce=False)
        cols = [[{} for _ in prod.cols] for _ in range(A.c)]
        for k, col in enumerate(prod.cols):
            polys: dict = {}
            for (r, e), c in col.items():
                polys.setdefault(r, {})[e] = c
            for r, g in polys.items():
                cof = lf.lift({(0, e): c for e, c in g.items()})
                if cof is None:
                    raise TheoremViolation("square of the lifted differential is not in (f)")
                for j, a in enumerate(cof):
                    for e, c in a.items():
                        cols[j][k][(r, e)] = c
        t[i] = [HMatrix(A, cols[j], prod.row_degs, prod.col_degs) for j in range(A.c)]
    return OperatorSet(res, t)


# -- Ext(M, k) over S ---------------------------------------------------------------


@dataclass
class ExtSModule:
    """Pieces Ext^i(M, k) = k^{dims[i]}; act[j][i] is t_j : piece i -> piece i+2."""

    dims: list
    act: list
    cutoff: int
    generated_in: int | None = None
    inconclusive: bool = False
    p: int = 101

    @property
    def c(self) -> int:
        return len(self.act)

    def check_commute(self) -> bool:
        for i in range(len(self.dims) - 4):
            for j in range(self.c):
                for l in range(j + 1, self.c):
                    a = self.act[j][i + 2] @ self.act[l][i]
                    b = self.act[l][i + 2] @ self.act[j][i]
                    if np.any((a - b) % self.p):
                        return False
        return True

    def mono_matrix(self, alpha: Sequence[int], i: int) -> np.ndarray | None:
        """Matrix of t^alpha on piece i, or None if it leaves the window."""
        D = sum(alpha)
        if i + 2 * D >= len(self.dims):
            return None
        m = np.eye(self.dims[i], dtype=np.int64)
        cur = i
        for j, a in enumerate(alpha):
            for _ in range(a):
                m = (self.act[j][cur] @ m) % self.p
                cur += 2
        return m


def ext_k_module(M: ModulePresentation | None = None, cutoff: int = 10, res: FreeResolution | None = None, ops: OperatorSet | None = None) -> ExtSModule:
    if res is None:
        res = minimal_resolution(M, cutoff)
    if not res.minimal:
        raise StructuralError("Ext(M, k) from constant parts needs a minimal resolution")
    if ops is None:
        ops = eisenbud_operators(res)
    A = res.A
    N = res.cutoff
    dims = res.betti
    act = []
    for j in range(A.c):
        row = []
        for i in range(N - 1):
            row.append(ops.constant_matrix(j, i + 2).T % A.p)
        act.append(row)
    E = ExtSModule(dims, act, N, p=A.p)
    # generation: every piece past g + 1 is covered by S_1 images
    g = None
    for top in range(N, 1, -1):
        imgs = [E.act[j][top - 2] for j in range(A.c)]
        if dims[top] and modp.rank(np.hstack(imgs), A.p) < dims[top]:
            g = top
            break
    E.generated_in = 1 if g is None else g
    E.inconclusive = E.generated_in > N - 2
    return E


# -- annihilators and varieties -----------------------------------------------------


def operator_ring(c: int, p: int) -> PolyRing:
    return PolyRing([f"t{j + 1}" for j in range(c)], p)


@dataclass
class VarietyIdeal:
    S: PolyRing
    gens: list
    dimension: int
    window: tuple = ()
    flags: list = field(default_factory=list)
    stabilization: int | None = None
    alternates: list = field(default_factory=list)

    @property
    def inconclusive(self) -> bool:
        return bool(self.flags)

    def strings(self) -> list[str]:
        return [self.S.fmt(g) for g in self.gens]

    def fingerprint(self) -> dict:
        return {
            "ideal": self.strings(),
            "dimension": self.dimension,
            "window": list(self.window),
            "flags": list(self.flags),
            "stabilization": self.stabilization,
        }


def ideal_dimension(S: PolyRing, gens: Sequence[dict]) -> int:
    return hilbert_series(FreeSubmodule.ideal(S, list(gens))).dimension()


def reduced_ideal_gens(S: PolyRing, gens: Sequence[dict]) -> list[dict]:
    gb = FreeSubmodule.ideal(S, list(gens)).gb()
    return [{e: c for (_i, e), c in v.items()} for v in gb.elems]


def annihilator(E: ExtSModule, lo: int, hi: int, dmax: int) -> list[dict]:
    """Generators in degrees 1..dmax of the elements of S killing pieces lo..hi."""
    S = operator_ring(E.c, E.p)
    p = E.p
    gens = []
    for D in range(1, dmax + 1):
        monos = S.monomials(D)
        cols = []
        for alpha in monos:
            parts = []
            for i in range(lo, hi - 2 * D + 1):
                if not E.dims[i]:
                    continue
                m = E.mono_matrix(alpha, i)
                if m is None:
                    continue
                parts.append(m.reshape(-1))
            cols.append(np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64))
        if not cols[0].size:
            gens.extend({a: 1} for a in monos)
            continue
        mat = np.column_stack(cols) % p
        ker = modp.nullspace(mat, p)
        for k in range(ker.shape[1]):
            g = {monos[r]: int(ker[r, k]) for r in range(len(monos)) if ker[r, k]}
            if g:
                gens.append(g)
    return reduced_ideal_gens(S, gens) if gens else []


def radical_contains(S: PolyRing, J: Sequence[dict], g: dict) -> bool:
    """g in rad(J), by the Rabinowitsch trick in S[y]."""
    if not g:
        return True
    names = list(S.names) + ["_y"]
    T = PolyRing(names, S.p)
    p = S.p
    up = lambda h: {e + (0,): c for e, c in h.items()}
    y = T.var(len(names) - 1)
    one = T.const(1)
    extra = padd(one, pscale(pmul(y, up(g), p), -1, p), p)
    gb = buchberger([{(0, e): c for e, c in up(h).items()} for h in J] + [{(0, e): c for e, c in extra.items()}], T, 1)
    return any(all(a == 0 for a in e) for (_i, e) in gb.lts)


def radical_equal(S: PolyRing, J1: Sequence[dict], J2: Sequence[dict]) -> bool:
    return all(radical_contains(S, J2, g) for g in J1) and all(radical_contains(S, J1, g) for g in J2)


def _dmax(lo: int, hi: int) -> int:
    return max(1, (hi - lo) // 2 - 1)


def support_variety(
    M: ModulePresentation,
    N: ModulePresentation | None = None,
    cutoff: int = 10,
    burn_in: int = 2,
    res: FreeResolution | None = None,
    ops: OperatorSet | None = None,
) -> VarietyIdeal:
    """Annihilator of Ext(M, N) (x) k over S, on two windows; N defaults to k."""
    A = M.A
    if res is None:
        res = minimal_resolution(M, cutoff)
    cutoff = res.cutoff
    if ops is None:
        ops = eisenbud_operators(res)
    if N is None:
        E = ext_k_module(res=res, ops=ops)
    else:
        E = ext_module_mod_m(res, ops, N)
    S = operator_ring(A.c, A.p)
    w1 = (burn_in, cutoff - 2)
    w2 = (burn_in + 2, cutoff)
    d = _dmax(*w1)
    J1 = annihilator(E, w1[0], w1[1], d)
    J2 = annihilator(E, w2[0], w2[1], d)
    flags = []
    if not _ideals_equal(S, J1, J2):
        flags.append("annihilator differs between windows")
    dim = ideal_dimension(S, J1)
    v = VarietyIdeal(S, J1, dim, w1, flags)
    if flags:
        v.alternates = [J2]
    return v


def _ideals_equal(S: PolyRing, J1, J2) -> bool:
    return reduced_ideal_gens(S, J1) == reduced_ideal_gens(S, J2) if (J1 or J2) else True


def ext_module_mod_m(res: FreeResolution, ops: OperatorSet, N: ModulePresentation) -> ExtSModule:
    """Ext(M, N) (x)_A k for N of finite length, with the induced t-action."""
    from .homology import GradedQuotient, hom_matrix, quotient_of

    A = res.A
    p = A.p
    Nq = quotient_of(A, N.rank, N.gen_degrees, N.relations)
    Q = Nq.Q
    n = Q.dim
    cut = res.cutoff
    # cochains C^i = Hom(F_i, N) = N^{b_i}
    dmat = {i: hom_matrix(res.diffs[i], Nq) for i in range(1, cut + 1)}  # C^{i-1} -> C^i
    xs = [Q.var_matrix(v) for v in range(A.P.n)]
    Z, proj, lifts = {}, {}, {}
    for i in range(cut):
        dim_i = res.betti[i] * n
        nxt = dmat.get(i + 1)
        z = modp.nullspace(nxt, p) if nxt is not None and nxt.size else np.eye(dim_i, dtype=np.int64)
        b = dmat[i] if i >= 1 else np.zeros((dim_i, 0), dtype=np.int64)
        mz = [np.kron(np.eye(res.betti[i], dtype=np.int64), x) @ z % p for x in xs] if z.size else []
        sub = np.hstack([b] + mz) if (b.size or mz) else np.zeros((dim_i, 0), dtype=np.int64)
        # coordinates on Z / (B + mZ): express in Z-coordinates first
        if z.shape[1] == 0:
            Z[i] = z
            proj[i] = np.zeros((0, dim_i), dtype=np.int64)
            lifts[i] = np.zeros((dim_i, 0), dtype=np.int64)
            continue
        zc = modp.solve(z, sub, p) if sub.shape[1] else np.zeros((z.shape[1], 0), dtype=np.int64)
        pr, lf = modp.complement_projection(zc, z.shape[1], p)
        Z[i] = z
        proj[i] = pr
        lifts[i] = (z @ lf) % p
    dims = [proj[i].shape[0] for i in range(cut)]
    act = []
    for j in range(A.c):
        row = []
        for i in range(cut - 2):
            T = hom_matrix(ops.t[i + 2][j], Nq)  # C^i -> C^{i+2}
            img = (T @ lifts[i]) % p
            zc = modp.solve(Z[i + 2], img, p)
            row.append((proj[i + 2] @ zc) % p if zc is not None else None)
        act.append(row)
    return ExtSModule(dims, act, cut, p=p)


# -- complexity ---------------------------------------------------------------------


@dataclass
class ComplexityReport:
    value: int
    variety_dim: int
    betti_cx: int | None
    agree: bool
    flags: list


def betti_complexity(betti: Sequence[int], burn_in: int = 2) -> int:
    """1 + max degree of the even and odd betti subsequences (0 if eventually zero)."""
    degs = []
    for par in (0, 1):
        idx = [i for i in range(len(betti)) if i >= burn_in and i % 2 == par]
        degs.append(fit_degree([betti[i] for i in idx]))
    d = max(degs)
    return 0 if d == NEG_INFINITY else int(d) + 1


def complexity(M: ModulePresentation, cutoff: int = 10, burn_in: int = 2, res: FreeResolution | None = None) -> ComplexityReport:
    """Support variety dimension, cross-checked against betti growth."""
    if res is None:
        res = minimal_resolution(M, cutoff)
    flags = []
    if res.A.c == 0:
        return ComplexityReport(0, 0, 0, True, flags)
    v = support_variety(M, res=res, burn_in=burn_in)
    flags.extend(v.flags)
    try:
        b = betti_complexity(res.betti, burn_in)
    except InconclusiveFit as exc:
        b = None
        flags.append(str(exc))
    agree = b == v.dimension
    if not agree:
        flags.append(f"variety dimension {v.dimension} differs from betti growth {b}")
    return ComplexityReport(v.dimension, v.dimension, b, agree, flags)


# -- ideal varieties ----------------------------------------------------------------


def power_module(I: IdealData, n: int) -> ModulePresentation:
    """A / I^n."""
    return cyclic_module(I.A, I.power_gens(n), f"A/I^{n}")


def power_varieties(I: IdealData, n_max: int, cutoff: int = 10, burn_in: int = 2) -> list[VarietyIdeal]:
    return [support_variety(power_module(I, n), cutoff=cutoff, burn_in=burn_in) for n in range(1, n_max + 1)]


def stable_ideal_variety(I: IdealData, n_max: int = 4, cutoff: int = 10, burn_in: int = 2, varieties=None) -> VarietyIdeal:
    """The eventual value of V(A/I^n) and its stabilization index."""
    vs = varieties or power_varieties(I, n_max, cutoff, burn_in)
    S = vs[0].S
    s = len(vs)
    while s > 1 and radical_equal(S, vs[s - 2].gens, vs[-1].gens):
        s -= 1
    last = vs[-1]
    flags = [f for v in vs[s - 1 :] for f in v.flags]
    if len(vs) - s + 1 < 3:
        flags.append("no stabilization window of length >= 3")
    out = VarietyIdeal(S, last.gens, last.dimension, last.window, flags, stabilization=s)
    return out


def total_ideal_variety(I: IdealData, n_max: int = 4, cutoff: int = 10, burn_in: int = 2, varieties=None) -> VarietyIdeal:
    """Union of V(A/I^n) over n up to the stabilization index: intersection of ideals."""
    vs = varieties or power_varieties(I, n_max, cutoff, burn_in)
    st = stable_ideal_variety(I, n_max, varieties=vs)
    S = st.S
    J = vs[0].gens
    for v in vs[1 : st.stabilization]:
        J = intersect_ideals(S, J, v.gens)
    out = VarietyIdeal(S, J, ideal_dimension(S, J), st.window, list(st.flags), st.stabilization)
    return out


def intersect_ideals(S: PolyRing, J1: Sequence[dict], J2: Sequence[dict]) -> list[dict]:
    from .poly import intersect

    U = intersect(FreeSubmodule.ideal(S, list(J1)), FreeSubmodule.ideal(S, list(J2)))
    return reduced_ideal_gens(S, U.polys()) if U.gens else []


def variety_meets_trivially(S: PolyRing, J1: Sequence[dict], J2: Sequence[dict]) -> bool:
    """V(J1) and V(J2) meet only in the origin: dim S/(J1 + J2) = 0."""
    return ideal_dimension(S, list(J1) + list(J2)) <= 0
