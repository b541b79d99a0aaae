"""Syzygy filtrations N_n = I^n F_{i-1} ∩ M_i and strong Artin-Rees exponents.

Level i (i >= 1) refers to M_i = image(d_i) inside F_{i-1}; level 1 is the
first syzygy of M sitting in F_0.  Everything lives in P^b with f P^b added,
so equalities are equalities of A-submodules.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .blowup import AssocGraded, RegReport, ky_regularity
from .errors import WindowTooSmall
from .fit import NEG_INFINITY, fmt_degree
from .poly import FreeSubmodule, intersect, vdeg, vmul_poly
from .resolve import FreeResolution, ModulePresentation, homology_module, kernel_gens, minimal_resolution
from .ring import IdealData, length


def _sub(A, degs, vecs) -> FreeSubmodule:
    return FreeSubmodule(A.P, len(degs), list(vecs) + A.fcols(len(degs)), degs)


def _equal(U: FreeSubmodule, V: FreeSubmodule) -> tuple[bool, bool]:
    """(U ⊆ V, V ⊆ U) by Groebner membership."""
    return all(V.contains(u) for u in U.gens), all(U.contains(v) for v in V.gens)


def _times_ideal(I: IdealData, k: int, U: FreeSubmodule) -> list[dict]:
    p = I.A.p
    out = []
    for g in I.power_gens(k):
        for u in U.gens:
            w = vmul_poly(u, g, p)
            if w:
                out.append(w)
    return out


@dataclass
class SyzygyFiltration:
    level: int
    degrees: list  # generator degrees of F_{i-1}
    image: list  # columns of d_i
    pieces: list  # N_0 .. N_{n_max}
    stable_from: int | None  # least n1 with N_{n+1} = I N_n on [n1, n_max - 1]
    checks: dict = field(default_factory=dict)
    graded_lengths: list = field(default_factory=list)  # l(N_n / N_{n+1})

    @property
    def n_max(self) -> int:
        return len(self.pieces) - 1


def syzygy_filtration(M: ModulePresentation, I: IdealData, i: int, n_max: int = 6, res: FreeResolution | None = None) -> SyzygyFiltration:
    if i < 1:
        raise ValueError("levels start at 1")
    if res is None or res.cutoff < i:
        res = minimal_resolution(M, max(i, 1))
    A = M.A
    degs = list(res.degrees[i - 1])
    image = list(res.diffs[i].cols)
    Z = _sub(A, degs, image)
    pieces = []
    for n in range(n_max + 1):
        if not image:
            pieces.append(_sub(A, degs, []))
            continue
        F = _sub(A, degs, I.module_power(n, len(degs)))
        pieces.append(_sub(A, degs, intersect(F, Z, A.order).gens) if n else Z)
    checks = {"decreasing": True, "ideal_times": True}
    for n in range(n_max):
        if not all(pieces[n].contains(v) for v in pieces[n + 1].gens):
            checks["decreasing"] = False
        if not all(pieces[n + 1].contains(v) for v in _times_ideal(I, 1, pieces[n])):
            checks["ideal_times"] = False
    stable = None
    for n in range(n_max - 1, -1, -1):
        a, b = _equal(pieces[n + 1], _sub(A, degs, _times_ideal(I, 1, pieces[n])))
        if not (a and b):
            break
        stable = n
    if stable is None:
        stable = n_max
    # l(N_n / N_{n+1}) = l(F / I^{n+1}F) - l(F / (N_n + I^{n+1}F))
    gl = []
    r = len(degs)
    for n in range(n_max):
        if not r:
            gl.append(0)
            continue
        top = I.module_power(n + 1, r)
        gl.append(length(_sub(A, degs, top)) - length(_sub(A, degs, list(pieces[n].gens) + top)))
    return SyzygyFiltration(i, degs, image, pieces, stable, checks, gl)


def verify_ar(M: ModulePresentation, I: IdealData, h: int, i_max: int = 4, n_max: int = 6, res: FreeResolution | None = None, filtrations: dict | None = None) -> dict:
    """Check I^n F_{i-1} ∩ M_i = I^{n-h}(I^h F_{i-1} ∩ M_i) for h <= n <= n_max by double inclusion."""
    if res is None:
        res = minimal_resolution(M, i_max)
    transcript = []
    ok = True
    for i in range(1, i_max + 1):
        filt = (filtrations or {}).get(i) or syzygy_filtration(M, I, i, n_max, res)
        A = M.A
        for n in range(h, n_max + 1):
            rhs = _sub(A, filt.degrees, _times_ideal(I, n - h, filt.pieces[h]))
            right_in, left_in = _equal(rhs, filt.pieces[n])
            if not right_in:
                raise AssertionError(f"I^(n-h) N_h is not inside N_n at level {i}, n = {n}, h = {h}")
            transcript.append({"level": i, "n": n, "equal": left_in})
            ok = ok and left_in
    vacuous = h >= n_max
    return {"h": h, "holds": ok, "vacuous": vacuous, "window": [h, n_max], "transcript": transcript}


def containment_holds(filt: SyzygyFiltration, I: IdealData) -> bool:
    """I^{n-h} N_h ⊆ N_n for every h <= n in the window."""
    A = I.A
    for h in range(filt.n_max + 1):
        for n in range(h, filt.n_max + 1):
            rhs = _times_ideal(I, n - h, filt.pieces[h])
            if not all(filt.pieces[n].contains(v) for v in rhs):
                return False
    return True


# -- the graded module of the filtration ----------------------------------------------------


def filtration_graded(M: ModulePresentation, I: IdealData, filt: SyzygyFiltration, check: int = 0) -> tuple:
    """G_H(M_i) over k[Y] as the kernel of G_I(F_{i-1}) -> G_I(M_{i-1})."""
    A = M.A
    F = ModulePresentation(A, filt.degrees, [])
    Mprev = ModulePresentation(A, filt.degrees, filt.image)
    GF = AssocGraded(F, I, check)
    GM = AssocGraded(Mprev, I, check)
    pF = GF.ky_presentation(minimal=False)
    pM = GM.ky_presentation(minimal=False)
    SA = pF.A
    zero = SA.P.zero_exp
    gF, gM = pF.rank, pM.rank
    phi = []
    for t in GF.basis(0):
        col = GM.coords({t: 1}, 0)
        phi.append({(k, zero): int(c) for k, c in enumerate(col) if c})
    cols = phi + list(pM.relations)
    cdeg = [0] * gF + pM.rel_degrees()
    syz = kernel_gens(SA, cols, [0] * gM, cdeg) if cols and gM else [
        {(j, zero): 1} for j in range(gF)
    ]
    ker = []
    for v in syz:
        w = {(k, e): c for (k, e), c in v.items() if k < gF}
        if w:
            ker.append(w)
    kd = [vdeg(w, SA.P, [0] * gF) for w in ker]
    out = homology_module(SA, ker, kd, pF.relations, [0] * gF)
    out.name = f"G_H({filt.level})"
    return out, GF, GM


@dataclass
class LevelReport:
    level: int
    h: int
    stable_from: int
    reg: object
    bound_ok: bool
    checks: dict

    def to_json(self) -> dict:
        return {
            "level": self.level,
            "h": self.h,
            "reg_GH": fmt_degree(self.reg),
            "h_le_reg_plus_1": self.bound_ok,
            "checks": self.checks,
        }


@dataclass
class ARReport:
    levels: list
    h: int
    n_max: int
    flags: list = field(default_factory=list)

    @property
    def h_values(self) -> list[int]:
        return [lv.h for lv in self.levels]

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "h_levels": {str(lv.level): lv.h for lv in self.levels},
            "window": [self.h, self.n_max],
            "levels": [lv.to_json() for lv in self.levels],
            "flags": list(self.flags),
        }


def strong_ar_exponent(M: ModulePresentation, I: IdealData, i_max: int = 4, n_max: int = 6, res: FreeResolution | None = None, with_reg: bool = True, strict: bool = False) -> ARReport:
    """h_i = least h with N_n = I^{n-h} N_h on [h, n_max], for levels 1..i_max; h = max h_i.

    h_i is read off the stability index of the chain (N_{n+1} = I N_n from h_i on),
    which is equivalent on a finite window; verify_ar checks the powers directly.
    """
    if res is None:
        res = minimal_resolution(M, i_max)
    levels = []
    flags = []
    for i in range(1, i_max + 1):
        filt = syzygy_filtration(M, I, i, n_max, res)
        h = filt.stable_from
        checks = dict(filt.checks)
        checks["containment"] = containment_holds(filt, I)
        if h >= n_max - 1:
            flags.append(f"level {i}: h = {h} leaves fewer than two checked degrees")
            if strict:
                raise WindowTooSmall(f"no Artin-Rees exponent verified at level {i} within n <= {n_max}")
        reg = NEG_INFINITY
        bound_ok = True
        if with_reg and filt.image:
            GH, GF, GM = filtration_graded(M, I, filt)
            rep = ky_regularity(GH, len(I.gens))
            reg = rep.reg
            if GH.rank:
                hs = GH.hilbert_series()
                hf = [hs.value(n) for n in range(n_max)]
            else:
                hf = [0] * n_max
            diff = [GF.dim(n) - GM.dim(n) for n in range(n_max)]
            checks["additivity"] = hf == diff == filt.graded_lengths
            if not checks["additivity"]:
                flags.append(f"level {i}: lengths {hf} / {diff} / {filt.graded_lengths} disagree")
            bound_ok = reg == NEG_INFINITY and h == 0 or (reg != NEG_INFINITY and h <= reg + 1)
        levels.append(LevelReport(i, h, h, reg, bound_ok, checks))
    return ARReport(levels, max((lv.h for lv in levels), default=0), n_max, flags)
