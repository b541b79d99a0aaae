"""Associated graded modules, their local cohomology and regularity,
Ratliff-Rush closures, superficial elements and the regularity sweep
over syzygy modules."""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

import numpy as np

from . import modp
from .errors import GenericityFailure, InconclusiveCohomology, NotFiniteLengthError
from .fit import NEG_INFINITY, fmt_degree
from .homology import GradedQuotient
from .poly import (
    FreeSubmodule,
    PolyRing,
    TermOrder,
    _divides,
    buchberger,
    hilbert_series,
    padd,
    pdeg,
    pscale,
)
from .resolve import ModulePresentation, ext_free_module, minimal_resolution, syzygy, free_module
from .ring import CIRing, IdealData, QuotientSpace, length

CECH_BUDGET = 50
CECH_MARGIN = 4


def module_length(M: ModulePresentation, I: IdealData, n: int) -> int:
    """l(M / I^n M)."""
    if n <= 0 or M.rank == 0:
        return 0
    return length(M.submodule(I.module_power(n, M.rank)))


# -- associated graded module ------------------------------------------------------------


class AssocGraded:
    """G_I(M) = P[y]^r / L with y_j of bidegree (1, deg g_j), computed by Rees elimination.

    L = (U P[y, u] + (y_j - g_j u)) ∩ P[y]^r + I P[y]^r, U the relations of M plus f.
    """

    def __init__(self, M: ModulePresentation, I: IdealData, check: int = 6):
        A = M.A
        P = A.P
        self.M = M
        self.I = I
        self.A = A
        self.s = len(I.gens)
        self.r = M.rank
        s, r, n = self.s, self.r, P.n
        self.nx = n
        p = A.p
        names = list(P.names) + [f"_y{j + 1}" for j in range(s)]
        wts = list(P.weights) + [d + 1 for d in I.degs]
        self.Py = PolyRing(names, p, wts)
        Ru = PolyRing(names + ["_u"], p, wts + [1])
        pad_u = (0,) * (s + 1)
        rel = list(M.relations) + A.fcols(r)
        gens = [{(i, e + pad_u): c for (i, e), c in v.items()} for v in rel]
        u = (0,) * (n + s) + (1,)
        for j, g in enumerate(I.gens):
            yj = tuple(1 if k == n + j else 0 for k in range(n + s + 1))
            for k in range(r):
                v = {(k, yj): 1}
                for e, c in g.items():
                    t = (k, tuple(a + b for a, b in zip(e + pad_u, u)))
                    v[t] = (v.get(t, 0) - c) % p
                gens.append({t: c for t, c in v.items() if c})
        elim = TermOrder("elim", "pot", [n + s])
        rees = buchberger(gens, Ru, r, M.gen_degrees, elim)
        K = []
        for v, lt in zip(rees.elems, rees.lts):
            if lt[1][n + s] == 0:
                K.append({(i, e[:-1]): c for (i, e), c in v.items()})
        self.rees_kernel = K
        pad = (0,) * s
        extra = [{(i, e + pad): c for (i, e), c in v.items()} for v in I.module_power(1, r)]
        self.gb = buchberger(K + extra, self.Py, r, M.gen_degrees, TermOrder("degrevlex", "pot"))
        self.D = max((self.ydeg(lt[1]) for lt in self.gb.lts), default=0)
        self._basis: dict = {}
        self._mult: dict = {}
        self.hf_checked = self._check_hilbert(check) if check else None

    def ydeg(self, e: tuple) -> int:
        return sum(e[self.nx :])

    # graded pieces
    def basis(self, n: int) -> list:
        b = self._basis.get(n)
        if b is not None:
            return b[0]
        out = []
        if n >= 0:
            Py = self.Py
            ymonos = _monomials(self.s, n)
            for pos in range(self.r):
                lead = self.gb.leading_exps(pos)
                for ym in ymonos:
                    start = (0,) * self.nx + ym
                    if any(_divides(l, start) for l in lead):
                        continue
                    seen = {start}
                    stack = [start]
                    while stack:
                        e = stack.pop()
                        out.append((pos, e))
                        for i in range(self.nx):
                            e2 = e[:i] + (e[i] + 1,) + e[i + 1 :]
                            if e2 not in seen and not any(_divides(l, e2) for l in lead):
                                seen.add(e2)
                                stack.append(e2)
        out.sort(key=lambda t: (t[0], t[1]))
        self._basis[n] = (out, {t: k for k, t in enumerate(out)})
        return out

    def index(self, n: int) -> dict:
        self.basis(n)
        return self._basis[n][1]

    def dim(self, n: int) -> int:
        return len(self.basis(n))

    def coords(self, v: dict, n: int) -> np.ndarray:
        idx = self.index(n)
        out = np.zeros(len(idx), dtype=np.int64)
        for t, c in self.gb.normal_form(v).items():
            out[idx[t]] = c
        return out

    def mult(self, j: int, n: int) -> np.ndarray:
        """y_j : G_n -> G_{n+1}."""
        key = (j, n)
        m = self._mult.get(key)
        if m is None:
            src = self.basis(n)
            m = np.zeros((self.dim(n + 1), len(src)), dtype=np.int64)
            k = self.nx + j
            for c, (pos, e) in enumerate(src):
                e2 = e[:k] + (e[k] + 1,) + e[k + 1 :]
                m[:, c] = self.coords({(pos, e2): 1}, n + 1)
            self._mult[key] = m
        return m

    def mono(self, b: Sequence[int], n: int) -> np.ndarray:
        """y^b : G_n -> G_{n+|b|}."""
        m = np.eye(self.dim(n), dtype=np.int64)
        cur = n
        p = self.A.p
        for j, a in enumerate(b):
            for _ in range(a):
                m = (self.mult(j, cur) @ m) % p
                cur += 1
        return m

    def hilbert_function(self, upto: int) -> list[int]:
        return [self.dim(n) for n in range(upto + 1)]

    def _check_hilbert(self, upto: int) -> bool:
        for n in range(upto + 1):
            direct = module_length(self.M, self.I, n + 1) - module_length(self.M, self.I, n)
            if direct != self.dim(n):
                raise AssertionError(f"G_{n} has dimension {self.dim(n)}, expected {direct}")
        return True

    # restriction of scalars to k[Y]
    def ky_presentation(self, minimal: bool = True) -> ModulePresentation:
        """G as a graded module over S = k[Y_1..Y_s], generated by a basis of G_0."""
        S = PolyRing([f"Y{j + 1}" for j in range(self.s)], self.A.p)
        SA = CIRing(S, [], self.s)
        g = self.dim(0)
        rels = []
        p = self.A.p
        for n in range(1, self.D + 1):
            monos = S.monomials(n)
            blocks = [self.mono(b, 0) for b in monos]
            if not blocks or not self.dim(n):
                # every y^b v vanishes
                rels.extend({(v, b): 1} for b in monos for v in range(g))
                continue
            big = np.hstack(blocks) % p
            ker = modp.nullspace(big, p)
            for k in range(ker.shape[1]):
                vec = {}
                for row in np.nonzero(ker[:, k])[0]:
                    bi, vi = divmod(int(row), g)
                    vec[(vi, monos[bi])] = int(ker[row, k])
                rels.append(vec)
        pres = ModulePresentation(SA, [0] * g, rels, "G")
        return pres.minimalized() if minimal else pres

    def fingerprint(self) -> dict:
        return {
            "hilbert_function": self.hilbert_function(6),
            "relation_degree": self.D,
            "rank": self.r,
            "y_count": self.s,
        }


def _monomials(s: int, n: int) -> list[tuple]:
    if s == 0:
        return [()] if n == 0 else []
    if s == 1:
        return [(n,)]
    out = []
    for a in range(n, -1, -1):
        for rest in _monomials(s - 1, n - a):
            out.append((a,) + rest)
    return out


def assoc_graded(M: ModulePresentation | CIRing, I: IdealData, check: int = 6) -> AssocGraded:
    if isinstance(M, CIRing):
        M = free_module(M)
    from .ring import is_m_primary

    if not is_m_primary(I):
        raise NotFiniteLengthError("the ideal must be m-primary")
    return AssocGraded(M, I, check)


# -- regularity ----------------------------------------------------------------------------


@dataclass
class RegReport:
    ends: dict
    reg: object
    method: str
    cohomology: dict = field(default_factory=dict)
    margin: int = 0
    flags: list = field(default_factory=list)
    betti: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "ends": {str(i): fmt_degree(v) for i, v in sorted(self.ends.items())},
            "reg": fmt_degree(self.reg),
            "method": self.method,
            "cohomology": {str(i): {str(n): d for n, d in sorted(v.items())} for i, v in sorted(self.cohomology.items())},
            "margin": self.margin,
            "flags": list(self.flags),
        }


def _reg_from_ends(ends: dict):
    vals = [v + i for i, v in ends.items() if v != NEG_INFINITY]
    return max(vals) if vals else NEG_INFINITY


def ky_regularity(pres: ModulePresentation, s: int) -> RegReport:
    """Regularity of a graded k[Y_1..Y_s]-module from its minimal resolution; ends by local duality."""
    if pres.rank == 0 or pres.is_zero():
        return RegReport({i: NEG_INFINITY for i in range(s + 1)}, NEG_INFINITY, "betti")
    res = minimal_resolution(pres, s + 1)
    reg = max(max(d) - i for i, d in enumerate(res.degrees) if d)
    ends = {}
    for i in range(s + 1):
        E = ext_free_module(res, s - i)
        if E.rank == 0 or E.is_zero():
            ends[i] = NEG_INFINITY
        else:
            ends[i] = -s - min(E.gen_degrees)
    flags = []
    if _reg_from_ends(ends) != reg:
        flags.append(f"local duality ends give {fmt_degree(_reg_from_ends(ends))}, betti give {reg}")
    return RegReport(ends, reg, "betti", flags=flags, betti=res.betti)


def regularity_restriction(G: AssocGraded) -> RegReport:
    """Regularity from the minimal resolution of G over k[Y]."""
    return ky_regularity(G.ky_presentation(), G.s)


class _Torsion:
    """y_T-power torsion and stable ranks on the pieces of G."""

    def __init__(self, G: AssocGraded, T: tuple, budget: int):
        self.G = G
        self.T = T
        self.b = tuple(1 if j in T else 0 for j in range(G.s))
        self.budget = budget
        self._tor: dict = {}

    def torsion(self, N: int) -> np.ndarray:
        """Columns spanning ker(y_T^m) on G_N for m large."""
        if N in self._tor:
            return self._tor[N]
        G = self.G
        p = G.A.p
        dim = G.dim(N)
        if dim == 0:
            out = np.zeros((0, 0), dtype=np.int64)
            self._tor[N] = out
            return out
        m = np.eye(dim, dtype=np.int64)
        cur = N
        last, same = None, 0
        for _ in range(self.budget):
            m = (G.mono(self.b, cur) @ m) % p
            cur += len(self.T)
            k = dim - modp.rank(m, p) if m.size else dim
            if k == last:
                same += 1
                if same >= 2:
                    break
            else:
                same = 0
            last = k
        else:
            raise InconclusiveCohomology(
                f"torsion of y_T on G_{N} did not stabilise", {"T": list(self.T), "N": N}
            )
        ker = modp.nullspace(m, p) if m.size else np.eye(dim, dtype=np.int64)
        self._tor[N] = ker
        return ker

    def quotient(self, N: int):
        dim = self.G.dim(N)
        tor = self.torsion(N)
        return modp.complement_projection(tor if tor.size else np.zeros((dim, 0), dtype=np.int64), dim, self.G.A.p)

    def stable_from(self) -> int:
        """First N where y_T : G_N/tor -> G_{N+|T|}/tor is onto for 3 consecutive steps."""
        G = self.G
        p = G.A.p
        t = len(self.T)
        run = 0
        for N in range(0, self.budget):
            pr0, lf0 = self.quotient(N)
            pr1, _ = self.quotient(N + t)
            q0, q1 = pr0.shape[0], pr1.shape[0]
            ok = q0 == q1 and (q0 == 0 or modp.rank((pr1 @ G.mono(self.b, N) @ lf0) % p, p) == q1)
            run = run + 1 if ok else 0
            if run >= 3:
                return N - 2
        raise InconclusiveCohomology(f"localisation at y_T did not stabilise", {"T": list(self.T)})


def cech_cohomology(G: AssocGraded, margin: int = CECH_MARGIN, budget: int = CECH_BUDGET, lo: int = -3) -> RegReport:
    """Local cohomology of G with respect to (y) from the Cech complex, degree by degree.

    Localisation pieces (G_{y_T})_n are realised as G_{n + K|T|} modulo y_T-torsion,
    with K taken past the point where the limit has stabilised.  Needs dim G <= 1.
    """
    s = G.s
    p = G.A.p
    subsets = {k: list(combinations(range(s), k)) for k in range(s + 1)}
    tors = {T: _Torsion(G, T, budget) for k in range(1, s + 1) for T in subsets[k]}
    start = max((t.stable_from() for t in tors.values()), default=0)
    # K with n + K|T| >= start for every n >= lo
    K = max(0, start - lo)

    def piece(T, n):
        if not T:
            d = G.dim(n)
            eye = np.eye(d, dtype=np.int64)
            return n, eye, eye
        N = n + K * len(T)
        pr, lf = tors[T].quotient(N)
        return N, pr, lf

    def dmap(k, n):
        """C^k_n -> C^{k+1}_n."""
        src = subsets[k]
        tgt = subsets[k + 1] if k + 1 <= s else []
        sp = [piece(T, n) for T in src]
        tp = [piece(T, n) for T in tgt]
        rows = sum(x[1].shape[0] for x in tp)
        cols = sum(x[1].shape[0] for x in sp)
        m = np.zeros((rows, cols), dtype=np.int64)
        c0 = 0
        for T, (N, pr, lf) in zip(src, sp):
            w = pr.shape[0]
            r0 = 0
            for T2, (N2, pr2, lf2) in zip(tgt, tp):
                h = pr2.shape[0]
                extra = [l for l in T2 if l not in T]
                if len(extra) == 1 and set(T) <= set(T2) and w and h:
                    l = extra[0]
                    b = tuple(K if j == l else 0 for j in range(s))
                    sign = -1 if sum(1 for t in T if t < l) % 2 else 1
                    blk = (pr2 @ G.mono(b, N) @ lf) % p
                    m[r0 : r0 + h, c0 : c0 + w] = (sign * blk) % p
                r0 += h
            c0 += w
        return m

    def cdim(k, n):
        return sum(piece(T, n)[1].shape[0] for T in subsets[k])

    coh: dict = {i: {} for i in range(s + 1)}
    hi = lo + 2 * margin + G.D + 2
    n = lo
    last_nonzero = {i: None for i in range(s + 1)}
    ranks: dict = {}

    def rk(k, n):
        if k < 0 or k >= s:
            return 0
        key = (k, n)
        if key not in ranks:
            m = dmap(k, n)
            ranks[key] = modp.rank(m, p) if m.size else 0
        return ranks[key]

    while n <= hi:
        for i in range(s + 1):
            h = cdim(i, n) - rk(i, n) - rk(i - 1, n)
            coh[i][n] = h
            if h:
                last_nonzero[i] = n
        top = max((v for v in last_nonzero.values() if v is not None), default=lo)
        if n == hi and hi - top < margin:
            if hi - lo > budget:
                raise InconclusiveCohomology("cohomology does not vanish within the budget", {"top": top})
            hi += margin
        n += 1
    ends = {}
    for i in range(s + 1):
        v = last_nonzero[i]
        if v is None:
            ends[i] = NEG_INFINITY
        elif v == lo and i >= 1:
            # nonzero at the lower edge: the end is still correct as long as later degrees vanish
            ends[i] = v
        else:
            ends[i] = v
    return RegReport(ends, _reg_from_ends(ends), "cech", coh, margin)


def local_cohomology_ends(G: AssocGraded, margin: int = CECH_MARGIN, method: str = "auto") -> RegReport:
    """Ends a_i and regularity; 'auto' runs the k[Y] resolution and, for dim <= 1, Cech as a cross-check."""
    if method == "cech":
        return cech_cohomology(G, margin)
    rep = regularity_restriction(G)
    if method == "auto" and G_dimension(G) <= 1:
        try:
            ce = cech_cohomology(G, margin)
            rep.cohomology = ce.cohomology
            rep.margin = ce.margin
            if ce.reg != rep.reg or any(ce.ends.get(i, NEG_INFINITY) != v for i, v in rep.ends.items()):
                rep.flags.append(f"cech ends {ce.to_json()['ends']} disagree with {rep.to_json()['ends']}")
            rep.method = "betti+cech"
        except InconclusiveCohomology as exc:
            rep.flags.append(f"cech inconclusive: {exc}")
    return rep


def G_dimension(G: AssocGraded) -> int:
    """Krull dimension of G (= dim M)."""
    return G.M.dimension()


def regularity(M: ModulePresentation, I: IdealData, method: str = "auto") -> RegReport:
    if M.rank == 0 or M.is_zero():
        return RegReport({0: NEG_INFINITY}, NEG_INFINITY, "zero")
    return local_cohomology_ends(assoc_graded(M, I), method=method)


# -- Ratliff-Rush closure -------------------------------------------------------------------


def _colon_kernel_dim(M: ModulePresentation, I: IdealData, total: int, k: int) -> int:
    """dim of {q in M/I^total M : I^k q = 0}.

    Built as K_j = {q : I q in K_{j-1}} with K_0 = 0, one degree block at a time,
    so only the generators of I itself are multiplied.
    """
    N = GradedQuotient(M.modulo(I, total))
    p = N.p
    P = M.A.P
    gd = [(g, pdeg(g, P)) for g in I.gens]
    prev: dict = {d: np.zeros((N.dim(d), 0), dtype=np.int64) for d in N.blocks}
    for _ in range(k):
        cur = {}
        for d in N.blocks:
            parts = []
            for g, dg in gd:
                t = d + dg
                if not N.dim(t):
                    continue
                proj, _lift = modp.complement_projection(prev[t], N.dim(t), p)
                if proj.shape[0]:
                    parts.append((proj @ N.mult(g, d, t)) % p)
            if parts:
                cur[d] = modp.nullspace(np.vstack(parts), p)
            else:
                cur[d] = np.eye(N.dim(d), dtype=np.int64)
        prev = cur
    return sum(m.shape[1] for m in prev.values())


@dataclass
class RatliffRushChain:
    defects: dict  # n -> dim(closure of I^n M / I^n M)
    chains: dict  # n -> list of colon dimensions over k
    stabilization: dict
    end_defect: object
    end_h0: object
    n_max: int
    closures: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "defects": {str(n): v for n, v in sorted(self.defects.items())},
            "chains": {str(n): v for n, v in sorted(self.chains.items())},
            "stabilization": {str(n): v for n, v in sorted(self.stabilization.items())},
            "end_defect": fmt_degree(self.end_defect),
            "end_h0": fmt_degree(self.end_h0),
            "n_max": self.n_max,
        }


def ratliff_rush(M: ModulePresentation, I: IdealData, n_max: int = 6, patience: int = 2, k_max: int = 25, closures: bool = False) -> RatliffRushChain:
    """Colon chains (I^{n+k} M : I^k) / I^n M for each n <= n_max, stopped once
    ``patience`` consecutive steps repeat the same dimension."""
    defects, chains, stab, cl = {}, {}, {}, {}
    for n in range(1, n_max + 1):
        base = module_length(M, I, n)
        seq = []
        same = 0
        for k in range(1, k_max + 1):
            tot = module_length(M, I, n + k)
            kd = _colon_kernel_dim(M, I, n + k, k)
            val = kd - (tot - base)
            if seq and val == seq[-1]:
                same += 1
            else:
                same = 0
            seq.append(val)
            if same >= patience:
                break
        else:
            raise InconclusiveCohomology(f"colon chain for n = {n} did not settle", {"chain": seq})
        chains[n] = seq
        defects[n] = seq[-1]
        stab[n] = len(seq) - patience
        if closures:
            cl[n] = _closure_module(M, I, n, len(seq))
    nz = [n for n, v in defects.items() if v]
    end_def = max(nz) if nz else NEG_INFINITY
    end_h0 = end_def - 1 if nz else NEG_INFINITY
    return RatliffRushChain(defects, chains, stab, end_def, end_h0, n_max, cl)


def _closure_module(M: ModulePresentation, I: IdealData, n: int, k: int) -> FreeSubmodule:
    """Generators of (I^{n+k} M : I^k) as a submodule of P^r."""
    Q = M.modulo(I, n + k)
    p = Q.p
    gens = I.power_gens(k)
    big = np.vstack([Q.poly_matrix(g) for g in gens]) % p
    ker = modp.nullspace(big, p)
    vecs = [Q.vector(ker[:, j]) for j in range(ker.shape[1])]
    base = list(M.relations) + M.A.fcols(M.rank) + I.module_power(n + k, M.rank)
    return FreeSubmodule(M.A.P, M.rank, vecs + base, M.gen_degrees)


# -- superficial elements ------------------------------------------------------------------------


def superficial_defects(x: dict, M: ModulePresentation, I: IdealData, window: tuple = (1, 6)) -> dict:
    """n -> l((I^{n+1} M : x) / I^n M) for n in the window."""
    out = {}
    dx = pdeg(x, M.A.P)
    for n in range(window[0], window[1] + 1):
        Q = M.modulo(I, n + 1)
        N = GradedQuotient(Q)
        p = Q.p
        ker = 0
        for d in N.blocks:
            if N.dim(d + dx):
                ker += N.dim(d) - modp.rank(N.mult(x, d, d + dx), p)
            else:
                ker += N.dim(d)
        graded = module_length(M, I, n + 1) - module_length(M, I, n)
        out[n] = ker - graded
    return out


def is_superficial(x: dict, I: IdealData, modules: Sequence[ModulePresentation], window: tuple = (1, 6)) -> bool:
    return all(not any(superficial_defects(x, M, I, window).values()) for M in modules)


@dataclass
class SuperficialResult:
    x: dict
    transcript: list
    seed: int

    def to_json(self, P) -> dict:
        return {"x": P.fmt(self.x), "transcript": self.transcript, "seed": self.seed}


def find_superficial(I: IdealData, modules: Sequence[ModulePresentation], window: tuple = (1, 6), seed: int = 0, retries: int = 20) -> SuperficialResult:
    """Random combinations of the generators of I of one degree, lowest degree first."""
    A = I.A
    p = A.p
    rng = random.Random(seed)
    groups: dict = {}
    for g, d in zip(I.gens, I.degs):
        groups.setdefault(d, []).append(g)
    transcript = []
    for d in sorted(groups):
        gs = groups[d]
        for _ in range(retries):
            coeffs = [rng.randrange(1, p) for _ in gs]
            x: dict = {}
            for c, g in zip(coeffs, gs):
                x = padd(x, pscale(g, c, p), p)
            if not x:
                continue
            ok = is_superficial(x, I, modules, window)
            transcript.append({"degree": d, "x": A.P.fmt(x), "accepted": ok})
            if ok:
                return SuperficialResult(x, transcript, seed)
    raise GenericityFailure(f"no superficial element found (seed {seed})", seeds=[seed])


# -- the power-ideal bound for end H^0 ----------------------------------------------------------


@dataclass
class PowerBoundReport:
    skipped: bool
    reason: str = ""
    b: object = None
    m: int | None = None
    t: object = None
    lhs: object = None
    bound: object = None
    holds: bool = True

    def to_json(self) -> dict:
        return {
            "skipped": self.skipped,
            "reason": self.reason,
            "b": fmt_degree(self.b) if self.b is not None else None,
            "m": self.m,
            "t": fmt_degree(self.t) if self.t is not None else None,
            "end_h0": fmt_degree(self.lhs) if self.lhs is not None else None,
            "bound": fmt_degree(self.bound) if self.bound is not None else None,
            "holds": self.holds,
        }


def end_h0_via_power(M: ModulePresentation, I: IdealData, x: dict, m: int | None = None, n_max: int = 6) -> PowerBoundReport:
    """end H^0(L^I(M)) <= m(t + 2) - 1 with b = end H^0(L^I(M/xM)), m > b and t = end H^0(L^{I^m}(M)).

    t = -inf is treated as t = -1 (all closures of powers of I^m trivial).
    """
    if M.dimension() < 2:
        return PowerBoundReport(True, "needs dim M >= 2")
    N = M.mod_element(x)
    b = ratliff_rush(N, I, n_max).end_h0
    if m is None:
        m = max(int(b) + 1 if b != NEG_INFINITY else 0, 2)
    if b != NEG_INFINITY and m <= b:
        return PowerBoundReport(True, f"m = {m} is not larger than b = {b}", b, m)
    Im = IdealData(I.A, I.power_gens(m), f"({I.name})^{m}")
    t = ratliff_rush(M, Im, max(2, n_max // m + 1)).end_h0
    lhs = ratliff_rush(M, I, n_max).end_h0
    teff = -1 if t == NEG_INFINITY else int(t)
    bound = m * (teff + 2) - 1
    return PowerBoundReport(False, "", b, m, t, lhs, bound, lhs <= bound)


# -- the sweep over syzygies -------------------------------------------------------------------------


@dataclass
class SweepReport:
    regs: list
    verdict: str
    hypotheses: dict
    reports: list

    def to_json(self) -> dict:
        return {
            "reg": [fmt_degree(v) for v in self.regs],
            "verdict": self.verdict,
            "hypotheses": self.hypotheses,
            "ends": [r.to_json()["ends"] for r in self.reports],
            "flags": [f for r in self.reports for f in r.flags],
        }


def sweep_verdict(regs: Sequence) -> str:
    """BOUNDED when the maximum is reached by i <= 2 and the tail repeats with period <= 2."""
    if len(regs) < 5:
        return "TOO_SHORT"
    head = max(regs[:3])
    ok = max(regs) <= head and list(regs[-2:]) == list(regs[-4:-2])
    return "BOUNDED" if ok else "UNSETTLED"


def reg_syzygy_sweep(M: ModulePresentation, I: IdealData, i_max: int = 6, hypotheses: dict | None = None, method: str = "betti") -> SweepReport:
    """reg G_I(Omega^i M) for 0 <= i <= i_max."""
    res = minimal_resolution(M, i_max + 1)
    regs, reps = [], []
    for i in range(i_max + 1):
        Om = syzygy(M, i, res) if i else M.minimalized()
        rep = regularity(Om, I, method=method)
        regs.append(rep.reg)
        reps.append(rep)
    if hypotheses is None:
        hypotheses = sweep_hypotheses(M, I)
    return SweepReport(regs, sweep_verdict(regs), hypotheses, reps)


def sweep_hypotheses(M: ModulePresentation, I: IdealData, var_nmax: int = 4) -> dict:
    """Which of the boundedness hypotheses hold for (M, I)."""
    from .asymptotics import r_invariants
    from .operators import (
        ideal_dimension,
        power_varieties,
        stable_ideal_variety,
        support_variety,
        total_ideal_variety,
        variety_meets_trivially,
    )

    out = {}
    r = r_invariants(M, I, strict=False).r
    out["r_neg_inf"] = r == NEG_INFINITY
    if M.A.c:
        vs = power_varieties(I, var_nmax)
        vinf = stable_ideal_variety(I, var_nmax, varieties=vs)
        vtot = total_ideal_variety(I, var_nmax, varieties=vs)
        vm = support_variety(M)
        out["dim_vinf"] = vinf.dimension
        out["dim_vinf_le_1"] = vinf.dimension <= 1
        out["dim_meet_vinf"] = ideal_dimension(vm.S, list(vinf.gens) + list(vm.gens))
        out["meets_vtot_trivially"] = variety_meets_trivially(vm.S, vtot.gens, vm.gens)
    else:
        out["dim_vinf"] = 0
        out["dim_vinf_le_1"] = True
        out["dim_meet_vinf"] = 0
        out["meets_vtot_trivially"] = True
    out["applies"] = out["r_neg_inf"] or out["dim_vinf_le_1"] or out["dim_meet_vinf"] <= 1 or out["meets_vtot_trivially"]
    return out
