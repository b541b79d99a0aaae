"""Length tables l(Ext^i(M, A/I^n)), their degrees psi_i and the invariants r0, r1, r."""
from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Sequence

from .errors import InconclusiveFit, RegularSequenceError, TheoremViolation
from .fit import NEG_INFINITY, fit_degree, fmt_degree
from .homology import quotient_of, ext_lengths, tor_lengths
from .operators import (
    power_varieties,
    stable_ideal_variety,
    support_variety,
    variety_meets_trivially,
)
from .poly import TermOrder
from .resolve import (
    FreeResolution,
    ModulePresentation,
    is_mcm,
    is_regular_element,
    free_module,
    mcm_approx,
    minimal_resolution,
    perturbed_resolution,
)
from .ring import IdealData, LinearQuotient, is_m_primary

I_MAX = 9
N_MAX = 8
BURN_N = 2
BURN_I = 3


@dataclass
class LengthTable:
    """cells[i - 1][n - 1] = l(Ext^i(M, A/I^n)) for 1 <= i <= i_max, 1 <= n <= n_max."""

    cells: list
    i_max: int
    n_max: int
    label: str = ""

    def row(self, i: int) -> list[int]:
        return list(self.cells[i - 1])

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.cells)

    def to_csv(self) -> str:
        out = io.StringIO()
        out.write("i\\n," + ",".join(str(n) for n in range(1, self.n_max + 1)) + "\n")
        for i, r in enumerate(self.cells, start=1):
            out.write(str(i) + "," + ",".join(str(v) for v in r) + "\n")
        return out.getvalue()


def _check_primary(I: IdealData):
    if not is_m_primary(I):
        raise ValueError("the ideal must be m-primary")


def ext_length_table(
    M: ModulePresentation,
    I: IdealData,
    i_max: int = I_MAX,
    n_max: int = N_MAX,
    res: FreeResolution | None = None,
    cutoff: int | None = None,
) -> LengthTable:
    A = M.A
    _check_primary(I)
    if res is None:
        res = minimal_resolution(M, cutoff or i_max + 1)
    if res.cutoff < i_max + 1:
        raise ValueError(f"i_max = {i_max} needs a resolution to degree {i_max + 1}; raise the cutoff")
    cols = []
    for n in range(1, n_max + 1):
        N = quotient_of(A, 1, [0], I.module_power(n, 1))
        cols.append(ext_lengths(res, N, i_max, 1))
    cells = [[cols[n][i] for n in range(n_max)] for i in range(i_max)]
    return LengthTable(cells, i_max, n_max, M.name)


def tor_length_table(M: ModulePresentation, I: IdealData, i_max: int = I_MAX, n_max: int = N_MAX, res=None) -> LengthTable:
    A = M.A
    if res is None:
        res = minimal_resolution(M, i_max + 1)
    cols = []
    for n in range(1, n_max + 1):
        N = quotient_of(A, 1, [0], I.module_power(n, 1))
        cols.append(tor_lengths(res, N, i_max, 1))
    return LengthTable([[cols[n][i] for n in range(n_max)] for i in range(i_max)], i_max, n_max, M.name)


def fit_psi(row: Sequence[int], burn_in: int = 0, info: dict | None = None):
    """Degree of the row as a function of n (NEG_INFINITY for an eventually zero row)."""
    return fit_degree(row, burn_in, info)


@dataclass
class PsiReport:
    psi: dict
    r0: object
    r1: object
    r: object
    windows: dict
    flags: list = field(default_factory=list)
    violation: bool = False

    def to_json(self) -> dict:
        return {
            "psi": {str(i): fmt_degree(v) for i, v in sorted(self.psi.items())},
            "r0": fmt_degree(self.r0),
            "r1": fmt_degree(self.r1),
            "r": fmt_degree(self.r),
            "windows": self.windows,
            "flags": list(self.flags),
        }


def psi_report(table: LengthTable, burn_n: int = BURN_N, burn_i: int = BURN_I, strict: bool = True) -> PsiReport:
    """psi_i for every row and the stable even/odd values r0, r1."""
    psi = {}
    starts = {}
    flags = []
    for i in range(1, table.i_max + 1):
        info: dict = {}
        try:
            psi[i] = fit_psi(table.row(i), burn_n - 1, info)
            starts[i] = info.get("start", 0) + 1
        except InconclusiveFit as exc:
            flags.append(f"row {i}: {exc}")
            if strict:
                raise
            psi[i] = None
    tails = {}
    violation = False
    for par in (0, 1):
        idx = [i for i in range(burn_i, table.i_max + 1) if i % 2 == par]
        vals = [psi[i] for i in idx]
        if len(idx) < 3:
            flags.append(f"{'even' if par == 0 else 'odd'} window shorter than 3")
        if len(set(vals)) != 1:
            violation = True
            flags.append(f"psi not constant on {'even' if par == 0 else 'odd'} indices {idx}: {[fmt_degree(v) for v in vals]}")
        tails[par] = vals[-1] if vals else NEG_INFINITY
    r0, r1 = tails[0], tails[1]
    r = max(r0, r1)
    windows = {
        "i": [burn_i, table.i_max],
        "n": [burn_n, table.n_max],
        "fit_start": {str(i): s for i, s in starts.items()},
    }
    rep = PsiReport(psi, r0, r1, r, windows, flags, violation)
    if violation and strict:
        raise TheoremViolation("; ".join(flags))
    return rep


def r_invariants(M: ModulePresentation, I: IdealData, i_max: int = I_MAX, n_max: int = N_MAX, strict: bool = True, res=None) -> PsiReport:
    return psi_report(ext_length_table(M, I, i_max, n_max, res=res), strict=strict)


# -- oracles ---------------------------------------------------------------------------


def with_order(M: ModulePresentation, I: IdealData, order: TermOrder):
    A2 = M.A.with_order(order)
    return M.with_ring(A2), IdealData(A2, I.gens, I.name)


def oracle_tables(M: ModulePresentation, I: IdealData, i_max: int = I_MAX, n_max: int = N_MAX, seed: int = 0) -> dict:
    """The length table three ways: minimal resolution, second term order, non-minimal resolution."""
    res = minimal_resolution(M, i_max + 1)
    base = ext_length_table(M, I, i_max, n_max, res=res)
    M2, I2 = with_order(M, I, TermOrder("lex"))
    lex = ext_length_table(M2, I2, i_max, n_max)
    nm = perturbed_resolution(res, seed)
    nonmin = ext_length_table(nm.module, I, i_max, n_max, res=nm)
    raw = minimal_resolution(M, i_max + 1, minimize=False)
    rawt = ext_length_table(M, I, i_max, n_max, res=raw)
    return {"minimal": base, "lex": lex, "nonminimal": nonmin, "unminimized": rawt}


# -- equivalent conditions ------------------------------------------------------------------


@dataclass
class EquivalenceReport:
    conditions: dict
    details: dict
    flags: list

    @property
    def agree(self) -> bool:
        return len(set(self.conditions.values())) == 1

    def to_json(self) -> dict:
        return {"conditions": dict(self.conditions), "agree": self.agree, "details": self.details, "flags": self.flags}


def check_equivalences(
    M: ModulePresentation,
    I: IdealData,
    i_max: int = I_MAX,
    n_max: int = N_MAX,
    var_nmax: int = 4,
    cutoff: int = 10,
    burn_n: int = BURN_N,
    burn_i: int = BURN_I,
    varieties=None,
) -> EquivalenceReport:
    """The five equivalent conditions for r = -inf, each computed on its own."""
    if not is_mcm(M):
        from .errors import NotMCMError

        raise NotMCMError("the equivalences are stated for MCM modules")
    flags = []
    res = minimal_resolution(M, max(i_max + 1, cutoff))
    table = ext_length_table(M, I, i_max, n_max, res=res)
    rep = psi_report(table, burn_n, burn_i, strict=False)
    flags.extend(rep.flags)
    c1 = rep.r == NEG_INFINITY
    # (ii) every row past i0 vanishes for n large (its own threshold)
    rows = range(burn_i, i_max + 1)
    c2 = all(_zero_from(table.row(i)) is not None for i in rows)
    # (iii) one threshold for all rows, leaving at least three vanishing columns
    thr = [_zero_from(table.row(i)) for i in rows]
    c3 = all(t is not None for t in thr) and max(thr) <= n_max - 2
    # (iv) V_inf(I) meets V(M) only at the origin
    vs = varieties or power_varieties(I, var_nmax, cutoff)
    vinf = stable_ideal_variety(I, var_nmax, varieties=vs)
    vm = support_variety(M, res=res)
    flags.extend(vinf.flags + vm.flags)
    c4 = variety_meets_trivially(vinf.S, vinf.gens, vm.gens)
    # (v) Tor_i(M, A/I^n) = 0 for i > 0 and n >= t, t the stabilization index
    t = vinf.stabilization
    tors = {}
    for n in range(t, n_max + 1):
        N = quotient_of(M.A, 1, [0], I.module_power(n, 1))
        tors[n] = tor_lengths(res, N, i_max, 1)
    c5 = all(not any(v) for v in tors.values())
    conds = {"i": c1, "ii": c2, "iii": c3, "iv": c4, "v": c5}
    details = {
        "r": fmt_degree(rep.r),
        "vinf": vinf.fingerprint(),
        "vM": vm.fingerprint(),
        "tor_from": t,
        "thresholds": [x if x is not None else None for x in thr],
    }
    return EquivalenceReport(conds, details, flags)


def _zero_from(row: Sequence[int]) -> int | None:
    """Least n (1-based) with row[n:] all zero, or None if the last entry is nonzero."""
    if row and row[-1]:
        return None
    n = len(row)
    while n > 0 and not row[n - 1]:
        n -= 1
    return n + 1


# -- behaviour under a regular element --------------------------------------------------------


@dataclass
class ModxReport:
    psi_M: dict
    psi_Mx: dict
    expected: dict
    holds: bool
    r_M: object
    r_D: object
    r_equal: bool

    def to_json(self) -> dict:
        f = lambda d: {str(i): fmt_degree(v) for i, v in sorted(d.items())}
        return {
            "psi_M": f(self.psi_M),
            "psi_M_mod_x": f(self.psi_Mx),
            "expected": f(self.expected),
            "formula_holds": self.holds,
            "r_M": fmt_degree(self.r_M),
            "r_D": fmt_degree(self.r_D),
            "r_equal": self.r_equal,
        }


def psi_under_modx(M: ModulePresentation, I: IdealData, x: dict, i_max: int = I_MAX, n_max: int = N_MAX) -> ModxReport:
    """Compare psi_i(M/xM) with max(psi_{i-1}(M), psi_i(M)) and r(D) with r(M)."""
    if not is_regular_element(free_module(M.A), x):
        raise RegularSequenceError("x is not regular on A")
    rm = psi_report(ext_length_table(M, I, i_max, n_max), strict=False)
    Mx = M.mod_element(x)
    rx = psi_report(ext_length_table(Mx, I, i_max, n_max), strict=False)
    lo = 3
    hi = min(i_max, 8)
    exp = {i: max(rm.psi[i - 1], rm.psi[i]) for i in range(lo, hi + 1)}
    got = {i: rx.psi[i] for i in range(lo, hi + 1)}
    D = mcm_approx(M, [x]).V
    rd = psi_report(ext_length_table(D, I, i_max, n_max), strict=False)
    return ModxReport(rm.psi, got, exp, got == exp, rm.r, rd.r, rm.r == rd.r)


@dataclass
class DescentReport:
    skipped: bool
    reason: str = ""
    r_A: object = None
    r_B: object = None

    @property
    def holds(self) -> bool:
        return self.skipped or self.r_B == NEG_INFINITY

    def to_json(self) -> dict:
        return {
            "skipped": self.skipped,
            "reason": self.reason,
            "r_A": fmt_degree(self.r_A) if self.r_A is not None else None,
            "r_B": fmt_degree(self.r_B) if self.r_B is not None else None,
            "holds": self.holds,
        }


def psi_superficial_descent(M: ModulePresentation, I: IdealData, x: dict, i_max: int = I_MAX, n_max: int = N_MAX) -> DescentReport:
    """If r(M) = -inf over A then r(M/xM) = -inf over A/(x) with respect to I/(x)."""
    ra = r_invariants(M, I, i_max, n_max, strict=False).r
    if ra != NEG_INFINITY:
        return DescentReport(True, "r(M) is not -inf", ra)
    LQ = LinearQuotient(M.A, x)
    B = LQ.B
    N = ModulePresentation(B, M.gen_degrees, [LQ.map_vec(v) for v in M.relations])
    J = IdealData(B, [LQ.map_poly(g) for g in I.gens])
    if N.is_zero():
        return DescentReport(False, "", ra, NEG_INFINITY)
    rb = r_invariants(N, J, i_max, n_max, strict=False).r
    return DescentReport(False, "", ra, rb)
