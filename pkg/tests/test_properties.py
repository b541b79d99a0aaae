"""Randomised invariants: Groebner/normal forms, resolutions, operators, length tables."""
from __future__ import annotations

import itertools

from hypothesis import HealthCheck, given, settings, strategies as st

from cicalc.artin_rees import containment_holds, syzygy_filtration
from cicalc.asymptotics import ext_length_table, oracle_tables
from cicalc.fixtures import A1, A2, family_ideal
from cicalc.operators import eisenbud_operators, ext_k_module
from cicalc.poly import (
    FreeSubmodule,
    PolyRing,
    TermOrder,
    colon,
    hilbert_series,
    intersect,
    normal_form,
    syzygies,
    vadd,
    vec_from_polys,
    vmul_poly,
)
from cicalc.resolve import cyclic_module, minimal_resolution, syzygy

P3 = PolyRing(["a", "b", "c"], 101)
RINGS = {"A1": A1(), "A2": A2()}
SETTINGS = settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.too_slow])


@st.composite
def hom_poly(draw, P=P3, lo=1, hi=3):
    d = draw(st.integers(lo, hi))
    monos = P.monomials(d)
    picks = draw(st.lists(st.integers(0, len(monos) - 1), min_size=1, max_size=3))
    out = {monos[i]: draw(st.integers(1, 100)) for i in picks}
    return out


def gens_ideal(polys):
    return FreeSubmodule.ideal(P3, polys)


@SETTINGS
@given(st.lists(hom_poly(), min_size=1, max_size=3), hom_poly(lo=0, hi=4))
def test_normal_form_is_idempotent_and_decides_membership(gens, f):
    U = gens_ideal(gens)
    r = normal_form(f, U)
    assert normal_form(r, U) == r
    diff = vadd(vec_from_polys([f]), vec_from_polys([{e: (-c) % 101 for e, c in r.items()}]), 101)
    assert not diff or U.contains(diff)
    assert (r == {}) == U.contains(vec_from_polys([f]))


@SETTINGS
@given(st.lists(hom_poly(), min_size=1, max_size=3), hom_poly(lo=1, hi=4))
def test_membership_does_not_depend_on_order(gens, f):
    U = gens_ideal(gens)
    v = vec_from_polys([f])
    assert U.contains(v) == U.contains(v, TermOrder("lex"))


@SETTINGS
@given(st.lists(hom_poly(), min_size=1, max_size=4))
def test_syzygies_compose_to_zero(gens):
    U = gens_ideal(gens)
    for s in syzygies(U).gens:
        tot = {}
        for (j, e), c in s.items():
            tot = vadd(tot, vmul_poly(U.gens[j], {e: c}, 101), 101)
        assert tot == {}


@SETTINGS
@given(st.lists(hom_poly(), min_size=1, max_size=2), st.lists(hom_poly(), min_size=1, max_size=2), hom_poly(hi=2))
def test_intersection_and_colon_containments(g1, g2, g):
    U, V = gens_ideal(g1), gens_ideal(g2)
    W = intersect(U, V)
    assert all(U.contains(w) and V.contains(w) for w in W.gens)
    C = colon(U, g)
    assert all(U.contains(vmul_poly(v, g, 101)) for v in C.gens)
    assert all(C.contains(u) for u in U.gens)


@SETTINGS
@given(st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=4))
def test_hilbert_series_counts_monomials(exps):
    exps = [e for e in exps if sum(e)] or [(1, 0, 0)]
    U = FreeSubmodule.ideal(P3, [{e: 1} for e in exps])
    hs = hilbert_series(U)
    for d in range(9):
        brute = sum(
            1
            for m in itertools.product(range(d + 1), repeat=3)
            if sum(m) == d and not any(all(a >= b for a, b in zip(m, e)) for e in exps)
        )
        assert hs.value(d) == brute


@st.composite
def cyclic(draw):
    name = draw(st.sampled_from(sorted(RINGS)))
    A = RINGS[name]
    k = draw(st.integers(1, 2))
    gens = [A.reduce(draw(hom_poly(A.P, 1, 2))) for _ in range(k)]
    gens = [g for g in gens if g] or [A.P.var(A.P.n - 1)]
    return cyclic_module(A, gens)


@SETTINGS
@given(cyclic())
def test_resolution_invariants(M):
    res = minimal_resolution(M, 4)
    assert res.check_complex()
    assert res.check_exact()
    assert res.check_minimal()


@SETTINGS
@given(cyclic())
def test_operator_identities(M):
    res = minimal_resolution(M, 5)
    ops = eisenbud_operators(res)
    assert ops.check_lift_identity()
    assert ops.check_chain_maps()
    assert ext_k_module(res=res, ops=ops).check_commute()


@settings(max_examples=10, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(cyclic(), st.sampled_from(["maximal", "parameter"]))
def test_ext_shifts_along_syzygies(M, kind):
    I = family_ideal(M.A, kind)
    big = ext_length_table(M, I, 4, 3)
    small = ext_length_table(syzygy(M, 1), I, 3, 3)
    for i in range(2, 5):
        assert big.row(i) == small.row(i - 1)


@settings(max_examples=8, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(cyclic(), st.sampled_from(["maximal", "parameter"]), st.integers(0, 1000))
def test_length_tables_agree_across_oracles(M, kind, seed):
    I = family_ideal(M.A, kind)
    tabs = oracle_tables(M, I, 3, 3, seed)
    base = tabs["minimal"].cells
    assert all(t.cells == base for t in tabs.values())


@settings(max_examples=8, deadline=None, suppress_health_check=[HealthCheck.too_slow])
@given(cyclic(), st.sampled_from(["maximal", "parameter", "mparameter"]))
def test_filtration_containment(M, kind):
    I = family_ideal(M.A, kind)
    filt = syzygy_filtration(M, I, 1, 3)
    assert filt.checks["decreasing"] and filt.checks["ideal_times"]
    assert containment_holds(filt, I)
