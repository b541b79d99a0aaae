from __future__ import annotations

import pytest

from cicalc.blowup import (
    assoc_graded,
    cech_cohomology,
    end_h0_via_power,
    find_superficial,
    is_superficial,
    ky_regularity,
    local_cohomology_ends,
    module_length,
    ratliff_rush,
    reg_syzygy_sweep,
    regularity,
    superficial_defects,
    sweep_verdict,
)
from cicalc.errors import NotFiniteLengthError
from cicalc.fit import NEG_INFINITY
from cicalc.fixtures import d2_fixtures, ideal
from cicalc.poly import colon, vec_from_polys
from cicalc.resolve import ModulePresentation, free_module


def test_graded_of_ring_at_maximal_ideal(a1, m1):
    G = assoc_graded(a1, m1)
    assert G.hilbert_function(6) == a1.hilbert().coefficients(6)
    assert G.hilbert_function(4) == [1, 2, 2, 2, 2]


def test_graded_at_parameter_ideal(a1, j1, m1_mod):
    # (k[z]/(z^2))[y]: two basis elements in every degree
    assert assoc_graded(a1, j1).hilbert_function(5) == [2] * 6
    # k[y]
    assert assoc_graded(m1_mod, j1).hilbert_function(5) == [1] * 6


def test_graded_needs_m_primary(a2):
    with pytest.raises(NotFiniteLengthError):
        assoc_graded(a2, ideal(a2, "z1"))


def test_first_fundamental_sequence(m2_mod, m2, k2):
    for M in (m2_mod, free_module(m2.A)):
        G = assoc_graded(M, m2, check=0)
        for n in range(6):
            assert G.dim(n) == module_length(M, m2, n + 1) - module_length(M, m2, n)


def test_ends_of_k_y(m1_mod, j1):
    G = assoc_graded(m1_mod, j1)
    for method in ("betti", "cech"):
        rep = local_cohomology_ends(G, method=method)
        assert rep.ends.get(1) == -1
        assert rep.reg == 0
        assert rep.ends.get(0, NEG_INFINITY) == NEG_INFINITY


def test_ring_regularity_both_paths(a1, m1):
    G = assoc_graded(a1, m1)
    rep = local_cohomology_ends(G)
    assert rep.reg == 1 and not rep.flags
    assert rep.method == "betti+cech"
    assert cech_cohomology(G).reg == 1


def test_zero_module_regularity(a1, m1):
    Z = ModulePresentation(a1, [0], [{(0, a1.P.zero_exp): 1}])
    rep = regularity(Z, m1)
    assert rep.reg == NEG_INFINITY and set(rep.ends.values()) == {NEG_INFINITY}


def test_reg_dominates_every_end(a2, m2, m2_mod, x2):
    for M, I in ((m2_mod, m2), (free_module(a2), m2), (m2_mod, x2)):
        rep = regularity(M, I)
        assert not rep.flags
        for i, a in rep.ends.items():
            if a != NEG_INFINITY:
                assert rep.reg >= a + i


def test_dimension_one_base_case(a1, m1, j1, m1_mod):
    for I in (m1, j1):
        a1_ring = regularity(free_module(a1), I).ends[1]
        assert regularity(m1_mod, I).reg <= a1_ring + 1


def test_ky_regularity_of_polynomial_ring():
    from cicalc.poly import PolyRing
    from cicalc.ring import CIRing

    S = PolyRing(["Y1", "Y2"], 101)
    A = CIRing(S, [], 2)
    rep = ky_regularity(ModulePresentation(A, [0], []), 2)
    assert rep.reg == 0 and rep.ends[2] == -2


def test_ratliff_rush_trivial_examples(a1, m1, j1, m1_mod):
    assert ratliff_rush(free_module(a1), m1).end_h0 == NEG_INFINITY
    assert ratliff_rush(m1_mod, j1).end_h0 == NEG_INFINITY


def test_ratliff_rush_nontrivial_closure(a2):
    I = ideal(a2, "x^2,x*z1,x*z2")
    ch = ratliff_rush(free_module(a2), I, 4)
    assert ch.defects[1] == 1
    assert all(ch.defects[n] == 0 for n in range(2, 5))
    assert ch.end_h0 == 0
    # oracle: z1 z2 lies in (I^2 : I) but not in I
    P = a2.P
    zz = vec_from_polys([P.parse("z1*z2")])
    assert not I.lift(1).contains(zz)
    cols = [colon(I.lift(2), g) for g in I.gens]
    assert all(c.contains(zz) for c in cols)


def test_ratliff_rush_chains_increase(a2):
    I = ideal(a2, "x^2,x*z1,x*z2")
    ch = ratliff_rush(free_module(a2), I, 3)
    for n, seq in ch.chains.items():
        assert all(a <= b for a, b in zip(seq, seq[1:]))


def test_superficial_examples(a1, m1, j1, m1_mod):
    A = free_module(a1)
    P = a1.P
    assert is_superficial(P.parse("x"), m1, [A])
    assert not is_superficial(P.parse("z"), m1, [A])
    for n in range(2, 6):
        col = colon(m1.lift(n + 1), P.parse("z"))
        assert col.contains(vec_from_polys([P.parse("z")]))
        assert not m1.lift(n).contains(vec_from_polys([P.parse("z")]))
    assert is_superficial(P.parse("x"), j1, [m1_mod])


def test_superficial_search_on_a2(a2, m2, m2_mod):
    res = find_superficial(m2, [free_module(a2), m2_mod], (1, 5), seed=0)
    x = res.x
    assert x.get((1, 0, 0), 0) != 0
    assert res.transcript[-1]["accepted"]
    again = find_superficial(m2, [free_module(a2), m2_mod], (1, 5), seed=0)
    assert again.x == x


def test_superficial_defects_vanish(a2, m2, m2_mod):
    x = find_superficial(m2, [m2_mod], (1, 5)).x
    assert set(superficial_defects(x, m2_mod, m2, (1, 5)).values()) == {0}


def test_sweep_examples(a1, m1, j1, m1_mod):
    rep = reg_syzygy_sweep(m1_mod, j1, 6)
    assert rep.hypotheses["r_neg_inf"]
    assert rep.verdict == "BOUNDED" and len(set(rep.regs)) == 1
    bad = reg_syzygy_sweep(m1_mod, m1, 6)
    assert not bad.hypotheses["r_neg_inf"]
    free = reg_syzygy_sweep(free_module(a1), m1, 6)
    assert free.regs[0] == 1 and set(free.regs[1:]) == {NEG_INFINITY}


def test_sweep_verdict():
    assert sweep_verdict([1, 2, 1, 2, 1, 2, 1]) == "BOUNDED"
    assert sweep_verdict([0, 0, 0, 1, 1, 1, 1]) == "UNSETTLED"
    assert sweep_verdict([0, 1]) == "TOO_SHORT"


def test_power_bound_on_dimension_two():
    for _name, M, I in d2_fixtures():
        x = find_superficial(I, [M], (1, 4)).x
        rep = end_h0_via_power(M, I, x, n_max=4)
        assert not rep.skipped and rep.holds
        assert rep.m > (rep.b if rep.b != NEG_INFINITY else -1)


def test_power_bound_skips_dimension_one(a1, m1):
    rep = end_h0_via_power(free_module(a1), m1, a1.P.parse("x"))
    assert rep.skipped and rep.holds


def test_regularity_is_deterministic(a2, m2, m2_mod):
    a = regularity(m2_mod, m2).to_json()
    b = regularity(m2_mod, m2).to_json()
    assert a == b
