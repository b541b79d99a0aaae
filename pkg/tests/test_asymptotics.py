from __future__ import annotations

import pytest

from cicalc import modp
from cicalc.asymptotics import (
    check_equivalences,
    ext_length_table,
    fit_psi,
    oracle_tables,
    psi_report,
    psi_superficial_descent,
    psi_under_modx,
    r_invariants,
    tor_length_table,
    LengthTable,
)
from cicalc.errors import InconclusiveFit, TheoremViolation
from cicalc.fit import NEG_INFINITY
from cicalc.operators import operator_ring, radical_contains, support_variety
from cicalc.resolve import minimal_resolution, syzygy
from cicalc.ring import QuotientSpace


def z_homology(I, n):
    """dim ker(z) - dim im(z) on A1/I^n, which is Ext^i(M1, A1/I^n) for every i >= 1."""
    Q = QuotientSpace(I.lift(n))
    z = I.A.P.parse("z")
    r = modp.rank(Q.poly_matrix(z), 101)
    return Q.dim - 2 * r


def test_ext_table_m1_maximal(m1_mod, m1):
    t = ext_length_table(m1_mod, m1, 5, 6)
    assert t.cells == [[1] * 6] * 5
    assert [z_homology(m1, n) for n in range(1, 7)] == [1] * 6


def test_ext_table_m1_parameter(m1_mod, j1):
    t = ext_length_table(m1_mod, j1, 5, 6)
    assert t.is_zero()
    assert [z_homology(j1, n) for n in range(1, 7)] == [0] * 6


def test_ext_table_free(free1, m1, j1):
    for I in (m1, j1):
        assert ext_length_table(free1, I, 4, 5).is_zero()


def test_ext_table_needs_m_primary(m2_mod, a2):
    from cicalc.fixtures import ideal

    with pytest.raises(ValueError):
        ext_length_table(m2_mod, ideal(a2, "z1"), 2, 2)


def test_ext_table_cutoff_guard(m1_mod, m1):
    res = minimal_resolution(m1_mod, 3)
    with pytest.raises(ValueError):
        ext_length_table(m1_mod, m1, 5, 3, res=res)


def test_csv_format():
    t = LengthTable([[1, 2], [0, 0]], 2, 2)
    assert t.to_csv() == "i\\n,1,2\n1,1,2\n2,0,0\n"


def test_fit_psi_examples():
    assert fit_psi([1] * 6) == 0
    assert fit_psi([0] * 6) == NEG_INFINITY
    assert fit_psi([1, 3, 5, 7, 9, 11]) == 1
    assert fit_psi([5, 0, 0, 0, 0]) == NEG_INFINITY
    with pytest.raises(InconclusiveFit):
        fit_psi([1, 2, 4, 8, 16, 32])


def test_r_invariants_examples(m1_mod, j1, m1, free1):
    rep = r_invariants(m1_mod, m1)
    assert set(rep.psi.values()) == {0}
    assert (rep.r0, rep.r1, rep.r) == (0, 0, 0)
    assert r_invariants(m1_mod, j1).r == NEG_INFINITY
    assert r_invariants(free1, m1).r == NEG_INFINITY


def test_psi_json_uses_sentinel(m1_mod, j1):
    js = r_invariants(m1_mod, j1).to_json()
    assert js["r"] == "-inf" and set(js) == {"psi", "r0", "r1", "r", "windows", "flags"}


def test_non_constant_tail_is_an_alarm():
    cells = [[1] * 6 if i % 2 else [0] * 6 for i in range(9)]
    cells[7] = [0] * 6
    t = LengthTable(cells, 9, 6)
    with pytest.raises(TheoremViolation):
        psi_report(t)
    assert psi_report(t, strict=False).violation


def test_equivalence_examples(m1_mod, j1, m1, free1):
    assert set(check_equivalences(m1_mod, j1).conditions.values()) == {True}
    assert set(check_equivalences(m1_mod, m1).conditions.values()) == {False}
    assert set(check_equivalences(free1, m1).conditions.values()) == {True}


def test_psi_under_modx_examples(m1_mod, m1, free1, m2_mod, m2, a1, a2):
    x1, x2 = a1.P.parse("x"), a2.P.parse("x")
    r = psi_under_modx(m1_mod, m1, x1, 9, 6)
    assert r.holds and r.r_equal and set(r.psi_Mx.values()) == {0}
    f = psi_under_modx(free1, m1, x1, 9, 6)
    assert f.holds and set(f.psi_Mx.values()) == {NEG_INFINITY}
    assert psi_under_modx(m2_mod, m2, x2, 9, 6).holds


def test_superficial_descent_examples(m1_mod, j1, free1, m1, a1):
    x = a1.P.parse("x")
    d = psi_superficial_descent(m1_mod, j1, x, 6, 6)
    assert not d.skipped and d.r_B == NEG_INFINITY and d.holds
    assert psi_superficial_descent(free1, m1, x, 6, 6).holds
    assert psi_superficial_descent(m1_mod, m1, x, 6, 6).skipped


def test_oracle_tables_agree(m2_mod, m2):
    tabs = oracle_tables(m2_mod, m2, 5, 4)
    base = tabs["minimal"].cells
    assert all(t.cells == base for t in tabs.values())


@pytest.mark.parametrize("which", ["m1", "j1"])
def test_dimension_shift_along_syzygy(request, m1_mod, k1, which):
    I = request.getfixturevalue(which)
    for M in (m1_mod, k1):
        big = ext_length_table(M, I, 6, 5)
        small = ext_length_table(syzygy(M, 1), I, 5, 5)
        for i in range(2, 7):
            assert big.row(i) == small.row(i - 1)


def test_tor_vanishes_for_parameter_ideal(m1_mod, j1):
    assert tor_length_table(m1_mod, j1, 4, 4).is_zero()


def test_smaller_variety_gives_smaller_r(a2, m2, m2_mod, k2):
    big = syzygy(k2, 1)
    S = operator_ring(2, 101)
    vm, vn = support_variety(big), support_variety(m2_mod)
    # V(M2) inside V(Omega k): J(Omega k) is in rad J(M2)
    assert all(radical_contains(S, vn.gens, g) for g in vm.gens)
    assert r_invariants(m2_mod, m2, strict=False).r <= r_invariants(big, m2, strict=False).r
