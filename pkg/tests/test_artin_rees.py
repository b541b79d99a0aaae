from __future__ import annotations

import pytest

from cicalc.artin_rees import containment_holds, filtration_graded, strong_ar_exponent, syzygy_filtration, verify_ar
from cicalc.poly import vec_from_polys
from cicalc.resolve import free_module, minimal_resolution, perturbed_resolution, residue_field, syzygy


def test_filtration_m1_maximal(m1_mod, m1, a1):
    filt = syzygy_filtration(m1_mod, m1, 1, 6)
    P = a1.P
    # oracle: m1^n ∩ (z) = (x^{n-1} z) modulo z^2
    for n in range(1, 7):
        piece = filt.pieces[n]
        assert piece.contains(vec_from_polys([P.parse(f"x^{n - 1}*z")]))
        if n > 1:
            assert not piece.contains(vec_from_polys([P.parse(f"x^{n - 2}*z")]))
    assert filt.checks == {"decreasing": True, "ideal_times": True}


def test_filtration_free_module(free1, m1):
    filt = syzygy_filtration(free1, m1, 1, 4)
    assert filt.image == []
    assert filt.graded_lengths == [0] * 4


def test_filtration_m1_parameter(m1_mod, j1, a1):
    filt = syzygy_filtration(m1_mod, j1, 1, 6)
    P = a1.P
    for n in range(7):
        assert filt.pieces[n].contains(vec_from_polys([P.parse(f"x^{n}*z")]))
        if n:
            assert not filt.pieces[n].contains(vec_from_polys([P.parse(f"x^{n - 1}*z")]))
    assert filt.stable_from == 0


def test_level_zero_rejected(m1_mod, m1):
    with pytest.raises(ValueError):
        syzygy_filtration(m1_mod, m1, 0)


def test_strong_ar_examples(m1_mod, m1, j1, free1):
    rep = strong_ar_exponent(m1_mod, j1, 4, 6)
    assert rep.h == 0
    assert verify_ar(m1_mod, j1, 1, 4, 6)["holds"]
    assert strong_ar_exponent(free1, m1, 4, 6).h == 0
    rep2 = strong_ar_exponent(m1_mod, m1, 4, 6)
    assert rep2.h == 1 and all(lv.bound_ok for lv in rep2.levels)
    assert verify_ar(m1_mod, m1, rep2.h, 4, 6)["holds"]


def test_minimality_witness(m1_mod, m1):
    assert not verify_ar(m1_mod, m1, 0, 4, 6)["holds"]


def test_vacuous_window(m1_mod, m1):
    out = verify_ar(m1_mod, m1, 6, 2, 6)
    assert out["vacuous"] and out["holds"]


def test_containment_always_holds(m2_mod, m2, k2):
    for M in (m2_mod, syzygy(k2, 1)):
        res = minimal_resolution(M, 3)
        for i in (1, 2, 3):
            assert containment_holds(syzygy_filtration(M, m2, i, 4, res), m2)


def test_additivity_of_graded_filtration(m2_mod, m2):
    res = minimal_resolution(m2_mod, 2)
    filt = syzygy_filtration(m2_mod, m2, 2, 5, res)
    GH, GF, GM = filtration_graded(m2_mod, m2, filt)
    hs = GH.hilbert_series()
    for n in range(5):
        assert hs.value(n) == GF.dim(n) - GM.dim(n) == filt.graded_lengths[n]


def test_independent_of_resolution(m2_mod, m2):
    res = minimal_resolution(m2_mod, 3)
    other = minimal_resolution(perturbed_resolution(res, 5).module, 3)
    a = strong_ar_exponent(m2_mod, m2, 3, 5, res=res, with_reg=False).h_values
    b = strong_ar_exponent(other.module, m2, 3, 5, res=other, with_reg=False).h_values
    assert a == b


def test_report_json(m1_mod, m1):
    js = strong_ar_exponent(m1_mod, m1, 2, 5).to_json()
    assert js["h"] == 1 and set(js["h_levels"]) == {"1", "2"}
