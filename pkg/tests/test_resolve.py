from __future__ import annotations

import pytest

from cicalc.errors import ComplexityTooLowError, NotMCMError, RegularSequenceError
from cicalc.resolve import (
    ModuleMap,
    ModulePresentation,
    cone,
    cosyzygy,
    cyclic_module,
    depth,
    direct_sum,
    ext_free_module,
    free_module,
    free_summand_degrees,
    ideal_module,
    is_mcm,
    mcm_approx,
    minimal_resolution,
    perturbed_resolution,
    reduce_complexity,
    residue_field,
    stable_equivalent,
    syzygy,
)


def series_coeffs(num, den, n):
    """Coefficients of num(t) / den(t) up to t^n (den[0] == 1)."""
    out = []
    for k in range(n + 1):
        v = num[k] if k < len(num) else 0
        v -= sum(den[j] * out[k - j] for j in range(1, min(k, len(den) - 1) + 1))
        out.append(v)
    return out


def shifted(M, k):
    """M(-k): generators moved up by k."""
    return ModulePresentation(M.A, [a + k for a in M.gen_degrees], M.relations, M.name)


def stably_zero(M):
    M = M.minimalized()
    return len(free_summand_degrees(M)) == M.rank


def test_resolution_of_m1_is_z_periodic(m1_mod, a1):
    res = minimal_resolution(m1_mod, 4)
    assert res.betti == [1, 1, 1, 1, 1]
    z = a1.P.parse("z")
    for i in range(1, 5):
        col = res.diffs[i].cols[0]
        assert {e: c for (_k, e), c in col.items()} in (z, {e: (-c) % 101 for e, c in z.items()})
    assert res.check_complex() and res.check_exact() and res.check_minimal()


def test_resolution_of_free_module(free1):
    assert minimal_resolution(free1, 4).betti == [1, 0, 0, 0, 0]


def test_residue_field_of_a2_betti(k2):
    res = minimal_resolution(k2, 5)
    # oracle: Poincare series (1 + t)^3 / (1 - t^2)^2 of k over a codim 2 CI in 3 variables
    assert res.betti == series_coeffs([1, 3, 3, 1], [1, 0, -2, 0, 1], 5)
    assert res.betti[:4] == [1, 3, 5, 7]


def test_betti_numbers_are_presentation_invariant(k2):
    res = minimal_resolution(k2, 4)
    for seed in (1, 2):
        nm = perturbed_resolution(res, seed)
        assert not nm.check_minimal() or nm.betti == res.betti
        again = minimal_resolution(nm.module, 4)
        assert again.betti == res.betti
        assert again.graded_betti() == res.graded_betti()


def test_syzygy_examples(m1_mod, k1, a1, m1):
    assert syzygy(m1_mod, 0) is m1_mod
    # zA = M1(-1), so the periodicity holds up to a shift of one
    assert stable_equivalent(syzygy(m1_mod, 1), shifted(m1_mod, 1))
    om = syzygy(k1, 1)
    assert stable_equivalent(om, ideal_module(a1, m1.gens))
    assert om.hilbert_series().coefficients(5) == ideal_module(a1, m1.gens).hilbert_series().coefficients(5)


def test_depth_examples(m1_mod, k1, free2):
    assert depth(m1_mod) == 1
    assert is_mcm(m1_mod)
    assert depth(k1) == 0
    assert depth(free2) == 1


def test_cosyzygy_examples(m1_mod, m2_mod, free1, k1):
    assert stable_equivalent(cosyzygy(m1_mod), shifted(m1_mod, -1))
    assert stably_zero(cosyzygy(free1)) or cosyzygy(free1).rank == 0
    c2 = cosyzygy(m2_mod)
    assert minimal_resolution(c2, 4).betti == [1, 1, 1, 1, 1]
    assert stable_equivalent(syzygy(c2, 1), m2_mod)
    assert stable_equivalent(syzygy(cosyzygy(m1_mod), 1), m1_mod)
    with pytest.raises(NotMCMError):
        cosyzygy(k1)


def _map(M, N, images):
    return ModuleMap(M, N, images)


def test_cone_examples(m1_mod, a1):
    zero = a1.P.zero_exp
    ident = cone(_map(m1_mod, m1_mod, [{(0, zero): 1}]))
    assert ident.exact
    assert stably_zero(ident.module)
    zmap = cone(_map(m1_mod, m1_mod, [{}]))
    assert zmap.exact
    assert stable_equivalent(zmap.module, direct_sum(m1_mod, cosyzygy(m1_mod)))
    x = a1.P.parse("x")
    approx = mcm_approx(m1_mod, [x])
    assert stable_equivalent(approx.cones[0].module, approx.V)


def test_cone_rejects_non_mcm(k1):
    zero = k1.A.P.zero_exp
    with pytest.raises(NotMCMError):
        cone(_map(k1, k1, [{(0, zero): 1}]))


def test_mcm_approx_examples(m1_mod, m2_mod, free1, a1, a2):
    ap = mcm_approx(m1_mod, [a1.P.parse("x")])
    assert all(ap.checks.values())
    assert ap.depth_V == 1
    assert ap.Y.rank == 0 or ap.pd_Y <= 1
    fr = mcm_approx(free1, [a1.P.parse("x")])
    assert stably_zero(fr.V)
    ap2 = mcm_approx(m2_mod, [a2.P.parse("x")])
    assert ap2.depth_V == 1 and all(ap2.checks.values())


def test_mcm_approx_needs_regular_sequence(m1_mod, a1):
    with pytest.raises(RegularSequenceError):
        mcm_approx(m1_mod, [a1.P.parse("z")])


def test_ext_into_ring_vanishes_on_mcm(m1_mod, m2_mod):
    for M in (m1_mod, m2_mod, syzygy(residue_field(m2_mod.A), 1)):
        res = minimal_resolution(M, 3)
        assert is_mcm(M)
        assert ext_free_module(res, 1).is_zero()


def test_reduce_complexity_of_k_over_a2(k2):
    r = reduce_complexity(k2, 10, seed=0)
    assert (r.cx_M, r.cx_K) == (2, 1)
    assert r.betti_K == r.expected
    assert all(b >= 0 for b in r.betti_K)
    assert len(set(r.betti_K[1:])) == 1


def test_reduce_complexity_too_low(m2_mod):
    with pytest.raises(ComplexityTooLowError):
        reduce_complexity(m2_mod, 8)


def test_cyclic_module_names(a2):
    M = cyclic_module(a2, [a2.P.parse("z2")], "N")
    assert M.name == "N" and M.rank == 1
    assert isinstance(M, ModulePresentation)
