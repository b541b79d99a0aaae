from __future__ import annotations

import numpy as np
import pytest

from cicalc import modp
from cicalc.errors import DegreeError, NotFiniteLengthError, RegularSequenceError
from cicalc.fixtures import family_ideal, family_ring, ideal
from cicalc.poly import FreeSubmodule, PolyRing, pdeg, pmul
from cicalc.ring import IdealData, is_m_primary, length, make_ci_ring, quotient_length


def brute_length(A, gens, top=30):
    """sum_e dim A_e - dim (ideal)_e, spanning the ideal degreewise by monomial multiples."""
    total = 0
    for e in range(top):
        basis = A.basis(e)
        if not basis:
            break
        idx = {b: k for k, b in enumerate(basis)}
        cols = []
        for g in gens:
            dg = pdeg(g, A.P)
            if dg > e:
                continue
            for mono in A.P.monomials(e - dg):
                h = A.reduce(pmul(g, {mono: 1}, A.p))
                col = np.zeros(len(basis), dtype=np.int64)
                for t, c in h.items():
                    col[idx[t]] = c
                cols.append(col)
        r = modp.rank(np.array(cols).T, A.p) if cols else 0
        total += len(basis) - r
    return total


def test_make_ci_ring_fixtures(a1, a2):
    assert (a1.d, a1.c) == (1, 1)
    assert (a2.d, a2.c) == (1, 2)


def test_zero_divisor_sequence_rejected():
    P = PolyRing(["x", "z"], 101)
    with pytest.raises(RegularSequenceError):
        make_ci_ring(P, [P.parse("z^2"), P.parse("z^3")])


def test_linear_element_rejected():
    P = PolyRing(["x", "z"], 101)
    with pytest.raises(DegreeError):
        make_ci_ring(P, [P.parse("z")])


def test_dimension_zero_rejected():
    P = PolyRing(["z"], 101)
    with pytest.raises(DegreeError):
        make_ci_ring(P, [P.parse("z^2")])


def test_dim_plus_codim_is_ambient_dim():
    for d, c in [(1, 1), (1, 2), (2, 1), (2, 2), (1, 3)]:
        A = family_ring(d, c, [2] * c)
        assert A.d + A.c == A.P.n


def test_m_primary_examples(a1, a2, m1, j1):
    assert is_m_primary(m1)
    assert is_m_primary(j1)
    assert not is_m_primary(ideal(a2, "z1"))


def test_length_examples(a1, m1, j1):
    assert quotient_length(a1, m1, 1) == 1
    for n in range(1, 7):
        assert quotient_length(a1, m1, n) == 2 * n - 1
        assert quotient_length(a1, j1, n) == 2 * n


def test_length_positive_dimension_raises(a2):
    with pytest.raises(NotFiniteLengthError):
        length(ideal(a2, "z1").lift(1))


@pytest.mark.parametrize("kind", ["maximal", "parameter", "mparameter", "cx:1"])
def test_power_lengths_match_degreewise_count(kind):
    A = family_ring(1, 2, [2, 2])
    I = family_ideal(A, kind)
    for n in range(1, 5):
        assert quotient_length(A, I, n) == brute_length(A, I.power_gens(n))


def test_powers_decrease(a2, m2):
    I = IdealData(a2, m2.gens)
    for n in range(1, 6):
        upper = I.lift(n)
        assert all(upper.contains(v) for v in I.lift(n + 1).gens)
        prod = I.power(n).times(I)
        assert all(I.lift(n + 1).contains({(0, e): c for e, c in g.items()}) for g in prod.gens)
