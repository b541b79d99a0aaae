from __future__ import annotations

import pytest

from cicalc.fixtures import A1, A2, M1, M2, family_ideal, ideal
from cicalc.poly import PolyRing
from cicalc.resolve import free_module, residue_field


@pytest.fixture(scope="session")
def P2():
    return PolyRing(["x", "z"], 101)


@pytest.fixture(scope="session")
def a1():
    return A1()


@pytest.fixture(scope="session")
def a2():
    return A2()


@pytest.fixture(scope="session")
def m1_mod(a1):
    return M1(a1)


@pytest.fixture(scope="session")
def m2_mod(a2):
    return M2(a2)


@pytest.fixture(scope="session")
def free1(a1):
    return free_module(a1)


@pytest.fixture(scope="session")
def free2(a2):
    return free_module(a2)


@pytest.fixture(scope="session")
def k1(a1):
    return residue_field(a1)


@pytest.fixture(scope="session")
def k2(a2):
    return residue_field(a2)


@pytest.fixture(scope="session")
def m1(a1):
    return family_ideal(a1, "maximal")


@pytest.fixture(scope="session")
def j1(a1):
    return family_ideal(a1, "parameter")


@pytest.fixture(scope="session")
def m2(a2):
    return family_ideal(a2, "maximal")


@pytest.fixture(scope="session")
def x2(a2):
    return ideal(a2, "x")
