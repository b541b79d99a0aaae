from __future__ import annotations

from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from cicalc.errors import ParseError
from cicalc.instance import FIXTURES, InstanceSpec, build, emit_instance, fixture, parse_instance
from cicalc.poly import PolyRing

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "fixtures"


def test_shipped_files_match_builtins():
    files = sorted(FIXTURE_DIR.glob("*.cic"))
    assert {f.stem for f in files} == set(FIXTURES)
    for f in files:
        text = f.read_text()
        spec = parse_instance(text)
        assert spec == fixture(f.stem)
        assert emit_instance(spec) == text


def test_a1_fixture_builds(a1):
    b = build(fixture("a1-m1-m"))
    assert b.A.P.names == ("x", "z") and (b.A.d, b.A.c) == (1, 1)
    assert b.M.rank == 1 and len(b.I.gens) == 2


def test_family_builds_a2_with_maximal_ideal():
    b = build(parse_instance("[ring]\nfamily = 1; 2; 2, 2\n[module]\nkind = free\n[ideal]\nkind = maximal\n"))
    assert b.A.P.names == ("x", "z1", "z2")
    assert [b.A.P.fmt(g) for g in b.A.f] == ["z1^2", "z2^2"]
    assert len(b.I.gens) == 3


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("[ring\n", 1, 1),
        ("[ring]\nvars = x\nbogus = 1\n", 3, 1),
        ("[ring]\nvars = x\n[tensor]\n", 3, 1),
        ("[ring]\nvars = x\n[ring]\n", 3, 1),
        ("vars = x\n", 1, 1),
        ("[ring]\n  vars x\n", 2, 3),
        ("[ring]\nvars = x, z\nrelations = z^^2\n", 3, 15),
        ("[ring]\nvars = x, z\nrelations = z^2\n[ideal]\ngens = x, z, w\n", 5, 14),
        ("[ring]\nvars = x\n[params]\nimax = nine\n", 4, 8),
        ("[ring]\nvars = x\n[module]\nkind = sheaf\n", 4, 8),
    ],
)
def test_parse_errors_carry_location(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_instance(text)
    assert (info.value.line, info.value.col) == (line, col)


def test_semantic_errors_are_deferred():
    from cicalc.errors import RegularSequenceError

    spec = parse_instance("[ring]\nvars = x, z\nrelations = z^2, z^3\n")
    with pytest.raises(RegularSequenceError):
        build(spec)


def test_matrix_module():
    b = build(parse_instance("[ring]\nvars = x, z\nrelations = z^2\n[module]\nkind = matrix\ngen_degrees = 0, 0\nrelations = x, z; z, 0\n"))
    assert b.M.rank == 2 and len(b.M.relations) == 2


NAMES = ["x", "y", "z", "w"]


@st.composite
def specs(draw):
    n = draw(st.integers(2, 4))
    names = NAMES[:n]
    P = PolyRing(names, 101)

    def poly():
        deg = draw(st.integers(1, 3))
        monos = P.monomials(deg)
        k = draw(st.integers(1, 3))
        terms = {monos[draw(st.integers(0, len(monos) - 1))]: draw(st.integers(1, 100)) for _ in range(k)}
        return P.fmt(terms)

    spec = InstanceSpec(
        p=draw(st.sampled_from([101, 103, 32003])),
        vars=tuple(names),
        degrees=(1,) * n,
        relations=tuple(poly() for _ in range(draw(st.integers(0, 2)))),
    )
    kind = draw(st.sampled_from([None, "free", "quotient", "residue"]))
    spec.module_kind = kind
    if kind == "quotient":
        spec.module_gens = (poly(),)
    if kind is not None:
        spec.syzygy = draw(st.integers(0, 2))
    if draw(st.booleans()):
        spec.ideal_gens = tuple(poly() for _ in range(draw(st.integers(1, 3))))
    params = {}
    for key in ("imax", "nmax", "seed"):
        if draw(st.booleans()):
            params[key] = draw(st.integers(0, 50))
    spec.params = params
    return spec


@settings(max_examples=60, deadline=None)
@given(specs())
def test_emit_parse_round_trip(spec):
    text = emit_instance(spec)
    again = parse_instance(text)
    assert again == spec
    assert emit_instance(again) == text
