"""Instance files: a small sectioned format describing a ring, a module, an ideal
and run parameters.

    [ring]
    p = 101
    vars = x, z
    degrees = 1, 1
    relations = z^2

    [module]
    kind = quotient
    gens = z

    [ideal]
    gens = x, z

    [params]
    imax = 9
    nmax = 8

Lines starting with '#' are comments.  The ring may instead be given as
``family = d; c; a1, ..., ac`` (k[X, Z]/(Z^a)), and the ideal as ``kind = maximal``
(or parameter, mparameter, cx:i).  Module kinds: free, matrix, quotient, residue;
``syzygy = k`` replaces the module by its k-th syzygy.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .errors import ParseError
from .fixtures import family_ideal, family_ring
from .poly import PolyRing
from .polyparse import parse_poly
from .resolve import ModulePresentation, cyclic_module, free_module, residue_field, syzygy
from .ring import CIRing, IdealData, make_ci_ring

SECTIONS = ("ring", "module", "ideal", "params")
KEYS = {
    "ring": ("p", "vars", "degrees", "relations", "family"),
    "module": ("kind", "gen_degrees", "relations", "gens", "syzygy"),
    "ideal": ("gens", "kind"),
    "params": ("imax", "nmax", "cutoff", "seed", "x", "levels", "burn_n", "burn_i"),
}
INT_PARAMS = ("imax", "nmax", "cutoff", "seed", "levels", "burn_n", "burn_i")
MODULE_KINDS = ("free", "matrix", "quotient", "residue")


@dataclass
class InstanceSpec:
    p: int = 101
    vars: tuple = ()
    degrees: tuple = ()
    relations: tuple = ()
    family: tuple | None = None  # (d, c, (a_1, ..., a_c))
    module_kind: str | None = None
    gen_degrees: tuple = ()
    module_relations: tuple = ()  # tuple of tuples of entry strings
    module_gens: tuple = ()
    syzygy: int = 0
    ideal_gens: tuple = ()
    ideal_kind: str | None = None
    params: dict = field(default_factory=dict)


def _split(s: str, sep: str = ",") -> tuple:
    s = s.strip()
    if not s:
        return ()
    return tuple(t.strip() for t in s.split(sep))


def _int(v: str, line: int, col: int) -> int:
    try:
        return int(v)
    except ValueError:
        raise ParseError(f"expected an integer, got {v!r}", line, col) from None


def _ints(v: str, line: int, col: int) -> tuple:
    return tuple(_int(t, line, col) for t in _split(v))


def parse_instance(text: str) -> InstanceSpec:
    raw: dict = {}
    where: dict = {}
    lines: dict = {}
    section = None
    for ln, line in enumerate(text.splitlines(), start=1):
        body = line.strip()
        if not body or body.startswith("#"):
            continue
        col = len(line) - len(line.lstrip()) + 1
        if body.startswith("["):
            if not body.endswith("]"):
                raise ParseError("unterminated section header", ln, col)
            name = body[1:-1].strip()
            if name not in SECTIONS:
                raise ParseError(f"unknown section [{name}]", ln, col)
            if name in raw:
                raise ParseError(f"section [{name}] repeated", ln, col)
            raw[name] = {}
            section = name
            continue
        if section is None:
            raise ParseError("key outside of any section", ln, col)
        if "=" not in body:
            raise ParseError("expected 'key = value'", ln, col)
        key, val = body.split("=", 1)
        key = key.strip()
        if key not in KEYS[section]:
            raise ParseError(f"unknown key {key!r} in [{section}]", ln, col)
        if key in raw[section]:
            raise ParseError(f"key {key!r} repeated", ln, col)
        raw[section][key] = val.strip()
        eq = line.index("=") + 1
        where[(section, key)] = (ln, eq + len(line[eq:]) - len(line[eq:].lstrip()) + 1)
        lines[(section, key)] = (ln, line)
    if "ring" not in raw:
        raise ParseError("missing [ring] section", 1, 1)

    def pos(sec, key):
        return where.get((sec, key), (1, 1))

    spec = InstanceSpec()
    ring = raw["ring"]
    if "p" in ring:
        spec.p = _int(ring["p"], *pos("ring", "p"))
    if "family" in ring:
        if any(k in ring for k in ("vars", "degrees", "relations")):
            raise ParseError("family excludes vars/degrees/relations", *pos("ring", "family"))
        parts = _split(ring["family"], ";")
        if len(parts) != 3:
            raise ParseError("family = d; c; a1, ..., ac", *pos("ring", "family"))
        ln, col = pos("ring", "family")
        spec.family = (_int(parts[0], ln, col), _int(parts[1], ln, col), _ints(parts[2], ln, col))
    else:
        if "vars" not in ring:
            raise ParseError("[ring] needs vars or family", *pos("ring", "p"))
        spec.vars = _split(ring["vars"])
        spec.degrees = _ints(ring["degrees"], *pos("ring", "degrees")) if "degrees" in ring else tuple(1 for _ in spec.vars)
        if len(spec.degrees) != len(spec.vars):
            raise ParseError("degrees and vars differ in length", *pos("ring", "degrees"))
        spec.relations = _split(ring.get("relations", ""))
    mod = raw.get("module")
    if mod is not None:
        kind = mod.get("kind", "free")
        if kind not in MODULE_KINDS:
            raise ParseError(f"unknown module kind {kind!r}", *pos("module", "kind"))
        spec.module_kind = kind
        if "gen_degrees" in mod:
            spec.gen_degrees = _ints(mod["gen_degrees"], *pos("module", "gen_degrees"))
        if "relations" in mod:
            spec.module_relations = tuple(_split(r) for r in _split(mod["relations"], ";"))
        if "gens" in mod:
            spec.module_gens = _split(mod["gens"])
        if "syzygy" in mod:
            spec.syzygy = _int(mod["syzygy"], *pos("module", "syzygy"))
        if kind == "matrix" and not spec.gen_degrees:
            raise ParseError("matrix modules need gen_degrees", *pos("module", "kind"))
        if kind == "quotient" and not spec.module_gens:
            raise ParseError("quotient modules need gens", *pos("module", "kind"))
    idl = raw.get("ideal")
    if idl is not None:
        if "gens" in idl and "kind" in idl:
            raise ParseError("give ideal gens or kind, not both", *pos("ideal", "kind"))
        if "gens" in idl:
            spec.ideal_gens = _split(idl["gens"])
        elif "kind" in idl:
            spec.ideal_kind = idl["kind"]
        else:
            raise ParseError("[ideal] needs gens or kind", *pos("ideal", "gens"))
    for k, v in raw.get("params", {}).items():
        spec.params[k] = _int(v, *pos("params", k)) if k in INT_PARAMS else v
    _check_polys(spec, lines)
    return spec


def _var_names(spec: InstanceSpec) -> list[str]:
    if spec.family is None:
        return list(spec.vars)
    d, c, _a = spec.family
    xs = ["x"] if d == 1 else [f"x{i + 1}" for i in range(d)]
    zs = ["z"] if c == 1 else [f"z{j + 1}" for j in range(c)]
    return xs + zs


def _check_polys(spec: InstanceSpec, lines: dict):
    """Syntax-check every polynomial where it stands in the file."""
    try:
        ring = PolyRing(_var_names(spec), 101)
    except ValueError:
        return
    for (sec, key), (ln, text) in lines.items():
        if (sec, key) not in (("ring", "relations"), ("module", "gens"), ("module", "relations"), ("ideal", "gens"), ("params", "x")):
            continue
        start = text.index("=") + 1
        for item in text[start:].replace(";", ",").split(","):
            if item.strip():
                parse_poly(item, ring, ln, start)
            start += len(item) + 1


def emit_instance(spec: InstanceSpec) -> str:
    out = ["[ring]", f"p = {spec.p}"]
    if spec.family is not None:
        d, c, a = spec.family
        out.append(f"family = {d}; {c}; {', '.join(str(x) for x in a)}")
    else:
        out.append("vars = " + ", ".join(spec.vars))
        out.append("degrees = " + ", ".join(str(x) for x in spec.degrees))
        out.append("relations = " + ", ".join(spec.relations))
    if spec.module_kind is not None:
        out += ["", "[module]", f"kind = {spec.module_kind}"]
        if spec.gen_degrees:
            out.append("gen_degrees = " + ", ".join(str(x) for x in spec.gen_degrees))
        if spec.module_relations:
            out.append("relations = " + "; ".join(", ".join(r) for r in spec.module_relations))
        if spec.module_gens:
            out.append("gens = " + ", ".join(spec.module_gens))
        if spec.syzygy:
            out.append(f"syzygy = {spec.syzygy}")
    if spec.ideal_gens or spec.ideal_kind:
        out += ["", "[ideal]"]
        out.append("gens = " + ", ".join(spec.ideal_gens) if spec.ideal_gens else f"kind = {spec.ideal_kind}")
    if spec.params:
        out += ["", "[params]"]
        for k in KEYS["params"]:
            if k in spec.params:
                out.append(f"{k} = {spec.params[k]}")
    return "\n".join(out) + "\n"


# -- construction ---------------------------------------------------------------------------


@dataclass
class Built:
    spec: InstanceSpec
    A: CIRing
    M: ModulePresentation | None
    I: IdealData | None

    def poly(self, s: str) -> dict:
        return parse_poly(s, self.A.P)


def build_ring(spec: InstanceSpec) -> CIRing:
    if spec.family is not None:
        d, c, a = spec.family
        return family_ring(d, c, list(a), spec.p)
    P = PolyRing(list(spec.vars), spec.p, list(spec.degrees))
    return make_ci_ring(P, [parse_poly(r, P) for r in spec.relations])


def build_module(spec: InstanceSpec, A: CIRing) -> ModulePresentation | None:
    if spec.module_kind is None:
        return None
    P = A.P
    kind = spec.module_kind
    if kind == "free":
        M = free_module(A, spec.gen_degrees or (0,))
    elif kind == "residue":
        M = residue_field(A)
    elif kind == "quotient":
        M = cyclic_module(A, [parse_poly(g, P) for g in spec.module_gens], "A/(" + ",".join(spec.module_gens) + ")")
    else:
        r = len(spec.gen_degrees)
        rels = []
        for row in spec.module_relations:
            if len(row) != r:
                raise ParseError(f"relation {row} has {len(row)} entries, expected {r}", 0, 0)
            v = {}
            for k, ent in enumerate(row):
                for e, c in parse_poly(ent, P).items():
                    v[(k, e)] = c
            if v:
                rels.append(v)
        M = ModulePresentation(A, spec.gen_degrees, rels, "M")
    if spec.syzygy:
        name = M.name
        M = syzygy(M, spec.syzygy)
        M.name = f"Omega^{spec.syzygy}({name})"
    return M


def build_ideal(spec: InstanceSpec, A: CIRing) -> IdealData | None:
    if spec.ideal_gens:
        return IdealData(A, [parse_poly(g, A.P) for g in spec.ideal_gens], "(" + ",".join(spec.ideal_gens) + ")")
    if spec.ideal_kind:
        if spec.ideal_kind == "maximal" and spec.family is None:
            return IdealData(A, [A.P.var(i) for i in range(A.P.n)], "m")
        if spec.family is None:
            raise ParseError(f"ideal kind {spec.ideal_kind!r} needs a family ring", 0, 0)
        return family_ideal(A, spec.ideal_kind)
    return None


def build(spec: InstanceSpec) -> Built:
    A = build_ring(spec)
    return Built(spec, A, build_module(spec, A), build_ideal(spec, A))


# -- shipped fixtures as instance specs ---------------------------------------------------------


def _a1(**kw) -> InstanceSpec:
    return InstanceSpec(vars=("x", "z"), degrees=(1, 1), relations=("z^2",), **kw)


def _a2(**kw) -> InstanceSpec:
    return InstanceSpec(vars=("x", "z1", "z2"), degrees=(1, 1, 1), relations=("z1^2", "z2^2"), **kw)


def _a3(**kw) -> InstanceSpec:
    return InstanceSpec(vars=("x1", "x2", "z"), degrees=(1, 1, 1), relations=("z^2",), **kw)


FIXTURES = {
    "a1-m1-m": lambda: _a1(module_kind="quotient", module_gens=("z",), ideal_gens=("x", "z")),
    "a1-m1-x": lambda: _a1(module_kind="quotient", module_gens=("z",), ideal_gens=("x",)),
    "a1-m1-mx": lambda: _a1(module_kind="quotient", module_gens=("z",), ideal_gens=("x^2", "x*z")),
    "a1-free-m": lambda: _a1(module_kind="free", ideal_gens=("x", "z")),
    "a1-k1-m": lambda: _a1(module_kind="residue", syzygy=1, ideal_gens=("x", "z")),
    "a2-m2-m": lambda: _a2(module_kind="quotient", module_gens=("z1",), ideal_gens=("x", "z1", "z2")),
    "a2-m2-x": lambda: _a2(module_kind="quotient", module_gens=("z1",), ideal_gens=("x",)),
    "a2-k1-m": lambda: _a2(module_kind="residue", syzygy=1, ideal_gens=("x", "z1", "z2")),
    "a2-k1-x": lambda: _a2(module_kind="residue", syzygy=1, ideal_gens=("x",)),
    "a2-m2-xz1": lambda: _a2(module_kind="quotient", module_gens=("z1",), ideal_gens=("x", "z1")),
    "a2-n2-xz1": lambda: _a2(module_kind="quotient", module_gens=("z2",), ideal_gens=("x", "z1")),
    "a2-k-m": lambda: _a2(module_kind="residue", ideal_gens=("x", "z1", "z2")),
    "family-1-2-maximal": lambda: InstanceSpec(family=(1, 2, (2, 2)), module_kind="free", ideal_kind="maximal"),
    "a3-free-m": lambda: _a3(module_kind="free", ideal_gens=("x1", "x2", "z")),
    "a3-free-x2": lambda: _a3(module_kind="free", ideal_gens=("x1^2", "x2^2", "z")),
}


def fixture(name: str) -> InstanceSpec:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(sorted(FIXTURES))}") from None
