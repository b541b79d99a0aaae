"""Command line front end.

Every command reads one instance (--input FILE or --fixture NAME), writes
<command>.json (and CSV tables where there are any) into --out, and prints
the JSON report.  Exit codes:

    0  success
    1  other library error
    2  usage or parse error
    3  inconclusive fit
    4  genericity failure (random choice exhausted its retries)
    5  theorem-violation alarm
    6  inconclusive cohomology
    7  window too small
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import __version__
from .errors import (
    CicalcError,
    GenericityFailure,
    InconclusiveCohomology,
    InconclusiveFit,
    ParseError,
    TheoremViolation,
    WindowTooSmall,
)
from .fit import NEG_INFINITY, fmt_degree
from .instance import FIXTURES, Built, InstanceSpec, build, emit_instance, fixture, parse_instance

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_USAGE = 2
EXIT_FIT = 3
EXIT_GENERICITY = 4
EXIT_VIOLATION = 5
EXIT_COHOMOLOGY = 6
EXIT_WINDOW = 7

COMMANDS = (
    "resolve",
    "ext-table",
    "psi",
    "variety",
    "equivalences",
    "reg-sweep",
    "artin-rees",
    "approx",
    "reduce-cx",
    "regularity",
    "ratliff-rush",
    "superficial",
    "h0-bound",
    "suite",
    "fixture",
)


class Violation(Exception):
    """Raised after the report is written when it records a failed theorem check."""


def dump_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def rows_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for r in rows:
        w.writerow([fmt_degree(v) if v == NEG_INFINITY else v for v in r])
    return buf.getvalue()


class Context:
    def __init__(self, args, built: Built | None):
        self.args = args
        self.built = built
        p = built.spec.params if built else {}
        self.seed = _seed(args, p)
        self.imax = args.imax or p.get("imax", 9)
        self.nmax = args.nmax or p.get("nmax", 8)
        self.cutoff = args.cutoff or p.get("cutoff", 10)
        self.files: dict = {}

    def need(self, what: str):
        obj = getattr(self.built, what)
        if obj is None:
            raise ParseError(f"this command needs a [{ 'module' if what == 'M' else 'ideal'}] section", 0, 0)
        return obj

    def x(self) -> dict:
        b = self.built
        s = b.spec.params.get("x")
        return b.poly(s) if s else b.A.P.var(0)

    def provenance(self, command: str) -> dict:
        out = {
            "command": command,
            "seed": self.seed,
            "version": __version__,
            "windows": {"imax": self.imax, "nmax": self.nmax, "cutoff": self.cutoff},
        }
        if self.built is not None:
            out["p"] = self.built.A.p
            out["instance"] = emit_instance(self.built.spec)
        return out


def _seed(args, params) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("CICALC_SEED")
    if env is not None:
        return int(env)
    return int(params.get("seed", 0))


# -- commands ---------------------------------------------------------------------------------


def cmd_resolve(ctx: Context) -> dict:
    from .resolve import depth, minimal_resolution

    M = ctx.need("M")
    res = minimal_resolution(M, ctx.cutoff)
    out = res.fingerprint()
    out["checks"] = {"complex": res.check_complex(), "exact": res.check_exact(), "minimal": res.check_minimal()}
    out["depth"] = depth(M)
    if not all(out["checks"].values()):
        out["violation"] = "resolution checks failed"
    return out


def cmd_ext_table(ctx: Context) -> dict:
    from .asymptotics import ext_length_table

    t = ext_length_table(ctx.need("M"), ctx.need("I"), ctx.imax, ctx.nmax, cutoff=max(ctx.cutoff, ctx.imax + 1))
    ctx.files["ext_table.csv"] = t.to_csv()
    return {"cells": t.cells, "zero": t.is_zero()}


def cmd_psi(ctx: Context) -> dict:
    from .asymptotics import ext_length_table, psi_report

    t = ext_length_table(ctx.need("M"), ctx.need("I"), ctx.imax, ctx.nmax, cutoff=max(ctx.cutoff, ctx.imax + 1))
    ctx.files["ext_table.csv"] = t.to_csv()
    p = ctx.built.spec.params
    rep = psi_report(t, p.get("burn_n", 2), p.get("burn_i", 3), strict=False)
    out = rep.to_json()
    if rep.violation:
        out["violation"] = "psi is not constant on an even or odd tail"
    return out


def cmd_variety(ctx: Context) -> dict:
    from .operators import complexity, power_varieties, stable_ideal_variety, support_variety, total_ideal_variety
    from .resolve import minimal_resolution

    out: dict = {}
    if ctx.built.M is not None:
        res = minimal_resolution(ctx.built.M, ctx.cutoff)
        v = support_variety(ctx.built.M, res=res)
        cx = complexity(ctx.built.M, res=res)
        out["module"] = v.fingerprint()
        out["complexity"] = {"variety_dim": cx.variety_dim, "betti": cx.betti_cx, "agree": cx.agree, "flags": cx.flags}
        if not cx.agree:
            out["violation"] = "variety dimension and betti growth differ"
    if ctx.built.I is not None:
        n = ctx.built.spec.params.get("levels", 4)
        vs = power_varieties(ctx.built.I, n, ctx.cutoff)
        out["powers"] = [v.fingerprint() for v in vs]
        out["stable"] = stable_ideal_variety(ctx.built.I, n, varieties=vs).fingerprint()
        out["total"] = total_ideal_variety(ctx.built.I, n, varieties=vs).fingerprint()
    return out


def cmd_equivalences(ctx: Context) -> dict:
    from .asymptotics import check_equivalences

    rep = check_equivalences(ctx.need("M"), ctx.need("I"), ctx.imax, ctx.nmax, cutoff=ctx.cutoff)
    out = rep.to_json()
    if not rep.agree:
        out["violation"] = "the five conditions disagree"
    return out


def cmd_reg_sweep(ctx: Context) -> dict:
    from .blowup import reg_syzygy_sweep

    rep = reg_syzygy_sweep(ctx.need("M"), ctx.need("I"), ctx.built.spec.params.get("levels", 6))
    out = rep.to_json()
    ctx.files["reg_sweep.csv"] = rows_csv([["i", "reg"]] + [[i, fmt_degree(v)] for i, v in enumerate(rep.regs)])
    h = rep.hypotheses
    if (h["r_neg_inf"] or h["dim_vinf_le_1"]) and rep.verdict != "BOUNDED":
        out["violation"] = "regularity not bounded although a boundedness hypothesis holds"
    return out


def cmd_artin_rees(ctx: Context) -> dict:
    from .artin_rees import strong_ar_exponent, verify_ar
    from .resolve import minimal_resolution

    M, I = ctx.need("M"), ctx.need("I")
    levels = ctx.built.spec.params.get("levels", 4)
    res = minimal_resolution(M, levels)
    rep = strong_ar_exponent(M, I, levels, ctx.nmax, res=res)
    out = rep.to_json()
    ver = verify_ar(M, I, rep.h, levels, ctx.nmax, res=res)
    out["verified"] = {"holds": ver["holds"], "vacuous": ver["vacuous"], "window": ver["window"]}
    if rep.h > 0:
        out["minimality_witness"] = not verify_ar(M, I, rep.h - 1, levels, ctx.nmax, res=res)["holds"]
    bad = [lv.level for lv in rep.levels if not lv.bound_ok or not all(lv.checks.values())]
    if not ver["holds"] or bad:
        out["violation"] = f"Artin-Rees checks failed at levels {bad}"
    return out


def cmd_approx(ctx: Context) -> dict:
    from .asymptotics import psi_under_modx
    from .resolve import mcm_approx, minimal_resolution

    M = ctx.need("M")
    x = ctx.x()
    ap = mcm_approx(M, [x])
    out = {
        "x": ctx.built.A.P.fmt(x),
        "V": ap.V.fingerprint(),
        "V_betti": minimal_resolution(ap.V, 4).betti,
        "pd_Y": ap.pd_Y,
        "depth_V": ap.depth_V,
        "checks": ap.checks,
    }
    if ctx.built.I is not None:
        mx = psi_under_modx(M, ctx.built.I, x, ctx.imax, ctx.nmax)
        out["psi_mod_x"] = mx.to_json()
        if not (mx.holds and mx.r_equal):
            out["violation"] = "psi formula or r(D) = r(M) fails"
    if not all(ap.checks.values()):
        out["violation"] = "approximation checks failed"
    return out


def cmd_reduce_cx(ctx: Context) -> dict:
    from .resolve import reduce_complexity

    r = reduce_complexity(ctx.need("M"), ctx.cutoff, ctx.seed)
    return {
        "K": r.K.fingerprint(),
        "start": r.i0,
        "beta": r.beta,
        "attempts": r.attempts,
        "betti_K": r.betti_K,
        "expected": r.expected,
        "cx_M": r.cx_M,
        "cx_K": r.cx_K,
    }


def cmd_regularity(ctx: Context) -> dict:
    from .blowup import assoc_graded, local_cohomology_ends

    G = assoc_graded(ctx.need("M"), ctx.need("I"))
    rep = local_cohomology_ends(G)
    out = rep.to_json()
    out["graded"] = G.fingerprint()
    rows = [["i", "n", "dim"]]
    for i, d in sorted(rep.cohomology.items()):
        rows += [[i, n, v] for n, v in sorted(d.items())]
    ctx.files["cohomology.csv"] = rows_csv(rows)
    if rep.flags:
        out["violation"] = "regularity paths disagree"
    return out


def cmd_ratliff_rush(ctx: Context) -> dict:
    from .blowup import ratliff_rush

    return ratliff_rush(ctx.need("M"), ctx.need("I"), ctx.built.spec.params.get("levels", 6)).to_json()


def cmd_superficial(ctx: Context) -> dict:
    from .blowup import find_superficial

    r = find_superficial(ctx.need("I"), [ctx.need("M")], (1, 6), ctx.seed)
    return r.to_json(ctx.built.A.P)


def cmd_h0_bound(ctx: Context) -> dict:
    from .blowup import end_h0_via_power, find_superficial

    M, I = ctx.need("M"), ctx.need("I")
    s = ctx.built.spec.params.get("x")
    x = ctx.built.poly(s) if s else find_superficial(I, [M], (1, 6), ctx.seed).x
    rep = end_h0_via_power(M, I, x)
    out = rep.to_json()
    out["x"] = ctx.built.A.P.fmt(x)
    if not rep.holds:
        out["violation"] = "end H^0 bound fails"
    return out


def _suite_one(name: str) -> tuple[str, dict, str]:
    from .asymptotics import check_equivalences, ext_length_table, psi_report
    from .blowup import reg_syzygy_sweep
    from .fixtures import suite

    inst = next(i for i in suite() if i.name == name)
    t = ext_length_table(inst.M, inst.I)
    psi = psi_report(t, strict=False)
    eq = check_equivalences(inst.M, inst.I)
    sw = reg_syzygy_sweep(inst.M, inst.I, 6)
    return name, {"psi": psi.to_json(), "equivalences": eq.to_json(), "sweep": sw.to_json()}, t.to_csv()


def cmd_suite(ctx: Context) -> dict:
    from .fixtures import suite

    names = [i.name for i in suite()]
    jobs = max(1, ctx.args.jobs or 1)
    if jobs == 1:
        results = [_suite_one(n) for n in names]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_suite_one, names))
    out = {}
    bad = []
    for name, rep, table in results:
        out[name] = rep
        ctx.files[f"ext_table_{_safe(name)}.csv"] = table
        if not rep["equivalences"]["agree"]:
            bad.append(name)
    res = {"instances": out}
    if bad:
        res["violation"] = f"equivalences disagree on {bad}"
    return res


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() else "_" for ch in name).strip("_")


HANDLERS = {
    "resolve": cmd_resolve,
    "ext-table": cmd_ext_table,
    "psi": cmd_psi,
    "variety": cmd_variety,
    "equivalences": cmd_equivalences,
    "reg-sweep": cmd_reg_sweep,
    "artin-rees": cmd_artin_rees,
    "approx": cmd_approx,
    "reduce-cx": cmd_reduce_cx,
    "regularity": cmd_regularity,
    "ratliff-rush": cmd_ratliff_rush,
    "superficial": cmd_superficial,
    "h0-bound": cmd_h0_bound,
    "suite": cmd_suite,
}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="cicalc", description="Invariants of modules over graded complete intersections.")
    ap.add_argument("--version", action="version", version=f"cicalc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        if name == "fixture":
            sp.add_argument("name", nargs="?", help="fixture to print; lists them when omitted")
            continue
        src = sp.add_mutually_exclusive_group(required=name != "suite")
        src.add_argument("--input", metavar="FILE")
        src.add_argument("--fixture", metavar="NAME", choices=sorted(FIXTURES))
        sp.add_argument("--out", metavar="DIR", default="cicalc-out")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--jobs", type=int, default=1)
        sp.add_argument("--imax", type=int)
        sp.add_argument("--nmax", type=int)
        sp.add_argument("--cutoff", type=int)
    return ap


def _load(args) -> Built | None:
    if getattr(args, "input", None):
        spec = parse_instance(Path(args.input).read_text())
    elif getattr(args, "fixture", None):
        spec = fixture(args.fixture)
    else:
        return None
    return build(spec)


def run(args) -> int:
    if args.command == "fixture":
        if args.name:
            sys.stdout.write(emit_instance(fixture(args.name)))
        else:
            sys.stdout.write("\n".join(sorted(FIXTURES)) + "\n")
        return EXIT_OK
    ctx = Context(args, _load(args))
    result = HANDLERS[args.command](ctx)
    report = {"provenance": ctx.provenance(args.command), "result": result}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    text = dump_json(report)
    (out / f"{args.command}.json").write_text(text)
    for fname, body in ctx.files.items():
        with open(out / fname, "w", newline="") as fh:
            fh.write(body)
    sys.stdout.write(text)
    if "violation" in result:
        raise Violation(result["violation"])
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return run(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InconclusiveFit as exc:
        print(f"inconclusive fit: {exc}", file=sys.stderr)
        return EXIT_FIT
    except GenericityFailure as exc:
        print(f"genericity failure: {exc} (seeds {exc.seeds})", file=sys.stderr)
        return EXIT_GENERICITY
    except (TheoremViolation, Violation) as exc:
        print(f"theorem violation: {exc}", file=sys.stderr)
        return EXIT_VIOLATION
    except InconclusiveCohomology as exc:
        print(f"inconclusive cohomology: {exc}", file=sys.stderr)
        return EXIT_COHOMOLOGY
    except WindowTooSmall as exc:
        print(f"window too small: {exc}", file=sys.stderr)
        return EXIT_WINDOW
    except CicalcError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
