"""Command-line entry point.

Exit status: 0 when the computed verdict holds, 1 when it fails (or a golden
example does not match), 2 on bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import specio
from .galois_h1 import h1
from .group_core import GroupError
from .quotient_stack import (
    coarse_real_orbits,
    fiber_sizes,
    inertia_complex,
    real_locus,
    torsor_oracle,
)
from .search_harness import KINDS, Campaign, run
from .split_gerbe import (
    OPEN,
    PROPER,
    GerbeReport,
    real_h_star,
    component_real_h_star,
    effective_sigma,
    inertia_cover,
    real_cover,
    smith_thom_gerbe,
)
from .stacky_curve import (
    abelian_inversion_real_h_star,
    faithful_quotient,
    inertia_factorization_check,
    inertia_h_star,
    smith_thom_curve,
    NotAbelianStabilizer,
)


# reports: each returns (json-able dict, verdict)

def h1_report(gg) -> tuple:
    classes = h1(gg)
    return {
        "command": "h1",
        "group_order": gg.order,
        "sigma": list(gg.sigma.perm),
        "z1": list(classes.z1),
        "class_count": classes.count,
        "representatives": list(classes.representatives),
        "classes": classes.classes(),
    }, True


def quotient_report(space, oracle: bool = False) -> tuple:
    dec = real_locus(space)
    inertia = inertia_complex(space)
    out = {
        "command": "quotient",
        "carrier": space.carrier,
        "real": dec.total,
        "inertia": inertia.count,
        "holds": dec.total <= inertia.count,
        "components": [
            {"gamma": c.gamma, "class_id": c.class_id, "fixed": list(c.fixed),
             "real_group": list(c.real_group), "orbits": [list(o) for o in c.orbits]}
            for c in dec.components
        ],
        "inertia_classes": [[list(p) for p in cls] for cls in inertia.classes],
        "fiber_sizes": {str(k): v for k, v in sorted(fiber_sizes(space, dec).items())},
        "coarse_real_orbits": len(coarse_real_orbits(space)),
    }
    ok = out["holds"]
    if oracle:
        res = torsor_oracle(space)
        per = res.per_class()
        agree = res.count == dec.total and all(
            per.get(c.class_id, 0) == c.count for c in dec.components)
        out["oracle"] = {"count": res.count, "witnesses": [list(w) for w in res.witnesses],
                         "agrees": agree}
        ok = ok and agree
    return out, ok


def curve_report(spec) -> tuple:
    if isinstance(spec, dict):  # abelian_inversion
        g, k = spec["g"], spec["k"]
        real = abelian_inversion_real_h_star(g, k)
        inertia = spec.get("inertia_external")
        out = {"command": "curve", "kind": "abelian_inversion", "g": g, "k": k, "real": real,
               "real_is_bound": False, "inertia": inertia,
               "inertia_source": "external" if inertia is not None else "unknown"}
        out["holds"] = None if inertia is None else real <= inertia
        return out, out["holds"] is not False
    rep = smith_thom_curve(spec)
    out = {
        "command": "curve",
        "kind": "stacky_curve",
        "h_star_M_complex": spec.h_star_M_complex,
        "kernel_order": spec.kernel_order,
        "real": rep.real,
        "real_is_bound": rep.real_is_bound,
        "inertia": rep.inertia,
        "holds": rep.holds,
    }
    if spec.kernel_order > 1:
        out["faithful_quotient_inertia"] = inertia_h_star(faithful_quotient(spec))
        try:
            out["factorization"] = inertia_factorization_check(spec)
        except NotAbelianStabilizer:
            out["factorization"] = None
    return out, rep.holds


def gerbe_report(gerbe, component: int | None = None) -> tuple:
    if gerbe.base.kind == OPEN:
        # no inertia total for open bases; report the real side only
        rep = GerbeReport(real_h_star(gerbe), None)
    else:
        rep = smith_thom_gerbe(gerbe)
    comps = []
    indices = range(len(gerbe.components)) if component is None else [component]
    for i in indices:
        c = gerbe.components[i]
        cover = real_cover(gerbe, i)
        comps.append({
            "index": i,
            "name": c.name,
            "shape": c.shape,
            "effective_sigma": list(effective_sigma(gerbe, i).perm),
            "h1_count": cover.classes.count,
            "h1_representatives": list(cover.classes.representatives),
            "orbits": [list(o) for o in cover.orbits],
            "orbit_sizes": cover.sizes,
            "real_h_star": component_real_h_star(gerbe, i),
        })
    inert = inertia_cover(gerbe)
    out = {
        "command": "gerbe",
        "real": rep.real,
        "inertia": rep.inertia,
        "holds": None if rep.inertia is None else rep.holds,
        "components": comps,
        "inertia_orbits": [list(o) for o in inert.orbits],
        "inertia_orbit_sizes": inert.sizes,
    }
    if gerbe.base.kind == PROPER:
        out["orbit_lhs"] = rep.orbit_lhs
        out["orbit_rhs"] = rep.orbit_rhs
        out["orbit_holds"] = rep.orbit_holds
    return out, out["holds"] is not False


# golden examples

def golden_dir():
    return resources.files("realstack") / "golden"


def golden_names() -> list:
    return sorted(p.name[:-5] for p in golden_dir().iterdir() if p.name.endswith(".json"))


def run_document(command: str, doc: dict, options: dict | None = None) -> tuple:
    options = options or {}
    if command == "h1":
        return h1_report(specio.parse_ggroup(doc["group"], doc.get("sigma", "id")))
    if command == "quotient":
        return quotient_report(specio.parse_space(doc), options.get("oracle", False))
    if command == "curve":
        return curve_report(specio.parse_curve(doc))
    if command == "gerbe":
        return gerbe_report(specio.parse_gerbe(doc), options.get("component"))
    raise specio.Malformed("$.command", f"unknown command {command!r}")


def _finish(out: dict, fmt: str) -> str:
    out = {"schema": specio.SCHEMA, **out}
    if fmt == "json":
        return specio.dumps(out)
    width = max(len(k) for k in out)
    lines = []
    for k in sorted(out):
        v = out[k]
        text = v if isinstance(v, str) else json.dumps(v, sort_keys=True)
        lines.append(f"{k.ljust(width)}  {text}")
    return "\n".join(lines) + "\n"


def _load(path_or_name: str):
    p = Path(path_or_name)
    if p.exists():
        return specio.load_json(p)
    return path_or_name


def _sigma_arg(text: str):
    if text == "id":
        return "id"
    if "," in text or text.startswith("["):
        return [int(x) for x in text.strip("[]").split(",") if x.strip()]
    return int(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="realstack")
    parser.add_argument("--format", choices=("json", "text"), default="json")
    # --format is accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default=argparse.SUPPRESS)
    sub = parser.add_subparsers(dest="command", required=True)
    _add = sub.add_parser

    def add_parser(name, **kw):
        return _add(name, parents=[common], **kw)

    sub.add_parser = add_parser

    p = sub.add_parser("h1", help="nonabelian H^1 of a G-group")
    p.add_argument("--group", required=True, help="catalog name or group JSON file")
    p.add_argument("--sigma", default="id",
                   help="'id', a comma-separated permutation, or an involution index")

    p = sub.add_parser("quotient", help="real locus and inertia of a finite quotient")
    p.add_argument("--space", required=True)
    p.add_argument("--oracle", action="store_true")

    p = sub.add_parser("curve", help="Betti counts for a stacky curve spec")
    p.add_argument("--spec", required=True)

    p = sub.add_parser("gerbe", help="real cover and inertia of a split gerbe")
    p.add_argument("--spec", required=True)
    p.add_argument("--component", type=int)

    p = sub.add_parser("search", help="run a verification campaign")
    p.add_argument("--kind", choices=KINDS, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--max-order", type=int, default=8)
    p.add_argument("--max-carrier", type=int, default=6)
    p.add_argument("--max-rank", type=int, default=3)
    p.add_argument("--max-genus", type=int, default=4)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out", help="write the report here as well")
    p.add_argument("--replay-dir", help="directory for violation replay files")

    p = sub.add_parser("example", help="run a golden example")
    p.add_argument("name", nargs="?")
    p.add_argument("--list", action="store_true")
    p.add_argument("--bless", action="store_true", help="overwrite the expected output")
    return parser


def _dispatch(args) -> tuple:
    if args.command == "h1":
        doc = _load(args.group)
        return run_document("h1", {"group": doc, "sigma": _sigma_arg(args.sigma)})
    if args.command == "quotient":
        return run_document("quotient", specio.load_json(args.space), {"oracle": args.oracle})
    if args.command == "curve":
        return run_document("curve", specio.load_json(args.spec))
    if args.command == "gerbe":
        doc = specio.load_json(args.spec)
        n = len(doc.get("components", [])) if isinstance(doc, dict) else 0
        if args.component is not None and not 0 <= args.component < n:
            raise specio.Malformed("--component", f"index out of range 0..{n - 1}")
        return run_document("gerbe", doc, {"component": args.component})
    if args.command == "search":
        campaign = Campaign(args.kind, args.seed, args.count, args.max_order, args.max_carrier,
                            args.max_rank, args.max_genus, args.workers, args.replay_dir)
        summary = run(campaign).to_json()
        if args.out:
            Path(args.out).write_text(specio.dumps(summary))
        return {"command": "search", **summary}, not summary["violations"]
    raise AssertionError(args.command)


def _example(args, fmt: str) -> int:
    if args.list or not args.name:
        sys.stdout.write("\n".join(golden_names()) + "\n")
        return 0
    path = golden_dir() / f"{args.name}.json"
    if not path.is_file():
        print(f"unknown example {args.name!r}; try --list", file=sys.stderr)
        return 2
    golden = json.loads(path.read_text())
    out, ok = run_document(golden["command"], golden["input"], golden.get("options"))
    produced = {"schema": specio.SCHEMA, **out}
    if args.bless:
        golden["expected"] = produced
        Path(str(path)).write_text(specio.dumps(golden))
    sys.stdout.write(_finish(out, fmt))
    if specio.dumps(produced) != specio.dumps(golden.get("expected")):
        print(f"example {args.name}: output differs from the golden file", file=sys.stderr)
        return 1
    return 0 if ok else 1


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "example":
            return _example(args, args.format)
        out, ok = _dispatch(args)
    except (specio.SpecError, GroupError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(_finish(out, args.format))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
