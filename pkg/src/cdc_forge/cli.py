"""Command-line front end: bounds, the comparison table, constructions, verification.

Exit codes: 0 success, 2 usage or parameter error, 3 verification found a
violating pair, 4 missing registry data.
"""

from __future__ import annotations

import argparse
import io
import json
import os
import sys
from pathlib import Path

from . import bound, subspace
from .bound import BoundReport, Registry
from .errors import InvalidParameterError, MissingDataError, ResourceError
from .field import field_new
from .matrix import Subspace
from .shape import BilateralIdentifyingVector

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_DATA = 0, 2, 3, 4


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# -- emitters ----------------------------------------------------------------

def _tsv(rows, header):
    out = io.StringIO()
    out.write("\t".join(header) + "\n")
    for r in rows:
        out.write("\t".join(str(r.get(h, "")) for h in header) + "\n")
    return out.getvalue()


def emit_report(report, fmt: str = "json") -> str:
    """Serialize a BoundReport or a table (list of row dicts); integers stay exact."""
    if isinstance(report, BoundReport):
        if fmt == "json":
            return json.dumps(report.as_dict(), indent=2) + "\n"
        if fmt == "tsv":
            rows = [{"term": n, "value": v} for n, v in report.terms]
            rows += [{"term": "base", "value": report.base}, {"term": "gb", "value": report.gb},
                     {"term": "total", "value": report.total}]
            return _tsv(rows, ["term", "value"])
        width = max([len(n) for n, _ in report.terms] + [5])
        lines = [f"{report.kind}  " + " ".join(f"{k}={v}" for k, v in report.params.items())]
        lines += [f"  {n:<{width}}  {v}" for n, v in report.terms]
        lines.append(f"  {'total':<{width}}  {report.total}")
        return "\n".join(lines) + "\n"
    rows = [dict(r) for r in report]
    header = ["q", "n", "d", "k", "family", "h", "new", "old", "missing"]
    if fmt == "json":
        return json.dumps([{k: (str(v) if k in ("new", "old") else v) for k, v in r.items()}
                           for r in rows], indent=2) + "\n"
    if fmt == "tsv":
        return _tsv(rows, header)
    lines = [f"{'bound':<20}{'new':>26}{'old':>26}  family"]
    for r in rows:
        name = f"A_{r['q']}({r['n']},{r['d']},{{{r['k']}}})"
        if "missing" in r:
            lines.append(f"{name:<20}{'missing ' + r['missing']:>52}  {r['family']}")
        else:
            lines.append(f"{name:<20}{r['new']:>26}{r['old']:>26}  {r['family']}")
    return "\n".join(lines) + "\n"


def parse_table(text: str) -> list[dict]:
    """Inverse of emit_report(table, 'json')."""
    rows = json.loads(text)
    for r in rows:
        for k in ("new", "old"):
            if k in r:
                r[k] = int(r[k])
    return rows


# -- argument helpers ---------------------------------------------------------

def _int_set(s):
    try:
        return sorted({int(x) for x in s.split(",")}, reverse=True)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {s!r}")


def _eta(s):
    try:
        return {int(a): int(b) for a, b in (kv.split(":") for kv in s.split(","))}
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected dim:count pairs like 4:4801,3:327, got {s!r}")


def _load_registry(path):
    if path is None:
        return Registry.default()
    try:
        return Registry.load(path)
    except FileNotFoundError:
        raise UsageError(f"registry file {path} not found")
    except (json.JSONDecodeError, KeyError, TypeError) as e:
        raise UsageError(f"malformed registry file {path}: {e}")


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + m.replace("_", "-") for m in missing))


# -- subcommands ----------------------------------------------------------------

def cmd_bound(args, out):
    reg = _load_registry(args.registry)
    if args.family:
        rep = bound.bound_corollary(args.family, q=args.q, h=args.h if args.h is not None else 0,
                                    delta=args.delta if args.delta is not None else 2,
                                    registry=reg, old=args.old)
    elif args.theorem == "bpm":
        _need(args, "n", "n1", "n2", "n3", "k", "delta", "T1", "T2", "eta1", "eta3")
        rep = bound.bound_bpm(args.q, args.n, args.n1, args.n2, args.n3, args.k, args.delta,
                              args.T1, args.T2, args.eta1, args.eta3, old=args.old)
    elif args.theorem == "spar":
        _need(args, "n", "n1", "n2", "k", "delta", "T1", "eta1")
        rep = bound.bound_spar(args.q, args.n, args.n1, args.n2, args.k, args.delta,
                               args.T1, args.eta1, old=args.old)
    else:
        raise UsageError("give --family or --theorem")
    out.write(emit_report(rep, args.format))
    return EXIT_OK


def cmd_table(args, out):
    if args.reproduce != "table2":
        raise UsageError(f"unknown table {args.reproduce!r}")
    out.write(emit_report(bound.table2(_load_registry(args.registry)), args.format))
    return EXIT_OK


def _load_mddc(spec, base_dir, q):
    """An MDDC from {"code": path, "d1": .., "d0": ..} or {"generators": [...], "n": .., ...}."""
    if not isinstance(spec, dict):
        raise UsageError("MDDC inputs must be objects with 'code' or 'generators'")
    if "code" in spec:
        code = subspace.read_code(base_dir / spec["code"])
    elif "generators" in spec:
        F = field_new(q)
        words = [Subspace(F, int(spec["n"]), rows) for rows in spec["generators"]]
        code = subspace.explicit_code(words, int(spec.get("d1", 0)), F, int(spec["n"]))
    else:
        raise UsageError("MDDC input needs 'code' or 'generators'")
    d1 = int(spec.get("d1", code.claimed_distance))
    return subspace.MDDC(code, d1, int(spec.get("d0", d1)))


def _x_or_eta(p, key, base_dir, q):
    if p.get("count_only"):
        if f"{key}_eta" not in p:
            raise UsageError(f"count-only runs need '{key}_eta'")
        return {int(a): int(b) for a, b in p[f"{key}_eta"].items()}
    if key not in p:
        raise UsageError(f"parameter file needs '{key}'")
    return _load_mddc(p[key], base_dir, q)


def _build(recipe, p, base_dir):
    q = int(p.get("q", 2))
    delta = p.get("delta")
    if delta is None and recipe != "mddc-augment":
        raise UsageError("parameter file needs 'delta'")
    count_only = bool(p.get("count_only", False))
    if recipe == "multilevel":
        return subspace.multilevel(p["vectors"], None, delta, q)
    if recipe == "inverse":
        return subspace.inverse_multilevel(p["vectors"], None, delta, p["caps"], q)
    if recipe == "double":
        C1 = subspace.multilevel(p["S"], None, delta, q)
        C2 = subspace.inverse_multilevel(p["Sbar"], None, delta, p["caps"], q)
        return subspace.double_multilevel(C1, C2, delta)
    if recipe == "bilateral":
        vecs = [BilateralIdentifyingVector.from_string(v) for v in p["vectors"]]
        cap = p.get("rank_cap")
        fills = [subspace.gb_filler(v, delta, q, rank_cap=cap, budget=int(p.get("budget", 2 ** 16)))
                 for v in vecs]
        return subspace.bilateral_multilevel(vecs, fills, delta, q)
    if recipe == "mixed":
        return subspace.mixed_dimension(_x_or_eta(p, "X1", base_dir, q), _x_or_eta(p, "X2", base_dir, q),
                                        p["n"], p["n1"], p["n2"], p["k"], delta, q, count_only)
    if recipe == "parallel":
        return subspace.parallel_mixed(_x_or_eta(p, "X1", base_dir, q), _x_or_eta(p, "X3", base_dir, q),
                                       p["n"], p["n1"], p["n2"], p["n3"], p["k"], delta, q, count_only)
    if recipe == "parallel-simple":
        return subspace.parallel_mixed_simple(_x_or_eta(p, "X1", base_dir, q),
                                              p["n"], p["n1"], p["n2"], p["k"], delta, q, count_only)
    if recipe == "gb-parallel":
        simple = "n3" not in p
        if simple:
            base = subspace.parallel_mixed_simple(_x_or_eta(p, "X1", base_dir, q),
                                                  p["n"], p["n1"], p["n2"], p["k"], delta, q)
            vecs, _ = subspace.spar_vectors(p["n"], p["n1"], p["n2"], p["k"], delta, base.recipe["T1"])
        else:
            base = subspace.parallel_mixed(_x_or_eta(p, "X1", base_dir, q), _x_or_eta(p, "X3", base_dir, q),
                                           p["n"], p["n1"], p["n2"], p["n3"], p["k"], delta, q)
            vecs, _ = subspace.bpm_vectors(p["n"], p["n1"], p["n2"], p["n3"], p["k"], delta,
                                           base.recipe["T1"], base.recipe["T2"])
        vecs = [v for _, v in vecs]
        fills = [subspace.gb_filler(v, delta, q, rank_cap=v.a1 - delta,
                                    budget=int(p.get("budget", 2 ** 16))) for v in vecs]
        return subspace.gb_parallel_combine(base, vecs, fills, delta)
    if recipe == "mddc-augment":
        C0 = subspace.read_code(base_dir / p["C0"])
        return subspace.mddc_augment(C0, int(p["delta"]), p.get("budget"), p.get("seed")).code
    raise UsageError(f"unknown recipe {recipe!r}")


def cmd_construct(args, out):
    try:
        p = json.loads(Path(args.params).read_text())
    except FileNotFoundError:
        raise UsageError(f"parameter file {args.params} not found")
    except json.JSONDecodeError as e:
        raise UsageError(f"malformed parameter file {args.params}: {e}")
    try:
        result = _build(args.recipe, p, Path(args.params).resolve().parent)
    except KeyError as e:
        if isinstance(e, MissingDataError):
            raise
        raise UsageError(f"parameter file is missing {e}")
    if isinstance(result, subspace.CodeSummary):
        out.write(json.dumps(result.as_dict(), indent=2) + "\n")
        return EXIT_OK
    if args.out:
        subspace.write_code(args.out, result, seed=args.seed)
    summary = {"recipe": args.recipe, "size": str(result.size),
               "eta": {str(k): str(v) for k, v in result.eta.items()},
               "claimed_distance": result.claimed_distance, "out": args.out, "seed": args.seed}
    out.write(json.dumps(summary, indent=2) + "\n")
    return EXIT_OK


def cmd_verify(args, out):
    code = subspace.read_code(args.code)
    mddc = tuple(args.mddc) if args.mddc else None
    rep = subspace.verify(code, args.min_distance, args.mode, args.seed, args.pairs, mddc)
    out.write(json.dumps(rep.as_dict(), indent=2) + "\n")
    return EXIT_OK if rep.passed else EXIT_VIOLATION


def cmd_registry(args, out):
    reg = _load_registry(args.registry if args.registry and os.path.exists(args.registry) else None)
    if args.action == "list":
        out.write(json.dumps(reg.to_json(), indent=2, sort_keys=True) + "\n")
    elif args.action == "get":
        reg.get(args.key)
        out.write(json.dumps({args.key: reg.to_json()[args.key]}, indent=2) + "\n")
    else:
        if not args.registry:
            raise UsageError("registry set needs --registry PATH to write to")
        q, n, d, k = args.qndk
        reg.set(q, n, d, k, args.value, args.provenance)
        reg.save(args.registry)
        out.write(json.dumps({f"{q}/{n}/{d}/{k}": reg.to_json()[f"{q}/{n}/{d}/{k}"]}, indent=2) + "\n")
    return EXIT_OK


def build_parser():
    ap = _Parser(prog="cdc-forge", description="Lower bounds and constructions for constant dimension codes.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("bound", help="evaluate a bound and print its report")
    b.add_argument("--family", choices=bound.FAMILIES)
    b.add_argument("--theorem", choices=("bpm", "spar"))
    b.add_argument("--q", type=int, default=2)
    b.add_argument("--h", type=int)
    b.add_argument("--delta", type=int)
    for name in ("n", "n1", "n2", "n3", "k"):
        b.add_argument(f"--{name}", type=int)
    b.add_argument("--T1", type=_int_set)
    b.add_argument("--T2", type=_int_set)
    b.add_argument("--eta1", type=_eta)
    b.add_argument("--eta3", type=_eta)
    b.add_argument("--old", action="store_true", help="drop the generalized bilateral terms")
    b.add_argument("--registry")
    b.add_argument("--format", choices=("json", "tsv", "text"), default="json")
    b.set_defaults(func=cmd_bound)

    t = sub.add_parser("table", help="reproduce the comparison table")
    t.add_argument("--reproduce", default="table2")
    t.add_argument("--registry")
    t.add_argument("--format", choices=("json", "tsv", "text"), default="tsv")
    t.set_defaults(func=cmd_table)

    c = sub.add_parser("construct", help="build a code from a JSON parameter file")
    c.add_argument("--recipe", required=True,
                   choices=("multilevel", "inverse", "double", "bilateral", "mixed", "parallel",
                            "parallel-simple", "gb-parallel", "mddc-augment"))
    c.add_argument("--params", required=True)
    c.add_argument("--out")
    c.add_argument("--seed", type=int)
    c.set_defaults(func=cmd_construct)

    v = sub.add_parser("verify", help="check pairwise distances of a code file")
    v.add_argument("--code", required=True)
    v.add_argument("--min-distance", type=int)
    v.add_argument("--mode", choices=("auto", "exhaustive", "sampled"), default="auto")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--pairs", type=int, default=10 ** 5)
    v.add_argument("--mddc", type=int, nargs=2, metavar=("D1", "D0"))
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("registry", help="inspect or edit the best-known size registry")
    r.add_argument("--registry")
    rs = r.add_subparsers(dest="action", required=True, parser_class=_Parser)
    rs.add_parser("list")
    g = rs.add_parser("get")
    g.add_argument("key", help='"q/n/d/k" or "eta:q/n/d1/d0"')
    s = rs.add_parser("set")
    s.add_argument("qndk", type=int, nargs=4, metavar=("Q", "N", "D", "K"))
    s.add_argument("value", type=int)
    s.add_argument("--provenance", required=True)
    r.set_defaults(func=cmd_registry)
    return ap


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except UsageError as e:
        err.write(f"cdc-forge: usage error: {e}\n")
        return EXIT_USAGE
    except MissingDataError as e:
        err.write(f"cdc-forge: missing data: {e}\n")
        return EXIT_DATA
    except (InvalidParameterError, ResourceError) as e:
        err.write(f"cdc-forge: usage error: {e}\n")
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
