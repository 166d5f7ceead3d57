"""Command-line interface: ``python -m lrgroups`` or ``lrgroups``.

Exit codes: 0 success, 1 a report disagrees with the expected table, 2 usage
or parse error, 3 resource limit, 4 internal invariant violated.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field

from . import amalgam as am_mod
from .cosetenum import CosetLimitExceeded, DEFAULT_MAX_COSETS, enumerate_cosets
from .lowindex import (
    DEFAULT_NODE_CAP,
    MAX_INDEX,
    IndexBoundExceeded,
    SearchSpaceExceeded,
    filter_lr,
    low_index,
    lr_orbit_counts,
)
from .permgroup import GroupTooLarge, Permutation
from .presentation import PresentationError, parse_presentation, parse_word_list
from .registry import LR_ADMITTING, NAMES, UnknownAmalgam, get_amalgam

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE, EXIT_RESOURCE, EXIT_INVARIANT = 0, 1, 2, 3, 4

ENV_MAX_COSETS = "LRGROUPS_MAX_COSETS"
ENV_NODE_CAP = "LRGROUPS_NODE_CAP"


class UsageError(Exception):
    pass


class ResourceError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    amalgams: list[str] = field(default_factory=list)
    max_cosets: int = DEFAULT_MAX_COSETS
    node_cap: int = DEFAULT_NODE_CAP
    threads: int = 1
    output: str | None = None
    format: str = "json"

    def __post_init__(self):
        if self.max_cosets <= 0 or self.node_cap <= 0 or self.threads <= 0:
            raise UsageError("caps and thread count must be positive")
        for name in self.amalgams:
            if name not in NAMES:
                raise UsageError(f"unknown amalgam {name!r}; choose from {', '.join(NAMES)}")


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {raw!r}") from None


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _emit(cfg: RunConfig, payload: dict, text: str | None = None):
    out = text if (cfg.format == "text" and text is not None) else dumps(payload)
    if cfg.output:
        with open(cfg.output, "w") as fh:
            fh.write(out)
    else:
        sys.stdout.write(out)


# ---------------------------------------------------------------------------
# commands


def cmd_table1(cfg: RunConfig) -> int:
    from .lranalysis import reproduce_table1

    reports = [reproduce_table1(name, node_cap=cfg.node_cap) for name in cfg.amalgams]
    rows = [r.to_json() for r in reports]
    ok = [r.matches_table1() for r in reports]
    payload = {"schema": 1, "reports": rows, "pass": all(ok)}
    if not all(ok):
        payload["failures"] = [
            {"amalgam": r.name, "checks": {k: v for k, v in r.checks.items() if not v}}
            for r, good in zip(reports, ok) if not good
        ]
    lines = [f"{'amalgam':<10} {'s':<7} {'maximal LR-group G':<40} {'N_A(G)':<44} unique self-dual"]
    for r, j in zip(reports, rows):
        spec = get_amalgam(r.name)
        if r.certificate is not None:
            lines.append(f"{r.name:<10} {r.arc_transitivity:<7} {'NONE':<40} {'':<44} -      -")
            continue
        lines.append(
            f"{r.name:<10} {r.arc_transitivity:<7} {spec.lr_group:<40} {spec.normaliser:<44} "
            f"{'yes' if r.unique else 'no':<6} {'yes' if r.self_dual else 'no'}"
        )
    lines.append("PASS" if all(ok) else "FAIL")
    _emit(cfg, payload, "\n".join(lines) + "\n")
    return EXIT_OK if all(ok) else EXIT_MISMATCH


def _load_presentation(args):
    if args.pres:
        try:
            with open(args.pres) as fh:
                return parse_presentation(fh.read())
        except OSError as e:
            raise UsageError(str(e)) from None
    if args.amalgam:
        return get_amalgam(args.amalgam).presentation
    raise UsageError("give --pres FILE or --amalgam NAME")


def cmd_enumerate(cfg: RunConfig, args) -> int:
    pres = _load_presentation(args)
    sub = parse_word_list(args.sub, pres.generators) if args.sub else []
    table = enumerate_cosets(pres, sub, max_cosets=cfg.max_cosets, strategy=args.strategy)
    table.check()
    payload = {"schema": 1, "index": table.n, "subgroup": [pres.format_word(w) for w in sub]}
    if args.table:
        payload["table"] = table.to_json()
    _emit(cfg, payload, f"index {table.n}\n")
    return EXIT_OK


def cmd_lowindex(cfg: RunConfig, args) -> int:
    name = cfg.amalgams[0]
    if name not in LR_ADMITTING:
        raise ResourceError(
            f"low-index enumeration is not run for {name}: LR candidates have index |L:X| = 11664/8 = 1458 "
            f"in A, far beyond the search bound of {MAX_INDEX}; `table1 --amalgam {name}` settles this row "
            "by a coset enumeration certificate instead"
        )
    spec = get_amalgam(name)
    classes = low_index(spec.presentation, args.index, exact=args.exact, node_cap=cfg.node_cap, name=name)
    for c in classes:
        c.table.check()
    payload = {"schema": 1, "amalgam": name, "index": args.index, "exact": args.exact}
    if args.lr_filter:
        am = am_mod.build_amalgam(spec, max_cosets=cfg.max_cosets)
        classes = filter_lr(am, classes)
        payload["lr_filter"] = True
        payload["classes"] = [dict(c.to_json(), orbit_counts=lr_orbit_counts(am, c.table)) for c in classes]
    else:
        payload["classes"] = [c.to_json() for c in classes]
    payload["count"] = len(classes)
    _emit(cfg, payload, f"{len(classes)} classes, indices {[c.index for c in classes]}\n")
    return EXIT_OK


def cmd_amalgam_validate(cfg: RunConfig, args) -> int:
    out = []
    for name in cfg.amalgams:
        am = am_mod.build_amalgam(name, max_cosets=cfg.max_cosets)
        out.append(am_mod.validate(am))
    ok = all(v["pass"] for v in out)
    text = "".join(f"{v['amalgam']:<10} {v['orders']}  {'pass' if v['pass'] else 'FAIL'}\n" for v in out)
    _emit(cfg, {"schema": 1, "amalgams": out, "pass": ok}, text)
    return EXIT_OK if ok else EXIT_MISMATCH


def _read_gens(path: str, n: int) -> list[Permutation]:
    try:
        with open(path) as fh:
            lines = [ln.split("#", 1)[0].strip() for ln in fh]
    except OSError as e:
        raise UsageError(str(e)) from None
    gens = []
    for ln in lines:
        if not ln:
            continue
        try:
            p = Permutation.parse(ln, degree=n)
        except (ValueError, IndexError):
            raise UsageError(f"cannot parse permutation {ln!r}") from None
        if p.degree != n or sorted(p.images) != list(range(n)):
            raise UsageError(f"{ln!r} is not a permutation of the {n} vertices")
        gens.append(p)
    return gens


def cmd_graph_analyze(cfg: RunConfig, args) -> int:
    from . import cosetgraph as cg

    try:
        with open(args.file) as fh:
            g = cg.parse_graph(fh.read())
    except OSError as e:
        raise UsageError(str(e)) from None
    aut = cg.automorphisms(g)
    if args.gens:
        gens = _read_gens(args.gens, g.n)
        try:
            verdict = cg.detect_lr(g, gens, self_dual=args.self_dual)
        except cg.GraphError as e:
            raise UsageError(str(e)) from None
    else:
        verdict = cg.detect_lr(g, [aut.perm(k) for k in aut.generators], self_dual=args.self_dual)
    payload = {"schema": 1, "vertices": g.n, "edges": len(g.edges()), "aut_order": aut.order,
               "group": "given generators" if args.gens else "Aut", "verdict": verdict.to_json()}
    if verdict.is_lr_group:
        c = verdict.decomposition
        plus, full = cg.decomposition_groups(g, c, aut)
        payload["aut_plus_order"] = plus.order
        payload["aut_decomposition_order"] = full.order
        x = cg.index_two_overgroup(aut, plus)
        payload["index_two_overgroup_witness"] = None if x is None else x.cycle_string()
        if args.self_dual and verdict.self_dual != (x is not None):
            raise AssertionError("swap test and index-2 overgroup disagree")
    text = [f"|V| = {g.n}, |Aut| = {aut.order}, LR-group: {verdict.is_lr_group}"]
    if args.all_decompositions:
        decs = cg.all_lr_decompositions(g, aut)
        orbits = cg.decomposition_orbits(g, decs, aut)
        entries = []
        for d in decs:
            w = cg.check_self_dual(g, d, aut)
            entries.append(dict(d.to_json(), self_dual=w is not None,
                                swap_witness=None if w is None else w.cycle_string()))
        payload["decompositions"] = entries
        payload["decomposition_count"] = len(decs)
        payload["decomposition_aut_orbits"] = orbits
        payload["self_dual"] = any(e["self_dual"] for e in entries)
        text.append(f"{len(decs)} LR-decompositions in {len(orbits)} Aut-orbit(s), "
                    f"self_dual={str(payload['self_dual']).lower()}")
    elif args.self_dual and verdict.is_lr_group:
        payload["self_dual"] = verdict.self_dual
        text.append(f"self_dual={str(verdict.self_dual).lower()}")
    _emit(cfg, payload, "\n".join(text) + "\n")
    return EXIT_OK


def cmd_graph_build(cfg: RunConfig, args) -> int:
    from . import cosetgraph as cg

    spec = get_amalgam(cfg.amalgams[0])
    if args.relator:
        words = [w for text in args.relator for w in parse_word_list(text, spec.presentation.generators)]
        fc = cg.finite_completion(spec, words)
    else:
        try:
            fc = cg.search_completion(spec, require_lr=args.require_lr and spec.lr_group is not None)
        except cg.GraphError as e:
            raise ResourceError(str(e)) from None
    g, actions = cg.build_coset_graph(fc)
    payload = {"schema": 1, "completion": fc.to_json(), "graph": {"vertices": g.n, "edges": len(g.edges())},
               "generator_actions": {k: v.cycle_string() for k, v in actions.items()}}
    if spec.lr_group is not None:
        v = cg.completion_lr_check(fc, self_dual=True)
        payload["lr_image"] = v.to_json()
    if args.graph_out:
        with open(args.graph_out, "w") as fh:
            fh.write(g.format())
    _emit(cfg, payload, f"{spec.name}: quotient of order {fc.order}, graph on {g.n} vertices\n")
    return EXIT_OK


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--output", "-o")
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for interface stability; the searches run sequentially")
    common.add_argument("--max-cosets", type=int)
    common.add_argument("--node-cap", type=int)

    p = argparse.ArgumentParser(prog="lrgroups", description="LR-structures of arc-transitive amalgams")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("table1", parents=[common], help="reproduce the LR-group table")
    grp = t.add_mutually_exclusive_group(required=True)
    grp.add_argument("--amalgam", action="append")
    grp.add_argument("--all", action="store_true")

    e = sub.add_parser("enumerate", parents=[common], help="coset enumeration")
    e.add_argument("--pres")
    e.add_argument("--amalgam")
    e.add_argument("--sub", default="")
    e.add_argument("--strategy", choices=("hlt", "felsch"), default="hlt")
    e.add_argument("--table", action="store_true", help="include the coset table")

    lo = sub.add_parser("lowindex", parents=[common], help="low-index subgroups of A")
    lo.add_argument("--amalgam", required=True)
    lo.add_argument("--index", type=int, required=True)
    lo.add_argument("--exact", action="store_true")
    lo.add_argument("--lr-filter", action="store_true")

    a = sub.add_parser("amalgam", help="amalgam checks")
    asub = a.add_subparsers(dest="action", required=True)
    v = asub.add_parser("validate", parents=[common])
    vg = v.add_mutually_exclusive_group(required=True)
    vg.add_argument("--amalgam", action="append")
    vg.add_argument("--all", action="store_true")

    g = sub.add_parser("graph", help="finite tetravalent graphs")
    gsub = g.add_subparsers(dest="action", required=True)
    an = gsub.add_parser("analyze", parents=[common])
    an.add_argument("file")
    an.add_argument("--gens")
    an.add_argument("--all-decompositions", action="store_true")
    an.add_argument("--self-dual", action="store_true")
    bc = gsub.add_parser("build-completion", parents=[common])
    bc.add_argument("--amalgam", required=True)
    bc.add_argument("--relator", action="append", help="extra relators (comma separated words)")
    bc.add_argument("--require-lr", action="store_true")
    bc.add_argument("--graph-out")
    return p


def _config(args) -> RunConfig:
    names: list[str] = []
    if getattr(args, "all", False):
        names = list(NAMES)
    else:
        am = getattr(args, "amalgam", None)
        if isinstance(am, list):
            names = am
        elif am:
            names = [am]
    command = args.command + (f" {args.action}" if getattr(args, "action", None) else "")
    return RunConfig(
        command=command,
        amalgams=names,
        max_cosets=args.max_cosets if args.max_cosets is not None else _env_int(ENV_MAX_COSETS, DEFAULT_MAX_COSETS),
        node_cap=args.node_cap if args.node_cap is not None else _env_int(ENV_NODE_CAP, DEFAULT_NODE_CAP),
        threads=args.threads,
        output=args.output,
        format=args.format,
    )


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    from .cosetgraph import GraphError

    try:
        cfg = _config(args)
        if cfg.command == "table1":
            return cmd_table1(cfg)
        if cfg.command == "enumerate":
            return cmd_enumerate(cfg, args)
        if cfg.command == "lowindex":
            return cmd_lowindex(cfg, args)
        if cfg.command == "amalgam validate":
            return cmd_amalgam_validate(cfg, args)
        if cfg.command == "graph analyze":
            return cmd_graph_analyze(cfg, args)
        if cfg.command == "graph build-completion":
            return cmd_graph_build(cfg, args)
        raise UsageError(f"unknown command {cfg.command}")
    except (UsageError, PresentationError, UnknownAmalgam, IndexBoundExceeded, GraphError) as e:
        return _fail(EXIT_USAGE, "usage", e)
    except (ResourceError, CosetLimitExceeded, SearchSpaceExceeded, GroupTooLarge, MemoryError) as e:
        return _fail(EXIT_RESOURCE, "resource", e)
    except AssertionError as e:
        return _fail(EXIT_INVARIANT, "invariant", e)
    except Exception as e:  # anything else is a broken invariant
        return _fail(EXIT_INVARIANT, "invariant", e)


def _fail(code: int, kind: str, err: Exception) -> int:
    sys.stderr.write(dumps({"schema": 1, "error": kind, "type": type(err).__name__, "message": str(err)}))
    return code


if __name__ == "__main__":
    sys.exit(main())
