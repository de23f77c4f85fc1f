"""The ``racg`` command line.

Exit codes: 0 when a result was computed (whatever the mathematical
verdict), 1 for malformed input or a violated precondition, 2 when a
resource limit was hit.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import budget
from .abelian import Presentation, abelianize, smith_normal_form
from .cliques import check_conditions, clique_graph, collapse, star_poset
from .errors import ConditionFailure, RacgError, ResourceLimit, SizeLimitExceeded
from .extensions import (
    PCFamily,
    all_sils,
    decompose,
    extension_defining_graph,
    extension_presentation,
    hypothesis_violation,
    semidirect_evaluator,
)
from .graph import Graph, dumps, format_set, to_dot
from .involution import bounded_involution_enumeration, involution_graph_racg
from .recognize import parse_input, recognize

EXIT_OK, EXIT_INPUT, EXIT_LIMIT = 0, 1, 2

FIXTURES = Path(__file__).with_name("fixtures")


class InputError(RacgError):
    pass


def resolve(path: str) -> Path:
    """Paths under ``fixtures/`` fall back to the bundled corpus."""
    p = Path(path)
    if not p.exists() and p.parts and p.parts[0] == "fixtures":
        alt = FIXTURES.joinpath(*p.parts[1:])
        if alt.exists():
            return alt
    return p


def read_json(path: str):
    p = resolve(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON: {exc}") from None


def _cap(g: Graph, args) -> Graph:
    if args.max_vertices is not None and len(g) > args.max_vertices:
        raise SizeLimitExceeded(f"graph has {len(g)} vertices, more than --max-vertices {args.max_vertices}")
    return g


def read_graph(path, args) -> Graph:
    return _cap(Graph.from_dict(read_json(path)), args)


def _graph_text(g: Graph, labels=None) -> str:
    lines = [f"{len(g)} vertices, {len(g.edge_list())} edges"]
    for v in g.vertices:
        lines.append(f"  {v}" + (f"  = {labels[v]}" if labels and v in labels else ""))
    for u, v in g.edge_list():
        lines.append(f"  {u} -- {v}")
    return "\n".join(lines) + "\n"


def _emit(args, obj, text, dot=None):
    if args.dot and dot is not None:
        return dot
    if args.json:
        return dumps(obj)
    return text


# -- commands -------------------------------------------------------------


def cmd_cliquegraph(args):
    cg = clique_graph(read_graph(args.input, args))
    return EXIT_OK, _emit(args, cg.to_dict(), "clique graph: " + _graph_text(cg.graph), to_dot(cg.graph))


def cmd_collapse(args):
    g = read_graph(args.input, args)
    try:
        c = collapse(g, reverse=args.reverse)
    except ConditionFailure as exc:
        # collapsing is only defined on graphs passing the three conditions
        sys.stderr.write(exc.report.summary() + "\n")
        if args.json:
            return EXIT_INPUT, dumps({"error": "conditions failed", "conditions": exc.report.to_dict()})
        return EXIT_INPUT, ""
    return EXIT_OK, _emit(args, c.to_dict(), "collapsed graph: " + _graph_text(c), to_dot(c))


def cmd_check(args):
    report = check_conditions(read_graph(args.input, args))
    return EXIT_OK, _emit(args, report.to_dict(), report.summary() + "\n")


def cmd_poset(args):
    p = star_poset(read_graph(args.input, args))
    lines = [f"{len(p.classes)} star classes"]
    for i, c in enumerate(p.classes):
        lines.append(f"  [{i}] {format_set(c)}")
    for lo, hi in sorted(p.hasse):
        lines.append(f"  [{lo}] < [{hi}]")
    return EXIT_OK, _emit(args, p.to_dict(), "\n".join(lines) + "\n")


def cmd_invgraph(args):
    if args.extension:
        fam = PCFamily.from_dict(read_json(args.extension))
        _cap(fam.graph, args)
        ig = bounded_involution_enumeration(semidirect_evaluator(fam), radius=args.radius).involution_graph()
    elif args.input:
        ig = involution_graph_racg(read_graph(args.input, args))
    else:
        raise InputError("invgraph needs a graph file or --extension FILE")
    labels = {v: " ".join(ig.labels[v]) for v in ig.graph.vertices}
    text = f"involution graph ({ig.provenance}): " + _graph_text(ig.graph, labels)
    for a in ig.assumptions:
        text += f"assumption: {a}\n"
    return EXIT_OK, _emit(args, ig.to_dict(), text, to_dot(ig.graph, labels))


def cmd_recognize(args):
    data = read_json(args.input)
    inp = parse_input(data)
    g = inp.graph if inp.graph is not None else inp.involution_graph.graph
    _cap(g, args)
    v = recognize(inp, radius=args.radius, retries=args.retries, seed=args.seed)
    code = EXIT_LIMIT if v.step == "resource-limit" else EXIT_OK
    return code, _emit(args, v.to_dict(), v.summary() + "\n")


def cmd_extend(args):
    fam = PCFamily.from_dict(read_json(args.input))
    _cap(fam.graph, args)
    bad = hypothesis_violation(fam)
    if bad is not None:
        obj = {"hypothesis_violation": str(bad), "pair": list(bad.pair) if bad.pair else None}
        return EXIT_OK, _emit(args, obj, f"hypothesis violated: {bad}\n")
    pres = extension_presentation(fam)
    eg = extension_defining_graph(fam)
    names = eg.display_names()
    obj = {
        "presentation": pres.to_dict(),
        "defining_graph": eg.graph.to_dict(),
        "labels": {v: list(eg.labels[v]) for v in eg.graph.vertices},
    }
    text = "defining graph: " + _graph_text(eg.graph, names)
    return EXIT_OK, _emit(args, obj, text, to_dot(eg.graph, names))


def cmd_sils(args):
    ws = all_sils(read_graph(args.input, args))
    obj = {"has_sil": bool(ws), "witnesses": [w.to_dict() for w in ws]}
    if ws:
        text = "".join(f"SIL: {w.v}, {w.w} with component {format_set(w.component)}\n" for w in ws)
    else:
        text = "no SILs\n"
    return EXIT_OK, _emit(args, obj, text)


def cmd_decompose(args):
    ds = decompose(read_graph(args.input, args))
    lines = [f"{len(ds)} decompositions"]
    for d in ds:
        pcs = ", ".join(f"{a} = chi({d.acting}, {format_set(dom)})" for a, dom in zip(d.alphas, d.domains))
        lines.append(f"  acting {d.acting}: {pcs}; base {len(d.base)} vertices, {len(d.base.edge_list())} edges")
    return EXIT_OK, _emit(args, [d.to_dict() for d in ds], "\n".join(lines) + "\n")


def cmd_abelianize(args):
    m = abelianize(Presentation.from_dict(read_json(args.input)))
    return EXIT_OK, _emit(args, m.to_dict(), m.describe() + "\n")


def cmd_snf(args):
    data = read_json(args.input)
    rows = data.get("matrix") if isinstance(data, dict) else data
    if not isinstance(rows, list) or not all(isinstance(r, list) and all(isinstance(x, int) for x in r) for r in rows):
        raise InputError("snf expects a list of integer rows, or {\"matrix\": [...]}")
    if rows and len({len(r) for r in rows}) != 1:
        raise InputError("matrix rows have different lengths")
    cols = data.get("cols") if isinstance(data, dict) else None
    d = smith_normal_form(rows, cols=cols if cols is not None else (len(rows[0]) if rows else 0))
    text = "invariant factors: " + (" ".join(map(str, d.invariant_factors)) or "(none)") + "\n"
    return EXIT_OK, _emit(args, d.to_dict(), text)


# -- batch ------------------------------------------------------------------

BATCH_COMMANDS = ("recognize", "check", "extend", "sils")


def _batch_outcome(command, path, opts):
    """Compute one row's outcome string; runs in a worker process."""
    with budget.deadline(opts["budget"]):
        data = read_json(path)
        if command == "recognize":
            v = recognize(parse_input(data), radius=opts["radius"], retries=opts["retries"], seed=opts["seed"])
            return v.outcome_name
        if command == "check":
            return "pass" if check_conditions(Graph.from_dict(data)).ok else "fail"
        if command == "extend":
            return "violation" if hypothesis_violation(PCFamily.from_dict(data)) else "ok"
        if command == "sils":
            return "sil" if all_sils(Graph.from_dict(data)) else "none"
    raise InputError(f"unknown batch command {command!r}")


def _batch_row(job):
    entry, path, opts = job
    command = entry.get("command", "recognize")
    try:
        outcome = _batch_outcome(command, path, opts)
    except ResourceLimit as exc:
        return {"outcome": "error", "error": f"resource limit: {exc}"}
    except (RacgError, ValueError) as exc:
        return {"outcome": "error", "error": str(exc)}
    return {"outcome": outcome}


def load_manifest(path: str) -> tuple[list[dict], Path]:
    data = read_json(path)
    entries = data.get("entries") if isinstance(data, dict) else data
    if not isinstance(entries, list):
        raise InputError("manifest must be a list of entries or {\"entries\": [...]}")
    for e in entries:
        if not isinstance(e, dict) or not isinstance(e.get("path"), str):
            raise InputError(f"malformed manifest entry {e!r}")
    return entries, resolve(path).parent


def run_batch(entries, base: Path, opts, jobs=1) -> list[dict]:
    work = []
    rows = []
    for e in entries:
        p = base / e["path"]
        row = {"path": e["path"], "command": e.get("command", "recognize"), "expected": e.get("expected")}
        rows.append(row)
        if not p.exists():
            sys.stderr.write(f"batch: missing input {e['path']}\n")
            row.update(outcome="error", error="missing file")
        else:
            work.append((row, (e, str(p), opts)))
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_batch_row, [j for _, j in work]))
    else:
        results = [_batch_row(j) for _, j in work]
    for (row, _), res in zip(work, results):
        row.update(res)
    for row in rows:
        exp = row["expected"]
        row["match"] = None if exp is None or row["outcome"] == "error" else row["outcome"] == exp
    return rows


def cmd_batch(args):
    entries, base = load_manifest(args.input)
    opts = {"radius": args.radius, "retries": args.retries, "seed": args.seed, "budget": budget.from_env()}
    jobs = args.jobs or min(len(entries), os.cpu_count() or 1) or 1
    rows = run_batch(entries, base, opts, jobs)
    if args.json:
        return EXIT_OK, dumps(rows)
    lines = [f"{'input':<32} {'command':<10} {'outcome':<10} {'expected':<10} match"]
    for r in rows:
        m = {True: "yes", False: "NO", None: "-"}[r["match"]]
        lines.append(f"{r['path']:<32} {r['command']:<10} {r['outcome']:<10} {str(r['expected'] or '-'):<10} {m}")
    return EXIT_OK, "\n".join(lines) + "\n"


# -- argument parsing --------------------------------------------------------

COMMANDS = {
    "cliquegraph": (cmd_cliquegraph, "clique graph of a graph, with clique labels"),
    "collapse": (cmd_collapse, "collapse a clique graph back to its defining graph"),
    "check": (cmd_check, "check the three clique-graph conditions"),
    "poset": (cmd_poset, "star poset of a graph"),
    "invgraph": (cmd_invgraph, "involution graph of a Coxeter group or an extension"),
    "recognize": (cmd_recognize, "decide whether a group is a right-angled Coxeter group"),
    "extend": (cmd_extend, "presentation and defining graph of a partial-conjugation extension"),
    "sils": (cmd_sils, "separating intersections of links"),
    "decompose": (cmd_decompose, "split a graph as a partial-conjugation extension"),
    "abelianize": (cmd_abelianize, "abelianization of a finite presentation"),
    "snf": (cmd_snf, "Smith normal form of an integer matrix"),
    "batch": (cmd_batch, "run a manifest of inputs and tabulate outcomes"),
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    out = common.add_mutually_exclusive_group()
    out.add_argument("--json", action="store_true", help="machine-readable output")
    out.add_argument("--dot", action="store_true", help="DOT output for graph results")
    common.add_argument("--max-vertices", type=int, default=None, metavar="N", help="refuse larger input graphs")

    search = argparse.ArgumentParser(add_help=False)
    search.add_argument("--radius", type=int, default=4, metavar="N", help="word length bound for class enumeration")
    search.add_argument("--retries", type=int, default=8, metavar="K", help="attempts at alternative basis choices")
    search.add_argument("--seed", type=int, default=0, metavar="S", help="seed for retry shuffles")

    ap = argparse.ArgumentParser(prog="racg", description="Right-angled Coxeter group recognition toolkit.")
    sub = ap.add_subparsers(dest="command", required=True, metavar="command")
    for name, (_, help_) in COMMANDS.items():
        parents = [common, search] if name in ("invgraph", "recognize", "batch") else [common]
        sp = sub.add_parser(name, parents=parents, help=help_, description=help_)
        if name == "invgraph":
            sp.add_argument("input", nargs="?", help="graph JSON")
            sp.add_argument("--extension", metavar="FILE", help="extension JSON (bounded enumeration)")
        else:
            sp.add_argument("input", help="input JSON file")
        if name == "collapse":
            sp.add_argument("--reverse", action="store_true", help="choose vertices from the other end of each class")
        if name == "batch":
            sp.add_argument("--jobs", type=int, default=None, metavar="J", help="worker processes")
    return ap


def _validate(args):
    for flag in ("radius", "retries", "max_vertices", "jobs"):
        val = getattr(args, flag, None)
        if val is not None and val < (0 if flag == "retries" else 1):
            raise InputError(f"--{flag.replace('_', '-')} must be positive")
    if args.dot and args.command not in ("cliquegraph", "collapse", "invgraph", "extend"):
        raise InputError(f"--dot is not available for {args.command}")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    func = COMMANDS[args.command][0]
    try:
        _validate(args)
        with budget.deadline(budget.from_env()):
            code, text = func(args)
    except ResourceLimit as exc:
        sys.stderr.write(f"racg: resource limit: {exc}\n")
        return EXIT_LIMIT
    except (RacgError, ValueError, KeyError, TypeError) as exc:
        sys.stderr.write(f"racg: {exc}\n")
        return EXIT_INPUT
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
