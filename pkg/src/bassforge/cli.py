"""Command-line interface.

Exit codes: 0 when a report or verdict (including Unknown) was produced, 1 for
input errors, 2 for internal assertion failures.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .gog import GogError, collapse, validate
from .textformat import ParseError, parse_diagnostics, serialize
from .verdict import Verdict


class InputError(Exception):
    pass


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    gamma, diags = parse_diagnostics(text)
    if gamma is None:
        raise InputError("\n".join(f"{path}:{d}" for d in diags))
    return gamma


def _verdict_json(v: Verdict):
    out = v.to_json()
    out.setdefault("assumptions", [])
    return out


def _human_verdict(v: Verdict):
    lines = [f"verdict: {v.verdict}"]
    if v.order is not None:
        lines.append(f"order: {v.order}")
    if v.rank is not None:
        lines.append(f"rank: {v.rank}")
    if isinstance(v.data.get("group"), str):
        lines.append(f"group: {v.data['group']}")
    if v.reason:
        lines.append(f"reason: {v.reason}")
    clause = v.data.get("clause")
    if clause:
        lines.append(f"clause: {clause}")
    if v.certificate is not None:
        lines.append("certificate: " + json.dumps(v.certificate.to_json(), sort_keys=True, default=str))
    for a in v.assumptions:
        lines.append(f"assumption: {a}")
    return "\n".join(lines) + "\n"


# -- commands ---------------------------------------------------------------------------

def cmd_validate(args, gamma):
    problems = validate(gamma)
    if problems:
        raise InputError("\n".join(problems))
    text = f"valid: {len(gamma.vertices)} vertices, {len(gamma.edges)} edges\n"
    return text, {"verdict": "Valid", "vertices": len(gamma.vertices), "edges": len(gamma.edges)}


def _graph_result(g):
    text = serialize(g)
    return text, {"graph": text}


def cmd_reduce(args, gamma):
    from .moves import reduce

    return _graph_result(reduce(gamma))


def cmd_collapse(args, gamma):
    names = [x for x in args.edges.split(",") if x]
    return _graph_result(collapse(gamma, names))


def cmd_slide(args, gamma):
    from .moves import slide

    g = None
    if args.conjugator is not None:
        G = gamma.vertex(gamma.oriented(args.edge).origin).group
        g = G.element(args.conjugator)
    return _graph_result(slide(gamma, args.edge, args.over, g))


def cmd_census(args, gamma):
    from .moves import enumerate_deformation_space, type_multisets

    c = enumerate_deformation_space(gamma, args.bound)
    vs, es = type_multisets(gamma)
    lines = [f"members: {len(c)}", f"exhaustive: {str(c.exhaustive).lower()}", f"bound: {c.bound}"]
    for i, m in enumerate(c.members):
        lines.append(f"--- member {i}")
        lines.append(serialize(m).rstrip("\n"))
    data = {"members": len(c), "exhaustive": c.exhaustive, "bound": c.bound,
            "graphs": [serialize(m) for m in c.members],
            "vertex_types": [repr(x) for x in vs], "edge_types": [repr(x) for x in es]}
    return "\n".join(lines) + "\n", data


def cmd_cylinders(args, gamma):
    from .cylinders import collapsed_tree_of_cylinders, tree_of_cylinders

    g = collapsed_tree_of_cylinders(gamma) if args.collapsed else tree_of_cylinders(gamma)
    text, data = _graph_result(g)
    data["trivial"] = not g.edges
    return text, data


def cmd_twists(args, gamma):
    from .twists import decide_twists, twist_presentation

    tp = twist_presentation(gamma)
    summary = tp.summary()
    lines = [f"factor {k}: {v}" for k, v in summary["factors"].items()]
    lines.append(f"vertex relations: {summary['vertex_relations']}")
    lines.append(f"edge relations: {summary['edge_relations']}")
    text = "\n".join(lines) + "\n"
    if not args.decide:
        return text, {"presentation": summary}
    v = decide_twists(tp)
    return text + _human_verdict(v), v


def _verdict_cmd(fn):
    def run(args, gamma):
        v = fn(gamma)
        return _human_verdict(v), v
    return run


def cmd_struct_report(args, gamma):
    from .criteria import structure_report

    rep = structure_report(gamma)
    data = rep.to_json()
    lines = [f"verdict: {data['verdict']}", f"twist part: {rep.twist_part.verdict}"]
    for v, o, c in rep.qh_factors:
        lines.append(f"surface factor {v} ({o.describe()}): {c}")
    for v, d, c in rep.parabolic_factors:
        lines.append(f"parabolic factor {v} {d}: {c}")
    lines.append(f"note: {rep.exactness_note}")
    data["assumptions"] = list(gamma.assumptions())
    return "\n".join(lines) + "\n", data


def _criteria(name):
    def fn(gamma):
        from . import criteria

        if name == "out_infinite_virtually_free":
            return criteria.out_infinite_virtually_free(gamma)
        return getattr(criteria, name)(gamma)
    return fn


COMMANDS = {
    "validate": cmd_validate,
    "reduce": cmd_reduce,
    "collapse": cmd_collapse,
    "slide": cmd_slide,
    "census": cmd_census,
    "cylinders": cmd_cylinders,
    "twists": cmd_twists,
    "out-vfree": _verdict_cmd(_criteria("out_infinite_virtually_free")),
    "out-freeprod": _verdict_cmd(_criteria("freep_check")),
    "rht-check": _verdict_cmd(_criteria("rht_check")),
    "struct-report": cmd_struct_report,
    "coru-check": _verdict_cmd(_criteria("cor_outu_check")),
}


def build_parser():
    p = argparse.ArgumentParser(prog="bassforge", description="Graphs of groups, twists and trees of cylinders.")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--no-timings", action="store_true", help="leave the timings object empty")
    sub = p.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("path")
        sp.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        sp.add_argument("--no-timings", action="store_true", default=argparse.SUPPRESS)
        if name == "collapse":
            sp.add_argument("--edges", required=True, help="comma-separated edge names")
        if name == "slide":
            sp.add_argument("--edge", required=True, help="oriented edge to move (e or ~e)")
            sp.add_argument("--over", required=True, help="oriented edge to slide over")
            sp.add_argument("--conjugator", help="element of the common origin group")
        if name == "census":
            sp.add_argument("--bound", type=int, default=None)
        if name == "cylinders":
            sp.add_argument("--collapsed", action="store_true")
        if name == "twists":
            sp.add_argument("--decide", action="store_true")
    return p


def _emit(args, text, result, elapsed, out):
    if not args.json:
        out.write(text)
        return
    if isinstance(result, Verdict):
        data = _verdict_json(result)
    else:
        data = dict(result)
        data.setdefault("verdict", "Done")
        data.setdefault("assumptions", [])
    data["timings"] = {} if args.no_timings else {"seconds": round(elapsed, 6)}
    data["command"] = args.command
    out.write(json.dumps(data, sort_keys=True, indent=2, default=str) + "\n")


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        gamma = _load(args.path)
        text, result = COMMANDS[args.command](args, gamma)
    except (InputError, ParseError, GogError, ValueError, KeyError) as exc:
        msg = exc.args[0] if isinstance(exc, KeyError) and exc.args else str(exc)
        if args.json:
            out.write(json.dumps({"error": str(msg), "exit": 1}, sort_keys=True) + "\n")
        err.write(f"error: {msg}\n")
        return 1
    except AssertionError as exc:
        err.write(f"internal assertion failed: {exc}\n")
        return 2
    _emit(args, text, result, time.perf_counter() - start, out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
