"""The `cyc` command line: one binary, seven subcommands.

oracle, dp, tw, gen, pipeline, verify and suite all funnel through main(),
which returns a RunReport and leaves the exit-code contract in one place:
0 completed (yes and no are both completions), 2 usage, 3 budget or size
exceeded, 4 invalid input.

Human output ends with YES/NO or an integer on the last stdout line. --json
replaces it with a machine report: "schema": 1, keys sorted, timings left
out, so identical invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import acceptance
from .decomp import exact_treewidth, parse_td, serialize_td, validate
from .dp import solve_pac_traced
from .errors import (
    BudgetExceeded,
    CyclabError,
    ParameterError,
    SizeError,
    WidthError,
)
from .generators import catalog, clique_reduction, wall
from .graph import parse_graph, serialize_graph
from .oracle import OracleBudget, cyclability, first_failing_subset
from .planar import (
    PipelineConfig,
    RailedAnnulusCertificate,
    concentric_problems,
    parse_certificate,
    parse_rotation,
    pipeline_solve_traced,
    railed_annulus_problems,
    serialize_certificate,
    serialize_rotation,
)


@dataclass
class RunReport:
    command: str
    answer: bool | int | None
    timings: dict = field(default_factory=dict)
    traces: object = None
    exit_code: int = 0


class _Usage(Exception):
    pass


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _graph(args):
    if not getattr(args, "graph", None):
        raise _Usage("--graph FILE is required")
    return parse_graph(_read(args.graph))


def _annotated(args, g, file_r):
    """R resolution order: --annotated flag, r lines from the file, all of V."""
    if getattr(args, "annotated", None) is not None:
        ids = [int(x) for x in args.annotated.replace(",", " ").split()]
        r = frozenset(ids)
        if not r <= set(g.vertices):
            raise ParameterError("--annotated mentions vertices outside the graph")
        return r
    if file_r:
        return file_r
    return frozenset(g.vertices)


def _budget(args) -> OracleBudget:
    ms = getattr(args, "budget_ms", None)
    return OracleBudget(max_vertices=64, time_limit_ms=ms)


def _need_k(args) -> int:
    if args.k is None:
        raise _Usage("-k INT is required here")
    return args.k


# -- subcommand handlers: return (answer, payload, human lines) -------------------


def _cmd_oracle(args):
    g, file_r = _graph(args)
    budget = _budget(args)
    if args.cyclability:
        return cyclability(g, budget), {}, []
    k = _need_k(args)
    r = _annotated(args, g, file_r)
    lines = []
    payload = {}
    if len(r) < k:
        lines.append(f"note: only {len(r)} annotated vertices, so any k={k} holds vacuously")
    bad = first_failing_subset(g, r, k, budget)
    if bad is not None and args.witness:
        lines.append("failing subset: " + " ".join(str(v) for v in sorted(bad)))
        payload["failing_subset"] = sorted(bad)
    return bad is None, payload, lines


def _cmd_dp(args):
    g, file_r = _graph(args)
    k = _need_k(args)
    r = _annotated(args, g, file_r)
    td = parse_td(_read(args.td)) if args.td else None
    answer, trace = solve_pac_traced(g, r, k, td, width_cap=args.width_cap)
    lines = []
    if len(r) < k:
        lines.append(f"note: only {len(r)} annotated vertices, so any k={k} holds vacuously")
    if args.trace_dp:
        for nid, kind, bag, entries in trace.nodes:
            lines.append(f"node {nid} {kind} bag={bag} entries={entries}")
        for nid, kind in trace.flags:
            lines.append(f"signature died at node {nid} ({kind})")
        for i, (count, loop) in sorted(trace.root.items()):
            lines.append(f"root i={i} entries={count} loop={loop}")
        if trace.note:
            lines.append(trace.note)
    payload = {
        "width": trace.width,
        "nodes": len(trace.nodes),
        "entries_max": max((e for *_, e in trace.nodes), default=0),
    }
    return answer, payload, lines


def _cmd_tw(args):
    g, _ = _graph(args)
    width, td = exact_treewidth(g)
    if args.emit_td:
        _write(args.emit_td, serialize_td(td, g.n))
    return width, {"width": width}, []


def _cmd_gen(args):
    name, params = args.name, list(args.params)
    roles = None
    cert = None
    if name == "wall":
        if not params:
            raise _Usage("gen wall needs the height parameter")
        out = wall(int(params[0]))
        g, emb, cert = out.graph, out.embedding, out.certificate
    elif name == "cliqueReduction":
        if not params:
            raise _Usage("gen cliqueReduction needs k, plus --graph for the host")
        host, _ = _graph(args)
        out = clique_reduction(host, int(params[0]))
        g, emb = out.graph, None
        roles = {str(v): list(role) for v, role in sorted(out.roles.items())}
    else:
        if name.startswith("random") and args.seed is not None:
            params.append(args.seed)
        item = catalog(name, *params)
        g, emb = item.graph, item.embedding
        cert = item.extras.get("railed")
    lines = []
    if args.out:
        _write(args.out, serialize_graph(g))
        lines.append(f"wrote {args.out}")
    if args.emb_out:
        if emb is None:
            raise ParameterError(f"{name} carries no embedding")
        _write(args.emb_out, serialize_rotation(emb))
        lines.append(f"wrote {args.emb_out}")
    if args.cert_out:
        if cert is None:
            raise ParameterError(f"{name} carries no certificate")
        _write(args.cert_out, serialize_certificate(cert))
        lines.append(f"wrote {args.cert_out}")
    if args.roles_out:
        if roles is None:
            raise ParameterError(f"{name} carries no vertex roles")
        _write(args.roles_out, json.dumps(roles, indent=2, sort_keys=True) + "\n")
        lines.append(f"wrote {args.roles_out}")
    return None, {"n": g.n, "m": g.m, "written": len(lines)}, lines


def _cmd_pipeline(args):
    g, file_r = _graph(args)
    k = _need_k(args)
    r = _annotated(args, g, file_r)
    emb = parse_rotation(_read(args.emb), g) if args.emb else None
    certs = []
    for path in args.cert or ():
        certs.append(parse_certificate(_read(path)))
    cfg_kw = _constants(args.constants)
    cfg_kw["oracle_budget"] = _budget(args)
    answer, trace = pipeline_solve_traced(g, emb, r, k, PipelineConfig(**cfg_kw),
                                          certificates=certs)
    lines = []
    if args.trace:
        for round_ in trace.rounds:
            lines.append(" ".join(f"{key}={val}" for key, val in round_.items()))
    return answer, {"rounds": trace.rounds if args.trace else len(trace.rounds)}, lines


_CONSTANT_KEYS = {
    "width_cap", "crop_width_cap", "step1_exact_n", "r", "y", "q", "b",
    "step1_cap", "rings_needed", "density", "w_lo", "w_hi", "max_rounds",
}


def _constants(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for part in text.split(","):
        if "=" not in part:
            raise ParameterError(f"--constants wants key=value pairs, got {part!r}")
        key, _, val = part.partition("=")
        key = key.strip()
        if key not in _CONSTANT_KEYS:
            raise ParameterError(f"unknown constant {key!r}")
        try:
            out[key] = int(val)
        except ValueError:
            raise ParameterError(f"constant {key} needs an integer, got {val!r}") from None
    return out


def _cmd_verify(args):
    g, _ = _graph(args)
    if args.kind == "td":
        if not args.td:
            raise _Usage("verify td needs --td FILE")
        problems = validate(g, parse_td(_read(args.td)))
    else:
        if not args.emb or not args.cert_in:
            raise _Usage(f"verify {args.kind} needs --emb FILE and --cert FILE")
        emb = parse_rotation(_read(args.emb), g)
        cert = parse_certificate(_read(args.cert_in))
        if args.kind == "concentric":
            if isinstance(cert, RailedAnnulusCertificate):
                cert = cert.concentric
            problems = concentric_problems(g, emb, cert)
        else:
            if not isinstance(cert, RailedAnnulusCertificate):
                raise ParameterError("annulus verification needs a certificate with rails")
            problems = railed_annulus_problems(g, emb, cert)
    lines = [f"violation: {p}" for p in problems]
    return not problems, {"violations": list(problems)}, lines


_LEVELS = {"smoke": (2, 8), "desk": tuple(acceptance.CRITERIA)}


def _cmd_suite(args):
    if args.only:
        numbers = sorted({int(x) for x in args.only.replace(",", " ").split()})
        unknown = [n for n in numbers if n not in acceptance.CRITERIA]
        if unknown:
            raise ParameterError(f"no criteria named {unknown}")
    else:
        numbers = _LEVELS[args.level]
    results = []
    for n in numbers:
        res = acceptance.CRITERIA[n]()
        results.append(res)
        if not args.json:
            print(res.line, flush=True)
    payload = {"criteria": [
        {"number": r.number, "name": r.name, "ok": r.ok, "detail": r.detail}
        for r in results
    ]}
    return all(r.ok for r in results), payload, []


# -- parser -----------------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cyc",
        description="Decide cyclability questions: does every choice of k "
                    "vertices lie on a common cycle?",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph=True, k=False):
        if graph:
            p.add_argument("--graph", metavar="FILE", help="graph in p cyc format")
        if k:
            p.add_argument("-k", type=int, default=None, help="subset size to guarantee")
        p.add_argument("--annotated", metavar="V1,V2,...",
                       help="override the annotated set R (default: r lines, then V)")
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.add_argument("--seed", type=int, default=None, help="seed for random builders")
        p.add_argument("--threads", type=int, default=1,
                       help="reserved; execution is sequential")
        p.add_argument("--budget-ms", type=int, default=None, dest="budget_ms",
                       help="approximate wall-clock cap for exhaustive searches")

    p = sub.add_parser("oracle", help="exhaustive search: PAC or full cyclability")
    common(p, k=True)
    p.add_argument("--cyclability", action="store_true",
                   help="print the largest k that holds instead of deciding one")
    p.add_argument("--witness", action="store_true",
                   help="on NO, print the first failing subset")
    p.set_defaults(func=_cmd_oracle)

    p = sub.add_parser("dp", help="decide PAC by dynamic programming over a tree decomposition")
    common(p, k=True)
    p.add_argument("--td", metavar="FILE", help="decomposition to use (default: exact)")
    p.add_argument("--width-cap", type=int, default=8, dest="width_cap",
                   help="refuse decompositions wider than this")
    p.add_argument("--trace-dp", action="store_true", dest="trace_dp",
                   help="print per-node table sizes and root verdicts")
    p.set_defaults(func=_cmd_dp)

    p = sub.add_parser("tw", help="exact treewidth, optionally writing the decomposition")
    common(p)
    p.add_argument("--emit-td", metavar="FILE", dest="emit_td",
                   help="write the decomposition in s/b line format")
    p.set_defaults(func=_cmd_tw)

    p = sub.add_parser("gen", help="write catalog graphs, walls, ring chains, reductions")
    p.add_argument("name", help="catalog name, wall, or cliqueReduction")
    p.add_argument("params", nargs="*", type=int, help="integer parameters")
    common(p)
    p.add_argument("-o", "--out", metavar="FILE", help="graph output path")
    p.add_argument("--emb-out", metavar="FILE", dest="emb_out",
                   help="rotation system output path")
    p.add_argument("--cert-out", metavar="FILE", dest="cert_out",
                   help="certificate output path (ring chains, walls)")
    p.add_argument("--roles", metavar="FILE", dest="roles_out",
                   help="vertex role map output path (cliqueReduction)")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("pipeline", help="reduction loop: width check, deletions, un-annotations")
    common(p, k=True)
    p.add_argument("--emb", metavar="FILE", help="rotation system (enables steps 2-4)")
    p.add_argument("--cert", metavar="FILE", action="append",
                   help="railed annulus certificate, repeatable")
    p.add_argument("--constants", metavar="K=V,...",
                   help=f"override loop constants: {', '.join(sorted(_CONSTANT_KEYS))}")
    p.add_argument("--trace", action="store_true", help="print every round")
    p.set_defaults(func=_cmd_pipeline)

    p = sub.add_parser("verify", help="check a decomposition or certificate against a graph")
    p.add_argument("kind", choices=("td", "concentric", "annulus"))
    common(p)
    p.add_argument("--td", metavar="FILE", help="decomposition file (kind td)")
    p.add_argument("--emb", metavar="FILE", help="rotation system (certificate kinds)")
    p.add_argument("--cert", metavar="FILE", dest="cert_in",
                   help="certificate file (certificate kinds)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("suite", help="run the acceptance matrix")
    common(p, graph=False)
    p.add_argument("--level", choices=sorted(_LEVELS), default="desk",
                   help="smoke = the fast criteria, desk = all eight")
    p.add_argument("--only", metavar="N1,N2,...", help="run these criteria only")
    p.set_defaults(func=_cmd_suite)

    return parser


def _fmt(answer) -> str:
    if isinstance(answer, bool):
        return "YES" if answer else "NO"
    return str(answer)


def main(argv=None) -> RunReport:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else 2
        return RunReport("usage", None, exit_code=code)

    t0 = time.perf_counter()
    try:
        answer, payload, lines = args.func(args)
    except _Usage as e:
        print(f"usage: {e}", file=sys.stderr)
        return RunReport(args.command, None, exit_code=2)
    except (SizeError, WidthError, BudgetExceeded) as e:
        print(f"budget exceeded: {e}", file=sys.stderr)
        return RunReport(args.command, None, exit_code=3)
    except (CyclabError, OSError) as e:
        print(f"invalid input: {e}", file=sys.stderr)
        return RunReport(args.command, None, exit_code=4)

    report = RunReport(args.command, answer,
                       timings={"total_ms": (time.perf_counter() - t0) * 1000},
                       traces=payload)
    if args.command == "suite" and answer is False:
        report.exit_code = 1
    if args.json:
        doc = {"schema": 1, "command": report.command, "answer": report.answer,
               "exit_code": report.exit_code}
        doc.update(payload)
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
        if answer is not None:
            print(_fmt(answer))
    return report


def console_main():
    sys.exit(main().exit_code)


if __name__ == "__main__":
    console_main()
