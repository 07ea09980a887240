"""
twinwl command-line interface.

Exit codes: 0 success, 2 an experiment assertion failed, 3 a budget guard
refused the input or a search ran out of budget, 64 usage or input error.
"""

import argparse
import json
import logging
import os
import sys
from typing import List, Optional

from pydantic import BaseModel, ValidationError

from app.core.config import settings
from app.core.errors import BudgetRefusedError, TwinWLError
from app.core.logging import configure_logging
from app.graphs.colored_graph import ColoredGraph
from app.graphs.graph_io import parse_graph, parse_sequence, render_graph, render_sequence
from app.repositories.graph_file_repository import GraphFileRepository
from app.schemas.contraction_dto import SearchBudget, TwinWidthResult
from app.schemas.experiment_dto import ExperimentSpec
from app.schemas.graph_dto import GenerateRequest
from app.services import generator_service, structure_service, wl_service
from app.services.experiment_service import ExperimentService
from app.services.graph_service import GraphService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ASSERTION = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_graph(path: str) -> ColoredGraph:
    if path == "-":
        return parse_graph(sys.stdin.read())
    with open(path, "r", encoding="utf-8") as handle:
        return parse_graph(handle.read())


def _vertices(text: Optional[str]) -> Optional[List[int]]:
    if text is None:
        return None
    return [int(x) for x in text.split(",") if x.strip()]


class _Output:
    def __init__(self, args):
        self.json = args.json
        self.out = args.out
        self.repository = GraphFileRepository(args.out) if args.out else None

    def model(self, name: str, model: BaseModel, text: Optional[str] = None) -> None:
        if self.repository is not None:
            path = self.repository.save_report(name, model)
            logger.info("wrote %s", path)
        if self.json or text is None:
            print(model.model_dump_json(indent=2))
        else:
            print(text)

    def graph(self, name: str, g: ColoredGraph) -> None:
        if self.repository is not None:
            self.repository.save_graph(name, g)
        if self.json:
            print(json.dumps({"graph": render_graph(g), "n": g.n, "m": g.m}, indent=2))
        else:
            sys.stdout.write(render_graph(g))


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="twinwl", description="Twin-width and Weisfeiler-Leman toolkit")
    parser.add_argument("--json", action="store_true", help="Emit JSON documents")
    parser.add_argument("--out", metavar="DIR", help="Also write results under DIR")
    parser.add_argument("--log-level", default=None, help="Logging level (default from LOG_LEVEL)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("gen", help="Generate graphs")
    gen_sub = gen.add_subparsers(dest="family", required=True, parser_class=_Parser)
    p = gen_sub.add_parser("halfgraph")
    p.add_argument("-t", type=int, required=True)
    p.add_argument("--schedule", action="store_true", help="Emit the width-1 sequence instead")
    p = gen_sub.add_parser("cfi")
    p.add_argument("--base", default="K4")
    p.add_argument("--odd", action="store_true")
    p = gen_sub.add_parser("subdivide")
    p.add_argument("graph")
    p.add_argument("-s", type=int, required=True)
    for name in ("cograph", "tww1"):
        p = gen_sub.add_parser(name)
        p.add_argument("-n", type=int, required=True)
        p.add_argument("--seed", type=int, default=0)
        if name == "tww1":
            p.add_argument("--prime", action="store_true")
            p.add_argument("--with-sequence", action="store_true")
    p = gen_sub.add_parser("chain")
    p.add_argument("-a", type=int, required=True)
    p.add_argument("-b", type=int, required=True)
    p.add_argument("--density", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)
    p = gen_sub.add_parser("random")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-p", type=float, default=0.5)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("tww", help="Twin-width search and sequence verification")
    p.add_argument("graph")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--component", action="store_true", help="Component twin-width")
    mode.add_argument("--naive", action="store_true", help="Full enumeration oracle")
    mode.add_argument("--heuristic", type=int, metavar="TARGET", help="Beam search for width <= TARGET")
    mode.add_argument("--verify", action="store_true", help="Treat the input as a contraction sequence")
    p.add_argument(
        "--max-nodes",
        type=int,
        help="Node cap (default EXACT_TWW_MAX_NODES, or HEURISTIC_MAX_NODES with --heuristic)",
    )
    p.add_argument("--time-cap", type=float, default=settings.EXACT_TWW_TIME_CAP)
    p.add_argument("--beam", type=int, default=settings.HEURISTIC_BEAM)

    p = sub.add_parser("canon", help="Canonical form of a twin-width-1 graph")
    p.add_argument("graph")
    p.add_argument("--cs", nargs="*", type=int, metavar="V", help="cs string from a start pair, or the invariant")

    p = sub.add_parser("iso", help="Isomorphism test")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("--oracle", action="store_true", help="Use VF2++ instead of canonical forms")

    p = sub.add_parser("recognize-tww1", help="Decide twin-width at most 1")
    p.add_argument("graph")

    p = sub.add_parser("modtree", help="Modular decomposition tree")
    p.add_argument("graph")

    wl = sub.add_parser("wl", help="Weisfeiler-Leman refinement")
    wl_sub = wl.add_subparsers(dest="action", required=True, parser_class=_Parser)
    p = wl_sub.add_parser("refine")
    p.add_argument("graph")
    p.add_argument("-k", type=int, default=1)
    p = wl_sub.add_parser("distinguish")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("-k", type=int, default=1)

    p = sub.add_parser("pebble", help="Bijective k-pebble game")
    p.add_argument("g")
    p.add_argument("h")
    p.add_argument("-k", type=int, default=2)

    analyze = sub.add_parser("analyze", help="Bipartite structure and rank")
    an_sub = analyze.add_subparsers(dest="action", required=True, parser_class=_Parser)
    for name in ("chain", "halfgraph", "biclique", "matching"):
        p = an_sub.add_parser(name)
        p.add_argument("graph")
        p.add_argument("--left", required=True, help="Comma-separated left side")
        p.add_argument("--right", help="Comma-separated right side (default: the rest)")
    p = an_sub.add_parser("rank")
    p.add_argument("graph")
    p.add_argument("-A", required=True)
    p.add_argument("-B", required=True)
    p.add_argument("--connectivity", action="store_true", help="Rank-connectivity instead of cut rank")
    p = an_sub.add_parser("audit")
    p.add_argument("sequence", help="Graph text with merge lines")

    p = sub.add_parser("experiment", help="Run an experiment pipeline")
    p.add_argument("name")
    p.add_argument("-k", type=int, default=1)
    p.add_argument("-s", type=int, default=None)
    p.add_argument("--base", default="K4")
    p.add_argument("--transfer", action="store_true")
    p.add_argument("--heuristic-time-cap", type=float, default=30.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10)
    p.add_argument("--max-n", type=int, default=12)
    return parser


def _gen(args, out: _Output, service: GraphService) -> int:
    if args.family == "halfgraph" and args.schedule:
        s = generator_service.half_graph_schedule(args.t)
        sys.stdout.write(render_sequence(s))
        return EXIT_OK
    if args.family == "subdivide":
        out.graph("subdivided", generator_service.subdivide(_read_graph(args.graph), args.s))
        return EXIT_OK
    if args.family == "cfi" and out.repository is not None:
        pair = generator_service.cfi_pair(generator_service.named_base(args.base))
        out.repository.save_graph("cfi-even", pair.even)
        out.repository.save_graph("cfi-odd", pair.odd)
    if args.family == "tww1" and args.with_sequence:
        g, s = generator_service.random_tww1_with_sequence(args.n, args.seed)
        sys.stdout.write(render_sequence(s))
        return EXIT_OK
    family = {"tww1": "prime-tww1" if getattr(args, "prime", False) else "tww1"}.get(args.family, args.family)
    request = GenerateRequest(
        family=family,
        t=getattr(args, "t", 1) or 1,
        n=getattr(args, "n", 1),
        a=getattr(args, "a", 1),
        b=getattr(args, "b", 1),
        p=getattr(args, "density", getattr(args, "p", 0.5)),
        base=getattr(args, "base", "K4"),
        odd=getattr(args, "odd", False),
        seed=getattr(args, "seed", 0),
    )
    out.graph(args.family, service.generate(request))
    return EXIT_OK


def _tww(args, out: _Output, service: GraphService) -> int:
    if args.verify:
        with open(args.graph, "r", encoding="utf-8") as handle:
            s = parse_sequence(handle.read())
        report = service.verify(s)
        out.model("width-report", report, f"width {report.width}")
        return EXIT_OK
    max_nodes = args.max_nodes or (
        settings.HEURISTIC_MAX_NODES if args.heuristic is not None else settings.EXACT_TWW_MAX_NODES
    )
    budget = SearchBudget(max_nodes=max_nodes, time_cap=args.time_cap, beam=args.beam)
    g = _read_graph(args.graph)
    if args.heuristic is not None:
        result = service.twinwidth(g, "heuristic", budget, args.heuristic)
        out.model("twinwidth", result, f"found {result.found} width {result.width}")
        return EXIT_OK
    mode = "component" if args.component else "naive" if args.naive else "exact"
    result = service.twinwidth(g, mode, budget)
    if isinstance(result, TwinWidthResult) and result.exhausted:
        out.model("twinwidth", result, f"exhausted: bounds [{result.lower_bound}, {result.upper_bound}]")
        return EXIT_BUDGET
    out.model("twinwidth", result, f"twin-width {result.width}")
    return EXIT_OK


def _analyze(args, out: _Output, service: GraphService) -> int:
    if args.action == "audit":
        with open(args.sequence, "r", encoding="utf-8") as handle:
            s = parse_sequence(handle.read())
        audit = structure_service.audit_red_cuts(s.base, s)
        out.model("red-cut-audit", audit, f"{audit.cuts_checked} cuts, {len(audit.violations)} violations")
        return EXIT_OK
    g = _read_graph(args.graph)
    if args.action == "rank":
        a, b = _vertices(args.A), _vertices(args.B)
        result = service.rank_connectivity(g, a, b) if args.connectivity else service.rank(g, a, b)
        out.model("rank", result, str(result.rank))
        return EXIT_OK
    view = service.bipartite(g, _vertices(args.left), _vertices(args.right))
    if args.action == "chain":
        check = structure_service.is_partial_half_graph(view)
        text = "partial half-graph" if check.is_partial_half_graph else f"incomparable {check.incomparable}"
        out.model("chain", check, text)
    elif args.action == "halfgraph":
        witness = structure_service.max_induced_half_graph(view)
        out.model("halfgraph", witness, str(witness.t))
    elif args.action == "biclique":
        biclique = structure_service.max_balanced_biclique_chain(view)
        out.model("biclique", biclique, str(biclique.t))
    else:
        matching = structure_service.max_matching(view)
        out.model("matching", matching, str(matching.size))
    return EXIT_OK


def _experiment(args, out: _Output) -> int:
    spec = ExperimentSpec(
        name=args.name,
        k=args.k,
        s=args.s,
        base=args.base,
        transfer=args.transfer,
        heuristic_time_cap=args.heuristic_time_cap,
        seed=args.seed,
        samples=args.samples,
        max_n=args.max_n,
        output=args.out,
    )
    report = ExperimentService(out.repository).run_experiment(spec)
    summary = ", ".join(f"{k}={v}" for k, v in report.summary.items())
    # the service already wrote the report when --out is set
    if out.json:
        print(report.model_dump_json(indent=2))
    else:
        print(f"{report.name}: {'PASS' if report.passed else 'FAIL'} ({summary})")
        if report.bundle:
            print(f"counterexample bundle: {report.bundle}")
    return EXIT_OK if report.passed else EXIT_ASSERTION


def run(args) -> int:
    out = _Output(args)
    service = GraphService()
    command = args.command
    if command == "gen":
        return _gen(args, out, service)
    if command == "tww":
        return _tww(args, out, service)
    if command == "canon":
        g = _read_graph(args.graph)
        if args.cs is not None:
            if args.cs and len(args.cs) != 2:
                raise UsageError("--cs takes zero or two vertices")
            result = service.cs(g, args.cs or None)
            out.model("cs", result, "Failure" if result.failed else " ".join(result.tokens))
        else:
            form = service.canon(g)
            out.model("canon", form, form.encoding)
        return EXIT_OK
    if command == "iso":
        result = service.iso(_read_graph(args.g), _read_graph(args.h), oracle=args.oracle)
        out.model("iso", result, "isomorphic" if result.isomorphic else "not isomorphic")
        return EXIT_OK
    if command == "recognize-tww1":
        result = service.recognize(_read_graph(args.graph))
        out.model("recognize", result, "yes" if result.twinwidth_le1 else "no")
        return EXIT_OK
    if command == "modtree":
        tree = service.modtree(_read_graph(args.graph))
        out.model("modtree", tree)
        return EXIT_OK
    if command == "wl":
        if args.action == "refine":
            result = service.wl_refine(_read_graph(args.graph), args.k)
            out.model("wl", result, f"{result.classes} classes after {result.rounds} rounds")
        else:
            verdict = wl_service.wl_distinguish(_read_graph(args.g), _read_graph(args.h), args.k)
            out.model("wl", verdict, "distinguished" if verdict.distinguished else "equivalent")
        return EXIT_OK
    if command == "pebble":
        verdict = wl_service.pebble_game(_read_graph(args.g), _read_graph(args.h), args.k)
        out.model("pebble", verdict, verdict.winner)
        return EXIT_OK
    if command == "analyze":
        return _analyze(args, out, service)
    return _experiment(args, out)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as e:
        parser.print_usage(sys.stderr)
        print(f"twinwl: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    configure_logging(args.log_level)
    if args.out:
        os.makedirs(args.out, exist_ok=True)
    try:
        return run(args)
    except BudgetRefusedError as e:
        print(f"twinwl: refused: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ValidationError, TwinWLError, OSError) as e:
        print(f"twinwl: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
