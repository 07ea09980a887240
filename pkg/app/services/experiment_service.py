"""
Experiment pipelines.

Each experiment is a list of samples; sample i runs with the i-th seed drawn
from random.Random(spec.seed), so reports are reproducible. Samples run on
a process pool capped by TWINWL_THREADS and are reported in index order.
"""

import logging
import math
import random
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Dict, List, Optional, Tuple

from app.constants import Constants
from app.core.config import settings
from app.core.errors import PreconditionError
from app.graphs.colored_graph import ColoredGraph, induced_subgraph
from app.graphs.graph_io import parse_graph, render_graph
from app.graphs.isomorphism import is_isomorphic
from app.repositories.graph_file_repository import GraphFileRepository
from app.schemas.contraction_dto import SearchBudget
from app.schemas.experiment_dto import ExperimentReport, ExperimentSpec, SampleOutcome
from app.services.canon_service import canonical_form, is_twinwidth_le1
from app.services.generator_service import (
    cfi_pair,
    desubdivide,
    named_base,
    random_chain_graph,
    random_graph,
    random_tww1,
    random_tww1_with_sequence,
    subdivide,
)
from app.services.structure_service import (
    audit_red_cuts,
    biadjacency,
    gf2_rank,
    is_partial_half_graph,
    max_balanced_biclique_chain,
    max_induced_half_graph,
    max_matching,
    rank_connectivity,
    reduce_bipartite,
)
from app.services.twinwidth_service import best_effort_sequence
from app.services.wl_service import wl_distinguish

logger = logging.getLogger(__name__)

PAIR_ATTEMPTS = 50


def default_subdivision(n: int) -> int:
    """2 * ceil(log2 n)"""
    return 2 * math.ceil(math.log2(max(n, 2)))


def _verdict(v) -> Optional[bool]:
    return None if v is None else v.distinguished


# -- sample workers (module level so the pool can pickle them) --------------


def cfi_subdivision_sample(spec: ExperimentSpec, index: int, seed: int) -> SampleOutcome:
    pair = cfi_pair(named_base(spec.base))
    n = pair.even.n
    s = spec.s if spec.s is not None else default_subdivision(n)
    details: Dict = {"n": n, "m": pair.even.m, "s": s, "twisted_edge": list(pair.twisted_edge)}

    non_isomorphic = not is_isomorphic(pair.even, pair.odd)
    base_wl = wl_distinguish(pair.even, pair.odd, spec.k)
    details["non_isomorphic"] = non_isomorphic
    details["base_distinguished"] = base_wl.distinguished

    g, h = subdivide(pair.even, s), subdivide(pair.odd, s)
    recovered = desubdivide(g)[0] == pair.even and desubdivide(h)[0] == pair.odd
    details["subdivided_n"] = g.n
    details["subdivided_non_isomorphic"] = non_isomorphic and recovered
    sub_wl = None
    if g.n ** (spec.k + 1) <= settings.WL_MAX_TUPLES:
        sub_wl = wl_distinguish(g, h, spec.k)
    details["subdivided_distinguished"] = _verdict(sub_wl)

    transfer_ok = True
    if spec.transfer:
        three = wl_distinguish(pair.even, pair.odd, 3)
        details["base_3wl_distinguished"] = three.distinguished
        if not three.distinguished:
            once = wl_distinguish(subdivide(pair.even, 1), subdivide(pair.odd, 1), 1)
            details["one_subdivision_distinguished"] = once.distinguished
            transfer_ok = not once.distinguished

    if spec.heuristic_time_cap > 0:
        budget = SearchBudget(
            beam=1, time_cap=spec.heuristic_time_cap, max_nodes=settings.HEURISTIC_MAX_NODES
        )
        result = best_effort_sequence(g, budget)
        details["heuristic_width"] = result.width
        details["heuristic_complete"] = result.complete

    passed = (
        non_isomorphic
        and recovered
        and not base_wl.distinguished
        and not (sub_wl is not None and sub_wl.distinguished)
        and transfer_ok
    )
    graphs = {} if passed else {"even": render_graph(pair.even), "odd": render_graph(pair.odd)}
    return SampleOutcome(index=index, seed=seed, passed=passed, details=details, graphs=graphs)


def tww1_pair_sample(spec: ExperimentSpec, index: int, seed: int) -> SampleOutcome:
    rng = random.Random(seed)
    n = rng.randint(4, spec.max_n)
    g = random_tww1(n, rng.getrandbits(64))
    form = canonical_form(g).encoding
    h = None
    for _ in range(PAIR_ATTEMPTS):
        candidate = random_tww1(n, rng.getrandbits(64))
        if canonical_form(candidate).encoding == form:
            continue
        h = candidate
        if candidate.m == g.m:
            break
    if h is None:
        return SampleOutcome(index=index, seed=seed, passed=True, details={"n": n, "skipped": True})

    three = wl_distinguish(g, h, 3)
    two = wl_distinguish(g, h, 2)
    details = {
        "n": n,
        "m": [g.m, h.m],
        "distinguished_3wl": three.distinguished,
        "distinguished_2wl": two.distinguished,
        "rounds_3wl": three.rounds,
    }
    graphs = {} if three.distinguished else {"g": render_graph(g), "h": render_graph(h)}
    return SampleOutcome(index=index, seed=seed, passed=three.distinguished, details=details, graphs=graphs)


def red_cut_sample(spec: ExperimentSpec, index: int, seed: int) -> SampleOutcome:
    rng = random.Random(seed)
    n = rng.randint(2, spec.max_n)
    g, sequence = random_tww1_with_sequence(n, rng.getrandbits(64))
    generated = audit_red_cuts(g, sequence)
    ok, certificate = is_twinwidth_le1(g)
    recognized = audit_red_cuts(g, certificate) if ok else None

    chain = random_chain_graph(rng.randint(1, spec.max_n), rng.randint(1, spec.max_n), rng.random(), rng.getrandbits(64))
    half = max_induced_half_graph(chain)
    reduced = reduce_bipartite(chain)
    rank = gf2_rank(biadjacency(chain.graph, reduced.left, reduced.right))
    matching = max_matching(chain).size
    biclique = max_balanced_biclique_chain(chain).t
    # a matching of size 2t - 1 forces K_{t,t}
    matching_implies_biclique = biclique >= (matching + 1) // 2

    details = {
        "n": n,
        "recognized": ok,
        "cuts_checked": generated.cuts_checked + (recognized.cuts_checked if recognized else 0),
        "violations": len(generated.violations) + (len(recognized.violations) if recognized else 0),
        "chain_partial_half_graph": is_partial_half_graph(chain).is_partial_half_graph,
        "half_graph_t": half.t,
        "reduced_rank": rank,
        "matching": matching,
        "biclique": biclique,
    }
    passed = (
        ok
        and details["violations"] == 0
        and details["chain_partial_half_graph"]
        and half.t == rank
        and matching_implies_biclique
    )
    graphs = {} if passed else {"g": render_graph(g), "chain": render_graph(chain.graph)}
    return SampleOutcome(index=index, seed=seed, passed=passed, details=details, graphs=graphs)


def _remove(g: ColoredGraph, removed, sets) -> Tuple[ColoredGraph, List[List[int]]]:
    sub, order = induced_subgraph(g, [v for v in range(g.n) if v not in removed])
    index = {v: i for i, v in enumerate(order)}
    return sub, [[index[v] for v in part] for part in sets]


def rank_connectivity_sample(spec: ExperimentSpec, index: int, seed: int) -> SampleOutcome:
    rng = random.Random(seed)
    n = rng.randint(3, spec.max_n)
    g = random_graph(n, rng.random(), rng.getrandbits(64))
    labels = [rng.randrange(4) for _ in range(n)]
    labels[rng.randrange(n)] = 0
    a = [v for v in range(n) if labels[v] == 0]
    b = [v for v in range(n) if labels[v] == 1]
    c = [v for v in range(n) if labels[v] == 2]

    whole = rank_connectivity(g, a, b + c)
    left = rank_connectivity(g, a, b)
    g_minus_c, (a1, b1) = _remove(g, set(c), [a, b])
    g_minus_b, (a2, c2) = _remove(g, set(b), [a, c])
    split = rank_connectivity(g_minus_c, a1, b1) + rank_connectivity(g_minus_b, a2, c2)
    rank_bc = gf2_rank(biadjacency(g, a, b + c))
    rank_sum = gf2_rank(biadjacency(g, a, b)) + gf2_rank(biadjacency(g, a, c))

    details = {
        "n": n,
        "sizes": [len(a), len(b), len(c)],
        "monotone": left <= whole,
        "subadditive": whole <= split,
        "rank_subadditive": rank_bc <= rank_sum,
    }
    passed = details["monotone"] and details["subadditive"] and details["rank_subadditive"]
    graphs = {} if passed else {"g": render_graph(g)}
    if not passed:
        details["sets"] = [a, b, c]
    return SampleOutcome(index=index, seed=seed, passed=passed, details=details, graphs=graphs)


WORKERS: Dict[str, Callable[[ExperimentSpec, int, int], SampleOutcome]] = {
    "cfi-subdivision-wl": cfi_subdivision_sample,
    "tww1-wl-dimension": tww1_pair_sample,
    "red-cut-audit": red_cut_sample,
    "lemma21-suite": rank_connectivity_sample,
}


class ExperimentService:
    def __init__(self, repository: Optional[GraphFileRepository] = None, threads: Optional[int] = None):
        """
        Constructor for ExperimentService

        Args:
            repository (Optional[GraphFileRepository]): Where reports and bundles are written
            threads (Optional[int]): Worker processes, defaults to settings.TWINWL_THREADS
        """
        self.repository = repository
        self.threads = max(1, threads if threads is not None else settings.TWINWL_THREADS)

    def _sample_count(self, spec: ExperimentSpec) -> int:
        # the CFI pipeline is deterministic in its parameters
        return 1 if spec.name == "cfi-subdivision-wl" else spec.samples

    def run_experiment(self, spec: ExperimentSpec) -> ExperimentReport:
        """
        Run all samples of an experiment.

        Args:
            spec (ExperimentSpec): Validated parameters

        Returns:
            ExperimentReport: Samples in index order plus a summary; when a
            sample fails and a repository is set, its graphs and parameters
            are written as a counterexample bundle

        Raises:
            BudgetRefusedError: If a sample exceeds a configured guard
        """
        worker = WORKERS.get(spec.name)
        if worker is None:
            raise PreconditionError(f"{Constants.UNKNOWN_EXPERIMENT}: {spec.name}")
        started = time.monotonic()
        count = self._sample_count(spec)
        rng = random.Random(spec.seed)
        seeds = [rng.getrandbits(64) for _ in range(count)]
        specs = [spec] * count

        if self.threads > 1 and count > 1:
            with ProcessPoolExecutor(max_workers=self.threads) as pool:
                outcomes = list(pool.map(worker, specs, range(count), seeds))
        else:
            outcomes = [worker(sp, i, sd) for sp, i, sd in zip(specs, range(count), seeds)]

        failed = [o for o in outcomes if not o.passed]
        report = ExperimentReport(
            name=spec.name,
            parameters=spec.model_dump(exclude={"output"}),
            passed=not failed,
            samples=outcomes,
            summary=self._summarize(spec, outcomes),
        )
        if failed and self.repository is not None:
            first = failed[0]
            bundle = f"{spec.name}-counterexample-{first.index}"
            graphs = self._graphs(first)
            params = {"spec": spec.model_dump(exclude={"output"}), "index": first.index, "seed": first.seed}
            report.bundle = self.repository.save_bundle(bundle, graphs, params)
            logger.warning("%s: counterexample written to %s", spec.name, report.bundle)
        report.elapsed = time.monotonic() - started
        if self.repository is not None:
            self.repository.save_report(spec.name, report)
        logger.info("%s: %d/%d samples passed", spec.name, count - len(failed), count)
        return report

    @staticmethod
    def _graphs(outcome: SampleOutcome) -> Dict[str, ColoredGraph]:
        return {stem: parse_graph(text) for stem, text in outcome.graphs.items()}

    @staticmethod
    def _summarize(spec: ExperimentSpec, outcomes: List[SampleOutcome]) -> Dict:
        summary = {"samples": len(outcomes), "passed": sum(o.passed for o in outcomes)}
        if spec.name == "tww1-wl-dimension":
            run = [o for o in outcomes if not o.details.get("skipped")]
            summary["pairs"] = len(run)
            summary["distinguished_3wl"] = sum(bool(o.details["distinguished_3wl"]) for o in run)
            summary["distinguished_2wl"] = sum(bool(o.details["distinguished_2wl"]) for o in run)
        elif spec.name == "red-cut-audit":
            summary["cuts_checked"] = sum(o.details["cuts_checked"] for o in outcomes)
            summary["violations"] = sum(o.details["violations"] for o in outcomes)
        elif spec.name == "lemma21-suite":
            summary["violations"] = sum(not o.passed for o in outcomes)
        return summary
