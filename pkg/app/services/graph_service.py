import logging
from typing import Iterable, List, Optional, Union

from app.constants import Constants
from app.core.errors import PreconditionError
from app.graphs.colored_graph import BipartiteView, ColoredGraph
from app.graphs.graph_io import render_graph
from app.graphs.isomorphism import find_isomorphism
from app.graphs.trigraph import ContractionSequence
from app.schemas.analysis_dto import RankResult
from app.schemas.contraction_dto import HeuristicResult, SearchBudget, TwinWidthResult, WidthReport
from app.schemas.graph_dto import CanonResponse, CsResponse, GenerateRequest, IsoResponse, RecognizeResponse
from app.schemas.modular_dto import ModTree
from app.schemas.wl_dto import WlColoringResponse
from app.services import canon_service, generator_service, modular_service, structure_service, wl_service
from app.services.contraction_service import verify_sequence
from app.services.twinwidth_service import (
    NotFound,
    SearchExhausted,
    exact_component_twinwidth,
    exact_twinwidth,
    heuristic_sequence,
    naive_twinwidth,
)

logger = logging.getLogger(__name__)


class GraphService:
    """Entry points shared by the CLI and the HTTP routes; results are DTOs"""

    def generate(self, request: GenerateRequest) -> ColoredGraph:
        """
        Build a member of one of the generator families

        Args:
            request (GenerateRequest): Family and its parameters

        Returns:
            ColoredGraph: The generated graph, subdivided when request.s > 0
        """
        family = request.family
        if family == "halfgraph":
            g = generator_service.half_graph(request.t).graph
        elif family == "cfi":
            pair = generator_service.cfi_pair(generator_service.named_base(request.base))
            g = pair.odd if request.odd else pair.even
        elif family == "cograph":
            g = generator_service.random_cograph(request.n, request.seed)
        elif family == "tww1":
            g = generator_service.random_tww1(request.n, request.seed)
        elif family == "prime-tww1":
            g = generator_service.random_prime_tww1(request.n, request.seed)
        elif family == "chain":
            g = generator_service.random_chain_graph(request.a, request.b, request.p, request.seed).graph
        else:
            g = generator_service.random_graph(request.n, request.p, request.seed)
        if request.s:
            g = generator_service.subdivide(g, request.s)
        return g

    def canon(self, g: ColoredGraph) -> CanonResponse:
        form = canon_service.canonical_form(g)
        return CanonResponse(
            encoding=form.hex(),
            order=form.order,
            canonical_graph=render_graph(canon_service.canonical_graph(g)),
        )

    def iso(self, g: ColoredGraph, h: ColoredGraph, oracle: bool = False) -> IsoResponse:
        """
        Decide isomorphism.

        Canonical forms are compared unless oracle is set; graphs of
        twin-width above 1 raise unless the oracle is used.
        """
        if oracle:
            mapping = find_isomorphism(g, h)
            return IsoResponse(isomorphic=mapping is not None, method="oracle", mapping=mapping)
        fg, fh = canon_service.canonical_form(g), canon_service.canonical_form(h)
        if fg.encoding != fh.encoding:
            return IsoResponse(isomorphic=False, method="canonical")
        mapping = dict(zip(fg.order, fh.order))
        return IsoResponse(isomorphic=True, method="canonical", mapping=mapping)

    def reconstruct(self, g: ColoredGraph, u: int, v: int, h: ColoredGraph, u2: int, v2: int) -> IsoResponse:
        mapping = canon_service.reconstruct_isomorphism(g, u, v, h, u2, v2)
        return IsoResponse(isomorphic=True, method="reconstruct", mapping=mapping)

    def recognize(self, g: ColoredGraph) -> RecognizeResponse:
        ok, certificate = canon_service.is_twinwidth_le1(g)
        if not ok:
            return RecognizeResponse(twinwidth_le1=False)
        return RecognizeResponse(
            twinwidth_le1=True,
            sequence=certificate.merges,
            width=verify_sequence(g, certificate).width,
        )

    def cs(self, g: ColoredGraph, start: Optional[List[int]] = None) -> CsResponse:
        """cs from a start pair, or the lex-min invariant when start is None"""
        if start is None:
            result = canon_service.cs_invariant(g)
        else:
            result = canon_service.cs(g, start[0], start[1])
        if isinstance(result, canon_service.Failure):
            return CsResponse(failed=True, start=tuple(start) if start else None)
        return CsResponse(
            failed=False,
            tokens=[repr(t) for t in result.tokens],
            start=tuple(start) if start else None,
        )

    def modtree(self, g: ColoredGraph) -> ModTree:
        return modular_service.mod_tree(g)

    def verify(self, sequence: ContractionSequence) -> WidthReport:
        return verify_sequence(sequence.base, sequence)

    def twinwidth(
        self,
        g: ColoredGraph,
        mode: str = "exact",
        budget: Optional[SearchBudget] = None,
        target: int = 1,
    ) -> Union[TwinWidthResult, HeuristicResult]:
        """
        Twin-width by exact search, component objective, naive enumeration or heuristic

        Args:
            g (ColoredGraph): The graph
            mode (str): exact, component, naive or heuristic
            budget (Optional[SearchBudget]): Search limits, defaults from settings
            target (int): Width the heuristic tries to reach

        Returns:
            Union[TwinWidthResult, HeuristicResult]: exhausted is set when the
            budget ran out
        """
        if mode == "heuristic":
            outcome = heuristic_sequence(g, target, budget)
            if isinstance(outcome, NotFound):
                return HeuristicResult(
                    found=False,
                    target=target,
                    width=outcome.best_width,
                    sequence=outcome.best.merges if outcome.best else [],
                    nodes=outcome.nodes,
                    time=outcome.elapsed,
                )
            return HeuristicResult(
                found=True,
                target=target,
                width=verify_sequence(g, outcome).width,
                sequence=outcome.merges,
            )
        if mode == "naive":
            outcome = naive_twinwidth(g)
            objective = "red_degree"
        elif mode == "component":
            outcome = exact_component_twinwidth(g, budget)
            objective = "red_component"
        elif mode == "exact":
            outcome = exact_twinwidth(g, budget)
            objective = "red_degree"
        else:
            raise PreconditionError(f"{Constants.INVALID_PARAMETER}: mode {mode}")
        if isinstance(outcome, SearchExhausted):
            return TwinWidthResult(
                lower_bound=outcome.lower_bound,
                upper_bound=outcome.upper_bound,
                sequence=outcome.certificate.merges if outcome.certificate else [],
                nodes=outcome.nodes,
                time=outcome.elapsed,
                exhausted=True,
                objective=objective,
            )
        return TwinWidthResult(
            width=outcome.width,
            lower_bound=outcome.width,
            upper_bound=outcome.width,
            sequence=outcome.certificate.merges,
            nodes=outcome.nodes,
            time=outcome.elapsed,
            objective=objective,
        )

    def wl_refine(self, g: ColoredGraph, k: int) -> WlColoringResponse:
        if k == 1 and g.n > wl_service.DENSE_K1_MAX_VERTICES:
            coloring = wl_service.color_refinement(g)
        else:
            coloring = wl_service.wl_refine(g, k)
        return WlColoringResponse(
            k=k,
            n=g.n,
            classes=coloring.classes(),
            rounds=coloring.rounds,
            histogram=coloring.histogram(),
            vertex_colors=[int(c) for c in coloring.colors] if k == 1 else None,
        )

    @staticmethod
    def bipartite(g: ColoredGraph, left: Iterable[int], right: Optional[Iterable[int]] = None) -> BipartiteView:
        """View between left and right; right defaults to every other vertex"""
        left = sorted(set(left))
        if right is None:
            right = [v for v in range(g.n) if v not in set(left)]
        return BipartiteView(g, tuple(left), tuple(sorted(set(right))))

    def rank(self, g: ColoredGraph, a: Iterable[int], b: Iterable[int]) -> RankResult:
        m = structure_service.biadjacency(g, a, b)
        return RankResult(rank=structure_service.gf2_rank(m), rows=m.row_labels, cols=m.col_labels)

    def rank_connectivity(self, g: ColoredGraph, a: Iterable[int], b: Iterable[int]) -> RankResult:
        a, b = sorted(set(a)), sorted(set(b))
        return RankResult(rank=structure_service.rank_connectivity(g, a, b), rows=a, cols=b)

