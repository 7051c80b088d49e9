"""Generate-evaluate-select-expand search for local process models.

Starting from one single-leaf tree per activity, every round evaluates the
current candidates, keeps those that meet all thresholds, and grows the
expandable ones by one leaf.  Expansion shapes that provably cannot lead to
a candidate meeting the support or determinism threshold are skipped.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable

from .errors import ConfigurationError
from .eventlog import EventLog
from .metrics import EvalConfig, MetricWeights, QualityReport, evaluate, rank
from .petrinet import AcceptingPetriNet, to_petri_net
from .tree import (
    ALL_SHAPES,
    Leaf,
    ProcessTree,
    Shape,
    canonical_form,
    expansions,
    leaf_count,
    raw_expansions,
)

log = logging.getLogger(__name__)

SUPPORT_PRUNED = frozenset(
    {Shape.SEQ_RIGHT, Shape.SEQ_LEFT, Shape.AND, Shape.LOOP_RIGHT, Shape.LOOP_LEFT}
)
DETERMINISM_PRUNED = frozenset({Shape.XOR, Shape.AND})


@dataclass(frozen=True)
class MinerConfig:
    min_support: float = 0.7
    min_confidence: float = 0.0
    min_determinism: float = 0.0
    min_language_fit: float = 0.0
    min_coverage: float = 0.0
    max_iterations: int = 4
    min_leaves: int = 3
    language_fit_bound: int = 5
    weights: MetricWeights = field(default_factory=MetricWeights)
    top_k: int = 20
    pruning_enabled: bool = True
    # prune loop(b,a) together with loop(a,b) on failed support
    prune_loop_left: bool = True
    # keep only the best-scoring candidates for expansion; None = unlimited
    max_frontier: int | None = 10_000

    def __post_init__(self):
        if not 0 <= self.min_support < 1:
            raise ConfigurationError("min_support must lie in [0, 1)")
        for name in ("min_confidence", "min_determinism", "min_language_fit", "min_coverage"):
            if not 0 <= getattr(self, name) <= 1:
                raise ConfigurationError(f"{name} must lie in [0, 1]")
        if self.max_iterations < 1:
            raise ConfigurationError("max_iterations must be >= 1")
        if self.min_leaves < 2:
            raise ConfigurationError("min_leaves must be >= 2")
        if self.language_fit_bound < 1:
            raise ConfigurationError("language_fit_bound must be >= 1")
        if self.top_k < 1:
            raise ConfigurationError("top_k must be >= 1")
        if self.max_frontier is not None and self.max_frontier < 1:
            raise ConfigurationError("max_frontier must be >= 1")

    @property
    def eval_config(self) -> EvalConfig:
        return EvalConfig(self.language_fit_bound, self.weights)

    def meets_thresholds(self, report: QualityReport) -> bool:
        return (
            report.support >= self.min_support
            and report.confidence >= self.min_confidence
            and report.determinism >= self.min_determinism
            and report.language_fit >= self.min_language_fit
            and report.coverage >= self.min_coverage
        )


@dataclass(frozen=True)
class SelectedModel:
    tree: ProcessTree
    net: AcceptingPetriNet
    report: QualityReport


@dataclass
class MiningResult:
    selected: list[SelectedModel]
    iterations_run: int
    candidates_evaluated: int
    candidates_pruned: int
    config: MinerConfig


def prune_operators(report: QualityReport, config: MinerConfig) -> frozenset[Shape]:
    """Expansion shapes still worth applying to the candidate behind ``report``."""
    shapes = set(ALL_SHAPES)
    if not config.pruning_enabled:
        return frozenset(shapes)
    if report.support < config.min_support:
        shapes -= SUPPORT_PRUNED
        if not config.prune_loop_left:
            shapes.add(Shape.LOOP_LEFT)
    if report.determinism < config.min_determinism:
        shapes -= DETERMINISM_PRUNED
    return frozenset(shapes)


def mine(
    log_: EventLog,
    config: MinerConfig = MinerConfig(),
    progress: Callable[[int, int], None] | None = None,
) -> MiningResult:
    """Discover local process models in ``log_``.

    Selection and expandability are separate: a candidate is selected when it
    meets every threshold and has at least ``min_leaves`` leaves; it is
    expanded (with the shapes left by :func:`prune_operators`) whenever any
    shape remains.  ``progress(iteration, n_candidates)`` is called before
    each evaluation round.
    """
    alphabet = sorted(log_.alphabet)
    if not alphabet:
        raise ConfigurationError("log has an empty alphabet")
    if len(log_) == 0:
        raise ConfigurationError("log has no traces")
    eval_config = config.eval_config

    candidates: list[ProcessTree] = [Leaf(a) for a in alphabet]
    seen = set(candidates)
    selected: list[tuple[ProcessTree, QualityReport]] = []
    evaluated = pruned = 0
    iteration = 0
    while True:
        iteration += 1
        if progress:
            progress(iteration, len(candidates))
        log.debug("iteration %d: %d candidates", iteration, len(candidates))
        frontier: list[tuple[ProcessTree, QualityReport, frozenset[Shape]]] = []
        for tree in candidates:
            report = evaluate(tree, log_, eval_config)
            evaluated += 1
            if leaf_count(tree) >= config.min_leaves and config.meets_thresholds(report):
                selected.append((tree, report))
            shapes = prune_operators(report, config)
            if shapes:
                frontier.append((tree, report, shapes))
            if iteration < config.max_iterations and len(shapes) < len(ALL_SHAPES):
                removed = ALL_SHAPES - shapes
                pruned += sum(1 for _ in raw_expansions(tree, alphabet, removed))
        if not frontier or iteration >= config.max_iterations:
            break
        if config.max_frontier is not None and len(frontier) > config.max_frontier:
            order = rank([(t, r) for t, r, _ in frontier], config.weights)
            keep = {id(t) for t, _ in order[: config.max_frontier]}
            frontier = [f for f in frontier if id(f[0]) in keep]
        nxt: list[ProcessTree] = []
        for tree, _, shapes in frontier:
            for grown in expansions(tree, alphabet, shapes):
                if grown not in seen:
                    seen.add(grown)
                    nxt.append(grown)
        candidates = nxt

    ranked = rank(selected, config.weights, config.top_k)
    return MiningResult(
        selected=[SelectedModel(t, to_petri_net(t), r) for t, r in ranked],
        iterations_run=iteration,
        candidates_evaluated=evaluated,
        candidates_pruned=pruned,
        config=config,
    )
