"""Quality metrics of a local process model on an event log.

``evaluate`` projects the log on the model's activities, segments every
distinct projected trace on the backloop net, and derives support,
confidence, language fit, determinism and coverage from the result.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .errors import ConfigurationError, ContractViolation
from .eventlog import Activity, EventLog, Trace, activity_count, project, total_events
from .petrinet import AcceptingPetriNet, add_backloop, to_petri_net
from .segmentation import ReplayStats, Segmentation, replay_stats, segment
from .tree import LanguageSet, ProcessTree, canonical_form, labels, language, leaf_count

METRIC_NAMES = ("support", "confidence", "language_fit", "determinism", "coverage")


@dataclass(frozen=True)
class MetricWeights:
    """Ranking weights, normalised to sum to one."""

    support: float = 1.0
    confidence: float = 1.0
    language_fit: float = 1.0
    determinism: float = 1.0
    coverage: float = 1.0

    def __post_init__(self):
        values = [getattr(self, m) for m in METRIC_NAMES]
        if any(v < 0 for v in values):
            raise ConfigurationError("metric weights must be non-negative")
        total = sum(values)
        if total <= 0:
            raise ConfigurationError("at least one metric weight must be positive")
        for m, v in zip(METRIC_NAMES, values):
            object.__setattr__(self, m, v / total)

    @classmethod
    def parse(cls, text: str) -> MetricWeights:
        """From ``"s,c,l,d,v"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 5:
            raise ConfigurationError(f"expected 5 comma-separated weights, got {text!r}")
        try:
            return cls(*map(float, parts))
        except ValueError as exc:
            raise ConfigurationError(f"bad weights {text!r}") from exc

    def as_tuple(self) -> tuple[float, ...]:
        return tuple(getattr(self, m) for m in METRIC_NAMES)


@dataclass(frozen=True)
class ActivityFit:
    fit: int
    total: int

    @property
    def ratio(self) -> float:
        return self.fit / self.total


@dataclass(frozen=True)
class QualityReport:
    support: float
    confidence: float
    per_activity: Mapping[Activity, ActivityFit]
    language_fit: float
    language_fit_bound: int
    determinism: float
    coverage: float
    k_total: int
    weighted_score: float = 0.0
    replay: ReplayStats | None = field(default=None, compare=False, repr=False)
    observed: frozenset[Trace] = field(default=frozenset(), compare=False, repr=False)

    def metric(self, name: str) -> float:
        return getattr(self, name)


def support_metric(k_total: int) -> float:
    return k_total / (k_total + 1)


def confidence_metric(per_activity: Mapping[Activity, tuple[int, int] | ActivityFit]) -> float:
    """Harmonic mean of per-activity fit ratios; 0 if any activity never fits."""
    pairs = [(v.fit, v.total) if isinstance(v, ActivityFit) else v for v in per_activity.values()]
    if not pairs:
        raise ContractViolation("confidence of a model without activities")
    for fit, total in pairs:
        if total <= 0:
            raise ContractViolation("activity does not occur in the log")
    if any(fit == 0 for fit, _ in pairs):
        return 0.0
    return len(pairs) / sum(total / fit for fit, total in pairs)


def language_fit_metric(lpm_language: LanguageSet | Iterable[Trace], observed: Iterable[Trace]) -> float:
    """Share of the (bounded) model language observed among the segments."""
    lang = lpm_language.traces if isinstance(lpm_language, LanguageSet) else frozenset(lpm_language)
    if not lang:
        raise ContractViolation("empty model language")
    seen = {tuple(t) for t in observed}
    return len(lang & seen) / len(lang)


def determinism_metric(stats: ReplayStats) -> float:
    if stats.firing_count == 0:
        return 0.0
    return stats.firing_count / stats.enabled_sum


def coverage_metric(projected_total: int, total: int) -> float:
    if total <= 0:
        raise ContractViolation("coverage on an empty log")
    if projected_total > total:
        raise ContractViolation("projected event count exceeds log size")
    return projected_total / total


def weighted_score(report: QualityReport, weights: MetricWeights) -> float:
    return sum(w * report.metric(m) for m, w in zip(METRIC_NAMES, weights.as_tuple()))


@lru_cache(maxsize=4096)
def backloop_net(tree: ProcessTree) -> AcceptingPetriNet:
    return add_backloop(to_petri_net(tree))


@dataclass(frozen=True)
class EvalConfig:
    language_fit_bound: int = 5
    weights: MetricWeights = MetricWeights()


def evaluate(tree: ProcessTree, log: EventLog, config: EvalConfig = EvalConfig()) -> QualityReport:
    """Compute all five metrics of ``tree`` on ``log``.

    Distinct projected traces are aligned once and weighted by multiplicity.
    """
    sigma = labels(tree)
    missing = sigma - log.alphabet
    if missing:
        raise ContractViolation(f"model activities absent from the log: {sorted(missing)}")
    all_events = total_events(log)
    if all_events == 0:
        raise ConfigurationError("cannot evaluate on a log without events")
    projected = project(log, sigma)
    apn_bl = backloop_net(tree)

    segs: list[Segmentation] = []
    mults: list[int] = []
    fit: Counter[Activity] = Counter()
    observed: set[Trace] = set()
    k_total = 0
    for trace, mult in projected:
        if not trace:
            continue
        s = segment(apn_bl, trace)
        segs.append(s)
        mults.append(mult)
        k_total += s.k * mult
        for seg in s.segments:
            observed.add(seg)
            for a in seg:
                fit[a] += mult
    stats = replay_stats(apn_bl, segs, mults)
    per_activity = {a: ActivityFit(fit[a], activity_count(log, a)) for a in sorted(sigma)}
    report = QualityReport(
        support=support_metric(k_total),
        confidence=confidence_metric(per_activity),
        per_activity=per_activity,
        language_fit=language_fit_metric(language(tree, config.language_fit_bound), observed),
        language_fit_bound=config.language_fit_bound,
        determinism=determinism_metric(stats),
        coverage=coverage_metric(total_events(projected), all_events),
        k_total=k_total,
        replay=stats,
        observed=frozenset(observed),
    )
    return _with_score(report, config.weights)


def _with_score(report: QualityReport, weights: MetricWeights) -> QualityReport:
    return replace(report, weighted_score=weighted_score(report, weights))


def rank(
    reports: Iterable[tuple[ProcessTree, QualityReport]],
    weights: MetricWeights,
    top_k: int | None = None,
) -> list[tuple[ProcessTree, QualityReport]]:
    """Order by weighted score, then support, fewer leaves, canonical text."""
    scored = [(tree, _with_score(rep, weights)) for tree, rep in reports]
    scored.sort(
        key=lambda tr: (
            -tr[1].weighted_score,
            -tr[1].support,
            leaf_count(tr[0]),
            str(canonical_form(tr[0])),
        )
    )
    return scored if top_k is None else scored[:top_k]
