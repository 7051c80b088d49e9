"""Segmenting traces into pattern instances by aligning on a backloop net.

A trace is aligned against a net produced by
:func:`lpmine.petrinet.add_backloop`.  Visible model moves are forbidden, so
every pattern instance must be matched event by event; events that do not
belong to an instance become log moves.  Each firing of a backloop
transition closes one instance (segment).

Alignment costs are compared lexicographically as
``(log moves, synchronous moves - segments, silent moves)``: the alignment
covers as many events as possible, then uses as many segments as possible,
then as few silent moves as possible.  Remaining ties are broken by move
order (synchronous, silent, log) and transition id.
"""

from __future__ import annotations

import enum
import heapq
import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import ContractViolation, ResourceLimitError
from .eventlog import Activity, Trace
from .petrinet import AcceptingPetriNet, Marking, net_language


class MoveKind(enum.Enum):
    SYNC = "sync"
    LOG = "log"
    MODEL_SILENT = "silent"


@dataclass(frozen=True)
class Move:
    kind: MoveKind
    activity: Activity | None = None
    transition: str | None = None


@dataclass(frozen=True)
class Segmentation:
    """Alignment moves of one trace and the segments they delimit."""

    moves: tuple[Move, ...]
    segments: tuple[Trace, ...]

    @property
    def k(self) -> int:
        return len(self.segments)

    @property
    def covered(self) -> int:
        """Number of trace events that belong to some segment."""
        return sum(len(s) for s in self.segments)

    @property
    def log_moves(self) -> int:
        return sum(1 for m in self.moves if m.kind is MoveKind.LOG)


@dataclass
class ReplayStats:
    """Visit counts and enabled-transition counts of the markings fired from."""

    firing_count: int = 0
    enabled_sum: int = 0
    per_marking: dict[Marking, tuple[int, int]] = field(default_factory=dict)


def _segments_from_moves(moves: Sequence[Move], backloop: frozenset[str]) -> tuple[Trace, ...]:
    segments = []
    current: list[Activity] = []
    for move in moves:
        if move.kind is MoveKind.SYNC:
            current.append(move.activity)
        elif move.kind is MoveKind.MODEL_SILENT and move.transition in backloop:
            segments.append(tuple(current))
            current = []
    return tuple(segments)


def segment(apn_bl: AcceptingPetriNet, trace: Sequence[Activity]) -> Segmentation:
    """Optimal alignment of ``trace`` on a backloop net (see module docstring).

    The trace should already be projected on the net's labels; other events
    simply become log moves.
    """
    if not apn_bl.backloop:
        raise ContractViolation("segment() needs a net produced by add_backloop()")
    trace = tuple(trace)
    c = apn_bl._compiled
    n = len(trace)
    labels = c.labels
    is_bl = c.is_backloop

    # costs are packed into one integer: (log moves, sync - segments, silent)
    # in base ``big``; every component stays far below ``big``
    big = 1 << 32
    unit_log = big * big
    init = c.intern(c.initial)
    start = (0, init, False)
    best = {start: 0}
    parent: dict = {}
    tick = itertools.count()
    heap = [(0, 0, start)]
    goal = None
    succ_of = c.id_successors
    push = heapq.heappush
    pop = heapq.heappop
    while heap:
        cost, _, state = pop(heap)
        if best[state] != cost:
            continue
        pos, v, started = state
        if pos == n and not started and v == init:
            goal = state
            break
        here = trace[pos] if pos < n else None
        sync = []
        succ = []
        for i, w in succ_of(v):
            lab = labels[i]
            if lab is not None:
                if lab == here:
                    sync.append((cost + big if started else cost, (pos + 1, w, True), i))
            elif is_bl[i]:
                if started:
                    succ.append((cost + 1, (pos, w, False), i))
            else:
                succ.append((cost + 1, (pos, w, started), i))
        if sync:
            succ = sync + succ
        if pos < n:
            succ.append((cost + unit_log, (pos + 1, v, started), None))
        for new_cost, nxt, i in succ:
            old = best.get(nxt)
            if old is None or new_cost < old:
                best[nxt] = new_cost
                parent[nxt] = (state, i)
                push(heap, (new_cost, next(tick), nxt))
    if goal is None:  # unreachable: all-log-moves is always a valid alignment
        raise AssertionError("no alignment found")
    moves = []
    state = goal
    while state != start:
        prev, i = parent[state]
        if i is None:
            moves.append(Move(MoveKind.LOG, trace[prev[0]], None))
        elif labels[i] is None:
            moves.append(Move(MoveKind.MODEL_SILENT, None, c.transitions[i]))
        else:
            moves.append(Move(MoveKind.SYNC, labels[i], c.transitions[i]))
        state = prev
    moves.reverse()
    return Segmentation(tuple(moves), _segments_from_moves(moves, apn_bl.backloop_transitions))


def replay_stats(
    apn_bl: AcceptingPetriNet,
    segmentations: Iterable[Segmentation],
    weights: Iterable[int] | None = None,
) -> ReplayStats:
    """Replay the model moves of each alignment and count enabled transitions.

    ``weights`` gives a multiplicity per segmentation (default 1 each), so
    distinct traces can be replayed once and scaled.
    """
    c = apn_bl._compiled
    index = {t: i for i, t in enumerate(c.transitions)}
    visits: dict[tuple[int, ...], int] = defaultdict(int)
    width: dict[tuple[int, ...], int] = {}
    segmentations = list(segmentations)
    weights = [1] * len(segmentations) if weights is None else list(weights)
    for seg, weight in zip(segmentations, weights):
        v = c.initial
        for move in seg.moves:
            if move.kind is MoveKind.LOG:
                continue
            i = index.get(move.transition)
            en = c.enabled(v)
            if i is None or i not in en:
                raise ContractViolation(
                    f"replay diverged: {move.transition} not enabled in {c.marking(v)}"
                )
            visits[v] += weight
            width[v] = len(en)
            v = c.fire(v, i)
    stats = ReplayStats()
    for v, count in visits.items():
        stats.per_marking[c.marking(v)] = (count, width[v])
        stats.firing_count += count
        stats.enabled_sum += count * width[v]
    return stats


DEFAULT_EMBEDDING_BUDGET = 2_000_000


def segment_bruteforce(
    apn: AcceptingPetriNet,
    trace: Sequence[Activity],
    n: int | None = None,
    budget: int = DEFAULT_EMBEDDING_BUDGET,
) -> Segmentation:
    """Reference segmentation by exhaustive search over segment embeddings.

    Every way to pick ordered, disjoint segments (each a possibly
    non-contiguous subsequence lying entirely after the previous segment)
    whose label sequences belong to ``net_language(apn, n)`` is considered.
    The winner covers the most events, then has the most segments, then the
    lexicographically smallest list of segment start positions.  ``apn`` is
    the plain net, without backloop.  Returned SYNC moves carry no transition.
    """
    trace = tuple(trace)
    n = len(trace) if n is None else n
    if not trace:
        return Segmentation((), ())
    words = sorted(net_language(apn, n).traces)
    words = [w for w in words if w and len(w) <= len(trace)]
    explored = 0

    def embeddings(word: Trace, start: int):
        """Position tuples at which ``word`` occurs as a subsequence from ``start``."""
        nonlocal explored
        out = []

        def rec(wi: int, pos: int, acc: list[int]):
            nonlocal explored
            if wi == len(word):
                out.append(tuple(acc))
                return
            need = len(word) - wi
            for p in range(pos, len(trace) - need + 1):
                explored += 1
                if explored > budget:
                    raise ResourceLimitError(f"more than {budget} embedding steps")
                if trace[p] == word[wi]:
                    acc.append(p)
                    rec(wi + 1, p + 1, acc)
                    acc.pop()

        rec(0, start, [])
        return out

    # best[pos] = (covered, k, starts, chosen position tuples) for the suffix from pos
    best: list = [None] * (len(trace) + 1)
    best[len(trace)] = (0, 0, (), ())
    for pos in range(len(trace) - 1, -1, -1):
        cand = (0, 0, (), ())
        for word in words:
            for emb in embeddings(word, pos):
                cov, k, starts, chosen = best[emb[-1] + 1]
                option = (cov + len(emb), k + 1, (emb[0],) + starts, (emb,) + chosen)
                if (option[0], option[1]) > (cand[0], cand[1]) or (
                    (option[0], option[1]) == (cand[0], cand[1]) and option[2] < cand[2]
                ):
                    cand = option
        best[pos] = cand
    _, _, _, chosen = best[0]
    owner = {p: s for s, emb in enumerate(chosen) for p in emb}
    moves = []
    for p, a in enumerate(trace):
        moves.append(Move(MoveKind.SYNC if p in owner else MoveKind.LOG, a, None))
    segments = tuple(tuple(trace[p] for p in emb) for emb in chosen)
    return Segmentation(tuple(moves), segments)
