"""Accepting labeled Petri nets built from process trees.

Transitions carry an activity label or ``None`` for silent (tau)
transitions.  Markings are immutable multisets of place ids.
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping

from .errors import ContractViolation, ResourceLimitError
from .eventlog import Activity
from .tree import LanguageSet, Leaf, Node, Op, ProcessTree

DEFAULT_STATE_BUDGET = 100_000


class Marking:
    """Multiset of places.  Hashable; places with zero tokens are dropped."""

    __slots__ = ("_items", "_hash")

    def __init__(self, tokens: Mapping[str, int] | Iterable[str] = ()):
        counts = Counter(tokens) if not isinstance(tokens, Mapping) else Counter(dict(tokens))
        self._items = tuple(sorted((p, c) for p, c in counts.items() if c > 0))
        if any(c < 0 for c in counts.values()):
            raise ValueError("negative token count")
        self._hash = hash(self._items)

    def __getitem__(self, place: str) -> int:
        for p, c in self._items:
            if p == place:
                return c
        return 0

    def __iter__(self) -> Iterator[str]:
        for p, c in self._items:
            for _ in range(c):
                yield p

    def __len__(self) -> int:
        return sum(c for _, c in self._items)

    def items(self) -> tuple[tuple[str, int], ...]:
        return self._items

    def places(self) -> frozenset[str]:
        return frozenset(p for p, _ in self._items)

    def counter(self) -> Counter:
        return Counter(dict(self._items))

    def __le__(self, other: Marking) -> bool:
        return all(other[p] >= c for p, c in self._items)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Marking) and self._items == other._items

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        inner = ", ".join(p if c == 1 else f"{p}^{c}" for p, c in self._items)
        return f"[{inner}]"


@dataclass(frozen=True)
class PetriNet:
    """Labeled Petri net with weighted arcs (weights are 1 for tree nets)."""

    places: tuple[str, ...]
    labels: Mapping[str, Activity | None]  # transition id -> label, None = tau
    pre: Mapping[str, Mapping[str, int]]  # transition -> input place -> weight
    post: Mapping[str, Mapping[str, int]]

    def __post_init__(self):
        overlap = set(self.places) & set(self.labels)
        if overlap:
            raise ValueError(f"ids used as both place and transition: {sorted(overlap)}")
        for t in self.labels:
            for p in list(self.pre.get(t, {})) + list(self.post.get(t, {})):
                if p not in self.places:
                    raise ValueError(f"arc of {t} references unknown place {p}")

    @property
    def transitions(self) -> tuple[str, ...]:
        return tuple(self.labels)

    @property
    def label_alphabet(self) -> frozenset[Activity]:
        return frozenset(a for a in self.labels.values() if a is not None)

    @property
    def flow(self) -> frozenset[tuple[str, str]]:
        arcs = set()
        for t in self.labels:
            arcs.update((p, t) for p in self.pre.get(t, {}))
            arcs.update((t, p) for p in self.post.get(t, {}))
        return frozenset(arcs)

    def is_silent(self, t: str) -> bool:
        return self.labels[t] is None


@dataclass(frozen=True)
class AcceptingPetriNet:
    net: PetriNet
    initial: Marking
    finals: tuple[Marking, ...]
    backloop: Mapping[Marking, str] = field(default_factory=lambda: MappingProxyType({}))

    def __post_init__(self):
        for i, m1 in enumerate(self.finals):
            for j, m2 in enumerate(self.finals):
                if i != j and m1 <= m2:
                    raise ValueError(f"final marking {m1} is contained in {m2}")

    @property
    def backloop_transitions(self) -> frozenset[str]:
        return frozenset(self.backloop.values())

    @cached_property
    def _compiled(self) -> "_Compiled":
        return _Compiled(self)


class _Compiled:
    """Count-vector view of a net used by the search engines."""

    def __init__(self, apn: AcceptingPetriNet):
        net = apn.net
        self.places = net.places
        self.index = {p: i for i, p in enumerate(net.places)}
        self.transitions = tuple(sorted(net.labels, key=_id_key))
        self.labels = tuple(net.labels[t] for t in self.transitions)
        self.pre = tuple(
            tuple((self.index[p], w) for p, w in sorted(net.pre.get(t, {}).items()))
            for t in self.transitions
        )
        delta = []
        for t in self.transitions:
            d = [0] * len(self.places)
            for p, w in net.pre.get(t, {}).items():
                d[self.index[p]] -= w
            for p, w in net.post.get(t, {}).items():
                d[self.index[p]] += w
            delta.append(tuple(d))
        self.delta = tuple(delta)
        self.initial = self.vector(apn.initial)
        self.finals = frozenset(self.vector(m) for m in apn.finals)
        bl = set(apn.backloop.values())
        self.is_backloop = tuple(t in bl for t in self.transitions)
        self._succ: dict[tuple[int, ...], tuple[tuple[int, tuple[int, ...]], ...]] = {}
        # interned markings for the alignment search: id -> vector, vector -> id
        self._vectors: list[tuple[int, ...]] = []
        self._ids: dict[tuple[int, ...], int] = {}
        self._id_succ: list[tuple[tuple[int, int], ...] | None] = []

    def vector(self, m: Marking) -> tuple[int, ...]:
        v = [0] * len(self.places)
        for p, c in m.items():
            v[self.index[p]] = c
        return tuple(v)

    def marking(self, v: tuple[int, ...]) -> Marking:
        return Marking({self.places[i]: c for i, c in enumerate(v) if c})

    def enabled(self, v: tuple[int, ...]) -> list[int]:
        return [i for i, _ in self.successors(v)]

    def successors(self, v: tuple[int, ...]) -> tuple[tuple[int, tuple[int, ...]], ...]:
        """``(transition index, next vector)`` for every enabled transition, memoised."""
        out = self._succ.get(v)
        if out is None:
            out = tuple(
                (i, self.fire(v, i))
                for i, pre in enumerate(self.pre)
                if all(v[p] >= w for p, w in pre)
            )
            self._succ[v] = out
        return out

    def intern(self, v: tuple[int, ...]) -> int:
        vid = self._ids.get(v)
        if vid is None:
            vid = self._ids[v] = len(self._vectors)
            self._vectors.append(v)
            self._id_succ.append(None)
        return vid

    def vector_of(self, vid: int) -> tuple[int, ...]:
        return self._vectors[vid]

    def id_successors(self, vid: int) -> tuple[tuple[int, int], ...]:
        """Like :meth:`successors`, on interned marking ids."""
        out = self._id_succ[vid]
        if out is None:
            out = tuple((i, self.intern(w)) for i, w in self.successors(self._vectors[vid]))
            self._id_succ[vid] = out
        return out

    def fire(self, v: tuple[int, ...], i: int) -> tuple[int, ...]:
        return tuple(a + b for a, b in zip(v, self.delta[i]))


def _id_key(ident: str) -> tuple[str, int]:
    head = ident.rstrip("0123456789")
    tail = ident[len(head):]
    return head, int(tail) if tail else -1


# ---------------------------------------------------------------------------
# firing semantics

def enabled(apn: AcceptingPetriNet, marking: Marking) -> frozenset[str]:
    net = apn.net
    return frozenset(
        t for t in net.labels if all(marking[p] >= w for p, w in net.pre.get(t, {}).items())
    )


def fire(apn: AcceptingPetriNet, marking: Marking, transition: str) -> Marking:
    """``M - pre(t) + post(t)``; raises if ``t`` is not enabled."""
    if transition not in enabled(apn, marking):
        raise ContractViolation(f"transition {transition} is not enabled in {marking}")
    tokens = marking.counter()
    tokens.subtract(apn.net.pre.get(transition, {}))
    tokens.update(apn.net.post.get(transition, {}))
    return Marking(tokens)


# ---------------------------------------------------------------------------
# tree translation

class _Builder:
    def __init__(self):
        self.places: list[str] = []
        self.labels: dict[str, Activity | None] = {}
        self.pre: dict[str, set[str]] = {}
        self.post: dict[str, set[str]] = {}
        self._next_place = 0

    def place(self) -> str:
        p = f"q{self._next_place}"
        self._next_place += 1
        self.places.append(p)
        return p

    def transition(self, label: Activity | None, inputs=(), outputs=()) -> str:
        t = f"u{len(self.labels)}"
        self.labels[t] = label
        self.pre[t] = set(inputs)
        self.post[t] = set(outputs)
        return t

    def producers(self, p: str) -> list[str]:
        return [t for t, outs in self.post.items() if p in outs]

    def consumers(self, p: str) -> list[str]:
        return [t for t, ins in self.pre.items() if p in ins]

    def fuse(self, keep: str, drop: str) -> None:
        for arcs in (self.pre, self.post):
            for places in arcs.values():
                if drop in places:
                    places.discard(drop)
                    places.add(keep)
        self.places.remove(drop)

    def build(self, tree: ProcessTree) -> tuple[str, str]:
        """Translate ``tree`` into a fragment; returns (entry place, exit place)."""
        if isinstance(tree, Leaf):
            i, o = self.place(), self.place()
            self.transition(tree.activity, [i], [o])
            return i, o
        i1, o1 = self.build(tree.left)
        i2, o2 = self.build(tree.right)
        if tree.op is Op.SEQ:
            # a restart token of the right child must not resume the left child
            if self.consumers(o1) and self.producers(i2):
                self.transition(None, [o1], [i2])
            else:
                self.fuse(o1, i2)
            return i1, o2
        if tree.op is Op.XOR:
            ends = []
            for i, o in ((i1, o1), (i2, o2)):
                if self.producers(i):
                    e = self.place()
                    self.transition(None, [e], [i])
                    i = e
                if self.consumers(o):
                    x = self.place()
                    self.transition(None, [o], [x])
                    o = x
                ends.append((i, o))
            (i1, o1), (i2, o2) = ends
            self.fuse(i1, i2)
            self.fuse(o1, o2)
            return i1, o1
        if tree.op is Op.AND:
            i, o = self.place(), self.place()
            self.transition(None, [i], [i1, i2])
            self.transition(None, [o1, o2], [o])
            return i, o
        # LOOP: do = (i1, o1), redo = (i2, o2)
        if self.producers(i2):
            self.transition(None, [o1], [i2])
        else:
            self.fuse(o1, i2)
        if self.consumers(o2):
            self.transition(None, [o2], [i1])
        else:
            self.fuse(i1, o2)
        return i1, o1

    def reduce(self, protected: set[str]) -> None:
        """Fold a silent transition into its sole producer.

        Applies to ``t -> p -> tau`` where ``p`` has exactly one producer and
        one consumer and ``tau`` has ``p`` as its only input; firing ``tau`` is
        then always possible right after ``t`` and never disables anything.
        """
        changed = True
        while changed:
            changed = False
            for tau in list(self.labels):
                if self.labels[tau] is not None or len(self.pre[tau]) != 1:
                    continue
                (p,) = self.pre[tau]
                if p in protected:
                    continue
                prods, cons = self.producers(p), self.consumers(p)
                if len(prods) != 1 or cons != [tau] or prods[0] == tau:
                    continue
                (t,) = prods
                if self.post[t] & self.post[tau]:
                    continue
                self.post[t].discard(p)
                self.post[t] |= self.post[tau]
                del self.labels[tau], self.pre[tau], self.post[tau]
                self.places.remove(p)
                changed = True


def to_petri_net(tree: ProcessTree) -> AcceptingPetriNet:
    """Accepting net with one initial and one final place whose language is the tree's.

    Ids are ``p0, p1, ...`` and ``t1, t2, ...`` in construction order, so
    ``seq(A,and(B,C))`` yields t1=A, t2=B, t3=C and t4 the silent join.
    """
    b = _Builder()
    start, end = b.build(tree)
    b.reduce({start, end})
    pmap = {p: f"p{k}" for k, p in enumerate(b.places)}
    tmap = {t: f"t{k + 1}" for k, t in enumerate(b.labels)}
    net = PetriNet(
        places=tuple(pmap[p] for p in b.places),
        labels=MappingProxyType({tmap[t]: b.labels[t] for t in b.labels}),
        pre=MappingProxyType({tmap[t]: MappingProxyType({pmap[p]: 1 for p in sorted(b.pre[t])}) for t in b.labels}),
        post=MappingProxyType({tmap[t]: MappingProxyType({pmap[p]: 1 for p in sorted(b.post[t])}) for t in b.labels}),
    )
    return AcceptingPetriNet(net, Marking([pmap[start]]), (Marking([pmap[end]]),))


def add_backloop(apn: AcceptingPetriNet) -> AcceptingPetriNet:
    """Connect every final marking back to the initial marking with a silent transition.

    The result's only final marking is the initial marking; ``backloop``
    maps each original final marking to its transition ``tbl<k>``.
    """
    if not apn.finals:
        raise ContractViolation("net has no final marking")
    labels = dict(apn.net.labels)
    pre = dict(apn.net.pre)
    post = dict(apn.net.post)
    backloop = {}
    for k, final in enumerate(apn.finals, start=1):
        t = f"tbl{k}"
        while t in labels or t in apn.net.places:
            t = "_" + t
        labels[t] = None
        pre[t] = MappingProxyType(dict(final.items()))
        post[t] = MappingProxyType(dict(apn.initial.items()))
        backloop[final] = t
    net = PetriNet(apn.net.places, MappingProxyType(labels), MappingProxyType(pre), MappingProxyType(post))
    return AcceptingPetriNet(net, apn.initial, (apn.initial,), MappingProxyType(backloop))


def net_language(
    apn: AcceptingPetriNet, n: int, state_budget: int = DEFAULT_STATE_BUDGET
) -> LanguageSet:
    """Visible label sequences of length <= n leading from the initial to a final marking."""
    if n < 1:
        raise ValueError("language bound must be >= 1")
    c = apn._compiled
    start = (c.initial, ())
    seen = {start}
    queue = deque([start])
    found = set()
    while queue:
        v, prefix = queue.popleft()
        if v in c.finals:
            found.add(prefix)
        for i in c.enabled(v):
            label = c.labels[i]
            if label is not None:
                if len(prefix) >= n:
                    continue
                nxt = (c.fire(v, i), prefix + (label,))
            else:
                nxt = (c.fire(v, i), prefix)
            if nxt not in seen:
                seen.add(nxt)
                if len(seen) > state_budget:
                    raise ResourceLimitError(f"more than {state_budget} states explored")
                queue.append(nxt)
    return LanguageSet(frozenset(found), n)
