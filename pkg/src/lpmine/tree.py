"""Binary process trees: languages, candidate expansion, canonical form.

Trees are written in prefix notation, e.g. ``seq(A,and(B,C))``.  Operators:

* ``seq``  sequence: left child runs before the right child
* ``xor``  exclusive choice between the children
* ``and``  both children interleaved
* ``loop`` the left ("do") child runs, then optionally the right ("redo")
  child followed by the do child again, any number of times
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Union

from .eventlog import Activity, Trace


class Op(enum.Enum):
    SEQ = "seq"
    XOR = "xor"
    AND = "and"
    LOOP = "loop"

    @property
    def symmetric(self) -> bool:
        return self in (Op.XOR, Op.AND)


@dataclass(frozen=True)
class Leaf:
    """Activity leaf; ``activity=None`` is a silent (tau) leaf."""

    activity: Activity | None

    def __str__(self) -> str:
        return _quote(self.activity) if self.activity is not None else "tau"


@dataclass(frozen=True)
class Node:
    op: Op
    left: ProcessTree
    right: ProcessTree

    def __str__(self) -> str:
        return f"{self.op.value}({self.left},{self.right})"


ProcessTree = Union[Leaf, Node]

TAU = Leaf(None)


def _as_tree(x: ProcessTree | Activity) -> ProcessTree:
    return Leaf(x) if isinstance(x, str) else x


def seq(a, b) -> Node:
    return Node(Op.SEQ, _as_tree(a), _as_tree(b))


def xor(a, b) -> Node:
    return Node(Op.XOR, _as_tree(a), _as_tree(b))


def and_(a, b) -> Node:
    return Node(Op.AND, _as_tree(a), _as_tree(b))


def loop(a, b) -> Node:
    return Node(Op.LOOP, _as_tree(a), _as_tree(b))


# ---------------------------------------------------------------------------
# text form

_SPECIAL = set('(),"')


def _quote(name: str) -> str:
    if name == "tau" or name != name.strip() or _SPECIAL & set(name):
        return '"' + name.replace("\\", "\\\\").replace('"', '\\"') + '"'
    return name


def to_text(tree: ProcessTree) -> str:
    return str(tree)


def parse_tree(text: str) -> ProcessTree:
    """Inverse of :func:`to_text`."""
    pos = 0

    def error(msg: str) -> ValueError:
        return ValueError(f"{msg} at offset {pos} in {text!r}")

    def name() -> str:
        nonlocal pos
        if text.startswith('"', pos):
            pos += 1
            out = []
            while pos < len(text) and text[pos] != '"':
                if text[pos] == "\\":
                    pos += 1
                out.append(text[pos])
                pos += 1
            if pos >= len(text):
                raise error("unterminated quote")
            pos += 1
            return "".join(out)
        start = pos
        while pos < len(text) and text[pos] not in "(),":
            pos += 1
        return text[start:pos].strip()

    def node() -> ProcessTree:
        nonlocal pos
        quoted = text.startswith('"', pos)
        word = name()
        if quoted:
            return Leaf(word)
        if pos < len(text) and text[pos] == "(":
            try:
                op = Op(word)
            except ValueError:
                raise error(f"unknown operator {word!r}") from None
            pos += 1
            left = node()
            if not text.startswith(",", pos):
                raise error("expected ','")
            pos += 1
            right = node()
            if not text.startswith(")", pos):
                raise error("expected ')'")
            pos += 1
            return Node(op, left, right)
        if not word:
            raise error("empty activity name")
        return TAU if word == "tau" else Leaf(word)

    text = text.strip()
    tree = node()
    if pos != len(text):
        raise error("trailing characters")
    return tree


# ---------------------------------------------------------------------------
# structure

def leaves(tree: ProcessTree) -> list[Activity | None]:
    """Leaf labels left to right (None for tau leaves)."""
    if isinstance(tree, Leaf):
        return [tree.activity]
    return leaves(tree.left) + leaves(tree.right)


def labels(tree: ProcessTree) -> frozenset[Activity]:
    """The set of visible activities of the tree."""
    return frozenset(a for a in leaves(tree) if a is not None)


def leaf_count(tree: ProcessTree) -> int:
    if isinstance(tree, Leaf):
        return 1
    return leaf_count(tree.left) + leaf_count(tree.right)


def has_loop(tree: ProcessTree) -> bool:
    if isinstance(tree, Leaf):
        return False
    return tree.op is Op.LOOP or has_loop(tree.left) or has_loop(tree.right)


# ---------------------------------------------------------------------------
# language

@dataclass(frozen=True)
class LanguageSet:
    """A finite set of traces; ``bound`` is set when the set is a truncation."""

    traces: frozenset[Trace]
    bound: int | None = None

    def __len__(self) -> int:
        return len(self.traces)

    def __iter__(self) -> Iterator[Trace]:
        return iter(sorted(self.traces))

    def __contains__(self, trace) -> bool:
        return tuple(trace) in self.traces


def _shuffle(x: Trace, y: Trace) -> set[Trace]:
    if not x:
        return {y}
    if not y:
        return {x}
    return {(x[0],) + r for r in _shuffle(x[1:], y)} | {(y[0],) + r for r in _shuffle(x, y[1:])}


@lru_cache(maxsize=65536)
def _bounded(tree: ProcessTree, n: int) -> frozenset[Trace]:
    if isinstance(tree, Leaf):
        if tree.activity is None:
            return frozenset({()})
        return frozenset({(tree.activity,)}) if n >= 1 else frozenset()
    left = _bounded(tree.left, n)
    right = _bounded(tree.right, n)
    if tree.op is Op.XOR:
        return left | right
    if tree.op is Op.SEQ:
        return frozenset(x + y for x in left for y in right if len(x) + len(y) <= n)
    if tree.op is Op.AND:
        return frozenset(
            t for x in left for y in right if len(x) + len(y) <= n for t in _shuffle(x, y)
        )
    # LOOP: do (redo do)*
    result = set(left)
    frontier = set(left)
    while frontier:
        new = {
            x + r + d
            for x in frontier
            for r in right
            for d in left
            if len(x) + len(r) + len(d) <= n
        } - result
        result |= new
        frontier = new
    return frozenset(result)


def language(tree: ProcessTree, n: int) -> LanguageSet:
    """All traces of the tree with length at most ``n``.

    For loop-free trees whose longest trace fits within ``n`` the complete
    language is returned and ``bound`` is None.
    """
    if n < 1:
        raise ValueError("language bound must be >= 1")
    traces = _bounded(tree, n)
    if not has_loop(tree):
        full = _bounded(tree, max(n, leaf_count(tree)))
        if full == traces:
            return LanguageSet(traces, None)
    return LanguageSet(traces, n)


# ---------------------------------------------------------------------------
# canonical form

def _operands(tree: ProcessTree, op: Op) -> list[ProcessTree]:
    if isinstance(tree, Node) and tree.op is op:
        return _operands(tree.left, op) + _operands(tree.right, op)
    return [tree]


@lru_cache(maxsize=262144)
def canonical_form(tree: ProcessTree) -> ProcessTree:
    """Representative of the tree modulo associativity/commutativity of xor and and.

    Same-operator chains of ``xor``/``and`` are flattened, their operands
    sorted by text encoding and rebuilt right-nested.  ``seq`` and ``loop``
    keep their operand order.
    """
    if isinstance(tree, Leaf):
        return tree
    if not tree.op.symmetric:
        return Node(tree.op, canonical_form(tree.left), canonical_form(tree.right))
    parts = [canonical_form(t) for t in _operands(tree, tree.op)]
    # canonicalising a child cannot create a same-op root, so one pass suffices
    parts.sort(key=str)
    out = parts[-1]
    for part in reversed(parts[:-1]):
        out = Node(tree.op, part, out)
    return out


def canonical_key(tree: ProcessTree) -> str:
    return str(canonical_form(tree))


# ---------------------------------------------------------------------------
# expansion

class Shape(enum.Enum):
    """The six ways a leaf ``a`` can be grown with a new activity ``b``."""

    SEQ_RIGHT = "seq(a,b)"
    SEQ_LEFT = "seq(b,a)"
    AND = "and(a,b)"
    XOR = "xor(a,b)"
    LOOP_RIGHT = "loop(a,b)"
    LOOP_LEFT = "loop(b,a)"

    def build(self, a: ProcessTree, b: ProcessTree) -> Node:
        return {
            Shape.SEQ_RIGHT: lambda: Node(Op.SEQ, a, b),
            Shape.SEQ_LEFT: lambda: Node(Op.SEQ, b, a),
            Shape.AND: lambda: Node(Op.AND, a, b),
            Shape.XOR: lambda: Node(Op.XOR, a, b),
            Shape.LOOP_RIGHT: lambda: Node(Op.LOOP, a, b),
            Shape.LOOP_LEFT: lambda: Node(Op.LOOP, b, a),
        }[self]()

    @property
    def op(self) -> Op:
        return {
            Shape.SEQ_RIGHT: Op.SEQ,
            Shape.SEQ_LEFT: Op.SEQ,
            Shape.AND: Op.AND,
            Shape.XOR: Op.XOR,
            Shape.LOOP_RIGHT: Op.LOOP,
            Shape.LOOP_LEFT: Op.LOOP,
        }[self]


ALL_SHAPES = frozenset(Shape)


def _leaf_sites(tree: ProcessTree, parent: Op | None = None, is_left: bool = False):
    """Yield (leaf, parent op, is-left-child, rebuild) for every leaf."""
    if isinstance(tree, Leaf):
        yield tree, parent, is_left, lambda t: t
        return
    for leaf, p, left, rebuild in _leaf_sites(tree.left, tree.op, True):
        yield leaf, p, left, (lambda t, rb=rebuild: Node(tree.op, rb(t), tree.right))
    for leaf, p, left, rebuild in _leaf_sites(tree.right, tree.op, False):
        yield leaf, p, left, (lambda t, rb=rebuild: Node(tree.op, tree.left, rb(t)))


def raw_expansions(
    tree: ProcessTree, alphabet: Iterable[Activity], shapes: Iterable[Shape] = ALL_SHAPES
) -> Iterator[tuple[int, Shape, Activity, Node]]:
    """Every expansion operation before deduplication.

    Yields ``(leaf index, shape, activity, expanded tree)``.  A leaf whose
    parent is a symmetric operator only gets that operator's shape when it
    is the parent's right child.
    """
    alphabet = sorted(alphabet)
    shapes = [s for s in Shape if s in set(shapes)]
    for index, (leaf, parent, is_left, rebuild) in enumerate(_leaf_sites(tree)):
        if leaf.activity is None:
            continue
        for shape in shapes:
            if parent is not None and parent is shape.op and parent.symmetric and is_left:
                continue
            for b in alphabet:
                yield index, shape, b, rebuild(shape.build(leaf, Leaf(b)))


def expansions(
    tree: ProcessTree, alphabet: Iterable[Activity], shapes: Iterable[Shape] = ALL_SHAPES
) -> list[ProcessTree]:
    """Distinct (by canonical form) one-leaf expansions of ``tree``.

    Returned trees are canonical forms, in generation order.
    """
    seen: dict[ProcessTree, None] = {}
    for _, _, _, grown in raw_expansions(tree, alphabet, shapes):
        seen.setdefault(canonical_form(grown))
    return list(seen)


def random_tree(rng, alphabet: list[Activity], n_leaves: int) -> ProcessTree:
    """Grow a tree by ``n_leaves - 1`` random expansions of a random leaf."""
    tree: ProcessTree = Leaf(rng.choice(alphabet))
    for _ in range(n_leaves - 1):
        options = list(raw_expansions(tree, alphabet))
        tree = rng.choice(options)[3]
    return tree


def all_trees(alphabet: Iterable[Activity], max_leaves: int) -> Iterator[ProcessTree]:
    """Every binary tree over ``alphabet`` with up to ``max_leaves`` leaves."""
    alphabet = sorted(alphabet)

    @lru_cache(maxsize=None)
    def of_size(k: int) -> tuple[ProcessTree, ...]:
        if k == 1:
            return tuple(Leaf(a) for a in alphabet)
        out = []
        for i in range(1, k):
            for op in Op:
                for left, right in itertools.product(of_size(i), of_size(k - i)):
                    out.append(Node(op, left, right))
        return tuple(out)

    for k in range(1, max_leaves + 1):
        yield from of_size(k)
