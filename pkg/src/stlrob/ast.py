"""Formula and term trees.

Nodes are frozen dataclasses, so two trees compare equal exactly when they are
structurally identical.
"""
from __future__ import annotations

from dataclasses import dataclass, fields, replace
from typing import Iterator

from .core import UNBOUNDED, Interval


class Node:
    __slots__ = ()


# ---------------------------------------------------------------- terms

@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Const(Node):
    value: float


@dataclass(frozen=True)
class BinOp(Node):
    op: str  # one of + - * /
    left: Node
    right: Node


@dataclass(frozen=True)
class Neg(Node):
    arg: Node


@dataclass(frozen=True)
class Abs(Node):
    arg: Node


TERM_TYPES = (Var, Const, BinOp, Neg, Abs)

# ---------------------------------------------------------------- formulas

COMPARISONS = (">", ">=", "<", "<=", "==", "!=")


@dataclass(frozen=True)
class Predicate(Node):
    lhs: Node
    op: str
    rhs: Node


@dataclass(frozen=True)
class BoolConst(Node):
    value: bool


@dataclass(frozen=True)
class Not(Node):
    arg: Node


@dataclass(frozen=True)
class And(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Or(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Implies(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Eventually(Node):
    arg: Node
    interval: Interval = UNBOUNDED


@dataclass(frozen=True)
class Always(Node):
    arg: Node
    interval: Interval = UNBOUNDED


@dataclass(frozen=True)
class Once(Node):
    arg: Node
    interval: Interval = UNBOUNDED


@dataclass(frozen=True)
class Historically(Node):
    arg: Node
    interval: Interval = UNBOUNDED


@dataclass(frozen=True)
class Next(Node):
    arg: Node


@dataclass(frozen=True)
class Previous(Node):
    arg: Node


@dataclass(frozen=True)
class Rise(Node):
    arg: Node


@dataclass(frozen=True)
class Fall(Node):
    arg: Node


@dataclass(frozen=True)
class Until(Node):
    left: Node
    right: Node
    interval: Interval = UNBOUNDED


@dataclass(frozen=True)
class Since(Node):
    left: Node
    right: Node
    interval: Interval = UNBOUNDED


@dataclass(frozen=True)
class Precedes(Node):
    """Bounded until read backwards from the end of its window.

    Value at ``T`` is the sup over ``t'`` in ``[T-b+a, T]`` of
    ``min(right(t'), inf of left over [T-b, t'))``.
    """

    left: Node
    right: Node
    interval: Interval = UNBOUNDED

    def __post_init__(self):
        if not self.interval.bounded:
            raise ValueError("precedes requires a bounded interval")


TRUE = BoolConst(True)
FALSE = BoolConst(False)

FUTURE_OPS = (Eventually, Always, Next, Until)
PAST_OPS = (Once, Historically, Previous, Rise, Fall, Since, Precedes)
UNARY_TEMPORAL = (Eventually, Always, Once, Historically)
BINARY_TEMPORAL = (Until, Since, Precedes)
STEP_OPS = (Next, Previous, Rise, Fall)


def children(node: Node) -> tuple:
    if isinstance(node, (Var, Const, BoolConst)):
        return ()
    if isinstance(node, Predicate):
        return (node.lhs, node.rhs)
    if isinstance(node, (Neg, Abs, Not, Next, Previous, Rise, Fall) + UNARY_TEMPORAL):
        return (node.arg,)
    return (node.left, node.right)


def formula_children(node: Node) -> tuple:
    """Sub-formulas only (predicate terms are not descended into)."""
    if isinstance(node, (Predicate, BoolConst)):
        return ()
    return children(node)


def rebuild(node: Node, *kids) -> Node:
    """Copy ``node`` with its children replaced, keeping other fields."""
    names = [f.name for f in fields(node) if f.name in ("arg", "left", "right", "lhs", "rhs")]
    return replace(node, **dict(zip(names, kids)))


def walk(node: Node) -> Iterator[Node]:
    yield node
    for c in children(node):
        yield from walk(c)


def variables(node: Node) -> set[str]:
    return {n.name for n in walk(node) if isinstance(n, Var)}


def has_future(node: Node) -> bool:
    return any(isinstance(n, FUTURE_OPS) for n in walk(node))


def has_past(node: Node) -> bool:
    return any(isinstance(n, PAST_OPS) for n in walk(node))


def first_future(node: Node):
    for n in walk(node):
        if isinstance(n, FUTURE_OPS):
            return n
    return None


def size(node: Node) -> int:
    return sum(1 for _ in walk(node))
