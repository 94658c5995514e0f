"""Node specifications and the immutable tree node type."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Optional

from gmpforge.values import BOOLEAN, NUMERIC, TEXT, Payload, ValueKind

ALL_KINDS = (NUMERIC, TEXT, BOOLEAN)


class Category(enum.Enum):
    FUNCTION = "function"
    TERMINAL = "terminal"


@dataclass(frozen=True)
class NodeSpec:
    """One entry of the function or terminal set.

    ``overloads`` lists every admissible ``(child kinds, output kind)`` pair, so
    a kind-polymorphic node such as Add appears once per supported kind.
    """

    name: str
    op: str
    category: Category
    overloads: tuple[tuple[tuple[ValueKind, ...], ValueKind], ...]
    description: str

    @property
    def arity(self) -> int:
        return len(self.overloads[0][0])

    @property
    def output_kinds(self) -> frozenset[ValueKind]:
        return frozenset(out for _, out in self.overloads)

    def overloads_for(self, kind: ValueKind):
        return [o for o in self.overloads if o[1] is kind]


def _poly(kinds, make):
    return tuple(make(k) for k in kinds)


FUNCTION_SPECS: tuple[NodeSpec, ...] = (
    NodeSpec("Add", "add", Category.FUNCTION, _poly(ALL_KINDS, lambda k: ((k, k), k)),
             "Addition / concatenation / logical and"),
    NodeSpec("Division", "div", Category.FUNCTION, (((NUMERIC, NUMERIC), NUMERIC),),
             "Protected division: x / 0 is 1"),
    NodeSpec("Multiplication", "mul", Category.FUNCTION, (((NUMERIC, NUMERIC), NUMERIC),), "Multiplication"),
    NodeSpec("Subtraction", "sub", Category.FUNCTION, (((NUMERIC, NUMERIC), NUMERIC),), "Subtraction"),
    NodeSpec("IfStatement", "if", Category.FUNCTION, _poly(ALL_KINDS, lambda k: ((BOOLEAN, k, k), k)),
             "Evaluates one of two branches depending on a comparator"),
    NodeSpec("Loop", "loop", Category.FUNCTION, _poly(ALL_KINDS, lambda k: ((BOOLEAN, k), k)),
             "Re-evaluates its body while the comparator holds"),
    NodeSpec("LengthOf", "len", Category.FUNCTION, (((TEXT,), NUMERIC), ((NUMERIC,), NUMERIC)),
             "Character count of text, decimal digit count of a number"),
    NodeSpec("EqualsComparator", "eq", Category.FUNCTION, _poly(ALL_KINDS, lambda k: ((k, k), BOOLEAN)),
             "Whether both predicates are equal"),
    NodeSpec("GreaterThanComparator", "gt", Category.FUNCTION,
             _poly((NUMERIC, BOOLEAN), lambda k: ((k, k), BOOLEAN)),
             "Whether the first predicate is larger"),
    NodeSpec("LessThanComparator", "lt", Category.FUNCTION,
             _poly((NUMERIC, BOOLEAN), lambda k: ((k, k), BOOLEAN)),
             "Whether the first predicate is smaller"),
    NodeSpec("NotEqualComparator", "ne", Category.FUNCTION, _poly(ALL_KINDS, lambda k: ((k, k), BOOLEAN)),
             "Whether the predicates differ"),
    NodeSpec("NotNullComparator", "notnull", Category.FUNCTION, (((TEXT,), BOOLEAN),),
             "Whether the text predicate is non-empty"),
)

TERMINAL_SPECS: tuple[NodeSpec, ...] = (
    NodeSpec("Value", "value", Category.TERMINAL, _poly(ALL_KINDS, lambda k: ((), k)),
             "Literal: 1-10, 'a'-'z', true/false"),
    NodeSpec("Random", "random", Category.TERMINAL, _poly(ALL_KINDS, lambda k: ((), k)),
             "Fresh draw from the Value distribution on every evaluation"),
    NodeSpec("ProgramResponse", "response", Category.TERMINAL, _poly(ALL_KINDS, lambda k: ((), k)),
             "Last value returned by the SUT"),
    NodeSpec("OutputFailure", "failed", Category.TERMINAL, (((), BOOLEAN),),
             "Whether the last SUT invocation failed"),
    NodeSpec("LastOutput", "last", Category.TERMINAL, _poly(ALL_KINDS, lambda k: ((), k)),
             "Last value produced by one of the individual's main trees"),
    NodeSpec("ExecutionCount", "count", Category.TERMINAL, (((), NUMERIC),),
             "Number of completed executions since reset"),
)

# arity-0 call of the individual's defined function; only legal inside main trees
ADF_CALL_OP = "call"

SPECS_BY_OP = {s.op: s for s in FUNCTION_SPECS + TERMINAL_SPECS}
FUNCTION_OPS = frozenset(s.op for s in FUNCTION_SPECS)
TERMINAL_OPS = frozenset(s.op for s in TERMINAL_SPECS) | {ADF_CALL_OP}


@dataclass(frozen=True)
class Node:
    """Immutable program tree node.

    ``arg`` holds the literal of a Value node and the main-tree index of a
    LastOutput node; it is ``None`` otherwise.
    """

    op: str
    kind: ValueKind
    children: tuple["Node", ...] = ()
    arg: Optional[Payload] = None

    def __iter__(self) -> Iterator["Node"]:
        """Pre-order walk."""
        stack = [self]
        while stack:
            n = stack.pop()
            yield n
            stack.extend(reversed(n.children))

    @property
    def size(self) -> int:
        return sum(1 for _ in self)

    @property
    def height(self) -> int:
        if not self.children:
            return 1
        return 1 + max(c.height for c in self.children)

    def positions(self, depth: int = 1, path: tuple[int, ...] = ()):
        """Yield ``(path, depth, node)`` for every node, root at depth 1."""
        yield path, depth, self
        for i, c in enumerate(self.children):
            yield from c.positions(depth + 1, path + (i,))

    def get(self, path: tuple[int, ...]) -> "Node":
        n = self
        for i in path:
            n = n.children[i]
        return n

    def replace(self, path: tuple[int, ...], new: "Node") -> "Node":
        if not path:
            return new
        i = path[0]
        kids = list(self.children)
        kids[i] = kids[i].replace(path[1:], new)
        return Node(self.op, self.kind, tuple(kids), self.arg)

    def calls_adf(self) -> bool:
        return any(n.op == ADF_CALL_OP for n in self)
