"""Control-flow graphs, prime-path enumeration and prime-path coverage scoring.

Coverage is measured in prime paths: a trace covers a prime path when the path
occurs as a contiguous run of the trace (tour semantics, no sidetrips).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence


class CfgError(ValueError):
    """Raised for structurally invalid graphs."""


class MalformedTraceError(ValueError):
    """Raised when a trace does not walk the edges of its graph."""


@dataclass(frozen=True)
class PrimePath:
    nodes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.nodes)

    @property
    def is_cycle(self) -> bool:
        return len(self.nodes) > 1 and self.nodes[0] == self.nodes[-1]

    def __str__(self) -> str:
        return "[" + ",".join(map(str, self.nodes)) + "]"


@dataclass(frozen=True)
class ExecutionTrace:
    visited: tuple[int, ...]


@dataclass(frozen=True)
class CoverageSet:
    covered: frozenset[int] = frozenset()

    def __len__(self) -> int:
        return len(self.covered)

    def __or__(self, other: "CoverageSet") -> "CoverageSet":
        return CoverageSet(self.covered | other.covered)


@dataclass(frozen=True, eq=False)
class CfgGraph:
    nodes: tuple[int, ...]
    edges: frozenset[tuple[int, int]]
    entry: int
    exits: frozenset[int]
    _succ: dict[int, tuple[int, ...]] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        succ: dict[int, list[int]] = {n: [] for n in self.nodes}
        for src, dst in self.edges:
            succ[src].append(dst)
        object.__setattr__(self, "_succ", {n: tuple(sorted(v)) for n, v in succ.items()})

    def successors(self, node: int) -> tuple[int, ...]:
        return self._succ[node]

    def __eq__(self, other):
        if not isinstance(other, CfgGraph):
            return NotImplemented
        return (
            self.nodes == other.nodes
            and self.edges == other.edges
            and self.entry == other.entry
            and self.exits == other.exits
        )

    def __hash__(self):
        return hash((self.nodes, self.edges, self.entry, self.exits))

    @cached_property
    def prime_paths(self) -> tuple[PrimePath, ...]:
        return tuple(enumerate_prime_paths(self))

    def to_text(self) -> str:
        """Plain-text adjacency format: a header line, then one ``src->dst`` per edge."""
        lines = [f"entry={self.entry} exits={','.join(map(str, sorted(self.exits)))}"]
        lines += [f"{s}->{d}" for s, d in sorted(self.edges)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "CfgGraph":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise CfgError("empty graph text")
        try:
            header = dict(part.split("=", 1) for part in lines[0].split())
            entry = int(header["entry"])
            exits = [int(x) for x in header["exits"].split(",")]
        except (KeyError, ValueError) as exc:
            raise CfgError(f"bad header line {lines[0]!r}") from exc
        edges = []
        for ln in lines[1:]:
            src, sep, dst = ln.partition("->")
            if not sep:
                raise CfgError(f"bad edge line {ln!r}")
            try:
                edges.append((int(src), int(dst)))
            except ValueError:
                raise CfgError(f"bad edge line {ln!r}") from None
        nodes = {entry, *exits}
        for e in edges:
            nodes.update(e)
        return build_cfg(nodes, edges, entry, exits)


def build_cfg(
    nodes: Iterable[int],
    edges: Iterable[tuple[int, int]],
    entry: int,
    exits: Iterable[int],
) -> CfgGraph:
    """Build and validate a graph.

    Every node must be reachable from ``entry`` and must reach some exit.
    """
    node_list = tuple(sorted(set(nodes)))
    edge_set = frozenset((int(s), int(d)) for s, d in edges)
    exit_set = frozenset(exits)
    if not node_list:
        raise CfgError("graph has no nodes")
    if not exit_set:
        raise CfgError("graph has no exits")
    known = set(node_list)
    if entry not in known:
        raise CfgError(f"entry {entry} is not a node")
    for x in exit_set:
        if x not in known:
            raise CfgError(f"exit {x} is not a node")
    for s, d in sorted(edge_set):
        if s not in known or d not in known:
            raise CfgError(f"dangling edge {s}->{d}")

    fwd: dict[int, set[int]] = {n: set() for n in node_list}
    back: dict[int, set[int]] = {n: set() for n in node_list}
    for s, d in edge_set:
        fwd[s].add(d)
        back[d].add(s)

    reached = _closure([entry], fwd)
    unreachable = known - reached
    if unreachable:
        raise CfgError(f"nodes unreachable from entry: {sorted(unreachable)}")
    co_reached = _closure(exit_set, back)
    stuck = known - co_reached
    if stuck:
        raise CfgError(f"nodes that cannot reach an exit: {sorted(stuck)}")
    return CfgGraph(node_list, edge_set, entry, exit_set)


def _closure(start: Iterable[int], adj: dict[int, set[int]]) -> set[int]:
    seen = set(start)
    stack = list(seen)
    while stack:
        n = stack.pop()
        for m in adj[n]:
            if m not in seen:
                seen.add(m)
                stack.append(m)
    return seen


def _is_proper_subpath(small: tuple[int, ...], big: tuple[int, ...]) -> bool:
    k = len(small)
    if k >= len(big):
        return False
    return any(big[i : i + k] == small for i in range(len(big) - k + 1))


def enumerate_prime_paths(g: CfgGraph) -> list[PrimePath]:
    """All prime paths of ``g`` in lexicographic order of their node sequences.

    Worklist method: grow every simple path one edge at a time until it closes
    a cycle or cannot be extended, then drop paths that are proper sub-paths
    of another simple path.
    """
    simple: list[tuple[int, ...]] = []
    frontier = [(n,) for n in g.nodes]
    while frontier:
        grown = []
        for path in frontier:
            simple.append(path)
            if len(path) > 1 and path[0] == path[-1]:
                continue
            for nxt in g.successors(path[-1]):
                if nxt == path[0] or nxt not in path:
                    grown.append(path + (nxt,))
        frontier = grown

    by_len = sorted(set(simple), key=len, reverse=True)
    primes = []
    for p in by_len:
        if not any(_is_proper_subpath(p, q) for q in by_len if len(q) > len(p)):
            primes.append(p)
    return [PrimePath(p) for p in sorted(primes)]


def check_trace(trace: ExecutionTrace | Sequence[int], g: CfgGraph) -> tuple[int, ...]:
    visited = tuple(trace.visited if isinstance(trace, ExecutionTrace) else trace)
    if not visited:
        raise MalformedTraceError("empty trace")
    if visited[0] != g.entry:
        raise MalformedTraceError(f"trace starts at {visited[0]}, entry is {g.entry}")
    edges = g.edges
    for pair in zip(visited, visited[1:]):
        if pair not in edges:
            raise MalformedTraceError(f"transition {pair[0]}->{pair[1]} is not an edge")
    return visited


def coverage_of(trace: ExecutionTrace | Sequence[int], g: CfgGraph) -> CoverageSet:
    visited = check_trace(trace, g)
    if max(g.nodes) < 256 and min(g.nodes) >= 0:
        # contiguous-subsequence search done on bytes
        hay = bytes(visited)
        hit = [i for i, p in enumerate(g.prime_paths) if bytes(p.nodes) in hay]
    else:
        hit = [
            i
            for i, p in enumerate(g.prime_paths)
            if p.nodes == visited or _is_proper_subpath(p.nodes, visited)
        ]
    return CoverageSet(frozenset(hit))


def union_coverage(sets: Iterable[CoverageSet]) -> CoverageSet:
    covered: set[int] = set()
    for s in sets:
        covered |= s.covered
    return CoverageSet(frozenset(covered))


def coverage_fraction(c: CoverageSet, g: CfgGraph) -> float:
    total = len(g.prime_paths)
    if any(i < 0 or i >= total for i in c.covered):
        raise ValueError(f"coverage index out of range for a graph with {total} prime paths")
    return len(c.covered) / total
