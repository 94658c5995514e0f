"""Instrumented software components under test (SUTs).

Each corpus member is a small Python function that reports the control-flow
nodes it passes through to a :class:`Tracer`. The descriptor pairs it with
its hand-declared graph, its signature and the execution guards.
"""

from __future__ import annotations

import re
import sys
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional

from gmpforge.cfg import CfgGraph, ExecutionTrace
from gmpforge.values import BOOLEAN, NUMERIC, TEXT, RuntimeValue, Signature, ValueKind

DEFAULT_STEP_LIMIT = 100_000
DEFAULT_DEPTH_LIMIT = 10_000
NUMERIC_CLAMP = 10**6
TEXT_CLAMP = 256

# recursive corpus members may legitimately nest DEFAULT_DEPTH_LIMIT frames
if sys.getrecursionlimit() < 3 * DEFAULT_DEPTH_LIMIT:
    sys.setrecursionlimit(3 * DEFAULT_DEPTH_LIMIT)


class ContractError(TypeError):
    """Inputs do not match the SUT signature (a caller bug)."""


class GuardTripped(Exception):
    """Execution exceeded the step or recursion-depth guard."""


class DomainError(Exception):
    """The SUT rejected its input (division by zero, numeric overflow)."""


class Tracer:
    """Records node visits for the outermost activation and enforces guards.

    Every visit costs one step, including visits made by nested recursive
    activations, which are counted but not recorded.
    """

    def __init__(self, step_limit: int = DEFAULT_STEP_LIMIT, depth_limit: int = DEFAULT_DEPTH_LIMIT):
        self.step_limit = step_limit
        self.depth_limit = depth_limit
        self.visited: list[int] = []
        self.steps = 0
        self.depth = 0

    def visit(self, node: int) -> None:
        self.steps += 1
        if self.steps > self.step_limit:
            raise GuardTripped(f"step limit {self.step_limit} exceeded")
        if self.depth <= 1:
            self.visited.append(node)

    def enter(self) -> None:
        self.depth += 1
        if self.depth > self.depth_limit:
            raise GuardTripped(f"recursion depth {self.depth_limit} exceeded")

    def leave(self) -> None:
        self.depth -= 1

    def loop(self, node: int, items: Iterable) -> Iterator:
        """Iterate ``items``, visiting ``node`` once per pass (once if there are none)."""
        self.visit(node)
        for i, item in enumerate(items):
            if i:
                self.visit(node)
            yield item

    def repeat(self, node: int, cond: Callable[[], bool]) -> Iterator[None]:
        """``while cond()`` with the same visiting rule as :meth:`loop`."""
        self.visit(node)
        first = True
        while cond():
            if not first:
                self.visit(node)
            first = False
            yield


@dataclass(frozen=True)
class SutResponse:
    value: Optional[RuntimeValue]
    trace: ExecutionTrace
    failed: bool
    reason: str = ""


@dataclass(frozen=True, eq=False)
class SutDescriptor:
    name: str
    signature: Signature
    graph: CfgGraph
    implementation: Callable = field(repr=False)
    node_labels: dict = field(default_factory=dict, repr=False)
    notes: str = ""
    reconstructed: bool = False
    step_limit: int = DEFAULT_STEP_LIMIT
    depth_limit: int = DEFAULT_DEPTH_LIMIT
    numeric_clamp: int = NUMERIC_CLAMP
    text_clamp: int = TEXT_CLAMP

    @property
    def slug(self) -> str:
        return slugify(self.name)

    @property
    def arity(self) -> int:
        return self.signature.arity

    @property
    def prime_path_count(self) -> int:
        return len(self.graph.prime_paths)

    def clamp(self, value: RuntimeValue) -> RuntimeValue:
        if value.kind is NUMERIC:
            lim = self.numeric_clamp
            return RuntimeValue(NUMERIC, max(-lim, min(lim, value.payload)))
        if value.kind is TEXT and len(value.payload) > self.text_clamp:
            return RuntimeValue(TEXT, value.payload[: self.text_clamp])
        return value

    def __reduce__(self):
        # descriptors hold plain functions; ship them across processes by name
        return (get_sut, (self.name,))


def invoke(sut: SutDescriptor, inputs: Iterable[RuntimeValue]) -> SutResponse:
    """Run ``sut`` on ``inputs`` and return its value with the node trace."""
    inputs = tuple(inputs)
    kinds = sut.signature.param_kinds
    if len(inputs) != len(kinds):
        raise ContractError(f"{sut.name} takes {len(kinds)} inputs, got {len(inputs)}")
    for i, (v, k) in enumerate(zip(inputs, kinds)):
        if not isinstance(v, RuntimeValue) or v.kind is not k:
            raise ContractError(f"{sut.name} input {i} must be {k.name}, got {v!r}")
    args = [sut.clamp(v).payload for v in inputs]

    tracer = Tracer(sut.step_limit, sut.depth_limit)
    try:
        result = sut.implementation(tracer, *args)
    except (GuardTripped, DomainError) as exc:
        return SutResponse(None, ExecutionTrace(tuple(tracer.visited)), True, str(exc))
    return SutResponse(
        RuntimeValue(sut.signature.return_kind, result),
        ExecutionTrace(tuple(tracer.visited)),
        False,
    )


def slugify(name: str) -> str:
    return re.sub(r"[^a-z0-9]+", "-", name.lower()).strip("-")


def _key(name: str) -> str:
    return re.sub(r"[^a-z0-9]", "", name.lower())


# spellings used elsewhere for the same objects
_ALIASES = {
    "euclideanalgorithmiterative": "euclideaniterative",
    "euclideanalgorithmrecursive": "euclideanrecursive",
    "fibonnaciiterative": "fibonacciiterative",
    "fibonnacirecursive": "fibonaccirecursive",
}


def registry() -> list[SutDescriptor]:
    from gmpforge.sut.corpus import CORPUS

    return list(CORPUS)


def get_sut(name: str) -> SutDescriptor:
    from gmpforge.sut.corpus import CORPUS

    key = _key(name)
    key = _ALIASES.get(key, key)
    for sut in CORPUS:
        if _key(sut.name) == key:
            return sut
    raise KeyError(f"unknown SUT {name!r}")


__all__ = [
    "BOOLEAN",
    "NUMERIC",
    "TEXT",
    "ContractError",
    "DomainError",
    "GuardTripped",
    "SutDescriptor",
    "SutResponse",
    "Tracer",
    "ValueKind",
    "get_sut",
    "invoke",
    "registry",
    "slugify",
]
