"""GMP individuals: one defined function plus one main tree per SUT parameter."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Optional

from gmpforge.gmp.nodes import (
    ADF_CALL_OP,
    FUNCTION_SPECS,
    SPECS_BY_OP,
    Node,
)
from gmpforge.values import BOOLEAN, NUMERIC, TEXT, Payload, Signature, ValueKind

VALUE_LETTERS = "abcdefghijklmnopqrstuvwxyz"


@dataclass(frozen=True)
class GenerationParams:
    terminal_chance: float = 0.65
    max_function_depth: int = 5
    max_main_depth: int = 15

    def __post_init__(self):
        if not 0.0 <= self.terminal_chance <= 1.0:
            raise ValueError("terminal_chance must be a probability")
        if self.max_function_depth < 1 or self.max_main_depth < 1:
            raise ValueError("depth limits must be at least 1")


@dataclass
class GmpState:
    program_response: Payload
    output_failure: bool
    last_outputs: list
    execution_count: int = 0

    @classmethod
    def initial(cls, signature: Signature) -> "GmpState":
        return cls(
            program_response=signature.return_kind.default,
            output_failure=False,
            last_outputs=[k.default for k in signature.param_kinds],
        )


@dataclass(eq=False)
class GmpIndividual:
    signature: Signature
    adf: Node
    mains: tuple[Node, ...]
    state: GmpState = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        self.mains = tuple(self.mains)
        if self.state is None:
            self.state = GmpState.initial(self.signature)

    @property
    def trees(self) -> tuple[Node, ...]:
        return (self.adf,) + self.mains

    @property
    def size(self) -> int:
        return sum(t.size for t in self.trees)

    def structurally_equal(self, other: "GmpIndividual") -> bool:
        return self.signature == other.signature and self.trees == other.trees

    def with_trees(self, adf: Node, mains) -> "GmpIndividual":
        return GmpIndividual(self.signature, adf, tuple(mains))

    def clone(self) -> "GmpIndividual":
        """Same trees, fresh state (trees are immutable and shared)."""
        return GmpIndividual(self.signature, self.adf, self.mains)


def available_kinds(signature: Signature) -> frozenset[ValueKind]:
    """Kinds a tree may use: the signature's own plus Boolean for conditions."""
    return signature.kinds | {BOOLEAN}


def random_literal(kind: ValueKind, rng: random.Random) -> Payload:
    if kind is NUMERIC:
        return rng.randint(1, 10)
    if kind is TEXT:
        return rng.choice(VALUE_LETTERS)
    return rng.random() < 0.5


class TreeGrower:
    """Typed grow-method construction for one signature."""

    def __init__(self, signature: Signature, params: GenerationParams, rng: random.Random):
        self.signature = signature
        self.params = params
        self.rng = rng
        self.kinds = available_kinds(signature)
        # function overloads whose child kinds are all available, by output kind
        self._functions: dict[ValueKind, list] = {k: [] for k in self.kinds}
        for spec in FUNCTION_SPECS:
            for kind in self.kinds:
                ok = [o for o in spec.overloads_for(kind) if all(c in self.kinds for c in o[0])]
                if ok:
                    self._functions[kind].append((spec, ok))

    def terminal(self, kind: ValueKind) -> Node:
        sig = self.signature
        choices = ["value", "random"]
        if kind is sig.return_kind:
            choices.append("response")
        if kind is BOOLEAN:
            choices.append("failed")
        last_slots = [i for i, k in enumerate(sig.param_kinds) if k is kind]
        if last_slots:
            choices.append("last")
        if kind is NUMERIC:
            choices.append("count")
        op = self.rng.choice(choices)
        if op == "value":
            return Node("value", kind, (), random_literal(kind, self.rng))
        if op == "last":
            return Node("last", kind, (), self.rng.choice(last_slots))
        return Node(op, kind)

    def grow(self, kind: ValueKind, max_depth: int, adf_kind: Optional[ValueKind] = None) -> Node:
        """Grow a tree of ``kind`` no deeper than ``max_depth``.

        ``adf_kind`` is the defined function's output kind when growing inside a
        main tree, which makes ADF calls of that kind eligible.
        """
        rng = self.rng
        if max_depth <= 1 or rng.random() < self.params.terminal_chance:
            return self.terminal(kind)
        options = list(self._functions[kind])
        if adf_kind is kind:
            options.append((None, None))
        spec, overloads = rng.choice(options)
        if spec is None:
            return Node(ADF_CALL_OP, kind)
        child_kinds, _ = rng.choice(overloads)
        children = tuple(self.grow(ck, max_depth - 1, adf_kind) for ck in child_kinds)
        return Node(spec.op, kind, children)


def generate_random(
    signature: Signature, params: GenerationParams = GenerationParams(), rng: Optional[random.Random] = None
) -> GmpIndividual:
    rng = rng or random.Random()
    grower = TreeGrower(signature, params, rng)
    adf_kind = rng.choice(sorted(grower.kinds, key=lambda k: k.value))
    adf = grower.grow(adf_kind, params.max_function_depth)
    mains = tuple(grower.grow(k, params.max_main_depth, adf_kind) for k in signature.param_kinds)
    return GmpIndividual(signature, adf, mains)


def type_errors(ind: GmpIndividual, params: GenerationParams = GenerationParams()) -> list[str]:
    """Every typing or depth violation in ``ind``; empty when valid."""
    errors: list[str] = []
    sig = ind.signature
    if len(ind.mains) != sig.arity:
        errors.append(f"{len(ind.mains)} main trees for arity {sig.arity}")
    for i, (tree, kind) in enumerate(zip(ind.mains, sig.param_kinds)):
        if tree.kind is not kind:
            errors.append(f"main {i} produces {tree.kind.name}, parameter is {kind.name}")
    if ind.adf.height > params.max_function_depth:
        errors.append(f"adf height {ind.adf.height} > {params.max_function_depth}")
    for i, tree in enumerate(ind.mains):
        if tree.height > params.max_main_depth:
            errors.append(f"main {i} height {tree.height} > {params.max_main_depth}")
    _check_tree(ind.adf, sig, None, "adf", errors)
    for i, tree in enumerate(ind.mains):
        _check_tree(tree, sig, ind.adf.kind, f"main {i}", errors)
    return errors


def _check_tree(tree: Node, sig: Signature, adf_kind, where: str, errors: list[str]) -> None:
    for node in tree:
        if node.op == ADF_CALL_OP:
            if adf_kind is None:
                errors.append(f"{where}: defined function calls itself")
            elif node.kind is not adf_kind or node.children:
                errors.append(f"{where}: call of kind {node.kind.name}, function is {adf_kind.name}")
            continue
        spec = SPECS_BY_OP.get(node.op)
        if spec is None:
            errors.append(f"{where}: unknown op {node.op!r}")
            continue
        child_kinds = tuple(c.kind for c in node.children)
        if (child_kinds, node.kind) not in spec.overloads:
            errors.append(f"{where}: {node.op} cannot map {child_kinds} to {node.kind.name}")
        if node.op == "value" and not node.kind.accepts(node.arg):
            errors.append(f"{where}: literal {node.arg!r} is not {node.kind.name}")
        if node.op == "response" and node.kind is not sig.return_kind:
            errors.append(f"{where}: response must be {sig.return_kind.name}")
        if node.op == "last":
            if not isinstance(node.arg, int) or not 0 <= node.arg < sig.arity:
                errors.append(f"{where}: last-output slot {node.arg!r} out of range")
            elif sig.param_kinds[node.arg] is not node.kind:
                errors.append(f"{where}: last-output slot {node.arg} is not {node.kind.name}")

