"""Execution of GMP individuals and their inter-execution state."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional, Union

from gmpforge.gmp.individual import GmpIndividual, GmpState, random_literal
from gmpforge.gmp.nodes import Node
from gmpforge.values import BOOLEAN, NUMERIC, RuntimeValue, saturate

LOOP_ITERATION_CAP = 250
STEP_CAP = 1_000_000
# concatenation can double a string per execution through LastOutput
MAX_TEXT_LENGTH = 1 << 16


@dataclass(frozen=True)
class Produced:
    values: tuple[RuntimeValue, ...]


@dataclass(frozen=True)
class Inconclusive:
    reason: str
    loop_iterations: Optional[int] = None
    steps: int = 0


ExecutionOutcome = Union[Produced, Inconclusive]


class _Abort(Exception):
    def __init__(self, reason: str, loop_iterations: Optional[int] = None):
        super().__init__(reason)
        self.reason = reason
        self.loop_iterations = loop_iterations


class _Machine:
    __slots__ = ("ind", "state", "rng", "steps", "step_cap", "loop_cap")

    def __init__(self, ind: GmpIndividual, rng: random.Random, step_cap: int, loop_cap: int):
        self.ind = ind
        self.state = ind.state
        self.rng = rng
        self.steps = 0
        self.step_cap = step_cap
        self.loop_cap = loop_cap

    def eval(self, n: Node):
        self.steps += 1
        if self.steps > self.step_cap:
            raise _Abort("step cap")
        op = n.op
        kids = n.children

        if op == "value":
            return n.arg
        if op == "random":
            return random_literal(n.kind, self.rng)
        if op == "response":
            return self.state.program_response
        if op == "failed":
            return self.state.output_failure
        if op == "last":
            return self.state.last_outputs[n.arg]
        if op == "count":
            return self.state.execution_count
        if op == "call":
            return self.eval(self.ind.adf)

        if op == "if":
            return self.eval(kids[1]) if self.eval(kids[0]) else self.eval(kids[2])
        if op == "loop":
            result = n.kind.default
            iterations = 0
            while self.eval(kids[0]):
                if iterations == self.loop_cap:
                    raise _Abort("loop cap", iterations)
                result = self.eval(kids[1])
                iterations += 1
            return result
        if op == "notnull":
            return self.eval(kids[0]) != ""
        if op == "len":
            v = self.eval(kids[0])
            return len(v) if isinstance(v, str) else len(str(abs(v)))

        a = self.eval(kids[0])
        b = self.eval(kids[1])
        if op == "add":
            if n.kind is NUMERIC:
                return saturate(a + b)
            if n.kind is BOOLEAN:
                return a and b
            return (a + b)[:MAX_TEXT_LENGTH]
        if op == "sub":
            return saturate(a - b)
        if op == "mul":
            return saturate(a * b)
        if op == "div":
            if b == 0:
                return 1
            q = abs(a) // abs(b)
            return saturate(q if (a < 0) == (b < 0) else -q)
        if op == "eq":
            return a == b
        if op == "ne":
            return a != b
        if op == "gt":
            return a > b
        if op == "lt":
            return a < b
        raise ValueError(f"unknown op {op!r}")


def execute(
    ind: GmpIndividual,
    rng: Optional[random.Random] = None,
    *,
    step_cap: int = STEP_CAP,
    loop_cap: int = LOOP_ITERATION_CAP,
) -> ExecutionOutcome:
    """Evaluate every main tree once, producing one input tuple.

    A loop whose comparator still holds after ``loop_cap`` body evaluations,
    or more than ``step_cap`` node evaluations in total, makes the whole
    execution Inconclusive; the state is then left untouched.
    """
    m = _Machine(ind, rng or random.Random(0), step_cap, loop_cap)
    try:
        payloads = [m.eval(tree) for tree in ind.mains]
    except _Abort as exc:
        return Inconclusive(exc.reason, exc.loop_iterations, m.steps)
    ind.state.last_outputs = list(payloads)
    ind.state.execution_count += 1
    return Produced(tuple(RuntimeValue(t.kind, p) for t, p in zip(ind.mains, payloads)))


def update_state(ind: GmpIndividual, response) -> None:
    """Store a SUT response for the ProgramResponse and OutputFailure terminals.

    A failed invocation has no value, so ProgramResponse keeps the previous one.
    """
    ind.state.output_failure = bool(response.failed)
    if not response.failed and response.value is not None:
        ind.state.program_response = response.value.payload


def reset_state(ind: GmpIndividual) -> None:
    ind.state = GmpState.initial(ind.signature)
