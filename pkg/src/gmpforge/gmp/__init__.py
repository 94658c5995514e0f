"""Genetic micro-programs: typed ADF-structured program trees."""

from gmpforge.gmp.individual import (
    GenerationParams,
    GmpIndividual,
    GmpState,
    TreeGrower,
    available_kinds,
    generate_random,
    type_errors,
)
from gmpforge.gmp.interpreter import (
    LOOP_ITERATION_CAP,
    STEP_CAP,
    ExecutionOutcome,
    Inconclusive,
    Produced,
    execute,
    reset_state,
    update_state,
)
from gmpforge.gmp.nodes import FUNCTION_SPECS, TERMINAL_SPECS, Category, Node, NodeSpec
from gmpforge.gmp.operators import crossover, mutate
from gmpforge.gmp.sexpr import ParseError, deserialize, parse_sexpr, pretty, serialize

__all__ = [
    "Category",
    "ExecutionOutcome",
    "FUNCTION_SPECS",
    "GenerationParams",
    "GmpIndividual",
    "GmpState",
    "Inconclusive",
    "LOOP_ITERATION_CAP",
    "Node",
    "NodeSpec",
    "ParseError",
    "Produced",
    "STEP_CAP",
    "TERMINAL_SPECS",
    "TreeGrower",
    "available_kinds",
    "crossover",
    "deserialize",
    "execute",
    "generate_random",
    "mutate",
    "parse_sexpr",
    "pretty",
    "reset_state",
    "serialize",
    "type_errors",
    "update_state",
]
