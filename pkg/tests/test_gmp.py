import random
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmpforge.gmp import (
    FUNCTION_SPECS,
    LOOP_ITERATION_CAP,
    TERMINAL_SPECS,
    GenerationParams,
    GmpIndividual,
    Inconclusive,
    Node,
    ParseError,
    Produced,
    crossover,
    deserialize,
    execute,
    generate_random,
    mutate,
    parse_sexpr,
    pretty,
    reset_state,
    serialize,
    type_errors,
    update_state,
)
from gmpforge.gmp.sexpr import tree_to_sexpr
from gmpforge.sut import SutResponse, registry
from gmpforge.cfg import ExecutionTrace
from gmpforge.values import BOOLEAN, NUMERIC, TEXT, RuntimeValue, Signature

from oracles import check_individual

GOLDEN = Path(__file__).parent / "golden"
SIGNATURES = sorted({s.signature for s in registry()}, key=str)

NN = Signature((NUMERIC, NUMERIC), NUMERIC)
T1 = Signature((TEXT,), BOOLEAN)


def num(v):
    return Node("value", NUMERIC, (), v)


def text(v):
    return Node("value", TEXT, (), v)


def boolean(v):
    return Node("value", BOOLEAN, (), v)


def single(main, sig=Signature((NUMERIC,), NUMERIC), adf=None):
    return GmpIndividual(sig, adf or num(1), (main,))


def run(main, sig=Signature((NUMERIC,), NUMERIC)):
    out = execute(single(main, sig), random.Random(0))
    assert isinstance(out, Produced)
    return out.values[0].payload


def test_node_tables_cover_both_tables():
    assert [s.name for s in FUNCTION_SPECS] == [
        "Add", "Division", "Multiplication", "Subtraction", "IfStatement", "Loop", "LengthOf",
        "EqualsComparator", "GreaterThanComparator", "LessThanComparator", "NotEqualComparator",
        "NotNullComparator",
    ]
    assert [s.name for s in TERMINAL_SPECS] == [
        "Value", "Random", "ProgramResponse", "OutputFailure", "LastOutput", "ExecutionCount",
    ]


# ---------------------------------------------------------------- generation


def test_terminal_chance_one_gives_terminal_mains():
    sig = Signature((BOOLEAN,), BOOLEAN)
    ind = generate_random(sig, GenerationParams(terminal_chance=1.0), random.Random(1))
    assert all(not t.children for t in ind.trees)


def test_two_numeric_params_give_two_mains():
    ind = generate_random(NN, GenerationParams(), random.Random(2))
    assert len(ind.mains) == 2 and all(m.kind is NUMERIC for m in ind.mains)


@pytest.mark.parametrize("sig", SIGNATURES, ids=str)
def test_generated_individuals_are_valid(sig):
    rng = random.Random(str(sig))
    for _ in range(1000):
        ind = generate_random(sig, GenerationParams(), rng)
        assert check_individual(ind) == []
        assert type_errors(ind) == []


def test_single_kind_signature_prunes_bridges():
    rng = random.Random(3)
    sig = Signature((BOOLEAN, BOOLEAN), BOOLEAN)
    for _ in range(300):
        ind = generate_random(sig, GenerationParams(), rng)
        assert all(n.kind is BOOLEAN for t in ind.trees for n in t)


# ---------------------------------------------------------------- execution


def test_literal_and_concatenation():
    assert run(num(7)) == 7
    assert run(Node("add", TEXT, (text("a"), text("b"))), Signature((TEXT,), BOOLEAN)) == "ab"


def test_arithmetic_semantics():
    assert run(Node("div", NUMERIC, (num(7), num(0)))) == 1
    assert run(Node("div", NUMERIC, (Node("sub", NUMERIC, (num(1), num(8))), num(2)))) == -3
    assert run(Node("mul", NUMERIC, (num(6), num(7)))) == 42
    assert run(Node("len", NUMERIC, (Node("sub", NUMERIC, (num(1), num(1000))),))) == 3


def test_boolean_add_is_conjunction():
    sig = Signature((BOOLEAN,), BOOLEAN)
    assert run(Node("add", BOOLEAN, (boolean(True), boolean(False))), sig) is False
    assert run(Node("gt", BOOLEAN, (boolean(True), boolean(False))), sig) is True


def test_if_and_notnull():
    sig = Signature((TEXT,), BOOLEAN)
    cond = Node("notnull", BOOLEAN, (Node("last", TEXT, (), 0),))
    tree = Node("if", TEXT, (cond, text("x"), text("y")))
    ind = single(tree, sig)
    assert execute(ind).values[0].payload == "y"  # last output starts as ""
    assert execute(ind).values[0].payload == "x"


def test_always_true_loop_is_inconclusive_at_cap():
    tree = Node("loop", NUMERIC, (boolean(True), num(3)))
    ind = single(tree)
    out = execute(ind)
    assert isinstance(out, Inconclusive)
    assert out.loop_iterations == LOOP_ITERATION_CAP == 250
    assert ind.state.execution_count == 0


def test_loop_that_never_runs_yields_default():
    assert run(Node("loop", NUMERIC, (boolean(False), num(3)))) == 0


def test_loop_with_false_state_condition():
    # count is 0 on the first execution, so count < 0 never holds
    cond = Node("lt", BOOLEAN, (Node("count", NUMERIC), num(0)))
    assert run(Node("loop", NUMERIC, (cond, num(3)))) == 0


def test_initial_state_and_update():
    sig = Signature((NUMERIC,), NUMERIC)
    ind = single(Node("response", NUMERIC), sig)
    assert execute(ind).values[0].payload == 0
    update_state(ind, SutResponse(RuntimeValue.of(4), ExecutionTrace((0,)), False))
    assert execute(ind).values[0].payload == 4
    update_state(ind, SutResponse(None, ExecutionTrace((0,)), True))
    assert ind.state.output_failure is True
    assert execute(ind).values[0].payload == 4
    assert ind.state.execution_count == 3


def test_failed_terminal_reads_last_failure():
    sig = Signature((BOOLEAN,), BOOLEAN)
    ind = single(Node("failed", BOOLEAN), sig)
    update_state(ind, SutResponse(None, ExecutionTrace((0,)), True))
    assert execute(ind).values[0].payload is True


def test_reset_is_idempotent():
    ind = single(Node("count", NUMERIC))
    for _ in range(5):
        execute(ind)
    assert ind.state.execution_count == 5
    reset_state(ind)
    once = vars(ind.state).copy()
    reset_state(ind)
    assert vars(ind.state) == once and once["execution_count"] == 0


def test_execution_count_feeds_outputs():
    ind = single(Node("count", NUMERIC))
    assert [execute(ind).values[0].payload for _ in range(3)] == [0, 1, 2]


def test_adf_call_evaluates_defined_function():
    ind = single(Node("call", NUMERIC), adf=Node("add", NUMERIC, (num(2), num(3))))
    assert execute(ind).values[0].payload == 5


def test_execute_deterministic_given_seed():
    rng = random.Random(4)
    for _ in range(200):
        ind = generate_random(NN, GenerationParams(), rng)
        a = [execute(ind, random.Random(9)) for _ in range(1)]
        reset_state(ind)
        b = [execute(ind, random.Random(9)) for _ in range(1)]
        assert a == b


def test_nested_loops_respect_step_cap():
    inner = Node("loop", NUMERIC, (Node("random", BOOLEAN), num(1)))
    tree = inner
    for _ in range(4):
        tree = Node("loop", NUMERIC, (boolean(True), tree))
    out = execute(single(tree), random.Random(0), step_cap=10_000)
    assert isinstance(out, Inconclusive) and out.steps <= 10_001


def test_huge_numbers_saturate():
    big = num(10)
    for _ in range(6):
        big = Node("mul", NUMERIC, (big, big))
    assert run(big) == 2**63 - 1


# ---------------------------------------------------------------- operators


def test_mutating_depth_one_tree_keeps_kind():
    ind = GmpIndividual(T1, boolean(True), (text("q"),))
    rng = random.Random(5)
    for _ in range(50):
        child = mutate(ind, 5, GenerationParams(), rng)
        assert child.mains[0].kind is TEXT and child.adf.kind is BOOLEAN
        assert ind.mains[0] == text("q")


@pytest.mark.parametrize("sig", SIGNATURES, ids=str)
def test_mutants_and_offspring_valid(sig):
    rng = random.Random("ops" + str(sig))
    pop = [generate_random(sig, GenerationParams(), rng) for _ in range(40)]
    for _ in range(400):
        m = mutate(rng.choice(pop), 5, GenerationParams(), rng)
        assert check_individual(m) == []
        a, b = crossover(rng.choice(pop), rng.choice(pop), rng)
        assert check_individual(a) == [] and check_individual(b) == []
        assert execute(m, rng) is not None


def test_crossover_of_single_terminals_swaps_them():
    a = GmpIndividual(NN, num(1), (num(2), num(3)))
    b = GmpIndividual(NN, num(4), (num(5), num(6)))
    ca, cb = crossover(a, b, random.Random(6))
    swapped = [r for r in range(3) if (ca.trees[r], cb.trees[r]) == (b.trees[r], a.trees[r])]
    kept = [r for r in range(3) if (ca.trees[r], cb.trees[r]) == (a.trees[r], b.trees[r])]
    assert len(swapped) == 1 and len(kept) == 2


def test_crossover_with_itself_conserves_material():
    rng = random.Random(7)
    a = GmpIndividual(NN, num(1), (num(2), num(3)))
    for _ in range(20):
        ca, cb = crossover(a, a, rng)
        assert ca.structurally_equal(a) and cb.structurally_equal(a)
    for _ in range(200):
        p = generate_random(NN, GenerationParams(), rng)
        ca, cb = crossover(p, p, rng)
        assert ca.size + cb.size == 2 * p.size


def test_crossover_requires_same_signature():
    with pytest.raises(ValueError):
        crossover(GmpIndividual(NN, num(1), (num(1), num(1))), GmpIndividual(T1, boolean(True), (text("a"),)))


# ---------------------------------------------------------------- serialization


def test_value_golden():
    assert tree_to_sexpr(num(7)) + "\n" == (GOLDEN / "value7.gmp").read_text()
    assert pretty(parse_sexpr((GOLDEN / "value7.gmp").read_text())) == "Value: num 7"


def test_individual_golden():
    ind = GmpIndividual(
        T1,
        Node("notnull", BOOLEAN, (Node("last", TEXT, (), 0),)),
        (Node("if", TEXT, (Node("call", BOOLEAN), Node("add", TEXT, (text("a"), text('"'))), Node("random", TEXT))),),
    )
    expected = (GOLDEN / "individual.gmp").read_text()
    assert serialize(ind) + "\n" == expected
    assert pretty(parse_sexpr(expected)) + "\n" == (GOLDEN / "individual.txt").read_text()


@pytest.mark.parametrize("sig", SIGNATURES, ids=str)
def test_round_trip(sig):
    rng = random.Random("rt" + str(sig))
    for _ in range(300):
        ind = generate_random(sig, GenerationParams(), rng)
        execute(ind, rng)
        back = deserialize(serialize(ind), sig)
        assert back.structurally_equal(ind)
        assert back.state.execution_count == 0
        assert serialize(back) == serialize(ind)


@pytest.mark.parametrize(
    "text, sig",
    [
        ("", NN),
        ("(gmp (adf (num 1)) (mains (num 1)))", NN),
        ("(gmp (adf (num 1)) (mains (num 1) (str \"a\")))", NN),
        ("(gmp (adf (num 1)) (mains (num 1) (num 2))", NN),
        ("(gmp (adf (num 1)) (mains (num 1) (last 5)))", NN),
        ("(gmp (adf (call)) (mains (num 1) (num 2)))", NN),
        ("(gmp (adf (num 1)) (mains (num 1) (add (num 1) (str \"a\"))))", NN),
        ("(gmp (adf (num 1)) (mains (frob) (num 2)))", NN),
        ("(gmp (adf (num x)) (mains (num 1) (num 2)))", NN),
    ],
)
def test_deserialize_rejects(text, sig):
    with pytest.raises(ParseError):
        deserialize(text, sig)


def test_deserialize_rejects_too_deep():
    tree = "(num 1)"
    for _ in range(15):
        tree = f"(add {tree} (num 1))"
    with pytest.raises(ParseError):
        deserialize(f"(gmp (adf (num 1)) (mains {tree} (num 1)))", NN)


@settings(max_examples=200, deadline=None)
@given(st.text(alphabet="()abnum \"17\\", max_size=40))
def test_parser_never_crashes(s):
    try:
        deserialize(s, NN)
    except ParseError:
        pass
