"""S-expression serialization of GMP individuals.

Grammar::

    individual := "(gmp" "(adf" tree ")" "(mains" tree+ "))"
    tree       := "(num" INT ")" | "(str" STRING ")" | "(bool" ("true"|"false") ")"
                | "(random" KIND ")" | "(response)" | "(failed)" | "(last" INT ")"
                | "(count)" | "(call)" | "(" FUNCTION tree+ ")"

Function names are the node ops (``add``, ``if``, ``loop`` ...). A function's
kind is inferred from its children; ``response``, ``last`` and ``call`` take
their kinds from the signature and the defined function.
"""

from __future__ import annotations

import json
import re
from typing import Optional, Union

from gmpforge.gmp.individual import GenerationParams, GmpIndividual, type_errors
from gmpforge.gmp.nodes import ADF_CALL_OP, FUNCTION_OPS, SPECS_BY_OP, Node
from gmpforge.values import BOOLEAN, NUMERIC, TEXT, Signature, ValueKind

SExpr = Union[str, list]

_TOKEN = re.compile(r'\s*(?:(\()|(\))|("(?:[^"\\]|\\.)*")|([^\s()"]+))')


class ParseError(ValueError):
    pass


def tokenize(text: str) -> list[str]:
    tokens, pos = [], 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character at offset {pos}")
        tokens.append(next(g for g in m.groups() if g is not None))
        pos = m.end()
    return tokens


def parse_sexpr(text: str) -> SExpr:
    """Parse one S-expression into nested lists of atom strings."""
    tokens = tokenize(text)
    if not tokens:
        raise ParseError("empty input")
    expr, rest = _read(tokens, 0)
    if rest != len(tokens):
        raise ParseError("trailing tokens after expression")
    return expr


def _read(tokens: list[str], i: int):
    if i >= len(tokens):
        raise ParseError("unexpected end of input")
    tok = tokens[i]
    if tok == ")":
        raise ParseError("unbalanced ')'")
    if tok != "(":
        return tok, i + 1
    out, i = [], i + 1
    while True:
        if i >= len(tokens):
            raise ParseError("missing ')'")
        if tokens[i] == ")":
            return out, i + 1
        item, i = _read(tokens, i)
        out.append(item)


def tree_to_sexpr(n: Node) -> str:
    op = n.op
    if op == "value":
        if n.kind is NUMERIC:
            return f"(num {n.arg})"
        if n.kind is TEXT:
            return f"(str {json.dumps(n.arg)})"
        return f"(bool {'true' if n.arg else 'false'})"
    if op == "random":
        return f"(random {n.kind.value})"
    if op == "last":
        return f"(last {n.arg})"
    if not n.children:
        return f"({op})"
    return "(" + op + " " + " ".join(tree_to_sexpr(c) for c in n.children) + ")"


def serialize(ind: GmpIndividual) -> str:
    mains = " ".join(tree_to_sexpr(t) for t in ind.mains)
    return f"(gmp (adf {tree_to_sexpr(ind.adf)}) (mains {mains}))"


def _build(expr: SExpr, sig: Optional[Signature], adf_kind: Optional[ValueKind]) -> Node:
    if not isinstance(expr, list) or not expr or not isinstance(expr[0], str):
        raise ParseError(f"expected a node form, got {expr!r}")
    head, args = expr[0], expr[1:]

    def want(count):
        if len(args) != count:
            raise ParseError(f"({head} ...) takes {count} argument(s), got {len(args)}")

    if head == "num":
        want(1)
        try:
            return Node("value", NUMERIC, (), int(args[0]))
        except (TypeError, ValueError):
            raise ParseError(f"bad number {args[0]!r}") from None
    if head == "str":
        want(1)
        if not isinstance(args[0], str) or not args[0].startswith('"'):
            raise ParseError(f"bad string literal {args[0]!r}")
        try:
            return Node("value", TEXT, (), json.loads(args[0]))
        except ValueError:
            raise ParseError(f"bad string literal {args[0]!r}") from None
    if head == "bool":
        want(1)
        if args[0] not in ("true", "false"):
            raise ParseError(f"bad boolean {args[0]!r}")
        return Node("value", BOOLEAN, (), args[0] == "true")
    if head == "random":
        want(1)
        try:
            return Node("random", ValueKind(args[0]))
        except ValueError:
            raise ParseError(f"bad kind {args[0]!r}") from None
    if head == "response":
        want(0)
        return Node("response", sig.return_kind if sig else TEXT)
    if head == "failed":
        want(0)
        return Node("failed", BOOLEAN)
    if head == "count":
        want(0)
        return Node("count", NUMERIC)
    if head == "last":
        want(1)
        try:
            slot = int(args[0])
        except (TypeError, ValueError):
            raise ParseError(f"bad slot {args[0]!r}") from None
        if sig is not None and not 0 <= slot < sig.arity:
            raise ParseError(f"last-output slot {slot} out of range")
        return Node("last", sig.param_kinds[slot] if sig else TEXT, (), slot)
    if head == ADF_CALL_OP:
        want(0)
        if adf_kind is None:
            raise ParseError("(call) outside a main tree")
        return Node(ADF_CALL_OP, adf_kind)
    if head not in FUNCTION_OPS:
        raise ParseError(f"unknown node {head!r}")

    spec = SPECS_BY_OP[head]
    want(spec.arity)
    children = tuple(_build(a, sig, adf_kind) for a in args)
    kinds = tuple(c.kind for c in children)
    matches = [out for ins, out in spec.overloads if ins == kinds]
    if not matches:
        raise ParseError(f"({head} ...) cannot take children of kinds {[k.value for k in kinds]}")
    return Node(head, matches[0], children)


def deserialize(text: str, signature: Signature, params: GenerationParams = GenerationParams()) -> GmpIndividual:
    expr = parse_sexpr(text)
    if (
        not isinstance(expr, list)
        or len(expr) != 3
        or expr[0] != "gmp"
        or not isinstance(expr[1], list)
        or not isinstance(expr[2], list)
        or expr[1][:1] != ["adf"]
        or expr[2][:1] != ["mains"]
        or len(expr[1]) != 2
    ):
        raise ParseError("expected (gmp (adf TREE) (mains TREE...))")
    adf = _build(expr[1][1], signature, None)
    mains = tuple(_build(t, signature, adf.kind) for t in expr[2][1:])
    ind = GmpIndividual(signature, adf, mains)
    errors = type_errors(ind, params)
    if errors:
        raise ParseError("; ".join(errors))
    return ind


_LABELS = {
    "num": "Value", "str": "Value", "bool": "Value", "random": "Random",
    "response": "ProgramResponse", "failed": "OutputFailure", "last": "LastOutput",
    "count": "ExecutionCount", ADF_CALL_OP: "DefinedFunctionCall",
    "gmp": "GMP", "adf": "DefinedFunction", "mains": "Mains",
}
_LABELS.update({op: spec.name for op, spec in SPECS_BY_OP.items() if op in FUNCTION_OPS})


def pretty(expr: SExpr) -> str:
    """Indented one-node-per-line rendering of a parsed S-expression."""
    lines: list[str] = []

    def walk(e, depth):
        pad = "  " * depth
        if not isinstance(e, list) or not e:
            lines.append(f"{pad}{e}")
            return
        head = e[0]
        atoms = [a for a in e[1:] if not isinstance(a, list)]
        label = _LABELS.get(head, head)
        detail = f" {head} {' '.join(atoms)}".rstrip() if head in ("num", "str", "bool", "random", "last") else ""
        lines.append(f"{pad}{label}{':' if detail else ''}{detail}")
        for i, sub in enumerate(a for a in e[1:] if isinstance(a, list)):
            if head == "mains":
                lines.append(f"{pad}  [main {i}]")
                walk(sub, depth + 2)
            else:
                walk(sub, depth + 1)

    walk(expr, 0)
    return "\n".join(lines)
