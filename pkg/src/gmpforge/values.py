"""Value kinds shared by program trees, SUT signatures and runtime values."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

Payload = Union[int, str, bool]


class ValueKind(enum.Enum):
    NUMERIC = "num"
    TEXT = "str"
    BOOLEAN = "bool"

    @property
    def default(self) -> Payload:
        return _DEFAULTS[self]

    def accepts(self, payload: object) -> bool:
        if self is ValueKind.BOOLEAN:
            return isinstance(payload, bool)
        if self is ValueKind.NUMERIC:
            return isinstance(payload, int) and not isinstance(payload, bool)
        return isinstance(payload, str)

    @classmethod
    def of(cls, payload: object) -> "ValueKind":
        for kind in cls:
            if kind.accepts(payload):
                return kind
        raise TypeError(f"no value kind for {payload!r}")

    @classmethod
    def parse(cls, name: str) -> "ValueKind":
        aliases = {"numeric": "num", "text": "str", "string": "str", "boolean": "bool"}
        return cls(aliases.get(name.lower(), name.lower()))


_DEFAULTS = {ValueKind.NUMERIC: 0, ValueKind.TEXT: "", ValueKind.BOOLEAN: False}

NUMERIC, TEXT, BOOLEAN = ValueKind.NUMERIC, ValueKind.TEXT, ValueKind.BOOLEAN


@dataclass(frozen=True)
class RuntimeValue:
    kind: ValueKind
    payload: Payload

    def __post_init__(self):
        if not self.kind.accepts(self.payload):
            raise TypeError(f"payload {self.payload!r} is not a {self.kind.name} value")

    @classmethod
    def of(cls, payload: Payload) -> "RuntimeValue":
        return cls(ValueKind.of(payload), payload)

    @classmethod
    def default(cls, kind: ValueKind) -> "RuntimeValue":
        return cls(kind, kind.default)


@dataclass(frozen=True)
class Signature:
    param_kinds: tuple[ValueKind, ...]
    return_kind: ValueKind

    def __post_init__(self):
        if not self.param_kinds:
            raise ValueError("a signature needs at least one parameter")

    @property
    def arity(self) -> int:
        return len(self.param_kinds)

    @property
    def kinds(self) -> frozenset[ValueKind]:
        return frozenset(self.param_kinds) | {self.return_kind}

    def __str__(self) -> str:
        params = ", ".join(k.value for k in self.param_kinds)
        return f"({params}) -> {self.return_kind.value}"


def saturate(n: int) -> int:
    return INT64_MIN if n < INT64_MIN else INT64_MAX if n > INT64_MAX else n
