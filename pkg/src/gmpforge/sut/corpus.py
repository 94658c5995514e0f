"""The twenty corpus programs and their hand-declared control-flow graphs.

Node ids are listed next to each statement in ``nodes=``. Loop statements are
single self-looping nodes: the loop node is visited once per pass through the
body, and once when the body never runs. Recursive programs trace only their
outermost activation; nested activations still consume guard steps.
"""

from __future__ import annotations

from collections import Counter
from math import isqrt

from gmpforge.cfg import build_cfg
from gmpforge.sut import DomainError, SutDescriptor, Tracer
from gmpforge.values import BOOLEAN, INT64_MAX, NUMERIC, TEXT, Signature

CORPUS: list[SutDescriptor] = []


def program(name, params, returns, *, nodes, edges, exits, notes="", reconstructed=False):
    """Register a traced implementation together with its graph."""
    pairs = [tuple(int(x) for x in e.split("-")) for e in edges.split()]

    def register(fn):
        CORPUS.append(
            SutDescriptor(
                name=name,
                signature=Signature(tuple(params), returns),
                graph=build_cfg(nodes, pairs, 0, exits),
                implementation=fn,
                node_labels=dict(nodes),
                notes=notes,
                reconstructed=reconstructed,
            )
        )
        return fn

    return register


def _checked(n: int) -> int:
    if n > INT64_MAX or n < -INT64_MAX - 1:
        raise DomainError("64-bit overflow")
    return n


@program(
    "Palindrome - Iterative", [TEXT], BOOLEAN,
    nodes={0: "i, j = 0, len(s) - 1", 1: "while i < j and s[i] == s[j]: i += 1; j -= 1", 2: "return i >= j"},
    edges="0-1 1-1 1-2", exits=[2],
)
def palindrome_iterative(t: Tracer, s: str) -> bool:
    t.visit(0)
    i, j = 0, len(s) - 1
    for _ in t.repeat(1, lambda: i < j and s[i] == s[j]):
        i += 1
        j -= 1
    t.visit(2)
    return i >= j


@program(
    "Palindrome - Recursive", [TEXT], BOOLEAN,
    nodes={0: "if len(s) < 2", 1: "return True", 2: "return s[0] == s[-1] and is_palindrome(s[1:-1])"},
    edges="0-1 0-2", exits=[1, 2],
)
def palindrome_recursive(t: Tracer, s: str) -> bool:
    def is_palindrome(s):
        t.enter()
        try:
            t.visit(0)
            if len(s) < 2:
                t.visit(1)
                return True
            t.visit(2)
            return s[0] == s[-1] and is_palindrome(s[1:-1])
        finally:
            t.leave()

    return is_palindrome(s)


@program(
    "Fibonacci - Iterative", [NUMERIC], NUMERIC,
    nodes={0: "a, b = 0, 1", 1: "for _ in range(n): a, b = b, a + b", 2: "return a"},
    edges="0-1 1-1 1-2", exits=[2],
    notes="fib(0) = 0, fib(1) = 1; negative n returns 0; overflow past 64 bits is a failure.",
)
def fibonacci_iterative(t: Tracer, n: int) -> int:
    t.visit(0)
    a, b = 0, 1
    for _ in t.loop(1, range(n)):
        a, b = b, _checked(a + b)
    t.visit(2)
    return a


@program(
    "Fibonacci - Recursive", [NUMERIC], NUMERIC,
    nodes={0: "if n < 2", 1: "return max(n, 0)", 2: "return fib(n - 1) + fib(n - 2)"},
    edges="0-1 0-2", exits=[1, 2],
    notes="Naive double recursion; large n trips the step or depth guard.",
)
def fibonacci_recursive(t: Tracer, n: int) -> int:
    def fib(n):
        t.enter()
        try:
            t.visit(0)
            if n < 2:
                t.visit(1)
                return max(n, 0)
            t.visit(2)
            return _checked(fib(n - 1) + fib(n - 2))
        finally:
            t.leave()

    return fib(n)


@program(
    "Euclidean - Iterative", [NUMERIC, NUMERIC], NUMERIC,
    nodes={0: "def gcd(a, b):", 1: "while b != 0: a, b = b, a % b", 2: "return abs(a)"},
    edges="0-1 1-1 1-2", exits=[2],
)
def euclidean_iterative(t: Tracer, a: int, b: int) -> int:
    t.visit(0)
    for _ in t.repeat(1, lambda: b != 0):
        a, b = b, a % b
    t.visit(2)
    return abs(a)


@program(
    "Euclidean - Recursive", [NUMERIC, NUMERIC], NUMERIC,
    nodes={0: "if b == 0", 1: "return abs(a)", 2: "return gcd(b, a % b)"},
    edges="0-1 0-2", exits=[1, 2],
)
def euclidean_recursive(t: Tracer, a: int, b: int) -> int:
    def gcd(a, b):
        t.enter()
        try:
            t.visit(0)
            if b == 0:
                t.visit(1)
                return abs(a)
            t.visit(2)
            return gcd(b, a % b)
        finally:
            t.leave()

    return gcd(a, b)


FIXED_ONE = 1 << 16
MANDELBROT_MAX_ITER = 32


@program(
    "Mandelbrot", [NUMERIC, NUMERIC], NUMERIC,
    nodes={
        0: "c = (x / 4, y / 4) in 16.16 fixed point; z = 0; i = 0",
        1: "while i < MAX_ITER and |z|^2 <= 4: z = z * z + c; i += 1",
        2: "return i",
    },
    edges="0-1 1-1 1-2", exits=[2],
    notes="Escape-time count for c = (x + yi) / 4, capped at 32 iterations.",
    reconstructed=True,
)
def mandelbrot(t: Tracer, x: int, y: int) -> int:
    t.visit(0)
    cr, ci = x * FIXED_ONE // 4, y * FIXED_ONE // 4
    zr = zi = 0
    i = 0
    bound = 4 * FIXED_ONE * FIXED_ONE
    for _ in t.repeat(1, lambda: i < MANDELBROT_MAX_ITER and zr * zr + zi * zi <= bound):
        zr, zi = ((zr * zr - zi * zi) >> 16) + cr, ((2 * zr * zi) >> 16) + ci
        i += 1
    t.visit(2)
    return i


@program(
    "True", [BOOLEAN], BOOLEAN,
    nodes={0: "if flag", 1: "return flag", 2: "return not flag"},
    edges="0-1 0-2", exits=[1, 2],
    notes="Always returns True, through a branch chosen by the input.",
    reconstructed=True,
)
def true(t: Tracer, flag: bool) -> bool:
    t.visit(0)
    if flag:
        t.visit(1)
        return flag
    t.visit(2)
    return not flag


@program(
    "TrueOrFalse", [BOOLEAN], BOOLEAN,
    nodes={0: "if flag", 1: "return True", 2: "return False"},
    edges="0-1 0-2", exits=[1, 2],
    notes="Echoes its input through an explicit branch.",
    reconstructed=True,
)
def true_or_false(t: Tracer, flag: bool) -> bool:
    t.visit(0)
    if flag:
        t.visit(1)
        return True
    t.visit(2)
    return False


@program(
    "And", [BOOLEAN, BOOLEAN], BOOLEAN,
    nodes={0: "if a and b", 1: "return True", 2: "return False"},
    edges="0-1 0-2", exits=[1, 2],
)
def and_(t: Tracer, a: bool, b: bool) -> bool:
    t.visit(0)
    if a and b:
        t.visit(1)
        return True
    t.visit(2)
    return False


@program(
    "Or", [BOOLEAN, BOOLEAN], BOOLEAN,
    nodes={0: "if a or b", 1: "return True", 2: "return False"},
    edges="0-1 0-2", exits=[1, 2],
)
def or_(t: Tracer, a: bool, b: bool) -> bool:
    t.visit(0)
    if a or b:
        t.visit(1)
        return True
    t.visit(2)
    return False


@program(
    "AndOr", [BOOLEAN, BOOLEAN], BOOLEAN,
    nodes={0: "if a and b", 1: "return True", 2: "elif a or b", 3: "return False", 4: "return True"},
    edges="0-1 0-2 2-3 2-4", exits=[1, 3, 4],
    notes="(a and b) or not (a or b): true when both inputs agree.",
    reconstructed=True,
)
def and_or(t: Tracer, a: bool, b: bool) -> bool:
    t.visit(0)
    if a and b:
        t.visit(1)
        return True
    t.visit(2)
    if a or b:
        t.visit(3)
        return False
    t.visit(4)
    return True


@program(
    "Xor", [BOOLEAN, BOOLEAN], BOOLEAN,
    nodes={0: "if a and b", 1: "return False", 2: "elif a or b", 3: "return True", 4: "return False"},
    edges="0-1 0-2 2-3 2-4", exits=[1, 3, 4],
)
def xor(t: Tracer, a: bool, b: bool) -> bool:
    t.visit(0)
    if a and b:
        t.visit(1)
        return False
    t.visit(2)
    if a or b:
        t.visit(3)
        return True
    t.visit(4)
    return False


@program(
    "Substring", [TEXT, TEXT], BOOLEAN,
    nodes={
        0: "if len(sub) > len(text)",
        1: "return False",
        2: "for i in range(len(text) - len(sub) + 1): if text[i:i + len(sub)] == sub: found = True; break",
        3: "return found",
    },
    edges="0-1 0-2 2-2 2-3", exits=[1, 3],
    notes="Whether the second argument occurs in the first, by a sliding-window scan.",
    reconstructed=True,
)
def substring(t: Tracer, text: str, sub: str) -> bool:
    t.visit(0)
    if len(sub) > len(text):
        t.visit(1)
        return False
    found = False
    m = len(sub)
    for i in t.loop(2, range(len(text) - m + 1)):
        if text[i : i + m] == sub:
            found = True
            break
    t.visit(3)
    return found


@program(
    "BinomialCoefficient", [NUMERIC, NUMERIC], NUMERIC,
    nodes={
        0: "if k < 0 or k > n",
        1: "return 0",
        2: "r = 1; for i in range(min(k, n - k)): r = r * (n - i) // (i + 1)",
        3: "return r",
    },
    edges="0-1 0-2 2-2 2-3", exits=[1, 3],
    notes="Multiplicative formula; intermediate results past 64 bits are a failure.",
)
def binomial_coefficient(t: Tracer, n: int, k: int) -> int:
    t.visit(0)
    if k < 0 or k > n:
        t.visit(1)
        return 0
    r = 1
    for i in t.loop(2, range(min(k, n - k))):
        r = _checked(r * (n - i)) // (i + 1)
    t.visit(3)
    return r


@program(
    "Anagram - Recursive", [TEXT, TEXT], BOOLEAN,
    nodes={
        0: "if len(a) != len(b)",
        1: "return False",
        2: "if not a",
        3: "return True",
        4: "i = b.find(a[0]); if i < 0",
        5: "return False",
        6: "return is_anagram(a[1:], b[:i] + b[i + 1:])",
    },
    edges="0-1 0-2 2-3 2-4 4-5 4-6", exits=[1, 3, 5, 6],
)
def anagram_recursive(t: Tracer, a: str, b: str) -> bool:
    def is_anagram(a, b):
        t.enter()
        try:
            t.visit(0)
            if len(a) != len(b):
                t.visit(1)
                return False
            t.visit(2)
            if not a:
                t.visit(3)
                return True
            t.visit(4)
            i = b.find(a[0])
            if i < 0:
                t.visit(5)
                return False
            t.visit(6)
            return is_anagram(a[1:], b[:i] + b[i + 1 :])
        finally:
            t.leave()

    return is_anagram(a, b)


VOWELS = frozenset("aeiouAEIOU")


@program(
    "Vowels", [TEXT, TEXT], BOOLEAN,
    nodes={
        0: "if not text",
        1: "return False",
        2: "for ch in text: if ch in VOWELS: count += 1",
        3: "if mode",
        4: "return count % 2 == 1",
        5: "return count > 0",
    },
    edges="0-1 0-2 2-2 2-3 3-4 3-5", exits=[1, 4, 5],
    notes="Counts vowels of the first argument; a non-empty second argument selects the odd-count test, "
    "an empty one the any-vowel test.",
    reconstructed=True,
)
def vowels(t: Tracer, text: str, mode: str) -> bool:
    t.visit(0)
    if not text:
        t.visit(1)
        return False
    count = 0
    for ch in t.loop(2, text):
        if ch in VOWELS:
            count += 1
    t.visit(3)
    if mode:
        t.visit(4)
        return count % 2 == 1
    t.visit(5)
    return count > 0


@program(
    "Remainder", [NUMERIC, NUMERIC], NUMERIC,
    nodes={
        0: "if b == 0",
        1: "raise ZeroDivisionError",
        2: "sign = 1; if a < 0",
        3: "sign, a = -1, -a",
        4: "if b < 0",
        5: "b = -b",
        6: "return sign * (a % b)",
    },
    edges="0-1 0-2 2-3 2-4 3-4 4-5 4-6 5-6", exits=[1, 6],
    notes="Truncated remainder (sign follows the dividend); b = 0 takes the error branch and fails.",
    reconstructed=True,
)
def remainder(t: Tracer, a: int, b: int) -> int:
    t.visit(0)
    if b == 0:
        t.visit(1)
        raise DomainError("division by zero")
    t.visit(2)
    sign = 1
    if a < 0:
        t.visit(3)
        sign, a = -1, -a
    t.visit(4)
    if b < 0:
        t.visit(5)
        b = -b
    t.visit(6)
    return sign * (a % b)


@program(
    "IsPrime", [NUMERIC], BOOLEAN,
    nodes={
        0: "if n < 2",
        1: "return False",
        2: "if n % 2 == 0",
        3: "return n == 2",
        4: "for i in range(3, isqrt(n) + 1, 2): if n % i == 0: break",
        5: "return False",
        6: "return True",
    },
    edges="0-1 0-2 2-3 2-4 4-4 4-5 4-6", exits=[1, 3, 5, 6],
)
def is_prime(t: Tracer, n: int) -> bool:
    t.visit(0)
    if n < 2:
        t.visit(1)
        return False
    t.visit(2)
    if n % 2 == 0:
        t.visit(3)
        return n == 2
    for i in t.loop(4, range(3, isqrt(n) + 1, 2)):
        if n % i == 0:
            t.visit(5)
            return False
    t.visit(6)
    return True


@program(
    "Anagram - Iterative", [TEXT, TEXT], BOOLEAN,
    nodes={
        0: "if len(a) != len(b)",
        1: "return False",
        2: "for ch in a: counts[ch] += 1",
        3: "for ch in b: if counts[ch] == 0: break; counts[ch] -= 1",
        4: "return False",
        5: "return True",
    },
    edges="0-1 0-2 2-2 2-3 3-3 3-4 3-5", exits=[1, 4, 5],
)
def anagram_iterative(t: Tracer, a: str, b: str) -> bool:
    t.visit(0)
    if len(a) != len(b):
        t.visit(1)
        return False
    counts: Counter = Counter()
    for ch in t.loop(2, a):
        counts[ch] += 1
    for ch in t.loop(3, b):
        if counts[ch] == 0:
            t.visit(4)
            return False
        counts[ch] -= 1
    t.visit(5)
    return True
