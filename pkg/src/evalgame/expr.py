"""Expression parsing and exact rational evaluation.

The surface grammar covers non-negative integer literals, variables, the
binary operators + - * / and parentheses (no unary minus). Parsing goes
infix -> tokens -> postfix via the shunting yard algorithm; evaluation runs
the postfix program on a stack of exact rationals, so results like 16/3
compare exactly instead of drifting through floats.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Mapping

__all__ = [
    "ExprError",
    "LexError",
    "ParseError",
    "UnboundVariableError",
    "UnknownVariableError",
    "OverflowBudgetError",
    "Token",
    "Expression",
    "Value",
    "INVALID",
    "tokenize",
    "to_postfix",
    "parse_expression",
    "evaluate",
    "substitute",
    "negate",
]

# Signalling budget for rational components. Python integers never wrap, but
# callers are promised a loud failure instead of silently huge numbers.
OVERFLOW_BUDGET = 2**63 - 1

NUMBER = "number"
VARIABLE = "variable"
OPERATOR = "operator"
LPAREN = "lparen"
RPAREN = "rparen"

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}

# Typographic minus variants normalize to ASCII before scanning.
_MINUS_VARIANTS = {"−": "-", "–": "-", "—": "-"}

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class ExprError(Exception):
    """Base class for expression-layer failures."""


class LexError(ExprError):
    pass


class ParseError(ExprError):
    pass


class UnboundVariableError(ExprError):
    pass


class UnknownVariableError(ExprError):
    pass


class OverflowBudgetError(ExprError):
    """A rational component exceeded the machine-width budget."""


@dataclass(frozen=True)
class Token:
    """A lexical unit: kind plus payload (int literal, name, or op char)."""

    kind: str
    value: int | str


@dataclass(frozen=True)
class Expression:
    """A parsed expression: postfix program, variables, and source text.

    ``variables`` lists the distinct variable names in first textual
    occurrence order, which is also the move order offered to the
    minimizing player.
    """

    postfix: tuple[Token, ...]
    variables: tuple[str, ...]
    source: str

    @property
    def variable_count(self) -> int:
        return len(self.variables)


@dataclass(frozen=True)
class Value:
    """An exact rational, or the single undefined marker.

    Finite values are canonical: gcd(|num|, den) == 1 and den >= 1.
    The undefined marker (division by zero somewhere in the evaluation)
    is represented by den == 0 and is excluded from ordering comparisons.
    """

    num: int
    den: int

    def __post_init__(self) -> None:
        if self.den == 0:
            if self.num != 0:
                raise ValueError("undefined value must be 0/0")
            return
        if self.den < 0:
            raise ValueError("denominator must be positive")
        if gcd(self.num, self.den) != 1:
            raise ValueError(f"{self.num}/{self.den} is not in lowest terms")

    @staticmethod
    def finite(num: int, den: int = 1) -> "Value":
        """Build a canonical finite value from any integer pair."""
        if den == 0:
            raise ZeroDivisionError("finite value needs a nonzero denominator")
        if den < 0:
            num, den = -num, -den
        g = gcd(num, den)
        if g > 1:
            num //= g
            den //= g
        return Value(num, den)

    @staticmethod
    def from_fraction(f: Fraction) -> "Value":
        return Value(f.numerator, f.denominator)

    @property
    def is_finite(self) -> bool:
        return self.den != 0

    def as_fraction(self) -> Fraction:
        if self.den == 0:
            raise ValueError("undefined value has no rational form")
        return Fraction(self.num, self.den)

    def _require_ordered(self, other: "Value") -> None:
        if self.den == 0 or other.den == 0:
            raise ValueError("undefined values are not ordered")

    def __lt__(self, other: "Value") -> bool:
        self._require_ordered(other)
        return self.num * other.den < other.num * self.den

    def __le__(self, other: "Value") -> bool:
        self._require_ordered(other)
        return self.num * other.den <= other.num * self.den

    def __gt__(self, other: "Value") -> bool:
        self._require_ordered(other)
        return self.num * other.den > other.num * self.den

    def __ge__(self, other: "Value") -> bool:
        self._require_ordered(other)
        return self.num * other.den >= other.num * self.den

    def __neg__(self) -> "Value":
        if self.den == 0:
            return self
        return Value(-self.num, self.den)

    def __str__(self) -> str:
        if self.den == 0:
            return "undefined"
        if self.den == 1:
            return str(self.num)
        return f"{self.num}/{self.den}"

    def decimal(self, sig: int = 6) -> str:
        """Decimal rendering with ``sig`` significant digits."""
        if self.den == 0:
            return "undefined"
        return format(self.num / self.den, f".{sig}g")


INVALID = Value(0, 0)


def tokenize(text: str) -> tuple[Token, ...]:
    """Split expression text into tokens, skipping whitespace.

    Multi-digit numbers form single tokens; identifiers start with a letter.
    Raises LexError on any other character.
    """
    for variant, ascii_minus in _MINUS_VARIANTS.items():
        text = text.replace(variant, ascii_minus)
    tokens: list[Token] = []
    i = 0
    end = len(text)
    while i < end:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i + 1
            while j < end and text[j].isdigit():
                j += 1
            tokens.append(Token(NUMBER, int(text[i:j])))
            i = j
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            tokens.append(Token(VARIABLE, m.group()))
            i = m.end()
            continue
        if ch in _PRECEDENCE:
            tokens.append(Token(OPERATOR, ch))
        elif ch == "(":
            tokens.append(Token(LPAREN, "("))
        elif ch == ")":
            tokens.append(Token(RPAREN, ")"))
        else:
            raise LexError(f"illegal character {ch!r} at position {i}")
        i += 1
    if not tokens:
        raise LexError("empty expression")
    return tuple(tokens)


def to_postfix(tokens: tuple[Token, ...], source: str | None = None) -> Expression:
    """Shunting yard: infix tokens to a postfix Expression.

    All four operators are left-associative with * and / binding tighter
    than + and -. Raises ParseError on unbalanced parentheses or malformed
    operand/operator placement (e.g. "X*+Y").
    """
    output: list[Token] = []
    stack: list[Token] = []
    variables: list[str] = []
    expect_operand = True
    for tok in tokens:
        if tok.kind == NUMBER or tok.kind == VARIABLE:
            if not expect_operand:
                raise ParseError(f"unexpected operand {tok.value!r}")
            if tok.kind == VARIABLE and tok.value not in variables:
                variables.append(tok.value)  # first-occurrence order
            output.append(tok)
            expect_operand = False
        elif tok.kind == OPERATOR:
            if expect_operand:
                raise ParseError(f"operator {tok.value!r} missing left operand")
            prec = _PRECEDENCE[tok.value]
            while stack and stack[-1].kind == OPERATOR and _PRECEDENCE[stack[-1].value] >= prec:
                output.append(stack.pop())
            stack.append(tok)
            expect_operand = True
        elif tok.kind == LPAREN:
            if not expect_operand:
                raise ParseError("unexpected '('")
            stack.append(tok)
        else:  # RPAREN
            if expect_operand:
                raise ParseError("unexpected ')'")
            while stack and stack[-1].kind != LPAREN:
                output.append(stack.pop())
            if not stack:
                raise ParseError("unbalanced ')'")
            stack.pop()
    if expect_operand:
        raise ParseError("expression ends with an operator")
    while stack:
        top = stack.pop()
        if top.kind == LPAREN:
            raise ParseError("unbalanced '('")
        output.append(top)
    if source is None:
        source = " ".join(str(t.value) for t in tokens)
    return Expression(tuple(output), tuple(variables), source)


def parse_expression(text: str) -> Expression:
    """Tokenize and parse expression text in one step."""
    return to_postfix(tokenize(text), source=text)


# Compiled opcodes for the postfix evaluator.
_CONST, _VAR, _ADD, _SUB, _MUL, _DIV = range(6)
_OPCODE = {"+": _ADD, "-": _SUB, "*": _MUL, "/": _DIV}


@lru_cache(maxsize=None)
def _compile(expr: Expression) -> tuple[tuple[int, int, int], ...]:
    """Lower postfix tokens to (opcode, a, b) triples for fast evaluation."""
    index = {name: i for i, name in enumerate(expr.variables)}
    prog = []
    depth = 0
    for tok in expr.postfix:
        if tok.kind == NUMBER:
            prog.append((_CONST, tok.value, 1))
            depth += 1
        elif tok.kind == VARIABLE:
            prog.append((_VAR, index[tok.value], 0))
            depth += 1
        else:
            if depth < 2:
                raise ParseError("malformed postfix program")
            prog.append((_OPCODE[tok.value], 0, 0))
            depth -= 1
    if depth != 1:
        raise ParseError("malformed postfix program")
    return tuple(prog)


def _eval_program(program, digits) -> tuple[int, int] | None:
    """Run a compiled program over exact rationals.

    ``digits`` maps variable index to its bound integer. Returns a reduced
    (num, den) pair with den >= 1, or None when any division hits a zero
    divisor (the whole expression is then undefined).
    """
    budget = OVERFLOW_BUDGET
    ns: list[int] = []
    ds: list[int] = []
    for op, a, b in program:
        if op == _VAR:
            ns.append(digits[a])
            ds.append(1)
            continue
        if op == _CONST:
            ns.append(a)
            ds.append(b)
            continue
        n2 = ns.pop()
        d2 = ds.pop()
        n1 = ns[-1]
        d1 = ds[-1]
        if op == _ADD:
            if d1 == 1 == d2:
                n = n1 + n2
                d = 1
            else:
                n = n1 * d2 + n2 * d1
                d = d1 * d2
                g = gcd(n, d)
                if g > 1:
                    n //= g
                    d //= g
        elif op == _SUB:
            if d1 == 1 == d2:
                n = n1 - n2
                d = 1
            else:
                n = n1 * d2 - n2 * d1
                d = d1 * d2
                g = gcd(n, d)
                if g > 1:
                    n //= g
                    d //= g
        elif op == _MUL:
            n = n1 * n2
            d = d1 * d2
            if d != 1:
                g = gcd(n, d)
                if g > 1:
                    n //= g
                    d //= g
        else:  # _DIV
            if n2 == 0:
                return None
            n = n1 * d2
            d = d1 * n2
            if d < 0:
                n = -n
                d = -d
            g = gcd(n, d)
            if g > 1:
                n //= g
                d //= g
        if n > budget or -n > budget or d > budget:
            raise OverflowBudgetError(f"rational component exceeds {budget}")
        ns[-1] = n
        ds[-1] = d
    return ns[0], ds[0]


def _digit_vector(expr: Expression, assignment: Mapping[str, int]) -> list[int]:
    digits = []
    for name in expr.variables:
        if name not in assignment:
            raise UnboundVariableError(f"variable {name!r} is unbound")
        d = assignment[name]
        if not isinstance(d, int) or not 0 <= d <= 9:
            raise ValueError(f"binding for {name!r} must be a digit 0-9, got {d!r}")
        digits.append(d)
    return digits


def evaluate(expr: Expression, assignment: Mapping[str, int]) -> Value:
    """Evaluate under a full assignment; exact arithmetic throughout.

    Bindings for names not in the expression are ignored. Any division by
    zero makes the whole result the undefined marker.
    """
    raw = _eval_program(_compile(expr), _digit_vector(expr, assignment))
    if raw is None:
        return INVALID
    return Value(*raw)


def substitute(expr: Expression, variable: str, digit: int) -> Expression:
    """Replace every occurrence of ``variable`` with a digit literal."""
    if variable not in expr.variables:
        raise UnknownVariableError(f"variable {variable!r} not in expression")
    if not isinstance(digit, int) or not 0 <= digit <= 9:
        raise ValueError(f"substituted value must be a digit 0-9, got {digit!r}")
    replacement = Token(NUMBER, digit)
    postfix = tuple(replacement if t.kind == VARIABLE and t.value == variable else t
                    for t in expr.postfix)
    variables = tuple(v for v in expr.variables if v != variable)
    source = re.sub(rf"\b{re.escape(variable)}\b", str(digit), expr.source)
    return Expression(postfix, variables, source)


def negate(expr: Expression) -> Expression:
    """Expression whose value is 0 - expr for every assignment."""
    postfix = (Token(NUMBER, 0),) + expr.postfix + (Token(OPERATOR, "-"),)
    return Expression(postfix, expr.variables, f"0-({expr.source})")
