"""Game positions, legal moves, and exact node counting.

A position is the root expression plus the moves made so far. The
maximizing player proposes a digit (creating a "pending" digit), the
minimizing player assigns the pending digit to an unbound variable. The
tree is never materialized; it exists only through legal_moves/apply_move
recursion.

For an expression with n variables the full tree holds
T(n) = 11 + 10*n*T(n-1) nodes (T(0) = 1): the root has 10 digit children,
each of which has n assignment children rooting (n-1)-variable subtrees.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial

from .expr import Expression

__all__ = [
    "Position",
    "ProposeDigit",
    "AssignVariable",
    "Move",
    "TerminalPositionError",
    "IllegalMoveError",
    "root_position",
    "tree_size",
    "leaf_count",
    "legal_moves",
    "apply_move",
]


class TerminalPositionError(Exception):
    pass


class IllegalMoveError(Exception):
    pass


@dataclass(frozen=True)
class ProposeDigit:
    digit: int


@dataclass(frozen=True)
class AssignVariable:
    variable: str


Move = ProposeDigit | AssignVariable


@dataclass(frozen=True)
class Position:
    """A game node: bindings made so far plus an optional pending digit.

    A pending digit means the minimizing player is to move (MIN node);
    otherwise the maximizing player is (MAX node). The root and all
    terminals are MAX nodes.
    """

    expr: Expression
    bindings: tuple[tuple[int, str], ...] = ()
    pending: int | None = None

    def __post_init__(self) -> None:
        seen = set()
        for digit, name in self.bindings:
            if name not in self.expr.variables:
                raise ValueError(f"bound variable {name!r} not in expression")
            if name in seen:
                raise ValueError(f"variable {name!r} bound twice")
            if not 0 <= digit <= 9:
                raise ValueError(f"bound digit {digit!r} out of range")
            seen.add(name)
        if self.pending is not None and not 0 <= self.pending <= 9:
            raise ValueError(f"pending digit {self.pending!r} out of range")

    @property
    def unbound(self) -> tuple[str, ...]:
        bound = {name for _, name in self.bindings}
        return tuple(v for v in self.expr.variables if v not in bound)

    @property
    def is_min_node(self) -> bool:
        return self.pending is not None

    @property
    def is_max_node(self) -> bool:
        return self.pending is None

    @property
    def is_terminal(self) -> bool:
        return self.pending is None and not self.unbound

    @property
    def height(self) -> int:
        u = len(self.unbound)
        return 2 * u - 1 if self.pending is not None else 2 * u

    def assignment(self) -> dict[str, int]:
        return {name: digit for digit, name in self.bindings}


def root_position(expr: Expression) -> Position:
    return Position(expr)


@lru_cache(maxsize=None)
def tree_size(n: int) -> int:
    """Exact node count T(n) = 11 + 10*n*T(n-1), T(0) = 1."""
    if n < 0:
        raise ValueError("variable count must be non-negative")
    total = 1
    for k in range(1, n + 1):
        total = 11 + 10 * k * total
    return total


def leaf_count(n: int) -> int:
    """Number of terminal nodes: n! * 10^n."""
    if n < 0:
        raise ValueError("variable count must be non-negative")
    return factorial(n) * 10**n


def legal_moves(pos: Position, digit_order: tuple[int, ...] | None = None) -> tuple[Move, ...]:
    """Moves available at a position.

    MAX nodes offer the ten digit proposals (in ``digit_order`` when given),
    MIN nodes one assignment per unbound variable in first-occurrence order.
    """
    if pos.is_terminal:
        raise TerminalPositionError("no moves at a terminal position")
    if pos.pending is None:
        order = digit_order if digit_order is not None else tuple(range(10))
        return tuple(ProposeDigit(d) for d in order)
    return tuple(AssignVariable(v) for v in pos.unbound)


def apply_move(pos: Position, move: Move) -> Position:
    """Apply a move, validating turn and legality."""
    if isinstance(move, ProposeDigit):
        if pos.pending is not None:
            raise IllegalMoveError("a digit is already pending; assignment expected")
        if pos.is_terminal:
            raise IllegalMoveError("game is over")
        if not isinstance(move.digit, int) or not 0 <= move.digit <= 9:
            raise IllegalMoveError(f"digit {move.digit!r} out of range 0-9")
        return Position(pos.expr, pos.bindings, move.digit)
    if isinstance(move, AssignVariable):
        if pos.pending is None:
            raise IllegalMoveError("no pending digit; digit proposal expected")
        if move.variable not in pos.expr.variables:
            raise IllegalMoveError(f"unknown variable {move.variable!r}")
        if move.variable not in pos.unbound:
            raise IllegalMoveError(f"variable {move.variable!r} already bound")
        bindings = pos.bindings + ((pos.pending, move.variable),)
        return Position(pos.expr, bindings, None)
    raise IllegalMoveError(f"unrecognized move {move!r}")
