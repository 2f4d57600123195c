"""Monomial orders for rings and free modules.

A ring order turns an exponent vector into a sortable key (bigger key =
bigger monomial).  Module monomials are (component, exponents) pairs compared
position-over-term: the component with higher priority wins, ties broken by
the underlying ring order.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class MonomialOrder:
    """grevlex | lex | block(split, left, right)."""

    kind: str = "grevlex"
    split: int = 0
    left: "MonomialOrder | None" = None
    right: "MonomialOrder | None" = None

    def key(self, exp: tuple) -> tuple:
        if self.kind == "grevlex":
            return (sum(exp), tuple(-e for e in reversed(exp)))
        if self.kind == "lex":
            return exp
        if self.kind == "block":
            return (self.left.key(exp[: self.split]), self.right.key(exp[self.split :]))
        raise ValueError(f"unknown order kind {self.kind!r}")

    def tag(self) -> str:
        if self.kind == "block":
            return f"block({self.split},{self.left.tag()},{self.right.tag()})"
        return self.kind


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def block_order(split: int, left=GREVLEX, right=GREVLEX) -> MonomialOrder:
    return MonomialOrder("block", split, left, right)


@dataclass(frozen=True)
class ModuleOrder:
    """Position-over-term with a declared component priority.

    `priority[c]` is the rank of component c; rank 0 dominates everything.
    The default identity priority makes earlier components bigger, which is
    the elimination shape used for syzygy and lift computations.
    """

    ncomps: int
    base: MonomialOrder = GREVLEX
    priority: tuple = field(default=())

    def rank(self, comp: int) -> int:
        return self.priority[comp] if self.priority else comp

    def key(self, mon) -> tuple:
        comp, exp = mon
        return (-self.rank(comp), self.base.key(exp))
