"""Quandle words and relations.

A word is a generator index (int, 1-based), an :class:`Op` node for
``left ▷ right`` (or ``left ▷⁻¹ right`` when ``inverse``) or a :class:`VMap`
node for the virtual automorphism.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Op:
    left: "Word"
    right: "Word"
    inverse: bool = False

    def __str__(self):
        sym = "▷⁻¹" if self.inverse else "▷"
        return f"({_fmt(self.left)} {sym} {_fmt(self.right)})"


@dataclass(frozen=True)
class VMap:
    arg: "Word"
    inverse: bool = False

    def __str__(self):
        return f"v{'⁻¹' if self.inverse else ''}({_fmt(self.arg)})"


Word = Union[int, Op, VMap]


@dataclass(frozen=True)
class Relation:
    lhs: Word
    rhs: Word

    def __str__(self):
        return f"{_fmt(self.lhs)} = {_fmt(self.rhs)}"

    def generators(self):
        return _gens(self.lhs) | _gens(self.rhs)

    def is_short(self):
        return isinstance(self.rhs, int) and (
            isinstance(self.lhs, int)
            or (isinstance(self.lhs, Op) and isinstance(self.lhs.left, int) and isinstance(self.lhs.right, int))
            or (isinstance(self.lhs, VMap) and isinstance(self.lhs.arg, int))
        )


def _fmt(w):
    if isinstance(w, int):
        return f"x{w}"
    s = str(w)
    return s


def _gens(w):
    if isinstance(w, int):
        return {w}
    if isinstance(w, Op):
        return _gens(w.left) | _gens(w.right)
    return _gens(w.arg)


def tri(a, b):
    return Op(a, b)


def tri_inv(a, b):
    return Op(a, b, inverse=True)
