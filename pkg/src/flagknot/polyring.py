"""Sparse polynomials over the integers in four formal variables.

The variables are ``t``, ``s``, ``t^-1`` and ``s^-1``.  The last two are
independent indeterminates; ``t * t^-1`` is a degree-two monomial and only
becomes 1 modulo the relation ``t*t^-1 - 1``.

Monomials are 4-tuples of exponents ``(e_t, e_s, e_tinv, e_sinv)``.
Coefficients are Python ints, so nothing overflows.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import total_ordering

VARS = ("t", "s", "tinv", "sinv")
DISPLAY = ("t", "s", "t^-1", "s^-1")
T, S, TINV, SINV = range(4)

Monomial = tuple


@dataclass(frozen=True)
class MonomialOrder:
    """Graded reverse lexicographic order with a configurable precedence.

    ``precedence`` lists variable indices from highest to lowest precedence.
    The default ``(SINV, TINV, S, T)`` means s^-1 > t^-1 > s > t on
    degree-one monomials.
    """

    precedence: tuple = (SINV, TINV, S, T)

    def __post_init__(self):
        if sorted(self.precedence) != [0, 1, 2, 3]:
            raise ValueError(f"precedence must be a permutation of 0..3, got {self.precedence}")

    def key(self, m):
        # Bigger key means bigger monomial.  Ties in degree go to the monomial
        # whose exponent difference has a negative rightmost nonzero entry.
        arranged = [m[v] for v in self.precedence]
        return (sum(m), tuple(-e for e in reversed(arranged)))

    def cmp(self, a, b):
        ka, kb = self.key(a), self.key(b)
        return (ka > kb) - (ka < kb)

    @classmethod
    def parse(cls, text):
        """Parse strings like ``"sinv>tinv>s>t"``."""
        names = [p.strip() for p in text.split(">")]
        try:
            return cls(tuple(VARS.index(n) for n in names))
        except ValueError:
            raise ValueError(f"bad order spec {text!r}; use a permutation of {'>'.join(VARS)}") from None

    def spec(self):
        return ">".join(VARS[v] for v in self.precedence)


DEFAULT_ORDER = MonomialOrder()

ONE = (0, 0, 0, 0)


def mono_mul(a, b):
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3])


def mono_divides(a, b):
    return a[0] <= b[0] and a[1] <= b[1] and a[2] <= b[2] and a[3] <= b[3]


def mono_div(a, b):
    """Return a / b, assuming b divides a."""
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3])


def mono_lcm(a, b):
    return (max(a[0], b[0]), max(a[1], b[1]), max(a[2], b[2]), max(a[3], b[3]))


def mono_str(m):
    parts = []
    # printed s^-1 first, then t^-1, s, t, matching the usual table layout
    for v in (SINV, TINV, S, T):
        e = m[v]
        if e == 0:
            continue
        if v in (TINV, SINV):
            base = DISPLAY[v - 2]
            parts.append(f"{base}^-{e}" if e > 1 else f"{base}^-1")
        else:
            parts.append(f"{DISPLAY[v]}^{e}" if e > 1 else DISPLAY[v])
    return "*".join(parts)


@total_ordering
class Polynomial:
    """Immutable sparse polynomial; ``terms`` maps monomial -> nonzero int."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None):
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for m, c in items:
                if c:
                    m = tuple(m)
                    c = clean.get(m, 0) + c
                    if c:
                        clean[m] = c
                    else:
                        clean.pop(m, None)
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def const(cls, c):
        return cls._raw({ONE: c} if c else {})

    @classmethod
    def var(cls, v, power=1):
        m = [0, 0, 0, 0]
        m[v] = power
        return cls._raw({tuple(m): 1})

    @classmethod
    def monomial(cls, c, m):
        return cls._raw({tuple(m): c} if c else {})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __lt__(self, other):
        # Arbitrary but deterministic; used only for stable sorting.
        return self.sort_key() < other.sort_key()

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        if isinstance(other, int):
            other = Polynomial.const(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return Polynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, int):
            other = Polynomial.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2], m1[3] + m2[3])
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Polynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = Polynomial.const(1)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c):
        if c == 0:
            return Polynomial._raw({})
        return Polynomial._raw({m: c * v for m, v in self.terms.items()})

    def mul_term(self, c, m):
        """Multiply by the single term ``c * m``."""
        if c == 0:
            return Polynomial._raw({})
        return Polynomial._raw({mono_mul(k, m): c * v for k, v in self.terms.items()})

    def degree(self):
        return max((sum(m) for m in self.terms), default=-1)

    def sorted_terms(self, order=DEFAULT_ORDER):
        """Terms in descending order."""
        return sorted(self.terms.items(), key=lambda mc: order.key(mc[0]), reverse=True)

    def leading_term(self, order=DEFAULT_ORDER):
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return self.terms[m], m

    def leading_monomial(self, order=DEFAULT_ORDER):
        return self.leading_term(order)[1]

    def leading_coefficient(self, order=DEFAULT_ORDER):
        return self.leading_term(order)[0]

    def sort_key(self, order=DEFAULT_ORDER):
        return tuple((order.key(m), c) for m, c in self.sorted_terms(order))

    def variables_used(self):
        return {v for m in self.terms for v in range(4) if m[v]}

    def substitute(self, images):
        """Substitute a Polynomial for each of the four variables."""
        out = Polynomial()
        for m, c in self.terms.items():
            term = Polynomial.const(c)
            for v in range(4):
                if m[v]:
                    term = term * images[v] ** m[v]
            out = out + term
        return out

    def evaluate(self, values):
        """Evaluate at numbers ``(t, s, tinv, sinv)``."""
        total = 0
        for m, c in self.terms.items():
            x = c
            for v in range(4):
                if m[v]:
                    x = x * values[v] ** m[v]
            total += x
        return total

    def to_str(self, order=DEFAULT_ORDER):
        if not self.terms:
            return "0"
        out = []
        for i, (m, c) in enumerate(self.sorted_terms(order)):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = mono_str(m)
            if not body:
                txt = str(a)
            elif a == 1:
                txt = body
            else:
                txt = f"{a}*{body}"
            if i == 0:
                out.append(f"-{txt}" if sign == "-" else txt)
            else:
                out.append(f"{sign} {txt}")
        return " ".join(out)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"Polynomial({self.to_str()!r})"

    def to_json(self, order=DEFAULT_ORDER):
        return [[c, list(m)] for m, c in self.sorted_terms(order)]

    @classmethod
    def from_json(cls, data):
        return cls((tuple(m), c) for c, m in data)


def add(f, g):
    return f + g


def mul(f, g):
    return f * g


def scale(f, c):
    return f.scale(c)


def mul_term(f, c, m):
    return f.mul_term(c, m)


def cmp(a, b, order=DEFAULT_ORDER):
    return order.cmp(a, b)


def leading_term(f, order=DEFAULT_ORDER):
    return f.leading_term(order)


t = Polynomial.var(T)
s = Polynomial.var(S)
tinv = Polynomial.var(TINV)
sinv = Polynomial.var(SINV)


# -- text parsing -----------------------------------------------------------
#
# Accepts the printed style "s^-1*t^-1 - s^-1 - t^-1" as well as TeX-ish
# input with braces and implicit multiplication, e.g. "(t - 2)(2t - 1)" or
# "s^{-2} - s^{-1}t + 1".  A negative exponent selects the inverse variable.

_TOKEN = re.compile(r"\s*(?:(\d+)|(tinv|sinv|[ts])|(\^)|([-+*()]))")


def parse_poly(text):
    text = text.replace("{", "").replace("}", "")
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ValueError(f"cannot parse polynomial at {text[pos:]!r}")
        pos = m.end()
        num, var, caret, op = m.groups()
        if num is not None:
            tokens.append(("num", int(num)))
        elif var is not None:
            tokens.append(("var", var))
        elif caret:
            tokens.append(("^", None))
        else:
            tokens.append((op, None))
    p = _Parser(tokens)
    out = p.expr()
    if p.i != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return out


class _Parser:
    def __init__(self, tokens):
        self.tokens = tokens
        self.i = 0

    def peek(self):
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self):
        sign = 1
        if self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
        out = self.product().scale(sign)
        while self.peek() in ("+", "-"):
            sign = -1 if self.take()[0] == "-" else 1
            out = out + self.product().scale(sign)
        return out

    def product(self):
        out = self.factor()
        while True:
            k = self.peek()
            if k == "*":
                self.take()
                out = out * self.factor()
            elif k in ("num", "var", "("):
                out = out * self.factor()
            else:
                return out

    def factor(self):
        kind, val = self.take()
        if kind == "num":
            return Polynomial.const(val)
        if kind == "(":
            inner = self.expr()
            if self.peek() != ")":
                raise ValueError("unbalanced parentheses")
            self.take()
            return self._power(inner, allow_negative=False)
        if kind == "var":
            base = {"t": T, "s": S, "tinv": TINV, "sinv": SINV}[val]
            if self.peek() == "^":
                self.take()
                neg = False
                if self.peek() == "-":
                    self.take()
                    neg = True
                k, e = self.take()
                if k != "num":
                    raise ValueError("exponent must be an integer")
                if neg:
                    if base in (TINV, SINV):
                        raise ValueError("negative power of an inverse variable")
                    base += 2
                return Polynomial.var(base, e)
            return Polynomial.var(base)
        raise ValueError(f"unexpected token {kind!r}")

    def _power(self, base, allow_negative):
        if self.peek() == "^":
            self.take()
            k, e = self.take()
            if k != "num":
                raise ValueError("exponent must be a non-negative integer")
            return base ** e
        return base
