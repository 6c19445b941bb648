"""FLAG invariants: Groebner bases of elementary ideals of the FLAQ module.

Each classical crossing contributes the linear relation ``w = t*x + s*y``
where ``x`` is the under-arc entering the operation, ``y`` the over-arc and
``w`` the result.  Virtual crossings are ignored.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations
from math import gcd

from .diagram import CLASSICAL_ARCS, label_arcs
from .groebner import GroebnerBasis, Ideal, rational_groebner, strong_groebner
from .polyring import DEFAULT_ORDER, S, SINV, T, TINV, Polynomial, s, sinv, t, tinv

log = logging.getLogger(__name__)

RING_RELATIONS = (s * sinv - 1, t * tinv - 1, 1 - t - s)

# Which arc carries t at a crossing.  "under-t" (x ▷ y = t*x + s*y with x the
# under-arc) is the default; "over-t" swaps the roles of t and s.
CONVENTIONS = ("under-t", "over-t")


@dataclass
class PolyMatrix:
    rows: int
    cols: int
    entries: list  # one dict col -> Polynomial per row
    name: str = None

    def __getitem__(self, rc):
        r, c = rc
        return self.entries[r].get(c, Polynomial())

    def dense(self):
        return [[self[r, c] for c in range(self.cols)] for r in range(self.rows)]


def flaq_matrix(d, convention="under-t"):
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    lab = label_arcs(d, CLASSICAL_ARCS)
    a_coef, o_coef = (t, s) if convention == "under-t" else (s, t)
    rows = []
    for c in d.classical:
        o = lab[c.slots[1]] - 1
        if c.sign > 0:
            x, w = lab[c.under_in] - 1, lab[c.under_out] - 1
        else:
            x, w = lab[c.under_out] - 1, lab[c.under_in] - 1
        row = {}
        for col, coef in ((x, a_coef), (o, o_coef), (w, Polynomial.const(-1))):
            v = row.get(col, Polynomial()) + coef
            if v.is_zero():
                row.pop(col, None)
            else:
                row[col] = v
        rows.append(row)
    return PolyMatrix(len(rows), lab.n, rows, d.name)


def _det(P, rows, cols, memo):
    if not rows:
        return Polynomial.const(1)
    key = (rows, cols)
    hit = memo.get(key)
    if hit is not None:
        return hit
    r = rows[0]
    total = Polynomial()
    entries = P.entries[r]
    for pos, c in enumerate(cols):
        e = entries.get(c)
        if e is None:
            continue
        sub = _det(P, rows[1:], cols[:pos] + cols[pos + 1:], memo)
        if sub.is_zero():
            continue
        term = e * sub
        total = total - term if pos % 2 else total + term
    memo[key] = total
    return total


def determinant(P, rows=None, cols=None):
    rows = tuple(range(P.rows)) if rows is None else tuple(rows)
    cols = tuple(range(P.cols)) if cols is None else tuple(cols)
    if len(rows) != len(cols):
        raise ValueError("submatrix must be square")
    return _det(P, rows, cols, {})


def minors(P, size):
    """All nonzero ``size`` x ``size`` minors, deduplicated up to sign."""
    if size == 0:
        return [Polynomial.const(1)]
    if size < 0 or size > min(P.rows, P.cols):
        raise ValueError(f"minor size {size} out of range for a {P.rows}x{P.cols} matrix")
    memo = {}
    seen = set()
    out = []
    for rows in combinations(range(P.rows), size):
        for cols in combinations(range(P.cols), size):
            m = _det(P, rows, cols, memo)
            if m.is_zero():
                continue
            if m.leading_coefficient() < 0:
                m = -m
            if m not in seen:
                seen.add(m)
                out.append(m)
    out.sort(key=lambda p: p.sort_key())
    return out


@dataclass
class FlagIdeal:
    k: int
    minors: list
    order: object = DEFAULT_ORDER

    @property
    def generators(self):
        return list(self.minors) + list(RING_RELATIONS)

    def ideal(self):
        # ring relations first: they are cheap and reduce the minors early
        return Ideal(list(RING_RELATIONS) + list(self.minors), self.order)


def flag_ideal(d, k, order=DEFAULT_ORDER, convention="under-t"):
    if k < 0:
        raise ValueError("k must be non-negative")
    if not d.classical:
        return FlagIdeal(k, [], order)
    P = flaq_matrix(d, convention)
    size = P.cols - k
    if size <= 0:
        mins = [Polynomial.const(1)]
    elif size > min(P.rows, P.cols):
        mins = []
    else:
        mins = minors(P, size)
    return FlagIdeal(k, mins, order)


def flag_invariant(d, k=1, order=DEFAULT_ORDER, domain="QQ", convention="under-t"):
    """Canonical Groebner basis of the k-th FLAG ideal.

    ``domain="QQ"`` gives the reduced basis over the rationals with each
    element scaled to a primitive integer polynomial; ``domain="ZZ"`` gives
    the canonical strong basis over the integers.
    """
    I = flag_ideal(d, k, order, convention).ideal()
    start = time.perf_counter()
    if domain == "QQ":
        B = rational_groebner(I)
    elif domain == "ZZ":
        B = strong_groebner(I)
    else:
        raise ValueError(f"unknown coefficient domain {domain!r}")
    B.stats["seconds"] = time.perf_counter() - start
    log.debug("FLAG_%d(%s): %d elements in %.3fs", k, d.name, len(B), B.stats["seconds"])
    return B


# -- Alexander polynomial ----------------------------------------------------
#
# Polynomials in t alone are handled as coefficient lists, lowest degree first.


def _tpoly(p):
    """Coefficient list of a Polynomial that only involves t."""
    out = {}
    for m, c in p.terms.items():
        if m[1] or m[2] or m[3]:
            raise ValueError("not a polynomial in t")
        out[m[0]] = c
    if not out:
        return []
    return [out.get(i, 0) for i in range(max(out) + 1)]


def _from_list(coeffs):
    return Polynomial({(i, 0, 0, 0): c for i, c in enumerate(coeffs) if c})


def specialize(g):
    """Set s = 1 - t, s^-1 = 1/(1-t), t^-1 = 1/t and clear denominators.

    Returns the numerator ``g * (1-t)^a * t^b`` as a polynomial in t, where
    ``a`` and ``b`` are the largest powers of s^-1 and t^-1 in ``g``.
    """
    a = max((m[SINV] for m in g.terms), default=0)
    b = max((m[TINV] for m in g.terms), default=0)
    one_minus_t = 1 - t
    out = Polynomial()
    for m, c in g.terms.items():
        term = Polynomial.monomial(c, (m[T] + b - m[TINV], 0, 0, 0))
        term = term * one_minus_t ** (m[S] + a - m[SINV])
        out = out + term
    return out


def _trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_divmod(a, b):
    a = [Fraction(x) for x in a]
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and any(a):
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, bc in enumerate(b):
            a[i + shift] -= f * bc
        a = _trim(a)
    return q, a


def _poly_gcd(a, b):
    a, b = _trim(a), _trim(b)
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, _trim(r)
    return a


def _primitive_list(a):
    a = _trim(a)
    if not a:
        return []
    den = reduce(lambda x, y: x * y // gcd(x, y), (Fraction(c).denominator for c in a), 1)
    ints = [int(Fraction(c) * den) for c in a]
    g = reduce(gcd, ints)
    if ints[-1] < 0:
        g = -g
    return [c // g for c in ints]


def alexander_from_basis(B):
    survivors = [_tpoly(specialize(g)) for g in B.elements]
    survivors = [p for p in survivors if _trim(p)]
    if not survivors:
        return Polynomial()
    acc = survivors[0]
    for p in survivors[1:]:
        acc = _poly_gcd(acc, p)
    return _from_list(_primitive_list(acc))


def alexander_poly(d, order=DEFAULT_ORDER, basis=None):
    """Alexander polynomial read off the FLAG_1 basis (primitive, positive leading coefficient)."""
    if not d.classical:
        # the Alexander module of a crossingless knot diagram is free of rank one
        return Polynomial.const(1)
    if basis is None:
        basis = flag_invariant(d, 1, order)
    return alexander_from_basis(basis)


def knot_determinant(d, order=DEFAULT_ORDER, basis=None):
    delta = alexander_poly(d, order, basis)
    if delta.is_zero():
        raise ValueError("Alexander polynomial is zero; determinant undefined")
    return abs(delta.evaluate((-1, 0, 0, 0)))


def is_symmetric(delta):
    """True if delta(t) = ± t^deg * delta(1/t)."""
    c = _trim(_tpoly(delta))
    while c and c[0] == 0:
        c = c[1:]
    return c == c[::-1] or c == [-x for x in c[::-1]]


def divides_in_qt(divisor, p):
    """True if ``divisor`` divides ``p`` in Q[t] with an integer-multiple quotient up to units."""
    a, b = _tpoly(p), _tpoly(divisor)
    if not _trim(a):
        return True
    _, r = _poly_divmod(a, b)
    return not _trim(r)
