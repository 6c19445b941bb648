"""Strong Groebner bases over the integers.

Reduction is Euclidean: a term ``c*M`` is reduced by an element with leading
term ``b*N`` (``N | M``) down to the least non-negative residue of ``c``
modulo ``|b|``.  Completion processes S-polynomials and GCD-polynomials for
every pair, which yields a strong basis: every ideal member reduces to zero.
"""

from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from itertools import combinations
from fractions import Fraction
from functools import reduce
from math import gcd

from .polyring import (
    DEFAULT_ORDER,
    MonomialOrder,
    Polynomial,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)

log = logging.getLogger(__name__)


class OrderMismatch(ValueError):
    pass


def _xgcd(a, b):
    """Return (g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def _heap_key(order, m):
    deg, rev = order.key(m)
    return (-deg, tuple(-x for x in rev))


def _reducers(G, order):
    reds = []
    for g in G:
        if g.is_zero():
            continue
        c, m = g.leading_term(order)
        reds.append((abs(c), order.key(m), c, m, g))
    # smallest |lc| first, so a term is reduced by the gcd-like element
    reds.sort(key=lambda r: (r[0], r[1]))
    return [(c, m, g) for _, _, c, m, g in reds]


def _reduce_with(f, reds, order, skip_leading=False):
    p = dict(f.terms)
    if not p or not reds:
        return Polynomial._raw(p)
    protected = None
    if skip_leading:
        protected = max(p, key=order.key)
    heap = [(_heap_key(order, m), m) for m in p]
    heapq.heapify(heap)
    queued = set(p)
    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = p.get(m)
        if c is None or m == protected:
            continue
        for b, n, g in reds:
            if mono_divides(n, m):
                break
        else:
            continue
        ab = abs(b)
        r = c % ab
        if r == c:
            continue
        q = (c - r) // b
        shift = mono_div(m, n)
        for gm, gc in g.terms.items():
            mm = mono_mul(gm, shift)
            v = p.get(mm, 0) - q * gc
            if v:
                p[mm] = v
                if mm not in queued and mm != m:
                    heapq.heappush(heap, (_heap_key(order, mm), mm))
                    queued.add(mm)
            else:
                p.pop(mm, None)
    return Polynomial._raw(p)


def strong_reduce(f, G, order=DEFAULT_ORDER):
    """Fully reduce ``f`` by ``G``; the result has no reducible term."""
    return _reduce_with(f, _reducers(G, order), order)


def s_polynomial(f, g, order=DEFAULT_ORDER):
    a, m = f.leading_term(order)
    b, n = g.leading_term(order)
    L = mono_lcm(m, n)
    l = abs(a * b) // gcd(a, b)
    return f.mul_term(l // a, mono_div(L, m)) - g.mul_term(l // b, mono_div(L, n))


def g_polynomial(f, g, order=DEFAULT_ORDER):
    a, m = f.leading_term(order)
    b, n = g.leading_term(order)
    L = mono_lcm(m, n)
    _, x, y = _xgcd(a, b)
    return f.mul_term(x, mono_div(L, m)) + g.mul_term(y, mono_div(L, n))


@dataclass
class Ideal:
    generators: list
    order: MonomialOrder = DEFAULT_ORDER

    def __post_init__(self):
        seen = []
        for g in self.generators:
            if not g.is_zero() and g not in seen:
                seen.append(g)
        self.generators = seen


@dataclass
class GroebnerBasis:
    elements: list
    order: MonomialOrder = DEFAULT_ORDER
    canonical: bool = False
    domain: str = "ZZ"
    stats: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def to_json(self):
        return {
            "order": self.order.spec(),
            "canonical": self.canonical,
            "domain": self.domain,
            "count": len(self.elements),
            "basis": [g.to_json(self.order) for g in self.elements],
        }

    def strings(self):
        return [g.to_str(self.order) for g in self.elements]


def _needs_gpoly(a, b):
    return a % b != 0 and b % a != 0


def strong_groebner(ideal, order=None):
    """Buchberger completion over the integers.

    ``ideal`` may be an :class:`Ideal` or a plain list of polynomials.
    Returns a canonical :class:`GroebnerBasis`.
    """
    if isinstance(ideal, Ideal):
        gens, order = ideal.generators, order or ideal.order
    else:
        order = order or DEFAULT_ORDER
        gens = [g for g in ideal if not g.is_zero()]
    raw = _buchberger(gens, order)
    return canonicalize(GroebnerBasis(raw, order))


def _buchberger(gens, order):
    G = []
    pairs = []
    counter = 0
    stats = {"spolys": 0, "gpolys": 0, "added": 0}

    def add(h):
        nonlocal counter
        if h.leading_coefficient(order) < 0:
            h = -h
        k = len(G)
        G.append(h)
        hc, hm = h.leading_term(order)
        for i in range(k):
            gc, gm = G[i].leading_term(order)
            L = mono_lcm(gm, hm)
            counter += 1
            heapq.heappush(pairs, (order.key(L), counter, i, k))

    for g in gens:
        h = strong_reduce(g, G, order)
        if not h.is_zero():
            add(h)

    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        f, g = G[i], G[j]
        a, m = f.leading_term(order)
        b, n = g.leading_term(order)
        coprime = mono_mul(m, n) == mono_lcm(m, n)
        todo = []
        # the coprime shortcut is only safe over Z with unit leading coefficients
        if not (coprime and abs(a) == 1 and abs(b) == 1):
            todo.append(s_polynomial(f, g, order))
            stats["spolys"] += 1
        if _needs_gpoly(a, b):
            todo.append(g_polynomial(f, g, order))
            stats["gpolys"] += 1
        for p in todo:
            h = strong_reduce(p, G, order)
            if not h.is_zero():
                stats["added"] += 1
                add(h)
    log.debug("buchberger: %s, raw size %d", stats, len(G))
    return G


def canonicalize(B):
    """Minimal, tail-reduced, sign-normalized and sorted form of a strong basis."""
    order = B.order
    elems = [(-g if g.leading_coefficient(order) < 0 else g) for g in B.elements if not g.is_zero()]
    elems.sort(key=lambda g: (order.key(g.leading_monomial(order)), g.leading_coefficient(order)))
    kept = []
    for g in elems:
        c, m = g.leading_term(order)
        if any(mono_divides(km, m) and c % kc == 0 for kc, km in ((k.leading_term(order)) for k in kept)):
            continue
        kept.append(g)
    changed = True
    while changed:
        changed = False
        for i, g in enumerate(kept):
            others = kept[:i] + kept[i + 1:]
            r = _reduce_with(g, _reducers(others, order), order, skip_leading=True)
            if r != g:
                kept[i] = r
                changed = True
    kept.sort(key=lambda g: (order.key(g.leading_monomial(order)), g.leading_coefficient(order), g.sort_key(order)))
    return GroebnerBasis(kept, order, canonical=True)


def ideal_member(f, B):
    if B.domain == "QQ":
        return field_reduce(f, B.elements, B.order).is_zero()
    return strong_reduce(f, B.elements, B.order).is_zero()


def ideal_equal(B1, B2):
    if B1.order != B2.order:
        raise OrderMismatch(f"orders differ: {B1.order.spec()} vs {B2.order.spec()}")
    if B1.domain != B2.domain:
        raise ValueError(f"cannot compare a {B1.domain} basis with a {B2.domain} basis")
    return all(ideal_member(g, B2) for g in B1.elements) and all(ideal_member(g, B1) for g in B2.elements)


def is_strong_basis(elements, order=DEFAULT_ORDER):
    """Exhaustive post-hoc check that every S- and G-polynomial reduces to zero."""
    elems = [g for g in elements if not g.is_zero()]
    for f, g in combinations(elems, 2):
        if not strong_reduce(s_polynomial(f, g, order), elems, order).is_zero():
            return False
        a, b = f.leading_coefficient(order), g.leading_coefficient(order)
        if _needs_gpoly(a, b) and not strong_reduce(g_polynomial(f, g, order), elems, order).is_zero():
            return False
    return True


# -- rational coefficients ----------------------------------------------------
#
# Bases over Q are reported with every element scaled to a primitive integer
# polynomial with positive leading coefficient.  This is the normalization a
# CAS such as sympy uses for ``groebner(..., domain=ZZ)``.


def primitive(f, order=DEFAULT_ORDER):
    """Scale a polynomial with rational coefficients to a primitive integer one."""
    if f.is_zero():
        return f
    den = reduce(lambda a, b: a * b // gcd(a, b), (Fraction(c).denominator for c in f.terms.values()), 1)
    ints = {m: int(Fraction(c) * den) for m, c in f.terms.items()}
    g = reduce(gcd, ints.values())
    if ints[f.leading_monomial(order)] < 0:
        g = -g
    return Polynomial._raw({m: c // g for m, c in ints.items()})


def _monic(f, order):
    c = Fraction(f.leading_coefficient(order))
    return Polynomial._raw({m: Fraction(v) / c for m, v in f.terms.items()})


def field_reduce(f, G, order=DEFAULT_ORDER, skip_leading=False):
    """Full reduction over Q.  The result keeps rational coefficients."""
    reds = [(g.leading_monomial(order), _monic(g, order)) for g in G if not g.is_zero()]
    reds.sort(key=lambda r: order.key(r[0]))
    p = {m: Fraction(c) for m, c in f.terms.items()}
    if not p or not reds:
        return Polynomial._raw(p)
    protected = max(p, key=order.key) if skip_leading else None
    heap = [(_heap_key(order, m), m) for m in p]
    heapq.heapify(heap)
    queued = set(p)
    while heap:
        _, m = heapq.heappop(heap)
        queued.discard(m)
        c = p.get(m)
        if c is None or m == protected:
            continue
        for n, g in reds:
            if mono_divides(n, m):
                break
        else:
            continue
        shift = mono_div(m, n)
        for gm, gc in g.terms.items():
            mm = mono_mul(gm, shift)
            v = p.get(mm, 0) - c * gc
            if v:
                p[mm] = v
                if mm not in queued and mm != m:
                    heapq.heappush(heap, (_heap_key(order, mm), mm))
                    queued.add(mm)
            else:
                p.pop(mm, None)
    return Polynomial._raw(p)


def rational_groebner(ideal, order=None):
    """Reduced Groebner basis over Q, elements scaled to primitive integer form."""
    if isinstance(ideal, Ideal):
        gens, order = ideal.generators, order or ideal.order
    else:
        order = order or DEFAULT_ORDER
        gens = [g for g in ideal if not g.is_zero()]
    G = []
    pairs = []
    counter = 0

    def add(h):
        nonlocal counter
        h = _monic(h, order)
        k = len(G)
        G.append(h)
        hm = h.leading_monomial(order)
        for i in range(k):
            counter += 1
            heapq.heappush(pairs, (order.key(mono_lcm(G[i].leading_monomial(order), hm)), counter, i, k))

    for g in gens:
        h = field_reduce(g, G, order)
        if not h.is_zero():
            add(h)
    while pairs:
        _, _, i, j = heapq.heappop(pairs)
        m, n = G[i].leading_monomial(order), G[j].leading_monomial(order)
        if mono_mul(m, n) == mono_lcm(m, n):
            continue
        L = mono_lcm(m, n)
        spoly = G[i].mul_term(1, mono_div(L, m)) - G[j].mul_term(1, mono_div(L, n))
        h = field_reduce(spoly, G, order)
        if not h.is_zero():
            add(h)
    return canonicalize_rational(GroebnerBasis(G, order, domain="QQ"))


def canonicalize_rational(B):
    """Reduced basis over Q in primitive integer form, sorted ascending."""
    order = B.order
    elems = sorted((g for g in B.elements if not g.is_zero()), key=lambda g: order.key(g.leading_monomial(order)))
    kept = []
    for g in elems:
        m = g.leading_monomial(order)
        if not any(mono_divides(k.leading_monomial(order), m) for k in kept):
            kept.append(g)
    reduced = []
    for i, g in enumerate(kept):
        r = field_reduce(g, kept[:i] + kept[i + 1:], order, skip_leading=True)
        reduced.append(primitive(r, order))
    reduced.sort(key=lambda g: (order.key(g.leading_monomial(order)), g.sort_key(order)))
    return GroebnerBasis(reduced, order, canonical=True, domain="QQ")
