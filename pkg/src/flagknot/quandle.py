"""Finite quandles: operation tables, axiom checks, constructors, isomorphism.

Tables are stored 0-based as numpy arrays (``table[x, y] = x ▷ y``) and shown
1-based, like the bracketed matrices used throughout the knot literature.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import gcd
from typing import Optional

import numpy as np


@dataclass(frozen=True)
class AxiomSet:
    """Axioms imposed on top of the three quandle axioms.

    ``n_quandle=2`` is the involutory axiom and is normalized to it.
    """

    involutory: bool = False
    abelian: bool = False
    anti_abelian: bool = False
    left_distributive: bool = False
    commutative_operator: bool = False
    latin: bool = False
    n_quandle: Optional[int] = None

    def __post_init__(self):
        if self.n_quandle is not None:
            if self.n_quandle < 2:
                raise ValueError("n_quandle needs n >= 2")
            if self.n_quandle == 2:
                object.__setattr__(self, "involutory", True)
                object.__setattr__(self, "n_quandle", None)

    NAMES = ("involutory", "abelian", "anti-abelian", "left-distributive", "commutative-operator", "latin")

    @classmethod
    def parse(cls, text):
        """Parse ``"involutory,anti-abelian,n-quandle=4"``."""
        kw = {}
        for item in (p.strip() for p in (text or "").split(",")):
            if not item:
                continue
            if item.startswith("n-quandle="):
                try:
                    kw["n_quandle"] = int(item.split("=", 1)[1])
                except ValueError:
                    raise ValueError(f"bad n-quandle value in {item!r}") from None
            elif item in cls.NAMES:
                kw[item.replace("-", "_")] = True
            else:
                raise ValueError(f"unknown axiom {item!r}; choose from {', '.join(cls.NAMES)}, n-quandle=N")
        return cls(**kw)

    def flags(self):
        out = [n for n in self.NAMES if getattr(self, n.replace("-", "_"))]
        if self.n_quandle:
            out.append(f"n-quandle={self.n_quandle}")
        return out

    def __str__(self):
        return ",".join(self.flags()) or "quandle"


@dataclass
class FiniteQuandle:
    table: np.ndarray
    v: Optional[np.ndarray] = None
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        self.table = np.asarray(self.table, dtype=np.int64)
        if self.v is not None:
            self.v = np.asarray(self.v, dtype=np.int64)

    @property
    def n(self):
        return self.table.shape[0]

    def __len__(self):
        return self.n

    @classmethod
    def from_matrix(cls, rows, v=None):
        """Build from a 1-based matrix (and optional 1-based v column)."""
        t = np.asarray(rows, dtype=np.int64) - 1
        vv = None if v is None else np.asarray(v, dtype=np.int64) - 1
        return cls(t, vv)

    def matrix(self):
        return (self.table + 1).tolist()

    def v_list(self):
        return None if self.v is None else (self.v + 1).tolist()

    def to_json(self):
        return {"n": self.n, "table": self.matrix(), "v": self.v_list()}

    @classmethod
    def from_json(cls, data):
        if isinstance(data, str):
            data = json.loads(data)
        q = cls.from_matrix(data["table"], data.get("v"))
        if q.n != data["n"]:
            raise ValueError("n does not match table size")
        return q

    def render(self):
        """Bracketed text layout; the v column follows a ``|``."""
        w = len(str(self.n))
        lines = []
        for i, row in enumerate(self.matrix()):
            body = " ".join(str(x).rjust(w) for x in row)
            if self.v is not None:
                body += " | " + str(self.v[i] + 1).rjust(w)
            lines.append(f"[ {body} ]")
        return "\n".join(lines)

    def dual(self):
        """Table of the dual operation x ▷⁻¹ y."""
        n = self.n
        D = np.empty_like(self.table)
        cols = np.arange(n)
        for y in range(n):
            D[self.table[:, y], y] = cols
        return D


# -- verification -------------------------------------------------------------


def _columns_are_permutations(T):
    n = T.shape[0]
    return all(len(set(T[:, y].tolist())) == n for y in range(n))


def is_latin(q):
    T = q.table
    n = q.n
    if T.min() < 0 or T.max() >= n:
        return False
    rows_ok = all(len(set(T[x].tolist())) == n for x in range(n))
    return rows_ok and _columns_are_permutations(T)


def verify_axioms(q, axioms=AxiomSet()):
    """Exhaustively check the quandle axioms plus every flagged axiom."""
    T = q.table
    n = q.n
    if T.shape != (n, n) or T.min() < 0 or T.max() >= n:
        return False
    r = np.arange(n)
    if not np.array_equal(T[r, r], r):
        return False
    if not _columns_are_permutations(T):
        return False
    x, y, z = np.ix_(r, r, r)
    if not np.array_equal(T[T[x, y], z], T[T[x, z], T[y, z]]):
        return False
    if axioms.involutory and not np.array_equal(T[T, r[None, :]], np.broadcast_to(r[:, None], (n, n))):
        return False
    if axioms.n_quandle:
        acc = T.copy()
        for _ in range(axioms.n_quandle - 1):
            acc = T[acc, r[None, :]]
        if not np.array_equal(acc, np.broadcast_to(r[:, None], (n, n))):
            return False
    if axioms.left_distributive and not np.array_equal(T[x, T[y, z]], T[T[x, y], T[x, z]]):
        return False
    if axioms.commutative_operator and not np.array_equal(T[x, T[y, z]], T[x, T[z, y]]):
        return False
    if axioms.latin and not is_latin(q):
        return False
    if axioms.abelian or axioms.anti_abelian:
        for a in range(n):
            # fix x = a; axes are (y, z, w)
            yy = r[:, None, None]
            zz = r[None, :, None]
            ww = r[None, None, :]
            lhs = T[T[a, yy], T[zz, ww]]
            if axioms.abelian and not np.array_equal(lhs, T[T[a, zz], T[yy, ww]]):
                return False
            if axioms.anti_abelian and not np.array_equal(lhs, T[T[ww, yy], T[zz, a]]):
                return False
    if q.v is not None:
        v = q.v
        if sorted(v.tolist()) != list(range(n)):
            return False
        if not np.array_equal(v[T], T[v[:, None], v[None, :]]):
            return False
        if axioms.involutory and not np.array_equal(v[v], r):
            return False
    return True


# -- constructors -------------------------------------------------------------


def alexander_quandle(n, t):
    """x ▷ y = t*x + (1-t)*y on Z_n; elements 0..n-1 map to 1..n."""
    if n < 1:
        raise ValueError("n must be positive")
    if gcd(t, n) != 1:
        raise ValueError(f"t = {t} is not a unit mod {n}")
    r = np.arange(n)
    return FiniteQuandle((t * r[:, None] + (1 - t) * r[None, :]) % n)


def core_cyclic(n):
    """x ▷ y = 2y - x on Z_n."""
    if n < 1:
        raise ValueError("n must be positive")
    r = np.arange(n)
    return FiniteQuandle((2 * r[None, :] - r[:, None]) % n)


def dihedral_twisted(n):
    """x ▷ y = 2x - y on Z_n."""
    r = np.arange(n)
    return FiniteQuandle((2 * r[:, None] - r[None, :]) % n)


def trivial(n=1):
    r = np.arange(n)
    return FiniteQuandle(np.broadcast_to(r[:, None], (n, n)).copy())


# -- isomorphism --------------------------------------------------------------


def _profile(q):
    """Per-element invariants preserved by isomorphisms."""
    T = q.table
    n = q.n
    prof = []
    for x in range(n):
        col = T[:, x]
        seen = [False] * n
        cycles = []
        for a in range(n):
            if not seen[a]:
                k = 0
                b = a
                while not seen[b]:
                    seen[b] = True
                    b = col[b]
                    k += 1
                cycles.append(k)
        row = T[x]
        prof.append((tuple(sorted(cycles)), len(set(row.tolist())), int((row == x).sum()),
                     None if q.v is None else int(q.v[x] == x)))
    return prof


def _generators(q):
    """Greedy small generating set under ▷, ▷⁻¹ and v."""
    n = q.n
    gens = []
    span = set()
    for x in range(n):
        if x in span:
            continue
        gens.append(x)
        span = _closure(q, gens)
        if len(span) == n:
            break
    return gens


def _closure(q, gens):
    T = q.table
    D = q.dual()
    span = set(gens)
    frontier = list(gens)
    while frontier:
        new = []
        for a in frontier:
            cands = []
            for b in list(span):
                cands += [T[a, b], T[b, a], D[a, b], D[b, a]]
            if q.v is not None:
                cands += [q.v[a], int(np.argmax(q.v == a))]
            for c in cands:
                c = int(c)
                if c not in span:
                    span.add(c)
                    new.append(c)
        frontier = new
    return span


def _extend(q1, q2, phi):
    """Propagate a partial map through the operation tables; None on conflict."""
    T1, T2 = q1.table, q2.table
    phi = dict(phi)
    used = {}
    for a, b in phi.items():
        if used.setdefault(b, a) != a:
            return None
    changed = True
    while changed:
        changed = False
        keys = list(phi)
        for a in keys:
            for b in keys:
                c, d = int(T1[a, b]), int(T2[phi[a], phi[b]])
                if c in phi:
                    if phi[c] != d:
                        return None
                else:
                    if d in used:
                        return None
                    phi[c] = d
                    used[d] = c
                    changed = True
            if q1.v is not None:
                c, d = int(q1.v[a]), int(q2.v[phi[a]])
                if c in phi:
                    if phi[c] != d:
                        return None
                else:
                    if d in used:
                        return None
                    phi[c] = d
                    used[d] = c
                    changed = True
    return phi


def find_isomorphism(q1, q2):
    """Return a dict x -> phi(x) or None."""
    if q1.n != q2.n or (q1.v is None) != (q2.v is None):
        return None
    p1, p2 = _profile(q1), _profile(q2)
    if sorted(p1) != sorted(p2):
        return None
    gens = _generators(q1)
    cands = [[y for y in range(q2.n) if p2[y] == p1[g]] for g in gens]

    def search(i, phi):
        if i == len(gens):
            full = _extend(q1, q2, phi)
            if full is not None and len(full) == q1.n:
                return full
            return None
        for y in cands[i]:
            if y in phi.values():
                continue
            trial = dict(phi)
            trial[gens[i]] = y
            ext = _extend(q1, q2, trial)
            if ext is None:
                continue
            # keep only the generator assignments; propagation is redone at the end
            got = search(i + 1, trial)
            if got is not None:
                return got
        return None

    return search(0, {})


def are_isomorphic(q1, q2):
    if (q1.v is None) != (q2.v is None):
        raise ValueError("both quandles must carry a virtual map, or neither")
    return find_isomorphism(q1, q2) is not None


def brute_force_isomorphic(q1, q2):
    """Try every bijection.  Only for tiny quandles."""
    from itertools import permutations

    if q1.n != q2.n:
        return False
    n = q1.n
    T1, T2 = q1.table, q2.table
    for perm in permutations(range(n)):
        p = np.array(perm)
        if not np.array_equal(p[T1], T2[p[:, None], p[None, :]]):
            continue
        if q1.v is not None and not np.array_equal(p[q1.v], q2.v[p]):
            continue
        return True
    return False
