"""Presentation matrices of finitely presented (virtual) quandles and their completion.

A presentation matrix holds the partially known operation table ``M`` of
``▷``, the dual table ``D`` of ``▷⁻¹`` and, for virtual quandles, the partial
automorphism ``v``.  Completion alternates three moves until the table is
total:

* deduce unknown entries from the axioms (and record forced equalities),
* merge equal generators, keeping the smaller index,
* name an unknown entry as a fresh generator.

Axioms are compiled to term equations and evaluated in bulk with numpy.  An
equation instance whose sides are both known and differ forces a merge; one
whose known side determines the last missing lookup on the other side fills
that entry in.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .quandle import AxiomSet, FiniteQuandle, verify_axioms
from .terms import Op, Relation, VMap

log = logging.getLogger(__name__)

STRATEGIES = ("row-major", "column-major", "most-constrained-row")

# -- term equations -----------------------------------------------------------
#
# Terms are nested tuples: ("x", i) for variable i, ("r", a, b) for a ▷ b,
# ("l", a, b) for a ▷⁻¹ b, ("v", a) and ("w", a) for v(a) and v⁻¹(a).


def _x(i):
    return ("x", i)


def _r(a, b):
    return ("r", a, b)


def _l(a, b):
    return ("l", a, b)


def _arity(term):
    if term[0] == "x":
        return term[1] + 1
    return max(_arity(a) for a in term[1:])


def equations(axioms, virtual=False):
    """Equations (lhs, rhs, nvars), cheapest first."""
    x, y, z, w = _x(0), _x(1), _x(2), _x(3)
    eqs = [
        (_r(x, x), x),
        (_l(x, x), x),
        (_r(_r(x, y), z), _r(_r(x, z), _r(y, z))),
        (_l(_l(x, y), z), _l(_l(x, z), _l(y, z))),
        (_l(_r(x, y), z), _r(_l(x, z), _l(y, z))),
        (_r(_l(x, y), z), _l(_r(x, z), _r(y, z))),
    ]
    if axioms.involutory:
        eqs.append((_r(x, y), _l(x, y)))
    if axioms.n_quandle:
        term = x
        for _ in range(axioms.n_quandle - 1):
            term = _r(term, y)
        # n-fold ▷ is the identity, so (n-1)-fold ▷ equals one ▷⁻¹
        eqs.append((term, _l(x, y)))
    if axioms.left_distributive:
        eqs.append((_r(x, _r(y, z)), _r(_r(x, y), _r(x, z))))
    if axioms.commutative_operator:
        eqs.append((_r(x, _r(y, z)), _r(x, _r(z, y))))
    if axioms.abelian:
        eqs.append((_r(_r(x, y), _r(z, w)), _r(_r(x, z), _r(y, w))))
    if axioms.anti_abelian:
        eqs.append((_r(_r(x, y), _r(z, w)), _r(_r(w, y), _r(z, x))))
    if virtual:
        eqs.append((("v", _r(x, y)), _r(("v", x), ("v", y))))
        eqs.append((("v", _l(x, y)), _l(("v", x), ("v", y))))
        if axioms.involutory:
            eqs.append((("v", ("v", x)), x))
    out = [(lhs, rhs, max(_arity(lhs), _arity(rhs))) for lhs, rhs in eqs]
    out.sort(key=lambda e: e[2])
    return out


# -- data types ---------------------------------------------------------------


class BudgetExceeded(Exception):
    pass


@dataclass
class CompletionStats:
    generators_introduced: int = 0
    merges: int = 0
    rounds: int = 0
    peak_size: int = 0
    seconds: float = 0.0

    def to_json(self):
        return {
            "generators_introduced": self.generators_introduced,
            "merges": self.merges,
            "rounds": self.rounds,
            "peak_size": self.peak_size,
            "seconds": round(self.seconds, 4),
        }


@dataclass
class CompletionResult:
    status: str  # "completed" or "budget-exceeded"
    quandle: Optional[FiniteQuandle]
    stats: CompletionStats
    # original generator (1-based) -> element of the quandle (1-based)
    generator_map: dict = field(default_factory=dict)

    @property
    def completed(self):
        return self.status == "completed"

    def to_json(self):
        out = {"status": self.status, "stats": self.stats.to_json()}
        if self.quandle is not None:
            out["quandle"] = self.quandle.to_json()
            out["generator_map"] = {str(k): v for k, v in sorted(self.generator_map.items())}
        return out


@dataclass
class Budget:
    max_generators: int = 4096
    max_rounds: Optional[int] = None
    max_seconds: Optional[float] = None


class PresentationMatrix:
    """Partial operation tables over generators ``0..n-1`` (shown 1-based).

    ``-1`` marks an unknown entry internally; :meth:`matrix` uses 0 for it.
    ``ids[i]`` is the original generator id of live generator ``i`` and
    ``where[g]`` the live index that original generator ``g`` now equals.
    """

    def __init__(self, n, virtual=False, latin=False):
        self.n = n
        self.virtual = virtual
        self.latin = latin
        self.M = np.full((n, n), -1, dtype=np.int64)
        self.D = np.full((n, n), -1, dtype=np.int64)
        self.V = np.full(n, -1, dtype=np.int64) if virtual else None
        self.Vi = np.full(n, -1, dtype=np.int64) if virtual else None
        self.ids = np.arange(n)
        self.where = np.arange(n)
        self.next_id = n
        self.merges = 0
        self.pending_merges = []
        self.relations = []

    # -- views ---------------------------------------------------------------

    def matrix(self):
        return (self.M + 1).tolist()

    def dual_matrix(self):
        return (self.D + 1).tolist()

    def v_list(self):
        return None if self.V is None else (self.V + 1).tolist()

    def unknown_count(self):
        c = int((self.M < 0).sum())
        if self.V is not None:
            c += int((self.V < 0).sum())
        return c

    def is_total(self):
        return self.unknown_count() == 0

    def copy(self):
        other = PresentationMatrix.__new__(PresentationMatrix)
        other.__dict__.update(self.__dict__)
        for k in ("M", "D", "V", "Vi", "ids", "where"):
            a = getattr(self, k)
            setattr(other, k, None if a is None else a.copy())
        other.pending_merges = list(self.pending_merges)
        other.relations = list(self.relations)
        return other

    # -- fact handling -------------------------------------------------------

    def add_generator(self):
        n = self.n
        M = np.full((n + 1, n + 1), -1, dtype=np.int64)
        M[:n, :n] = self.M
        D = np.full((n + 1, n + 1), -1, dtype=np.int64)
        D[:n, :n] = self.D
        self.M, self.D = M, D
        if self.V is not None:
            self.V = np.append(self.V, -1)
            self.Vi = np.append(self.Vi, -1)
        self.ids = np.append(self.ids, self.next_id)
        self.where = np.append(self.where, n)
        self.next_id += 1
        self.n = n + 1
        return n

    def _facts(self):
        I, J = np.nonzero(self.M >= 0)
        mf = [np.stack([I, J, self.M[I, J]])]
        K, J2 = np.nonzero(self.D >= 0)
        mf.append(np.stack([self.D[K, J2], J2, K]))
        vf = []
        if self.V is not None:
            X = np.nonzero(self.V >= 0)[0]
            vf.append(np.stack([X, self.V[X]]))
            Y = np.nonzero(self.Vi >= 0)[0]
            vf.append(np.stack([self.Vi[Y], Y]))
        return mf, vf

    def rebuild(self, new_m=(), new_v=(), merges=()):
        """Insert new facts, close under merges and compact live generators.

        Returns True if anything changed.
        """
        n = self.n
        before = (n, int((self.M >= 0).sum()), 0 if self.V is None else int((self.V >= 0).sum()))
        mf, vf = self._facts()
        mf = np.concatenate(mf + [np.asarray(f, dtype=np.int64).reshape(3, -1) for f in new_m], axis=1)
        vf = np.concatenate(vf + [np.asarray(f, dtype=np.int64).reshape(2, -1) for f in new_v], axis=1) \
            if self.V is not None else np.zeros((2, 0), dtype=np.int64)
        parent = np.arange(n)

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        def union(a, b):
            ra, rb = find(a), find(b)
            if ra == rb:
                return False
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
            return True

        nmerge = 0
        for a, b in list(self.pending_merges) + list(merges):
            nmerge += union(int(a), int(b))
        self.pending_merges = []

        def conflicts(keys_a, keys_b, vals):
            # pairs of differing vals among facts with equal (keys_a, keys_b)
            if vals.size == 0:
                return []
            key = keys_a * n + keys_b
            order = np.lexsort((vals, key))
            k, v = key[order], vals[order]
            same = (k[1:] == k[:-1]) & (v[1:] != v[:-1])
            idx = np.nonzero(same)[0]
            return list(zip(v[idx].tolist(), v[idx + 1].tolist()))

        while True:
            rep = parent.copy()
            while True:
                nxt = rep[rep]
                if np.array_equal(nxt, rep):
                    break
                rep = nxt
            parent[:] = rep
            I, J, K = rep[mf[0]], rep[mf[1]], rep[mf[2]]
            pairs = conflicts(I, J, K) + conflicts(K, J, I)
            if self.latin:
                pairs += conflicts(I, K, J)
            if self.V is not None and vf.size:
                X, Y = rep[vf[0]], rep[vf[1]]
                pairs += conflicts(X, np.zeros_like(X), Y) + conflicts(Y, np.zeros_like(Y), X)
            changed = False
            for a, b in pairs:
                if union(a, b):
                    nmerge += 1
                    changed = True
            if not changed:
                break

        rep = parent
        live = np.nonzero(rep == np.arange(n))[0]
        newidx = np.full(n, -1, dtype=np.int64)
        newidx[live] = np.arange(len(live))
        L = len(live)
        I, J, K = newidx[rep[mf[0]]], newidx[rep[mf[1]]], newidx[rep[mf[2]]]
        M = np.full((L, L), -1, dtype=np.int64)
        M[I, J] = K
        Dm = np.full((L, L), -1, dtype=np.int64)
        Dm[K, J] = I
        self.M, self.D = M, Dm
        if self.V is not None:
            V = np.full(L, -1, dtype=np.int64)
            Vi = np.full(L, -1, dtype=np.int64)
            if vf.size:
                X, Y = newidx[rep[vf[0]]], newidx[rep[vf[1]]]
                V[X] = Y
                Vi[Y] = X
            self.V, self.Vi = V, Vi
        self.ids = self.ids[live]
        self.where = newidx[rep[self.where]]
        self.n = L
        self.merges += nmerge
        after = (L, int((self.M >= 0).sum()), 0 if self.V is None else int((self.V >= 0).sum()))
        return after != before

    # -- deduction -----------------------------------------------------------

    def sweep(self, eqs, chunk_cells=2_000_000, deadline=None):
        """Evaluate every instance of each equation once; return (m_facts, v_facts, merges)."""
        n = self.n
        if n == 0:
            return [], [], []
        unk = n
        Mp = np.full((n + 1, n + 1), unk, dtype=np.int64)
        Mp[:n, :n] = np.where(self.M < 0, unk, self.M)
        Dp = np.full((n + 1, n + 1), unk, dtype=np.int64)
        Dp[:n, :n] = np.where(self.D < 0, unk, self.D)
        tables = {"r": (Mp, Dp), "l": (Dp, Mp)}
        if self.V is not None:
            Vp = np.full(n + 1, unk, dtype=np.int64)
            Vp[:n] = np.where(self.V < 0, unk, self.V)
            Vip = np.full(n + 1, unk, dtype=np.int64)
            Vip[:n] = np.where(self.Vi < 0, unk, self.Vi)
            tables["v"] = (Vp, Vip)
            tables["w"] = (Vip, Vp)
        m_facts, v_facts, merges = [], [], []
        for lhs, rhs, k in eqs:
            if k <= 1:
                step = n
            else:
                step = max(1, chunk_cells // (n ** (k - 1)))
            for lo in range(0, n, step):
                if deadline and time.perf_counter() > deadline:
                    raise BudgetExceeded("time")
                hi = min(n, lo + step)
                ev = _Evaluator(tables, n, k, lo, hi)
                a, b = ev.eval(lhs), ev.eval(rhs)
                a, b = np.broadcast_arrays(a, b)
                both = (a != unk) & (b != unk) & (a != b)
                if both.any():
                    merges.append(np.stack([a[both], b[both]]))
                ev.push(rhs, a, (a != unk) & (b == unk))
                ev.push(lhs, b, (b != unk) & (a == unk))
                m_facts.extend(ev.m_facts)
                v_facts.extend(ev.v_facts)
        return m_facts, v_facts, _pairs(merges)

    def saturate(self, axioms, budget=None, stats=None, deadline=None):
        """Apply deduction rules and merges until nothing changes."""
        eqs = equations(axioms, self.virtual)
        cheap = [e for e in eqs if e[2] <= 3]
        costly = [e for e in eqs if e[2] > 3]
        rounds = 0
        while True:
            while True:
                rounds += 1
                mf, vf, mg = self.sweep(cheap, deadline=deadline)
                if not self.rebuild(mf, vf, mg):
                    break
                if deadline and time.perf_counter() > deadline:
                    raise BudgetExceeded("time")
            if not costly:
                break
            rounds += 1
            mf, vf, mg = self.sweep(costly, deadline=deadline)
            if not self.rebuild(mf, vf, mg):
                break
            if deadline and time.perf_counter() > deadline:
                raise BudgetExceeded("time")
        if stats is not None:
            stats.rounds += rounds
        return rounds

    def choose_zero(self, strategy="row-major"):
        unknown = self.M < 0
        if unknown.any():
            if strategy == "row-major":
                i, j = np.argwhere(unknown)[0]
            elif strategy == "column-major":
                j, i = np.argwhere(unknown.T)[0]
            elif strategy == "most-constrained-row":
                counts = np.where(unknown.any(axis=1), unknown.sum(axis=1), self.n + 1)
                i = int(np.argmin(counts))
                j = int(np.nonzero(unknown[i])[0][0])
            else:
                raise ValueError(f"unknown strategy {strategy!r}")
            return ("M", int(i), int(j))
        if self.V is not None and (self.V < 0).any():
            return ("V", int(np.nonzero(self.V < 0)[0][0]), None)
        return None


class _Evaluator:
    """Bulk evaluation of a term over all variable assignments in a chunk."""

    def __init__(self, tables, n, k, lo, hi):
        self.tables = tables
        self.n = n
        self.k = k
        self.lo, self.hi = lo, hi
        self.cache = {}
        self.m_facts = []
        self.v_facts = []

    def var(self, i):
        shape = [1] * self.k
        if i == 0:
            ax = np.arange(self.lo, self.hi)
        else:
            ax = np.arange(self.n)
        shape[i] = ax.size
        return ax.reshape(shape)

    def eval(self, term):
        hit = self.cache.get(term)
        if hit is not None:
            return hit
        kind = term[0]
        if kind == "x":
            out = self.var(term[1])
        elif kind in ("r", "l"):
            T = self.tables[kind][0]
            out = T[self.eval(term[1]), self.eval(term[2])]
        else:
            out = self.tables[kind][0][self.eval(term[1])]
        self.cache[term] = out
        return out

    def push(self, term, target, mask):
        """Make ``term`` evaluate to ``target`` wherever ``mask`` holds."""
        unk = self.n
        kind = term[0]
        if kind == "x" or not mask.any():
            return
        if kind in ("r", "l"):
            T, Tinv = self.tables[kind]
            a, b = np.broadcast_arrays(self.eval(term[1]), self.eval(term[2]), target, mask)[:2]
            target, mask = np.broadcast_arrays(target, mask, a)[:2]
            direct = mask & (a != unk) & (b != unk)
            if direct.any():
                aa, bb, tt = a[direct], b[direct], target[direct]
                if kind == "r":
                    self.m_facts.append(np.stack([aa, bb, tt]))
                else:
                    # a ▷⁻¹ b = t  <=>  t ▷ b = a
                    self.m_facts.append(np.stack([tt, bb, aa]))
            solve = mask & (a == unk) & (b != unk)
            if solve.any():
                sub = np.full(a.shape, unk, dtype=np.int64)
                sub[solve] = Tinv[target[solve], b[solve]]
                self.push(term[1], sub, solve & (sub != unk))
        else:
            V, Vinv = self.tables[kind]
            a = np.broadcast_arrays(self.eval(term[1]), target, mask)[0]
            target, mask = np.broadcast_arrays(target, mask, a)[:2]
            direct = mask & (a != unk)
            if direct.any():
                aa, tt = a[direct], target[direct]
                self.v_facts.append(np.stack([aa, tt]) if kind == "v" else np.stack([tt, aa]))
            solve = mask & (a == unk)
            if solve.any():
                sub = np.full(a.shape, unk, dtype=np.int64)
                sub[solve] = Vinv[target[solve]]
                self.push(term[1], sub, solve & (sub != unk))


def _pairs(chunks):
    if not chunks:
        return []
    arr = np.concatenate(chunks, axis=1)
    arr = np.unique(np.sort(arr, axis=0), axis=1)
    return list(zip(arr[0].tolist(), arr[1].tolist()))


# -- building presentations ------------------------------------------------------


def from_relations(n, relations, axioms=AxiomSet(), virtual=False):
    """Presentation matrix for generators 1..n subject to ``relations``.

    Nested words are shortened by naming subwords as new generators.
    Relations between two generators become merges.
    """
    p = PresentationMatrix(n, virtual=virtual, latin=axioms.latin)
    p.relations = list(relations)
    m_facts, v_facts, merges = [], [], []
    names = {}

    def check(g):
        if not 1 <= g <= n:
            raise IndexError(f"generator x{g} out of range 1..{n}")

    def name(word):
        """Generator index (0-based) equal to ``word``."""
        if isinstance(word, int):
            check(word)
            return word - 1
        key = _key(word)
        if key in names:
            return names[key]
        g = p.add_generator()
        names[key] = g
        assert_short(word, g)
        return g

    def assert_short(word, g):
        if isinstance(word, Op):
            a, b = name(word.left), name(word.right)
            if word.inverse:
                m_facts.append((g, b, a))
            else:
                m_facts.append((a, b, g))
        elif isinstance(word, VMap):
            if not virtual:
                raise ValueError("v-relations need a virtual presentation")
            a = name(word.arg)
            v_facts.append((g, a) if word.inverse else (a, g))
        else:
            raise TypeError(f"bad word {word!r}")

    for rel in relations:
        lhs, rhs = rel.lhs, rel.rhs
        if isinstance(lhs, int) and not isinstance(rhs, int):
            lhs, rhs = rhs, lhs
        if isinstance(lhs, int) and isinstance(rhs, int):
            check(lhs)
            check(rhs)
            merges.append((lhs - 1, rhs - 1))
            continue
        target = name(rhs)
        assert_short(lhs, target)

    mf = np.array(m_facts, dtype=np.int64).T.reshape(3, -1)
    vf = np.array(v_facts, dtype=np.int64).T.reshape(2, -1)
    # idempotence is part of every presentation
    diag = np.arange(p.n)
    mf = np.concatenate([mf, np.stack([diag, diag, diag])], axis=1)
    p.rebuild([mf], [vf] if virtual else [], merges)
    return p


def _key(word):
    if isinstance(word, int):
        return word
    if isinstance(word, Op):
        return ("l" if word.inverse else "r", _key(word.left), _key(word.right))
    return ("w" if word.inverse else "v", _key(word.arg))


def presentation_from_diagram(d, axioms=AxiomSet(), virtual=None):
    from .diagram import CLASSICAL_ARCS, VIRTUAL_SEMIARCS, crossing_relations, label_arcs

    if virtual is None:
        virtual = bool(d.virtual)
    lab = label_arcs(d, VIRTUAL_SEMIARCS if virtual else CLASSICAL_ARCS)
    return from_relations(lab.n, crossing_relations(d, lab), axioms, virtual)


# -- completion ----------------------------------------------------------------


def complete(p, axioms=AxiomSet(), budget=None, strategy="row-major"):
    """Run the completion loop on a copy of ``p``."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {', '.join(STRATEGIES)}")
    budget = budget or Budget()
    p = p.copy()
    p.latin = axioms.latin
    stats = CompletionStats()
    start = time.perf_counter()
    deadline = start + budget.max_seconds if budget.max_seconds else None
    original = len(p.where)
    try:
        while True:
            p.saturate(axioms, budget, stats, deadline)
            stats.peak_size = max(stats.peak_size, p.n)
            if budget.max_rounds is not None and stats.rounds > budget.max_rounds:
                raise BudgetExceeded("rounds")
            zero = p.choose_zero(strategy)
            if zero is None:
                break
            if p.n >= budget.max_generators:
                raise BudgetExceeded("generators")
            g = p.add_generator()
            stats.generators_introduced += 1
            kind, i, j = zero
            if kind == "M":
                p.rebuild([np.array([[i], [j], [g]])])
            else:
                p.rebuild([], [np.array([[i], [g]])])
            log.debug("new generator at %s(%d,%s); size %d", kind, i, j, p.n)
    except BudgetExceeded as exc:
        stats.merges = p.merges
        stats.seconds = time.perf_counter() - start
        log.info("budget exceeded (%s) at size %d", exc, p.n)
        return CompletionResult("budget-exceeded", None, stats)
    stats.merges = p.merges
    stats.seconds = time.perf_counter() - start
    q = FiniteQuandle(p.M.copy(), None if p.V is None else p.V.copy())
    gmap = {g + 1: int(p.where[g]) + 1 for g in range(original)}
    return CompletionResult("completed", q, stats, gmap)


def relations_hold(q, relations, generator_map):
    """Check that every relation holds under the generator mapping (1-based)."""
    T = q.table
    D = q.dual()
    v = q.v

    def ev(word):
        if isinstance(word, int):
            return generator_map[word] - 1
        if isinstance(word, Op):
            a, b = ev(word.left), ev(word.right)
            return int(D[a, b] if word.inverse else T[a, b])
        a = ev(word.arg)
        return int(np.nonzero(v == a)[0][0]) if word.inverse else int(v[a])

    return all(ev(r.lhs) == ev(r.rhs) for r in relations)


def quotient(d, axioms=AxiomSet(), budget=None, strategy="row-major", virtual=None):
    """Complete the presentation of a diagram's quotient quandle."""
    p = presentation_from_diagram(d, axioms, virtual)
    res = complete(p, axioms, budget, strategy)
    if res.completed and not verify_axioms(res.quandle, axioms):
        raise AssertionError("completed table fails the requested axioms")
    return res
