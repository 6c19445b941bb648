"""Knot and link diagrams from PD codes and signed Gauss codes.

PD convention: ``X[a,b,c,d]`` lists the four edges at a classical crossing
counterclockwise, starting with the incoming under-edge ``a``; ``c`` is the
outgoing under-edge.  The over strand runs ``d -> b`` at a positive crossing
and ``b -> d`` at a negative one.  ``V[a,b,c,d]`` is a virtual crossing whose
strands are ``a -> c`` and ``b -> d`` (or ``d -> b``).
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from itertools import permutations

from .terms import Op, Relation, VMap


class DiagramError(ValueError):
    """Raised for malformed or inconsistent diagram codes."""


CLASSICAL = "classical"
VIRTUAL = "virtual"
CLASSICAL_ARCS = "classical-arcs"
VIRTUAL_SEMIARCS = "virtual-semiarcs"


@dataclass(frozen=True)
class Crossing:
    kind: str
    slots: tuple
    sign: int = 0
    # slot index (1 or 3) at which the second strand enters the crossing
    entry2: int = 3

    @property
    def is_classical(self):
        return self.kind == CLASSICAL

    @property
    def under_in(self):
        return self.slots[0]

    @property
    def under_out(self):
        return self.slots[2]

    @property
    def over_in(self):
        return self.slots[self.entry2]

    @property
    def over_out(self):
        return self.slots[4 - self.entry2]

    @property
    def over(self):
        return (self.slots[1], self.slots[3])

    def to_json(self):
        d = {"kind": self.kind, "slots": list(self.slots)}
        if self.is_classical:
            d["sign"] = self.sign
        return d


@dataclass(frozen=True)
class KnotDiagram:
    crossings: tuple
    components: int
    name: str = None
    # edge -> next edge along the orientation
    successor: dict = field(default=None, compare=False, repr=False)

    @property
    def edges(self):
        return sorted(self.successor)

    @property
    def classical(self):
        return [c for c in self.crossings if c.is_classical]

    @property
    def virtual(self):
        return [c for c in self.crossings if not c.is_classical]

    def is_classical_diagram(self):
        return not self.virtual

    def to_pd(self):
        parts = []
        for c in self.crossings:
            tag = "X" if c.is_classical else "V"
            parts.append(f"{tag}[{','.join(str(e) for e in c.slots)}]")
        return f"PD[{','.join(parts)}]"

    def to_json(self):
        return {
            "name": self.name,
            "components": self.components,
            "edges": len(self.successor),
            "crossings": [c.to_json() for c in self.crossings],
        }

    def to_json_text(self):
        return json.dumps(self.to_json(), sort_keys=True)

    def component_cycles(self):
        seen = set()
        cycles = []
        for e in sorted(self.successor):
            if e in seen:
                continue
            cyc = []
            while e not in seen:
                seen.add(e)
                cyc.append(e)
                e = self.successor[e]
            cycles.append(cyc)
        return cycles


def _orient(raw, name=None):
    """Build a KnotDiagram from ``[(kind, slots)]``, inferring over-strand directions."""
    occ = {}
    for ci, (kind, slots) in enumerate(raw):
        if len(slots) != 4:
            raise DiagramError(f"crossing {ci + 1} has {len(slots)} slots, expected 4")
        for si, e in enumerate(slots):
            if not isinstance(e, int) or e <= 0:
                raise DiagramError(f"edge labels must be positive integers, got {e!r}")
            occ.setdefault(e, []).append((ci, si))
    for e, where in occ.items():
        if len(where) != 2:
            raise DiagramError(f"edge {e} appears {len(where)} times, expected exactly 2")

    # direction[(ci, si)] = True if the edge enters crossing ci at slot si
    direction = {}
    stack = []

    def assign(key, incoming):
        old = direction.get(key)
        if old is None:
            direction[key] = incoming
            stack.append(key)
        elif old != incoming:
            raise DiagramError("inconsistent orientation while traversing the diagram")

    def settle():
        while stack:
            ci, si = stack.pop()
            inc = direction[(ci, si)]
            e = raw[ci][1][si]
            for other in occ[e]:
                if other != (ci, si):
                    assign(other, not inc)
            # the partner slot on the same strand has the opposite direction
            assign((ci, (si + 2) % 4), not inc)

    for ci in range(len(raw)):
        assign((ci, 0), True)
        assign((ci, 2), False)
    settle()
    for ci, (kind, slots) in enumerate(raw):
        if (ci, 1) not in direction:
            # Strand never passes under anything: fall back to consecutive
            # labels (d -> b when b = d + 1), else d -> b.
            b, d = slots[1], slots[3]
            b_in = b + 1 == d
            assign((ci, 1), b_in)
            settle()

    crossings = []
    for ci, (kind, slots) in enumerate(raw):
        entry2 = 1 if direction[(ci, 1)] else 3
        if kind == CLASSICAL:
            sign = 1 if entry2 == 3 else -1
            crossings.append(Crossing(CLASSICAL, tuple(slots), sign, entry2))
        else:
            crossings.append(Crossing(VIRTUAL, tuple(slots), 0, entry2))

    succ = {}
    for c in crossings:
        succ[c.slots[0]] = c.slots[2]
        succ[c.slots[c.entry2]] = c.slots[4 - c.entry2]
    if len(succ) != len(occ):
        raise DiagramError("inconsistent orientation: an edge has no unique successor")
    if sorted(succ.values()) != sorted(succ):
        raise DiagramError("inconsistent orientation: successor map is not a permutation")
    d = KnotDiagram(tuple(crossings), 0, name, succ)
    ncomp = len(d.component_cycles()) if crossings else 1
    return KnotDiagram(tuple(crossings), ncomp, name, succ)


_PD_NODE = re.compile(r"([XV])\[([^\[\]]*)\]")


def parse_pd(text, name=None):
    """Parse ``PD[X[a,b,c,d], ..., V[a,b,c,d], ...]``."""
    compact = re.sub(r"\s+", "", text)
    m = re.fullmatch(r"PD\[(.*)\]", compact)
    if not m:
        raise DiagramError(f"not a PD code: {text!r}")
    body = m.group(1)
    raw = []
    pos = 0
    while pos < len(body):
        node = _PD_NODE.match(body, pos)
        if not node:
            raise DiagramError(f"malformed PD node near {body[pos:]!r}")
        tag, args = node.groups()
        try:
            slots = [int(a) for a in args.split(",")] if args else []
        except ValueError:
            raise DiagramError(f"non-integer edge label in {node.group(0)!r}") from None
        if len(slots) != 4:
            raise DiagramError(f"crossing {node.group(0)} has arity {len(slots)}, expected 4")
        raw.append((CLASSICAL if tag == "X" else VIRTUAL, slots))
        pos = node.end()
        if pos < len(body):
            if body[pos] != ",":
                raise DiagramError(f"expected ',' near {body[pos:]!r}")
            pos += 1
            if pos == len(body):
                raise DiagramError("trailing comma in PD code")
    return _orient(raw, name)


_GAUSS_TOKEN = re.compile(r"([OU])(\d+)([+-]?)|V(\d+)([+-]?)")


def gauss_passages(text):
    tokens = [tok for tok in re.split(r"[\s,]+", text.strip()) if tok]
    if len(tokens) == 1:
        tokens = re.findall(r"[OU]\d+[+-]?|V\d+[+-]?|\S", text.strip())
    out = []
    for tok in tokens:
        m = _GAUSS_TOKEN.fullmatch(tok)
        if not m:
            raise DiagramError(f"bad Gauss token {tok!r}")
        if m.group(4):
            out.append(("V", int(m.group(4)), {"+": 1, "-": -1, "": 0}[m.group(5)]))
        else:
            sign = {"+": 1, "-": -1, "": 0}[m.group(3)]
            out.append((m.group(1), int(m.group(2)), sign))
    return out


def parse_gauss(text, name=None, check_planar=True):
    """Parse a signed Gauss code such as ``O1+U2+O3+U1+O2+U3+``.

    ``V<k>`` tokens mark passages through virtual crossing ``k``.  Their
    optional sign fixes the handedness as if the first passage went under;
    it matters only for the planarity check.  Codes without virtual markers
    must be realizable in the plane.
    """
    passages = gauss_passages(text)
    if not passages:
        return _orient([], name)
    seen = {}
    for idx, (kind, k, sign) in enumerate(passages):
        seen.setdefault(("V" if kind == "V" else "C", k), []).append((idx, kind, sign))
    classical = {}
    virtual = {}
    for (cls, k), where in seen.items():
        if cls == "V":
            if len(where) != 2:
                raise DiagramError(f"virtual crossing {k} must be passed exactly twice")
            virtual[k] = where
            continue
        kinds = sorted(w[1] for w in where)
        if kinds != ["O", "U"]:
            missing = {"O", "U"} - set(kinds)
            if missing:
                raise DiagramError(f"crossing {k} has no {'/'.join(sorted(missing))} occurrence")
            raise DiagramError(f"crossing {k} appears {len(where)} times")
        signs = {w[2] for w in where} - {0}
        if len(signs) > 1:
            raise DiagramError(f"sign mismatch at crossing {k}")
        if not signs:
            raise DiagramError(f"crossing {k} has no sign")
        sign = signs.pop()
        classical[k] = [(idx, kind, sign) for idx, kind, _ in where]
    L = len(passages)

    # edge i+1 runs from passage i to passage i+1
    def e_in(idx):
        return (idx - 1) % L + 1

    def e_out(idx):
        return idx + 1

    raw = []
    for k in sorted(classical):
        where = classical[k]
        u = next(w for w in where if w[1] == "U")
        o = next(w for w in where if w[1] == "O")
        sign = u[2]
        ui, uo = e_in(u[0]), e_out(u[0])
        oi, oo = e_in(o[0]), e_out(o[0])
        if sign > 0:
            raw.append((CLASSICAL, [ui, oo, uo, oi]))
        else:
            raw.append((CLASSICAL, [ui, oi, uo, oo]))
    for k in sorted(virtual):
        (p1, _, s1), (p2, _, s2) = virtual[k]
        if s1 and s2 and s1 != s2:
            raise DiagramError(f"sign mismatch at virtual crossing {k}")
        if (s1 or s2) < 0:
            raw.append((VIRTUAL, [e_in(p1), e_in(p2), e_out(p1), e_out(p2)]))
        else:
            raw.append((VIRTUAL, [e_in(p1), e_out(p2), e_out(p1), e_in(p2)]))
    d = _orient(raw, name)
    if check_planar and not virtual and genus(d) != 0:
        raise DiagramError("Gauss code is not realizable in the plane; mark virtual crossings with V<k> tokens")
    return d


def genus(d):
    """Genus of the ribbon graph given by the crossings' cyclic slot order."""
    if not d.crossings:
        return 0
    where = {}
    for ci, c in enumerate(d.crossings):
        for si, e in enumerate(c.slots):
            where.setdefault(e, []).append((ci, si))

    def other_end(h):
        a, b = where[d.crossings[h[0]].slots[h[1]]]
        return b if a == h else a

    seen = set()
    faces = 0
    for ci in range(len(d.crossings)):
        for si in range(4):
            h = (ci, si)
            if h in seen:
                continue
            faces += 1
            while h not in seen:
                seen.add(h)
                x, y = other_end(h)
                h = (x, (y + 1) % 4)
    V = len(d.crossings)
    E = 2 * V
    # connected components of the underlying 4-valent graph
    parent = list(range(V))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, ((a, _), (b, _)) in where.items():
        parent[find(a)] = find(b)
    comps = len({find(x) for x in range(V)})
    chi = V - E + faces
    return (2 * comps - chi) // 2


# -- arcs and relations -------------------------------------------------------


@dataclass(frozen=True)
class ArcLabeling:
    mode: str
    n: int
    arc_of: dict

    def __getitem__(self, edge):
        return self.arc_of[edge]


def label_arcs(d, mode=CLASSICAL_ARCS):
    if mode not in (CLASSICAL_ARCS, VIRTUAL_SEMIARCS):
        raise ValueError(f"unknown arc mode {mode!r}")
    edges = d.edges
    if not edges:
        return ArcLabeling(mode, 1, {})
    parent = {e: e for e in edges}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for c in d.crossings:
        if c.is_classical:
            union(c.slots[1], c.slots[3])
        elif mode == CLASSICAL_ARCS:
            union(c.slots[0], c.slots[2])
            union(c.slots[1], c.slots[3])
    roots = sorted({find(e) for e in edges})
    number = {r: i + 1 for i, r in enumerate(roots)}
    return ArcLabeling(mode, len(roots), {e: number[find(e)] for e in edges})


def crossing_relations(d, labeling):
    """Relations in ▷ form, one per classical crossing.

    Positive crossing: ``u_in ▷ o = u_out``; negative: ``u_out ▷ o = u_in``.
    In semiarc mode each virtual crossing adds ``out = v(in)`` for both strands.
    """
    rels = []
    for c in d.crossings:
        if c.is_classical:
            o = labeling[c.slots[1]]
            a, b = labeling[c.under_in], labeling[c.under_out]
            if c.sign > 0:
                rels.append(Relation(Op(a, o), b))
            else:
                rels.append(Relation(Op(b, o), a))
        elif labeling.mode == VIRTUAL_SEMIARCS:
            rels.append(Relation(VMap(labeling[c.slots[0]]), labeling[c.slots[2]]))
            rels.append(Relation(VMap(labeling[c.over_in]), labeling[c.over_out]))
    return rels


# -- structural comparison ----------------------------------------------------


def _relabel(d, start_edges):
    """Renumber edges along each component, starting from the given edges."""
    new = {}
    k = 1
    for e in start_edges:
        while e not in new:
            new[e] = k
            k += 1
            e = d.successor[e]
    return sorted((c.kind, tuple(new[e] for e in c.slots), c.sign) for c in d.crossings)


def isomorphic(d1, d2):
    """Exact structural isomorphism: same crossings up to edge renaming."""
    if len(d1.crossings) != len(d2.crossings) or d1.components != d2.components:
        return False
    if not d1.crossings:
        return True
    c1 = d1.component_cycles()
    c2 = d2.component_cycles()
    if sorted(map(len, c1)) != sorted(map(len, c2)):
        return False
    target = _relabel(d1, [c[0] for c in c1])
    for perm in permutations(c2):
        if [len(c) for c in perm] != [len(c) for c in c1]:
            continue
        for starts in _start_choices(perm):
            if _relabel(d2, starts) == target:
                return True
    return False


def _start_choices(cycles):
    if not cycles:
        yield []
        return
    for e in cycles[0]:
        for rest in _start_choices(cycles[1:]):
            yield [e] + rest


def mirror(d):
    """Mirror image: every classical crossing changes sign."""
    raw = [(c.kind, [c.slots[0], c.slots[3], c.slots[2], c.slots[1]] if c.is_classical else list(c.slots))
           for c in d.crossings]
    return _orient(raw, d.name)


def unknot():
    return parse_pd("PD[]", name="0_1")


def from_spec(pd=None, gauss=None, name=None):
    if pd is not None:
        return parse_pd(pd, name)
    if gauss is not None:
        return parse_gauss(gauss, name)
    raise DiagramError("need a PD or Gauss code")
