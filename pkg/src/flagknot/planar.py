"""Draw a signed Gauss code in the plane, adding virtual crossings where needed.

Classical crossings sit on the x-axis.  Each crossing's four half-edges
leave through ports NE, NW, SW, SE (counterclockwise, matching the slot
order), and every edge is drawn as a semicircle above or below the axis.
An edge that joins an upper port to a lower one detours to a private point
far to the right, where it crosses the axis.  Two semicircles on the same
side meet exactly when their endpoint intervals interleave; each meeting is
a virtual crossing.

The result is a Gauss code with ``V<k>`` tokens whose diagram has genus 0.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations, permutations, product

from .diagram import DiagramError, gauss_passages, genus, parse_gauss

# port offsets from the crossing position, in slot order
_PORTS = ((1, 1), (-1, 1), (-1, -1), (1, -1))  # (dx sign, side)


def _token(kind, k, sign):
    return f"{kind}{k}{'+' if sign > 0 else '-' if sign < 0 else ''}"


def planarize(code, search=True):
    """Return an equivalent Gauss code with explicit, planar virtual crossings.

    With ``search`` every placement order and port rotation of the
    crossings is tried and the drawing with the fewest virtual crossings
    wins (ties go to the first found).
    """
    passages = gauss_passages(code)
    if any(kind == "V" for kind, _, _ in passages):
        raise DiagramError("code already carries virtual crossings")
    d = parse_gauss(code, check_planar=False)
    if genus(d) == 0:
        return "".join(_token(*p) for p in passages)
    n = len(d.classical)
    if search:
        choices = product(permutations(range(n)), product(range(4), repeat=n))
    else:
        choices = [(tuple(range(n)), (0,) * n)]
    best = None
    for choice in choices:
        count = _count(_pieces(d, len(passages), *choice))
        if best is None or count < best[0]:
            best = (count, choice)
    hits = _draw(_pieces(d, len(passages), *best[1]), len(passages))
    out = []
    for i, p in enumerate(passages):
        out.append(_token(*p))
        for _, _, v, sign in sorted(hits[i + 1]):
            out.append(_token("V", v, sign))
    text = "".join(out)
    if genus(parse_gauss(text)) != 0:
        raise AssertionError("planarization produced a non-planar diagram")
    return text


def _pieces(d, L, placement, rotation):
    """Semicircles (edge, index along edge, side, x_from, x_to) of one drawing."""
    ports = {}
    for ci, c in enumerate(d.classical):
        x0 = 10 * placement[ci]
        for si, e in enumerate(c.slots):
            dx, side = _PORTS[(si + rotation[ci]) % 4]
            # nudge ports apart so that no three semicircles share a point
            x = (x0 + dx) * 10000 + dx * (ci * 4 + si + 1)
            end = "head" if si in _heads(c) else "tail"
            ports[(e, end)] = (x, side)

    far = 10 * len(d.classical) + 10
    pieces = []
    for e in range(1, L + 1):
        x1, s1 = ports[(e, "tail")]
        x2, s2 = ports[(e, "head")]
        if s1 == s2:
            pieces.append((e, 0, s1, x1, x2))
        else:
            xm = (far + e) * 10000 + e
            pieces.append((e, 0, s1, x1, xm))
            pieces.append((e, 1, s2, xm, x2))
    return pieces


def _interleaved(a, b):
    if a[2] != b[2] or a[0] == b[0]:
        return False
    lo1, hi1 = sorted(a[3:])
    lo2, hi2 = sorted(b[3:])
    return lo1 < lo2 < hi1 < hi2 or lo2 < lo1 < hi2 < hi1


def _count(pieces):
    return sum(_interleaved(a, b) for a, b in combinations(pieces, 2))


def _draw(pieces, L):
    """Virtual crossings of a drawing, as edge -> [(piece, along, id, sign)]."""
    hits = {e: [] for e in range(1, L + 1)}
    points = set()
    vid = 0
    for i in range(len(pieces)):
        for j in range(i + 1, len(pieces)):
            a, b = pieces[i], pieces[j]
            if not _interleaved(a, b):
                continue
            lo1, hi1 = (Fraction(v) for v in sorted(a[3:]))
            lo2, hi2 = (Fraction(v) for v in sorted(b[3:]))
            m1, r1 = (lo1 + hi1) / 2, (hi1 - lo1) / 2
            m2, r2 = (lo2 + hi2) / 2, (hi2 - lo2) / 2
            x = (r1 * r1 - r2 * r2 + m2 * m2 - m1 * m1) / (2 * (m2 - m1))
            y2 = r1 * r1 - (x - m1) ** 2
            if (x, y2, a[2]) in points:
                raise DiagramError("degenerate drawing: three edges meet at one point")
            points.add((x, y2, a[2]))
            vid += 1
            # the piece on the earlier edge plays the under role for the sign
            first, second = (a, b) if a[0] < b[0] else (b, a)
            sa = 1 if first[4] > first[3] else -1
            sb = 1 if second[4] > second[3] else -1
            mf = (first[3] + first[4]) / 2
            ms = (second[3] + second[4]) / 2
            cross = sa * sb * first[2] * (1 if ms > mf else -1)
            sign = 1 if cross < 0 else -1
            for p in (a, b):
                along = x if p[4] > p[3] else -x
                hits[p[0]].append((p[1], along, vid, sign))
    return hits


def _heads(c):
    """Slot indices of ``c`` where an edge ends (incoming half-edges)."""
    return {0, 3} if c.sign > 0 else {0, 1}
