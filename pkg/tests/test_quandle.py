from itertools import permutations, product

import numpy as np
import pytest

from flagknot.quandle import (
    AxiomSet, FiniteQuandle, alexander_quandle, are_isomorphic, brute_force_isomorphic, core_cyclic,
    dihedral_twisted, find_isomorphism, is_latin, trivial, verify_axioms,
)

THREE = [[1, 3, 2], [3, 2, 1], [2, 1, 3]]
Z3 = [[0, 2, 1], [2, 1, 0], [1, 0, 2]]
Z4 = [[0, 2, 0, 2], [3, 1, 3, 1], [2, 0, 2, 0], [1, 3, 1, 3]]
FIG8 = [[1, 3, 5, 2, 4], [5, 2, 4, 1, 3], [4, 1, 3, 5, 2], [3, 5, 2, 4, 1], [2, 4, 1, 3, 5]]


def naive_axioms(T, ax):
    """Loop-by-loop check on a 0-based list-of-lists table."""
    n = len(T)
    r = range(n)
    op = lambda x, y: T[x][y]
    if any(op(x, x) != x for x in r):
        return False
    if any(sorted(T[x][y] for x in r) != list(r) for y in r):
        return False
    if any(op(op(x, y), z) != op(op(x, z), op(y, z)) for x, y, z in product(r, r, r)):
        return False
    if ax.involutory and any(op(op(x, y), y) != x for x, y in product(r, r)):
        return False
    if ax.n_quandle:
        for x, y in product(r, r):
            z = x
            for _ in range(ax.n_quandle):
                z = op(z, y)
            if z != x:
                return False
    if ax.abelian and any(op(op(x, y), op(z, w)) != op(op(x, z), op(y, w)) for x, y, z, w in product(r, repeat=4)):
        return False
    if ax.anti_abelian and any(op(op(x, y), op(z, w)) != op(op(w, y), op(z, x))
                               for x, y, z, w in product(r, repeat=4)):
        return False
    if ax.left_distributive and any(op(x, op(y, z)) != op(op(x, y), op(x, z)) for x, y, z in product(r, r, r)):
        return False
    if ax.commutative_operator and any(op(x, op(y, z)) != op(x, op(z, y)) for x, y, z in product(r, r, r)):
        return False
    if ax.latin and any(sorted(T[x]) != list(r) for x in r):
        return False
    return True


def test_alexander_quandle_z3_table():
    assert alexander_quandle(3, 2).matrix() == [[a + 1 for a in row] for row in Z3]
    assert is_latin(alexander_quandle(3, 2))


def test_alexander_quandle_z4_table():
    q = alexander_quandle(4, 3)
    assert q.matrix() == [[a + 1 for a in row] for row in Z4]
    assert not is_latin(q)
    assert not verify_axioms(q, AxiomSet(latin=True))
    assert verify_axioms(q)


def test_alexander_quandle_needs_unit():
    with pytest.raises(ValueError):
        alexander_quandle(4, 2)


@pytest.mark.parametrize("n", [1, 2, 5, 7])
def test_t_one_is_trivial(n):
    assert alexander_quandle(n, 1).matrix() == trivial(n).matrix()


def test_core_cyclic():
    assert core_cyclic(3).matrix() == THREE
    assert core_cyclic(1).matrix() == [[1]]
    assert core_cyclic(2).matrix() == trivial(2).matrix()
    for n in range(1, 8):
        assert verify_axioms(core_cyclic(n), AxiomSet(involutory=True))


def test_dihedral_twisted_is_dual_convention():
    # 2x - y is the transpose of 2y - x
    for n in (3, 5, 7):
        assert np.array_equal(dihedral_twisted(n).table, core_cyclic(n).table.T)


def test_three_element_table():
    q = FiniteQuandle.from_matrix(THREE)
    assert verify_axioms(q, AxiomSet(involutory=True, anti_abelian=True))
    assert is_latin(q)


def test_one_element_satisfies_everything():
    ax = AxiomSet(involutory=True, abelian=True, anti_abelian=True, left_distributive=True,
                  commutative_operator=True, latin=True, n_quandle=5)
    assert verify_axioms(trivial(1), ax)
    assert is_latin(trivial(1))


def test_figure8_table_axioms():
    q = FiniteQuandle.from_matrix(FIG8)
    assert verify_axioms(q, AxiomSet(involutory=True))
    assert verify_axioms(q, AxiomSet(involutory=True, abelian=True))
    assert np.array_equal(q.dual(), q.table)


def test_n_quandle_two_is_involutory():
    assert AxiomSet(n_quandle=2) == AxiomSet(involutory=True)
    assert AxiomSet.parse("n-quandle=2") == AxiomSet.parse("involutory")
    with pytest.raises(ValueError):
        AxiomSet(n_quandle=1)
    with pytest.raises(ValueError):
        AxiomSet.parse("idempotent")


def small_quandles():
    out = []
    for n in range(1, 7):
        out.append(core_cyclic(n))
        out.append(trivial(n))
        for t in range(1, n):
            try:
                out.append(alexander_quandle(n, t))
            except ValueError:
                pass
    return out


AXIOM_SETS = [
    AxiomSet(), AxiomSet(involutory=True), AxiomSet(abelian=True), AxiomSet(anti_abelian=True),
    AxiomSet(left_distributive=True), AxiomSet(commutative_operator=True), AxiomSet(latin=True),
    AxiomSet(n_quandle=3), AxiomSet(n_quandle=4),
]


@pytest.mark.parametrize("ax", AXIOM_SETS, ids=str)
def test_verify_axioms_matches_naive_loops(ax):
    for q in small_quandles():
        assert verify_axioms(q, ax) == naive_axioms(q.table.tolist(), ax), (q.matrix(), ax)


def test_verify_axioms_rejects_non_quandles():
    assert not verify_axioms(FiniteQuandle.from_matrix([[1, 2], [1, 2]]))  # columns not bijective
    assert not verify_axioms(FiniteQuandle.from_matrix([[2, 1], [1, 2]]))  # not idempotent
    # idempotent with bijective columns but not self-distributive
    bad = FiniteQuandle.from_matrix([[1, 1, 1], [3, 2, 3], [2, 3, 2]])
    assert not naive_axioms(bad.table.tolist(), AxiomSet())
    assert not verify_axioms(bad)


def test_virtual_automorphism_checked():
    good = FiniteQuandle.from_matrix(THREE, v=[2, 1, 3])
    assert verify_axioms(good, AxiomSet(involutory=True, anti_abelian=True))
    # a 3-cycle commutes with the core but is not an involution
    cyc = FiniteQuandle.from_matrix(THREE, v=[2, 3, 1])
    assert verify_axioms(cyc)
    assert not verify_axioms(cyc, AxiomSet(involutory=True))
    # every permutation is an automorphism of a trivial quandle
    assert verify_axioms(FiniteQuandle.from_matrix(trivial(2).matrix(), v=[2, 1]))


def test_iso_three_vs_core():
    assert are_isomorphic(FiniteQuandle.from_matrix(THREE), core_cyclic(3))
    assert brute_force_isomorphic(FiniteQuandle.from_matrix(THREE), core_cyclic(3))


def test_iso_cardinality():
    assert not are_isomorphic(FiniteQuandle.from_matrix(THREE), trivial(1))


def test_iso_alexander_5():
    a, b = alexander_quandle(5, 2), alexander_quandle(5, 3)
    assert are_isomorphic(a, b) == brute_force_isomorphic(a, b)


def test_iso_respects_v():
    a = FiniteQuandle.from_matrix(THREE, v=[2, 1, 3])
    b = FiniteQuandle.from_matrix(THREE, v=[1, 3, 2])
    c = FiniteQuandle.from_matrix(THREE, v=[1, 2, 3])
    assert are_isomorphic(a, b)
    assert not are_isomorphic(a, c)
    assert brute_force_isomorphic(a, b) and not brute_force_isomorphic(a, c)


def relabel(q, perm):
    n = q.n
    p = np.asarray(perm)
    T = np.empty_like(q.table)
    for x in range(n):
        for y in range(n):
            T[p[x], p[y]] = p[q.table[x, y]]
    v = None
    if q.v is not None:
        v = np.empty_like(q.v)
        v[p] = p[q.v]
    return FiniteQuandle(T, v)


@pytest.mark.parametrize("seed", range(10))
def test_iso_finds_random_relabelings(seed):
    rng = np.random.default_rng(seed)
    pool = [q for q in small_quandles() if q.n >= 3]
    q = pool[seed % len(pool)]
    perm = rng.permutation(q.n)
    r = relabel(q, perm)
    phi = find_isomorphism(q, r)
    assert phi is not None
    phi = np.array([phi[x] for x in range(q.n)])
    assert np.array_equal(phi[q.table], r.table[phi[:, None], phi[None, :]])


def test_iso_agrees_with_brute_force_on_pairs():
    qs = [q for q in small_quandles() if q.n <= 5]
    for a, b in product(qs, qs):
        if a.n == b.n:
            assert are_isomorphic(a, b) == brute_force_isomorphic(a, b)


def test_brute_force_is_exhaustive():
    # sanity: the oracle itself tries every bijection
    q = core_cyclic(4)
    hits = 0
    for p in permutations(range(4)):
        hits += relabel(q, p).matrix() == q.matrix()
    assert hits >= 1 and brute_force_isomorphic(q, q)


def test_json_round_trip():
    q = FiniteQuandle.from_matrix(THREE, v=[2, 1, 3])
    r = FiniteQuandle.from_json(q.to_json())
    assert r.matrix() == THREE and r.v_list() == [2, 1, 3]
    assert "| 2" in q.render().splitlines()[0]
