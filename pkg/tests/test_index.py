from fractions import Fraction

import pytest

from spherindex.errors import BudgetExceeded
from spherindex.index import (
    StarAction,
    TitsIndex,
    ambient_roots,
    res_A,
    restricted_root_system,
    restricted_simple_roots,
    split_subspace,
)
from spherindex.linalg import Lattice, image_lattice, rank
from spherindex.rootsys import AmbientRootDatum


def flip_matrix(n: int, pairs):
    perm = list(range(n))
    for a, b in pairs:
        perm[a], perm[b] = perm[b], perm[a]
    return [[int(perm[i] == j) for j in range(n)] for i in range(n)]


def split_index(fam, n):
    amb = AmbientRootDatum.of([(fam, n)])
    return TitsIndex.of(amb, [], [])


def c3_rank_one_index():
    # compact a1, a3 inside type C3
    amb = AmbientRootDatum.of([("C", 3)])
    return TitsIndex.of(amb, [0, 2], [])


def e6_flip_index():
    amb = AmbientRootDatum.of([("E", 6)])
    return TitsIndex.of(amb, [], [flip_matrix(6, [(0, 5), (2, 4)])])


def a_flip_index(n):
    # type A_{2n-1} with the diagram flip, no compact roots
    amb = AmbientRootDatum.of([("A", 2 * n - 1)])
    pairs = [(i, 2 * n - 2 - i) for i in range(n - 1)]
    return TitsIndex.of(amb, [], [flip_matrix(2 * n - 1, pairs)])


def test_split_index_whole_space():
    ix = split_index("A", 3)
    v = split_subspace(ix)
    assert len(v) == 3 and rank(v) == 3
    assert ix.violations() == []


def test_c3_index_rank_one():
    ix = c3_rank_one_index()
    assert ix.violations() == []
    v = split_subspace(ix)
    assert len(v) == 1


def test_e6_flip_rank_four():
    ix = e6_flip_index()
    assert ix.violations() == []
    assert len(split_subspace(ix)) == 4


def test_res_kills_compact_roots():
    ix = c3_rank_one_index()
    assert all(x == 0 for x in res_A(ix, [1, 0, 0]))
    assert all(x == 0 for x in res_A(ix, [0, 0, 1]))
    assert any(x != 0 for x in res_A(ix, [0, 1, 0]))


def test_res_constant_on_star_orbits():
    ix = e6_flip_index()
    assert res_A(ix, [1, 0, 0, 0, 0, 0]) == res_A(ix, [0, 0, 0, 0, 0, 1])
    assert res_A(ix, [0, 0, 1, 0, 0, 0]) == res_A(ix, [0, 0, 0, 0, 1, 0])
    g = ix.star.generators[0]
    for chi in ambient_roots(ix.ambient)[:20]:
        from spherindex.linalg import vec_mat

        assert res_A(ix, chi) == res_A(ix, vec_mat(chi, g))


def test_e6_restricted_simple_roots_f4():
    ix = e6_flip_index()
    srs = restricted_simple_roots(ix)
    assert srs.types == (("F", 4),)
    assert srs.fibers == ((1,), (3,), (2, 4), (0, 5))


def test_a3_flip_restricted_c2():
    ix = a_flip_index(2)
    srs = restricted_simple_roots(ix)
    assert srs.types in ((("B", 2),), (("C", 2),))
    assert sorted(srs.fibers) == [(0, 2), (1,)]
    phi = restricted_root_system(ix)
    assert phi.indivisible_count == 8
    assert phi.reduced


def test_split_restriction_is_identity_like():
    ix = split_index("A", 2)
    srs = restricted_simple_roots(ix)
    assert len(srs.roots) == 2
    assert srs.types == (("A", 2),)
    phi = restricted_root_system(ix)
    assert sum(m for _, m in phi.multiplicities) == 6
    assert all(m == 1 for _, m in phi.multiplicities)


def test_e6_restricted_system_f4_indivisible():
    ix = e6_flip_index()
    phi = restricted_root_system(ix)
    assert phi.indivisible_types == (("F", 4),)
    assert phi.indivisible_count == 48


def test_restricted_roots_are_integer_combinations_of_s_k():
    for ix in [c3_rank_one_index(), e6_flip_index(), a_flip_index(2)]:
        srs = restricted_simple_roots(ix)
        phi = restricted_root_system(ix)
        for r, _ in phi.multiplicities:
            from spherindex.linalg import solve_left

            coords = solve_left(srs.roots, r)
            assert coords is not None
            assert all(x.denominator == 1 for x in coords)
            assert all(x >= 0 for x in coords) or all(x <= 0 for x in coords)


def test_res_surjects_root_lattice_onto_s_k_lattice():
    for ix in [e6_flip_index(), a_flip_index(2), c3_rank_one_index()]:
        n = ix.ambient.dim
        m = tuple(res_A(ix, [int(i == j) for j in range(n)]) for i in range(n))
        srs = restricted_simple_roots(ix)
        img = image_lattice(m, Lattice.standard(n))
        assert img == Lattice.from_rows(len(srs.roots[0]), srs.roots)


def test_star_action_finite_group():
    s = StarAction.of([flip_matrix(2, [(0, 1)])], 2)
    assert len(s.elements()) == 2
    shear = StarAction.of([[[1, 1], [0, 1]]], 2)
    with pytest.raises(BudgetExceeded):
        shear.elements(cap=50)


def test_violations_reported():
    amb = AmbientRootDatum.of([("A", 2)])
    bad = TitsIndex.of(amb, [0], [flip_matrix(2, [(0, 1)])])
    msgs = bad.violations()
    assert any("compact" in m for m in msgs)
    ugly = TitsIndex.of(amb, [], [[[1, 1], [0, 1]]])
    assert any("permute" in m for m in ugly.violations())


def test_dim_bookkeeping():
    # dim V = number of star orbits on S outside the compact set, for these
    assert len(split_subspace(c3_rank_one_index())) == 1
    assert len(split_subspace(e6_flip_index())) == 4
    assert len(split_subspace(a_flip_index(3))) == 3
