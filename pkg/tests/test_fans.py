from fractions import Fraction

import pytest

from spherindex.datum import SphericalDatumK
from spherindex.errors import BudgetExceeded, NotConvex, NotValidated
from spherindex.fans import (
    Cone,
    Fan,
    cone_membership,
    dominates,
    fan_validate,
    is_complete_for,
    is_smooth,
    standard_fan,
    strata,
    weyl_saturate,
)
from spherindex.index import TitsIndex
from spherindex.restrict import restrict_datum, valuation_cone
from spherindex.rootsys import AmbientRootDatum

H = Fraction(1, 2)


def flip_matrix(n, pairs):
    perm = list(range(n))
    for a, b in pairs:
        perm[a], perm[b] = perm[b], perm[a]
    return [[int(perm[i] == j) for j in range(n)] for i in range(n)]


def e6_rd():
    ix = TitsIndex.of(
        AmbientRootDatum.of([("E", 6)]), [], [flip_matrix(6, [(0, 5), (2, 4)])]
    )
    d = SphericalDatumK.ambient(ix, [[1, 0, 1, 1, 1, 1], [0, 1, H, 1, H, 0]])
    return d, restrict_datum(d)


def rank1_rd():
    d = SphericalDatumK.abstract(1, [[2]], [], [[1]])
    return d, restrict_datum(d)


def a1a1_rd():
    d = SphericalDatumK.abstract(2, [[2, 0], [0, 2]], [], [[1, 0], [0, 1]])
    return d, restrict_datum(d)


def test_cone_canonical_ordering():
    assert Cone.of([[1, 0], [0, 1]]) == Cone.of([[0, 1], [1, 0]])


def test_fan_from_maximal_closes_faces():
    f = Fan.from_maximal([[[1, 0], [0, 1]]])
    dims = sorted(c.dim for c in f.cones)
    assert dims == [0, 1, 1, 2]


def test_fan_validate_clean():
    _, rd = e6_rd()
    f = standard_fan(rd)
    assert fan_validate(f, valuation_cone(rd)) == []


def test_fan_validate_flags_overlap():
    # two 2-dim cones overlapping in a wedge, not in a common face
    f = Fan.from_maximal([[[1, 0], [0, 1]], [[1, 1], [1, -1]]])
    issues = fan_validate(f)
    assert any(i.kind == "intersection_not_a_face" for i in issues)


def test_fan_validate_flags_primitivity_and_support():
    f = Fan.from_maximal([[[2, 0]]])
    issues = fan_validate(f)
    assert any(i.kind == "not_primitive" for i in issues)
    _, rd = a1a1_rd()
    zk = valuation_cone(rd)
    g = Fan.from_maximal([[[1, 0]]])  # sigma1 is positive on (1, 0)
    issues2 = fan_validate(g, zk)
    assert any(i.kind == "outside_support" for i in issues2)


def test_standard_fan_counts():
    _, rd1 = rank1_rd()
    assert len(standard_fan(rd1).cones) == 2
    _, rd2 = e6_rd()
    assert len(standard_fan(rd2).cones) == 4
    d3 = SphericalDatumK.abstract(
        3,
        [[2, 0, 0], [0, 2, 0], [0, 0, 2]],
        [],
        [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
    )
    rd3 = restrict_datum(d3)
    f3 = standard_fan(rd3)
    assert len(f3.cones) == 8
    from collections import Counter

    assert Counter(c.dim for c in f3.cones) == Counter({0: 1, 1: 3, 2: 3, 3: 1})


def test_standard_fan_requires_convex():
    d = SphericalDatumK.abstract(2, [[2, 0], [0, 2]], [], [[1, 0]])
    with pytest.raises(NotConvex):
        standard_fan(restrict_datum(d))


def test_standard_fan_complete():
    for mk in [rank1_rd, e6_rd, a1a1_rd]:
        _, rd = mk()
        f = standard_fan(rd)
        assert is_complete_for(f, valuation_cone(rd))


def test_single_ray_not_complete():
    _, rd = a1a1_rd()
    f = Fan.from_maximal([[[-1, 0]]])
    assert not is_complete_for(f, valuation_cone(rd))


def test_is_complete_requires_validation():
    _, rd = a1a1_rd()
    f = Fan.from_maximal([[[2, 0]]])
    with pytest.raises(NotValidated):
        is_complete_for(f, valuation_cone(rd))


def test_smoothness():
    f = Fan.from_maximal([[[1, 0], [0, 1]]])
    assert all(is_smooth(f).values())
    g = Fan.from_maximal([[[1, 0], [1, 2]]])
    flags = is_smooth(g)
    assert flags[Cone.of([[1, 0], [1, 2]])] is False
    assert flags[Cone.of([[1, 0]])] is True


def test_wonderful_iff_standard_fan_smooth():
    from spherindex.restrict import predicates

    for mk in [e6_rd, rank1_rd, a1a1_rd]:
        d, rd = mk()
        f = standard_fan(rd)
        assert all(is_smooth(f).values()) == predicates(d, rd)["k_wonderful"]
    # non-wonderful example: lattice Z, sigma_k = {2}, primitive root 1
    # with the lattice rescaled so sigma_pr does not span
    d2 = SphericalDatumK.abstract(2, [[2, 0], [0, 2]], [], [[1, 1]])
    rd2 = restrict_datum(d2)
    assert len(rd2.nk0_basis) == 1  # not convex, standard fan refused
    with pytest.raises(NotConvex):
        standard_fan(rd2)


def test_strata_standard_fan():
    d, rd = e6_rd()
    f = standard_fan(rd)
    sp = strata(f, rd)
    assert len(sp.nodes) == 4
    by_codim = {}
    for node in sp.nodes:
        by_codim.setdefault(node.codim, []).append(node)
    assert len(by_codim[0]) == 1 and len(by_codim[1]) == 2 and len(by_codim[2]) == 1
    open_node = by_codim[0][0]
    assert open_node.sigma_indices == (0, 1)
    assert open_node.rank == 2
    assert not open_node.horospherical
    closed = by_codim[2][0]
    assert closed.sigma_indices == ()
    assert closed.rank == 0
    assert closed.horospherical
    # J-labels of the two facets are the complementary singletons
    labels = sorted(n.sigma_indices for n in by_codim[1])
    assert labels == [(0,), (1,)]


def test_strata_localization_consistency():
    from spherindex.linalg import Lattice
    from spherindex.restrict import localize

    d, rd = e6_rd()
    f = standard_fan(rd)
    sp = strata(f, rd)
    for node in sp.nodes:
        loc = localize(rd, node.sigma_indices)
        assert loc.datum.rank == node.rank
        assert Lattice.from_rows(rd.rank, loc.xi_basis_in_parent) == Lattice.from_rows(
            rd.rank, node.lattice_basis
        )
        assert len(loc.datum.sigma_k) == len(node.sigma_indices)


def test_strata_poset_edges():
    _, rd = e6_rd()
    f = standard_fan(rd)
    sp = strata(f, rd)
    # boolean lattice on 2 atoms: 4 cover relations
    assert len(sp.edges) == 4
    for i, j in sp.edges:
        assert sp.nodes[i].codim + 1 == sp.nodes[j].codim


def test_dominates():
    f = Fan.from_maximal([[[1, 0], [0, 1]]])
    assert dominates(f, f)
    sub = Fan.from_maximal([[[1, 0], [1, 1]], [[1, 1], [0, 1]]])
    assert dominates(sub, f)
    assert not dominates(f, sub)
    trivial = Fan.from_maximal([])
    assert dominates(trivial, f)
    assert not dominates(f, trivial)


def test_cone_membership():
    _, rd = e6_rd()
    zk = valuation_cone(rd)
    assert cone_membership([0, 0], zk)
    for ray in zk.extremal_rays:
        assert cone_membership(ray, zk)
    for s in zk.inequalities:
        assert not cone_membership(s, zk)


def test_weyl_saturate_a1():
    _, rd = rank1_rd()
    f = standard_fan(rd)
    sat = weyl_saturate(f, rd)
    assert len(sat.cones) == 3  # two rays and the origin


def test_weyl_saturate_b2():
    _, rd = e6_rd()
    f = standard_fan(rd)
    sat = weyl_saturate(f, rd)
    maximal = sat.maximal_cones()
    assert len(maximal) == 8
    assert len([c for c in sat.cones if c.dim == 1]) == 8
    assert fan_validate(sat) == []
    # saturation of a complete fan is classically complete
    from spherindex.restrict import ValuationCone

    free = ValuationCone(inequalities=(), lineality=(), extremal_rays=())
    assert is_complete_for(sat, free)


def test_weyl_saturate_reflection_stable():
    from spherindex.fans import _reflection_on_dual
    from spherindex.linalg import vec_mat, fvec
    from spherindex.fans import _primitivize

    _, rd = e6_rd()
    sat = weyl_saturate(standard_fan(rd), rd)
    for s in rd.sigma_k:
        m = _reflection_on_dual(rd, s)
        imgs = {
            Cone.of([_primitivize(vec_mat(fvec(g), m)) for g in c.generators])
            for c in sat.cones
        }
        assert imgs == set(sat.cones)


def test_weyl_saturate_budget():
    _, rd = e6_rd()
    with pytest.raises(BudgetExceeded):
        weyl_saturate(standard_fan(rd), rd, cap=3)


def test_weyl_saturate_no_roots():
    d = SphericalDatumK.abstract(1, [[2]], [], [])
    rd = restrict_datum(d)
    f = Fan.from_maximal([[[1]], [[-1]]])
    assert weyl_saturate(f, rd) == f
