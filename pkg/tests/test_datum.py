from fractions import Fraction

import pytest

from spherindex.datum import (
    SphericalDatumK,
    compact_split,
    is_valid,
    support,
    validate,
)
from spherindex.errors import (
    DatumConstructionError,
    InternalInconsistency,
    NegativeCoefficient,
)
from spherindex.index import TitsIndex
from spherindex.rootsys import AmbientRootDatum

H = Fraction(1, 2)


def flip_matrix(n, pairs):
    perm = list(range(n))
    for a, b in pairs:
        perm[a], perm[b] = perm[b], perm[a]
    return [[int(perm[i] == j) for j in range(n)] for i in range(n)]


def sp42_datum():
    # type C3, compact a1 and a3, spherical roots a1+a3 and a2
    ix = TitsIndex.of(AmbientRootDatum.of([("C", 3)]), [0, 2], [])
    return SphericalDatumK.ambient(ix, [[1, 0, 1], [0, 1, 0]])


def e6_datum():
    ix = TitsIndex.of(
        AmbientRootDatum.of([("E", 6)]), [], [flip_matrix(6, [(0, 5), (2, 4)])]
    )
    sigma = [[1, 0, 1, 1, 1, 1], [0, 1, H, 1, H, 0]]
    return SphericalDatumK.ambient(ix, sigma)


def su22_datum():
    ix = TitsIndex.of(AmbientRootDatum.of([("A", 3)]), [], [flip_matrix(3, [(0, 2)])])
    return SphericalDatumK.ambient(ix, [[1, 1, 1]])


def u11_datum(**kw):
    return SphericalDatumK.abstract(
        2, [[1, 0], [0, 1]], [[[0, -1], [-1, 0]]], [[1, -1]], **kw
    )


def test_support():
    assert support([1, 0, 1]) == (0, 2)
    assert support([0, 1, H, 1, H, 0]) == (1, 2, 3, 4)
    assert support([0, 0]) == ()
    with pytest.raises(NegativeCoefficient):
        support([1, -1])


def test_compact_split_sp42():
    split = compact_split(sp42_datum())
    assert split.sigma0 == (0,)
    assert split.noncompact == (1,)


def test_compact_split_e6_empty():
    split = compact_split(e6_datum())
    assert split.sigma0 == ()
    assert split.noncompact == (0, 1)


def test_compact_split_no_compact_roots():
    split = compact_split(su22_datum())
    assert split.sigma0 == ()


def test_compact_split_inconsistent():
    # a1 compact but sigma = a1 + a2 has noncompact support and zero
    # restriction cannot happen; instead take sigma supported in S0 whose
    # restriction is nonzero: impossible by construction, so build the
    # reverse: compact set {a2} with sigma = a1 + 2a2 + a3 in A3 restricted
    ix = TitsIndex.of(AmbientRootDatum.of([("A", 3)]), [0, 2], [])
    # a1 + a3 has support inside S0 = {a1, a3} and restricts to zero: fine;
    # a2 + a1 has mixed support and nonzero restriction: fine.  To force a
    # mismatch use an abstract-style trick: sigma = a1 - a3 is killed by
    # res but its support computation sees positive and negative parts.
    d = SphericalDatumK.ambient(ix, [[1, 0, -1]])
    with pytest.raises((InternalInconsistency, NegativeCoefficient)):
        compact_split(d)


def test_validate_e6_all_pass():
    items = validate(e6_datum())
    assert is_valid(items)
    assert all(it.passed for it in items)


def test_validate_sp42_all_pass():
    items = validate(sp42_datum())
    assert is_valid(items)


def test_validate_u11_abstract():
    d = u11_datum()
    items = validate(d)
    assert is_valid(items)


def test_opposition_check_fails_on_asymmetric_compact_set():
    # A3-type spherical roots with only the first one compact: -w0 swaps
    # the outer roots, so the compact set is not opposition-stable
    ix = TitsIndex.of(AmbientRootDatum.of([("A", 3)]), [0], [])
    d = SphericalDatumK.ambient(ix, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    items = {it.name: it for it in validate(d)}
    assert not items["opposition_stable"].passed


def test_opposition_check_passes_on_symmetric_compact_set():
    ix = TitsIndex.of(AmbientRootDatum.of([("A", 3)]), [0, 2], [])
    d = SphericalDatumK.ambient(ix, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    items = {it.name: it for it in validate(d)}
    assert items["opposition_stable"].passed
    assert items["a_n_divisibility"].passed  # d = 2 divides 4


def test_an_lint_flags_bad_pattern():
    # noncompact positions {1} in A3 are not of the divisor form
    ix = TitsIndex.of(AmbientRootDatum.of([("A", 3)]), [1, 2], [])
    d = SphericalDatumK.ambient(ix, [[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    items = {it.name: it for it in validate(d)}
    # the compact set {2,3} is not opposition stable either; lint itself:
    assert items["a_n_divisibility"].severity == "warning"
    assert not items["a_n_divisibility"].passed


def test_star_permutation_check():
    ix = TitsIndex.of(AmbientRootDatum.of([("A", 3)]), [], [flip_matrix(3, [(0, 2)])])
    # the flip sends a1 + 2a3 to 2a1 + a3, which is not a spherical root
    d = SphericalDatumK.ambient(ix, [[1, 0, 2]], xi_rows=[[1, 0, 0], [0, 0, 1]])
    items = {it.name: it for it in validate(d)}
    assert not items["star_permutes_roots"].passed


def test_primitivity_check():
    ix = TitsIndex.of(AmbientRootDatum.of([("A", 1)]), [], [])
    d = SphericalDatumK.ambient(ix, [[2]], xi_rows=[[1]])
    items = {it.name: it for it in validate(d)}
    assert not items["roots_primitive_in_lattice"].passed


def test_sp_checks():
    # S^(p) = {a1} with star flipping 1 and 3 is not star-stable
    ix = TitsIndex.of(AmbientRootDatum.of([("A", 3)]), [], [flip_matrix(3, [(0, 2)])])
    d = SphericalDatumK.ambient(ix, [[1, 1, 1]], sp=[0])
    items = {it.name: it for it in validate(d)}
    assert not items["sp_star_stable"].passed
    # adjacent S^(p) and S0 roots sit in one connected component
    ix2 = TitsIndex.of(AmbientRootDatum.of([("A", 3)]), [1], [])
    d2 = SphericalDatumK.ambient(ix2, [[1, 1, 0]], sp=[0])
    items2 = {it.name: it for it in validate(d2)}
    assert not items2["sp_compact_component_split"].passed


def test_construction_errors():
    ix = TitsIndex.of(AmbientRootDatum.of([("A", 2)]), [], [])
    with pytest.raises(DatumConstructionError):
        SphericalDatumK.ambient(ix, [[1, 0, 0]])  # wrong length
    with pytest.raises(DatumConstructionError):
        # root outside the span of the declared lattice
        SphericalDatumK.ambient(ix, [[1, 1]], xi_rows=[[1, -1]])
    with pytest.raises(DatumConstructionError):
        SphericalDatumK.abstract(2, [[1, 2], [0, 1]], [], [[1, 0]])  # asymmetric


def test_star_orbits():
    d = e6_datum()
    assert d.star_orbit_of_root(0) == (0,)
    assert d.star_orbit_of_root(1) == (1,)


def test_validation_is_deterministic():
    d = e6_datum()
    assert validate(d) == validate(d)
