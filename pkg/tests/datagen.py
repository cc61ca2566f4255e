"""Seeded generators of random small spherical data.

All constructions are geometric in style: split data whose spherical roots
form a finite-type base inside an ambient root system, data folded by an
outer involution of the diagram, and swap-folded abstract data modelling a
group over a quadratic extension.  Arbitrary validated abstract data need
not satisfy the structural identities the engines enforce, so the corpus
sticks to these families.
"""

import random

from spherindex.datum import SphericalDatumK, compact_split
from spherindex.errors import SpherindexError
from spherindex.index import TitsIndex
from spherindex.restrict import restrict_datum
from spherindex.rootsys import (
    AmbientRootDatum,
    RootBase,
    cartan_matrix,
    classify,
    generate_roots,
)

AMBIENT_CHOICES = [
    ("A", 1), ("A", 2), ("A", 3), ("A", 4),
    ("B", 2), ("B", 3), ("B", 4),
    ("C", 3), ("C", 4),
    ("D", 4),
    ("F", 4), ("G", 2),
]


def flip_matrix(n, pairs):
    perm = list(range(n))
    for a, b in pairs:
        perm[a], perm[b] = perm[b], perm[a]
    return [[int(perm[i] == j) for j in range(n)] for i in range(n)]


def _positive_base(rng: random.Random, amb: AmbientRootDatum, size: int):
    """A random finite-type base drawn from the positive ambient roots."""
    form = amb.form()
    positive = [r for r in generate_roots(RootBase.from_vectors(
        [[int(i == j) for j in range(amb.dim)] for i in range(amb.dim)], form))
        if all(x >= 0 for x in r)]
    for _ in range(60):
        picks = rng.sample(positive, min(size, len(positive)))
        try:
            base = RootBase.from_vectors(picks, form)
            classify(cartan_matrix(base))
        except SpherindexError:
            continue
        return picks
    return [positive[0]]


def split_datum(rng: random.Random):
    fam, n = rng.choice(AMBIENT_CHOICES)
    amb = AmbientRootDatum.of([(fam, n)])
    ix = TitsIndex.of(amb, [], [])
    sigma = _positive_base(rng, amb, rng.randint(1, min(4, n)))
    from math import gcd

    xi = None
    if rng.random() < 0.3 and all(gcd(*map(int, s)) == 1 for s in sigma):
        # enlarge the weight lattice by central directions
        xi = [[int(i == j) for j in range(n)] for i in range(n)]
    return SphericalDatumK.ambient(ix, sigma, xi_rows=xi)


def folded_datum(rng: random.Random):
    """Quasi-split datum folded by the canonical diagram involution."""
    fam, n, pairs = rng.choice(
        [("A", 2, [(0, 1)]), ("A", 3, [(0, 2)]), ("A", 4, [(0, 3), (1, 2)]),
         ("D", 4, [(2, 3)]), ("E", 6, [(0, 5), (2, 4)])]
    )
    amb = AmbientRootDatum.of([(fam, n)])
    star = flip_matrix(n, pairs)
    perm = {a: b for a, b in pairs} | {b: a for a, b in pairs}
    orbits = sorted({tuple(sorted({i, perm.get(i, i)})) for i in range(n)})
    chosen = rng.sample(orbits, rng.randint(1, min(4, len(orbits))))
    sigma = []
    for orbit in chosen:
        row = [0] * n
        for i in orbit:
            row[i] = 1
        sigma.append(row)
    ix = TitsIndex.of(amb, [], [star])
    return SphericalDatumK.ambient(ix, sigma)


def swap_datum(rng: random.Random):
    """Two copies of a split datum glued by the swap, in abstract form."""
    inner = split_datum(rng)
    m = inner.m
    f = inner.pairing
    pairing = [
        [f[i % m][j % m] if (i < m) == (j < m) else 0 for j in range(2 * m)]
        for i in range(2 * m)
    ]
    swap = [[int(j == (i + m) % (2 * m)) for j in range(2 * m)] for i in range(2 * m)]
    zero = [0] * m
    sigma = [list(s) + zero for s in inner.sigma]
    sigma += [zero + list(s) for s in inner.sigma]
    return SphericalDatumK.abstract(2 * m, pairing, [swap], sigma)


def to_abstract(d: SphericalDatumK) -> SphericalDatumK:
    """Forget the ambient group, keeping the normalized lattice data."""
    split = compact_split(d)
    return SphericalDatumK.abstract(
        d.m,
        [list(r) for r in d.pairing],
        [[list(r) for r in g] for g in d.star_xi],
        [list(s) for s in d.sigma],
        sigma0=list(split.sigma0),
    )


GENERATORS = [split_datum, folded_datum, swap_datum]


def random_datum(rng: random.Random) -> SphericalDatumK:
    return rng.choice(GENERATORS)(rng)


def random_data(seed: int, count: int):
    rng = random.Random(seed)
    return [random_datum(rng) for _ in range(count)]


def random_convex_data(seed: int, count: int):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        d = random_datum(rng)
        if not restrict_datum(d).nk0_basis:
            out.append(d)
    return out
