"""Lattice shadow of the boundary degeneration construction.

For a variety with weight lattice Xi and quotient spherical roots Sigma,
the degeneration space has weight lattice xiZ = {(chi, eta) : chi + eta in
Z Sigma} inside Xi + Xi, carrying the antidiagonal embedding and the sum
map as an exact sequence.  The boundary cone c_bd is the antidominant cone
of Sigma lifted through the section of the sum map.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import NotAFace, NotIndependent, NotSublattice
from .fans import Cone, _primitivize
from .linalg import (
    Lattice,
    Mat,
    Vec,
    dot,
    fmat,
    fvec,
    identity,
    rank,
    smith_normal_form,
    solve_left,
    vec_mat,
)


@dataclass(frozen=True)
class DegenerationDatum:
    xi: Lattice
    gamma: Lattice  # lattice spanned by sigma_aut inside xi
    sigma: Mat  # the quotient spherical roots, xi-ambient coordinates
    xiZ: Lattice  # sublattice of xi + xi
    delta_minus: Mat  # chi -> (chi, -chi), as a row-action matrix
    beta: Mat  # (chi, eta) -> chi + eta
    c_bd: Cone  # boundary cone in the dual coordinates of the xiZ basis

    @property
    def rank(self) -> int:
        return self.xi.rank


def build_degeneration(xi: Lattice, sigma_aut) -> DegenerationDatum:
    sigma = fmat(sigma_aut)
    if sigma and rank(sigma) != len(sigma):
        raise NotIndependent("quotient spherical roots are linearly dependent")
    for s in sigma:
        if not xi.contains(s):
            raise NotSublattice("quotient spherical root outside the weight lattice")
    n = xi.ambient_rank
    gamma = Lattice.from_rows(n, sigma) if sigma else Lattice(n, (), 1)

    # xiZ is generated by the antidiagonal copy of xi and the graph of gamma
    gens = []
    for row in xi.rows_q():
        gens.append(tuple(row) + tuple(-x for x in row))
    for s in sigma:
        gens.append(tuple(fvec(s)) + tuple(fvec([0] * n)))
    xiZ = Lattice.from_rows(2 * n, gens)

    ident = fmat(identity(n))
    delta_minus = tuple(
        tuple(ident[i]) + tuple(-x for x in ident[i]) for i in range(n)
    )
    beta = tuple(tuple(ident[i]) for i in range(n)) + tuple(
        tuple(ident[i]) for i in range(n)
    )
    _check_exactness(xi, gamma, xiZ, delta_minus, beta)

    # boundary cone: the antidominant cone of sigma on the Y side, pulled
    # back through the section eta -> (0, eta) of the sum map and written in
    # coordinates dual to the xiZ basis
    rays = []
    if sigma:
        gram = tuple(tuple(dot(a, b) for b in sigma) for a in sigma)
        from .linalg import inverse

        ginv = inverse(gram)
        for j in range(len(sigma)):
            # -omega_j: dot-dual basis vector of sigma inside its span
            w = tuple(
                -sum(ginv[t][j] * sigma[t][i] for t in range(len(sigma)))
                for i in range(n)
            )
            # dual map: the coordinate of beta*(w) against a basis vector b
            # of xiZ is the pairing of beta(b) with w
            ray = tuple(
                dot(vec_mat(b, beta), fvec(w)) for b in xiZ.rows_q()
            )
            rays.append(_primitivize(ray))
    c_bd = Cone.of(rays)
    dd = DegenerationDatum(
        xi=xi,
        gamma=gamma,
        sigma=sigma,
        xiZ=xiZ,
        delta_minus=delta_minus,
        beta=beta,
        c_bd=c_bd,
    )
    _check_cone_in_valuation_cone(dd)
    return dd


def _check_exactness(xi, gamma, xiZ, delta_minus, beta):
    n = xi.ambient_rank
    # delta_minus maps xi into xiZ and beta(delta_minus(chi)) = 0
    for row in xi.rows_q():
        img = vec_mat(row, delta_minus)
        assert xiZ.contains(img), "antidiagonal image left the big lattice"
        assert all(x == 0 for x in vec_mat(img, beta)), "composite map is nonzero"
    # beta surjects xiZ onto gamma
    images = [vec_mat(row, beta) for row in xiZ.rows_q()]
    img_lattice = Lattice.from_rows(n, [r for r in images if any(r)]) if any(
        any(r) for r in images
    ) else Lattice(n, (), 1)
    if img_lattice != gamma:
        raise NotSublattice("sum map does not surject onto the root lattice")
    # kernel of beta inside xiZ equals the antidiagonal image (rank check)
    d, _, _ = smith_normal_form(
        [[int(x) for x in vec_mat(row, beta)] for row in xiZ.basis]
    ) if xiZ.basis else ([], [], [])
    beta_rank = sum(1 for i in range(min(len(d), len(d[0]) if d else 0)) if d[i][i] != 0)
    assert xiZ.rank - beta_rank == xi.rank, "exact sequence rank mismatch"


def _check_cone_in_valuation_cone(dd: DegenerationDatum):
    # Sigma_k(Z) = (sigma x 0) union (0 x sigma), written in xiZ coordinates
    n = dd.xi.ambient_rank
    for s in dd.sigma:
        for emb in (tuple(fvec(s)) + tuple(fvec([0] * n)),
                    tuple(fvec([0] * n)) + tuple(fvec(s))):
            coords = dd.xiZ.coordinates(emb)
            assert coords is not None, "spherical root of Z left the lattice span"
            for g in dd.c_bd.generators:
                assert dot(coords, fvec(g)) <= 0, (
                    "boundary cone leaves the valuation cone of Z"
                )


def faces_of_boundary_cone(dd: DegenerationDatum):
    return [Cone.of(sub) for k in range(dd.c_bd.dim + 1)
            for sub in combinations(dd.c_bd.generators, k)]


def degeneration_fiber_data(dd: DegenerationDatum, face: Cone) -> dict:
    """Invariants of the degeneration fiber attached to a face of c_bd."""
    if not dd.c_bd.contains_cone(face) or not all(
        g in dd.c_bd.generators for g in face.generators
    ):
        raise NotAFace("not a face of the boundary cone")
    n = dd.xi.ambient_rank
    sigma_fiber = []
    for s in dd.sigma:
        emb = tuple(fvec([0] * n)) + tuple(fvec(s))
        coords = dd.xiZ.coordinates(emb)
        if all(dot(coords, fvec(g)) == 0 for g in face.generators):
            sigma_fiber.append(tuple(fvec(s)))
    return {
        "xi_fiber": dd.xi,
        "sigma_fiber": tuple(sigma_fiber),
        "horospherical": face.dim == dd.c_bd.dim and face == dd.c_bd,
        "torus_rank": face.dim,
        "k_form": face.dim == 0,
    }
