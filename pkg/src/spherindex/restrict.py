"""Restriction of a spherical datum to the small field.

Everything happens in coordinates of the weight-lattice basis fixed by the
datum.  The little cocharacter space N_k is cut out of N_K by the compact
spherical roots and the star action; characters restrict to N_k by
evaluation, and the invariant form is transported through the orthogonal
projection onto the complement of the annihilator of N_k.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .datum import CompactRootSplit, SphericalDatumK, compact_split
from .errors import (
    BasisFailure,
    FiberMismatch,
    IdentityFails,
    IndivisibilityMismatch,
    InternalInconsistency,
    NotBetween,
    NotConvex,
)
from .linalg import (
    Lattice,
    Mat,
    Vec,
    dot,
    fmat,
    fvec,
    hermite_normal_form,
    identity,
    integer_kernel,
    inverse,
    is_zero_vec,
    mat_mul,
    primitive_multiple,
    rank,
    solve,
    solve_left,
    transpose,
    vec_mat,
    vec_sub,
)
from .rootsys import RootBase, cartan_matrix, classify, generate_roots, weyl_order


@dataclass(frozen=True)
class RestrictedDatum:
    """All little-field invariants of a spherical datum.

    Vectors in ``sigma_k``, ``phi_k`` live in coordinates of the canonical
    basis of the little weight lattice; ``nk0_basis`` and ``coweights``
    live in the dual coordinates, paired with the former by the dot
    product.
    """

    rank: int
    sigma_k: Mat
    fibers: tuple[tuple[int, ...], ...]
    sigma_k_pr: Mat
    n_sigma: tuple[int, ...]
    form_k: Mat
    phi_k: Mat
    wk_types: tuple[tuple[str, int], ...]
    wk_order: int
    nk0_basis: Mat
    coweights: Mat
    nk_basis: Mat | None = None
    xik_image_basis: Mat | None = None
    proj_lifts: Mat | None = None
    proj_matrix: Mat | None = None
    split: CompactRootSplit | None = None

    @property
    def wk_type_name(self) -> str:
        if not self.wk_types:
            return "trivial"
        return " x ".join(f"{f}{r}" for f, r in self.wk_types)


def _star_fix_constraints(d: SphericalDatumK) -> list[Vec]:
    rows = []
    n = d.m
    for g in d.star_xi:
        for i in range(n):
            row = list(fvec(g[i]))
            row[i] -= 1
            rows.append(tuple(row))
    return rows


def little_space(d: SphericalDatumK) -> Mat:
    """Saturated integral basis of N_k = {a : sigma0(a)=0, star-fixed}."""
    split = compact_split(d)
    constraints = [fvec(d.sigma[i]) for i in split.sigma0]
    constraints += _star_fix_constraints(d)
    return tuple(fvec(r) for r in integer_kernel(constraints, width=d.m))


def _projection_matrix(d: SphericalDatumK, split: CompactRootSplit) -> Mat:
    """Orthogonal projection onto the annihilator-complement of N_k."""
    m = d.m
    f = fmat(d.pairing)
    u_rows = [fvec(d.sigma[i]) for i in split.sigma0]
    for g in d.star_xi:
        gm = fmat(g)
        for i in range(m):
            row = [Fraction(int(i == j)) - gm[i][j] for j in range(m)]
            if any(x != 0 for x in row):
                u_rows.append(tuple(row))
    # prune to an independent spanning set
    basis: list[Vec] = []
    for r in u_rows:
        from .linalg import rank as _rank

        if _rank(basis + [r]) > len(basis):
            basis.append(r)
    ident = fmat(identity(m))
    if not basis:
        return ident
    u = tuple(basis)
    gram = tuple(tuple(dot(vec_mat(a, f), b) for b in u) for a in u)
    ginv = inverse(gram)
    # P = I - F U^T G^{-1} U  (rows act on the right)
    fut = mat_mul(f, transpose(u))
    corr = mat_mul(mat_mul(fut, ginv), u)
    return tuple(
        tuple(ident[i][j] - corr[i][j] for j in range(m)) for i in range(m)
    )


def _core(rank_: int, sigma_rows: Mat, form: Mat, fibers) -> dict:
    sigma_rows = fmat(sigma_rows)
    form = fmat(form)
    if sigma_rows:
        base = RootBase.from_vectors(sigma_rows, form)
        c = cartan_matrix(base)
        comps = classify(c)
        types = tuple((f, r) for f, r, _ in comps)
        order = weyl_order(types)
        phi = tuple(generate_roots(base))
        nk0 = tuple(fvec(r) for r in integer_kernel(sigma_rows, width=rank_))
        gram = tuple(tuple(dot(vec_mat(a, form), b) for b in sigma_rows) for a in sigma_rows)
        ginv = inverse(gram)
        sf = tuple(vec_mat(s, form) for s in sigma_rows)
        coweights = tuple(
            tuple(
                sum((ginv[t][j] * sf[t][i] for t in range(len(sigma_rows))), Fraction(0))
                for i in range(rank_)
            )
            for j in range(len(sigma_rows))
        )
        lat = Lattice.standard(rank_)
        prim, mult = [], []
        for s in sigma_rows:
            p, n = primitive_multiple(s, lat)
            prim.append(p)
            mult.append(int(n))
    else:
        types, order, phi = (), 1, ()
        nk0 = tuple(fvec(r) for r in identity(rank_))
        coweights, prim, mult = (), [], []
    return dict(
        rank=rank_,
        sigma_k=sigma_rows,
        fibers=tuple(tuple(f) for f in fibers),
        sigma_k_pr=tuple(prim),
        n_sigma=tuple(mult),
        form_k=form,
        phi_k=phi,
        wk_types=types,
        wk_order=order,
        nk0_basis=nk0,
        coweights=coweights,
    )


def _raw_res(nk: Mat, chi) -> Vec:
    return tuple(dot(fvec(chi), v) for v in nk)


def restrict_datum(d: SphericalDatumK) -> RestrictedDatum:
    split = compact_split(d)
    nk = little_space(d)
    dk = len(nk)
    m = d.m

    # canonical basis of the little weight lattice, in raw dual coordinates
    res_map = tuple(_raw_res(nk, [int(i == j) for j in range(m)]) for i in range(m))
    ints = [[int(x) for x in row] for row in res_map]
    h, _ = hermite_normal_form(ints) if ints and dk else ([], [])
    l_basis = tuple(fvec(r) for r in h if any(r))

    def to_xik(y) -> Vec:
        c = solve_left(l_basis, fvec(y))
        if c is None:
            raise FiberMismatch("restriction left the little weight lattice span")
        return c

    # restricted spherical roots with their fibers, in input order
    sigma_k: list[Vec] = []
    fibers: list[list[int]] = []
    for i in split.noncompact:
        y = to_xik(_raw_res(nk, d.sigma[i]))
        if y in sigma_k:
            fibers[sigma_k.index(y)].append(i)
        else:
            sigma_k.append(y)
            fibers.append([i])
    for fib in fibers:
        orbit = d.star_orbit_of_root(fib[0])
        if tuple(sorted(fib)) != orbit:
            raise FiberMismatch(
                f"roots {sorted(fib)} restrict equally but the star orbit is {list(orbit)}"
            )

    # transport the invariant form through the orthogonal projection
    p = _projection_matrix(d, split)
    f = fmat(d.pairing)
    lifts = []
    for row in l_basis:
        chi = solve(tuple(nk), row)  # nk @ chi = row, i.e. raw res of chi is row
        lifts.append(chi)
    plifts = tuple(vec_mat(fvec(chi), p) for chi in lifts)
    form_k = tuple(tuple(dot(vec_mat(a, f), b) for b in plifts) for a in plifts)

    core = _core(dk, tuple(sigma_k), form_k, fibers)
    return RestrictedDatum(
        **core,
        nk_basis=nk,
        xik_image_basis=l_basis,
        proj_lifts=tuple(fvec(c) for c in lifts),
        proj_matrix=p,
        split=split,
    )


@dataclass(frozen=True)
class RestrictedRoots:
    """Multiset of nonzero restrictions of the big-field root system."""

    multiplicities: tuple[tuple[Vec, int], ...]
    indivisible: tuple[Vec, ...]
    reduced: bool


def phi_k_res(d: SphericalDatumK, rd: RestrictedDatum | None = None) -> RestrictedRoots:
    """Restrict every root generated by the big spherical roots.

    The indivisible part must coincide with the little root system; a
    mismatch contradicts a theorem that holds for every consistent datum.
    """
    if rd is None:
        rd = restrict_datum(d)
    counts: Counter[Vec] = Counter()
    if d.sigma:
        base = RootBase.from_vectors(d.sigma, d.pairing)
        for root in generate_roots(base):
            y = _raw_res(rd.nk_basis, root)
            if is_zero_vec(y):
                continue
            counts[tuple(solve_left(rd.xik_image_basis, y))] += 1
    support = set(counts)

    def divisible(r):
        return any(
            tuple(Fraction(x, n) for x in r) in support
            for n in range(2, max((abs(x.numerator) for x in r), default=1) + 1)
        )

    indivisible = tuple(sorted(r for r in support if not divisible(r)))
    reduced = len(indivisible) == len(support)
    if set(indivisible) != set(rd.phi_k):
        raise IndivisibilityMismatch(
            "indivisible restricted roots differ from the little root system"
        )
    if any(n not in (1, 2) for n in rd.n_sigma):
        raise IndivisibilityMismatch("a restricted spherical root has multiplier > 2")
    return RestrictedRoots(
        multiplicities=tuple(sorted(counts.items())),
        indivisible=indivisible,
        reduced=reduced,
    )


@dataclass(frozen=True)
class ValuationCone:
    inequalities: Mat  # the restricted spherical roots
    lineality: Mat  # basis of the common kernel, dual coordinates
    extremal_rays: Mat  # present exactly when the cone is strictly convex


def valuation_cone(rd: RestrictedDatum) -> ValuationCone:
    strictly_convex = not rd.nk0_basis
    rays = ()
    if strictly_convex and rd.coweights:
        rays = tuple(tuple(-x for x in w) for w in rd.coweights)
    return ValuationCone(
        inequalities=rd.sigma_k, lineality=rd.nk0_basis, extremal_rays=rays
    )


def project_to_little(rd: RestrictedDatum, u) -> Vec:
    """Projection of a big cocharacter into N_k, in dual coordinates."""
    return tuple(dot(chi, fvec(u)) for chi in _projected_lifts(rd))


def _projected_lifts(rd: RestrictedDatum) -> Mat:
    return tuple(vec_mat(fvec(chi), rd.proj_matrix) for chi in rd.proj_lifts)


def coweight_identity_check(d: SphericalDatumK, rd: RestrictedDatum | None = None) -> dict:
    """Check that each little coweight is the projected sum over its fiber.

    The dual family on the big side is taken over all spherical roots; the
    identity is then verified fiber by fiber.
    """
    if rd is None:
        rd = restrict_datum(d)
    if not d.sigma:
        return {"checked": 0}
    f = fmat(d.pairing)
    sigma = fmat(d.sigma)
    gram = tuple(tuple(dot(vec_mat(a, f), b) for b in sigma) for a in sigma)
    ginv = inverse(gram)
    sf = tuple(vec_mat(s, f) for s in sigma)
    k_coweights = tuple(
        tuple(
            sum((ginv[t][j] * sf[t][i] for t in range(len(sigma))), Fraction(0))
            for i in range(d.m)
        )
        for j in range(len(sigma))
    )
    checked = 0
    for j, fib in enumerate(rd.fibers):
        total = tuple(Fraction(0) for _ in range(rd.rank))
        for tau in fib:
            total = tuple(
                a + b for a, b in zip(total, project_to_little(rd, k_coweights[tau]))
            )
        if total != rd.coweights[j]:
            raise IdentityFails(
                f"coweight of restricted root {j} differs from its fiber sum"
            )
        checked += 1
    return {"checked": checked}


def chamber_containment_check(d: SphericalDatumK, rd: RestrictedDatum | None = None) -> dict:
    """Check that the antidominant chamber of the split part lands in Z_k.

    Generators of the chamber cut out by the restricted simple roots of the
    group are pushed through the canonical projection; each restricted
    spherical root must be nonpositive on the image.  Ambient mode only.
    """
    if rd is None:
        rd = restrict_datum(d)
    if d.mode != "ambient":
        return {"checked": 0}
    from .index import restricted_simple_roots, split_subspace

    ix = d.index
    v = split_subspace(ix)
    if not v:
        return {"checked": 0}
    width = len(v)
    walls = [fvec(r) for r in restricted_simple_roots(ix).roots]
    lin = integer_kernel(walls, width=width) if walls else identity(width)
    gens = [fvec(g) for g in lin]
    gens += [tuple(-x for x in g) for g in lin]
    for i in range(len(walls)):
        target = [Fraction(-int(i == t)) for t in range(len(walls))]
        x = solve(tuple(walls), target)
        if x is None:
            raise InternalInconsistency("restricted simple roots are dependent")
        gens.append(fvec(x))
    b = fmat(ix.ambient.form())
    xi = fmat(d.xi_K.rows_q())
    for t in gens:
        a = vec_mat(t, fmat(v))
        u = tuple(dot(vec_mat(chi, b), a) for chi in xi)
        s = project_to_little(rd, u)
        for sbar in rd.sigma_k:
            if dot(fvec(sbar), s) > 0:
                raise InternalInconsistency(
                    "a chamber generator projects outside the valuation cone"
                )
    return {"checked": len(gens)}


def facet_inheritance_check(d: SphericalDatumK, rd: RestrictedDatum | None = None) -> dict:
    """Check how the facets of the big valuation cone meet the little one.

    A facet cut by a compact spherical root must restrict to all of Z_k;
    one cut by a noncompact root must trace a facet of Z_k.
    """
    if rd is None:
        rd = restrict_datum(d)
    split = rd.split if rd.split is not None else compact_split(d)
    gens = [fvec(g) for g in rd.nk0_basis]
    gens += [tuple(-x for x in g) for g in rd.nk0_basis]
    gens += [tuple(-x for x in w) for w in rd.coweights]
    if rd.rank and rank(gens) != rd.rank:
        raise InternalInconsistency("valuation cone is not full dimensional")
    fiber_of = {i: t for t, fib in enumerate(rd.fibers) for i in fib}
    checked = {"full": 0, "facet": 0}
    for i in range(len(d.sigma)):
        if i in split.sigma0:
            raw = _raw_res(rd.nk_basis, d.sigma[i]) if rd.nk_basis else ()
            if not is_zero_vec(raw):
                raise InternalInconsistency(
                    "a compact spherical root restricts nontrivially"
                )
            checked["full"] += 1
            continue
        sbar = fvec(rd.sigma_k[fiber_of[i]])
        vals = [dot(sbar, g) for g in gens]
        if any(x > 0 for x in vals):
            raise InternalInconsistency(
                "a restricted root is positive somewhere on the valuation cone"
            )
        face = [g for g, x in zip(gens, vals) if x == 0]
        if rank(face) != rd.rank - 1:
            raise InternalInconsistency(
                "a big facet does not trace a facet of the little cone"
            )
        checked["facet"] += 1
    return checked


def predicates(d: SphericalDatumK, rd: RestrictedDatum | None = None) -> dict:
    if rd is None:
        rd = restrict_datum(d)
    det1 = False
    if len(rd.sigma_k_pr) == rd.rank and rd.rank > 0:
        h, _ = hermite_normal_form([[int(x) for x in r] for r in rd.sigma_k_pr])
        prod = 1
        for i in range(rd.rank):
            prod *= h[i][i]
        det1 = abs(prod) == 1
    if rd.rank == 0:
        det1 = True
    satake = True
    split = rd.split if rd.split is not None else compact_split(d)
    for i in split.noncompact:
        s = fvec(d.sigma[i])
        for g in d.star_xi:
            if vec_mat(s, g) != s:
                satake = False
    return {
        "k_convex": not rd.nk0_basis,
        "k_wonderful": det1,
        "k_horospherical": not rd.sigma_k,
        "rank0": rd.rank == 0,
        "satake_open_embedding": satake,
    }


@dataclass(frozen=True)
class Localization:
    datum: RestrictedDatum  # invariants of the localized variety
    xi_basis_in_parent: Mat  # basis of the localized weight lattice
    sigma_k_indices: tuple[int, ...]  # positions of J inside sigma_k
    sigma_K_indices: tuple[int, ...]  # induced big-side spherical roots


def localize(rd: RestrictedDatum, j_indices) -> Localization:
    """Localize at a subset J of the restricted spherical roots.

    The new weight lattice is the saturation of the old one inside the
    orthogonal of the standard-fan face spanned by the coweights outside J.
    """
    if rd.nk0_basis:
        raise NotConvex("valuation cone is not strictly convex")
    j = sorted(set(int(t) for t in j_indices))
    if j and not (0 <= j[0] and j[-1] < len(rd.sigma_k)):
        raise KeyError("localization index out of range")
    out = [t for t in range(len(rd.sigma_k)) if t not in j]
    rays = [rd.coweights[t] for t in out]
    if rays:
        new_basis = tuple(fvec(r) for r in integer_kernel(rays, width=rd.rank))
    else:
        new_basis = tuple(fvec(r) for r in identity(rd.rank))
    sigma_new = []
    for t in j:
        c = solve_left(new_basis, fvec(rd.sigma_k[t]))
        sigma_new.append(c)
    f = fmat(rd.form_k)
    form_new = tuple(
        tuple(dot(vec_mat(a, f), b) for b in new_basis) for a in new_basis
    )
    fibers = [rd.fibers[t] for t in j]
    core = _core(len(new_basis), tuple(sigma_new), form_new, fibers)
    sub = RestrictedDatum(**core)
    sigma_K = sorted(
        set(i for t in j for i in rd.fibers[t])
        | (set(rd.split.sigma0) if rd.split else set())
    )
    return Localization(
        datum=sub,
        xi_basis_in_parent=new_basis,
        sigma_k_indices=tuple(j),
        sigma_K_indices=tuple(sigma_K),
    )


@dataclass(frozen=True)
class AutRoots:
    roots: Mat  # n_aut * primitive root, a basis of the given sublattice
    n_aut: tuple[int, ...]


def aut_roots(rd: RestrictedDatum, gamma: Lattice) -> AutRoots:
    """Spherical roots of the quotient by a group of automorphisms.

    ``gamma`` is the character sublattice of the quotient; it must sit
    between the lattice spanned by the restricted roots and the full
    little weight lattice.
    """
    if gamma.ambient_rank != rd.rank:
        raise NotBetween("sublattice has the wrong ambient rank")
    xik = Lattice.standard(rd.rank)
    if not xik.contains_lattice(gamma):
        raise NotBetween("sublattice is not contained in the weight lattice")
    for s in rd.sigma_k:
        if not gamma.contains(s):
            raise NotBetween("sublattice does not contain the restricted roots")
    from math import lcm

    roots, mults = [], []
    for p in rd.sigma_k_pr:
        c = gamma.coordinates(p)
        if c is None:
            raise NotBetween("restricted root leaves the span of the sublattice")
        n = lcm(*(x.denominator for x in c)) if c else 1
        roots.append(tuple(n * x for x in p))
        mults.append(n)
    if any(n not in (1, 2) for n in mults):
        raise BasisFailure("an automorphism-quotient multiplier exceeded 2")
    if roots and Lattice.from_rows(rd.rank, roots) != gamma:
        raise BasisFailure("quotient roots do not form a basis of the sublattice")
    if not roots and gamma.rank != 0:
        raise BasisFailure("quotient roots do not form a basis of the sublattice")
    return AutRoots(roots=tuple(roots), n_aut=tuple(mults))
