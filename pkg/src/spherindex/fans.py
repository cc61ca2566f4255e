"""Simplicial fans in the little cocharacter space.

Cones live in the dual coordinates of the canonical little weight basis,
so the relevant integer lattice is the standard one.  Cones are simplicial
by design: faces are generator subsets and all incidence questions reduce
to exact linear algebra and rational feasibility checks.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import lcm

from .errors import BudgetExceeded, NotConvex, NotSimplicial, NotValidated
from .linalg import (
    Lattice,
    Mat,
    Vec,
    dot,
    find_feasible,
    fmat,
    fvec,
    integer_kernel,
    primitive_vector,
    rank,
    smith_normal_form,
    solve_left,
    transpose,
    vec_mat,
)
from .restrict import RestrictedDatum, ValuationCone

ORBIT_CAP_ENV = "SPHERINDEX_ORBIT_CAP"
HARD_ORBIT_CEILING = 100_000


def _primitivize(v) -> tuple[int, ...]:
    v = fvec(v)
    d = lcm(*(x.denominator for x in v)) if v else 1
    return primitive_vector([int(x * d) for x in v])


@dataclass(frozen=True)
class Cone:
    generators: tuple[tuple[int, ...], ...]  # lex-sorted primitive rows

    @staticmethod
    def of(rows) -> "Cone":
        rows = tuple(sorted(tuple(int(x) for x in r) for r in rows))
        return Cone(rows)

    @property
    def dim(self) -> int:
        return len(self.generators)

    def faces(self):
        for k in range(self.dim + 1):
            for sub in combinations(self.generators, k):
                yield Cone.of(sub)

    def facets(self):
        for sub in combinations(self.generators, self.dim - 1):
            yield Cone.of(sub)

    def contains(self, v) -> bool:
        if not self.generators:
            return all(x == 0 for x in fvec(v))
        c = solve_left(fmat(self.generators), fvec(v))
        return c is not None and all(x >= 0 for x in c)

    def contains_cone(self, other: "Cone") -> bool:
        return all(self.contains(g) for g in other.generators)


@dataclass(frozen=True)
class Fan:
    cones: tuple[Cone, ...]  # closed under faces, sorted

    @staticmethod
    def from_maximal(gen_lists) -> "Fan":
        seen = set()
        for rows in gen_lists:
            cone = Cone.of(rows)
            if len(cone.generators) != len(rows):
                raise NotSimplicial("repeated generator in a cone")
            for f in cone.faces():
                seen.add(f)
        seen.add(Cone.of(()))
        return Fan(tuple(sorted(seen, key=lambda c: (c.dim, c.generators))))

    def maximal_cones(self) -> list[Cone]:
        gen_sets = [set(c.generators) for c in self.cones]
        out = []
        for i, c in enumerate(self.cones):
            if not any(
                set(c.generators) < g for j, g in enumerate(gen_sets) if j != i
            ):
                out.append(c)
        return out


@dataclass(frozen=True)
class FanIssue:
    kind: str
    detail: str


def _pair_intersection_is_face(c1: Cone, c2: Cone) -> bool:
    """Separating-functional test: C1 and C2 meet exactly in cone(G1 & G2)."""
    common = set(c1.generators) & set(c2.generators)
    only1 = [g for g in c1.generators if g not in common]
    only2 = [g for g in c2.generators if g not in common]
    if not only1 and not only2:
        return True
    n = len((c1.generators or c2.generators)[0])
    a_ub = [[Fraction(x) for x in g] for g in only1]
    a_ub += [[Fraction(-x) for x in g] for g in only2]
    b_ub = [Fraction(-1)] * (len(only1) + len(only2))
    a_eq = [[Fraction(x) for x in g] for g in common]
    b_eq = [Fraction(0)] * len(common)
    phi = find_feasible(a_ub=a_ub, b_ub=b_ub, a_eq=a_eq, b_eq=b_eq, nvars=n)
    return phi is not None


def fan_validate(f: Fan, zk: ValuationCone | None = None) -> list[FanIssue]:
    issues: list[FanIssue] = []
    for c in f.cones:
        for g in c.generators:
            if all(x == 0 for x in g):
                issues.append(FanIssue("zero_generator", f"cone {c.generators}"))
            elif g != _primitivize(g):
                issues.append(FanIssue("not_primitive", f"generator {g}"))
        if c.generators and rank(fmat(c.generators)) != c.dim:
            issues.append(FanIssue("not_simplicial", f"cone {c.generators}"))
    cone_set = set(f.cones)
    for c in f.cones:
        for face in c.faces():
            if face not in cone_set:
                issues.append(
                    FanIssue("missing_face", f"face {face.generators} of {c.generators}")
                )
    if not any(i.kind in ("not_simplicial", "zero_generator") for i in issues):
        for c1, c2 in combinations(f.cones, 2):
            if not _pair_intersection_is_face(c1, c2):
                issues.append(
                    FanIssue(
                        "intersection_not_a_face",
                        f"{c1.generators} vs {c2.generators}",
                    )
                )
    if zk is not None:
        for c in f.cones:
            for g in c.generators:
                for s in zk.inequalities:
                    if dot(fvec(s), g) > 0:
                        issues.append(
                            FanIssue("outside_support", f"generator {g} violates {s}")
                        )
    return issues


def is_complete_for(f: Fan, zk: ValuationCone, validated: bool = False) -> bool:
    """Wall criterion for supp(fan) = Z_k.

    Every maximal cone must be full-dimensional and every wall must either
    lie in a bounding hyperplane of Z_k or be shared by exactly two maximal
    cones.  With no inequalities this is classical completeness.
    """
    if not validated and fan_validate(f, zk):
        raise NotValidated("fan failed validation")
    maximal = f.maximal_cones()
    ambient_dim = None
    for c in maximal:
        if c.generators:
            ambient_dim = len(c.generators[0])
            break
    if ambient_dim is None:
        for s in list(zk.inequalities) + list(zk.lineality):
            ambient_dim = len(s)
            break
    if ambient_dim in (None, 0):
        return True  # zero-dimensional space, covered by the zero cone
    if maximal == [Cone.of(())]:
        return False
    # the valuation cone is always full-dimensional, so maximal cones must be
    if any(c.dim != ambient_dim for c in maximal):
        return False
    wall_count: dict[Cone, int] = {}
    for c in maximal:
        for w in c.facets():
            wall_count[w] = wall_count.get(w, 0) + 1
    for w, count in wall_count.items():
        if count == 2:
            continue
        if count > 2:
            return False
        on_boundary = any(
            all(dot(fvec(s), g) == 0 for g in w.generators) and any(x != 0 for x in s)
            for s in zk.inequalities
        )
        if not on_boundary:
            return False
    return True


def is_smooth(f: Fan, lattice_rank: int | None = None) -> dict[Cone, bool]:
    """Per-cone unimodularity against the standard dual lattice."""
    out = {}
    for c in f.cones:
        if not c.generators:
            out[c] = True
            continue
        d, _, _ = smith_normal_form(c.generators)
        divisors = [d[i][i] for i in range(c.dim)]
        out[c] = all(x == 1 for x in divisors)
    return out


def standard_fan(rd: RestrictedDatum) -> Fan:
    """Faces of the valuation cone, one per subset of the spherical roots."""
    if rd.nk0_basis:
        raise NotConvex("valuation cone is not strictly convex")
    rays = [_primitivize(tuple(-x for x in w)) for w in rd.coweights]
    cones = []
    for k in range(len(rays) + 1):
        for sub in combinations(range(len(rays)), k):
            cones.append([rays[i] for i in sub])
    return Fan.from_maximal(cones)


def cone_membership(v, zk: ValuationCone) -> bool:
    return all(dot(fvec(s), fvec(v)) <= 0 for s in zk.inequalities)


def _meets_interior(c: Cone, rd: RestrictedDatum) -> bool:
    """Whether the cone contains a point with every root strictly negative."""
    if not rd.sigma_k:
        return True
    if not c.generators:
        return False
    g = fmat(c.generators)
    a_ub = []
    b_ub = []
    for s in rd.sigma_k:
        a_ub.append([dot(fvec(s), row) for row in g])
        b_ub.append(Fraction(-1))
    for i in range(len(g)):
        a_ub.append([Fraction(-int(i == j)) for j in range(len(g))])
        b_ub.append(Fraction(0))
    return find_feasible(a_ub=a_ub, b_ub=b_ub, nvars=len(g)) is not None


@dataclass(frozen=True)
class Stratum:
    cone: Cone
    codim: int
    rank: int
    lattice_basis: Mat  # basis of the stratum weight lattice, parent coords
    sigma_indices: tuple[int, ...]  # restricted roots vanishing on the cone
    horospherical: bool


@dataclass(frozen=True)
class StrataPoset:
    nodes: tuple[Stratum, ...]
    edges: tuple[tuple[int, int], ...]  # cover relations (smaller, larger cone)


def strata(f: Fan, rd: RestrictedDatum) -> StrataPoset:
    nodes = []
    for c in f.cones:
        if c.generators:
            lattice_basis = tuple(
                fvec(r) for r in integer_kernel(fmat(c.generators), width=rd.rank)
            )
        else:
            lattice_basis = tuple(fvec(r) for r in Lattice.standard(rd.rank).rows_q())
        sigma_idx = tuple(
            i
            for i, s in enumerate(rd.sigma_k)
            if all(dot(fvec(s), g) == 0 for g in c.generators)
        )
        nodes.append(
            Stratum(
                cone=c,
                codim=c.dim,
                rank=rd.rank - c.dim,
                lattice_basis=lattice_basis,
                sigma_indices=sigma_idx,
                horospherical=_meets_interior(c, rd),
            )
        )
    edges = []
    for i, a in enumerate(f.cones):
        for j, b in enumerate(f.cones):
            if a.dim + 1 == b.dim and set(a.generators) < set(b.generators):
                edges.append((i, j))
    return StrataPoset(nodes=tuple(nodes), edges=tuple(edges))


def dominates(f1: Fan, f2: Fan) -> bool:
    return all(any(c2.contains_cone(c1) for c2 in f2.cones) for c1 in f1.cones)


def _reflection_on_dual(rd: RestrictedDatum, s) -> Mat:
    """Matrix of s_sigma on dual coordinates (rows act on the right)."""
    f = fmat(rd.form_k)
    s = fvec(s)
    ss = dot(vec_mat(s, f), s)
    d = rd.rank
    # on characters: chi -> chi - (2 (chi, s)/(s, s)) s; dual action is the
    # transpose, which equals the same formula with the roles swapped
    m = []
    for i in range(d):
        chi = fvec([int(i == j) for j in range(d)])
        coef = 2 * dot(vec_mat(chi, f), s) / ss
        m.append(tuple(a - coef * b for a, b in zip(chi, s)))
    return transpose(tuple(m))


def weyl_saturate(f: Fan, rd: RestrictedDatum, cap: int | None = None) -> Fan:
    """Orbit of the fan under the little Weyl group."""
    if cap is None:
        env = os.environ.get(ORBIT_CAP_ENV)
        cap = int(env) if env else min(rd.wk_order * max(len(f.cones), 1), HARD_ORBIT_CEILING)
    cap = min(cap, HARD_ORBIT_CEILING)
    refl = [_reflection_on_dual(rd, s) for s in rd.sigma_k]
    seen = set(f.cones)
    frontier = list(f.cones)
    while frontier:
        nxt = []
        for c in frontier:
            for m in refl:
                img = Cone.of(
                    tuple(_primitivize(vec_mat(fvec(g), m)) for g in c.generators)
                )
                if img not in seen:
                    seen.add(img)
                    nxt.append(img)
                    if len(seen) > cap:
                        raise BudgetExceeded("Weyl saturation exceeded the orbit cap")
        frontier = nxt
    return Fan(tuple(sorted(seen, key=lambda c: (c.dim, c.generators))))
