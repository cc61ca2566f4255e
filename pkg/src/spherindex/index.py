"""Indices of reductive groups over a base field.

An index is an ambient root datum together with the set of compact simple
roots and the Galois star action on simple-root coordinates.  From it we
compute the split subspace, the restriction map, and the restricted root
system of the group.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, DatumConstructionError
from .linalg import (
    Mat,
    Vec,
    dot,
    fmat,
    fvec,
    integer_kernel,
    inverse,
    mat_mul,
    transpose,
    vec_mat,
)
from .rootsys import (
    AmbientRootDatum,
    RootBase,
    cartan_matrix,
    classify,
    positive_roots_in_base_coords,
)

STAR_GROUP_CAP = 10000


@dataclass(frozen=True)
class StarAction:
    """Galois semilinear action given by matrices on character coordinates."""

    generators: tuple[Mat, ...]
    dim: int

    @staticmethod
    def of(generators, dim: int) -> "StarAction":
        gens = tuple(fmat(g) for g in generators)
        for g in gens:
            if len(g) != dim or any(len(row) != dim for row in g):
                raise DatumConstructionError("star generator has wrong shape")
        return StarAction(gens, dim)

    def apply(self, g_index: int, v) -> Vec:
        return vec_mat(fvec(v), self.generators[g_index])

    def elements(self, cap: int = STAR_GROUP_CAP) -> list[Mat]:
        """All elements of the generated group (BFS closure)."""
        ident = tuple(tuple(Fraction(int(i == j)) for j in range(self.dim)) for i in range(self.dim))
        seen = {ident}
        frontier = [ident]
        while frontier:
            nxt = []
            for m in frontier:
                for g in self.generators:
                    p = mat_mul(m, g)
                    if p not in seen:
                        seen.add(p)
                        nxt.append(p)
                        if len(seen) > cap:
                            raise BudgetExceeded("star action generates too many elements")
            frontier = nxt
        return sorted(seen)

    def is_permutation_action(self) -> bool:
        for g in self.generators:
            for row in g:
                if sorted(row) != [Fraction(0)] * (self.dim - 1) + [Fraction(1)]:
                    return False
            for col in transpose(g):
                if sorted(col) != [Fraction(0)] * (self.dim - 1) + [Fraction(1)]:
                    return False
        return True


@dataclass(frozen=True)
class TitsIndex:
    ambient: AmbientRootDatum
    compact: tuple[int, ...]
    star: StarAction

    @staticmethod
    def of(ambient: AmbientRootDatum, compact, star_generators) -> "TitsIndex":
        n = ambient.dim
        compact = tuple(sorted(set(int(i) for i in compact)))
        if compact and not (0 <= compact[0] and compact[-1] < n):
            raise DatumConstructionError("compact root index out of range")
        star = StarAction.of(star_generators, n)
        return TitsIndex(ambient, compact, star)

    def violations(self) -> list[str]:
        out = []
        if not self.star.is_permutation_action():
            out.append("star generator does not permute the simple roots")
        try:
            self.star.elements()
        except BudgetExceeded:
            out.append("star action does not generate a finite group")
        n = self.ambient.dim
        comp = set(self.compact)
        for k, g in enumerate(self.star.generators):
            for i in comp:
                img = vec_mat(fvec([int(i == j) for j in range(n)]), g)
                hit = next((t for t in range(n) if img[t] == 1), None)
                if hit not in comp:
                    out.append(f"star generator {k} moves compact root {i} out of the compact set")
        return out


def split_subspace(ix: TitsIndex) -> Mat:
    """Hermite-canonical basis of V = {v : (a_i, v)=0 for compact i, g v = v}.

    Cocharacter space and character space are identified by the invariant
    form, so both kinds of condition become exact linear constraints.
    """
    n = ix.ambient.dim
    b = ix.ambient.form()
    constraints = [b[i] for i in ix.compact]
    for g in ix.star.generators:
        gt = transpose(g)
        for i in range(n):
            row = list(gt[i])
            row[i] -= 1
            constraints.append(tuple(row))
    return tuple(fvec(r) for r in integer_kernel(constraints, width=n))


def res_A(ix: TitsIndex, chi) -> Vec:
    """Restriction of a character to the split part, in dual coordinates.

    The j-th coordinate is the invariant pairing of chi with the j-th
    split-subspace basis vector; this is the orthogonal projection written
    against the chosen basis.
    """
    v = split_subspace(ix)
    b = ix.ambient.form()
    return tuple(dot(vec_mat(fvec(chi), b), row) for row in v)


def dual_form_on_split(ix: TitsIndex) -> Mat:
    """Form on restriction coordinates matching the projected invariant form."""
    v = split_subspace(ix)
    b = ix.ambient.form()
    gram = tuple(tuple(dot(vec_mat(r, b), s) for s in v) for r in v)
    return inverse(gram)


@dataclass(frozen=True)
class RestrictedSimpleRoots:
    roots: Mat  # distinct nonzero images, Bourbaki-ordered per component
    fibers: tuple[tuple[int, ...], ...]  # ambient simple-root indices per root
    cartan: Mat
    types: tuple[tuple[str, int], ...]

    @property
    def type_name(self) -> str:
        return " x ".join(f"{f}{r}" for f, r in self.types)


def restricted_simple_roots(ix: TitsIndex) -> RestrictedSimpleRoots:
    n = ix.ambient.dim
    images = []
    for i in range(n):
        chi = [int(i == j) for j in range(n)]
        images.append(res_A(ix, chi))
    distinct: list[Vec] = []
    fibers: list[list[int]] = []
    for i, img in enumerate(images):
        if all(x == 0 for x in img):
            continue
        if img in distinct:
            fibers[distinct.index(img)].append(i)
        else:
            distinct.append(img)
            fibers.append([i])
    form = dual_form_on_split(ix)
    base = RootBase.from_vectors(distinct, form)
    c = cartan_matrix(base)
    comps = classify(c)
    order = [i for _, _, positions in comps for i in positions]
    roots = tuple(distinct[i] for i in order)
    fib = tuple(tuple(fibers[i]) for i in order)
    rbase = RootBase.from_vectors(roots, form)
    return RestrictedSimpleRoots(
        roots=roots,
        fibers=fib,
        cartan=cartan_matrix(rbase),
        types=tuple((f, r) for f, r, _ in comps),
    )


@dataclass(frozen=True)
class RestrictedRootSystem:
    multiplicities: tuple[tuple[Vec, int], ...]  # sorted (root, multiplicity)
    reduced: bool
    indivisible_types: tuple[tuple[str, int], ...]
    indivisible_count: int

    @property
    def type_name(self) -> str:
        return " x ".join(f"{f}{r}" for f, r in self.indivisible_types)

    def support(self) -> set[Vec]:
        return {r for r, _ in self.multiplicities}


def ambient_roots(ambient: AmbientRootDatum) -> list[Vec]:
    pos = positive_roots_in_base_coords(ambient.cartan())
    out = [fvec(v) for v in pos]
    out += [tuple(-x for x in v) for v in out]
    return out


def restricted_root_system(ix: TitsIndex) -> RestrictedRootSystem:
    counts: Counter[Vec] = Counter()
    for root in ambient_roots(ix.ambient):
        img = res_A(ix, root)
        if any(x != 0 for x in img):
            counts[img] += 1
    support = set(counts)
    halves = {tuple(x / 2 for x in r) for r in support}
    reduced = not (support & halves)
    indivisible = {r for r in support if tuple(x / 2 for x in r) not in support}
    srs = restricted_simple_roots(ix)
    types = srs.types
    return RestrictedRootSystem(
        multiplicities=tuple(sorted(counts.items())),
        reduced=reduced,
        indivisible_types=types,
        indivisible_count=len(indivisible),
    )
