"""Finite root systems in simple-root coordinates.

Every vector here is written in the simple-root basis of its ambient
system, so the simple root a_i is the i-th standard basis vector.  The
invariant form is the symmetrized Cartan matrix with short roots of
squared length 2 (long roots 4, or 6 in G2).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NotARootBase, NotFiniteType
from .linalg import Mat, Vec, dot, fmat, fvec, mat_vec, rank, vec_mat

VALID_RANKS = {
    "A": lambda n: n >= 1,
    "B": lambda n: n >= 2,
    "C": lambda n: n >= 2,
    "D": lambda n: n >= 2,
    "E": lambda n: n in (6, 7, 8),
    "F": lambda n: n == 4,
    "G": lambda n: n == 2,
}


def _edges(family: str, n: int) -> list[tuple[int, int]]:
    """Dynkin diagram edges (0-based, Bourbaki numbering)."""
    if family in "ABCFG":
        return [(i, i + 1) for i in range(n - 1)]
    if family == "D":
        return [(i, i + 1) for i in range(n - 2)] + ([(n - 3, n - 1)] if n >= 3 else [])
    if family == "E":
        chain = [0, 2, 3, 4, 5, 6, 7][: n - 1]
        return [(a, b) for a, b in zip(chain, chain[1:])] + [(1, 3)]
    raise ValueError(family)


def _short_long(family: str, n: int) -> list[int]:
    """Squared-length scale d_i (short root has d=1)."""
    if family == "B":
        return [2] * (n - 1) + [1]
    if family == "C":
        return [1] * (n - 1) + [2]
    if family == "F":
        return [2, 2, 1, 1]
    if family == "G":
        return [1, 3]
    return [1] * n


def standard_cartan(family: str, n: int) -> Mat:
    d = _short_long(family, n)
    c = [[0] * n for _ in range(n)]
    for i in range(n):
        c[i][i] = 2
    for i, j in _edges(family, n):
        # c_ij = 2(a_i, a_j)/(a_j, a_j) with (a_i, a_j) = -max(d_i, d_j)
        c[i][j] = -(2 * max(d[i], d[j])) // (2 * d[j])
        c[j][i] = -(2 * max(d[i], d[j])) // (2 * d[i])
    return tuple(tuple(x for x in row) for row in c)


def standard_form(family: str, n: int) -> Mat:
    """Gram matrix of the simple roots, short roots of squared length 2."""
    d = _short_long(family, n)
    c = standard_cartan(family, n)
    # c_ij = 2 (a_i, a_j) / (a_j, a_j) with (a_j, a_j) = 2 d_j
    return tuple(tuple(Fraction(d[j] * c[i][j]) for j in range(n)) for i in range(n))


def root_count(family: str, n: int) -> int:
    if family == "A":
        return n * (n + 1)
    if family in "BC":
        return 2 * n * n
    if family == "D":
        return 2 * n * (n - 1)
    if family == "E":
        return {6: 72, 7: 126, 8: 240}[n]
    if family == "F":
        return 48
    return 12  # G2


def weyl_order_of(family: str, n: int) -> int:
    fact = 1
    for k in range(2, n + 1):
        fact *= k
    if family == "A":
        return fact * (n + 1)
    if family in "BC":
        return (2**n) * fact
    if family == "D":
        return (2 ** (n - 1)) * fact
    if family == "E":
        return {6: 51840, 7: 2903040, 8: 696729600}[n]
    if family == "F":
        return 1152
    return 12  # G2


@dataclass(frozen=True)
class DynkinComponent:
    family: str
    rank: int
    label: str = ""

    def __post_init__(self):
        if self.family not in VALID_RANKS or not VALID_RANKS[self.family](self.rank):
            raise NotFiniteType(f"{self.family}{self.rank} is not a finite type")

    @property
    def type_name(self) -> str:
        return f"{self.family}{self.rank}"


@dataclass(frozen=True)
class AmbientRootDatum:
    """Block sum of standard irreducible systems, in simple-root coordinates."""

    components: tuple[DynkinComponent, ...]

    @staticmethod
    def of(spec: list) -> "AmbientRootDatum":
        comps = []
        for k, item in enumerate(spec):
            if isinstance(item, DynkinComponent):
                comps.append(item)
            else:
                fam, rk = item[0], item[1]
                label = item[2] if len(item) > 2 else f"c{k + 1}"
                comps.append(DynkinComponent(fam.upper(), int(rk), label))
        return AmbientRootDatum(tuple(comps))

    @property
    def dim(self) -> int:
        return sum(c.rank for c in self.components)

    def cartan(self) -> Mat:
        return _block_sum([standard_cartan(c.family, c.rank) for c in self.components])

    def form(self) -> Mat:
        return _block_sum([standard_form(c.family, c.rank) for c in self.components])

    def root_names(self) -> list[str]:
        if len(self.components) == 1:
            return [f"a{i + 1}" for i in range(self.components[0].rank)]
        names = []
        for c in self.components:
            names += [f"{c.label}.a{i + 1}" for i in range(c.rank)]
        return names

    def index_of_root(self, name: str) -> int:
        try:
            return self.root_names().index(name)
        except ValueError:
            raise KeyError(f"unknown simple root {name!r}") from None


def _block_sum(blocks: list[Mat]) -> Mat:
    n = sum(len(b) for b in blocks)
    out = [[Fraction(0)] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = Fraction(x)
        off += len(b)
    return tuple(tuple(r) for r in out)


@dataclass(frozen=True)
class RootBase:
    """Linearly independent vectors with crystallographic Gram data."""

    vectors: Mat
    gram: Mat = field(compare=False)

    @staticmethod
    def from_vectors(vectors, form) -> "RootBase":
        vectors = fmat(vectors)
        form = fmat(form)
        if rank(vectors) != len(vectors):
            raise NotARootBase("base vectors are linearly dependent")
        gram = tuple(
            tuple(dot(vec_mat(v, form), w) for w in vectors) for v in vectors
        )
        for i, row in enumerate(gram):
            if row[i] <= 0:
                raise NotARootBase("base vector of nonpositive squared length")
        return RootBase(vectors, gram)

    def __len__(self) -> int:
        return len(self.vectors)


def cartan_matrix(base: RootBase) -> Mat:
    g = base.gram
    n = len(g)
    c = []
    for i in range(n):
        row = []
        for j in range(n):
            x = 2 * g[i][j] / g[j][j]
            if x.denominator != 1:
                raise NotARootBase(f"non-integral Cartan number at ({i}, {j})")
            x = int(x)
            if i == j:
                if x != 2:
                    raise NotARootBase("diagonal Cartan number is not 2")
            elif x > 0:
                raise NotARootBase(f"positive off-diagonal Cartan number at ({i}, {j})")
            row.append(x)
        c.append(tuple(row))
    return tuple(c)


def _graph_components(c: Mat) -> list[list[int]]:
    n = len(c)
    seen = [False] * n
    comps = []
    for s in range(n):
        if seen[s]:
            continue
        stack, comp = [s], []
        seen[s] = True
        while stack:
            i = stack.pop()
            comp.append(i)
            for j in range(n):
                if not seen[j] and c[i][j] != 0:
                    seen[j] = True
                    stack.append(j)
        comps.append(sorted(comp))
    return comps


def _candidate_types(n: int) -> list[tuple[str, int]]:
    out = []
    for fam in "ABCDEFG":
        if VALID_RANKS[fam](n):
            out.append((fam, n))
    return out


def _match(c_sub: Mat, c_std: Mat) -> list[int] | None:
    """Permutation p with c_sub[i][j] == c_std[p[i]][p[j]], or None."""
    n = len(c_sub)
    perm = [-1] * n
    used = [False] * n

    def ok(i, t):
        for j in range(i):
            if c_sub[i][j] != c_std[t][perm[j]] or c_sub[j][i] != c_std[perm[j]][t]:
                return False
        return True

    def dfs(i):
        if i == n:
            return True
        for t in range(n):
            if not used[t] and ok(i, t):
                perm[i] = t
                used[t] = True
                if dfs(i + 1):
                    return True
                used[t] = False
                perm[i] = -1
        return False

    return perm if dfs(0) else None


def classify(c) -> list[tuple[str, int, tuple[int, ...]]]:
    """Split a Cartan matrix into irreducible types.

    Returns one (family, rank, positions) triple per component, where
    positions[t] is the input index playing the role of Bourbaki root t+1.
    Components are ordered by their smallest input index.
    """
    c = tuple(tuple(int(x) for x in row) for row in c)
    out = []
    for comp in _graph_components(c):
        sub = tuple(tuple(c[i][j] for j in comp) for i in comp)
        n = len(comp)
        found = None
        if n == 2 and sub[0][1] * sub[1][0] == 2:
            # B2 and C2 coincide; label B2 when the first vector is long
            fam = "B" if sub[0][1] == -2 else "C"
            perm = [0, 1]
            found = (fam, 2, perm)
        else:
            for fam, rk in _candidate_types(n):
                perm = _match(sub, standard_cartan(fam, rk))
                if perm is not None:
                    found = (fam, rk, perm)
                    break
        if found is None:
            raise NotFiniteType("Cartan matrix is not of finite type")
        fam, rk, perm = found
        positions = [0] * n
        for i, t in enumerate(perm):
            positions[t] = comp[i]
        out.append((fam, rk, tuple(positions)))
    return out


def classified_type_name(c) -> str:
    return " x ".join(f"{fam}{rk}" for fam, rk, _ in classify(c))


def weyl_order(types) -> int:
    order = 1
    for t in types:
        fam, rk = (t[0], t[1]) if not isinstance(t, str) else (t[0], int(t[1:]))
        order *= weyl_order_of(fam, rk)
    return order


def simple_reflection_matrix(c: Mat, j: int) -> Mat:
    """Matrix of s_j on base coordinates (row convention: v -> v @ s)."""
    n = len(c)
    return tuple(
        tuple(
            Fraction(int(i == t) - (c[i][j] if t == j else 0))
            for t in range(n)
        )
        for i in range(n)
    )


def generate_roots(base: RootBase) -> list[Vec]:
    """All roots of the finite system spanned by the base.

    Roots come back as rational vectors in the ambient coordinates of the
    base, sorted; the count is checked against the classified type.
    """
    c = cartan_matrix(base)
    types = classify(c)
    bound = sum(root_count(fam, rk) for fam, rk, _ in types)
    n = len(c)
    # work in base coordinates, reflect, then map out
    seen = {tuple(int(i == j) for j in range(n)) for i in range(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            pair = vec_mat(fvec(v), fmat(c))  # <v, a_j^vee> for each j
            for j in range(n):
                w = list(v)
                w[j] -= pair[j]
                w = tuple(w)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    if len(seen) > bound:
                        raise NotFiniteType("reflection closure exceeds root bound")
        frontier = nxt
    roots = set(seen)
    roots |= {tuple(-x for x in v) for v in seen}
    if len(roots) != bound:
        raise NotFiniteType("root count does not match classified type")
    out = [vec_mat(fvec(v), base.vectors) for v in sorted(roots)]
    return out


def positive_roots_in_base_coords(c: Mat) -> list[tuple[int, ...]]:
    """Positive roots of a Cartan matrix, as integer base-coordinate rows."""
    n = len(c)
    types = classify(c)
    bound = sum(root_count(fam, rk) for fam, rk, _ in types)
    seen = {tuple(int(i == j) for j in range(n)) for i in range(n)}
    frontier = list(seen)
    while frontier:
        nxt = []
        for v in frontier:
            pair = vec_mat(fvec(v), fmat(c))
            for j in range(n):
                w = list(v)
                w[j] -= int(pair[j])
                w = tuple(w)
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
                    if len(seen) > bound:
                        raise NotFiniteType("reflection closure exceeds root bound")
        frontier = nxt
    return sorted(v for v in seen if all(x >= 0 for x in v))


def _rho_coords(c: Mat) -> Vec:
    """Coordinates of the Weyl vector: <rho, a_j^vee> = 1 for all j."""
    from .linalg import inverse

    n = len(c)
    cinv = inverse(fmat(c))
    return vec_mat(fvec([1] * n), cinv)


def longest_element_word(c: Mat) -> list[int]:
    """A reduced word for w0 via reflection descent of -rho."""
    c = fmat(c)
    x = tuple(-t for t in _rho_coords(c))
    word = []
    while True:
        pair = vec_mat(x, c)
        j = next((t for t, p in enumerate(pair) if p < 0), None)
        if j is None:
            return word
        xl = list(x)
        xl[j] -= pair[j]
        x = tuple(xl)
        word.append(j)


def apply_word(c: Mat, word, v) -> Vec:
    v = fvec(v)
    for j in word:
        s = simple_reflection_matrix(c, j)
        v = vec_mat(v, s)
    return v


def opposition_permutation(base: RootBase) -> tuple[int, ...]:
    """The permutation p with -w0(sigma_i) = sigma_{p(i)}."""
    c = cartan_matrix(base)
    word = longest_element_word(c)
    n = len(c)
    perm = []
    for i in range(n):
        e = [0] * n
        e[i] = 1
        img = tuple(-x for x in apply_word(c, word, e))
        target = next(
            (t for t in range(n) if img == tuple(Fraction(int(t == j)) for j in range(n))),
            None,
        )
        if target is None:
            raise NotFiniteType("longest element did not permute the base")
        perm.append(target)
    return tuple(perm)
