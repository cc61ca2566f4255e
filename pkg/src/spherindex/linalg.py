"""Exact rational and integer linear algebra.

Vectors are tuples of ``fractions.Fraction`` (or ints where everything is
integral); matrices are tuples of row vectors.  No floating point anywhere.
Lattices carry a Hermite-canonical integer basis plus a global denominator,
so equal lattices have identical representations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm

from .errors import NotInSpan, NotSublattice, ZeroVector

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]


def frac(x) -> Fraction:
    """Coerce ints, Fractions, or 'p/q' strings to Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a rational")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def fvec(v) -> Vec:
    return tuple(frac(x) for x in v)


def fmat(m) -> Mat:
    return tuple(fvec(r) for r in m)


def zeros(n: int) -> Vec:
    return (Fraction(0),) * n


def identity(n: int) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def dot(u, v) -> Fraction:
    return sum((Fraction(a) * b for a, b in zip(u, v, strict=True)), Fraction(0))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c, v):
    c = frac(c)
    return tuple(c * x for x in v)


def vec_mat(v, m) -> Vec:
    """Row vector times matrix."""
    if not m:
        return ()
    return tuple(dot(v, col) for col in zip(*m))


def mat_mul(a, b) -> Mat:
    return tuple(vec_mat(row, b) for row in a)


def mat_vec(m, v) -> Vec:
    """Matrix times column vector."""
    return tuple(dot(row, v) for row in m)


def transpose(m) -> Mat:
    return tuple(zip(*m)) if m else ()


def is_zero_vec(v) -> bool:
    return all(x == 0 for x in v)


def rref(m: Mat) -> tuple[Mat, tuple[int, ...]]:
    """Reduced row echelon form and pivot columns."""
    rows = [list(map(frac, r)) for r in m]
    if not rows:
        return (), ()
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return tuple(tuple(row) for row in rows), tuple(pivots)


def rank(m) -> int:
    return len(rref(m)[1])


def solve(a: Mat, b) -> Vec | None:
    """A particular solution x of a @ x = b (x a column), or None."""
    a = fmat(a)
    b = fvec(b)
    n = len(a[0]) if a else 0
    aug = tuple(row + (bi,) for row, bi in zip(a, b, strict=True))
    red, pivots = rref(aug)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for i, c in enumerate(pivots):
        x[c] = red[i][n]
    return tuple(x)


def solve_left(rows: Mat, target) -> Vec | None:
    """Coefficients x with sum_i x_i * rows[i] == target, or None."""
    if not rows:
        return () if is_zero_vec(target) else None
    return solve(transpose(rows), target)


def inverse(m: Mat) -> Mat:
    m = fmat(m)
    n = len(m)
    aug = tuple(row + fvec(identity(n)[i]) for i, row in enumerate(m))
    red, pivots = rref(aug)
    if pivots != tuple(range(n)):
        raise ValueError("matrix is singular")
    return tuple(row[n:] for row in red)


def content(v) -> int:
    """gcd of the entries of an integer vector (0 for the zero vector)."""
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def primitive_vector(v):
    """Divide an integer vector by its content, keeping the direction."""
    g = content(v)
    if g == 0:
        raise ZeroVector("zero vector has no primitive representative")
    return tuple(int(x) // g for x in v)


def scale_rows_integral(rows) -> list[list[int]]:
    """Scale each row by the lcm of its denominators (kernel-preserving)."""
    out = []
    for row in rows:
        row = fvec(row)
        d = lcm(*(x.denominator for x in row)) if row else 1
        out.append([int(x * d) for x in row])
    return out


# ---------------------------------------------------------------------------
# integer normal forms


def hermite_normal_form(m) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form.

    Returns (h, u) with u @ m == h, u unimodular, h in canonical echelon
    form: positive pivots, entries above a pivot reduced into [0, pivot),
    zero rows at the bottom.
    """
    rows = [[int(x) for x in r] for r in m]
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    u = [list(r) for r in identity(nr)]
    r = 0
    for c in range(nc):
        while True:
            nz = [i for i in range(r, nr) if rows[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: (abs(rows[i][c]), i))
            if i0 != r:
                rows[r], rows[i0] = rows[i0], rows[r]
                u[r], u[i0] = u[i0], u[r]
            done = True
            for i in range(r + 1, nr):
                if rows[i][c] != 0:
                    q = rows[i][c] // rows[r][c]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[r])]
                    if rows[i][c] != 0:
                        done = False
            if done:
                break
        if r < nr and rows[r][c] != 0:
            if rows[r][c] < 0:
                rows[r] = [-a for a in rows[r]]
                u[r] = [-a for a in u[r]]
            for i in range(r):
                q = rows[i][c] // rows[r][c]
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[r])]
            r += 1
            if r == nr:
                break
    return rows, u


def smith_normal_form(m) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Smith normal form: (d, u, v) with u @ m @ v == d, d_1 | d_2 | ...."""
    a = [[int(x) for x in r] for r in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    u = [list(r) for r in identity(nr)]
    v = [list(r) for r in identity(nc)]
    t = 0
    while t < min(nr, nc):
        # locate smallest nonzero entry in the remaining block
        best = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] != 0 and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i0, j0 = best
        if i0 != t:
            a[t], a[i0] = a[i0], a[t]
            u[t], u[i0] = u[i0], u[t]
        if j0 != t:
            for row in a:
                row[t], row[j0] = row[j0], row[t]
            for row in v:
                row[t], row[j0] = row[j0], row[t]
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                    if a[i][t] != 0:
                        a[t], a[i] = a[i], a[t]
                        u[t], u[i] = u[i], u[t]
                        dirty = True
            for j in range(t + 1, nc):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
                    for row in v:
                        row[j] -= q * row[t]
                    if a[t][j] != 0:
                        for row in a:
                            row[t], row[j] = row[j], row[t]
                        for row in v:
                            row[t], row[j] = row[j], row[t]
                        dirty = True
            if not dirty:
                # enforce divisibility of the remaining block by a[t][t]
                for i in range(t + 1, nr):
                    bad = next((j for j in range(t + 1, nc) if a[i][j] % a[t][t] != 0), None)
                    if bad is not None:
                        a[t] = [x + y for x, y in zip(a[t], a[i])]
                        u[t] = [x + y for x, y in zip(u[t], u[i])]
                        dirty = True
                        break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return a, u, v


def integer_kernel(constraint_rows, width: int | None = None) -> tuple[tuple[int, ...], ...]:
    """Saturated integer solutions {v : row . v == 0 for every row}.

    Rows may be rational; the returned basis is Hermite-canonical and spans
    the full rational solution space (saturation).
    """
    rows = scale_rows_integral(constraint_rows)
    if width is None:
        if not rows:
            raise ValueError("width required when there are no constraints")
        width = len(rows[0])
    if not rows:
        return tuple(identity(width))
    mt = [[rows[i][j] for i in range(len(rows))] for j in range(width)]
    h, u = hermite_normal_form(mt)
    ker = [tuple(u[i]) for i in range(width) if all(x == 0 for x in h[i])]
    if not ker:
        return ()
    h2, _ = hermite_normal_form(ker)
    return tuple(tuple(r) for r in h2 if any(r))


# ---------------------------------------------------------------------------
# lattices


@dataclass(frozen=True)
class Lattice:
    """A finitely generated subgroup of Q^n: (1/den) times an integer lattice.

    ``basis`` rows are a Hermite-canonical basis, so equality of lattices is
    equality of representations.  den == 1 gives an honest sublattice of Z^n.
    """

    ambient_rank: int
    basis: tuple[tuple[int, ...], ...]
    den: int = 1

    @staticmethod
    def standard(n: int) -> "Lattice":
        return Lattice(n, tuple(identity(n)), 1)

    @staticmethod
    def from_rows(ambient_rank: int, rows) -> "Lattice":
        rows = [fvec(r) for r in rows]
        for r in rows:
            if len(r) != ambient_rank:
                raise ValueError("generator has wrong length")
        dens = [x.denominator for r in rows for x in r]
        d = lcm(*dens) if dens else 1
        ints = [[int(x * d) for x in r] for r in rows]
        h, _ = hermite_normal_form(ints)
        h = [r for r in h if any(r)]
        g = d
        for r in h:
            for x in r:
                g = gcd(g, x)
        if h and g > 1:
            h = [[x // g for x in r] for r in h]
            d //= g
        return Lattice(ambient_rank, tuple(tuple(r) for r in h), d)

    @property
    def rank(self) -> int:
        return len(self.basis)

    def rows_q(self) -> Mat:
        return tuple(tuple(Fraction(x, self.den) for x in row) for row in self.basis)

    def coordinates(self, v) -> Vec | None:
        """Rational coordinates of v in the basis, or None if outside span."""
        return solve_left(self.rows_q(), fvec(v))

    def contains(self, v) -> bool:
        c = self.coordinates(v)
        return c is not None and all(x.denominator == 1 for x in c)

    def member_from_coords(self, coords) -> Vec:
        return vec_mat(fvec(coords), self.rows_q())

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(r) for r in other.rows_q())

    def index_in(self, super_lattice: "Lattice") -> int:
        """Index [super : self] for two lattices of equal rank."""
        if self.rank != super_lattice.rank:
            raise ValueError("lattices have different ranks")
        coords = [super_lattice.coordinates(r) for r in self.rows_q()]
        if any(c is None or any(x.denominator != 1 for x in c) for c in coords):
            raise NotSublattice("not a sublattice")
        d, _, _ = smith_normal_form([[int(x) for x in c] for c in coords])
        idx = 1
        for i in range(len(d)):
            idx *= d[i][i]
        return abs(idx)


def image_lattice(m: Mat, domain: Lattice) -> Lattice:
    """Lattice generated by the images of the domain basis under v -> v @ m.

    ``m`` maps domain ambient coordinates to codomain coordinates (rows of
    ``m`` are images of the domain coordinate vectors).
    """
    m = fmat(m)
    cod = len(m[0]) if m else 0
    gens = [vec_mat(row, m) for row in domain.rows_q()]
    return Lattice.from_rows(cod, gens)


def primitive_multiple(v, lattice: Lattice) -> tuple[Vec, Fraction]:
    """The primitive lattice vector p on the ray of v, and n with v == n*p."""
    v = fvec(v)
    if is_zero_vec(v):
        raise ZeroVector("v = 0")
    c = lattice.coordinates(v)
    if c is None:
        raise NotInSpan("v is not in the span of the lattice")
    d = lcm(*(x.denominator for x in c))
    ints = [int(x * d) for x in c]
    g = content(ints)
    prim_coords = [x // g for x in ints]
    n = Fraction(g, d)
    return lattice.member_from_coords(prim_coords), n


def intersection_with_subspace(lat: Lattice, subspace_rows) -> Lattice:
    """Saturated intersection of ``lat`` with the span of the given rows."""
    sub = fmat(subspace_rows)
    n = lat.ambient_rank
    ann = integer_kernel(sub, width=n)  # functionals vanishing on the span
    if not ann:
        return lat
    bq = lat.rows_q()
    constraints = [[dot(row, a) for row in bq] for a in ann]
    zs = integer_kernel(constraints, width=lat.rank)
    gens = [vec_mat(fvec(z), bq) for z in zs]
    return Lattice.from_rows(n, gens)


# ---------------------------------------------------------------------------
# exact feasibility LP (phase-1 simplex, Bland's rule)


def _phase1(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    """Find w >= 0 with a @ w == b (b >= 0 assumed), else None."""
    m = len(a)
    n = len(a[0]) if m else 0
    width = n + m + 1
    tab = []
    for i in range(m):
        row = list(a[i]) + [Fraction(int(i == j)) for j in range(m)] + [b[i]]
        tab.append(row)
    basis = [n + i for i in range(m)]
    obj = [Fraction(0)] * width
    for i in range(m):
        for j in range(width):
            obj[j] -= tab[i][j]
    for i in range(m):
        obj[n + i] += 1  # artificials have unit cost
    while True:
        enter = next((j for j in range(n + m) if obj[j] < 0), None)
        if enter is None:
            break
        pivot_row = None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][-1] / tab[i][enter]
                key = (ratio, basis[i])
                if best is None or key < best:
                    best = key
                    pivot_row = i
        if pivot_row is None:
            return None  # unbounded; cannot occur in phase 1
        piv = tab[pivot_row][enter]
        tab[pivot_row] = [x / piv for x in tab[pivot_row]]
        for i in range(m):
            if i != pivot_row and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [x - f * y for x, y in zip(tab[i], tab[pivot_row])]
        f = obj[enter]
        if f != 0:
            obj = [x - f * y for x, y in zip(obj, tab[pivot_row])]
        basis[pivot_row] = enter
    if -obj[-1] != 0:  # residual infeasibility
        return None
    w = [Fraction(0)] * (n + m)
    for i in range(m):
        w[basis[i]] = tab[i][-1]
    return w[:n]


def find_feasible(a_ub=(), b_ub=(), a_eq=(), b_eq=(), nvars: int | None = None) -> Vec | None:
    """A rational x with a_ub @ x <= b_ub and a_eq @ x == b_eq, or None."""
    a_ub = fmat(a_ub)
    a_eq = fmat(a_eq)
    b_ub = fvec(b_ub)
    b_eq = fvec(b_eq)
    if nvars is None:
        if a_ub:
            nvars = len(a_ub[0])
        elif a_eq:
            nvars = len(a_eq[0])
        else:
            raise ValueError("nvars required with no constraints")
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    nslack = len(a_ub)
    for i, r in enumerate(a_ub):
        row = list(r) + [-x for x in r]
        row += [Fraction(int(i == j)) for j in range(nslack)]
        rows.append(row)
        rhs.append(b_ub[i])
    for r, bi in zip(a_eq, b_eq, strict=True):
        row = list(r) + [-x for x in r] + [Fraction(0)] * nslack
        rows.append(row)
        rhs.append(bi)
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-x for x in rows[i]]
            rhs[i] = -rhs[i]
    w = _phase1(rows, rhs)
    if w is None:
        return None
    return tuple(w[j] - w[nvars + j] for j in range(nvars))
