"""Exact rational polyhedra: core types, linear algebra, and linear programming.

Everything in this package computes over the rationals; floating point is never
used, not even as a pre-filter.  Vectors are tuples of Fraction, matrices are
tuples of row tuples.  Inequality systems are written A x <= b throughout.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional, Sequence, Union

Rational = Fraction
Vector = tuple[Fraction, ...]
Matrix = tuple[Vector, ...]
# A face is referred to by the 1-based indices of the generators (or rows)
# incident to it.
FaceIndexSet = frozenset


class PolyhedronError(Exception):
    """Structural problem with a polyhedron or an operation's preconditions."""


class EmptyPolyhedronError(PolyhedronError):
    """Raised where an operation requires a nonempty polyhedron."""


class VerificationError(PolyhedronError):
    """An internal cross-check failed; the computed result cannot be trusted."""


def frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def vector(entries: Iterable) -> Vector:
    return tuple(frac(e) for e in entries)


def matrix(rows: Iterable[Iterable]) -> Matrix:
    return tuple(vector(r) for r in rows)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vec_add(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, u: Sequence) -> Vector:
    c = frac(c)
    return tuple(c * a for a in u)


def mat_vec(A: Sequence[Sequence], x: Sequence) -> Vector:
    return tuple(dot(row, x) for row in A)


def mat_mul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    Bt = list(zip(*B))
    return tuple(tuple(dot(row, col) for col in Bt) for row in A)


def transpose(A: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*A))


def identity_matrix(n: int) -> Matrix:
    one, zero = Fraction(1), Fraction(0)
    return tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n))


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


def integerize(row: Sequence) -> tuple[int, ...]:
    """Scale a rational row by the positive lcm of denominators."""
    fr = [frac(x) for x in row]
    mult = lcm(*(x.denominator for x in fr)) if fr else 1
    return tuple(int(x * mult) for x in fr)


def primitive(row: Sequence) -> tuple[int, ...]:
    """Integerize and divide by the gcd; sign of the row is preserved."""
    ints = integerize(row)
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g <= 1:
        return ints
    return tuple(x // g for x in ints)


# ---------------------------------------------------------------------------
# Exact linear algebra


def rank(rows: Sequence[Sequence]) -> int:
    """Exact rank via fraction-free (Bareiss-style) elimination on integers."""
    m = [list(integerize(r)) for r in rows]
    if not m:
        return 0
    ncols = len(m[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, len(m)):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == len(m):
            break
    return r


def _echelon(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    """Reduced row echelon form over Q (returns a fresh list of lists)."""
    m = [[frac(x) for x in row] for row in rows]
    if not m:
        return m
    ncols = len(m[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c]
        m[r] = [x / inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return m


def row_space_basis(rows: Sequence[Sequence]) -> Matrix:
    ech = _echelon(rows)
    return tuple(tuple(r) for r in ech if any(x != 0 for x in r))


def nullspace(rows: Sequence[Sequence], n: Optional[int] = None) -> Matrix:
    """Basis of {x : A x = 0}, one vector per free column."""
    if n is None:
        n = len(rows[0]) if rows else 0
    ech = _echelon(rows) if rows else []
    ech = [r for r in ech if any(x != 0 for x in r)]
    pivots = []
    for r in ech:
        pivots.append(next(j for j, x in enumerate(r) if x != 0))
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for j in free:
        v = [Fraction(0)] * n
        v[j] = Fraction(1)
        for r, pc in zip(ech, pivots):
            v[pc] = -r[j]
        basis.append(tuple(v))
    return tuple(basis)


def solve_linear(A: Sequence[Sequence], b: Sequence) -> Optional[Vector]:
    """One exact solution of A x = b, or None if inconsistent."""
    rows = [list(r) + [bb] for r, bb in zip(A, b)]
    n = len(A[0]) if A else 0
    ech = [r for r in _echelon(rows) if any(v != 0 for v in r[:n])]
    # reduced echelon form: free variables 0, each pivot reads off directly
    x = [Fraction(0)] * n
    for r in reversed(ech):
        nz = next(j for j, v in enumerate(r[:n]) if v != 0)
        x[nz] = (r[n] - sum(r[j] * x[j] for j in range(nz + 1, n))) / r[nz]
    # verify (guards the inconsistent case where a 0 = c row existed)
    for row, bb in zip(A, b):
        if dot(row, x) != bb:
            return None
    return tuple(x)


def invert_matrix(A: Sequence[Sequence]) -> Matrix:
    n = len(A)
    aug = [[frac(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
           for i, row in enumerate(A)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c] != 0), None)
        if piv is None:
            raise ValueError("matrix is singular")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = aug[c][c]
        aug[c] = [x / inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c] != 0:
                f = aug[i][c]
                aug[i] = [a - f * b for a, b in zip(aug[i], aug[c])]
    return tuple(tuple(row[n:]) for row in aug)


def det(A: Sequence[Sequence]) -> Fraction:
    """Exact determinant (fraction-free on the integerized matrix)."""
    n = len(A)
    if n == 0:
        return Fraction(1)
    denom = Fraction(1)
    m = []
    for row in A:
        ints = [frac(x) for x in row]
        mult = lcm(*(x.denominator for x in ints))
        denom *= mult
        m.append([int(x * mult) for x in ints])
    sign = 1
    prev = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        for i in range(c + 1, n):
            for j in range(c + 1, n):
                m[i][j] = (m[c][c] * m[i][j] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = m[c][c]
    return Fraction(sign * m[n - 1][n - 1]) / denom


def integer_kernel_basis(rows: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Basis of the lattice {z in Z^n : A z = 0} for an integer matrix A.

    Column reduction by unimodular operations; the columns of the tracked
    unimodular matrix that end up annihilated form a lattice basis of the
    kernel (saturated, not merely a finite-index sublattice).
    """
    A = [list(r) for r in rows]
    U = [[int(i == j) for j in range(n)] for i in range(n)]  # column ops tracker

    def col(mat, j):
        return [mat[i][j] for i in range(len(mat))]

    def addcol(mat, dst, src, q):
        for i in range(len(mat)):
            mat[i][dst] += q * mat[i][src]

    def swapcol(mat, a, b):
        for i in range(len(mat)):
            mat[i][a], mat[i][b] = mat[i][b], mat[i][a]

    r = 0
    for i in range(len(A)):
        # find a column with the smallest nonzero |entry| in row i, cols >= r
        while True:
            nz = [j for j in range(r, n) if A[i][j] != 0]
            if not nz:
                break
            jmin = min(nz, key=lambda j: abs(A[i][j]))
            if jmin != r:
                swapcol(A, r, jmin)
                swapcol(U, r, jmin)
            done = True
            for j in range(r + 1, n):
                if A[i][j] != 0:
                    q = A[i][j] // A[i][r]
                    addcol(A, j, r, -q)
                    addcol(U, j, r, -q)
                    if A[i][j] != 0:
                        done = False
            if done:
                break
        if r < n and A[i][r] != 0:
            r += 1
        if r == n:
            break
    kernel = []
    for j in range(r, n):
        if all(A[i][j] == 0 for i in range(len(A))):
            kernel.append(tuple(col(U, j)))
    return kernel


# ---------------------------------------------------------------------------
# Polyhedron representations


@dataclass(frozen=True)
class HPolyhedron:
    """Inequality description {x : A x <= b} with exact rational data."""
    A: Matrix
    b: Vector
    # 1-based indices of rows known to hold with equality on the whole set
    # (populated by remove_redundancy).
    equality_rows: tuple[int, ...] = ()

    def __post_init__(self):
        if len(self.A) != len(self.b):
            raise PolyhedronError("row count mismatch between A and b")
        widths = {len(r) for r in self.A}
        if len(widths) > 1:
            raise PolyhedronError("ragged inequality matrix")

    @classmethod
    def from_rows(cls, A: Iterable[Iterable], b: Iterable, equality_rows=()) -> "HPolyhedron":
        return cls(matrix(A), vector(b), tuple(equality_rows))

    @property
    def m(self) -> int:
        return len(self.A)

    @property
    def n(self) -> int:
        return len(self.A[0]) if self.A else 0

    def contains(self, x: Sequence) -> bool:
        x = vector(x)
        eq = set(self.equality_rows)
        for i, (row, bb) in enumerate(zip(self.A, self.b), start=1):
            v = dot(row, x)
            if (v != bb) if i in eq else (v > bb):
                return False
        return True

    def dilate(self, factor) -> "HPolyhedron":
        """The dilate factor*P (factor > 0)."""
        f = frac(factor)
        if f <= 0:
            raise ValueError("dilation factor must be positive")
        return HPolyhedron(self.A, tuple(f * bb for bb in self.b), self.equality_rows)

    def row(self, i: int) -> tuple[Vector, Fraction]:
        """1-based row access: (a_i, b_i)."""
        return self.A[i - 1], self.b[i - 1]


@dataclass(frozen=True)
class VPolyhedron:
    """Generator description conv(vertices) + cone(rays)."""
    vertices: Matrix
    rays: Matrix = ()

    @classmethod
    def from_points(cls, points: Iterable[Iterable], rays: Iterable[Iterable] = ()) -> "VPolyhedron":
        return cls(matrix(points), matrix(rays))

    @property
    def k(self) -> int:
        return len(self.vertices)

    @property
    def n(self) -> int:
        if self.vertices:
            return len(self.vertices[0])
        if self.rays:
            return len(self.rays[0])
        return 0

    @property
    def is_empty(self) -> bool:
        return not self.vertices

    def vertex(self, j: int) -> Vector:
        """1-based vertex access."""
        return self.vertices[j - 1]


@dataclass(frozen=True)
class AffineMap:
    """x |-> A x + t with invertible linear part."""
    A: Matrix
    t: Vector

    def apply(self, x: Sequence) -> Vector:
        return vec_add(mat_vec(self.A, x), self.t)

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self after other: x |-> self(other(x))."""
        return AffineMap(mat_mul(self.A, other.A), vec_add(mat_vec(self.A, other.t), self.t))

    def inverse(self) -> "AffineMap":
        Ainv = invert_matrix(self.A)
        return AffineMap(Ainv, vec_scale(-1, mat_vec(Ainv, self.t)))


# ---------------------------------------------------------------------------
# Exact linear programming (two-phase simplex with Bland's rule)


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Optional[Fraction] = None
    point: Optional[Vector] = None

    @property
    def is_optimal(self) -> bool:
        return self.status == "optimal"


def solve_lp(P: HPolyhedron, c: Sequence, maximize: bool = True) -> LPResult:
    """Maximize (default) or minimize c.x over {A x <= b}.

    Rows listed in P.equality_rows are held at equality (no slack).

    Deterministic: Bland's smallest-index pivoting rule throughout, so reruns
    and alternative-optima situations always yield the same argmax.
    Infeasible and unbounded are ordinary result statuses, not exceptions.
    """
    c = vector(c)
    if not maximize:
        res = solve_lp(P, vec_scale(-1, c), maximize=True)
        if res.status == "optimal":
            return LPResult("optimal", -res.value, res.point)
        return res
    m, n = P.m, P.n
    if n != len(c):
        raise ValueError("objective length does not match dimension")
    # variables: u (n), w (n) with x = u - w, slacks s (m); then artificials.
    total = 2 * n + m

    # rows normalized so the right-hand side is nonnegative
    eq = set(P.equality_rows)
    rows = []
    rhs = []
    for i in range(m):
        a = list(P.A[i])
        bb = P.b[i]
        # equality rows get no slack; phase 1 then starts them on an artificial
        slack = [Fraction(int(j == i and (i + 1) not in eq)) for j in range(m)]
        row = [frac(v) for v in a] + [-frac(v) for v in a] + slack
        if bb < 0:
            row = [-v for v in row]
            bb = -bb
        rows.append(row)
        rhs.append(frac(bb))

    basis = []
    art_cols = []
    for i in range(m):
        # slack column is usable as the initial basis only if its sign survived
        scol = 2 * n + i
        if rows[i][scol] == 1:
            basis.append(scol)
        else:
            col = total + len(art_cols)
            art_cols.append(col)
            basis.append(col)
    ncols = total + len(art_cols)
    # extend rows with artificial columns
    for i in range(m):
        ext = [Fraction(0)] * len(art_cols)
        if basis[i] >= total:
            ext[basis[i] - total] = Fraction(1)
        rows[i] = rows[i] + ext

    def pivot(tab, rhs_, basis_, obj, objval, r, col):
        pv = tab[r][col]
        tab[r] = [v / pv for v in tab[r]]
        rhs_[r] /= pv
        for i in range(len(tab)):
            if i != r and tab[i][col] != 0:
                f = tab[i][col]
                tab[i] = [a - f * bv for a, bv in zip(tab[i], tab[r])]
                rhs_[i] -= f * rhs_[r]
        if obj is not None and obj[col] != 0:
            f = obj[col]
            for j in range(len(obj)):
                obj[j] -= f * tab[r][j]
            objval[0] -= f * rhs_[r]
        basis_[r] = col

    def run_simplex(tab, rhs_, basis_, obj, objval, allowed):
        # minimize obj.z; Bland's rule
        while True:
            enter = next((j for j in allowed if obj[j] < 0), None)
            if enter is None:
                return "optimal"
            ratios = [(rhs_[i] / tab[i][enter], basis_[i], i)
                      for i in range(len(tab)) if tab[i][enter] > 0]
            if not ratios:
                return "unbounded"
            _, _, r = min(ratios, key=lambda t: (t[0], t[1]))
            pivot(tab, rhs_, basis_, obj, objval, r, enter)

    # phase 1: minimize sum of artificials
    if art_cols:
        obj = [Fraction(0)] * ncols
        for col in art_cols:
            obj[col] = Fraction(1)
        objval = [Fraction(0)]
        # price out the basic artificials
        for i, bcol in enumerate(basis):
            if bcol >= total:
                for j in range(ncols):
                    obj[j] -= rows[i][j]
                objval[0] -= rhs[i]
        run_simplex(rows, rhs, basis, obj, objval, range(ncols))
        if objval[0] != 0:
            return LPResult("infeasible")
        # drive leftover artificials out of the basis
        for i in range(m):
            if basis[i] >= total:
                col = next((j for j in range(total) if rows[i][j] != 0), None)
                if col is not None:
                    pivot(rows, rhs, basis, None, None, i, col)
        # Rows still basic in an artificial are identically zero; harmless.

    # phase 2: minimize -c.x = -c.u + c.w
    obj = [Fraction(0)] * ncols
    for j in range(n):
        obj[j] = -c[j]
        obj[n + j] = c[j]
    for col in art_cols:
        obj[col] = Fraction(0)
    objval = [Fraction(0)]
    for i, bcol in enumerate(basis):
        if obj[bcol] != 0:
            f = obj[bcol]
            for j in range(ncols):
                obj[j] -= f * rows[i][j]
            objval[0] -= f * rhs[i]
    allowed = [j for j in range(total)]  # artificials never re-enter
    status = run_simplex(rows, rhs, basis, obj, objval, allowed)
    if status == "unbounded":
        return LPResult("unbounded")
    x = [Fraction(0)] * n
    for i, bcol in enumerate(basis):
        if bcol < n:
            x[bcol] += rhs[i]
        elif bcol < 2 * n:
            x[bcol - n] -= rhs[i]
    point = tuple(x)
    return LPResult("optimal", dot(c, point), point)


def feasible_point(P: HPolyhedron) -> Optional[Vector]:
    res = solve_lp(P, zero_vector(P.n))
    return res.point if res.is_optimal else None


# ---------------------------------------------------------------------------
# Incidence, affine hulls, redundancy


@dataclass(frozen=True)
class IncidenceData:
    """Which generators satisfy which rows with equality (exact zero test).

    Stored as per-row bitmasks over generator indices; all exposed index sets
    are 1-based, matching the rest of the toolkit.
    """
    m: int
    k: int
    row_masks: tuple[int, ...]

    def row_set(self, i: int) -> FaceIndexSet:
        mask = self.row_masks[i - 1]
        return frozenset(j + 1 for j in range(self.k) if mask >> j & 1)

    def column_set(self, j: int) -> FaceIndexSet:
        return frozenset(i + 1 for i in range(self.m)
                         if self.row_masks[i] >> (j - 1) & 1)

    def row_sets(self) -> tuple[FaceIndexSet, ...]:
        return tuple(self.row_set(i) for i in range(1, self.m + 1))

    def column_sets(self) -> tuple[FaceIndexSet, ...]:
        return tuple(self.column_set(j) for j in range(1, self.k + 1))


def incidence(P: HPolyhedron, V: VPolyhedron) -> IncidenceData:
    """Exact row/generator incidence: vertex v is on row i iff a_i.v = b_i;
    ray r is on row i iff a_i.r = 0."""
    gens = list(V.vertices) + list(V.rays)
    nverts = len(V.vertices)
    masks = []
    for a, bb in zip(P.A, P.b):
        mask = 0
        for j, g in enumerate(gens):
            val = dot(a, g)
            tight = (val == bb) if j < nverts else (val == 0)
            if tight:
                mask |= 1 << j
        masks.append(mask)
    return IncidenceData(P.m, len(gens), tuple(masks))


@dataclass(frozen=True)
class AffineHull:
    """aff = point + span(directions); dim = len(directions)."""
    point: Vector
    directions: Matrix

    @property
    def dim(self) -> int:
        return len(self.directions)

    def coordinates(self, x: Sequence) -> Vector:
        """Coordinates y with x = point + directions^T y (exact; raises if x
        is outside the hull)."""
        diff = vec_sub(x, self.point)
        cols = transpose(self.directions)  # n x d
        y = solve_linear(cols, diff)
        if y is None:
            raise ValueError("point not in affine hull")
        return y

    def embed(self, y: Sequence) -> Vector:
        return vec_add(self.point, mat_vec(transpose(self.directions), y))


def affine_hull(obj: Union[VPolyhedron, HPolyhedron, Sequence]) -> AffineHull:
    """Affine hull with an exact rational direction basis.

    Accepts a VPolyhedron, a plain point sequence, or an HPolyhedron (for the
    latter, implicit equalities are located by exact LP per row).
    """
    if isinstance(obj, HPolyhedron):
        x0 = feasible_point(obj)
        if x0 is None:
            raise EmptyPolyhedronError("empty polyhedron has no affine hull")
        eq_rows = []
        for i in range(obj.m):
            res = solve_lp(obj, obj.A[i], maximize=False)
            if res.is_optimal and res.value == obj.b[i]:
                eq_rows.append(obj.A[i])
        dirs = nullspace(eq_rows, obj.n) if eq_rows else identity_matrix(obj.n)
        return AffineHull(x0, dirs)
    if isinstance(obj, VPolyhedron):
        pts = list(obj.vertices)
        rays = list(obj.rays)
    else:
        pts = [vector(p) for p in obj]
        rays = []
    if not pts:
        raise EmptyPolyhedronError("no points given")
    base = pts[0]
    diffs = [vec_sub(p, base) for p in pts[1:]] + rays
    return AffineHull(base, row_space_basis(diffs) if diffs else ())


def affinely_independent_subset(points: Sequence[Sequence]) -> list[int]:
    """0-based indices of a maximal affinely independent subset, greedy in
    input order (deterministic)."""
    pts = [vector(p) for p in points]
    if not pts:
        return []
    chosen = [0]
    dirs: list[Vector] = []
    for idx in range(1, len(pts)):
        cand = dirs + [vec_sub(pts[idx], pts[chosen[0]])]
        if rank(cand) > len(dirs):
            dirs = [tuple(r) for r in row_space_basis(cand)]
            chosen.append(idx)
    return chosen


def remove_redundancy(P: HPolyhedron) -> HPolyhedron:
    """Irredundant subsystem defining the same set, by exact LP per row.

    Implicit equalities are detected first and reported via equality_rows on
    the result.  Raises EmptyPolyhedronError for an empty input.
    """
    if feasible_point(P) is None:
        raise EmptyPolyhedronError("system is infeasible")
    # drop exact duplicates (and positive multiples) first, keep first copies;
    # an equality mark on any duplicate survives on the kept copy
    in_eq = set(P.equality_rows)
    seen = {}
    keep = []
    marked = []
    for i in range(P.m):
        key = primitive(tuple(P.A[i]) + (P.b[i],))
        if key not in seen:
            seen[key] = len(keep)
            keep.append(i)
            marked.append((i + 1) in in_eq)
        elif (i + 1) in in_eq:
            marked[seen[key]] = True
    A = [P.A[i] for i in keep]
    b = [P.b[i] for i in keep]

    # implicit equalities: a_i x = b_i over the whole set
    eq_flags = []
    Q = HPolyhedron(tuple(A), tuple(b),
                    tuple(j + 1 for j in range(len(A)) if marked[j]))
    for i in range(len(A)):
        if marked[i]:
            eq_flags.append(True)
            continue
        res = solve_lp(Q, A[i], maximize=False)
        eq_flags.append(res.is_optimal and res.value == b[i])

    # sequential irredundancy filter over the inequality rows
    active = list(range(len(A)))
    i = 0
    while i < len(active):
        idx = active[i]
        if eq_flags[idx]:
            i += 1
            continue
        others = [j for j in active if j != idx]
        sub = HPolyhedron(tuple(A[j] for j in others), tuple(b[j] for j in others),
                          tuple(pos + 1 for pos, j in enumerate(others) if marked[j]))
        res = solve_lp(sub, A[idx])
        if res.status == "optimal" and res.value <= b[idx]:
            active = others
        else:
            i += 1
    newA = tuple(A[j] for j in active)
    newb = tuple(b[j] for j in active)
    eqs = tuple(pos + 1 for pos, j in enumerate(active) if eq_flags[j])
    return HPolyhedron(newA, newb, eqs)
