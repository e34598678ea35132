"""Lattice-point counting, Ehrhart interpolation, and symmetric slicing.

Everything is built on one exact enumeration backbone: integer points are
listed coordinate by coordinate, with the feasible interval of each next
coordinate taken from a pair of rational LPs, so the search never leaves the
bounding box of the remaining subsystem.  On top of that sit the Ehrhart
quasi-polynomial (interpolated per residue class of the dilation factor and
re-checked against a direct count), the exact volume (a fan over the facets
from a relative-interior point, each facet triangulated by pulling), and a
slice decomposition that splits an invariant polytope into fibers over the
integral anchors of its invariant subspace.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, factorial, floor, lcm
from typing import Optional, Sequence

from .polycore import (
    AffineHull,
    HPolyhedron,
    Matrix,
    PolyhedronError,
    Vector,
    VerificationError,
    VPolyhedron,
    affine_hull,
    det,
    dot,
    feasible_point,
    frac,
    incidence,
    integer_kernel_basis,
    matrix,
    nullspace,
    primitive,
    solve_linear,
    solve_lp,
    vec_scale,
    vec_sub,
    vector,
    zero_vector,
)
from .repconv import _parallel_map, convert_dd
from .symilp import (
    LinearProgram,
    _check_blocks,
    block_group,
    canonical_core_point,
    check_invariance,
    fiber_barycenter_lattice,
)

__all__ = [
    "FiberOrbit",
    "QuasiPolynomial",
    "SliceDecomposition",
    "count_lattice_points",
    "count_with_symmetry",
    "ehrhart",
    "slice_decomposition",
    "volume",
]


# ---------------------------------------------------------------------------
# Counting by pruned enumeration


def count_lattice_points(P: HPolyhedron) -> int:
    """Number of integer points of a bounded polyhedron, counted exactly.

    The first coordinate is bounded by two exact LPs and scanned; each value
    is substituted into the system and the remainder is counted recursively.
    The last coordinate is resolved in closed form, so no LP ever runs on a
    one-dimensional subsystem.  An unbounded polyhedron is rejected.
    """
    if P.n == 0:
        eq = set(P.equality_rows)
        ok = all((bb == 0) if i in eq else (bb >= 0)
                 for i, bb in enumerate(P.b, start=1))
        return 1 if ok else 0
    return _count(list(P.A), list(P.b), frozenset(P.equality_rows), P.n)


def _count(A: list, b: list, eq: frozenset, n: int) -> int:
    if n == 1:
        return _segment_count(A, b, eq)
    Q = HPolyhedron(tuple(A), tuple(b), tuple(sorted(eq)))
    e1 = (Fraction(1),) + (Fraction(0),) * (n - 1)
    top = solve_lp(Q, e1)
    if top.status == "infeasible":
        return 0
    bot = solve_lp(Q, e1, maximize=False)
    if top.status != "optimal" or bot.status != "optimal":
        raise PolyhedronError("cannot count lattice points of an unbounded polyhedron")
    total = 0
    for v in range(ceil(bot.value), floor(top.value) + 1):
        sub_b = [bb - row[0] * v for row, bb in zip(A, b)]
        sub_A = [row[1:] for row in A]
        total += _count(sub_A, sub_b, eq, n - 1)
    return total


def _segment_count(A: list, b: list, eq: frozenset) -> int:
    """Integer count of {x : a_i x <= b_i} over one variable, in closed form."""
    lo: Optional[Fraction] = None
    hi: Optional[Fraction] = None
    pin: Optional[Fraction] = None
    for i, (row, bb) in enumerate(zip(A, b), start=1):
        a = row[0]
        if i in eq:
            if a == 0:
                if bb != 0:
                    return 0
            else:
                v = bb / a
                if pin is not None and v != pin:
                    return 0
                pin = v
        elif a == 0:
            if bb < 0:
                return 0
        elif a > 0:
            hi = bb / a if hi is None else min(hi, bb / a)
        else:
            lo = bb / a if lo is None else max(lo, bb / a)
    if pin is not None:
        if (lo is not None and pin < lo) or (hi is not None and pin > hi):
            return 0
        return 1 if pin.denominator == 1 else 0
    if lo is None or hi is None:
        raise PolyhedronError("cannot count lattice points of an unbounded polyhedron")
    return max(floor(hi) - ceil(lo) + 1, 0)


# ---------------------------------------------------------------------------
# Ehrhart quasi-polynomials


@dataclass(frozen=True)
class QuasiPolynomial:
    """Counting function lam -> p_{lam mod period}(lam) with exact coefficients.

    components[i] holds the coefficients of p_i, constant term first.  Every
    component has the same degree and the same leading coefficient.
    """
    period: int
    components: tuple[tuple[Fraction, ...], ...]
    degree: int

    def __post_init__(self):
        if self.period < 1:
            raise ValueError("period must be a positive integer")
        comps = tuple(tuple(frac(c) for c in comp) for comp in self.components)
        object.__setattr__(self, "components", comps)
        if len(comps) != self.period:
            raise ValueError("one component per residue class is required")
        if any(len(comp) != self.degree + 1 for comp in comps):
            raise ValueError("all components must share the common degree")
        if len({comp[-1] for comp in comps}) != 1:
            raise ValueError("leading coefficients must agree across residue classes")

    @property
    def leading_coefficient(self) -> Fraction:
        return self.components[0][-1]

    def evaluate(self, lam: int) -> Fraction:
        return _eval_poly(self.components[lam % self.period], lam)


def _eval_poly(coeffs: Sequence[Fraction], x) -> Fraction:
    acc = Fraction(0)
    for c in reversed(list(coeffs)):
        acc = acc * frac(x) + c
    return acc


def _interpolate(xs: Sequence[int], ys: Sequence[int]) -> tuple[Fraction, ...]:
    """Coefficients (constant first) of the polynomial through (xs, ys)."""
    rows = [[frac(x) ** j for j in range(len(xs))] for x in xs]
    sol = solve_linear(rows, [frac(y) for y in ys])
    if sol is None:  # distinct abscissae make the Vandermonde invertible
        raise VerificationError("interpolation system was singular")
    return sol


def ehrhart(P: HPolyhedron, period_bound: int = 24) -> QuasiPolynomial:
    """Ehrhart quasi-polynomial of a bounded, full-dimensional polytope.

    The period is the lcm of the vertex-coordinate denominators (an error if
    it exceeds period_bound).  For each residue class the dilate counts at
    degree+1 sample points are interpolated exactly, then the component is
    verified against one further direct count; a mismatch is an error, never
    a silently wrong polynomial.  An integral polytope yields period 1.
    """
    V = convert_dd(P)
    if V.rays:
        raise PolyhedronError("Ehrhart counting requires a bounded polyhedron")
    pts = list(V.vertices)
    d = affine_hull(pts).dim
    if d != P.n:
        raise PolyhedronError(
            "Ehrhart interpolation requires a full-dimensional polytope")
    k = 1
    for v in pts:
        for c in v:
            k = lcm(k, c.denominator)
    if k > period_bound:
        raise PolyhedronError(f"period {k} exceeds the allowed bound {period_bound}")
    components = []
    for i in range(k):
        lams = [i + k * j for j in range(d + 3) if i + k * j > 0]
        samples = lams[: d + 1]
        counts = [count_lattice_points(P.dilate(lam)) for lam in samples]
        coeffs = _interpolate(samples, counts)
        probe = lams[d + 1]
        expect = count_lattice_points(P.dilate(probe))
        if _eval_poly(coeffs, probe) != expect:
            raise VerificationError(
                f"quasi-polynomial disagrees with the direct count at dilate {probe}")
        components.append(coeffs)
    return QuasiPolynomial(k, tuple(components), d)


# ---------------------------------------------------------------------------
# Exact volume


def volume(P: HPolyhedron, apex: Optional[Sequence] = None) -> Fraction:
    """Volume of a bounded polytope, relative to the lattice of its hull.

    Fans from a relative-interior point (the vertex centroid unless an apex
    inside the polytope is supplied) over the facets; every facet is
    triangulated recursively by pulling from its least vertex, and each
    simplex contributes |det| / d!.  A lower-dimensional polytope is measured
    in coordinates of a lattice basis of its direction space, so a diagonal
    unit cell has measure 1, matching the Ehrhart leading coefficient.
    A zero-dimensional polytope has measure 1 by convention.
    """
    V = convert_dd(P)
    if V.rays:
        raise PolyhedronError("volume requires a bounded polyhedron")
    pts = sorted(V.vertices)
    hull = affine_hull(pts)
    d = hull.dim
    if d == 0:
        return Fraction(1)
    if d < P.n:
        # lattice-normalized coordinates on the hull: integer kernel of the
        # hull normals is a basis of Z^n restricted to the direction space
        normals = [primitive(v) for v in nullspace(hull.directions, P.n)]
        lat = integer_kernel_basis(normals, P.n)
        frame = AffineHull(pts[0], matrix(lat))
        try:
            work = [frame.coordinates(p) for p in pts]
            c = frame.coordinates(vector(apex)) if apex is not None else None
        except ValueError:
            raise PolyhedronError("apex must lie in the affine hull of the polytope")
    else:
        work = pts
        c = vector(apex) if apex is not None else None
    if c is None:
        c = vec_scale(Fraction(1, len(work)),
                      [sum(p[t] for p in work) for t in range(d)])
    sub = VPolyhedron.from_points(work)
    H = convert_dd(sub)
    inc = incidence(H, sub)
    skip = set(H.equality_rows)
    total = Fraction(0)
    for i in range(1, H.m + 1):
        if i in skip:
            continue
        face = tuple(sorted(inc.row_set(i)))
        for simplex in _pull(work, face, d - 1):
            total += abs(det([vec_sub(work[j - 1], c) for j in simplex]))
    return total / factorial(d)


def _pull(pts: Sequence[Vector], face: tuple[int, ...], fdim: int) -> list[tuple[int, ...]]:
    """Pulling triangulation of a face given by sorted 1-based indices.

    The apex is the least vertex of the face; the other simplex vertices come
    from recursively triangulated facets avoiding the apex.  Returns tuples of
    fdim + 1 affinely independent indices.
    """
    if len(face) == fdim + 1:
        return [face]
    v = face[0]
    fpts = [pts[j - 1] for j in face]
    frame = affine_hull(fpts)
    local = [frame.coordinates(p) for p in fpts]
    sub = VPolyhedron.from_points(local)
    H = convert_dd(sub)
    inc = incidence(H, sub)
    skip = set(H.equality_rows)
    out = []
    for i in range(1, H.m + 1):
        if i in skip:
            continue
        child = tuple(sorted(face[j - 1] for j in inc.row_set(i)))
        if v in child:
            continue
        out.extend(s + (v,) for s in _pull(pts, child, fdim - 1))
    return out


# ---------------------------------------------------------------------------
# Slice decomposition along the invariant subspace


@dataclass(frozen=True)
class FiberOrbit:
    """One orbit of fibers over an integral anchor of the invariant subspace.

    The fiber polytope lives in fiber coordinates: x = base_point + B^T y for
    the stored decomposition basis B, and base_point is integral, so integer
    points of the fiber correspond exactly to integer coordinate vectors.
    """
    sums: tuple[int, ...]
    anchor: Vector
    base_point: Vector
    orbit_size: int
    fiber: HPolyhedron


@dataclass(frozen=True)
class SliceDecomposition:
    """An invariant polytope split into fibers over its invariant slice.

    invariant_slice describes P meet the invariant subspace in barycenter
    coordinates t (one per block, x = sum_j t_j over block j).  The total
    lattice-point count equals sum(orbit_size * fiber count) over the orbits.
    """
    blocks: tuple[int, ...]
    invariant_slice: HPolyhedron
    basis: Matrix
    fiber_orbits: tuple[FiberOrbit, ...]


def _block_offsets(blocks: Sequence[int]) -> list[int]:
    offs = [0]
    for nb in blocks:
        offs.append(offs[-1] + nb)
    return offs


def _indicator(n: int, lo: int, hi: int) -> Vector:
    return tuple(Fraction(1) if lo <= t < hi else Fraction(0) for t in range(n))


def slice_decomposition(P: HPolyhedron, blocks: Sequence[int]) -> SliceDecomposition:
    """Decompose a block-invariant polytope into fibers over integral anchors.

    Anchors are the integral sum vectors of the blocks of size >= 2 whose
    fiber meets P; singleton blocks already lie inside the invariant subspace
    and stay as free directions of every fiber, so a fully trivial action
    keeps the whole polytope as its one fiber.  The block action fixes every
    block sum, hence each anchor orbit is a singleton.  Fibers are written in
    the difference basis of each block plus the singleton axes, a lattice
    basis of the fiber direction lattice, with an integral base point, so
    counting integer coordinate vectors counts integral fiber points.
    """
    blocks = _check_blocks(blocks, P.n)
    n = P.n
    if not check_invariance(LinearProgram(P, zero_vector(n)), block_group(blocks)):
        raise PolyhedronError("polyhedron is not invariant under the block action")
    offs = _block_offsets(blocks)
    k = len(blocks)
    # invariant slice in barycenter coordinates: x = sum_j t_j 1_{B_j}
    cols = [_indicator(n, offs[j], offs[j + 1]) for j in range(k)]
    slice_rows = matrix([[dot(a, col) for col in cols] for a in P.A])
    inv_slice = HPolyhedron(slice_rows, P.b, P.equality_rows)

    live = [j for j in range(k) if blocks[j] >= 2]
    basis_rows: list[Vector] = []
    for j in range(k):
        if blocks[j] == 1:
            basis_rows.append(_indicator(n, offs[j], offs[j] + 1))
        else:
            for t in range(offs[j], offs[j + 1] - 1):
                e = [Fraction(0)] * n
                e[t], e[t + 1] = Fraction(1), Fraction(-1)
                basis_rows.append(tuple(e))
    basis = matrix(basis_rows)

    lattice = fiber_barycenter_lattice(blocks)
    ranges = []
    for j in live:
        ind = _indicator(n, offs[j], offs[j + 1])
        hi = solve_lp(P, ind)
        if hi.status == "infeasible":
            ranges = None
            break
        lo = solve_lp(P, ind, maximize=False)
        if hi.status != "optimal" or lo.status != "optimal":
            raise PolyhedronError("slice decomposition requires bounded block sums")
        ranges.append(range(ceil(lo.value), floor(hi.value) + 1))

    fiber_rows = matrix([[dot(a, bv) for bv in basis_rows] for a in P.A])
    orbits = []
    for sums in _lex_product(ranges) if ranges is not None else ():
        full = [0] * k
        for j, s in zip(live, sums):
            full[j] = s
        base = canonical_core_point(blocks, full).z
        fiber_b = tuple(bb - dot(a, base) for a, bb in zip(P.A, P.b))
        fiber = HPolyhedron(fiber_rows, fiber_b, P.equality_rows)
        if feasible_point(fiber) is None:
            continue
        anchor = lattice.anchor(full)
        orbits.append(FiberOrbit(tuple(sums), anchor, base, 1, fiber))
    return SliceDecomposition(blocks, inv_slice, basis, tuple(orbits))


def _lex_product(ranges: Sequence[range]):
    """Cartesian product of integer ranges in lexicographic order."""
    if not ranges:
        yield ()
        return
    for head in ranges[0]:
        for tail in _lex_product(ranges[1:]):
            yield (head,) + tail


def count_with_symmetry(P: HPolyhedron, blocks: Sequence[int], jobs: int = 1) -> int:
    """Lattice-point count assembled fiber by fiber from the decomposition.

    Counts the representative fiber of each orbit and multiplies by the orbit
    size; fiber counts are independent and merged by addition in input order,
    so the result does not depend on the worker count.
    """
    dec = slice_decomposition(P, blocks)
    counts = _parallel_map(lambda fo: count_lattice_points(fo.fiber),
                           dec.fiber_orbits, jobs)
    return sum(fo.orbit_size * m for fo, m in zip(dec.fiber_orbits, counts))
