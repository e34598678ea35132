"""Representation conversion for polytopes, plain and up to symmetries.

The base converter is the double description method run on a homogenization
cone, entirely in exact rational arithmetic.  On top of it sit two orbitwise
methods: adjacency decomposition (seed one facet, walk to neighbors across
ridges, keep one representative per orbit) and incidence decomposition
(enumerate the facets through one representative point of each input orbit).
Both catalog facet orbits in an OrbitLedger keyed by canonical incident-vertex
sets, so any two runs agree key-for-key regardless of scheduling.

For an H-description the heavy work happens on the polar dual: the rows map
to dual points whose facets are exactly the input's vertices, and the facet
orbits of the input are its row orbits.  Either way a completed ledger knows
the full vertex list, the group acting on vertex indices, and one supporting
row per facet orbit.
"""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Union

from .polycore import (
    EmptyPolyhedronError,
    HPolyhedron,
    PolyhedronError,
    VPolyhedron,
    Vector,
    affine_hull,
    dot,
    incidence,
    invert_matrix,
    mat_mul,
    mat_vec,
    nullspace,
    primitive,
    rank,
    remove_redundancy,
    solve_linear,
    solve_lp,
    transpose,
    vec_add,
    vec_scale,
    vec_sub,
    vector,
    zero_vector,
)
from .permgrp import (
    Permutation,
    PermutationGroup,
    SetOrbit,
    orbit_of_set,
    set_stabilizer,
)
from .symdetect import realize_row_permutation, realize_vertex_permutation


# ---------------------------------------------------------------------------
# Double description on cones


def dd_cone(rows: Sequence[Sequence], n: int) -> tuple[list[tuple[int, ...]], list[tuple[int, ...]]]:
    """Double description of the cone {x in R^n : r.x <= 0 for every row r}.

    Returns (lineality, rays) as primitive integer tuples; the cone equals
    span(lineality) + cone(rays).  Rows are inserted in the given order and
    rays are created in a fixed order, so the output is deterministic.
    """
    lin: list[tuple[int, ...]] = [tuple(1 if j == i else 0 for j in range(n))
                                  for i in range(n)]
    rays: list[tuple[int, ...]] = []
    masks: list[int] = []      # per ray: bit t set iff tight on inserted row t
    inserted: list[Vector] = []
    for raw in rows:
        a = vector(raw)
        t = len(inserted)
        lin_vals = [dot(a, l) for l in lin]
        if any(v != 0 for v in lin_vals):
            # the row cuts the lineality space: one direction becomes a ray,
            # the rest of the basis and all rays are projected onto {a.x = 0}
            i0 = next(i for i, v in enumerate(lin_vals) if v != 0)
            l0, v0 = lin[i0], lin_vals[i0]
            lin = [l if v == 0 else primitive(vec_sub(l, vec_scale(v / v0, l0)))
                   for i, (l, v) in enumerate(zip(lin, lin_vals)) if i != i0]
            r0 = l0 if v0 < 0 else tuple(-x for x in l0)
            vr0 = dot(a, r0)
            new_rays, new_masks, seen = [], [], set()
            for r, m in zip(rays, masks):
                vr = dot(a, r)
                rp = r if vr == 0 else primitive(vec_sub(r, vec_scale(vr / vr0, r0)))
                if not any(rp) or rp in seen:
                    continue
                seen.add(rp)
                new_rays.append(rp)
                new_masks.append(m | (1 << t))
            new_rays.append(r0)
            new_masks.append((1 << t) - 1)
            rays, masks = new_rays, new_masks
        else:
            vals = [dot(a, r) for r in rays]
            if any(v > 0 for v in vals):
                plus = [i for i, v in enumerate(vals) if v > 0]
                minus = [i for i, v in enumerate(vals) if v < 0]
                created, seen = [], set()
                for ip in minus:
                    for iq in plus:
                        z = masks[ip] & masks[iq]
                        # combinatorial adjacency: no third ray tight on the
                        # common tight set of the pair
                        if any(masks[ir] & z == z
                               for ir in range(len(rays)) if ir != ip and ir != iq):
                            continue
                        w = primitive(vec_sub(vec_scale(vals[iq], rays[ip]),
                                              vec_scale(vals[ip], rays[iq])))
                        if w in seen:
                            continue
                        seen.add(w)
                        created.append(w)
                kept_rays, kept_masks = [], []
                for i, (r, m) in enumerate(zip(rays, masks)):
                    if vals[i] > 0:
                        continue
                    kept_rays.append(r)
                    kept_masks.append(m | (1 << t) if vals[i] == 0 else m)
                all_rows = inserted + [a]
                for w in created:
                    mw = 0
                    for s, row_s in enumerate(all_rows):
                        if dot(row_s, w) == 0:
                            mw |= 1 << s
                    kept_rays.append(w)
                    kept_masks.append(mw)
                rays, masks = kept_rays, kept_masks
            else:
                masks = [m | (1 << t) if vals[i] == 0 else m
                         for i, m in enumerate(masks)]
        inserted.append(a)
    return lin, rays


def _h_to_v(P: HPolyhedron) -> VPolyhedron:
    n = P.n
    cone_rows: list[tuple] = [(Fraction(-1),) + tuple(zero_vector(n))]  # x0 >= 0
    eq = set(P.equality_rows)
    for i in range(P.m):
        row = (-P.b[i],) + tuple(P.A[i])
        cone_rows.append(row)
        if (i + 1) in eq:
            cone_rows.append(tuple(-x for x in row))
    lin, rays = dd_cone(cone_rows, n + 1)
    verts, recs = [], []
    for r in rays:
        if r[0] > 0:
            verts.append(tuple(Fraction(x, r[0]) for x in r[1:]))
        else:
            recs.append(tuple(Fraction(x) for x in r[1:]))
    for l in lin:
        tail = tuple(Fraction(x) for x in l[1:])
        recs.append(tail)
        recs.append(tuple(-x for x in tail))
    if not verts:
        raise EmptyPolyhedronError("polyhedron has no points")
    return VPolyhedron.from_points(verts, recs)


def _v_to_h(V: VPolyhedron) -> HPolyhedron:
    if not V.vertices:
        raise EmptyPolyhedronError("no points given")
    n = V.n
    cone_rows = [tuple(v) + (Fraction(-1),) for v in V.vertices]
    cone_rows += [tuple(r) + (Fraction(0),) for r in V.rays]
    lin, rays = dd_cone(cone_rows, n + 1)
    A: list[tuple] = []
    b: list[Fraction] = []
    eq_rows: list[int] = []
    for l in lin:
        if not any(l[:n]):
            continue
        A.append(tuple(Fraction(x) for x in l[:n]))
        b.append(Fraction(l[n]))
        eq_rows.append(len(A))
    for r in rays:
        if not any(r[:n]):
            continue                       # the trivial row 0.x <= 1
        A.append(tuple(Fraction(x) for x in r[:n]))
        b.append(Fraction(r[n]))
    return HPolyhedron.from_rows(A, b, tuple(eq_rows))


def convert_dd(P: Union[HPolyhedron, VPolyhedron]) -> Union[VPolyhedron, HPolyhedron]:
    """Exact representation conversion; direction chosen by input type.

    Output is irredundant for each representation's notion of redundancy
    (extreme generators / facet rows modulo the lineality or hull equalities).
    """
    if isinstance(P, HPolyhedron):
        return _h_to_v(P)
    if isinstance(P, VPolyhedron):
        return _v_to_h(P)
    raise TypeError("expected an HPolyhedron or VPolyhedron")


# ---------------------------------------------------------------------------
# Facet-orbit engine (vertex side)
#
# All engine functions work on a full-dimensional point list in R^d (d >= 1)
# with 1-based indices; facets are identified with their full incident-index
# sets.  Supporting rows are recovered from incidence sets, so recursion only
# ever passes index sets around.


def _parallel_map(fn: Callable, items: Sequence, jobs: int) -> list:
    """Order-preserving map; results are merged by the caller in input order,
    which keeps every pipeline schedule-independent."""
    items = list(items)
    if jobs <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, items))


def _supporting_row(pts: Sequence[Vector], S: frozenset) -> tuple[Vector, Fraction]:
    """(a, delta) with a.x <= delta over pts and equality exactly on S.

    S must be the full incidence set of a facet, so the normal direction is
    unique up to scale and every point off S is strictly below the hyperplane.
    """
    d = len(pts[0])
    members = sorted(S)
    base = pts[members[0] - 1]
    dirs = [vec_sub(pts[i - 1], base) for i in members[1:]]
    ns = nullspace(dirs, d)
    if len(ns) != 1:
        raise PolyhedronError("index set does not span a facet")
    a = vector(ns[0])
    delta = dot(a, base)
    for j in range(len(pts)):
        if (j + 1) in S:
            continue
        val = dot(a, pts[j])
        if val == delta:
            raise PolyhedronError("index set is not a full incidence set")
        if val > delta:
            a = tuple(-x for x in a)
            delta = -delta
        break
    return a, delta


def _initial_facet(pts: Sequence[Vector]) -> frozenset:
    """Deterministic seed facet: maximize the first coordinate, then rotate
    the supporting hyperplane to enlarge the optimal face until it spans
    dimension d-1.  Each rotation pivots within the pencil of hyperplanes
    through the current face, so the face grows strictly."""
    d = len(pts[0])
    c = tuple(Fraction(1 if j == 0 else 0) for j in range(d))
    delta = max(dot(c, p) for p in pts)
    S = {i + 1 for i, p in enumerate(pts) if dot(c, p) == delta}
    while True:
        members = sorted(S)
        base = pts[members[0] - 1]
        dirs = [vec_sub(pts[i - 1], base) for i in members[1:]]
        if rank(dirs) == d - 1:
            return frozenset(S)
        ns = nullspace(dirs, d)
        g = next(v for v in ns if rank([v, c]) == 2)
        gbase = dot(g, base)
        t_best: Optional[Fraction] = None
        arg: list[int] = []
        for i, p in enumerate(pts):
            if (i + 1) in S:
                continue
            tv = (dot(g, p) - gbase) / (delta - dot(c, p))
            if t_best is None or tv > t_best:
                t_best, arg = tv, [i + 1]
            elif tv == t_best:
                arg.append(i + 1)
        delta = gbase + t_best * delta
        c = vec_add(g, vec_scale(t_best, c))
        S |= set(arg)


def _neighbor_facet(pts: Sequence[Vector], F: frozenset, c: Vector,
                    delta: Fraction, R: frozenset) -> frozenset:
    """The unique facet other than F containing the ridge R.

    The hyperplanes through aff(R) form a pencil spanned by F's supporting
    row and any second functional vanishing on R; the neighbor is cut out at
    the extreme admissible pencil parameter, a finite maximum over the
    vertices outside F.
    """
    d = len(pts[0])
    members = sorted(R)
    base = pts[members[0] - 1]
    dirs = [vec_sub(pts[i - 1], base) for i in members[1:]]
    ns = nullspace(dirs, d)
    g = next(v for v in ns if rank([v, c]) == 2)
    # orient g to support F with equality exactly on R
    f0 = next(i for i in sorted(F) if i not in R)
    if dot(g, pts[f0 - 1]) > dot(g, base):
        g = tuple(-x for x in g)
    gamma = dot(g, base)
    t_best: Optional[Fraction] = None
    arg: list[int] = []
    for i, p in enumerate(pts):
        if (i + 1) in F:
            continue
        tv = (dot(g, p) - gamma) / (delta - dot(c, p))
        if t_best is None or tv > t_best:
            t_best, arg = tv, [i + 1]
        elif tv == t_best:
            arg.append(i + 1)
    return frozenset(set(R) | set(arg))


def _plain_orbits(pts: Sequence[Vector], G: PermutationGroup) -> list[SetOrbit]:
    V = VPolyhedron.from_points(pts)
    H = convert_dd(V)
    inc = incidence(H, V)
    out: list[SetOrbit] = []
    seen: set = set()
    for i in range(1, H.m + 1):
        orb = orbit_of_set(G, inc.row_set(i))
        if orb.representative in seen:
            continue
        seen.add(orb.representative)
        out.append(orb)
    return out


def _idm_orbits(pts: Sequence[Vector], G: PermutationGroup, jobs: int) -> list[SetOrbit]:
    """One representative point per point orbit; all facets through it come
    from the dual of its tangent cone.  Every facet contains some vertex, so
    the union over the orbit representatives covers everything."""
    d = len(pts[0])
    reps = sorted(min(orb) for orb in G.point_orbits())

    def facets_at(p0: int) -> list[SetOrbit]:
        v0 = pts[p0 - 1]
        rows = [vec_sub(p, v0) for i, p in enumerate(pts) if i + 1 != p0]
        lin, rays = dd_cone(rows, d)
        found = []
        for a in rays:
            av0 = dot(a, v0)
            S = frozenset(i + 1 for i, p in enumerate(pts) if dot(a, p) == av0)
            found.append(orbit_of_set(G, S))
        return found

    out: list[SetOrbit] = []
    seen: set = set()
    for result in _parallel_map(facets_at, reps, jobs):
        for orb in result:
            if orb.representative not in seen:
                seen.add(orb.representative)
                out.append(orb)
    return out


def _adm_orbits(pts: Sequence[Vector], G: PermutationGroup,
                levels: tuple[int, int], depth: int, jobs: int) -> list[SetOrbit]:
    """Breadth-first walk over facet orbits.

    A pending representative's ridges are the facets of its own vertex set,
    computed up to the facet stabilizer; rotating one ridge per stabilizer
    orbit reaches a member of every neighboring facet orbit.  The frontier is
    processed in sorted rounds and results are merged in batch order, so the
    ledger is identical for any worker count.
    """

    def process(key: tuple[int, ...]) -> list[SetOrbit]:
        F = frozenset(key)
        c, delta = _supporting_row(pts, F)
        members = sorted(F)
        sub_ambient = [pts[i - 1] for i in members]
        hull = affine_hull(sub_ambient)
        sub_pts = [hull.coordinates(p) for p in sub_ambient]
        stab = set_stabilizer(G, F)
        pos = {v: j + 1 for j, v in enumerate(members)}
        sub_gens = [Permutation(tuple(pos[g(v)] for v in members))
                    for g in stab.generators]
        sub_group = PermutationGroup(sub_gens, degree=len(members))
        ridges = _facet_orbit_engine(sub_pts, sub_group, levels, depth + 1, 1)
        found = []
        for ridge in ridges:
            R = frozenset(members[j - 1] for j in ridge.representative)
            found.append(orbit_of_set(G, _neighbor_facet(pts, F, c, delta, R)))
        return found

    seed = orbit_of_set(G, _initial_facet(pts))
    entries: dict[tuple[int, ...], SetOrbit] = {seed.representative: seed}
    frontier = [seed.representative]
    while frontier:
        batch = sorted(frontier)
        frontier = []
        for result in _parallel_map(process, batch, jobs if depth == 0 else 1):
            for orb in result:
                if orb.representative not in entries:
                    entries[orb.representative] = orb
                    frontier.append(orb.representative)
    return list(entries.values())


def _facet_orbit_engine(pts: Sequence[Vector], G: PermutationGroup,
                        levels: tuple[int, int], depth: int, jobs: int) -> list[SetOrbit]:
    """Facet orbits of conv(pts), one SetOrbit per orbit, discovery order.

    pts must be distinct and affinely span their space.  The levels policy
    (l1, l2) picks the method by recursion depth: below l1 incidence
    decomposition, below l2 adjacency decomposition with the stabilizer,
    anything deeper is a plain conversion.
    """
    if not pts:
        return []
    d = len(pts[0])
    l1, l2 = levels
    if d == 0:
        return []
    if d <= 1:
        # a segment's two facets share no ridge, so the walk cannot reach
        # one from the other; enumerate directly
        return _plain_orbits(pts, G)
    if depth < l1:
        return _idm_orbits(pts, G, jobs)
    if depth < l2:
        return _adm_orbits(pts, G, levels, depth, jobs)
    return _plain_orbits(pts, G)


# ---------------------------------------------------------------------------
# Orbit ledger


class _Geometry:
    """Point list in exact hull coordinates plus the lift back to ambient rows."""

    def __init__(self, points: Sequence[Vector]):
        pts = [vector(p) for p in points]
        if len(set(pts)) != len(pts):
            raise PolyhedronError("duplicate points in the input")
        self.ambient = pts
        self.hull = affine_hull(pts)
        self.d = self.hull.dim
        n = len(pts[0])
        if self.d == n:
            self.local = pts
            self._lift = None
        else:
            self.local = [self.hull.coordinates(p) for p in pts]
            D = self.hull.directions
            gram = mat_mul(D, transpose(D))
            # coordinates(x) = M (x - point) with M the pseudo-inverse below
            self._lift = mat_mul(invert_matrix(gram), D)

    def ambient_row(self, a: Vector, delta: Fraction) -> tuple[int, ...]:
        """Lift a supporting row from hull coordinates to the ambient space,
        normalized to a primitive integer (a | b) tuple."""
        if self._lift is None:
            return primitive(tuple(a) + (delta,))
        a_amb = mat_vec(transpose(self._lift), a)
        b_amb = delta + dot(a_amb, self.hull.point)
        return primitive(tuple(a_amb) + (b_amb,))


@dataclass(frozen=True)
class FacetOrbit:
    """One facet orbit: canonical incident-vertex key, the orbit itself and
    a supporting row for the representative (primitive, ambient)."""
    key: tuple[int, ...]
    orbit: SetOrbit
    row: tuple[int, ...]
    status: str = "processed"

    @property
    def size(self) -> int:
        return self.orbit.size


@dataclass(frozen=True)
class OrbitLedger:
    """Facet orbits keyed by canonical incident-vertex sets (discovery order),
    together with the vertex list the keys index into and the group acting on
    those vertex indices."""
    entries: dict
    vertices: tuple
    vertex_group: PermutationGroup

    @property
    def orbit_count(self) -> int:
        return len(self.entries)

    @property
    def total_elements(self) -> int:
        return sum(e.orbit.size for e in self.entries.values())

    def keys(self) -> list[tuple[int, ...]]:
        return list(self.entries)

    def vertex_orbits(self) -> list[frozenset]:
        return self.vertex_group.point_orbits()

    def facet_sets(self) -> set:
        """Every facet of the polytope as an incident-vertex frozenset, by
        expanding each orbit."""
        out: set = set()
        for e in self.entries.values():
            orb = e.orbit
            if not orb.expanded:
                orb = orbit_of_set(self.vertex_group, e.key, budget=10_000_000)
            out |= orb.elements
        return out

    def facet_rows(self) -> set:
        """Every facet as a primitive supporting row (a | b), recomputed from
        the expanded incidence sets."""
        geo = _Geometry(list(self.vertices))
        out = set()
        for S in self.facet_sets():
            a, delta = _supporting_row(geo.local, S)
            out.add(geo.ambient_row(a, delta))
        return out


def _check_levels(levels) -> tuple[int, int]:
    try:
        l1, l2 = levels
    except (TypeError, ValueError):
        raise PolyhedronError("levels must be a pair of non-negative integers")
    if not (isinstance(l1, int) and isinstance(l2, int)) or l1 < 0 or l2 < 0:
        raise PolyhedronError("levels must be a pair of non-negative integers")
    return l1, l2


def _decompose_points(V: VPolyhedron, G: PermutationGroup,
                      levels: tuple[int, int], jobs: int) -> OrbitLedger:
    if V.rays:
        raise PolyhedronError("decomposition requires a polytope, not rays")
    if G.degree != V.k:
        raise PolyhedronError("group degree does not match the number of vertices")
    for g in G.generators:
        if realize_vertex_permutation(V, g) is None:
            raise PolyhedronError(
                "group generator is not an affine symmetry of the vertex set")
    geo = _Geometry(V.vertices)
    orbits = _facet_orbit_engine(geo.local, G, levels, 0, jobs)
    entries = {}
    for orb in orbits:
        a, delta = _supporting_row(geo.local, frozenset(orb.representative))
        entries[orb.representative] = FacetOrbit(
            orb.representative, orb, geo.ambient_row(a, delta))
    return OrbitLedger(entries, tuple(geo.ambient), G)


def _decompose_rows(P: HPolyhedron, G: PermutationGroup,
                    levels: tuple[int, int], jobs: int) -> OrbitLedger:
    n = P.n
    if P.equality_rows:
        raise PolyhedronError("decomposition requires an inequality-only description")
    if G.degree != P.m:
        raise PolyhedronError("group degree does not match the number of rows")
    lin, rays = dd_cone([tuple(P.A[i]) for i in range(P.m)], n)
    if lin or rays:
        raise PolyhedronError("decomposition requires a bounded polytope")
    if affine_hull(P).dim != n:
        raise PolyhedronError("decomposition requires a full-dimensional polytope")
    if remove_redundancy(P).m != P.m:
        raise PolyhedronError("decomposition requires an irredundant description")
    for g in G.generators:
        if realize_row_permutation(P, g) is None:
            raise PolyhedronError(
                "group generator is not an affine symmetry of the rows")

    # interior point via the uniform-slack program, then the polar dual:
    # row i becomes the dual point a_i / (b_i - a_i.c), whose facets are the
    # vertices of P, computed up to symmetry by the same engine
    slack = HPolyhedron.from_rows(
        [tuple(P.A[i]) + (Fraction(1),) for i in range(P.m)], list(P.b))
    res = solve_lp(slack, tuple(zero_vector(n)) + (Fraction(1),), maximize=True)
    if not res.is_optimal or res.value <= 0:
        raise PolyhedronError("could not find an interior point")
    center = tuple(res.point[:n])
    dual_pts = []
    for i in range(P.m):
        gap = P.b[i] - dot(P.A[i], center)
        dual_pts.append(vec_scale(1 / gap, P.A[i]))
    if len(set(dual_pts)) != P.m:
        raise PolyhedronError("duplicate inequality rows")

    dual_orbits = _facet_orbit_engine(dual_pts, G, levels, 0, jobs)

    tight_sets: list[frozenset] = []
    seen: set = set()
    for orb in dual_orbits:
        if not orb.expanded:
            orb = orbit_of_set(G, orb.representative, budget=10_000_000)
        for X in sorted(orb.elements, key=sorted):
            if X not in seen:
                seen.add(X)
                tight_sets.append(X)
    verts = set()
    for T in tight_sets:
        members = sorted(T)
        x = solve_linear([P.A[i - 1] for i in members], [P.b[i - 1] for i in members])
        if x is None:
            raise PolyhedronError("internal error: inconsistent tight rows")
        verts.add(tuple(x))
    vert_list = sorted(verts)
    vert_tight = [frozenset(i + 1 for i in range(P.m)
                            if dot(P.A[i], v) == P.b[i]) for v in vert_list]
    tight_to_vertex = {T: j + 1 for j, T in enumerate(vert_tight)}
    vgens = []
    for g in G.generators:
        images = tuple(tight_to_vertex[frozenset(g(i) for i in T)]
                       for T in vert_tight)
        vgens.append(Permutation(images))
    vertex_group = PermutationGroup(vgens, degree=len(vert_list))

    entries = {}
    for row_orbit in sorted(G.point_orbits(), key=min):
        rep = min(row_orbit)
        S = frozenset(j + 1 for j, v in enumerate(vert_list)
                      if dot(P.A[rep - 1], v) == P.b[rep - 1])
        orb = orbit_of_set(vertex_group, S)
        if orb.size != len(row_orbit):
            raise PolyhedronError("internal error: row and facet orbits disagree")
        row = primitive(tuple(P.A[rep - 1]) + (P.b[rep - 1],))
        entries[orb.representative] = FacetOrbit(orb.representative, orb, row)
    return OrbitLedger(entries, tuple(vert_list), vertex_group)


def adjacency_decomposition(P: Union[HPolyhedron, VPolyhedron], G: PermutationGroup,
                            levels: tuple[int, int] = (0, 1), jobs: int = 1) -> OrbitLedger:
    """Facet orbits by the neighbor-walk method.

    Seeds with one facet, then repeatedly takes a pending orbit
    representative, computes its ridges (facets of the facet, up to the
    stabilizer), rotates each ridge to the neighboring facet and inserts
    unseen orbits, until no pending orbit remains.  For an H-description the
    walk runs on the polar dual, enumerating the vertices up to symmetry.

    G must act by affine symmetries on the inequality indices (H input) or
    vertex indices (V input); this is verified up front and violations are
    rejected.  The input must be a bounded polytope, and full-dimensional and
    irredundant when given by rows.
    """
    lv = _check_levels(levels)
    if isinstance(P, VPolyhedron):
        return _decompose_points(P, G, lv, jobs)
    if isinstance(P, HPolyhedron):
        return _decompose_rows(P, G, lv, jobs)
    raise TypeError("expected an HPolyhedron or VPolyhedron")


def incidence_decomposition(P: Union[HPolyhedron, VPolyhedron], G: PermutationGroup,
                            jobs: int = 1) -> OrbitLedger:
    """Facet orbits by fixing input orbits.

    For one representative of each input-element orbit, all facets incident
    to it are enumerated through a lower-dimensional conversion (the dual of
    its tangent cone) and canonicalized; the union over the orbit
    representatives covers every facet because each facet touches some input
    element.  Preconditions match adjacency_decomposition, and so does the
    resulting ledger.
    """
    levels = (1, 1)   # run the incidence method at depth 0, plain below
    if isinstance(P, VPolyhedron):
        return _decompose_points(P, G, levels, jobs)
    if isinstance(P, HPolyhedron):
        return _decompose_rows(P, G, levels, jobs)
    raise TypeError("expected an HPolyhedron or VPolyhedron")


# ---------------------------------------------------------------------------
# Facet adjacency up to symmetry


@dataclass(frozen=True)
class AdjacencyGraphUpToSymmetry:
    """Nodes are facet orbits (discovery order, numbered from 1); an edge
    joins two orbits whenever some facet of one shares a ridge with some
    facet of the other.  Self-loops record adjacency within one orbit."""
    keys: tuple
    sizes: tuple
    edges: frozenset

    @property
    def node_count(self) -> int:
        return len(self.keys)

    def neighbors(self, i: int) -> list[int]:
        if not 1 <= i <= self.node_count:
            raise ValueError(f"unknown node {i}")
        out = set()
        for u, v in self.edges:
            if u == i:
                out.add(v)
            if v == i:
                out.add(u)
        return sorted(out)


def adjacency_graph(P, G: PermutationGroup, ledger: OrbitLedger,
                    jobs: int = 1) -> AdjacencyGraphUpToSymmetry:
    """Facet adjacency graph of a completed ledger.

    Recomputed from the representatives alone: for each orbit key, all ridges
    of the representative facet are enumerated by a plain conversion of its
    vertex set and rotated to their neighbor facets.  Symmetry carries any
    adjacent pair onto a pair involving a representative, so this sees every
    edge, including self-loops.
    """
    geo = _Geometry(list(ledger.vertices))
    pts = geo.local
    group = ledger.vertex_group
    keys = list(ledger.entries)
    node_of = {key: i + 1 for i, key in enumerate(keys)}

    def neighbors_of(key: tuple[int, ...]) -> list[tuple[int, ...]]:
        if geo.d <= 1:
            return []
        F = frozenset(key)
        c, delta = _supporting_row(pts, F)
        members = sorted(F)
        sub_ambient = [pts[i - 1] for i in members]
        hull = affine_hull(sub_ambient)
        sub_V = VPolyhedron.from_points([hull.coordinates(p) for p in sub_ambient])
        sub_H = convert_dd(sub_V)
        inc = incidence(sub_H, sub_V)
        found = set()
        for r in range(1, sub_H.m + 1):
            R = frozenset(members[j - 1] for j in inc.row_set(r))
            S = _neighbor_facet(pts, F, c, delta, R)
            found.add(orbit_of_set(group, S).representative)
        return sorted(found)

    edges = set()
    for key, nbrs in zip(keys, _parallel_map(neighbors_of, keys, jobs)):
        i = node_of[key]
        for nk in nbrs:
            j = node_of.get(nk)
            if j is None:
                raise PolyhedronError("ledger is not complete: missing neighbor orbit")
            edges.add((min(i, j), max(i, j)))
    sizes = tuple(ledger.entries[k].orbit.size for k in keys)
    return AdjacencyGraphUpToSymmetry(tuple(keys), sizes, frozenset(edges))


def shortest_path(graph: AdjacencyGraphUpToSymmetry, u: int, v: int) -> Optional[int]:
    """Breadth-first distance between two nodes; None when unreachable."""
    for node in (u, v):
        if not 1 <= node <= graph.node_count:
            raise ValueError(f"unknown node {node}")
    if u == v:
        return 0
    adj: dict[int, set] = {i: set() for i in range(1, graph.node_count + 1)}
    for a, b in graph.edges:
        adj[a].add(b)
        adj[b].add(a)
    dist = {u: 0}
    frontier = [u]
    while frontier:
        nxt = []
        for x in frontier:
            for y in sorted(adj[x]):
                if y not in dist:
                    dist[y] = dist[x] + 1
                    if y == v:
                        return dist[y]
                    nxt.append(y)
        frontier = nxt
    return None


def write_dot(graph: AdjacencyGraphUpToSymmetry) -> str:
    """Render the orbit graph as an undirected DOT document."""
    lines = ["graph {"]
    for i, size in enumerate(graph.sizes, start=1):
        lines.append(f'  o{i} [label="orbit {i} (size {size})"];')
    for i, j in sorted(graph.edges):
        lines.append(f"  o{i} -- o{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
