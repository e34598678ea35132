"""Affine symmetry detection for polytopes.

The detector reduces geometry to combinatorics: vertices are centered at
their barycenter (a fixed point of every affine symmetry) and expressed in a
rational basis of their span, and the complete graph on vertex indices is
edge-colored with the invariant form x_i^t Q^{-1} x_j, Q = sum x_i x_i^t.
Color-preserving graph automorphisms are exactly the candidate symmetries;
each one is then realized as a concrete affine map and verified exactly, so
nothing reported can fail to be a symmetry.

The same machinery applies to inequality rows: normalized homogenized rows
(a | b) transform linearly under affine maps of the ambient space, so the
uncentered gram construction detects the symmetries visible on the H-side.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .polycore import (
    AffineMap,
    HPolyhedron,
    Matrix,
    PolyhedronError,
    VPolyhedron,
    Vector,
    affine_hull,
    det,
    dot,
    identity_matrix,
    invert_matrix,
    mat_mul,
    mat_vec,
    matrix,
    primitive,
    rank,
    remove_redundancy,
    row_space_basis,
    solve_linear,
    transpose,
    vec_scale,
    vec_sub,
    zero_vector,
)
from .permgrp import Permutation, PermutationGroup


@dataclass(frozen=True)
class SymmetryGraph:
    """Edge-colored complete graph on k indices; colors are exact rationals.

    gram[i][j] is the color of edge {i+1, j+1}; diagonal entries color the
    vertices themselves.  color_classes groups 1-based index pairs (i, j),
    i <= j, by equal gram value.
    """
    k: int
    gram: tuple
    color_classes: dict

    @classmethod
    def from_gram(cls, gram: Sequence[Sequence[Fraction]]) -> "SymmetryGraph":
        k = len(gram)
        g = tuple(tuple(Fraction(x) for x in row) for row in gram)
        classes: dict = {}
        for i in range(k):
            for j in range(i, k):
                classes.setdefault(g[i][j], []).append((i + 1, j + 1))
        return cls(k, g, {v: tuple(ps) for v, ps in classes.items()})


def _span_coordinates(vectors: Sequence[Vector]) -> tuple[list, list]:
    """Coordinates of each vector in a rational basis of their joint span.

    Returns (basis rows, coordinate vectors).  A zero span yields an empty
    basis and empty coordinate tuples.
    """
    basis = row_space_basis(vectors)
    if not basis:
        return [], [() for _ in vectors]
    bt = transpose(matrix(basis))
    coords = []
    for v in vectors:
        c = solve_linear(bt, v)
        if c is None:
            raise PolyhedronError("vector outside its own span basis")
        coords.append(tuple(c))
    return [tuple(r) for r in basis], coords


def _gram_matrix(coords: Sequence[Vector]) -> list:
    """gram[i][j] = c_i^t Q^{-1} c_j with Q = sum c_i c_i^t (must span)."""
    k = len(coords)
    d = len(coords[0]) if coords else 0
    if d == 0:
        return [[Fraction(0)] * k for _ in range(k)]
    Q = [[Fraction(0)] * d for _ in range(d)]
    for c in coords:
        for a in range(d):
            if c[a]:
                for b in range(d):
                    Q[a][b] += c[a] * c[b]
    Qinv = invert_matrix(Q)
    images = [mat_vec(Qinv, c) for c in coords]
    gram = [[Fraction(0)] * k for _ in range(k)]
    for i in range(k):
        for j in range(i, k):
            val = dot(coords[i], images[j])
            gram[i][j] = val
            gram[j][i] = val
    return gram


def build_symmetry_graph(V: VPolyhedron) -> SymmetryGraph:
    """Invariant edge-colored graph of a polytope's vertex set.

    Unbounded inputs are rejected: rays have no barycenter to anchor the
    affine-to-linear reduction.
    """
    if V.rays:
        raise PolyhedronError("symmetry graph requires a bounded polytope (no rays)")
    if not V.vertices:
        raise PolyhedronError("symmetry graph requires at least one vertex")
    k = V.k
    bary = vec_scale(Fraction(1, k), tuple(sum(col) for col in zip(*V.vertices)))
    centered = [vec_sub(v, bary) for v in V.vertices]
    _, coords = _span_coordinates(centered)
    return SymmetryGraph.from_gram(_gram_matrix(coords))


# ---------------------------------------------------------------------------
# Automorphisms of the colored graph


def _refine_colors(gram: Sequence[Sequence[Fraction]]) -> list:
    """Stable vertex coloring: start from diagonal colors, repeatedly refine
    by the multiset of (neighbor color, edge color) pairs."""
    k = len(gram)
    ranked = sorted(set(gram[i][i] for i in range(k)))
    lookup = {v: r for r, v in enumerate(ranked)}
    colors = [lookup[gram[i][i]] for i in range(k)]
    while True:
        sigs = []
        for i in range(k):
            neigh = tuple(sorted((colors[j], gram[i][j]) for j in range(k) if j != i))
            sigs.append((colors[i], neigh))
        ranked = sorted(set(sigs))
        lookup = {s: r for r, s in enumerate(ranked)}
        new = [lookup[s] for s in sigs]
        if new == colors:
            return colors
        colors = new


def graph_automorphisms(Gr: SymmetryGraph) -> list:
    """Generators of the automorphism group of the colored complete graph.

    Colors are refined to a stable partition, vertices are individualized
    smallest cell first, and a stabilizer-chain search collects one generator
    per new point reached in each basic orbit.  Pairwise color consistency is
    enforced along every branch, so reported permutations are automorphisms
    by construction.
    """
    k = Gr.k
    if k <= 1:
        return []
    gram = Gr.gram
    colors = _refine_colors(gram)
    cell_size = {c: colors.count(c) for c in set(colors)}
    # assignment order: smallest color cells first, lowest index first
    order = sorted(range(k), key=lambda i: (cell_size[colors[i]], colors[i], i))

    def consistent(img: list, v: int, w: int, upto: int) -> bool:
        if colors[v] != colors[w]:
            return False
        gv, gw = gram[v], gram[w]
        for p in range(upto):
            a = order[p]
            if gv[a] != gw[img[a]]:
                return False
        return True

    def complete(level: int, w0: int) -> Optional[Permutation]:
        """One automorphism fixing order[:level], sending order[level] to w0."""
        img = [-1] * k          # img[v] = image of vertex v (0-based)
        used = [False] * k
        for p in range(level):
            img[order[p]] = order[p]
            used[order[p]] = True
        if used[w0]:
            return None         # w0 is a fixed prefix vertex; injectivity fails
        img[order[level]] = w0
        used[w0] = True

        def dfs(p: int) -> bool:
            if p == k:
                return True
            v = order[p]
            for w in range(k):
                if used[w] or not consistent(img, v, w, p):
                    continue
                img[v] = w
                used[w] = True
                if dfs(p + 1):
                    return True
                img[v] = -1
                used[w] = False
            return False

        if dfs(level + 1):
            return Permutation(tuple(img[i] + 1 for i in range(k)))
        return None

    found: list = []

    def orbit_of(v: int) -> set:
        orb = {v}
        frontier = [v]
        while frontier:
            nxt = []
            for x in frontier:
                for g in found:
                    y = g(x + 1) - 1
                    if y not in orb:
                        orb.add(y)
                        nxt.append(y)
            frontier = nxt
        return orb

    for level in range(k - 2, -1, -1):
        v = order[level]
        prefix = {order[p] for p in range(level)}
        orb = orbit_of(v)
        for w in range(k):
            if w == v or w in orb or w in prefix:
                continue
            # prefix is fixed pointwise: check consistency against it directly
            if colors[v] != colors[w]:
                continue
            ok = all(gram[v][order[p]] == gram[w][order[p]] for p in range(level))
            if not ok:
                continue
            g = complete(level, w)
            if g is not None:
                found.append(g)
                orb = orbit_of(v)
    return found


# ---------------------------------------------------------------------------
# Affine realization


@dataclass(frozen=True)
class AffineSymmetries:
    """Vertex-permutation group of a polytope with exact affine witnesses."""
    perm_group: PermutationGroup
    realizations: dict   # Permutation -> AffineMap


def _linearly_independent_subset(vectors: Sequence[Vector], target: int) -> list:
    """Indices of a greedy maximal linearly independent subset (size target)."""
    chosen: list = []
    for i, v in enumerate(vectors):
        if any(x != 0 for x in v) and rank([vectors[j] for j in chosen] + [v]) > len(chosen):
            chosen.append(i)
            if len(chosen) == target:
                break
    return chosen


def _solve_linear_action(coords: Sequence[Vector], sigma: Permutation) -> Optional[list]:
    """d x d matrix M with M c_i = c_{sigma(i)} for all i, or None."""
    d = len(coords[0]) if coords else 0
    if d == 0:
        return []
    idx = _linearly_independent_subset(coords, d)
    if len(idx) < d:
        return None
    U = transpose([coords[i] for i in idx])            # columns c_i
    W = transpose([coords[sigma(i + 1) - 1] for i in idx])
    M = mat_mul(W, invert_matrix(U))
    for i, c in enumerate(coords):
        if tuple(mat_vec(M, c)) != tuple(coords[sigma(i + 1) - 1]):
            return None
    return M


class _VertexRealizer:
    """Solves vertex permutations into affine maps for one fixed vertex set."""

    def __init__(self, V: VPolyhedron):
        if V.rays:
            raise PolyhedronError("affine realization requires a bounded polytope")
        self.V = V
        k, n = V.k, V.n
        self.bary = vec_scale(Fraction(1, k), tuple(sum(col) for col in zip(*V.vertices)))
        centered = [vec_sub(v, self.bary) for v in V.vertices]
        self.basis, self.coords = _span_coordinates(centered)
        self.d = len(self.basis)
        if self.d:
            pivots = [next(j for j, x in enumerate(row) if x != 0) for row in self.basis]
            comp = [j for j in range(n) if j not in pivots]
            cols = [list(r) for r in self.basis] + \
                   [[Fraction(1) if a == j else Fraction(0) for a in range(n)] for j in comp]
            self.S = transpose(cols)
            self.S_inv = invert_matrix(self.S)

    def realize(self, sigma: Permutation) -> Optional[AffineMap]:
        V, n, d = self.V, self.V.n, self.d
        M = _solve_linear_action(self.coords, sigma)
        if M is None:
            return None
        if d:
            block = [[Fraction(0)] * n for _ in range(n)]
            for a in range(d):
                for b in range(d):
                    block[a][b] = M[a][b]
            for a in range(d, n):
                block[a][a] = Fraction(1)
            A = mat_mul(mat_mul(self.S, block), self.S_inv)
        else:
            A = identity_matrix(n)
        t = vec_sub(self.bary, mat_vec(A, self.bary))
        amap = AffineMap(matrix(A), tuple(t))
        if all(amap.apply(V.vertices[i]) == V.vertices[sigma(i + 1) - 1] for i in range(V.k)):
            return amap
        return None


def realize_vertex_permutation(V: VPolyhedron, sigma: Permutation) -> Optional[AffineMap]:
    """The affine map carrying vertex i to vertex sigma(i), or None."""
    return _VertexRealizer(V).realize(sigma)


def affine_symmetry_group(V: VPolyhedron) -> AffineSymmetries:
    """Affine symmetry group of a polytope from its vertex set.

    Every generator permutation is realized as a concrete AffineMap, solved
    exactly in span coordinates and verified on all vertices; candidates
    without a realization are discarded.
    """
    graph = build_symmetry_graph(V)
    gens = graph_automorphisms(graph)
    realizer = _VertexRealizer(V)
    realizations: dict = {}
    kept = []
    for sigma in gens:
        amap = realizer.realize(sigma)
        if amap is not None:
            kept.append(sigma)
            realizations[sigma] = amap
    return AffineSymmetries(PermutationGroup(kept, degree=V.k), realizations)


class _RowRealizer:
    """Solves row permutations of an H-description into linear (a | b) actions."""

    def __init__(self, P: HPolyhedron):
        self.n = P.n
        self.m = P.m
        self.rows = [tuple(Fraction(x) for x in primitive(tuple(P.A[i]) + (P.b[i],)))
                     for i in range(P.m)]
        if rank(self.rows) < self.n + 1:
            raise PolyhedronError(
                "homogenized rows do not span; input must be bounded and full-dimensional")
        idx = _linearly_independent_subset(self.rows, self.n + 1)
        self.idx = idx
        self.U_inv = invert_matrix(transpose([self.rows[i] for i in idx]))

    def realize(self, sigma: Permutation) -> Optional[Matrix]:
        n, rows = self.n, self.rows
        W = transpose([rows[sigma(i + 1) - 1] for i in self.idx])
        Lt = mat_mul(W, self.U_inv)   # transpose of the right-acting matrix
        if any(tuple(mat_vec(Lt, rows[i])) != tuple(rows[sigma(i + 1) - 1])
               for i in range(self.m)):
            return None
        L = transpose(Lt)
        # an affine map acts on (a | b) with last row (0, ..., 0, 1) and an
        # invertible linear block
        if tuple(L[n]) != tuple(zero_vector(n)) + (Fraction(1),):
            return None
        if det([row[:n] for row in L[:n]]) == 0:
            return None
        return L


def realize_row_permutation(P: HPolyhedron, sigma: Permutation) -> Optional[Matrix]:
    """The homogenized (a | b) action realizing a row permutation, or None.

    P must be irredundant, bounded and full-dimensional so that its primitive
    rows span R^(n+1).
    """
    return _RowRealizer(P).realize(sigma)


def restricted_symmetries_H(P: HPolyhedron) -> PermutationGroup:
    """Symmetries detectable from the inequality rows alone.

    Rows are scaled to primitive integer form (positive scaling only, so the
    halfspace is unchanged) and homogenized to (a | b) vectors, on which any
    affine symmetry of the polyhedron acts linearly.  The resulting group
    acts on 1-based row indices.  Requires an irredundant, full-dimensional
    description.
    """
    n = P.n
    if affine_hull(P).dim != n:
        raise PolyhedronError("restricted symmetry detection needs a full-dimensional input")
    cleaned = remove_redundancy(P)
    if cleaned.m != P.m or cleaned.equality_rows:
        raise PolyhedronError("restricted symmetry detection needs an irredundant description")
    realizer = _RowRealizer(P)
    gram = _gram_matrix(realizer.rows)
    gens = graph_automorphisms(SymmetryGraph.from_gram(gram))
    kept = [sigma for sigma in gens if realizer.realize(sigma) is not None]
    return PermutationGroup(kept, degree=P.m)
