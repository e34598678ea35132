"""Representation conversion: plain double description and the orbit methods."""
from fractions import Fraction

import pytest

from polyorbit.polycore import (
    EmptyPolyhedronError,
    HPolyhedron,
    PolyhedronError,
    VPolyhedron,
    dot,
    incidence,
    primitive,
)
from polyorbit.permgrp import Permutation, PermutationGroup, set_stabilizer
from polyorbit.repconv import (
    AdjacencyGraphUpToSymmetry,
    adjacency_decomposition,
    adjacency_graph,
    convert_dd,
    dd_cone,
    incidence_decomposition,
    shortest_path,
    write_dot,
)
from polyorbit.symdetect import affine_symmetry_group, restricted_symmetries_H

from shapes import (
    cross_h,
    cross_v,
    cube_h,
    cube_v,
    santos_prismatoid,
    simplex_v,
)


def normalized_rows(H: HPolyhedron) -> set:
    return {primitive(tuple(H.A[i]) + (H.b[i],)) for i in range(H.m)}


def group_of(P):
    if isinstance(P, HPolyhedron):
        return restricted_symmetries_H(P)
    return affine_symmetry_group(P).perm_group


# ---------------------------------------------------------------------------
# dd_cone


def test_dd_cone_no_rows_is_whole_space():
    lin, rays = dd_cone([], 3)
    assert len(lin) == 3 and rays == []


def test_dd_cone_orthant():
    rows = [(-1, 0, 0), (0, -1, 0), (0, 0, -1)]  # -x_i <= 0
    lin, rays = dd_cone([tuple(map(Fraction, r)) for r in rows], 3)
    assert lin == []
    assert set(rays) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}


def test_dd_cone_halfspace_keeps_lineality():
    lin, rays = dd_cone([(Fraction(1), Fraction(0))], 2)
    assert set(rays) == {(-1, 0)}
    assert set(lin) == {(0, 1)}


def test_dd_cone_square_cone():
    # cone over the square: x, y between -z and z
    rows = [(1, 0, -1), (-1, 0, -1), (0, 1, -1), (0, -1, -1)]
    lin, rays = dd_cone([tuple(map(Fraction, r)) for r in rows], 3)
    assert lin == []
    assert set(rays) == {(1, 1, 1), (1, -1, 1), (-1, 1, 1), (-1, -1, 1)}


def test_dd_cone_deterministic():
    rows = [(1, 2, -3), (-2, 1, -1), (0, -1, -1), (1, 1, -5), (-1, -1, 0)]
    fr = [tuple(map(Fraction, r)) for r in rows]
    assert dd_cone(fr, 3) == dd_cone(fr, 3)


# ---------------------------------------------------------------------------
# convert_dd


def test_cube_h_to_v():
    V = convert_dd(cube_h(3))
    assert len(V.rays) == 0
    assert set(V.vertices) == set(cube_v(3).vertices)


def test_simplex_v_to_h():
    H = convert_dd(simplex_v(3))
    assert H.m == 4 and not H.equality_rows
    for v in simplex_v(3).vertices:
        assert H.contains(v)


def test_octahedron_v_to_h():
    octa = cross_v(3)
    H = convert_dd(octa)
    assert H.m == 8
    # substitution cross-check: every facet is sign-vector . x <= 1 and is
    # tight on exactly 3 of the 6 vertices
    inc = incidence(H, octa)
    for i in range(1, H.m + 1):
        assert primitive(tuple(H.A[i - 1]) + (H.b[i - 1],))[-1] == 1
        assert all(abs(x) == abs(H.A[i - 1][0]) for x in H.A[i - 1])
        assert len(inc.row_set(i)) == 3


def test_round_trips():
    for P in [cube_h(2), cube_h(4), cross_h(3)]:
        V = convert_dd(P)
        H2 = convert_dd(V)
        assert normalized_rows(H2) == normalized_rows(P)
    for V in [cube_v(3), cross_v(4), simplex_v(4)]:
        H = convert_dd(V)
        V2 = convert_dd(H)
        assert set(V2.vertices) == set(V.vertices)


def test_redundant_rows_dropped():
    # unit square plus a loose row x + y <= 5
    A = [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1)]
    b = [1, 1, 1, 1, 5]
    P = HPolyhedron.from_rows([tuple(map(Fraction, r)) for r in A], list(map(Fraction, b)))
    V = convert_dd(P)
    assert len(V.vertices) == 4
    H2 = convert_dd(V)
    assert H2.m == 4


def test_empty_polyhedron_flagged():
    P = HPolyhedron.from_rows([(Fraction(1),), (Fraction(-1),)],
                              [Fraction(-1), Fraction(-1)])   # x <= -1, -x <= -1
    with pytest.raises(EmptyPolyhedronError):
        convert_dd(P)
    with pytest.raises(EmptyPolyhedronError):
        convert_dd(VPolyhedron((), ()))


def test_unbounded_h_to_v_reports_rays():
    # x >= 0 quadrant in R^2, shifted: x_i >= 1
    A = [(-1, 0), (0, -1)]
    b = [-1, -1]
    V = convert_dd(HPolyhedron.from_rows(
        [tuple(map(Fraction, r)) for r in A], list(map(Fraction, b))))
    assert set(V.vertices) == {(Fraction(1), Fraction(1))}
    assert set(V.rays) == {(1, 0), (0, 1)}


def test_lower_dimensional_v_to_h_has_equalities():
    # a segment embedded in R^3
    seg = VPolyhedron.from_points([(0, 0, 0), (1, 1, 2)])
    H = convert_dd(seg)
    assert len(H.equality_rows) == 2
    for v in seg.vertices:
        assert H.contains(v)
    assert not H.contains((Fraction(2), Fraction(2), Fraction(4)))
    assert not H.contains((Fraction(1), Fraction(0), Fraction(0)))


def test_vertex_figure_of_unbounded_lineality():
    # {x : x1 <= 0} has a lineality direction, returned as a +/- ray pair
    P = HPolyhedron.from_rows([(Fraction(1), Fraction(0))], [Fraction(0)])
    V = convert_dd(P)
    assert (0, 1) in set(V.rays) and (0, -1) in set(V.rays)


# ---------------------------------------------------------------------------
# adjacency decomposition


def test_cube_full_group_single_orbit():
    P = cube_h(3)
    led = adjacency_decomposition(P, restricted_symmetries_H(P))
    assert led.orbit_count == 1
    entry = next(iter(led.entries.values()))
    assert entry.size == 6
    assert len(led.vertex_orbits()) == 1
    assert set(led.vertices) == set(cube_v(3).vertices)


def test_cube_trivial_group_six_orbits():
    V = cube_v(3)
    led = adjacency_decomposition(V, PermutationGroup([], degree=8))
    assert led.orbit_count == 6
    assert all(e.size == 1 for e in led.entries.values())
    assert led.facet_rows() == normalized_rows(convert_dd(V))


def test_santos_prismatoid_expansion_matches_plain():
    V = santos_prismatoid()
    G = affine_symmetry_group(V).perm_group
    led = adjacency_decomposition(V, G)
    H = convert_dd(V)
    assert H.m == 322
    assert led.total_elements == 322
    assert led.facet_rows() == normalized_rows(H)


def test_non_symmetry_group_rejected():
    V = cube_v(3)
    # swapping just two vertices of a cube is no affine symmetry
    bad = PermutationGroup([Permutation((2, 1, 3, 4, 5, 6, 7, 8))])
    with pytest.raises(PolyhedronError):
        adjacency_decomposition(V, bad)
    P = cube_h(3)
    # maps +e1 <-> +e2 while fixing -e1 and -e2: no linear map does that
    badrows = PermutationGroup([Permutation((3, 2, 1, 4, 5, 6))])
    with pytest.raises(PolyhedronError):
        adjacency_decomposition(P, badrows)


def test_preconditions_rejected():
    G1 = PermutationGroup([], degree=2)
    unbounded = HPolyhedron.from_rows([(Fraction(1), Fraction(0)),
                                       (Fraction(0), Fraction(1))],
                                      [Fraction(1), Fraction(1)])
    with pytest.raises(PolyhedronError):
        adjacency_decomposition(unbounded, G1)
    redundant = HPolyhedron.from_rows(
        [tuple(map(Fraction, r)) for r in [(1, 0), (-1, 0), (0, 1), (0, -1), (1, 1)]],
        [Fraction(x) for x in [1, 1, 1, 1, 5]])
    with pytest.raises(PolyhedronError):
        adjacency_decomposition(redundant, PermutationGroup([], degree=5))
    with pytest.raises(PolyhedronError):
        adjacency_decomposition(cube_v(2), PermutationGroup([], degree=7))
    rays = VPolyhedron.from_points([(0, 0)], [(1, 0)])
    with pytest.raises(PolyhedronError):
        adjacency_decomposition(rays, PermutationGroup([], degree=1))
    with pytest.raises(PolyhedronError):
        adjacency_decomposition(cube_v(2), PermutationGroup([], degree=4),
                                levels=(0, -1))


# ---------------------------------------------------------------------------
# incidence decomposition


@pytest.mark.parametrize("P", [cube_h(3), cube_v(3), cross_v(3), cross_h(3)])
def test_idm_matches_adm(P):
    G = group_of(P)
    led_a = adjacency_decomposition(P, G)
    led_i = incidence_decomposition(P, G)
    assert list(led_a.entries) == list(led_i.entries)
    assert [e.size for e in led_a.entries.values()] == \
           [e.size for e in led_i.entries.values()]
    assert led_a.vertices == led_i.vertices


def test_idm_trivial_group_equals_plain():
    V = cross_v(3)
    led = incidence_decomposition(V, PermutationGroup([], degree=6))
    assert led.orbit_count == 8
    assert led.facet_rows() == normalized_rows(convert_dd(V))


def test_levels_policy_idm_at_top():
    # --idm-adm-level style: depth 0 under IDM, everything below plain
    V = cube_v(4)
    G = affine_symmetry_group(V).perm_group
    led = adjacency_decomposition(V, G, levels=(1, 1))
    assert list(led.entries) == list(adjacency_decomposition(V, G).entries)


# ---------------------------------------------------------------------------
# ledger invariants


@pytest.mark.parametrize("P", [cube_v(2), cube_v(3), cube_v(4), cross_v(3),
                               cross_v(4), simplex_v(3), simplex_v(5)])
def test_oracle_equivalence_and_counts(P):
    G = group_of(P)
    led = adjacency_decomposition(P, G)
    H = convert_dd(P)
    assert led.facet_rows() == normalized_rows(H)
    assert led.total_elements == H.m
    assert sum(e.orbit.size for e in led.entries.values()) == H.m


def test_every_facet_supporting():
    V = cross_v(4)
    G = affine_symmetry_group(V).perm_group
    led = adjacency_decomposition(V, G)
    d = 4
    for row in led.facet_rows():
        a, bb = row[:-1], row[-1]
        tight = [v for v in V.vertices if dot(a, v) == bb]
        assert all(dot(a, v) <= bb for v in V.vertices)
        # incident vertices affinely span a (d-1)-dimensional set
        from polyorbit.polycore import rank, vec_sub
        assert rank([vec_sub(t, tight[0]) for t in tight[1:]]) == d - 1


def test_schedule_independence():
    V = cube_v(4)
    G = affine_symmetry_group(V).perm_group
    l1 = adjacency_decomposition(V, G, jobs=1)
    l4 = adjacency_decomposition(V, G, jobs=4)
    assert list(l1.entries) == list(l4.entries)
    assert l1.vertices == l4.vertices
    i1 = incidence_decomposition(cube_h(4), restricted_symmetries_H(cube_h(4)), jobs=1)
    i4 = incidence_decomposition(cube_h(4), restricted_symmetries_H(cube_h(4)), jobs=4)
    assert list(i1.entries) == list(i4.entries)
    assert i1.vertices == i4.vertices


def test_ledger_counters():
    P = cube_h(3)
    led = adjacency_decomposition(P, restricted_symmetries_H(P))
    assert led.orbit_count == len(led.entries)
    assert led.total_elements == 6
    assert all(e.status == "processed" for e in led.entries.values())


def test_lower_dimensional_input_handled():
    # planar square floating in R^3
    pts = [(0, 0, 1), (1, 0, 1), (0, 1, 1), (1, 1, 1)]
    V = VPolyhedron.from_points([tuple(map(Fraction, p)) for p in pts])
    G = affine_symmetry_group(V).perm_group
    assert G.order() == 8
    led = adjacency_decomposition(V, G)
    assert led.orbit_count == 1 and led.total_elements == 4
    H = convert_dd(V)
    inc = incidence(H, V)
    want = {inc.row_set(i) for i in range(1, H.m + 1) if i not in H.equality_rows}
    assert led.facet_sets() == want


# ---------------------------------------------------------------------------
# adjacency graph and paths


def test_cube_full_group_graph_self_loop():
    P = cube_h(3)
    G = restricted_symmetries_H(P)
    led = adjacency_decomposition(P, G)
    g = adjacency_graph(P, G, led)
    assert g.node_count == 1
    assert g.edges == frozenset({(1, 1)})


def test_cube_trivial_group_graph_is_octahedral():
    V = cube_v(3)
    triv = PermutationGroup([], degree=8)
    led = adjacency_decomposition(V, triv)
    g = adjacency_graph(V, triv, led)
    assert g.node_count == 6
    assert len(g.edges) == 12
    for i in range(1, 7):
        assert len(g.neighbors(i)) == 4


def test_shortest_path_basics():
    V = cube_v(3)
    triv = PermutationGroup([], degree=8)
    g = adjacency_graph(V, triv, adjacency_decomposition(V, triv))
    assert shortest_path(g, 3, 3) == 0
    n1 = g.neighbors(1)[0]
    assert shortest_path(g, 1, n1) == 1
    # opposite facets of a cube are two steps apart
    far = [j for j in range(1, 7) if j != 1 and j not in g.neighbors(1)]
    assert far and all(shortest_path(g, 1, j) == 2 for j in far)
    with pytest.raises(ValueError):
        shortest_path(g, 0, 1)
    with pytest.raises(ValueError):
        shortest_path(g, 1, 99)


def test_unreachable_is_distinct_outcome():
    # the two endpoints of a segment share no ridge
    seg = VPolyhedron.from_points([(Fraction(0),), (Fraction(1),)])
    triv = PermutationGroup([], degree=2)
    led = adjacency_decomposition(seg, triv)
    g = adjacency_graph(seg, triv, led)
    assert g.node_count == 2 and not g.edges
    assert shortest_path(g, 1, 2) is None


def test_dot_output_format():
    P = cube_h(3)
    G = restricted_symmetries_H(P)
    led = adjacency_decomposition(P, G)
    g = adjacency_graph(P, G, led)
    text = write_dot(g)
    assert text == 'graph {\n  o1 [label="orbit 1 (size 6)"];\n  o1 -- o1;\n}\n'


def test_dot_multi_node():
    V = cross_v(2)
    triv = PermutationGroup([], degree=4)
    g = adjacency_graph(V, triv, adjacency_decomposition(V, triv))
    text = write_dot(g)
    lines = text.splitlines()
    assert lines[0] == "graph {" and lines[-1] == "}"
    assert sum("--" in ln for ln in lines) == len(g.edges)
    for i in range(1, 5):
        assert f'o{i} [label="orbit {i} (size 1)"];' in text


def test_santos_base_distance_six():
    V = santos_prismatoid()
    G = affine_symmetry_group(V).perm_group
    top = frozenset(i + 1 for i, p in enumerate(V.vertices) if p[4] == 1)
    stab = set_stabilizer(G, top)
    led = adjacency_decomposition(V, stab)
    g = adjacency_graph(V, stab, led)
    # base facets are the ones with the most incident vertices
    counts = [len(k) for k in g.keys]
    peak = max(counts)
    bases = [i + 1 for i, c in enumerate(counts) if c == peak]
    assert len(bases) == 2 and peak == 24
    assert shortest_path(g, bases[0], bases[1]) == 6
