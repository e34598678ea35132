"""polyorbit: exact rational polyhedral computations up to symmetry.

The package covers the classic polyhedral workflows in which symmetry makes
otherwise intractable desk-scale computations cheap: representation
conversion up to symmetry (orbit ledgers of facets/vertices), affine symmetry
detection, symmetric integer feasibility via core points, and lattice-point
counting / Ehrhart / volume with slice decompositions.

All arithmetic is exact over Q (fractions.Fraction); results are deterministic
and independent of the worker count.
"""

from .polycore import (
    AffineHull,
    AffineMap,
    EmptyPolyhedronError,
    HPolyhedron,
    IncidenceData,
    LPResult,
    PolyhedronError,
    Rational,
    VerificationError,
    VPolyhedron,
    affine_hull,
    incidence,
    rank,
    remove_redundancy,
    solve_lp,
)
from .permgrp import (
    OrbitBudgetExceeded,
    Permutation,
    PermutationGroup,
    SetOrbit,
    canonical_representative,
    is_equivalent,
    orbit_of_set,
    schreier_sims,
    set_stabilizer,
)
from .symdetect import (
    AffineSymmetries,
    affine_symmetry_group,
    realize_row_permutation,
    realize_vertex_permutation,
    restricted_symmetries_H,
)
from .repconv import (
    AdjacencyGraphUpToSymmetry,
    FacetOrbit,
    OrbitLedger,
    adjacency_decomposition,
    adjacency_graph,
    convert_dd,
    incidence_decomposition,
    shortest_path,
    write_dot,
)
from .symilp import (
    BarycenterLattice,
    CorePoint,
    Fiber,
    InvariantSubspace,
    LinearProgram,
    block_group,
    canonical_core_point,
    check_invariance,
    fiber_barycenter_lattice,
    fiber_polyhedron,
    invariant_subspace,
    is_core_point,
    orbit_barycenter,
    solve_lp_reduced,
    symmetric_ilp_feasible,
    symmetric_ilp_optimize,
)

from .cli import (
    PolyFile,
    PolyFileError,
    parse_polyfile,
    write_polyfile,
)
from .latcount import (
    FiberOrbit,
    QuasiPolynomial,
    SliceDecomposition,
    count_lattice_points,
    count_with_symmetry,
    ehrhart,
    slice_decomposition,
    volume,
)

__all__ = [
    "AdjacencyGraphUpToSymmetry",
    "AffineHull",
    "AffineMap",
    "AffineSymmetries",
    "BarycenterLattice",
    "CorePoint",
    "EmptyPolyhedronError",
    "FacetOrbit",
    "Fiber",
    "FiberOrbit",
    "HPolyhedron",
    "IncidenceData",
    "InvariantSubspace",
    "LPResult",
    "LinearProgram",
    "OrbitBudgetExceeded",
    "OrbitLedger",
    "Permutation",
    "PolyFile",
    "PolyFileError",
    "PermutationGroup",
    "PolyhedronError",
    "QuasiPolynomial",
    "Rational",
    "SetOrbit",
    "SliceDecomposition",
    "VPolyhedron",
    "VerificationError",
    "adjacency_decomposition",
    "adjacency_graph",
    "affine_hull",
    "affine_symmetry_group",
    "block_group",
    "canonical_core_point",
    "canonical_representative",
    "check_invariance",
    "convert_dd",
    "count_lattice_points",
    "count_with_symmetry",
    "ehrhart",
    "fiber_barycenter_lattice",
    "fiber_polyhedron",
    "incidence",
    "incidence_decomposition",
    "invariant_subspace",
    "is_core_point",
    "is_equivalent",
    "orbit_barycenter",
    "orbit_of_set",
    "parse_polyfile",
    "rank",
    "realize_row_permutation",
    "realize_vertex_permutation",
    "remove_redundancy",
    "restricted_symmetries_H",
    "schreier_sims",
    "set_stabilizer",
    "shortest_path",
    "slice_decomposition",
    "solve_lp",
    "solve_lp_reduced",
    "symmetric_ilp_feasible",
    "symmetric_ilp_optimize",
    "volume",
    "write_dot",
    "write_polyfile",
]

__version__ = "0.1.0"
