"""Command-line surface: polyhedron files in, plain-text reports out.

The file format follows the dominant polyhedral text convention: a kind line
(``H-representation`` or ``V-representation``), an optional ``linearity``
line, a ``begin``/``end`` block whose header gives the row count and width,
and rows of exact rationals.  H rows encode b - Ax >= 0 as
(b_i, -a_i1, ..., -a_in); V rows carry a leading 1 for vertices and 0 for
rays.  Trailing option lines declare an objective (``maximize``/``minimize``,
constant term first) and a ``blocks`` header for the symmetric routes.

Subcommands: automorphisms, convert, count, ehrhart, volume, ilp.  Exit
codes: 0 success, 1 infeasible or empty (a computed answer), 2 input error,
3 internal verification failure.  ``--jobs`` (default from POLYORBIT_JOBS)
never changes any output byte.
"""

from __future__ import annotations

import argparse
import os
import re
import sys
from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import ceil, floor
from typing import Optional, Sequence

from .latcount import count_lattice_points, count_with_symmetry, ehrhart, volume
from .polycore import (
    EmptyPolyhedronError,
    HPolyhedron,
    Matrix,
    PolyhedronError,
    Vector,
    VerificationError,
    VPolyhedron,
    dot,
    matrix,
    solve_lp,
    vector,
)
from .repconv import (
    adjacency_decomposition,
    adjacency_graph,
    convert_dd,
    write_dot,
)
from .symdetect import affine_symmetry_group, restricted_symmetries_H
from .symilp import (
    _feasibility_candidates,
    _objective_candidates,
    symmetric_ilp_feasible,
    symmetric_ilp_optimize,
)

__all__ = [
    "PolyFile",
    "PolyFileError",
    "main",
    "parse_polyfile",
    "write_polyfile",
]

_BRUTE_LIMIT = 200_000  # candidate cap for the warned brute-force ILP path


class PolyFileError(ValueError):
    """Malformed polyhedron file; the message names the offending line."""


@dataclass(frozen=True)
class PolyFile:
    """Parsed polyhedron file: kind, body rows, and trailing options."""
    kind: str                                     # "H" | "V"
    rows: Matrix                                  # m x (n+1) exact entries
    linearity: tuple[int, ...] = ()               # 1-based body row indices
    objective: Optional[tuple[str, Vector]] = None  # (sense, n+1 entries)
    blocks: Optional[tuple[int, ...]] = None

    @property
    def width(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def to_hpolyhedron(self) -> HPolyhedron:
        if self.kind != "H":
            raise PolyhedronError("an H-representation file is required here")
        A = matrix([[-x for x in row[1:]] for row in self.rows])
        b = vector([row[0] for row in self.rows])
        return HPolyhedron(A, b, self.linearity)

    def to_vpolyhedron(self) -> VPolyhedron:
        if self.kind != "V":
            raise PolyhedronError("a V-representation file is required here")
        lin = set(self.linearity)
        points, rays = [], []
        for i, row in enumerate(self.rows, start=1):
            if row[0] == 1:
                points.append(row[1:])
            else:  # parser guarantees 0: a ray, doubled when marked as a line
                rays.append(row[1:])
                if i in lin:
                    rays.append(tuple(-x for x in row[1:]))
        return VPolyhedron.from_points(points, rays)


_RATIONAL = re.compile(r"^[+-]?\d+(/\d+)?$")


def _parse_rational(tok: str, lineno: int) -> Fraction:
    if not _RATIONAL.match(tok):
        raise PolyFileError(f"line {lineno}: not a rational number: {tok!r}")
    if "/" in tok and tok.split("/")[1] == "0":
        raise PolyFileError(f"line {lineno}: zero denominator: {tok!r}")
    return Fraction(tok)


def parse_polyfile(text: str) -> PolyFile:
    """Parse a polyhedron file; errors carry 1-based line numbers."""
    lines = [(no, ln.strip()) for no, ln in enumerate(text.splitlines(), start=1)
             if ln.strip() and not ln.lstrip().startswith("#")]
    pos = 0

    def take() -> tuple[int, str]:
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 0
            raise PolyFileError(f"line {last}: unexpected end of file")
        pos += 1
        return lines[pos - 1]

    no, head = take()
    if head == "H-representation":
        kind = "H"
    elif head == "V-representation":
        kind = "V"
    else:
        raise PolyFileError(
            f"line {no}: expected H-representation or V-representation, got {head!r}")

    linearity: tuple[int, ...] = ()
    no, ln = take()
    if ln.split() and ln.split()[0] == "linearity":
        toks = ln.split()
        try:
            cnt = int(toks[1])
            idx = [int(t) for t in toks[2:]]
        except (IndexError, ValueError):
            raise PolyFileError(f"line {no}: malformed linearity line")
        if len(idx) != cnt or len(set(idx)) != cnt:
            raise PolyFileError(
                f"line {no}: linearity count does not match its indices")
        linearity = tuple(sorted(idx))
        no, ln = take()
    if ln != "begin":
        raise PolyFileError(f"line {no}: expected begin, got {ln!r}")

    no, ln = take()
    toks = ln.split()
    if len(toks) != 3 or toks[2] not in ("rational", "integer"):
        raise PolyFileError(
            f"line {no}: expected header 'm n rational', got {ln!r}")
    try:
        m, width = int(toks[0]), int(toks[1])
    except ValueError:
        raise PolyFileError(f"line {no}: non-integer sizes in header")
    if m < 0 or width < 1:
        raise PolyFileError(f"line {no}: invalid sizes in header")

    rows = []
    for _ in range(m):
        no, ln = take()
        toks = ln.split()
        if len(toks) != width:
            raise PolyFileError(
                f"line {no}: expected {width} entries, got {len(toks)}")
        row = tuple(_parse_rational(t, no) for t in toks)
        if kind == "V" and row[0] not in (0, 1):
            raise PolyFileError(
                f"line {no}: V rows must start with 1 (vertex) or 0 (ray)")
        rows.append(row)
    no, ln = take()
    if ln != "end":
        raise PolyFileError(f"line {no}: expected end, got {ln!r}")
    for i in linearity:
        if not 1 <= i <= m:
            raise PolyFileError(f"linearity index {i} is out of range 1..{m}")

    objective = None
    blocks = None
    while pos < len(lines):
        no, ln = take()
        toks = ln.split()
        if toks[0] in ("maximize", "minimize"):
            if objective is not None:
                raise PolyFileError(f"line {no}: duplicate objective line")
            if len(toks) != width + 1:
                raise PolyFileError(
                    f"line {no}: objective needs {width} entries, got {len(toks) - 1}")
            objective = (toks[0], tuple(_parse_rational(t, no) for t in toks[1:]))
        elif toks[0] == "blocks":
            if blocks is not None:
                raise PolyFileError(f"line {no}: duplicate blocks line")
            try:
                blocks = tuple(int(t) for t in toks[1:])
            except ValueError:
                raise PolyFileError(f"line {no}: blocks must be integers")
            if not blocks or any(x < 1 for x in blocks):
                raise PolyFileError(f"line {no}: blocks must be positive integers")
        else:
            raise PolyFileError(f"line {no}: unknown option line {ln!r}")
    return PolyFile(kind, matrix(rows), linearity, objective, blocks)


def write_polyfile(pf: PolyFile) -> str:
    """Canonical text for a PolyFile; parsing it back gives an equal value."""
    out = [f"{pf.kind}-representation"]
    if pf.linearity:
        out.append("linearity " + " ".join(str(i) for i in (len(pf.linearity),) + pf.linearity))
    out.append("begin")
    out.append(f"{len(pf.rows)} {pf.width} rational")
    for row in pf.rows:
        out.append(" ".join(str(x) for x in row))
    out.append("end")
    if pf.objective is not None:
        sense, c = pf.objective
        out.append(sense + " " + " ".join(str(x) for x in c))
    if pf.blocks is not None:
        out.append("blocks " + " ".join(str(x) for x in pf.blocks))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# Subcommands


def _bounded_vfile(pf: PolyFile) -> VPolyhedron:
    V = pf.to_vpolyhedron()
    if V.rays:
        raise PolyhedronError("unbounded V input (rays present) is not supported here")
    if not V.vertices:
        raise EmptyPolyhedronError("the file lists no vertices")
    return V


def _input_polytope(pf: PolyFile) -> HPolyhedron:
    """Inequality description of the input, converting a V file exactly."""
    if pf.kind == "H":
        return pf.to_hpolyhedron()
    return convert_dd(pf.to_vpolyhedron())


def cmd_automorphisms(pf: PolyFile, args) -> int:
    if pf.kind == "V":
        G = affine_symmetry_group(_bounded_vfile(pf)).perm_group
    else:
        G = restricted_symmetries_H(pf.to_hpolyhedron())
    print(f"order {G.order()}")
    for g in G.generators:
        if g.cycles():
            print(f"generator {g.cycle_string()}")
    return 0


def cmd_convert(pf: PolyFile, args) -> int:
    levels = tuple(args.idm_adm_level)
    if pf.kind == "V":
        V = _bounded_vfile(pf)
        G = affine_symmetry_group(V).perm_group
        ledger = adjacency_decomposition(V, G, levels, jobs=args.jobs)
        lines = [f"facet orbits {ledger.orbit_count}"]
        for t, e in enumerate(ledger.entries.values(), start=1):
            # stored as (a | delta) for a.x <= delta; file rows carry (b, -a)
            rep = (e.row[-1],) + tuple(-x for x in e.row[:-1])
            lines.append(f"orbit {t} size {e.size} rep "
                         + " ".join(str(x) for x in rep))
        obj, grp = V, G
    else:
        P = pf.to_hpolyhedron()
        G = restricted_symmetries_H(P)
        ledger = adjacency_decomposition(P, G, levels, jobs=args.jobs)
        orbs = sorted(ledger.vertex_group.point_orbits(), key=min)
        lines = [f"vertex orbits {len(orbs)}"]
        for t, orb in enumerate(orbs, start=1):
            v = ledger.vertices[min(orb) - 1]
            lines.append(f"orbit {t} size {len(orb)} rep 1 "
                         + " ".join(str(x) for x in v))
        obj, grp = P, G
    print("\n".join(lines))
    if args.adjacencies:
        dot = write_dot(adjacency_graph(obj, grp, ledger, jobs=args.jobs))
        if args.dot:
            with open(args.dot, "w") as fh:
                fh.write(dot)
        else:
            print(dot, end="")
    return 0


def cmd_count(pf: PolyFile, args) -> int:
    P = _input_polytope(pf)
    if args.symmetric:
        if pf.blocks is None:
            raise PolyhedronError(
                "--symmetric needs a blocks header in the input file")
        total = count_with_symmetry(P, pf.blocks, jobs=args.jobs)
    else:
        total = count_lattice_points(P)
    print(total)
    return 0


def cmd_ehrhart(pf: PolyFile, args) -> int:
    q = ehrhart(_input_polytope(pf), period_bound=args.period_bound)
    print(f"period {q.period}")
    print(f"degree {q.degree}")
    for i, comp in enumerate(q.components):
        print(f"class {i}: " + " ".join(str(c) for c in comp))
    return 0


def cmd_volume(pf: PolyFile, args) -> int:
    print(volume(_input_polytope(pf)))
    return 0


def _brute_ilp(P: HPolyhedron, c: Optional[Vector]):
    """Deterministic box scan: first integral point (feasibility) or the
    lexicographically least maximizer (optimization).  Refuses unbounded or
    oversized instances instead of truncating the search."""
    los, his = [], []
    size = 1
    for i in range(P.n):
        e = tuple(Fraction(int(i == j)) for j in range(P.n))
        top = solve_lp(P, e)
        if top.status == "infeasible":
            return None
        bot = solve_lp(P, e, maximize=False)
        if top.status != "optimal" or bot.status != "optimal":
            raise PolyhedronError(
                "unbounded variable; brute-force enumeration needs a bounded system")
        los.append(ceil(bot.value))
        his.append(floor(top.value))
        size *= max(his[-1] - los[-1] + 1, 0)
        if size > _BRUTE_LIMIT:
            raise PolyhedronError(
                "instance too large for brute-force enumeration; add a blocks header")
    best = None
    for q in product(*(range(lo, hi + 1) for lo, hi in zip(los, his))):
        z = tuple(Fraction(x) for x in q)
        if not P.contains(z):
            continue
        if c is None:
            return z
        val = dot(c, z)
        if best is None or val > best[0]:
            best = (val, z)
    return None if best is None else best[1]


def _block_sums_of(blocks: Sequence[int], z: Vector) -> tuple[int, ...]:
    sums = []
    off = 0
    for nb in blocks:
        sums.append(int(sum(z[off:off + nb])))
        off += nb
    return tuple(sums)


def cmd_ilp(pf: PolyFile, args) -> int:
    P = pf.to_hpolyhedron()
    sense, c, shift = None, None, Fraction(0)
    if pf.objective is not None:
        sense = pf.objective[0]
        shift = pf.objective[1][0]
        c = vector(pf.objective[1][1:])

    tested = None
    if pf.blocks is None:
        print("warning: no blocks header; falling back to brute-force enumeration",
              file=sys.stderr)
        z = _brute_ilp(P, (tuple(-x for x in c) if sense == "minimize" else c)
                       if c is not None else None)
    else:
        goal = None if c is None else \
            (tuple(-x for x in c) if sense == "minimize" else c)
        if goal is None:
            z = symmetric_ilp_feasible(P, pf.blocks, jobs=args.jobs)
            cands = _feasibility_candidates(P, pf.blocks, None, 1_000_000)
        else:
            res = symmetric_ilp_optimize(P, pf.blocks, goal, jobs=args.jobs)
            z = None if res is None else res[1]
            cands = _objective_candidates(P, pf.blocks, vector(goal), None, 1_000_000)
        if cands is None:
            tested = 0
        elif z is None:
            tested = len(cands)
        else:
            tested = cands.index(_block_sums_of(pf.blocks, z)) + 1

    if z is None:
        print("infeasible")
        if tested is not None:
            print(f"fibers tested {tested}")
        return 1
    if not P.contains(z):
        raise VerificationError("computed point violates the input system")
    print("feasible")
    print("point " + " ".join(str(x) for x in z))
    if c is not None:
        print(f"objective {dot(c, z) + shift}")
    if tested is not None:
        print(f"fibers tested {tested}")
    return 0


# ---------------------------------------------------------------------------
# Entry point


def _env_jobs() -> int:
    raw = os.environ.get("POLYORBIT_JOBS", "1")
    try:
        jobs = int(raw)
    except ValueError:
        raise PolyhedronError(f"POLYORBIT_JOBS must be an integer, got {raw!r}")
    if jobs < 1:
        raise PolyhedronError("POLYORBIT_JOBS must be at least 1")
    return jobs


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="polyorbit",
        description="Exact polyhedral computations up to symmetry.")
    sub = top.add_subparsers(dest="command", required=True)

    def add(name: str, handler, help_text: str):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("file", help="polyhedron file (H- or V-representation)")
        p.add_argument("--jobs", type=int, default=_env_jobs(),
                       help="worker count; never changes any output byte")
        p.set_defaults(handler=handler)
        return p

    add("automorphisms", cmd_automorphisms,
        "group order and generators on the input rows")
    conv = add("convert", cmd_convert,
               "orbit representatives of the converted representation")
    conv.add_argument("--idm-adm-level", type=int, nargs=2, default=(0, 1),
                      metavar=("L1", "L2"),
                      help="recursion depths for the incidence / adjacency methods")
    conv.add_argument("--adjacencies", action="store_true",
                      help="also emit the facet adjacency graph as DOT")
    conv.add_argument("--dot", metavar="FILE",
                      help="write the DOT graph here instead of stdout")
    cnt = add("count", cmd_count, "exact number of lattice points")
    cnt.add_argument("--symmetric", action="store_true",
                     help="count through the slice decomposition (blocks header)")
    ehr = add("ehrhart", cmd_ehrhart,
              "Ehrhart quasi-polynomial, one coefficient row per residue class")
    ehr.add_argument("--period-bound", type=int, default=24,
                     help="largest allowed quasi-polynomial period")
    add("volume", cmd_volume, "exact volume, lattice-relative on the hull")
    add("ilp", cmd_ilp, "integral feasibility / optimization over the file")
    return top


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        with open(args.file) as fh:
            pf = parse_polyfile(fh.read())
        return args.handler(pf, args)
    except PolyFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except VerificationError as exc:
        print(f"verification failure: {exc}", file=sys.stderr)
        return 3
    except EmptyPolyhedronError as exc:
        print(f"empty: {exc}", file=sys.stderr)
        return 1
    except (PolyhedronError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
