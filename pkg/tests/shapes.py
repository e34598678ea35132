"""Fixture polytopes shared across test modules."""
from fractions import Fraction
from itertools import product

from polyorbit.polycore import HPolyhedron, VPolyhedron


def cube_h(n: int) -> HPolyhedron:
    """[-1, 1]^n as 2n inequality rows, +e_i before -e_i."""
    A, b = [], []
    for i in range(n):
        for s in (1, -1):
            row = [Fraction(0)] * n
            row[i] = Fraction(s)
            A.append(tuple(row))
            b.append(Fraction(1))
    return HPolyhedron.from_rows(A, b)


def cube_v(n: int) -> VPolyhedron:
    return VPolyhedron.from_points(
        sorted(product([Fraction(-1), Fraction(1)], repeat=n)))


def cross_v(n: int) -> VPolyhedron:
    pts = []
    for i in range(n):
        for s in (1, -1):
            p = [Fraction(0)] * n
            p[i] = Fraction(s)
            pts.append(tuple(p))
    return VPolyhedron.from_points(sorted(pts))


def cross_h(n: int) -> HPolyhedron:
    A, b = [], []
    for signs in product([1, -1], repeat=n):
        A.append(tuple(Fraction(s) for s in signs))
        b.append(Fraction(1))
    return HPolyhedron.from_rows(A, b)


def simplex_v(n: int) -> VPolyhedron:
    """Standard corner simplex: origin plus the unit points."""
    pts = [tuple(Fraction(0) for _ in range(n))]
    for i in range(n):
        p = [Fraction(0)] * n
        p[i] = Fraction(1)
        pts.append(tuple(p))
    return VPolyhedron.from_points(pts)


def _signed_patterns(base):
    out = set()

    def rec(i, cur):
        if i == len(base):
            out.add(tuple(cur))
            return
        if base[i] == 0:
            rec(i + 1, cur + [0])
        else:
            rec(i + 1, cur + [base[i]])
            rec(i + 1, cur + [-base[i]])

    rec(0, [])
    return sorted(out)


def santos_prismatoid() -> VPolyhedron:
    """The 48-vertex 5-dimensional prismatoid with two 24-vertex base facets
    at x5 = +1 and x5 = -1.  Its dual-graph distance between the bases is 6,
    which is what makes it interesting."""
    top = [(18, 0, 0, 0), (0, 18, 0, 0), (0, 0, 45, 0), (0, 0, 0, 45),
           (15, 15, 0, 0), (0, 0, 30, 30), (0, 10, 40, 0), (10, 0, 0, 40)]
    bottom = [(45, 0, 0, 0), (0, 45, 0, 0), (0, 0, 18, 0), (0, 0, 0, 18),
              (30, 30, 0, 0), (0, 0, 15, 15), (40, 0, 10, 0), (0, 40, 0, 10)]
    pts = set()
    for base in top:
        for s in _signed_patterns(base):
            pts.add(s + (1,))
    for base in bottom:
        for s in _signed_patterns(base):
            pts.add(s + (-1,))
    return VPolyhedron.from_points(sorted(pts))


def simplex_h(n: int) -> HPolyhedron:
    """Standard simplex x >= 0, sum x <= 1."""
    A = [tuple(Fraction(-(i == j)) for j in range(n)) for i in range(n)]
    A.append(tuple(Fraction(1) for _ in range(n)))
    return HPolyhedron.from_rows(A, [Fraction(0)] * n + [Fraction(1)])


def birkhoff(n: int) -> HPolyhedron:
    """Doubly stochastic n x n matrices: x >= 0, unit row and column sums."""
    d = n * n
    A, b, eqs = [], [], []
    for t in range(d):
        row = [Fraction(0)] * d
        row[t] = Fraction(-1)
        A.append(tuple(row))
        b.append(Fraction(0))
    for r in range(n):
        row = [Fraction(0)] * d
        for c in range(n):
            row[n * r + c] = Fraction(1)
        A.append(tuple(row))
        b.append(Fraction(1))
        eqs.append(len(A))
    for c in range(n):
        row = [Fraction(0)] * d
        for r in range(n):
            row[n * r + c] = Fraction(1)
        A.append(tuple(row))
        b.append(Fraction(1))
        eqs.append(len(A))
    return HPolyhedron.from_rows(A, b, eqs)
