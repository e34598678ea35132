"""Permutation groups on {1,...,N}: BSGS, orbits of sets, backtrack searches.

All points are 1-based, matching the index convention used for vertices and
inequality rows everywhere else in the package.  Groups are stored as a base
and strong generating set (stabilizer chain) built by a deterministic
Schreier-Sims procedure, so identical generator lists always produce identical
chains, transversals, and search orders.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class OrbitBudgetExceeded(Exception):
    """An orbit expansion grew past the caller's element budget."""


class Permutation:
    """A permutation of {1,...,degree}; immutable and hashable.

    images[i-1] is the image of i.  Composition is function composition:
    (p * q)(x) = p(q(x)).
    """

    __slots__ = ("images",)

    def __init__(self, images: Sequence[int]):
        self.images = tuple(images)
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise ValueError("not a permutation of 1..n")

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(range(1, degree + 1))

    @classmethod
    def from_cycles(cls, degree: int, cycles: Iterable[Sequence[int]]) -> "Permutation":
        images = list(range(1, degree + 1))
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                images[a - 1] = b
        return cls(images)

    @classmethod
    def parse_cycles(cls, degree: int, text: str) -> "Permutation":
        """Parse cycle notation like "(1 2 3)(4 5)"; "()" is the identity."""
        text = text.strip()
        cycles = []
        if text and text != "()":
            for part in text.replace(")", ")|").split("|"):
                part = part.strip()
                if not part:
                    continue
                if not (part.startswith("(") and part.endswith(")")):
                    raise ValueError(f"bad cycle segment: {part!r}")
                inner = part[1:-1].replace(",", " ").split()
                if inner:
                    cycles.append([int(x) for x in inner])
        return cls.from_cycles(degree, cycles)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        return self.images[point - 1]

    def apply_set(self, points: Iterable[int]) -> frozenset:
        return frozenset(self.images[p - 1] for p in points)

    def __mul__(self, other: "Permutation") -> "Permutation":
        oi = other.images
        si = self.images
        return Permutation(tuple(si[oi[i] - 1] for i in range(len(si))))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, img in enumerate(self.images):
            inv[img - 1] = i + 1
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(img == i + 1 for i, img in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for start in range(1, self.degree + 1):
            if start in seen or self(start) == start:
                continue
            cyc = [start]
            seen.add(start)
            x = self(start)
            while x != start:
                cyc.append(x)
                seen.add(x)
                x = self(x)
            out.append(tuple(cyc))
        return out

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(x) for x in c) + ")" for c in cycs)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __lt__(self, other: "Permutation") -> bool:
        return self.images < other.images

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()}, degree={self.degree})"


@dataclass
class _ChainLevel:
    base_point: int
    gens: list          # strong generators fixing all earlier base points
    orbit: dict         # point -> transversal element u with u(base_point) = point


class PermutationGroup:
    """Group generated by permutations, with a stabilizer chain (BSGS).

    base_prefix forces the base to start with the given points (in order);
    a forced point may end up with a trivial basic orbit, which is harmless.
    The prefix is what makes pointwise stabilizers and set-transporter
    searches exact: everything below level len(prefix) fixes each prefix
    point individually.
    """

    def __init__(self, generators: Sequence[Permutation], degree: Optional[int] = None,
                 base_prefix: Sequence[int] = ()):
        gens = [g for g in generators if not g.is_identity()]
        if degree is None:
            if not gens:
                raise ValueError("degree required for the trivial group")
            degree = gens[0].degree
        if any(g.degree != degree for g in gens):
            raise ValueError("mixed degrees")
        self.degree = degree
        self.generators = tuple(gens)
        prefix = []
        for p in base_prefix:
            if not 1 <= p <= degree:
                raise ValueError(f"base point {p} out of range")
            if p not in prefix:
                prefix.append(p)
        self._base_prefix = tuple(prefix)
        self._levels: list[_ChainLevel] = []
        for p in prefix:
            self._new_level(p)
        for g in gens:
            self._add_generator(g, 0)

    # -- chain construction (deterministic Schreier-Sims) ------------------

    def _new_level(self, point: int) -> _ChainLevel:
        lvl = _ChainLevel(point, [], {point: Permutation.identity(self.degree)})
        self._levels.append(lvl)
        return lvl

    def _recompute_orbit(self, idx: int) -> None:
        lvl = self._levels[idx]
        frontier = sorted(lvl.orbit)
        while frontier:
            new_frontier = []
            for p in frontier:
                u = lvl.orbit[p]
                for g in lvl.gens:
                    q = g(p)
                    if q not in lvl.orbit:
                        lvl.orbit[q] = g * u
                        new_frontier.append(q)
            frontier = sorted(new_frontier)

    def _strip(self, g: Permutation, start: int) -> tuple[Permutation, int]:
        h = g
        for i in range(start, len(self._levels)):
            lvl = self._levels[i]
            img = h(lvl.base_point)
            if img not in lvl.orbit:
                return h, i
            h = lvl.orbit[img].inverse() * h
        return h, len(self._levels)

    def _add_generator(self, g: Permutation, level: int) -> None:
        """Sift g (a member of level's group) and grow the chain if it sticks."""
        h, idx = self._strip(g, level)
        if h.is_identity():
            return
        if idx == len(self._levels):
            # h fixes every existing base point; open a new level on the
            # smallest point it moves.
            self._new_level(next(p for p in range(1, self.degree + 1) if h(p) != p))
        # h fixes base points of all levels < idx, so it is a member of every
        # level group from `level` through idx; record it at each so each
        # level's basic orbit can be computed from that level's own list.
        for i in range(level, idx + 1):
            self._levels[i].gens.append(h)
            self._recompute_orbit(i)
        # Re-close the touched levels: every Schreier generator must sift to
        # the identity through the deeper chain.
        for i in range(idx, level - 1, -1):
            lvl = self._levels[i]
            for p in sorted(lvl.orbit):
                u = lvl.orbit[p]
                for s in list(lvl.gens):
                    schreier = lvl.orbit[s(p)].inverse() * (s * u)
                    if not schreier.is_identity():
                        self._add_generator(schreier, i + 1)

    # -- queries ------------------------------------------------------------

    @property
    def base(self) -> tuple[int, ...]:
        return tuple(lvl.base_point for lvl in self._levels)

    def order(self) -> int:
        n = 1
        for lvl in self._levels:
            n *= len(lvl.orbit)
        return n

    def __contains__(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            return False
        h, _ = self._strip(g, 0)
        return h.is_identity()

    def elements(self, budget: int = 1_000_000):
        """Iterate all elements (deterministic order); raises if order > budget."""
        if self.order() > budget:
            raise OrbitBudgetExceeded(f"group order {self.order()} exceeds budget {budget}")

        # each element decomposes uniquely as u_0 * u_1 * ... with u_i from
        # level i's transversal, u_0 outermost
        def rec(i: int, acc: Permutation):
            if i == len(self._levels):
                yield acc
                return
            lvl = self._levels[i]
            for p in sorted(lvl.orbit):
                yield from rec(i + 1, acc * lvl.orbit[p])

        yield from rec(0, Permutation.identity(self.degree))

    def orbit_of_point(self, point: int) -> frozenset:
        orb = {point}
        frontier = [point]
        while frontier:
            nxt = []
            for p in frontier:
                for g in self.generators:
                    q = g(p)
                    if q not in orb:
                        orb.add(q)
                        nxt.append(q)
            frontier = nxt
        return frozenset(orb)

    def point_orbits(self) -> list[frozenset]:
        seen = set()
        out = []
        for p in range(1, self.degree + 1):
            if p not in seen:
                orb = self.orbit_of_point(p)
                seen |= orb
                out.append(orb)
        return out

    def rebase(self, base_prefix: Sequence[int]) -> "PermutationGroup":
        """Same group, chain rebuilt with the base forced to start as given."""
        return PermutationGroup(self.generators, self.degree, base_prefix=base_prefix)

    def pointwise_stabilizer(self, points: Sequence[int]) -> "PermutationGroup":
        """Subgroup fixing each of `points` individually."""
        chain = self.rebase(tuple(points))
        k = len(chain._base_prefix)
        gens = chain._levels[k].gens if len(chain._levels) > k else []
        return PermutationGroup(gens, self.degree)


def schreier_sims(generators: Sequence[Permutation], degree: Optional[int] = None,
                  base_prefix: Sequence[int] = ()) -> PermutationGroup:
    """Build a PermutationGroup (BSGS) from a generator list."""
    return PermutationGroup(generators, degree, base_prefix=base_prefix)


# ---------------------------------------------------------------------------
# Orbits of index sets


@dataclass(frozen=True)
class SetOrbit:
    representative: tuple[int, ...]   # sorted tuple; lex-least iff expanded
    size: int
    elements: Optional[frozenset] = None  # frozenset of frozensets when expanded

    @property
    def expanded(self) -> bool:
        return self.elements is not None


def _expand_set_orbit(G: PermutationGroup, S: frozenset, budget: int) -> dict:
    """BFS over set images.  Returns {X: witness with witness(S) = X};
    raises OrbitBudgetExceeded when more than `budget` sets appear."""
    start = frozenset(S)
    witnesses = {start: Permutation.identity(G.degree)}
    frontier = [start]
    while frontier:
        nxt = []
        for X in frontier:
            u = witnesses[X]
            for g in G.generators:
                Y = g.apply_set(X)
                if Y not in witnesses:
                    if len(witnesses) >= budget:
                        raise OrbitBudgetExceeded(f"set orbit exceeded budget {budget}")
                    witnesses[Y] = g * u
                    nxt.append(Y)
        frontier = nxt
    return witnesses


def orbit_of_set(G: PermutationGroup, S: Iterable[int], budget: int = 200_000) -> SetOrbit:
    """Orbit of an index set under G.

    Within budget the orbit is fully expanded and the representative is its
    lexicographically least member.  On overflow only the input set (as
    representative) and the exact size, via orbit-stabilizer, are returned.
    """
    S = frozenset(S)
    try:
        witnesses = _expand_set_orbit(G, S, budget)
    except OrbitBudgetExceeded:
        stab = set_stabilizer(G, S, budget=budget * 10)
        return SetOrbit(tuple(sorted(S)), G.order() // stab.order(), None)
    elements = frozenset(witnesses)
    rep = min(tuple(sorted(X)) for X in elements)
    return SetOrbit(rep, len(elements), elements)


def set_stabilizer(G: PermutationGroup, S: Iterable[int], budget: int = 2_000_000) -> PermutationGroup:
    """The subgroup {g in G : g(S) = S}, with its own BSGS.

    Computed from Schreier generators of the action of G on the orbit of S;
    the witnesses form a transversal, so the result is the full stabilizer.
    Requires expanding the set orbit (raises OrbitBudgetExceeded past budget).
    """
    S = frozenset(S)
    witnesses = _expand_set_orbit(G, S, budget)
    gens = []
    seen = set()
    for X in sorted(witnesses, key=sorted):
        u = witnesses[X]
        for a in G.generators:
            w = witnesses[a.apply_set(X)].inverse() * (a * u)
            if not w.is_identity() and w.images not in seen:
                seen.add(w.images)
                gens.append(w)
    return PermutationGroup(gens, G.degree)


def is_equivalent(G: PermutationGroup, S: Iterable[int], T: Iterable[int]) -> Optional[Permutation]:
    """A witness g in G with g(S) = T, or None.

    Transporter backtrack over a chain whose base is forced to start with the
    points of S: below level |S| everything fixes S pointwise, so only the
    first |S| levels are searched, pruning on membership of images in T.
    """
    S = frozenset(S)
    T = frozenset(T)
    if len(S) != len(T):
        return None
    if S == T:
        return Permutation.identity(G.degree)
    chain = G.rebase(tuple(sorted(S)))
    levels = chain._levels
    cut = len(chain._base_prefix)

    def dfs(i: int, h: Permutation) -> Optional[Permutation]:
        if i == cut:
            return h if h.apply_set(S) == T else None
        lvl = levels[i]
        for p in sorted(lvl.orbit):
            # images of base points are final once chosen: deeper transversal
            # elements fix all earlier base points
            if h(p) not in T:
                continue
            res = dfs(i + 1, h * lvl.orbit[p])
            if res is not None:
                return res
        return None

    return dfs(0, Permutation.identity(G.degree))


def canonical_representative(G: PermutationGroup, S: Iterable[int],
                             budget: int = 200_000) -> tuple[int, ...]:
    """Lexicographically least sorted tuple in the orbit of S under G."""
    orb = orbit_of_set(G, S, budget=budget)
    if not orb.expanded:
        raise OrbitBudgetExceeded("orbit too large to canonicalize")
    return orb.representative
