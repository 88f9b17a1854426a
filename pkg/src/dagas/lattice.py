"""Oriented lattice families, their cylinders, balls and marked-graph distance.

Three translation-invariant families are supported, all with vertices in a
subset of Z^2 and every edge increasing the line index j by 1 or 2:

* ``LR(R)``   -- from (i, j) one edge to (i+r, j+1) for each r in R
                 (R finite, |R| >= 2, min R = 0).  ``LR({0,..,n-1})`` is the
                 classical L_n family; ``LR({0,1})`` is the square lattice.
* ``Tri``     -- vertices with i = j (mod 2), edges to (i-1, j+1), (i+1, j+1)
                 and (i, j+2).
* ``Tn(n)``   -- n >= 2.  Odd n = 2k+1: all of Z^2, edges to (i+r, j+1) for
                 -k <= r <= k plus (i, j+2).  Even n = 2k: same parity
                 restriction as Tri, edges to (i+2r+1, j+1) for -k <= r <= k-1
                 plus (i, j+2).  Tn(2) coincides with Tri up to edge order.

A cylinder of width N is the same edge rule with abscissae reduced mod N;
no vertices are ever materialized, only the generators.  All values here are
immutable and all operations are pure functions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .errors import InvalidVertexError, ValidationError, WidthError

Vertex = tuple[int, int]


@dataclass(frozen=True)
class Lattice:
    """A lattice family instance, optionally cylindric (``width`` set)."""

    family: str                      # "LR" | "Tri" | "Tn"
    r_set: tuple[int, ...] = ()      # LR only, sorted, min = 0
    n: int = 0                       # Tn only
    width: Optional[int] = None

    def __post_init__(self):
        if self.family == "LR":
            r = tuple(sorted(set(self.r_set)))
            if len(r) < 2 or r[0] != 0 or any(x < 0 for x in r):
                raise ValidationError(
                    f"LR needs a set of >=2 nonnegative offsets containing 0, got {self.r_set}")
            object.__setattr__(self, "r_set", r)
        elif self.family == "Tri":
            if self.r_set or self.n:
                raise ValidationError("Tri takes no parameters")
        elif self.family == "Tn":
            if self.n < 2:
                raise ValidationError(f"Tn needs n >= 2, got {self.n}")
        else:
            raise ValidationError(f"unknown lattice family {self.family!r}")
        if self.width is not None:
            _check_width(self)

    # -- generators ---------------------------------------------------------

    @property
    def step_offsets(self) -> tuple[tuple[int, int], ...]:
        """Edge rule as (di, dj) steps, in canonical edge order."""
        if self.family == "LR":
            return tuple((r, 1) for r in self.r_set)
        if self.family == "Tri":
            return ((-1, 1), (1, 1), (0, 2))
        k = self.n // 2
        if self.n % 2:
            fan = tuple((r, 1) for r in range(-k, k + 1))
        else:
            fan = tuple((2 * r + 1, 1) for r in range(-k, k))
        return fan + ((0, 2),)

    @property
    def outdegree(self) -> int:
        return len(self.step_offsets)

    @property
    def parity_constrained(self) -> bool:
        return self.family == "Tri" or (self.family == "Tn" and self.n % 2 == 0)

    @property
    def is_cyclic(self) -> bool:
        return self.width is not None

    # -- vertices and edges -------------------------------------------------

    def check_vertex(self, v: Vertex) -> None:
        i, j = v
        if self.parity_constrained and (i + j) % 2 != 0:
            raise InvalidVertexError(f"vertex {v} violates the same-parity rule")
        if self.width is not None and not 0 <= i < self.width:
            raise InvalidVertexError(f"abscissa of {v} outside [0, {self.width})")

    def is_valid_vertex(self, v: Vertex) -> bool:
        try:
            self.check_vertex(v)
        except InvalidVertexError:
            return False
        return True

    def children(self, v: Vertex) -> tuple[Vertex, ...]:
        self.check_vertex(v)
        i, j = v
        if self.width is None:
            return tuple((i + di, j + dj) for di, dj in self.step_offsets)
        w = self.width
        return tuple(((i + di) % w, j + dj) for di, dj in self.step_offsets)

    def parents(self, v: Vertex) -> tuple[Vertex, ...]:
        self.check_vertex(v)
        i, j = v
        if self.width is None:
            return tuple((i - di, j - dj) for di, dj in self.step_offsets)
        w = self.width
        return tuple(((i - di) % w, j - dj) for di, dj in self.step_offsets)

    def make_cyclic(self, n_width: int) -> "Lattice":
        if self.width is not None:
            raise ValidationError("lattice is already cylindric")
        return Lattice(self.family, self.r_set, self.n, n_width)

    # -- serialization ------------------------------------------------------

    def spec_string(self) -> str:
        if self.family == "LR":
            base = "LR:" + ",".join(str(r) for r in self.r_set)
        elif self.family == "Tri":
            base = "Tri"
        else:
            base = f"Tn:{self.n}"
        if self.width is not None:
            base += f"@N={self.width}"
        return base

    def __str__(self) -> str:
        return self.spec_string()


def _check_width(lat: Lattice) -> None:
    """Widths must keep the edge rule injective (no multiple edges)."""
    n = lat.width
    if n is None or n < 1:
        raise WidthError(f"width must be a positive integer, got {n}")
    if lat.parity_constrained and n % 2 != 0:
        raise WidthError(
            f"width {n} is odd: parity mismatch with the same-parity vertex labeling")
    fan = [di for di, dj in lat.step_offsets if dj == 1]
    span = max(fan) - min(fan)
    if n <= span:
        raise WidthError(
            f"width {n} too small: same-line child offsets span {span}, need N > {span}")


def square_lattice(width: Optional[int] = None) -> Lattice:
    return Lattice("LR", (0, 1), width=width)


def lr_lattice(r_set: Iterable[int], width: Optional[int] = None) -> Lattice:
    return Lattice("LR", tuple(r_set), width=width)


def ln_lattice(n: int, width: Optional[int] = None) -> Lattice:
    """The L_n family: LR({0, 1, ..., n-1})."""
    return Lattice("LR", tuple(range(n)), width=width)


def tri_lattice(width: Optional[int] = None) -> Lattice:
    return Lattice("Tri", width=width)


def tn_lattice(n: int, width: Optional[int] = None) -> Lattice:
    return Lattice("Tn", n=n, width=width)


_SPEC_RE = re.compile(r"^(?P<base>[^@]+?)(?:@N=(?P<width>\d+))?$")


def parse_lattice(spec: str) -> Lattice:
    """Parse compact text forms like ``LR:0,1,4``, ``Tri@N=8``, ``Tn:3``."""
    m = _SPEC_RE.match(spec.strip())
    if not m:
        raise ValidationError(f"cannot parse lattice spec {spec!r}")
    base = m.group("base").strip()
    width = int(m.group("width")) if m.group("width") else None
    if base == "Tri":
        return Lattice("Tri", width=width)
    if base.startswith("LR:"):
        try:
            r = tuple(int(x) for x in base[3:].split(","))
        except ValueError as exc:
            raise ValidationError(f"bad LR offsets in {spec!r}") from exc
        return Lattice("LR", r, width=width)
    if base.startswith("Tn:"):
        try:
            n = int(base[3:])
        except ValueError as exc:
            raise ValidationError(f"bad Tn order in {spec!r}") from exc
        return Lattice("Tn", n=n, width=width)
    raise ValidationError(f"unknown lattice family in spec {spec!r}")


# ---------------------------------------------------------------------------
# Marked graphs, oriented balls, distance
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MarkedGraph:
    """A lattice with a finite nonempty tuple of marked vertices.

    Mark order matters for the canonical form: the BFS that labels ball
    vertices starts from the marks in the order given here.
    """

    lattice: Lattice
    marks: tuple[Vertex, ...]

    def __post_init__(self):
        if not self.marks:
            raise ValidationError("marked graph needs at least one mark")
        for v in self.marks:
            self.lattice.check_vertex(v)


@dataclass(frozen=True)
class Ball:
    """Oriented ball of radius r around the marks, in canonical form.

    ``child_lists[k]`` lists, in edge-rule order, the BFS indices of the
    children of the k-th BFS vertex that lie inside the ball.  Two balls are
    isomorphic as marked directed graphs exactly when their canonical forms
    (``num_marks``, ``child_lists``) coincide; this is sound here because the
    edge rule totally orders every out-neighborhood.
    """

    radius: int
    num_marks: int
    vertices: tuple[Vertex, ...]          # BFS discovery order, marks first
    child_lists: tuple[tuple[int, ...], ...]

    @property
    def canonical_form(self) -> tuple:
        return (self.num_marks, self.child_lists)

    def isomorphic(self, other: "Ball") -> bool:
        return self.canonical_form == other.canonical_form


def ball(g: MarkedGraph, r: int) -> Ball:
    """Vertices at oriented distance <= r from the marks, with induced edges."""
    if r < 0:
        raise ValidationError(f"ball radius must be >= 0, got {r}")
    lat = g.lattice
    index: dict[Vertex, int] = {}
    order: list[Vertex] = []
    for z in g.marks:
        if z not in index:
            index[z] = len(order)
            order.append(z)
    num_marks = len(order)
    frontier = list(order)
    dist = 0
    while frontier and dist < r:
        nxt: list[Vertex] = []
        for u in frontier:
            for c in lat.children(u):
                if c not in index:
                    index[c] = len(order)
                    order.append(c)
                    nxt.append(c)
        frontier = nxt
        dist += 1
    child_lists = tuple(
        tuple(index[c] for c in lat.children(u) if c in index) for u in order)
    return Ball(r, num_marks, tuple(order), child_lists)


@dataclass(frozen=True)
class MarkedDistance:
    """Result of comparing two marked graphs up to a radius cutoff.

    ``resolved`` means a first differing radius was found.  The value follows
    the infimum convention d = 1/(r*+1) with r* the largest radius at which
    balls are isomorphic (1.0 when they already differ at r = 0, where the
    infimum runs over an empty set).  Unresolved comparisons report the
    certified upper bound 1/(r_max+1).
    """

    resolved: bool
    r_star: int          # largest isomorphic radius; -1 if balls differ at 0
    r_max: int
    value: float         # distance if resolved, else certified upper bound

    @property
    def r_diff(self) -> Optional[int]:
        return self.r_star + 1 if self.resolved else None


def marked_distance(g1: MarkedGraph, g2: MarkedGraph, r_max: int) -> MarkedDistance:
    if r_max < 0:
        raise ValidationError("r_max must be >= 0")
    for r in range(r_max + 1):
        if not ball(g1, r).isomorphic(ball(g2, r)):
            if r == 0:
                return MarkedDistance(True, -1, r_max, 1.0)
            return MarkedDistance(True, r - 1, r_max, 1.0 / r)
    return MarkedDistance(False, r_max, r_max, 1.0 / (r_max + 1))


# ---------------------------------------------------------------------------
# Free sets
# ---------------------------------------------------------------------------

def is_free_set(lattice: Lattice, vertices: Iterable[Vertex]) -> bool:
    """True iff no vertex of the set has an oriented path to another one.

    Every edge increases j, so the search from x is cut off at the largest
    line index present in the set.
    """
    vs = list(dict.fromkeys(tuple(v) for v in vertices))
    for v in vs:
        lattice.check_vertex(v)
    if len(vs) <= 1:
        return True
    targets = set(vs)
    j_max = max(j for _, j in vs)
    for x in vs:
        seen = {x}
        frontier = [x]
        while frontier:
            nxt = []
            for u in frontier:
                for c in lattice.children(u):
                    if c[1] > j_max or c in seen:
                        continue
                    if c in targets:
                        return False
                    seen.add(c)
                    nxt.append(c)
            frontier = nxt
    return True
