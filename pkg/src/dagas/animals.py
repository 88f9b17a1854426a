"""Exact enumeration of directed animals and alternating series evaluation.

A directed animal with source S is a finite vertex set A containing S in
which every cell can be reached from some source by an oriented path inside
A.  ``enumerate_counts`` returns the exact number of animals of each area up
to a cutoff; it is the ground-truth oracle for everything else in this
package, so it ships with two independent strategies that must agree:

* ``frontier`` -- canonical-growth DFS (kernel-backed): every animal is
  admitted exactly once, through the unique build order that adds non-source
  cells in increasing (j, i) order.
* ``subsets``  -- generate candidate cell sets inside the reachable ball and
  keep those that pass a from-scratch BFS reachability check.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._kernels import kernels
from .errors import BudgetExceededError, DivergentBoundError, NotFreeSetError, ValidationError
from .lattice import Lattice, Vertex, is_free_set

MAX_KMAX = 20
DEFAULT_NODE_BUDGET = 500_000_000


@dataclass(frozen=True)
class CountSeries:
    """Exact counts a_k for k = source_size .. kmax (arbitrary precision)."""

    lattice: str                 # lattice spec string
    source: tuple[Vertex, ...]
    kmax: int
    coeffs: tuple[int, ...]      # coeffs[t] = a_{source_size + t}

    @property
    def source_size(self) -> int:
        return len(self.source)

    def coeff(self, k: int) -> int:
        if not self.source_size <= k <= self.kmax:
            raise ValidationError(f"coefficient a_{k} outside stored range")
        return self.coeffs[k - self.source_size]

    def to_dict(self) -> dict:
        return {
            "lattice": self.lattice,
            "source": [list(v) for v in self.source],
            "k_max": self.kmax,
            "coeffs": list(self.coeffs),
        }


def _normalize_source(lattice: Lattice, source) -> tuple[Vertex, ...]:
    src = tuple((int(i), int(j)) for i, j in source)
    for v in src:
        lattice.check_vertex(v)
    if len(set(src)) != len(src):
        raise ValidationError("source contains repeated vertices")
    return src


def enumerate_counts(lattice: Lattice, source, k_max: int,
                     method: str = "frontier",
                     node_budget: int = DEFAULT_NODE_BUDGET) -> CountSeries:
    """Exact a_k for animals with source exactly S, for k = |S| .. k_max."""
    src = _normalize_source(lattice, source)
    if not is_free_set(lattice, src):
        raise NotFreeSetError(f"source {src} is not a free set on {lattice}")
    if k_max < len(src):
        raise ValidationError(f"k_max={k_max} below the source size {len(src)}")
    if k_max > MAX_KMAX:
        raise ValidationError(
            f"k_max={k_max} beyond the exhaustive-search guard ({MAX_KMAX})")
    if method == "frontier":
        coeffs = _frontier_counts(lattice, src, k_max, node_budget)
    elif method == "subsets":
        coeffs = _subset_counts(lattice, src, k_max, node_budget)
    else:
        raise ValidationError(f"unknown enumeration method {method!r}")
    return CountSeries(lattice.spec_string(), src, k_max, tuple(coeffs))


@lru_cache(maxsize=None)
def cached_counts(spec: str, source: tuple[Vertex, ...], k_max: int) -> CountSeries:
    """Memoized frontier enumeration keyed by the lattice spec string."""
    from .lattice import parse_lattice
    return enumerate_counts(parse_lattice(spec), source, k_max)


def _steps_arrays(lattice: Lattice):
    di = np.array([d for d, _ in lattice.step_offsets], dtype=np.int64)
    dj = np.array([d for _, d in lattice.step_offsets], dtype=np.int64)
    return di, dj, np.int64(lattice.width or 0)


def _frontier_counts(lattice: Lattice, src, k_max, node_budget) -> list[int]:
    di, dj, width = _steps_arrays(lattice)
    src_i = np.array([v[0] for v in src], dtype=np.int64)
    src_j = np.array([v[1] for v in src], dtype=np.int64)
    counts, status, nodes = kernels.count_animals(
        di, dj, width, src_i, src_j, np.int64(k_max), np.int64(node_budget))
    if status == kernels.STATUS_NODE_BUDGET:
        raise BudgetExceededError(
            f"enumeration exceeded {node_budget} nodes (k_max={k_max} too large)")
    return [int(c) for c in counts[len(src):]]


def _subset_counts(lattice: Lattice, src, k_max, node_budget) -> list[int]:
    """Oracle enumerator: candidate subsets of the reachable ball, BFS-checked.

    Candidate generation walks the ball cells in increasing (j, i) order and
    only extends prefixes whose newest cell has a parent among the cells
    already chosen (parents always precede children in that order, so this
    loses nothing); every emitted set is then re-validated by a full BFS from
    the source, which keeps the counting independent of the pruning logic.
    """
    srcset = frozenset(src)
    radius = k_max - len(src)
    cells = sorted(_reach_ball(lattice, src, radius) - srcset,
                   key=lambda v: (v[1], v[0]))
    counts = [0] * (k_max - len(src) + 1)
    parent_sets = {c: frozenset(lattice.parents(c)) for c in cells}
    if _bfs_reachable(lattice, srcset, frozenset()):
        counts[0] = 1
    budget = [0]

    def extend(start: int, chosen: list[Vertex], chosen_set: set[Vertex]):
        if len(chosen) == radius:
            return
        for pos in range(start, len(cells)):
            c = cells[pos]
            if not (parent_sets[c] & (srcset | chosen_set)):
                continue
            budget[0] += 1
            if budget[0] > node_budget:
                raise BudgetExceededError("subset enumeration budget exceeded")
            chosen.append(c)
            chosen_set.add(c)
            if _bfs_reachable(lattice, srcset, frozenset(chosen)):
                counts[len(chosen)] += 1
            extend(pos + 1, chosen, chosen_set)
            chosen.pop()
            chosen_set.discard(c)

    if radius > 0 and srcset:
        extend(0, [], set())
    return counts


def _reach_ball(lattice: Lattice, src, radius: int) -> set[Vertex]:
    seen = set(src)
    frontier = list(dict.fromkeys(src))
    for _ in range(radius):
        nxt = []
        for u in frontier:
            for c in lattice.children(u):
                if c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return seen


def _bfs_reachable(lattice: Lattice, srcset: frozenset, extra: frozenset) -> bool:
    """True iff every cell of srcset | extra is reachable from srcset inside it."""
    cells = srcset | extra
    seen = set(srcset)
    frontier = list(srcset)
    while frontier:
        nxt = []
        for u in frontier:
            for c in lattice.children(u):
                if c in cells and c not in seen:
                    seen.add(c)
                    nxt.append(c)
        frontier = nxt
    return len(seen) == len(cells)


# ---------------------------------------------------------------------------
# Alternating evaluation with a geometric tail bound
# ---------------------------------------------------------------------------

def series_eval_alternating(series: CountSeries, p: float) -> tuple[float, float]:
    """Partial evaluation of (-1)^|S| * G_S(-p) with a truncation bound.

    Value is sum_k a_k (-1)^(k-|S|) p^k.  The tail is majorized geometrically
    by the largest observed growth ratio rho = max_k a_{k+1}/a_k:
    bound = a_kmax * rho * p^(kmax+1) / (1 - rho p), requiring rho p < 1.
    """
    if not series.coeffs:
        raise ValidationError("empty series")
    if not 0 <= p < 1:
        raise ValidationError(f"p must lie in [0, 1), got {p}")
    s0 = series.source_size
    value = 0.0
    sign = 1.0
    for t, a in enumerate(series.coeffs):
        value += sign * a * p ** (s0 + t)
        sign = -sign
    ratios = [b / a for a, b in zip(series.coeffs, series.coeffs[1:]) if a > 0]
    rho = max(ratios) if ratios else 0.0
    if rho * p >= 1.0:
        raise DivergentBoundError(
            f"rho*p = {rho * p:.3f} >= 1: geometric tail bound diverges")
    bound = series.coeffs[-1] * rho * p ** (series.kmax + 1) / (1.0 - rho * p)
    return value, bound


def max_growth_ratio(series: CountSeries) -> float:
    ratios = [b / a for a, b in zip(series.coeffs, series.coeffs[1:]) if a > 0]
    return max(ratios) if ratios else 0.0
