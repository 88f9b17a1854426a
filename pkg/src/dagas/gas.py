"""The coupled hard-particle gas: colorings, occupation values, random
animals, and seeded Monte Carlo estimation of occupation probabilities.

A coloring assigns each vertex color a (probability p) or b, independently.
The gas value at v is 0 if v is colored b, else the product of (1 - value)
over its children, so an occupied vertex never has an occupied child.  The
random animal spanned by a source S is the set of a-colored vertices
reachable from the a-colored part of S through a-colored paths.  Occupation
probabilities of free sets equal signed generating-function values of
directed animals, which is what ``estimate_occupation`` is checked against.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from ._kernels import kernels
from ._kernels import _pure as _ref
from .errors import BudgetExceededError, NotFreeSetError, ValidationError
from .lattice import Lattice, Vertex, is_free_set

DEFAULT_CELL_BUDGET = 1_000_000
MAX_CELL_BUDGET = 50_000_000
_U64 = (1 << 64) - 1


def _threshold(p: float) -> int:
    """Occupation threshold: color is a iff hash < threshold (uint64 scale)."""
    if p <= 0.0:
        return 0
    if p >= 1.0:
        return _U64 + 1  # sentinel handled by callers
    return int(p * 2.0 ** 64)


@dataclass(frozen=True)
class HashColoring:
    """Lazy i.i.d. coloring: color(v) is a pure hash of (seed, v)."""

    seed: int
    p: float

    def color(self, lattice: Lattice, v: Vertex) -> str:
        lattice.check_vertex(v)
        if self.p >= 1.0:
            return "a"
        if self.p <= 0.0:
            return "b"
        i, j = v
        h = _ref.color_hash(self.seed & _U64, i, j)
        return "a" if h < _threshold(self.p) else "b"


@dataclass(frozen=True)
class TableColoring:
    """Explicit coloring for tests and exact finite computations."""

    table: Mapping[Vertex, str]
    default: str = "b"

    def color(self, lattice: Lattice, v: Vertex) -> str:
        lattice.check_vertex(v)
        return self.table.get(v, self.default)


@dataclass(frozen=True)
class Animal:
    source: tuple[Vertex, ...]
    cells: frozenset[Vertex]

    @property
    def area(self) -> int:
        return len(self.cells)


def gas_value(lattice: Lattice, coloring, v: Vertex,
              cell_budget: int = DEFAULT_CELL_BUDGET,
              _memo: Optional[dict] = None) -> int:
    """Gas occupation at v for a given coloring (memoized, iterative).

    Works with any coloring object exposing ``color(lattice, vertex)``;
    the Monte Carlo estimator below uses the kernel fast path instead.
    """
    memo = _memo if _memo is not None else {}
    if v in memo:
        return memo[v]
    if coloring.color(lattice, v) == "b":
        return 0
    stack = [(v, 0)]
    explored = 1
    if explored > cell_budget:
        raise BudgetExceededError("gas exploration exceeded its cell budget")
    while stack:
        u, t = stack[-1]
        kids = lattice.children(u)
        while t < len(kids):
            c = kids[t]
            if coloring.color(lattice, c) == "b":
                t += 1
                continue
            val = memo.get(c, -1)
            if val == 1:
                memo[u] = 0
                stack.pop()
                break
            if val == 0:
                t += 1
                continue
            stack[-1] = (u, t)
            stack.append((c, 0))
            explored += 1
            if explored > cell_budget:
                raise BudgetExceededError("gas exploration exceeded its cell budget")
            break
        else:
            memo[u] = 1
            stack.pop()
    return memo[v]


def random_animal(lattice: Lattice, coloring, source,
                  cell_budget: int = DEFAULT_CELL_BUDGET) -> Animal:
    """Maximal animal grown from the a-colored part of the source."""
    src = tuple((int(i), int(j)) for i, j in source)
    for v in src:
        lattice.check_vertex(v)
    live = [v for v in dict.fromkeys(src) if coloring.color(lattice, v) == "a"]
    cells = set(live)
    frontier = list(live)
    while frontier:
        nxt = []
        for u in frontier:
            for c in lattice.children(u):
                if c in cells or coloring.color(lattice, c) == "b":
                    continue
                cells.add(c)
                if len(cells) > cell_budget:
                    raise BudgetExceededError(
                        "random animal exceeded its cell budget")
                nxt.append(c)
        frontier = nxt
    return Animal(src, frozenset(cells))


@dataclass(frozen=True)
class OccupationEstimate:
    lattice: str
    source: tuple[Vertex, ...]
    p: float
    n_samples: int
    seed: int
    estimate: float
    stderr: float
    failures: int
    hp_violations: Optional[int] = None

    def to_dict(self) -> dict:
        d = {
            "lattice": self.lattice,
            "source": [list(v) for v in self.source],
            "p": self.p,
            "n": self.n_samples,
            "seed": self.seed,
            "estimate": self.estimate,
            "stderr": self.stderr,
            "failures": self.failures,
        }
        if self.hp_violations is not None:
            d["hp_violations"] = self.hp_violations
        return d


def supercritical_guard(lattice: Lattice, p: float) -> None:
    """Reject p at or above the 1/outdegree lower bound for p_crit."""
    bound = 1.0 / lattice.outdegree
    if p >= bound:
        raise ValidationError(
            f"p={p} >= 1/outdegree={bound:.4f}; explorations may not terminate "
            "(pass allow_supercritical=True to override)")


def estimate_occupation(lattice: Lattice, source, p: float, n_samples: int,
                        seed: int, cell_budget: int = DEFAULT_CELL_BUDGET,
                        check_hard_particle: bool = False,
                        allow_supercritical: bool = False,
                        max_failure_rate: float = 1e-3) -> OccupationEstimate:
    """Monte Carlo P(gas occupied at every source vertex), reproducibly.

    Sample k colors vertices with sub-seed seed xor hash(k); identical
    (seed, lattice, source, p, n_samples) give bit-identical results on
    either kernel backend.  Samples whose exploration exceeds cell_budget
    are counted as failures; a failure rate above ``max_failure_rate``
    raises instead of silently biasing the estimate.
    """
    src = tuple((int(i), int(j)) for i, j in source)
    for v in src:
        lattice.check_vertex(v)
    if not src:
        raise ValidationError("source must be nonempty")
    if not is_free_set(lattice, src):
        raise NotFreeSetError(f"source {src} is not a free set on {lattice}")
    if n_samples < 1:
        raise ValidationError("n_samples must be >= 1")
    if not 0.0 <= p < 1.0:
        raise ValidationError(f"p must lie in [0, 1), got {p}")
    if not 1 <= cell_budget <= MAX_CELL_BUDGET:
        raise ValidationError(f"cell_budget must lie in [1, {MAX_CELL_BUDGET}]")
    if not allow_supercritical:
        supercritical_guard(lattice, p)

    di = np.array([d for d, _ in lattice.step_offsets], dtype=np.int64)
    dj = np.array([d for _, d in lattice.step_offsets], dtype=np.int64)
    src_i = np.array([v[0] for v in src], dtype=np.int64)
    src_j = np.array([v[1] for v in src], dtype=np.int64)
    out = kernels.gas_estimate(
        di, dj, np.int64(lattice.width or 0), src_i, src_j,
        np.uint64(_threshold(p)), np.int64(n_samples),
        np.uint64(seed & _U64), np.int64(cell_budget),
        np.int64(1 if check_hard_particle else 0))
    succ, fail, viol = int(out[0]), int(out[1]), int(out[2])
    if fail > max_failure_rate * n_samples:
        raise BudgetExceededError(
            f"{fail}/{n_samples} samples exceeded the cell budget; "
            "p is too close to (or above) the percolation threshold")
    n_ok = n_samples - fail
    est = succ / n_ok if n_ok else float("nan")
    stderr = float(np.sqrt(est * (1.0 - est) / n_ok)) if n_ok else float("nan")
    return OccupationEstimate(
        lattice.spec_string(), src, p, n_samples, seed, est, stderr, fail,
        viol if check_hard_particle else None)
