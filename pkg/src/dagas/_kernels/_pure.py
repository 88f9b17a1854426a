"""Pure-Python/numpy fallback kernels.

Same algorithms, traversal orders and integer hashing as ``_numba``, so the
two backends produce bit-identical results; only the speed differs.  Select
this backend with ``DAGAS_KERNELS=pure``.

Vertices are packed into int64 keys ordered like (j, i), which is the
canonical cell order used by the frontier enumerator: every edge increases j,
so parents always pack below children.
"""

from __future__ import annotations

import numpy as np

BACKEND = "pure"

_MASK64 = (1 << 64) - 1
_I_OFF = 1 << 31
_J_OFF = 1 << 20

# splitmix64 / xxhash-style multipliers
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_C1 = 0xD1B54A32D192ED03
_PHI = 0x9E3779B97F4A7C15

STATUS_OK = 0
STATUS_NODE_BUDGET = 1


def pack(i: int, j: int) -> int:
    return ((j + _J_OFF) << 32) | (i + _I_OFF)


def unpack(key: int) -> tuple[int, int]:
    return (key & 0xFFFFFFFF) - _I_OFF, (key >> 32) - _J_OFF


def mix64(z: int) -> int:
    z &= _MASK64
    z = ((z ^ (z >> 30)) * _M1) & _MASK64
    z = ((z ^ (z >> 27)) * _M2) & _MASK64
    return z ^ (z >> 31)


def color_hash(seed: int, i: int, j: int) -> int:
    seed, i, j = int(seed), int(i), int(j)
    z = mix64((seed ^ ((i & _MASK64) * _C1)) & _MASK64)
    z = mix64((z ^ ((j & _MASK64) * _PHI)) & _MASK64)
    return z


def sample_seed(seed: int, k: int) -> int:
    return (int(seed) ^ mix64(((int(k) + 1) * _PHI) & _MASK64)) & _MASK64


# ---------------------------------------------------------------------------
# Animal enumeration: frontier DFS with a per-branch watermark
# ---------------------------------------------------------------------------

def count_animals(di, dj, width, src_i, src_j, kmax, node_budget):
    """Count directed animals with source exactly S, by area, exhaustively.

    Each animal is admitted once, via its unique build order that adds
    non-source cells in increasing (j, i) order; at every step the candidate
    pool is the current admissible frontier above the branch watermark.

    Returns (counts[0..kmax] int64 array, status, nodes_visited).
    """
    deg = len(di)
    width = int(width)
    nsrc = len(src_i)
    kmax = int(kmax)
    node_budget = int(node_budget)
    counts = np.zeros(kmax + 1, dtype=np.int64)
    counts[nsrc] += 1
    nodes = 0
    if nsrc == 0 or kmax == nsrc:
        return counts, STATUS_OK, nodes

    src_keys = sorted(pack(int(i) % width if width > 0 else int(i), int(j))
                      for i, j in zip(src_i, src_j))

    def children_of(key):
        i, j = unpack(key)
        out = []
        for t in range(deg):
            ci = i + int(di[t])
            if width > 0:
                ci %= width
            out.append(pack(ci, j + int(dj[t])))
        out.sort()
        return out

    def in_src(key):
        lo, hi = 0, nsrc
        while lo < hi:
            mid = (lo + hi) // 2
            if src_keys[mid] < key:
                lo = mid + 1
            else:
                hi = mid
        return lo < nsrc and src_keys[lo] == key

    # root candidates: children(S) \ S, sorted, deduped
    root = sorted({c for s in src_keys for c in children_of(s)} - set(src_keys))

    # seg[level] = candidate list, ptr[level] = next candidate to try
    segs = [root]
    ptrs = [0]
    level = 0
    while level >= 0:
        if ptrs[level] >= len(segs[level]):
            segs.pop()
            ptrs.pop()
            level -= 1
            continue
        t = ptrs[level]
        ptrs[level] = t + 1
        c = segs[level][t]
        size = nsrc + level + 1
        counts[size] += 1
        nodes += 1
        if nodes > node_budget:
            return counts, STATUS_NODE_BUDGET, nodes
        if size < kmax:
            suffix = segs[level][t + 1:]
            fresh = [x for x in children_of(c) if not in_src(x)]
            # merge two sorted lists, dropping duplicates of suffix entries
            merged = []
            a = b = 0
            while a < len(suffix) and b < len(fresh):
                if suffix[a] < fresh[b]:
                    merged.append(suffix[a]); a += 1
                elif suffix[a] > fresh[b]:
                    merged.append(fresh[b]); b += 1
                else:
                    merged.append(suffix[a]); a += 1; b += 1
            merged.extend(suffix[a:])
            merged.extend(fresh[b:])
            segs.append(merged)
            ptrs.append(0)
            level += 1
    return counts, STATUS_OK, nodes


# ---------------------------------------------------------------------------
# Gas sampling
# ---------------------------------------------------------------------------

def _eval_gas(memo, ins, sseed, thr, di, dj, width, i0, j0, budget):
    """Hard-particle gas value at one vertex under the hashed coloring.

    Iterative evaluation of the recursion "occupied iff colored a and no
    child occupied", memoized in ``memo``; only a-colored vertices are ever
    pushed (b-colored ones are 0 by definition and resolved inline).
    Returns (value, explored) or (-1, explored) on budget exhaustion.
    """
    deg = len(di)
    explored = 0
    root = pack(i0, j0)
    if root in memo:
        return memo[root], explored
    if color_hash(sseed, i0, j0) >= thr:
        return 0, explored
    stack = [(i0, j0, 0)]
    explored += 1
    if explored > budget:
        return -1, explored
    while stack:
        i, j, t = stack[-1]
        key = pack(i, j)
        while t < deg:
            ci = i + int(di[t])
            if width > 0:
                ci %= width
            cj = j + int(dj[t])
            if color_hash(sseed, ci, cj) >= thr:
                t += 1
                continue
            ckey = pack(ci, cj)
            val = memo.get(ckey, -1)
            if val == 1:
                memo[key] = 0
                ins.append(key)
                stack.pop()
                break
            if val == 0:
                t += 1
                continue
            # unseen a-colored child: suspend the parent, descend
            stack[-1] = (i, j, t)
            stack.append((ci, cj, 0))
            explored += 1
            if explored > budget:
                return -1, explored
            break
        else:
            memo[key] = 1
            ins.append(key)
            stack.pop()
    return memo[root], explored


def gas_estimate(di, dj, width, src_i, src_j, thr, n_samples, seed,
                 cell_budget, check_hp):
    """Monte Carlo estimate of P(gas occupied at every source vertex).

    Sample k colors vertices by hashing (seed xor hash(k), i, j).  Returns
    int64 array [successes, failures, hp_violations, samples_run]; failures
    count samples whose exploration exceeded cell_budget.
    """
    deg = len(di)
    width = int(width)
    nsrc = len(src_i)
    thr = int(thr)
    seed = int(seed)
    cell_budget = int(cell_budget)
    succ = fail = viol = 0
    for k in range(int(n_samples)):
        sseed = sample_seed(seed, k)
        memo: dict[int, int] = {}
        ins: list[int] = []
        used = 0
        all_one = 1
        aborted = False
        for s in range(nsrc):
            v, expl = _eval_gas(memo, ins, sseed, thr, di, dj, width,
                                int(src_i[s]), int(src_j[s]),
                                cell_budget - used)
            used += expl
            if v < 0:
                aborted = True
                break
            if v == 0:
                all_one = 0
        if aborted:
            fail += 1
            continue
        succ += all_one
        if check_hp:
            for key in ins:
                if memo[key] != 1:
                    continue
                i, j = unpack(key)
                for t in range(deg):
                    ci = i + int(di[t])
                    if width > 0:
                        ci %= width
                    cj = j + int(dj[t])
                    if color_hash(sseed, ci, cj) < thr:
                        if memo.get(pack(ci, cj), -1) != 0:
                            viol += 1
    return np.array([succ, fail, viol, int(n_samples)], dtype=np.int64)
