"""numba-compiled hot kernels.

Mirrors ``_pure`` exactly: same packing, hashing, traversal orders and budget
accounting, so outputs are bit-identical between backends (asserted by the
parity tests).  The gas memo is an open-addressing table with per-sample
stamps instead of a dict; that changes nothing observable.
"""

from __future__ import annotations

import numpy as np
from numba import njit

BACKEND = "numba"

_I_OFF = 1 << 31
_J_OFF = 1 << 20

_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)
_C1 = np.uint64(0xD1B54A32D192ED03)
_PHI = np.uint64(0x9E3779B97F4A7C15)
_U30 = np.uint64(30)
_U27 = np.uint64(27)
_U31 = np.uint64(31)

STATUS_OK = 0
STATUS_NODE_BUDGET = 1


@njit("uint64(uint64)", cache=True)
def mix64(z):
    z = (z ^ (z >> _U30)) * _M1
    z = (z ^ (z >> _U27)) * _M2
    return z ^ (z >> _U31)


@njit("uint64(uint64, int64, int64)", cache=True)
def color_hash(seed, i, j):
    z = mix64(seed ^ (np.uint64(i) * _C1))
    z = mix64(z ^ (np.uint64(j) * _PHI))
    return z


@njit("uint64(uint64, int64)", cache=True)
def sample_seed(seed, k):
    return seed ^ mix64(np.uint64(k + 1) * _PHI)


@njit("int64(int64, int64)", cache=True)
def pack(i, j):
    return ((j + _J_OFF) << 32) | (i + _I_OFF)


@njit("int64(int64, int64[:], int64[:], int64, int64[:])", cache=True)
def _children_keys(key, di, dj, width, out):
    i = (key & 0xFFFFFFFF) - _I_OFF
    j = (key >> 32) - _J_OFF
    deg = di.shape[0]
    for t in range(deg):
        ci = i + di[t]
        if width > 0:
            ci = ci % width
        out[t] = pack(ci, j + dj[t])
    for a in range(1, deg):
        x = out[a]
        b = a - 1
        while b >= 0 and out[b] > x:
            out[b + 1] = out[b]
            b -= 1
        out[b + 1] = x
    return deg


@njit("boolean(int64[:], int64)", cache=True)
def _sorted_contains(arr, x):
    lo = 0
    hi = arr.shape[0]
    while lo < hi:
        mid = (lo + hi) >> 1
        if arr[mid] < x:
            lo = mid + 1
        else:
            hi = mid
    return lo < arr.shape[0] and arr[lo] == x


@njit("Tuple((int64[:], int64, int64))(int64[:], int64[:], int64, int64[:], "
      "int64[:], int64, int64)", cache=True)
def count_animals(di, dj, width, src_i, src_j, kmax, node_budget):
    deg = di.shape[0]
    nsrc = src_i.shape[0]
    counts = np.zeros(kmax + 1, dtype=np.int64)
    counts[nsrc] += 1
    nodes = 0
    if nsrc == 0 or kmax == nsrc:
        return counts, STATUS_OK, nodes

    src_keys = np.empty(nsrc, dtype=np.int64)
    for s in range(nsrc):
        ii = src_i[s]
        if width > 0:
            ii = ii % width
        src_keys[s] = pack(ii, src_j[s])
    src_keys.sort()

    maxdepth = kmax - nsrc
    candmax = (nsrc + kmax) * deg + 8
    buf = np.empty(maxdepth * candmax, dtype=np.int64)
    seg_len = np.empty(maxdepth, dtype=np.int64)
    ptr = np.empty(maxdepth, dtype=np.int64)
    child = np.empty(deg, dtype=np.int64)

    # root candidates: children(S) \ S, deduped, ascending
    tmp = np.empty(nsrc * deg, dtype=np.int64)
    m = 0
    for s in range(nsrc):
        nc = _children_keys(src_keys[s], di, dj, width, child)
        for q in range(nc):
            tmp[m] = child[q]
            m += 1
    tmp = np.sort(tmp[:m])
    n0 = 0
    for q in range(m):
        x = tmp[q]
        if q > 0 and tmp[q - 1] == x:
            continue
        if _sorted_contains(src_keys, x):
            continue
        buf[n0] = x
        n0 += 1
    seg_len[0] = n0
    ptr[0] = 0

    level = 0
    while level >= 0:
        t = ptr[level]
        if t >= seg_len[level]:
            level -= 1
            continue
        ptr[level] = t + 1
        c = buf[level * candmax + t]
        size = nsrc + level + 1
        counts[size] += 1
        nodes += 1
        if nodes > node_budget:
            return counts, STATUS_NODE_BUDGET, nodes
        if size < kmax:
            nc = _children_keys(c, di, dj, width, child)
            fc = 0
            for q in range(nc):
                x = child[q]
                if not _sorted_contains(src_keys, x):
                    child[fc] = x
                    fc += 1
            base_from = level * candmax
            base_to = (level + 1) * candmax
            a = t + 1
            b = 0
            mm = 0
            la = seg_len[level]
            while a < la and b < fc:
                xa = buf[base_from + a]
                xb = child[b]
                if xa < xb:
                    buf[base_to + mm] = xa
                    a += 1
                elif xa > xb:
                    buf[base_to + mm] = xb
                    b += 1
                else:
                    buf[base_to + mm] = xa
                    a += 1
                    b += 1
                mm += 1
            while a < la:
                buf[base_to + mm] = buf[base_from + a]
                a += 1
                mm += 1
            while b < fc:
                buf[base_to + mm] = child[b]
                b += 1
                mm += 1
            level += 1
            seg_len[level] = mm
            ptr[level] = 0
    return counts, STATUS_OK, nodes


@njit("int64(int64[:], int64[:], int64, int64, int64)", cache=True)
def _probe(tkeys, tstamp, stamp, key, mask):
    idx = np.int64(mix64(np.uint64(key)) & np.uint64(mask))
    while tstamp[idx] == stamp and tkeys[idx] != key:
        idx = (idx + 1) & mask
    return idx


@njit("int64[:](int64[:], int64[:], int64, int64[:], int64[:], uint64, "
      "int64, uint64, int64, int64)", cache=True)
def gas_estimate(di, dj, width, src_i, src_j, thr, n_samples, seed,
                 cell_budget, check_hp):
    deg = di.shape[0]
    nsrc = src_i.shape[0]
    cap = 1
    while cap < 2 * (cell_budget + 16):
        cap <<= 1
    mask = cap - 1
    tkeys = np.zeros(cap, dtype=np.int64)
    tstamp = np.zeros(cap, dtype=np.int64)
    tval = np.zeros(cap, dtype=np.uint8)
    ins = np.empty(cell_budget + 2, dtype=np.int64)
    sti = np.empty(cell_budget + 2, dtype=np.int64)
    stj = np.empty(cell_budget + 2, dtype=np.int64)
    stt = np.empty(cell_budget + 2, dtype=np.int64)

    succ = 0
    fail = 0
    viol = 0
    for k in range(n_samples):
        sseed = sample_seed(seed, k)
        stamp = k + 1
        nins = 0
        used = 0
        all_one = 1
        aborted = False
        for s in range(nsrc):
            i0 = src_i[s]
            j0 = src_j[s]
            root = pack(i0, j0)
            ridx = _probe(tkeys, tstamp, stamp, root, mask)
            if tstamp[ridx] == stamp:
                if tval[ridx] == 0:
                    all_one = 0
                continue
            if color_hash(sseed, i0, j0) >= thr:
                all_one = 0
                continue
            sti[0] = i0
            stj[0] = j0
            stt[0] = 0
            sp = 1
            used += 1
            if used > cell_budget:
                aborted = True
                break
            while sp > 0:
                i = sti[sp - 1]
                j = stj[sp - 1]
                t = stt[sp - 1]
                resolved = -1
                while t < deg:
                    ci = i + di[t]
                    if width > 0:
                        ci = ci % width
                    cj = j + dj[t]
                    if color_hash(sseed, ci, cj) >= thr:
                        t += 1
                        continue
                    ckey = pack(ci, cj)
                    cidx = _probe(tkeys, tstamp, stamp, ckey, mask)
                    if tstamp[cidx] == stamp:
                        if tval[cidx] == 1:
                            resolved = 0
                            break
                        t += 1
                        continue
                    # unseen a-colored child: suspend the parent, descend
                    stt[sp - 1] = t
                    sti[sp] = ci
                    stj[sp] = cj
                    stt[sp] = 0
                    sp += 1
                    used += 1
                    if used > cell_budget:
                        aborted = True
                    break
                if aborted:
                    break
                if t >= deg:
                    resolved = 1
                if resolved >= 0:
                    key = pack(i, j)
                    idx = _probe(tkeys, tstamp, stamp, key, mask)
                    tkeys[idx] = key
                    tstamp[idx] = stamp
                    tval[idx] = resolved
                    ins[nins] = key
                    nins += 1
                    sp -= 1
            if aborted:
                break
            ridx = _probe(tkeys, tstamp, stamp, root, mask)
            if tval[ridx] == 0:
                all_one = 0
        if aborted:
            fail += 1
            continue
        succ += all_one
        if check_hp != 0:
            for q in range(nins):
                key = ins[q]
                kidx = _probe(tkeys, tstamp, stamp, key, mask)
                if tval[kidx] != 1:
                    continue
                i = (key & 0xFFFFFFFF) - _I_OFF
                j = (key >> 32) - _J_OFF
                for t in range(deg):
                    ci = i + di[t]
                    if width > 0:
                        ci = ci % width
                    cj = j + dj[t]
                    if color_hash(sseed, ci, cj) < thr:
                        cidx = _probe(tkeys, tstamp, stamp, pack(ci, cj), mask)
                        if tstamp[cidx] != stamp or tval[cidx] != 0:
                            viol += 1
    out = np.empty(4, dtype=np.int64)
    out[0] = succ
    out[1] = fail
    out[2] = viol
    out[3] = n_samples
    return out
