"""Hot combinatorial kernels, JIT-compiled with a pure-numpy fallback.

The exact big-int and rational arithmetic in this package cannot be JIT
compiled, but the inner loops that dominate large runs are fixed-width
combinatorics on packed uint64 bit-vectors: tight-set adjacency scans inside
the double description loop, bulk meets of pattern masks, and batched int64
eliminations whose growth is provably bounded.  Those live here twice: a
numba @njit build and a numpy build with identical outputs.

Set MIPATTERNS_NO_NUMBA=1 to force the numpy path.  `BACKEND` records the
selected implementation; the *_numpy (and, when available, *_numba) variants
stay importable for the benchmark suite.
"""

from __future__ import annotations

import math
import os

import numpy as np

BITS = 64
_FULL = np.uint64(0xFFFFFFFFFFFFFFFF)


def words_needed(nbits: int) -> int:
    return max(1, (nbits + BITS - 1) // BITS)


def pack_masks(masks, nbits: int) -> np.ndarray:
    """Pack python-int bit masks into a (rows, words) uint64 array."""
    w = words_needed(nbits)
    out = np.zeros((len(masks), w), dtype=np.uint64)
    for r, m in enumerate(masks):
        i = 0
        while m:
            out[r, i] = m & 0xFFFFFFFFFFFFFFFF
            m >>= BITS
            i += 1
    return out


def unpack_rows(arr: np.ndarray) -> list[int]:
    out = []
    for row in arr:
        m = 0
        for w in row[::-1]:
            m = (m << BITS) | int(w)
        out.append(m)
    return out


def set_bit(arr: np.ndarray, rows, bit: int) -> None:
    """Set one bit in selected rows of a packed array, in place."""
    arr[rows, bit // BITS] |= np.uint64(1 << (bit % BITS))


def unique_rows(arr: np.ndarray) -> np.ndarray:
    """Deduplicate rows of a packed array, lexicographically sorted."""
    if arr.shape[0] == 0:
        return arr
    arr = np.ascontiguousarray(arr)
    view = arr.view([("", arr.dtype)] * arr.shape[1]).ravel()
    return np.unique(view).view(arr.dtype).reshape(-1, arr.shape[1])


# ---------------------------------------------------------------------------
# numpy implementations


def popcount_rows_numpy(packed: np.ndarray) -> np.ndarray:
    return np.bitwise_count(packed).sum(axis=1, dtype=np.int64)


def adjacency_pairs_numpy(tight, pos, neg, minpop):
    """Ray pairs (i from pos, j from neg) adjacent in the current cone.

    Two extreme rays are adjacent iff no third ray's tight set contains the
    intersection of theirs; pairs whose common tight set has fewer than
    minpop constraints cannot reach rank dim-2 and are skipped early.
    """
    out_i, out_j = [], []
    tneg = tight[neg]
    for i in pos:
        common = tight[i] & tneg
        pc = np.bitwise_count(common).sum(axis=1, dtype=np.int64)
        for b in np.nonzero(pc >= minpop)[0]:
            t = common[b]
            holds = ((tight & t) == t).all(axis=1)
            # i and j always qualify, so adjacency means exactly two hits
            if int(holds.sum()) == 2:
                out_i.append(int(i))
                out_j.append(int(neg[b]))
    return (np.array(out_i, dtype=np.int64), np.array(out_j, dtype=np.int64))


def and_product_numpy(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """All pairwise ANDs of rows of a with rows of b, row-major in a."""
    return (a[:, None, :] & b[None, :, :]).reshape(-1, a.shape[1])


def kernel_vectors_batch_numpy(mat: np.ndarray, combos: np.ndarray) -> np.ndarray:
    """For each index combo of dim-1 rows, the integer kernel vector.

    Returns a (len(combos), dim) int64 array; rows whose combo is rank
    deficient come back all-zero.  Caller must guarantee the elimination
    stays inside int64 (small dim, small entries); see brute-force callers.
    """
    k = len(combos)
    d = mat.shape[1]
    out = np.zeros((k, d), dtype=np.int64)
    for idx in range(k):
        sub = mat[combos[idx]].astype(np.int64).copy()
        vec = _kernel_vector_int64(sub)
        if vec is not None:
            out[idx] = vec
    return out


def _kernel_vector_int64(sub: np.ndarray):
    """Kernel of a (d-1, d) int64 matrix of full row rank, else None."""
    m, d = sub.shape
    piv_cols = []
    r = 0
    for c in range(d):
        p = None
        for i in range(r, m):
            if sub[i, c] != 0:
                p = i
                break
        if p is None:
            continue
        if p != r:
            tmp = sub[r].copy()
            sub[r] = sub[p]
            sub[p] = tmp
        for i in range(r + 1, m):
            if sub[i, c] != 0:
                a = sub[r, c]
                b = sub[i, c]
                g = np.gcd(a, b)
                sub[i] = sub[i] * (a // g) - sub[r] * (b // g)
        piv_cols.append(c)
        r += 1
        if r == m:
            break
    if r != m:
        return None
    free = next(c for c in range(d) if c not in piv_cols)
    x = np.zeros(d, dtype=np.int64)
    x[free] = 1
    for row in range(m - 1, -1, -1):
        pc = piv_cols[row]
        val = int(np.dot(sub[row], x))
        p = int(sub[row, pc])
        g = math.gcd(val, p)
        scale = p // g
        x *= scale
        x[pc] = -(val // g)
        g2 = int(np.gcd.reduce(np.abs(x)))
        if g2 > 1:
            x //= g2
    return x


# ---------------------------------------------------------------------------
# numba implementations

_DISABLED = os.environ.get("MIPATTERNS_NO_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
}

BACKEND = "numpy"

if not _DISABLED:
    try:
        from numba import njit, prange

        _M1 = np.uint64(0x5555555555555555)
        _M2 = np.uint64(0x3333333333333333)
        _M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
        _H01 = np.uint64(0x0101010101010101)
        _S1 = np.uint64(1)
        _S2 = np.uint64(2)
        _S4 = np.uint64(4)
        _S56 = np.uint64(56)

        @njit(cache=True, inline="always")
        def _gcd64(a, b):
            if a < 0:
                a = -a
            if b < 0:
                b = -b
            while b != 0:
                a, b = b, a % b
            return a

        @njit(cache=True, inline="always")
        def _pop64(x):
            x = x - ((x >> _S1) & _M1)
            x = (x & _M2) + ((x >> _S2) & _M2)
            x = (x + (x >> _S4)) & _M4
            return (x * _H01) >> _S56

        @njit(cache=True)
        def popcount_rows_numba(packed):
            rows, words = packed.shape
            out = np.zeros(rows, dtype=np.int64)
            for r in range(rows):
                s = np.uint64(0)
                for w in range(words):
                    s += _pop64(packed[r, w])
                out[r] = np.int64(s)
            return out

        @njit(cache=True, inline="always")
        def _pair_adjacent(tight, i, j, minpop, words, rows):
            pc = np.uint64(0)
            for w in range(words):
                pc += _pop64(tight[i, w] & tight[j, w])
            if np.int64(pc) < minpop:
                return False
            for k in range(rows):
                if k == i or k == j:
                    continue
                contained = True
                for w in range(words):
                    t = tight[i, w] & tight[j, w]
                    if (tight[k, w] & t) != t:
                        contained = False
                        break
                if contained:
                    return False
            return True

        @njit(cache=True, parallel=True)
        def adjacency_pairs_numba(tight, pos, neg, minpop):
            rows, words = tight.shape
            np_pos = pos.shape[0]
            np_neg = neg.shape[0]
            counts = np.zeros(np_pos, dtype=np.int64)
            for a in prange(np_pos):
                i = pos[a]
                c = 0
                for b in range(np_neg):
                    if _pair_adjacent(tight, i, neg[b], minpop, words, rows):
                        c += 1
                counts[a] = c
            offsets = np.zeros(np_pos + 1, dtype=np.int64)
            for a in range(np_pos):
                offsets[a + 1] = offsets[a] + counts[a]
            total = offsets[np_pos]
            out_i = np.empty(total, dtype=np.int64)
            out_j = np.empty(total, dtype=np.int64)
            for a in prange(np_pos):
                i = pos[a]
                at = offsets[a]
                for b in range(np_neg):
                    if _pair_adjacent(tight, i, neg[b], minpop, words, rows):
                        out_i[at] = i
                        out_j[at] = neg[b]
                        at += 1
            return out_i, out_j

        @njit(cache=True)
        def and_product_numba(a, b):
            na, words = a.shape
            nb = b.shape[0]
            out = np.empty((na * nb, words), dtype=np.uint64)
            for x in range(na):
                base = x * nb
                for y in range(nb):
                    for w in range(words):
                        out[base + y, w] = a[x, w] & b[y, w]
            return out

        @njit(cache=True)
        def _kernel_vector_nb(sub, piv_cols, x):
            m, d = sub.shape
            r = 0
            np_piv = 0
            for c in range(d):
                p = -1
                for i in range(r, m):
                    if sub[i, c] != 0:
                        p = i
                        break
                if p < 0:
                    continue
                if p != r:
                    for w in range(d):
                        tmp = sub[r, w]
                        sub[r, w] = sub[p, w]
                        sub[p, w] = tmp
                for i in range(r + 1, m):
                    if sub[i, c] != 0:
                        a = sub[r, c]
                        b = sub[i, c]
                        g = _gcd64(a, b)
                        fa = a // g
                        fb = b // g
                        for w in range(d):
                            sub[i, w] = sub[i, w] * fa - sub[r, w] * fb
                piv_cols[np_piv] = c
                np_piv += 1
                r += 1
                if r == m:
                    break
            if r != m:
                return False
            free = -1
            at = 0
            for c in range(d):
                if at < np_piv and piv_cols[at] == c:
                    at += 1
                else:
                    free = c
                    break
            for c in range(d):
                x[c] = 0
            x[free] = 1
            for row in range(m - 1, -1, -1):
                pc = piv_cols[row]
                val = np.int64(0)
                for c in range(d):
                    val += sub[row, c] * x[c]
                p = sub[row, pc]
                g = _gcd64(val, p)
                scale = p // g
                for c in range(d):
                    x[c] *= scale
                x[pc] = -(val // g)
                g2 = np.int64(0)
                for c in range(d):
                    g2 = _gcd64(g2, x[c])
                if g2 > 1:
                    for c in range(d):
                        x[c] //= g2
            return True

        @njit(cache=True)
        def kernel_vectors_batch_numba(mat, combos):
            k = combos.shape[0]
            m = combos.shape[1]
            d = mat.shape[1]
            out = np.zeros((k, d), dtype=np.int64)
            sub = np.empty((m, d), dtype=np.int64)
            piv = np.empty(m, dtype=np.int64)
            x = np.empty(d, dtype=np.int64)
            for idx in range(k):
                for i in range(m):
                    for c in range(d):
                        sub[i, c] = mat[combos[idx, i], c]
                if _kernel_vector_nb(sub, piv, x):
                    for c in range(d):
                        out[idx, c] = x[c]
            return out

        BACKEND = "numba"
    except ImportError:  # pragma: no cover - exercised via MIPATTERNS_NO_NUMBA
        pass

HAVE_NUMBA = BACKEND == "numba"

if HAVE_NUMBA:
    popcount_rows = popcount_rows_numba
    adjacency_pairs = adjacency_pairs_numba
    and_product = and_product_numba
    kernel_vectors_batch = kernel_vectors_batch_numba
else:
    popcount_rows = popcount_rows_numpy
    adjacency_pairs = adjacency_pairs_numpy
    and_product = and_product_numpy
    kernel_vectors_batch = kernel_vectors_batch_numpy


def set_thread_budget(jobs: int) -> None:
    """Cap worker threads for JIT kernels; the numpy path ignores it."""
    if BACKEND != "numba" or jobs < 1:
        return
    import numba

    numba.set_num_threads(min(jobs, numba.config.NUMBA_NUM_THREADS))
