"""Extreme rays of pointed rational cones by the double description method.

Everything is exact: rays are primitive integer vectors, incidence with the
defining half-spaces is decided by integer dot products (int64 fast path with
a proven overflow bound, big-int fallback), and the final ray set is verified
against every constraint before it is returned.

Large runs (the 5-party cones) cache finished ray sets on disk keyed by a
content hash of the H-representation and periodically checkpoint the
insertion state so an interrupted run resumes instead of restarting.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice

import numpy as np

from .exactla import independent_rows, invert, nullspace, rank_int, safe_int_matmul
from .indices import dim
from .inequalities import generate_inequalities, parse_families
from .vectors import clear_denominators, primitive
from . import kernels

Ray = tuple[int, ...]

CACHE_ENV = "MIPATTERNS_CACHE_DIR"


class NonPointedConeError(ValueError):
    """The H-representation admits a nonzero lineality space."""

    def __init__(self, lineality_basis):
        self.lineality_basis = tuple(tuple(v) for v in lineality_basis)
        super().__init__(
            "cone is not pointed; lineality space has dimension "
            f"{len(self.lineality_basis)}"
        )


def canonical_hrep(rows, dimension: int) -> tuple[tuple[int, ...], ...]:
    """Primitive, deduplicated, sorted constraint rows (zero rows dropped)."""
    seen = set()
    for row in rows:
        if len(row) != dimension:
            raise ValueError("constraint length does not match dimension")
        if not any(row):
            continue
        seen.add(primitive(row))
    return tuple(sorted(seen))


class Cone:
    """Pointed polyhedral cone {S : <f,S> >= 0 for f in hrep}.

    Entropy cones pass the party count n; synthetic cones may instead give
    an explicit ambient dimension.
    """

    def __init__(self, n: int, hrep, families=None, dimension: int | None = None):
        self.n = n
        self.dim = dimension if dimension is not None else dim(n)
        self.hrep = canonical_hrep(hrep, self.dim)
        if not self.hrep:
            raise ValueError("empty H-representation")
        self.families = tuple(families) if families is not None else None
        self._rays = None
        self._tight = None

    @property
    def rays(self) -> tuple[Ray, ...]:
        if self._rays is None:
            self._rays = extreme_rays(self)
        return self._rays

    def tight_masks(self) -> tuple[int, ...]:
        """Per-ray bitmask over hrep indices of exactly-saturated constraints."""
        if self._tight is None:
            rays = self.rays
            a_mat = np.array(self.hrep, dtype=np.int64)
            zero = safe_int_matmul(a_mat, _rays_array(list(rays), self.dim).T) == 0
            self._tight = tuple(unpacked for unpacked in _masks_from_bool(zero.T))
        return self._tight


def build_cone(n: int, families) -> Cone:
    fams = parse_families(families)
    rows = generate_inequalities(n, fams)
    if not rows:
        raise NonPointedConeError(np.eye(dim(n), dtype=np.int64).tolist())
    return Cone(n, rows, fams)


def _check_pointed(hrep, dimension: int) -> None:
    if rank_int(hrep, dimension) < dimension:
        basis = [clear_denominators(v) for v in nullspace(hrep, dimension)]
        raise NonPointedConeError(basis)


def _hrep_digest(hrep) -> str:
    text = ";".join(",".join(str(x) for x in row) for row in hrep)
    return hashlib.sha256(text.encode()).hexdigest()[:24]


def _rays_array(rays: list[Ray], dimension: int) -> np.ndarray:
    """Stack rays as an int64 array when safe, else object dtype."""
    if not rays:
        return np.zeros((0, dimension), dtype=np.int64)
    big = max(abs(x) for row in rays for x in row)
    dtype = np.int64 if big < (1 << 62) else object
    out = np.empty((len(rays), dimension), dtype=dtype)
    for i, row in enumerate(rays):
        out[i] = row
    return out


def _signs_of(prod: np.ndarray) -> np.ndarray:
    return (prod > 0).astype(np.int8) - (prod < 0).astype(np.int8)


def _masks_from_bool(rows: np.ndarray):
    """Bool (R, M) incidence rows -> python-int masks (bit i = column i)."""
    for row in rows:
        m = 0
        for i in np.nonzero(row)[0]:
            m |= 1 << int(i)
        yield m


@dataclass
class _DDState:
    rays: list[Ray]
    rays_np: np.ndarray
    packed: np.ndarray  # (R, W) uint64 incidence over processed constraints
    rem_order: list[int]  # unprocessed constraint indices, ascending
    signs: np.ndarray  # (len(rem_order), R) int8 signs of exact dots


def _initial_state(hrep, a_mat, dimension: int, nwords: int) -> _DDState:
    basis_idx = independent_rows(hrep, dimension)
    basis = [hrep[i] for i in basis_idx]
    inv_rows = invert(basis)
    rays = []
    for j in range(dimension):
        col = tuple(inv_rows[i][j] for i in range(dimension))
        rays.append(clear_denominators(col))
    packed = np.zeros((dimension, nwords), dtype=np.uint64)
    for j in range(dimension):
        for s, cidx in enumerate(basis_idx):
            if s != j:
                kernels.set_bit(packed, j, cidx)
    chosen = set(basis_idx)
    rem_order = [i for i in range(len(hrep)) if i not in chosen]
    rays_np = _rays_array(rays, dimension)
    signs = _signs_of(safe_int_matmul(a_mat[rem_order], rays_np.T))
    return _DDState(rays, rays_np, packed, rem_order, signs)


INSERT_POLICIES = ("mincut", "maxcut", "minpair", "static")


def _pick_row(state: _DDState, policy: str) -> int:
    """Position in rem_order of the next constraint to insert.

    Zero-violation rows are free (no new rays), so every dynamic policy takes
    them first; ties break on the canonical (ascending) constraint index.
    """
    neg = (state.signs < 0).sum(axis=1)
    if policy == "static":
        zero = np.nonzero(neg == 0)[0]
        return int(zero[0]) if zero.size else 0
    if policy == "mincut":
        score = neg
    elif policy == "maxcut":
        score = np.where(neg == 0, np.int64(np.iinfo(np.int64).min) // 2, -neg)
    elif policy == "minpair":
        pos = (state.signs > 0).sum(axis=1)
        score = np.where(neg == 0, np.int64(-1), neg * pos)
    else:
        raise ValueError(f"unknown insertion policy {policy!r}")
    return int(np.nonzero(score == score.min())[0][0])


def _insert_next(state: _DDState, a_mat: np.ndarray, policy: str = "maxcut") -> int:
    """Insert one remaining constraint, chosen by the given policy."""
    row_pos = _pick_row(state, policy)
    cidx = state.rem_order[row_pos]
    dimension = a_mat.shape[1]

    col = a_mat[cidx].reshape(dimension, 1)
    vals = safe_int_matmul(state.rays_np, col).ravel()
    keep_idx = np.nonzero(vals >= 0)[0]
    neg_idx = np.nonzero(vals < 0)[0]
    new_rays: list[Ray] = []
    new_packed_rows = []
    if neg_idx.size:
        pos_idx = np.nonzero(vals > 0)[0]
        if pos_idx.size:
            minpop = max(0, dimension - 2)
            ai, aj = kernels.adjacency_pairs(
                state.packed,
                pos_idx.astype(np.int64),
                neg_idx.astype(np.int64),
                minpop,
            )
            bit_word = cidx // kernels.BITS
            bit_val = np.uint64(1 << (cidx % kernels.BITS))
            for i, j in zip(ai.tolist(), aj.tolist()):
                alpha = int(vals[i])
                beta = int(vals[j])
                combo = tuple(
                    alpha * rj - beta * ri
                    for ri, rj in zip(state.rays[i], state.rays[j])
                )
                new_rays.append(primitive(combo))
                row = state.packed[i] & state.packed[j]
                row[bit_word] |= bit_val
                new_packed_rows.append(row)

    kept_rays = [state.rays[k] for k in keep_idx.tolist()]
    kept_packed = state.packed[keep_idx]
    zero_local = np.nonzero(vals[keep_idx] == 0)[0]
    if zero_local.size:
        kernels.set_bit(kept_packed, zero_local, cidx)
    state.rays = kept_rays + new_rays
    if new_packed_rows:
        state.packed = np.vstack([kept_packed, np.array(new_packed_rows)])
    else:
        state.packed = kept_packed
    state.rays_np = _rays_array(state.rays, dimension)
    state.rem_order.pop(row_pos)
    old_signs = np.delete(state.signs, row_pos, axis=0)[:, keep_idx]
    if new_rays and state.rem_order:
        new_np = _rays_array(new_rays, dimension)
        fresh = _signs_of(safe_int_matmul(a_mat[state.rem_order], new_np.T))
        state.signs = np.hstack([old_signs, fresh])
    else:
        state.signs = old_signs
    return cidx


def _finalize(hrep, state: _DDState, dimension: int):
    order = sorted(range(len(state.rays)), key=lambda i: state.rays[i])
    rays = [state.rays[i] for i in order]
    for a, b in zip(rays, rays[1:]):
        if a == b:
            raise AssertionError("double description produced duplicate rays")
    if rays:
        a_mat = np.array(hrep, dtype=np.int64)
        prod = safe_int_matmul(a_mat, _rays_array(rays, dimension).T)
        if not bool((prod >= 0).all()):
            raise AssertionError("double description produced an infeasible ray")
        fresh = kernels.pack_masks(list(_masks_from_bool((prod == 0).T)), len(hrep))
        packed = state.packed[order]
        if fresh.shape != packed.shape or not bool((fresh == packed).all()):
            raise AssertionError("incidence bookkeeping diverged from exact dots")
    return tuple(rays)


def extreme_rays(
    cone: Cone,
    cache_dir: str | None = None,
    force_recompute: bool = False,
    jobs: int = 1,
    progress=None,
    checkpoint_seconds: float = 60.0,
    policy: str = "maxcut",
) -> tuple[Ray, ...]:
    """Complete primitive extreme-ray list, lexicographically sorted.

    With cache_dir set (or MIPATTERNS_CACHE_DIR in the environment), finished
    ray sets are reused across runs, and long insertions checkpoint their
    state so an interrupted run resumes where it stopped.
    """
    hrep = list(cone.hrep)
    dimension = cone.dim
    _check_pointed(hrep, dimension)
    kernels.set_thread_budget(jobs)
    cache_dir = cache_dir or os.environ.get(CACHE_ENV)
    digest = _hrep_digest(hrep)
    cache_path = ckpt_path = None
    if cache_dir:
        os.makedirs(cache_dir, exist_ok=True)
        cache_path = os.path.join(cache_dir, f"rays-{digest}.json")
        ckpt_path = os.path.join(cache_dir, f"ckpt-{digest}.json")
        if not force_recompute and os.path.exists(cache_path):
            with open(cache_path) as fh:
                data = json.load(fh)
            rays = tuple(tuple(int(x) for x in row) for row in data["rays"])
            cone._rays = rays
            return rays

    a_mat = np.array(hrep, dtype=np.int64)
    nwords = kernels.words_needed(len(hrep))
    state = None
    if ckpt_path and not force_recompute and os.path.exists(ckpt_path):
        state = _load_checkpoint(ckpt_path, digest, hrep, a_mat, nwords)
        if state is not None and progress:
            progress(f"resumed checkpoint: {len(state.rem_order)} constraints left")
    if state is None:
        state = _initial_state(hrep, a_mat, dimension, nwords)

    total = len(hrep)
    last_save = time.monotonic()
    while state.rem_order:
        _insert_next(state, a_mat, policy)
        if progress:
            done = total - len(state.rem_order)
            progress(f"constraint {done}/{total}: rays={len(state.rays)}")
        if ckpt_path and time.monotonic() - last_save > checkpoint_seconds:
            _save_checkpoint(ckpt_path, digest, state)
            last_save = time.monotonic()

    rays = _finalize(hrep, state, dimension)
    cone._rays = rays
    if cache_path:
        payload = {
            "format": "mipatterns-rays",
            "n": cone.n,
            "dim": dimension,
            "families": list(cone.families) if cone.families else None,
            "hrep_sha": digest,
            "count": len(rays),
            "rays": [list(r) for r in rays],
        }
        _atomic_write(cache_path, json.dumps(payload))
        if ckpt_path and os.path.exists(ckpt_path):
            os.remove(ckpt_path)
    return rays


def _atomic_write(path: str, text: str) -> None:
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _save_checkpoint(path: str, digest: str, state: _DDState) -> None:
    payload = {
        "format": "mipatterns-ckpt",
        "hrep_sha": digest,
        "remaining": state.rem_order,
        "rays": [list(r) for r in state.rays],
        "masks": [format(m, "x") for m in kernels.unpack_rows(state.packed)],
    }
    _atomic_write(path, json.dumps(payload))


def _load_checkpoint(path: str, digest: str, hrep, a_mat, nwords: int):
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError):
        return None
    if data.get("hrep_sha") != digest:
        return None
    rays = [tuple(int(x) for x in row) for row in data["rays"]]
    masks = [int(h, 16) for h in data["masks"]]
    packed = kernels.pack_masks(masks, len(hrep))
    if packed.shape[1] < nwords:
        pad = np.zeros((packed.shape[0], nwords - packed.shape[1]), dtype=np.uint64)
        packed = np.hstack([packed, pad])
    rem_order = [int(c) for c in data["remaining"]]
    rays_np = _rays_array(rays, a_mat.shape[1])
    signs = _signs_of(safe_int_matmul(a_mat[rem_order], rays_np.T))
    return _DDState(rays, rays_np, packed, rem_order, signs)


# ---------------------------------------------------------------------------
# independent oracle and faces


def brute_force_rays(cone: Cone, limit: int = 60_000_000) -> tuple[Ray, ...]:
    """Extreme rays by exhausting rank-(D-1) tight subsets.

    Independent of the double description path: every (D-1)-subset of
    constraints with full rank pins down a line, and the feasible directions
    on such lines are exactly the extreme rays of a pointed cone.
    Exponential in the constraint count, so only suitable as a small-n
    oracle.
    """
    hrep = list(cone.hrep)
    dimension = cone.dim
    _check_pointed(hrep, dimension)
    if dimension == 1:
        for cand in ((1,), (-1,)):
            if all(row[0] * cand[0] >= 0 for row in hrep):
                return (cand,)
        return ()
    m = len(hrep)
    if math.comb(m, dimension - 1) > limit:
        raise ValueError("brute force search space too large")
    maxentry = max(abs(x) for row in hrep for x in row)
    # int64 elimination bound: entries <= 2 and dim <= 8 keep every minor and
    # back-substitution product far below 2**63 (Hadamard estimate)
    if maxentry > 2 or dimension > 8:
        raise ValueError("constraints exceed the int64 elimination bound")
    a_mat = np.array(hrep, dtype=np.int64)
    found = set()
    combo_iter = combinations(range(m), dimension - 1)
    while True:
        chunk = list(islice(combo_iter, 100_000))
        if not chunk:
            break
        combos = np.array(chunk, dtype=np.int64)
        vecs = kernels.kernel_vectors_batch(a_mat, combos)
        live = vecs[np.any(vecs != 0, axis=1)]
        if not live.size:
            continue
        prod = a_mat @ live.T
        feas_pos = (prod >= 0).all(axis=0)
        feas_neg = (prod <= 0).all(axis=0)
        for k in range(live.shape[0]):
            if feas_pos[k]:
                found.add(primitive(tuple(int(x) for x in live[k])))
            elif feas_neg[k]:
                found.add(primitive(tuple(-int(x) for x in live[k])))
    return tuple(sorted(found))


@dataclass(frozen=True)
class Face:
    """A face of the cone: saturated constraints plus the rays inside it."""

    tight: tuple[int, ...]
    generators: tuple[int, ...]


def minimal_face_containing(cone: Cone, ray_indices) -> Face:
    """Smallest face containing the chosen rays.

    The sum of the chosen rays lies in this face's relative interior, so its
    tight set is the intersection of the rays' tight sets.
    """
    sel = sorted(set(int(i) for i in ray_indices))
    if not sel:
        raise ValueError("empty ray selection")
    masks = cone.tight_masks()
    nrays = len(masks)
    if sel[0] < 0 or sel[-1] >= nrays:
        raise ValueError("ray index out of range")
    common = masks[sel[0]]
    for i in sel[1:]:
        common &= masks[i]
    tight = tuple(i for i in range(len(cone.hrep)) if (common >> i) & 1)
    gens = tuple(i for i in range(nrays) if masks[i] & common == common)
    return Face(tight=tight, generators=gens)


# ---------------------------------------------------------------------------
# matrix file formats (H-rep and V-rep share one layout)


def _format_entry(x) -> str:
    f = Fraction(x)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def write_matrix_text(rows) -> str:
    rows = [tuple(r) for r in rows]
    width = len(rows[0]) if rows else 0
    lines = [f"{width} {len(rows)}"]
    for row in rows:
        lines.append(" ".join(_format_entry(x) for x in row))
    return "\n".join(lines) + "\n"


def read_matrix_text(text: str) -> list[tuple[Fraction, ...]]:
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty matrix file")
    head = lines[0].split()
    if len(head) != 2:
        raise ValueError("matrix header must be 'D M'")
    width, count = int(head[0]), int(head[1])
    if len(lines) - 1 != count:
        raise ValueError(f"expected {count} rows, found {len(lines) - 1}")
    out = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != width:
            raise ValueError(f"expected {width} entries per row")
        out.append(tuple(Fraction(p) for p in parts))
    return out


def write_matrix_json(rows) -> str:
    rows = [tuple(r) for r in rows]
    return json.dumps(
        {
            "dim": len(rows[0]) if rows else 0,
            "count": len(rows),
            "rows": [[_format_entry(x) for x in row] for row in rows],
        }
    )


def read_matrix_json(text: str) -> list[tuple[Fraction, ...]]:
    data = json.loads(text)
    rows = [tuple(Fraction(str(x)) for x in row) for row in data["rows"]]
    for row in rows:
        if len(row) != data["dim"]:
            raise ValueError("row width disagrees with dim")
    if len(rows) != data["count"]:
        raise ValueError("row count disagrees with count")
    return rows
