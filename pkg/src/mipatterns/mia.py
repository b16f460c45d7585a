"""The mutual information arrangement and patterns of marginal independence.

Instances are canonical unordered pairs of disjoint nonempty extended
subsystem indices whose union is not the full purified system; each carries
the integer normal of its vanishing hyperplane.  A pattern is a span-closed
set of instances, stored as a membership bit-vector over the canonical
instance list, so lattice meet is bitwise AND and equality is int equality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import indices
from .exactla import IntRowBasis, rank_int, safe_int_matmul
from .vectors import EntropyVector, eval_functional, functional_from_terms


@dataclass(frozen=True, order=True)
class MIInstance:
    """Canonical pair (i, k) of extended indices with i < k as bit-vectors."""

    i: int
    k: int

    @property
    def name(self) -> str:
        return f"I({indices.index_name(self.i)}:{indices.index_name(self.k)})"


def make_instance(a: int, b: int, n: int) -> MIInstance:
    indices.check_index(a, n, extended=True)
    indices.check_index(b, n, extended=True)
    if a & b:
        raise ValueError(f"overlapping subsystems {a:b} and {b:b}")
    if (a | b) == indices.extended_full_mask(n):
        raise ValueError("pair covering the purified system is not an instance")
    if a > b:
        a, b = b, a
    return MIInstance(a, b)


def parse_instance_name(text: str, n: int) -> MIInstance:
    body = text.strip()
    if body.startswith("I(") and body.endswith(")"):
        body = body[2:-1]
    try:
        left, right = body.split(":")
    except ValueError:
        raise ValueError(f"cannot parse instance name {text!r}") from None
    return make_instance(indices.parse_index_name(left), indices.parse_index_name(right), n)


def instance_normal(inst: MIInstance, n: int) -> tuple[int, ...]:
    """Normal of I(i:k) = S_i + S_k - S_ik after purifier reduction."""
    return functional_from_terms(
        n, [(inst.i, 1), (inst.k, 1), (inst.i | inst.k, -1)]
    )


def permute_instance(inst: MIInstance, perm: tuple[int, ...], n: int) -> MIInstance:
    perm = indices.as_extended_permutation(perm, n)
    return make_instance(
        indices.permute_index(inst.i, perm), indices.permute_index(inst.k, perm), n
    )


class MiaContext:
    """The full n-party arrangement: canonical instance list plus normals."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"party count must be >= 1, got {n}")
        self.n = n
        self.dim = indices.dim(n)
        full = indices.extended_full_mask(n)
        insts = []
        for i in range(1, full + 1):
            for k in range(i + 1, full + 1):
                if (i & k) == 0 and (i | k) != full:
                    insts.append(MIInstance(i, k))
        self.instances: tuple[MIInstance, ...] = tuple(insts)
        self.normals: tuple[tuple[int, ...], ...] = tuple(
            instance_normal(inst, n) for inst in insts
        )
        self.normals_matrix = np.array(self.normals, dtype=np.int64).reshape(
            len(insts), self.dim
        )
        self.index: dict[MIInstance, int] = {inst: p for p, inst in enumerate(insts)}
        self.full_mask = (1 << len(insts)) - 1

    def __len__(self) -> int:
        return len(self.instances)

    def position(self, inst: MIInstance) -> int:
        try:
            return self.index[inst]
        except KeyError:
            raise ValueError(f"{inst.name} is not an instance for n={self.n}") from None

    def mask_of(self, instances) -> int:
        m = 0
        for inst in instances:
            m |= 1 << self.position(inst)
        return m


@lru_cache(maxsize=None)
def mia_context(n: int) -> MiaContext:
    return MiaContext(n)


def enumerate_mia(n: int) -> MiaContext:
    """The canonical arrangement for n parties (cached)."""
    return mia_context(n)


@lru_cache(maxsize=None)
def _pattern_dim(n: int, mask: int) -> int:
    ctx = mia_context(n)
    rows = [ctx.normals[p] for p in _bit_positions(mask)]
    return ctx.dim - rank_int(rows, ctx.dim)


def _bit_positions(mask: int) -> list[int]:
    out = []
    p = 0
    while mask:
        if mask & 1:
            out.append(p)
        mask >>= 1
        p += 1
    return out


@dataclass(frozen=True, order=True)
class Pattern:
    """Span-closed instance set, canonical representative of a lattice element."""

    n: int
    mask: int = field(compare=True)

    @property
    def dim(self) -> int:
        return _pattern_dim(self.n, self.mask)

    @property
    def member_count(self) -> int:
        return bin(self.mask).count("1")

    def members(self) -> tuple[MIInstance, ...]:
        ctx = mia_context(self.n)
        return tuple(ctx.instances[p] for p in _bit_positions(self.mask))

    def names(self) -> list[str]:
        return [inst.name for inst in self.members()]

    def to_json(self) -> str:
        import json

        return json.dumps(self.names())


def pattern_from_names(names, n: int) -> Pattern:
    ctx = mia_context(n)
    mask = ctx.mask_of(parse_instance_name(t, n) for t in names)
    return closure(ctx, mask)


def pattern_of_vector(ctx: MiaContext, s) -> Pattern:
    """Vanishing set of s: exactly the instances whose normal kills s.

    The result is automatically span-closed, so no re-closure is needed.
    """
    coords = s.coords if isinstance(s, EntropyVector) else tuple(s)
    if len(coords) != ctx.dim:
        raise ValueError("dimension mismatch")
    mask = 0
    if all(isinstance(c, int) for c in coords):
        col = np.array(coords, dtype=object).reshape(ctx.dim, 1)
        vals = safe_int_matmul(ctx.normals_matrix, col).ravel()
        for p in range(len(ctx.instances)):
            if vals[p] == 0:
                mask |= 1 << p
    else:
        for p, normal in enumerate(ctx.normals):
            if eval_functional(normal, coords) == 0:
                mask |= 1 << p
    return Pattern(ctx.n, mask)


def pattern_of_int_rows(ctx: MiaContext, rows: np.ndarray) -> list[int]:
    """Vanishing-set masks for many integer vectors at once (rows of an array)."""
    vals = safe_int_matmul(ctx.normals_matrix, rows.T)
    zero = np.asarray(vals == 0)
    masks = []
    for r in range(rows.shape[0]):
        m = 0
        for p in np.nonzero(zero[:, r])[0]:
            m |= 1 << int(p)
        masks.append(m)
    return masks


def closure(ctx: MiaContext, raw) -> Pattern:
    """Span closure: all instances whose normal lies in the span of raw's."""
    mask = raw if isinstance(raw, int) else ctx.mask_of(raw)
    basis = IntRowBasis(ctx.dim)
    for p in _bit_positions(mask):
        basis.add(ctx.normals[p])
    closed = mask
    for p, normal in enumerate(ctx.normals):
        if closed >> p & 1:
            continue
        if basis.contains(normal):
            closed |= 1 << p
    return Pattern(ctx.n, closed)


def _check_same_context(p: Pattern, q: Pattern) -> None:
    if p.n != q.n:
        raise ValueError(f"patterns from different contexts: n={p.n} vs n={q.n}")


def meet(p: Pattern, q: Pattern) -> Pattern:
    """Lattice meet (subspace sum): intersection of the member sets."""
    _check_same_context(p, q)
    return Pattern(p.n, p.mask & q.mask)


def join(p: Pattern, q: Pattern) -> Pattern:
    """Lattice join (subspace intersection): closure of the member union."""
    _check_same_context(p, q)
    return closure(mia_context(p.n), p.mask | q.mask)


EQUAL = "equal"
PRECEDES = "precedes"
SUCCEEDS = "succeeds"
INCOMPARABLE = "incomparable"


def compare(p: Pattern, q: Pattern) -> str:
    """Order verdict under reverse inclusion of varieties (member inclusion)."""
    _check_same_context(p, q)
    if p.mask == q.mask:
        return EQUAL
    if p.mask & ~q.mask == 0:
        return PRECEDES
    if q.mask & ~p.mask == 0:
        return SUCCEEDS
    return INCOMPARABLE


def permute_pattern(p: Pattern, perm: tuple[int, ...]) -> Pattern:
    ctx = mia_context(p.n)
    mask = 0
    for inst in p.members():
        mask |= 1 << ctx.position(permute_instance(inst, perm, p.n))
    return Pattern(p.n, mask)
