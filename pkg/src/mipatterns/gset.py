"""Patterns compatible with an inequality family: the ray-meet-closure set.

A pattern is compatible with a cone of entropy vectors when some interior
point of a face realizes exactly that vanishing set.  Instances are
non-negative linear forms on the cone, so an instance vanishes somewhere on
a face interior iff it vanishes on every generating ray; the face images are
therefore exactly the meets of extreme-ray patterns, plus the all-members
pattern contributed by the origin.  That turns an astronomically large face
lattice into a bounded fixpoint over bit masks.

An independent oracle recomputes the same set from the definition (exact LP
per candidate lattice element) for small n.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass

import numpy as np

from . import kernels
from .dd import build_cone, extreme_rays
from .indices import dim
from .inequalities import FAMILY_NAMES, generate_inequalities, parse_families
from .lp import lp_feasible
from .mia import Pattern, closure, mia_context, pattern_from_names, pattern_of_int_rows
from .vectors import EntropyVector

_KERNEL_CUTOVER = 4096


class PatternSet:
    """Deduplicated, meet-closed pattern collection with provenance."""

    def __init__(self, n: int, families, patterns):
        self.n = n
        self.families = tuple(families)
        uniq = {}
        for p in patterns:
            if p.n != n:
                raise ValueError("pattern party count disagrees with the set")
            uniq[p.mask] = p
        self.patterns = tuple(
            sorted(uniq.values(), key=lambda p: (p.member_count, p.mask))
        )
        self._masks = frozenset(uniq)

    def __len__(self) -> int:
        return len(self.patterns)

    def __iter__(self):
        return iter(self.patterns)

    def __contains__(self, p) -> bool:
        mask = p.mask if isinstance(p, Pattern) else int(p)
        return mask in self._masks

    def __eq__(self, other) -> bool:
        if not isinstance(other, PatternSet):
            return NotImplemented
        return self.n == other.n and self._masks == other._masks

    def __hash__(self):
        return hash((self.n, self._masks))

    @property
    def masks(self) -> frozenset:
        return self._masks

    def counts(self) -> dict:
        """Sizes with and without the lattice's top and bottom elements.

        Bottom is the empty pattern (the ambient space), top the all-members
        pattern (the origin); conventions differ on counting them, so both
        numbers are reported.
        """
        full = mia_context(self.n).full_mask
        extremes = sum(1 for m in {0, full} if m in self._masks)
        return {"total": len(self.patterns), "proper": len(self.patterns) - extremes}

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "families": list(self.families),
                "count": len(self.patterns),
                "patterns": [p.names() for p in self.patterns],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "PatternSet":
        data = json.loads(text)
        n = int(data["n"])
        pats = [pattern_from_names(names, n) for names in data["patterns"]]
        if len(pats) != data["count"]:
            raise ValueError("pattern count disagrees with count field")
        return cls(n, data["families"], pats)

    def summary_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf)
        writer.writerow(["pattern", "members", "dim"])
        for i, p in enumerate(self.patterns):
            writer.writerow([i, p.member_count, p.dim])
        return buf.getvalue()


def meet_closure(masks, nbits: int, jobs: int = 1) -> set[int]:
    """Close a mask set under pairwise AND to a fixpoint.

    Each closure round only needs new-element x generator meets; rounds use
    the packed kernel once the product count justifies it.
    """
    kernels.set_thread_budget(jobs)
    gens = sorted(set(masks))
    closed = set(gens)
    frontier = gens
    packed_gens = None
    while frontier:
        if nbits and len(gens) * len(frontier) >= _KERNEL_CUTOVER:
            if packed_gens is None:
                packed_gens = kernels.pack_masks(gens, nbits)
            prod = kernels.and_product(
                kernels.pack_masks(frontier, nbits), packed_gens
            )
            cand = kernels.unpack_rows(kernels.unique_rows(prod))
            fresh = {m for m in cand if m not in closed}
        else:
            fresh = set()
            for x in frontier:
                for g in gens:
                    z = x & g
                    if z not in closed:
                        fresh.add(z)
        closed |= fresh
        frontier = sorted(fresh)
    return closed


def compute_g(
    n: int,
    families,
    cache_dir: str | None = None,
    jobs: int = 1,
    progress=None,
    force_recompute: bool = False,
) -> PatternSet:
    """The compatible-pattern set from extreme rays plus meet closure."""
    fams = parse_families(families)
    ctx = mia_context(n)
    if len(ctx) == 0:
        return PatternSet(n, fams, [Pattern(n, 0)])
    cone = build_cone(n, fams)
    rays = extreme_rays(
        cone,
        cache_dir=cache_dir,
        force_recompute=force_recompute,
        jobs=jobs,
        progress=progress,
    )
    rows = np.array(rays, dtype=object) if rays else np.zeros((0, dim(n)), np.int64)
    ray_masks = pattern_of_int_rows(ctx, rows)
    if progress:
        progress(f"rays={len(rays)} distinct ray patterns={len(set(ray_masks))}")
    closed = meet_closure(ray_masks, nbits=len(ctx), jobs=jobs)
    closed.add(ctx.full_mask)
    result = PatternSet(n, fams, [Pattern(n, m) for m in closed])
    if progress:
        progress(f"patterns={len(result)}")
    return result


def _lattice_masks(ctx) -> list[int]:
    """Every span-closed member set: join-closure BFS from the bottom."""
    m = len(ctx)
    if m == 0:
        return [0]
    join_memo: dict[int, int] = {}
    seen = {0}
    frontier = [0]
    while frontier:
        fresh = set()
        for x in frontier:
            for g in range(m):
                if (x >> g) & 1:
                    continue
                u = x | (1 << g)
                y = join_memo.get(u)
                if y is None:
                    y = closure(ctx, u).mask
                    join_memo[u] = y
                if y not in seen:
                    fresh.add(y)
        seen |= fresh
        frontier = sorted(fresh)
    return sorted(seen)


def _feasible_exactly(ctx, mask: int, ineqs) -> bool:
    eqs = [ctx.normals[p] for p in range(len(ctx)) if (mask >> p) & 1]
    strict = [ctx.normals[p] for p in range(len(ctx)) if not (mask >> p) & 1]
    return lp_feasible(ctx.dim, eqs, ineqs, strict) is not None


def compute_g_oracle(n: int, families, allow_large: bool = False) -> PatternSet:
    """Definition-based recomputation: exact LP on every lattice element.

    A pattern belongs to the set iff some vector whose vanishing set is
    exactly the pattern satisfies every family inequality.  Exponential in
    the arrangement size; guarded to n <= 3 unless allow_large.
    """
    if n > 3 and not allow_large:
        raise ValueError("oracle enumeration is exponential; n <= 3 enforced")
    fams = parse_families(families)
    ctx = mia_context(n)
    ineqs = generate_inequalities(n, fams)
    kept = [m for m in _lattice_masks(ctx) if _feasible_exactly(ctx, m, ineqs)]
    return PatternSet(n, fams, [Pattern(n, m) for m in kept])


EQUAL = "equal"
A_PROPER_SUPERSET = "a_proper_superset_of_b"
B_PROPER_SUPERSET = "b_proper_superset_of_a"
INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class ComparisonReport:
    verdict: str
    only_a: tuple[Pattern, ...]
    only_b: tuple[Pattern, ...]


def compare_g(a: PatternSet, b: PatternSet) -> ComparisonReport:
    """Set comparison with explicit witnesses in each difference."""
    if a.n != b.n:
        raise ValueError(f"pattern sets for different n: {a.n} vs {b.n}")
    only_a = sorted(
        (p for p in a if p.mask not in b.masks), key=lambda p: (p.member_count, p.mask)
    )
    only_b = sorted(
        (p for p in b if p.mask not in a.masks), key=lambda p: (p.member_count, p.mask)
    )
    if not only_a and not only_b:
        verdict = EQUAL
    elif not only_b:
        verdict = A_PROPER_SUPERSET
    elif not only_a:
        verdict = B_PROPER_SUPERSET
    else:
        verdict = INCOMPARABLE
    return ComparisonReport(verdict, tuple(only_a), tuple(only_b))


def admits_monotone_representative(p: Pattern, n: int, families):
    """A vector realizing exactly p under the families plus monotonicity.

    None certifies that every vector with vanishing set exactly p violates
    some monotonicity instance, i.e. the pattern has no classical-looking
    representative.
    """
    fams = parse_families(families)
    if "mono" not in fams:
        fams = tuple(fams) + ("mono",)
    ctx = mia_context(n)
    if p.n != n:
        raise ValueError("pattern party count disagrees")
    ineqs = generate_inequalities(n, fams)
    eqs = [ctx.normals[k] for k in range(len(ctx)) if (p.mask >> k) & 1]
    strict = [ctx.normals[k] for k in range(len(ctx)) if not (p.mask >> k) & 1]
    witness = lp_feasible(ctx.dim, eqs, ineqs, strict)
    if witness is None:
        return None
    return EntropyVector(n, witness)


__all__ = [
    "PatternSet",
    "meet_closure",
    "compute_g",
    "compute_g_oracle",
    "compare_g",
    "ComparisonReport",
    "admits_monotone_representative",
    "EQUAL",
    "A_PROPER_SUPERSET",
    "B_PROPER_SUPERSET",
    "INCOMPARABLE",
    "FAMILY_NAMES",
]
