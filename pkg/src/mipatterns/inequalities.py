"""Generators for the supported entropy-inequality families.

Every generator yields primitive integer normals f with the convention
<f, S> >= 0, purifier-reduced onto the canonical coordinates, deduplicated
(identical or positively scaled normals collapse) and canonically sorted.

Families:
  sa        I(i:k) >= 0 over all arrangement instances
  ssa       I(i:j|k) >= 0, i.e. I(i:jk) - I(i:k) >= 0, over disjoint triples
  ingleton  I(a:b|c) + I(a:b|d) + I(c:d) - I(a:b) >= 0 over disjoint 4-tuples
  mmi       S_ab + S_bc + S_ac - S_a - S_b - S_c - S_abc >= 0 over triples
  mono      S_K - S_{K minus i} >= 0 over purifier-free K and i in K
"""

from __future__ import annotations

from itertools import combinations

from . import indices
from .mia import mia_context
from .vectors import functional_from_terms, primitive

FAMILY_NAMES = ("sa", "ssa", "ingleton", "mmi", "mono")


def _disjoint_tuples(n: int, arity: int):
    """Ordered tuples of pairwise-disjoint nonempty extended indices."""
    full = indices.extended_full_mask(n)

    def rec(prefix, used):
        if len(prefix) == arity:
            yield tuple(prefix)
            return
        for j in range(1, full + 1):
            if j & used:
                continue
            prefix.append(j)
            yield from rec(prefix, used | j)
            prefix.pop()

    yield from rec([], 0)


def _dedupe(normals) -> tuple[tuple[int, ...], ...]:
    out = set()
    for f in normals:
        if any(f):
            out.add(primitive(f))
    return tuple(sorted(out))


def sa_normals(n: int) -> tuple[tuple[int, ...], ...]:
    """Subadditivity: the arrangement instances' own normals.

    Pairs covering the whole purified system would give 2*S_I >= 0, which is
    implied by the rest, so they are not generated in the first place.
    """
    return _dedupe(mia_context(n).normals)


def ssa_normals(n: int) -> tuple[tuple[int, ...], ...]:
    """Strong subadditivity as conditional mutual information instances."""
    out = []
    for i, j, k in _disjoint_tuples(n, 3):
        if i > j:
            continue  # I(i:j|k) is symmetric in i and j
        out.append(
            functional_from_terms(
                n, [(i | k, 1), (j | k, 1), (i | j | k, -1), (k, -1)]
            )
        )
    return _dedupe(out)


def ingleton_normals(n: int) -> tuple[tuple[int, ...], ...]:
    out = []
    for a, b, c, d in _disjoint_tuples(n, 4):
        if a > b or c > d:
            continue  # symmetric under a<->b and c<->d
        out.append(
            functional_from_terms(
                n,
                [
                    (a | c, 1),
                    (a | d, 1),
                    (b | c, 1),
                    (b | d, 1),
                    (a | b, 1),
                    (a, -1),
                    (b, -1),
                    (c | d, -1),
                    (a | b | c, -1),
                    (a | b | d, -1),
                ],
            )
        )
    return _dedupe(out)


def mmi_normals(n: int) -> tuple[tuple[int, ...], ...]:
    """Monogamy of mutual information: non-positive tripartite information."""
    out = []
    for a, b, c in _disjoint_tuples(n, 3):
        if not a < b < c:
            continue  # fully symmetric
        out.append(
            functional_from_terms(
                n,
                [
                    (a | b, 1),
                    (b | c, 1),
                    (a | c, 1),
                    (a, -1),
                    (b, -1),
                    (c, -1),
                    (a | b | c, -1),
                ],
            )
        )
    return _dedupe(out)


def mono_normals(n: int) -> tuple[tuple[int, ...], ...]:
    """Monotonicity on purifier-free indices: S_K >= S_{K minus one party}."""
    out = []
    for k in indices.enumerate_subsystems(n):
        for p in indices.parties(k):
            smaller = k & ~(1 << (p - 1))
            coeffs = [0] * indices.dim(n)
            coeffs[k - 1] += 1
            if smaller:
                coeffs[smaller - 1] -= 1
            out.append(tuple(coeffs))
    return _dedupe(out)


_GENERATORS = {
    "sa": sa_normals,
    "ssa": ssa_normals,
    "ingleton": ingleton_normals,
    "mmi": mmi_normals,
    "mono": mono_normals,
}


def parse_families(spec) -> tuple[str, ...]:
    """Normalize a family selection like 'sa,ssa' or an iterable of names."""
    if isinstance(spec, str):
        names = [s.strip().lower() for s in spec.split(",") if s.strip()]
    else:
        names = [str(s).strip().lower() for s in spec]
    for name in names:
        if name not in _GENERATORS:
            raise ValueError(
                f"unknown inequality family {name!r}; known: {', '.join(FAMILY_NAMES)}"
            )
    seen = []
    for name in names:
        if name not in seen:
            seen.append(name)
    return tuple(seen)


def generate_inequalities(n: int, families) -> tuple[tuple[int, ...], ...]:
    """Combined, deduplicated, canonically sorted normals of chosen families."""
    names = parse_families(families)
    combined = []
    for name in names:
        combined.extend(_GENERATORS[name](n))
    return _dedupe(combined)
