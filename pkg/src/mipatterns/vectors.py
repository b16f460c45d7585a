"""Exact entropy vectors and linear functionals on entropy space.

An entropy vector stores the 2**n - 1 marginal entropies of an n-party state
as exact rationals, in the canonical ascending bit-vector coordinate order.
Linear functionals (hyperplane normals, inequality normals) are plain tuples
of ints or Fractions over the same index order; all normals produced by this
package are primitive integer tuples.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from . import indices


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}")


@dataclass(frozen=True)
class EntropyVector:
    """Exact point of n-party entropy space."""

    n: int
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        d = indices.dim(self.n)
        if len(self.coords) != d:
            raise ValueError(
                f"entropy vector for n={self.n} needs {d} coords, got {len(self.coords)}"
            )
        object.__setattr__(self, "coords", tuple(_as_fraction(c) for c in self.coords))

    def __getitem__(self, j: int) -> Fraction:
        """Entropy of the purifier-free subsystem with bit-vector j."""
        indices.check_index(j, self.n)
        return self.coords[j - 1]

    def extended_value(self, j: int) -> Fraction:
        """Entropy of an extended index, via the purification rule."""
        if j == indices.extended_full_mask(self.n):
            return Fraction(0)
        return self.coords[indices.reduce_index(j, self.n) - 1]

    def __add__(self, other: "EntropyVector") -> "EntropyVector":
        if self.n != other.n:
            raise ValueError("party count mismatch")
        return EntropyVector(self.n, tuple(a + b for a, b in zip(self.coords, other.coords)))

    def scale(self, c) -> "EntropyVector":
        c = _as_fraction(c)
        return EntropyVector(self.n, tuple(c * x for x in self.coords))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def to_json(self) -> str:
        obj = {"n": self.n, "coords": [str(c) for c in self.coords]}
        return json.dumps(obj, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "EntropyVector":
        obj = json.loads(text)
        return cls(int(obj["n"]), tuple(Fraction(c) for c in obj["coords"]))

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(csv_header(self.n))
        w.writerow([str(c) for c in self.coords])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "EntropyVector":
        rows = list(csv.reader(io.StringIO(text)))
        if len(rows) < 2:
            raise ValueError("entropy-vector CSV needs a header row and a value row")
        header, values = rows[0], rows[1]
        d = len(header)
        n = d.bit_length() if d + 1 == 1 << d.bit_length() else None
        if n is None or len(values) != d:
            raise ValueError("malformed entropy-vector CSV")
        expect = csv_header(n)
        if header != expect:
            raise ValueError(f"unexpected CSV header {header!r}")
        return cls(n, tuple(Fraction(v) for v in values))


def csv_header(n: int) -> list[str]:
    return [indices.subset_label(j) for j in indices.enumerate_subsystems(n)]


def zero_vector(n: int) -> EntropyVector:
    return EntropyVector(n, (Fraction(0),) * indices.dim(n))


def vector_from_ints(n: int, values) -> EntropyVector:
    return EntropyVector(n, tuple(Fraction(v) for v in values))


def eval_functional(f, s) -> Fraction:
    """Exact inner product of a functional with an entropy vector."""
    coords = s.coords if isinstance(s, EntropyVector) else s
    if len(f) != len(coords):
        raise ValueError(f"dimension mismatch: {len(f)} vs {len(coords)}")
    total = Fraction(0)
    for a, b in zip(f, coords):
        if a:
            total += a * b
    return total


def functional_from_terms(n: int, terms) -> tuple[int, ...]:
    """Accumulate coefficients on extended indices into canonical coordinates.

    Each term is (extended index, integer coefficient).  Indices containing
    the purifier are complemented; terms on the full purified system drop
    (its entropy is identically zero); colliding reductions sum.
    """
    coeffs = [0] * indices.dim(n)
    full = indices.extended_full_mask(n)
    for j, c in terms:
        if j == full:
            continue
        coeffs[indices.reduce_index(j, n) - 1] += c
    return tuple(coeffs)


def primitive(vec, fix_sign: bool = False) -> tuple[int, ...]:
    """Divide an integer vector by the gcd of its entries.

    With fix_sign, flip so the first nonzero entry is positive; cone rays keep
    their orientation.
    """
    g = 0
    for x in vec:
        g = gcd(g, x)
        if g == 1:
            break
    if g > 1:
        vec = [x // g for x in vec]
    if fix_sign:
        for x in vec:
            if x > 0:
                break
            if x < 0:
                vec = [-y for y in vec]
                break
    return tuple(vec)


def clear_denominators(vec) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector (sign kept)."""
    fracs = [_as_fraction(x) for x in vec]
    lcm = 1
    for x in fracs:
        q = x.denominator
        lcm = lcm // gcd(lcm, q) * q
    return primitive([int(x * lcm) for x in fracs])


def permute_vector(s: EntropyVector, perm: tuple[int, ...]) -> EntropyVector:
    """Relabel parties; perm[p-1] is the image of party p.

    Accepts a permutation of [n] (purifier fixed) or of [n+1].  Permutations
    moving the purifier act linearly through the purification rule: the new
    J coordinate is the old entropy of the preimage of J.
    """
    n = s.n
    perm = indices.as_extended_permutation(perm, n)
    inv = [0] * (n + 1)
    for p, q in enumerate(perm, start=1):
        inv[q - 1] = p
    coords = []
    for j in indices.enumerate_subsystems(n):
        pre = indices.permute_index(j, tuple(inv))
        coords.append(s.extended_value(pre))
    return EntropyVector(n, tuple(coords))
