"""Entropy vectors of known state families and catalog-based realizability.

Closed-form families (Bell pairs, GHZ, perfect tensors) and arbitrary pure
stabilizer states given by GF(2) check matrices supply a catalog of exactly
known entropy vectors.  Tensor products add entropy vectors, so the pattern
of a product is the meet of the factors' patterns; realizability of a target
pattern against a catalog is then pure bit-vector arithmetic and never
materializes a product state.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations

from . import indices
from .inequalities import generate_inequalities
from .mia import Pattern, mia_context, pattern_of_vector
from .vectors import EntropyVector, eval_functional

GENERATOR_KINDS = ("bell", "ghz", "perfect")


@dataclass(frozen=True)
class GeneratorSpec:
    """A closed-form state family placed on specific parties of [n+1]."""

    kind: str
    parties: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "parties", tuple(sorted(self.parties)))
        if self.kind not in GENERATOR_KINDS:
            raise ValueError(f"unknown generator kind {self.kind!r}")
        t = self.parties
        if len(set(t)) != len(t) or any(p < 1 for p in t):
            raise ValueError("parties must be distinct positive labels")
        if self.kind == "bell" and len(t) != 2:
            raise ValueError("a Bell pair needs exactly two parties")
        if self.kind == "ghz" and len(t) < 2:
            raise ValueError("GHZ needs at least two parties")
        if self.kind == "perfect" and (len(t) < 4 or len(t) % 2):
            raise ValueError("perfect tensors need an even party count >= 4")

    @property
    def label(self) -> str:
        return f"{self.kind}({','.join(str(p) for p in self.parties)})"


def _extended_entropy(spec: GeneratorSpec, j: int) -> int:
    t_mask = indices.index_of_parties(spec.parties)
    inter = j & t_mask
    if spec.kind == "bell":
        return 1 if bin(inter).count("1") == 1 else 0
    if spec.kind == "ghz":
        return 1 if inter != 0 and inter != t_mask else 0
    size = bin(inter).count("1")
    return min(size, len(spec.parties) - size)


def generator_vector(spec: GeneratorSpec, n: int) -> EntropyVector:
    """Entropy vector of the family on n parties plus purifier, exact."""
    if spec.parties[-1] > n + 1:
        raise ValueError(f"{spec.label} does not fit {n} parties plus purifier")
    full = indices.extended_full_mask(n)
    values = {j: _extended_entropy(spec, j) for j in range(1, full + 1)}
    for j in range(1, full):
        if values[j] != values[full ^ j]:  # purity: complements agree
            raise AssertionError(f"{spec.label} breaks complementarity at {j}")
    if values[full] != 0:
        raise AssertionError(f"{spec.label} is not pure")
    coords = [values[j] for j in indices.enumerate_subsystems(n)]
    return EntropyVector(n, tuple(Fraction(v) for v in coords))


def bell_vector(n: int, a: int, b: int) -> EntropyVector:
    return generator_vector(GeneratorSpec("bell", (a, b)), n)


def ghz_vector(n: int, parties) -> EntropyVector:
    return generator_vector(GeneratorSpec("ghz", tuple(parties)), n)


def perfect_vector(n: int, parties) -> EntropyVector:
    return generator_vector(GeneratorSpec("perfect", tuple(parties)), n)


# ---------------------------------------------------------------------------
# stabilizer states over GF(2)


@dataclass(frozen=True)
class CheckMatrix:
    """Pure stabilizer state: q qubits, q commuting independent generators.

    Row bit t is the X part on qubit t, bit q+t the Z part; assignment[t] is
    the party (in [n+1]) holding qubit t.
    """

    q: int
    rows: tuple[int, ...]
    assignment: tuple[int, ...]

    def validate(self, n: int) -> None:
        if len(self.assignment) != self.q:
            raise ValueError("assignment length must equal the qubit count")
        if any(p < 1 or p > n + 1 for p in self.assignment):
            raise ValueError(f"parties must lie in 1..{n + 1}")
        if len(self.rows) != self.q:
            raise ValueError("a pure stabilizer state needs m = q generators")
        if _gf2_rank(self.rows) != len(self.rows):
            raise ValueError("check matrix rows are dependent over GF(2)")
        for i, j in combinations(range(len(self.rows)), 2):
            if not _commutes(self.rows[i], self.rows[j], self.q):
                raise ValueError(f"generators {i} and {j} anticommute")


def _gf2_rank(rows) -> int:
    basis = []
    for row in rows:
        v = int(row)
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
            basis.sort(reverse=True)
    return len(basis)


def _commutes(r1: int, r2: int, q: int) -> bool:
    xmask = (1 << q) - 1
    x1, z1 = r1 & xmask, r1 >> q
    x2, z2 = r2 & xmask, r2 >> q
    return (bin(x1 & z2).count("1") + bin(x2 & z1).count("1")) % 2 == 0


def stabilizer_entropy_vector(cm: CheckMatrix, n: int) -> EntropyVector:
    """Exact entropies S_A = |Q_A| - dim of the stabilizer subgroup on A.

    The subgroup supported on A is the kernel of restriction to the
    complementary qubits' columns, so its dimension is m minus the GF(2)
    rank of the restricted rows.
    """
    cm.validate(n)
    m = len(cm.rows)
    coords = []
    for a_idx in indices.enumerate_subsystems(n):
        qubits_a = [t for t, p in enumerate(cm.assignment) if (a_idx >> (p - 1)) & 1]
        rest = [t for t in range(cm.q) if t not in qubits_a]
        restricted = []
        for row in cm.rows:
            v = 0
            for pos, t in enumerate(rest):
                v |= ((row >> t) & 1) << pos
                v |= ((row >> (cm.q + t)) & 1) << (len(rest) + pos)
            restricted.append(v)
        s_a = len(qubits_a) - (m - _gf2_rank(restricted))
        coords.append(Fraction(s_a))
    return EntropyVector(n, tuple(coords))


def parse_check_matrix(text: str) -> tuple[CheckMatrix, int]:
    """Read the plain-text format: 'q m n', m bit rows, assignment line."""
    lines = [ln for ln in (s.strip() for s in text.splitlines()) if ln]
    if not lines:
        raise ValueError("empty check matrix file")
    head = lines[0].split()
    if len(head) != 3:
        raise ValueError("header must be 'q m n'")
    q, m, n = (int(x) for x in head)
    if len(lines) != m + 2:
        raise ValueError(f"expected {m} generator rows plus an assignment line")
    rows = []
    for ln in lines[1 : m + 1]:
        bits = ln.replace(" ", "")
        if len(bits) != 2 * q or set(bits) - {"0", "1"}:
            raise ValueError(f"each generator row needs 2q={2 * q} bits")
        v = 0
        for pos, ch in enumerate(bits):
            if ch == "1":
                v |= 1 << pos
        rows.append(v)
    assignment = tuple(int(x) for x in lines[m + 1].split())
    cm = CheckMatrix(q, tuple(rows), assignment)
    cm.validate(n)
    return cm, n


def format_check_matrix(cm: CheckMatrix, n: int) -> str:
    lines = [f"{cm.q} {len(cm.rows)} {n}"]
    for row in cm.rows:
        lines.append("".join(str((row >> pos) & 1) for pos in range(2 * cm.q)))
    lines.append(" ".join(str(p) for p in cm.assignment))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# catalogs and tensor-product realizability


@dataclass(frozen=True)
class CatalogEntry:
    label: str
    vector: EntropyVector
    pattern: Pattern


@lru_cache(maxsize=None)
def _sa_ssa_rows(n: int):
    return generate_inequalities(n, ("sa", "ssa"))


class Catalog:
    """Labeled entropy vectors with their patterns, SA+SSA-checked."""

    def __init__(self, n: int):
        self.n = n
        self.entries: list[CatalogEntry] = []
        self._seen = set()

    def add(self, label: str, vector: EntropyVector) -> bool:
        """Insert unless an identical vector is already present."""
        if vector.n != self.n:
            raise ValueError("vector party count disagrees with catalog")
        if vector.coords in self._seen:
            return False
        for row in _sa_ssa_rows(self.n):
            if eval_functional(row, vector) < 0:
                raise ValueError(f"{label}: vector violates SA+SSA")
        pattern = pattern_of_vector(mia_context(self.n), vector)
        self.entries.append(CatalogEntry(label, vector, pattern))
        self._seen.add(vector.coords)
        return True

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def labels(self) -> list[str]:
        return [e.label for e in self.entries]

    def to_json(self) -> str:
        return json.dumps(
            {
                "n": self.n,
                "entries": [
                    {
                        "label": e.label,
                        "coords": [str(c) for c in e.vector.coords],
                        "pattern": e.pattern.names(),
                    }
                    for e in self.entries
                ],
            }
        )

    @classmethod
    def from_json(cls, text: str) -> "Catalog":
        data = json.loads(text)
        cat = cls(int(data["n"]))
        for entry in data["entries"]:
            vec = EntropyVector(
                cat.n, tuple(Fraction(c) for c in entry["coords"])
            )
            cat.add(entry["label"], vec)
        return cat


def standard_specs(n: int) -> tuple[GeneratorSpec, ...]:
    """One spec per family size; build_catalog expands the placements."""
    specs = [GeneratorSpec("bell", (1, 2))]
    for size in range(3, n + 2):
        specs.append(GeneratorSpec("ghz", tuple(range(1, size + 1))))
    for size in range(4, n + 2, 2):
        specs.append(GeneratorSpec("perfect", tuple(range(1, size + 1))))
    return tuple(specs)


def build_catalog(n: int, specs, extra=(), expand_placements: bool = True) -> Catalog:
    """Catalog from family specs (all party placements by default) + extras."""
    cat = Catalog(n)
    for spec in specs:
        if expand_placements:
            placements = combinations(range(1, n + 2), len(spec.parties))
        else:
            placements = [spec.parties]
        for parties in placements:
            placed = GeneratorSpec(spec.kind, tuple(parties))
            cat.add(placed.label, generator_vector(placed, n))
    for i, vec in enumerate(extra):
        if isinstance(vec, tuple):
            label, vec = vec
        else:
            label = f"extra{i}"
        cat.add(label, vec)
    return cat


@dataclass(frozen=True)
class RealizeResult:
    realizable: bool
    witness: tuple["CatalogEntry", ...] | None
    achieved: Pattern  # meet over all candidate entries; certificate if not

    def witness_labels(self) -> list[str] | None:
        return None if self.witness is None else [e.label for e in self.witness]

    def __bool__(self) -> bool:
        return self.realizable


def realize_pattern(target: Pattern, cat: Catalog) -> RealizeResult:
    """Tensor-product realizability of a pattern from catalog entries.

    Candidates are entries whose pattern contains the target; the best
    achievable pattern is their meet (vectors add under tensoring).  The
    witness is greedily minimized; the empty product (a pure product state,
    zero vector) realizes the all-members pattern.
    """
    ctx = mia_context(cat.n)
    if target.n != cat.n:
        raise ValueError("pattern and catalog party counts disagree")
    cands = [e for e in cat.entries if e.pattern.mask & target.mask == target.mask]
    meet_mask = ctx.full_mask
    for e in cands:
        meet_mask &= e.pattern.mask
    if meet_mask != target.mask:
        return RealizeResult(False, None, Pattern(cat.n, meet_mask))
    chosen = list(cands)
    for e in list(chosen):
        rest = ctx.full_mask
        for other in chosen:
            if other is not e:
                rest &= other.pattern.mask
        if rest == target.mask:
            chosen.remove(e)
    return RealizeResult(True, tuple(chosen), Pattern(cat.n, target.mask))
