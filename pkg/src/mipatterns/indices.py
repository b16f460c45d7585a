"""Party and subsystem indexing.

A subsystem index is a plain int used as a membership bit-vector: bit p-1 is
set when party p belongs to the subsystem.  Parties 1..n are the fundamental
ones, party n+1 is the purifier.  Entropy coordinates are indexed by the
nonempty purifier-free subsets of [n], in ascending bit-vector order, so the
coordinate position of subset j is j-1 and the space has dimension 2**n - 1.
"""

from __future__ import annotations

from itertools import permutations as _permutations


def dim(n: int) -> int:
    """Dimension of n-party entropy space."""
    if n < 1:
        raise ValueError(f"party count must be >= 1, got {n}")
    return (1 << n) - 1


def full_mask(n: int) -> int:
    """Bit-vector of the purifier-free full system [n]."""
    return (1 << n) - 1


def purifier_bit(n: int) -> int:
    return 1 << n


def extended_full_mask(n: int) -> int:
    """Bit-vector of the purified full system [n+1]."""
    return (1 << (n + 1)) - 1


def enumerate_subsystems(n: int, extended: bool = False) -> list[int]:
    """All nonempty subsets of [n] (or [n+1] if extended), ascending."""
    top = extended_full_mask(n) if extended else full_mask(n)
    return list(range(1, top + 1))


def check_index(j: int, n: int, extended: bool = False) -> None:
    top = extended_full_mask(n) if extended else full_mask(n)
    if not 0 < j <= top:
        kind = "extended " if extended else ""
        raise ValueError(f"invalid {kind}subsystem index {j} for n={n}")


def reduce_index(j: int, n: int) -> int:
    """Replace an index containing the purifier by its complement in [n+1].

    The full purified system is rejected: its entropy is identically zero and
    callers must treat it as the zero term rather than a coordinate.
    """
    full = extended_full_mask(n)
    check_index(j, n, extended=True)
    if j == full:
        raise ValueError(f"index {{1..{n + 1}}} has no entropy coordinate")
    if j & purifier_bit(n):
        return full ^ j
    return j


def parties(j: int) -> tuple[int, ...]:
    """Ascending party numbers in a bit-vector index."""
    out = []
    p = 1
    while j:
        if j & 1:
            out.append(p)
        j >>= 1
        p += 1
    return tuple(out)


def index_of_parties(ps) -> int:
    j = 0
    for p in ps:
        if p < 1:
            raise ValueError(f"party numbers start at 1, got {p}")
        b = 1 << (p - 1)
        if j & b:
            raise ValueError(f"repeated party {p}")
        j |= b
    if j == 0:
        raise ValueError("empty subsystem index")
    return j


def index_name(j: int) -> str:
    """Concatenated party digits, e.g. {1,3} -> '13'."""
    return "".join(str(p) for p in parties(j))


def subset_label(j: int) -> str:
    """Column label for an entropy coordinate, e.g. 'S_13'."""
    return "S_" + index_name(j)


def parse_index_name(text: str) -> int:
    digits = text.strip()
    if digits.startswith("S_"):
        digits = digits[2:]
    if not digits.isdigit():
        raise ValueError(f"cannot parse subsystem index from {text!r}")
    return index_of_parties(int(ch) for ch in digits)


def permute_index(j: int, perm: tuple[int, ...]) -> int:
    """Apply a party relabeling; perm[p-1] is the image of party p."""
    out = 0
    for p in parties(j):
        out |= 1 << (perm[p - 1] - 1)
    return out


def as_extended_permutation(perm, n: int) -> tuple[int, ...]:
    """Normalize to a relabeling of [n+1], fixing the purifier if absent.

    Length-n input permutes the visible parties only; length n+1 may move
    the purifier, which is a genuine symmetry of the purified system.
    """
    perm = tuple(int(p) for p in perm)
    if len(perm) == n and sorted(perm) == list(range(1, n + 1)):
        return perm + (n + 1,)
    if len(perm) == n + 1 and sorted(perm) == list(range(1, n + 2)):
        return perm
    raise ValueError(f"need a permutation of 1..{n} or 1..{n + 1}, got {perm}")


def all_party_permutations(n: int, extended: bool = False):
    """All relabelings of [n] (or of [n+1], purifier included)."""
    m = n + 1 if extended else n
    return _permutations(range(1, m + 1))
