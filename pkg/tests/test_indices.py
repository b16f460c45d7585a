"""Bit-vector subsystem indexing, including the purifier reduction."""

import pytest

from mipatterns import indices


def test_dim_counts():
    assert [indices.dim(n) for n in (1, 2, 3, 4, 5)] == [1, 3, 7, 15, 31]


def test_masks():
    assert indices.full_mask(3) == 0b111
    assert indices.purifier_bit(3) == 0b1000
    assert indices.extended_full_mask(3) == 0b1111


def test_enumerate_subsystems_order():
    assert indices.enumerate_subsystems(2) == [1, 2, 3]
    ext = indices.enumerate_subsystems(2, extended=True)
    assert ext == [1, 2, 3, 4, 5, 6, 7]


def test_check_index_rejects_out_of_range():
    indices.check_index(7, 3)
    with pytest.raises(ValueError):
        indices.check_index(0, 3)
    with pytest.raises(ValueError):
        indices.check_index(8, 3)
    indices.check_index(8, 3, extended=True)


def test_reduce_index_complements_purifier():
    # n=2: purifier is party 3; {3} -> {1,2}, {1,3} -> {2}
    assert indices.reduce_index(0b100, 2) == 0b011
    assert indices.reduce_index(0b101, 2) == 0b010
    # purifier-free indices pass through
    assert indices.reduce_index(0b011, 2) == 0b011


def test_reduce_index_rejects_full_purified_system():
    with pytest.raises(ValueError):
        indices.reduce_index(0b111, 2)


def test_parties_roundtrip():
    for j in range(1, 32):
        assert indices.index_of_parties(indices.parties(j)) == j


def test_index_of_parties_rejects_bad_input():
    with pytest.raises(ValueError):
        indices.index_of_parties([0])
    with pytest.raises(ValueError):
        indices.index_of_parties([1, 1])
    with pytest.raises(ValueError):
        indices.index_of_parties([])


def test_names():
    assert indices.index_name(0b101) == "13"
    assert indices.subset_label(0b101) == "S_13"
    assert indices.parse_index_name("13") == 0b101
    assert indices.parse_index_name("S_13") == 0b101
    with pytest.raises(ValueError):
        indices.parse_index_name("1a")


def test_permute_index():
    # swap parties 1 and 2: {1,3} -> {2,3}
    assert indices.permute_index(0b101, (2, 1, 3)) == 0b110
    perms = list(indices.all_party_permutations(3))
    assert len(perms) == 6
    assert len(list(indices.all_party_permutations(3, extended=True))) == 24
