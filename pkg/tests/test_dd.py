"""Double description against the combinatorial brute-force oracle."""

import json
from fractions import Fraction

import numpy as np
import pytest

from mipatterns import dd
from mipatterns.dd import (
    Cone,
    NonPointedConeError,
    brute_force_rays,
    build_cone,
    extreme_rays,
    minimal_face_containing,
)
from mipatterns.indices import all_party_permutations
from mipatterns.vectors import permute_vector, EntropyVector


def cone_from_rows(rows):
    return Cone(0, rows, (), dimension=len(rows[0]))


def test_orthant():
    cone = cone_from_rows([(1, 0, 0), (0, 1, 0), (0, 0, 1)])
    want = ((0, 0, 1), (0, 1, 0), (1, 0, 0))
    assert extreme_rays(cone) == want
    assert brute_force_rays(cone) == want


def test_redundant_rows_do_not_change_rays():
    base = [(1, 0), (0, 1)]
    more = base + [(1, 1), (2, 1), (1, 3)]
    assert extreme_rays(cone_from_rows(more)) == extreme_rays(cone_from_rows(base))


def test_degenerate_cone_many_tight():
    # square cone in 3d: four facets through two shared rays
    rows = [(1, 0, 1), (-1, 0, 1), (0, 1, 1), (0, -1, 1)]
    cone = cone_from_rows(rows)
    got = extreme_rays(cone)
    assert got == brute_force_rays(cone)
    assert len(got) == 4


def test_non_pointed_cone_raises():
    with pytest.raises(NonPointedConeError) as exc:
        extreme_rays(cone_from_rows([(1, 0, 0), (0, 1, 0)]))
    basis = exc.value.lineality_basis
    assert basis and all(v[0] == 0 and v[1] == 0 for v in basis)


def test_lower_dimensional_pointed_cone():
    # x = 0 plane intersected with y,z >= 0: pointed but not full dim
    rows = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, 0, 1)]
    cone = cone_from_rows(rows)
    got = extreme_rays(cone)
    assert got == brute_force_rays(cone)
    assert got == ((0, 0, 1), (0, 1, 0))


@pytest.mark.parametrize(
    "n,fams",
    [
        (2, ("sa",)),
        (2, ("sa", "ssa")),
        (3, ("sa",)),
        (3, ("sa", "ssa")),
        (3, ("sa", "ssa", "mmi")),
        (3, ("sa", "ssa", "ingleton")),
        (3, ("sa", "mono")),
    ],
)
def test_entropy_cones_match_brute_force(n, fams):
    cone = build_cone(n, list(fams))
    assert extreme_rays(cone) == brute_force_rays(cone)


@pytest.mark.parametrize("policy", dd.INSERT_POLICIES)
def test_policies_agree(policy):
    cone = build_cone(3, ["sa", "ssa"])
    assert extreme_rays(cone, policy=policy) == brute_force_rays(cone)


def test_expected_n3_ray_set():
    # frozen: 6 Bell pairs, the four-party GHZ, a four-party perfect state
    got = extreme_rays(build_cone(3, ["sa", "ssa"]))
    assert got == (
        (0, 0, 0, 1, 1, 1, 1),
        (0, 1, 1, 0, 0, 1, 1),
        (0, 1, 1, 1, 1, 0, 0),
        (1, 0, 1, 0, 1, 0, 1),
        (1, 0, 1, 1, 0, 1, 0),
        (1, 1, 0, 0, 1, 1, 0),
        (1, 1, 1, 1, 1, 1, 1),
        (1, 1, 2, 1, 2, 2, 1),
    )


def test_ray_set_permutation_equivariant():
    rays = set(extreme_rays(build_cone(3, ["sa", "ssa"])))
    for perm in all_party_permutations(3, extended=True):
        imgs = {
            tuple(int(x) for x in permute_vector(EntropyVector(3, r), perm).coords)
            for r in rays
        }
        assert imgs == rays


def test_cache_roundtrip(tmp_path):
    cone = build_cone(3, ["sa", "ssa"])
    first = extreme_rays(cone, cache_dir=str(tmp_path))
    files = list(tmp_path.glob("rays-*.json"))
    assert len(files) == 1
    # poison the in-memory copy to prove the second call reads the file
    again = extreme_rays(build_cone(3, ["sa", "ssa"]), cache_dir=str(tmp_path))
    assert again == first
    data = json.loads(files[0].read_text())
    assert [tuple(r) for r in data["rays"]] == list(first)


def test_checkpoint_resume(tmp_path):
    cone = build_cone(3, ["sa", "ssa"])
    calls = []

    def crash_after_three(msg):
        calls.append(msg)
        if len(calls) == 3:
            raise KeyboardInterrupt

    with pytest.raises(KeyboardInterrupt):
        extreme_rays(
            cone,
            cache_dir=str(tmp_path),
            progress=crash_after_three,
            checkpoint_seconds=0.0,
        )
    assert list(tmp_path.glob("ckpt-*.json"))
    resumed = []
    got = extreme_rays(
        build_cone(3, ["sa", "ssa"]),
        cache_dir=str(tmp_path),
        progress=resumed.append,
        checkpoint_seconds=0.0,
    )
    assert any("resumed" in m for m in resumed)
    assert got == extreme_rays(build_cone(3, ["sa", "ssa"]))
    # checkpoint is cleaned up once the run completes
    assert not list(tmp_path.glob("ckpt-*.json"))


def test_force_recompute_overwrites_cache(tmp_path):
    cone = build_cone(2, ["sa"])
    extreme_rays(cone, cache_dir=str(tmp_path))
    path = next(tmp_path.glob("rays-*.json"))
    path.write_text(json.dumps({"rays": [[9, 9, 9]]}))
    poisoned = extreme_rays(build_cone(2, ["sa"]), cache_dir=str(tmp_path))
    assert poisoned == ((9, 9, 9),)
    fixed = extreme_rays(
        build_cone(2, ["sa"]), cache_dir=str(tmp_path), force_recompute=True
    )
    assert fixed == ((0, 1, 1), (1, 0, 1), (1, 1, 0))


def test_env_var_cache(tmp_path, monkeypatch):
    monkeypatch.setenv(dd.CACHE_ENV, str(tmp_path))
    extreme_rays(build_cone(2, ["sa"]))
    assert list(tmp_path.glob("rays-*.json"))


def test_tight_masks():
    cone = build_cone(2, ["sa"])
    rays = extreme_rays(cone)
    masks = cone.tight_masks()
    a = np.array(cone.hrep)
    for ray, mask in zip(rays, masks):
        dots = a @ np.array(ray)
        want = sum(1 << i for i, v in enumerate(dots) if v == 0)
        assert mask == want


def test_minimal_face():
    cone = build_cone(2, ["sa"])
    rays = extreme_rays(cone)
    face = minimal_face_containing(cone, [0])
    assert face.generators == (0,)
    # an extreme ray saturates all but one of the three instance planes
    assert len(face.tight) == 2
    whole = minimal_face_containing(cone, range(len(rays)))
    assert whole.generators == tuple(range(len(rays)))
    assert whole.tight == ()
    with pytest.raises(ValueError):
        minimal_face_containing(cone, [])
    with pytest.raises(ValueError):
        minimal_face_containing(cone, [99])


def test_brute_force_guard():
    rng = np.random.default_rng(5)
    rows = [tuple(int(x) for x in rng.integers(-2, 3, size=9)) for _ in range(40)]
    with pytest.raises(ValueError):
        brute_force_rays(cone_from_rows(rows), limit=10)


def test_matrix_io_roundtrip():
    rays = extreme_rays(build_cone(2, ["sa"]))
    text = dd.write_matrix_text(rays)
    assert text.splitlines()[0] == "3 3"
    assert dd.read_matrix_text(text) == list(rays)
    blob = dd.write_matrix_json(rays)
    assert dd.read_matrix_json(blob) == list(rays)
    # fractions survive both formats
    frac_rows = [(Fraction(1, 2), Fraction(-3, 4))]
    assert dd.read_matrix_text(dd.write_matrix_text(frac_rows)) == frac_rows
    assert dd.read_matrix_json(dd.write_matrix_json(frac_rows)) == frac_rows


def test_read_matrix_text_rejects_malformed():
    with pytest.raises(ValueError):
        dd.read_matrix_text("")
    with pytest.raises(ValueError):
        dd.read_matrix_text("2 2\n1 0\n")
    with pytest.raises(ValueError):
        dd.read_matrix_text("2 1\n1 0 0\n")
