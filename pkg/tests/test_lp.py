"""Exact feasibility of equalities plus strict/nonstrict inequalities."""

from fractions import Fraction

import pytest

from mipatterns.lp import lp_feasible
from mipatterns.vectors import eval_functional


def check_witness(w, eqs=(), nonstrict=(), strict=()):
    for f in eqs:
        assert eval_functional(f, w) == 0
    for f in nonstrict:
        assert eval_functional(f, w) >= 0
    for f in strict:
        assert eval_functional(f, w) > 0


def test_spec_example_two_equalities_one_strict():
    # n=2 entropy space: S on the I(1:3) and I(2:3) planes with I(1:2) > 0
    eqs = [(1, -1, 1), (-1, 1, 1)]
    strict = [(1, 1, -1)]
    w = lp_feasible(3, eqs=eqs, nonstrict=[], strict=strict)
    assert w is not None
    check_witness(w, eqs=eqs, strict=strict)
    # the joint kernel is spanned by (1,1,0), so the witness is a positive
    # multiple of it
    assert w[2] == 0 and w[0] == w[1] > 0


def test_contradictory_strict_pair_infeasible():
    f = (1, 2, -1)
    neg = tuple(-x for x in f)
    assert lp_feasible(3, eqs=[], nonstrict=[], strict=[f, neg]) is None


def test_strict_row_in_equality_span_infeasible():
    # equalities force the strict functional to vanish identically
    assert lp_feasible(2, eqs=[(1, 0), (0, 1)], nonstrict=[], strict=[(1, 1)]) is None


def test_no_strict_rows_returns_zero():
    w = lp_feasible(2, eqs=[(1, -1)], nonstrict=[(1, 0)], strict=[])
    assert w == (Fraction(0), Fraction(0))


def test_nonstrict_constraints_respected():
    w = lp_feasible(2, eqs=[], nonstrict=[(-1, 1)], strict=[(1, 0)])
    assert w is not None
    check_witness(w, nonstrict=[(-1, 1)], strict=[(1, 0)])


def test_strict_against_opposing_nonstrict():
    # x >= 0, -x >= 0 pin x = 0, so x > 0 cannot hold
    assert (
        lp_feasible(1, eqs=[], nonstrict=[(1,), (-1,)], strict=[(1,)]) is None
    )


def test_multiple_strict_rows():
    strict = [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -1)]
    w = lp_feasible(3, eqs=[], nonstrict=[], strict=strict)
    assert w is not None
    check_witness(w, strict=strict)


def test_fractional_data():
    eqs = [(Fraction(1, 2), Fraction(-1, 3), 0)]
    strict = [(0, 0, Fraction(2, 7))]
    w = lp_feasible(3, eqs=eqs, nonstrict=[], strict=strict)
    assert w is not None
    check_witness(w, eqs=eqs, strict=strict)


def test_dimension_validation():
    with pytest.raises(ValueError):
        lp_feasible(3, eqs=[(1, 0)], nonstrict=[], strict=[])


def test_interior_point_of_entropy_cone():
    # strictly positive mutual information everywhere is achievable at n=2
    from mipatterns.inequalities import sa_normals

    rows = list(sa_normals(2))
    w = lp_feasible(3, eqs=[], nonstrict=[], strict=rows)
    assert w is not None
    check_witness(w, strict=rows)


def test_face_interior_matches_pattern():
    # vanishing exactly on I(1:2) at n=2: equality there, strict elsewhere
    from mipatterns.inequalities import sa_normals

    rows = list(sa_normals(2))
    for hold in range(3):
        eqs = [rows[hold]]
        strict = [r for i, r in enumerate(rows) if i != hold]
        w = lp_feasible(3, eqs=eqs, nonstrict=[], strict=strict)
        assert w is not None
        check_witness(w, eqs=eqs, strict=strict)
