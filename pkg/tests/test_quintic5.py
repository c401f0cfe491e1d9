import numpy as np
import pytest

from coblekit import quintic5 as Q
from coblekit.exactmath import GF
from coblekit.idealcalc import member_in_degree


def test_psi_is_skew_and_specializes():
    M = Q.psi_matrix(Q.QuinticParams(1, 2))
    assert M.shape == (5, 5)
    assert all(M[i, i].is_zero() for i in range(5))


def test_zero_parameters_rejected():
    with pytest.raises(ValueError):
        Q.QuinticParams(0, 0)


def test_pfaffian_signs_alternate():
    assert Q.pfaffian_signs() == [(-1) ** i for i in range(1, 6)]


def test_sigma_cycles_quadrics():
    qs = Q.pfaffian_quadrics()
    f = qs[0]
    for _ in range(5):
        f = Q.sigma_shift(f)
    assert f == qs[0]


def test_row_dependence_printed():
    assert Q.row_dependence(1, 2) == Q.printed_v12()
    assert all(Q.kernel_check(i, j) for i in range(1, 6) for j in range(i + 1, 6))


def test_certificate_reverifies():
    # the returned combination reproduces the target exactly
    I = Q.bhm_minors_ideal()
    v = Q.row_dependence(2, 4)
    target = v[0] ** 2 + v[1] * v[2]
    cert = member_in_degree(target, I, 61)
    assert cert and cert.verify()


def test_singular_ratios_count():
    # 0, infinity and ten golden-ratio multiples of fifth roots of unity
    assert len(Q.singular_ratios()) == 12
    assert len(Q.singular_ratios_mod(61)) == 12  # 61 = 1 mod 5, all roots split


@pytest.mark.parametrize("name", [
    "quintic.pfaffians", "quintic.bhm", "quintic.special", "quintic.lines25", "quintic.section",
    "quintic.cusp", "quintic.points30", "quintic.hilbert", "quintic.degree15",
])
def test_quintic_checks(check, name):
    rep = check(name)
    assert rep.passed, rep.witnesses


def test_degree15_value(check):
    assert check("quintic.degree15").counts["value"] == 15


def test_curve_points_are_smooth_for_one_parameter():
    qs, pts = Q.curve_points(1, 2, 61)
    assert len(pts) > 0
    assert all(Q.jacobian_rank_at(qs, list(x), 61) == 3 for x in pts[:20])


@pytest.mark.parametrize("c", [(1, 2), (5, 1), (17, 40)])
def test_solved_enumeration_matches_full_scan(c):
    _, a = Q.curve_points_solved(*c, 61)
    _, b = Q.curve_points(*c, 61)
    assert np.array_equal(a, b)


def test_batched_ranks_match_pointwise():
    qs, pts = Q.curve_points_solved(3, 4, 61)
    got = Q.jacobian_ranks(qs, pts, 61)
    assert [int(r) for r in got[:25]] == [Q.jacobian_rank_at(qs, list(x), 61) for x in pts[:25]]


def test_singular_parameter_has_rank_drop():
    r = next(x for x in Q.singular_ratios_mod(61) if x not in (None, 0))
    qs, pts = Q.curve_points_solved(r, 1, 61)
    assert (Q.jacobian_ranks(qs, pts, 61) < 3).any()


def test_smoothness(check):
    rep = check("quintic.smoothness")
    assert rep.passed, rep.witnesses[:3]
    assert rep.counts["samples"] == 50
