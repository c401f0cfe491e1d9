import random

import numpy as np
import pytest

from coblekit import abelian33 as A
from coblekit.exactmath import GF
from coblekit.oracle import DegenerateParameters, sample_surface_points

FAST = ["ab33.phi", "ab33.coble", "ab33.jacobian", "ab33.burkhardt", "ab33.disc", "ab33.identity",
        "ab33.psi", "ab33.multker", "ab33.indep93", "ab33.heisenberg"]
SLOW = ["ab33.family2", "ab33.family3", "ab33.family4", "ab33.family5", "ab33.degree18",
        "ab33.torsion", "ab33.fano", "ab33.smooth"]


@pytest.mark.parametrize("name", FAST + SLOW)
def test_ab33_checks(check, name):
    rep = check(name)
    assert rep.passed, rep.witnesses[:3]


def test_cvector_parse():
    c = A.CVector.parse("(1, 2, 4, 8)")
    assert [int(x) for x in c.as_tuple()] == [1, 2, 4, 8]
    with pytest.raises(ValueError):
        A.CVector.parse("1,2,3")


def test_discriminant_zero_and_nonzero():
    assert A.discriminant(A.CVector(1, 2, 4, 8))[0] != 0
    assert A.discriminant(A.CVector(1, 1, 2, 3))[0] == 0
    assert sum(f.degree(A.CN) for f in A.discriminant_factors()) == 40


def test_phi_is_skew_and_linear():
    M = A.phi_matrix(A.CVector(1, 2, 4, 8))
    assert M.shape == (9, 9)
    assert all(M[i, j] == -M[j, i] for i in range(9) for j in range(9))
    assert all(f.is_zero() or f.is_homogeneous() and f.degree() == 1 for r in M.entries for f in r)


def test_coble_cubic_specializes_to_a_cubic():
    f = A.coble_cubic(A.CVector(1, 2, 4, 8))
    assert f.is_homogeneous() and f.degree() == 3


def test_burkhardt_form_vanishes_on_random_gammas():
    rng = random.Random(1)
    F = GF(61)
    for _ in range(10):
        c = A.CVector(*(rng.randrange(61) for _ in range(4)), field=F)
        g = A.gamma_values(c)
        g1, g2, g3, g4, g5 = (int(x) for x in g)
        assert (g1 * (g1**3 + g2**3 + g3**3 + g4**3 + g5**3) + 3 * g2 * g3 * g4 * g5) % 61 == 0


def test_indep93_count(check):
    rep = check("ab33.indep93")
    assert rep.counts["total"] == 93


def test_family3_graph(check):
    rep = check("ab33.family3")
    assert rep.counts["components"] == 9
    assert rep.counts["automorphisms"] == 72
    assert rep.counts["degrees"] == [4] * 9
    assert rep.counts["intersection_kinds"].get("point") == 18


def test_torsion_lengths(check):
    rep = check("ab33.torsion")
    assert rep.counts["P_M"] == 6 and rep.counts["P_B"] == 10
    hv = rep.counts["curve_hilbert"]
    assert all(hv[d] == 6 * d - 1 for d in (3, 4, 5, 6))


def test_degree18(check):
    assert check("ab33.degree18").counts["degree"] == 18


def test_torsion_rejects_degenerate():
    with pytest.raises(A.InadmissibleParameters):
        A.torsion_slices(c=(1, 1, 2, 3))


def test_sampled_points_lie_on_surface():
    Z = sample_surface_points((1, 2, 4, 8), 61, sources=("orbit",))
    assert len(Z) == 81
    on, ranks = A.jacobian_ranks((1, 2, 4, 8), Z, 61)
    assert on.all() and (ranks == 6).all()


def test_sampling_refuses_degenerate_parameters():
    with pytest.raises(DegenerateParameters):
        sample_surface_points((1, 1, 2, 3), 61, sources=("orbit",))


def test_heisenberg_orbit_size():
    z = A.identity_numeric((1, 2, 4, 8), 61)
    assert len(A.heisenberg_orbit(z, 61)) == 81


def test_random_admissible_c_avoids_walls():
    rng = random.Random(3)
    for _ in range(5):
        c = A.random_admissible_c(61, rng)
        assert A.discriminant(A.CVector(*c, field=GF(61)))[0] != 0
