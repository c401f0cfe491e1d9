import numpy as np
import pytest

from coblekit import cobleshioda as CS
from coblekit.exactmath import Cyclotomic, root_of_unity

FAST = ["cs.matrix", "cs.sextics", "cs.hilbert", "cs.planes", "cs.points", "cs.incidence",
        "cs.maschke", "cs.burkhardt_subsets"]


@pytest.mark.parametrize("name", FAST)
def test_cs_checks(check, name):
    rep = check(name)
    assert rep.passed, rep.witnesses[:3]


def test_matrix_shape_and_degrees():
    M = CS.cs_matrix()
    assert M.shape == (5, 9)
    assert all(f.is_homogeneous() and f.degree() == 2 for r in M.entries for f in r)


def test_numeric_matrix_agrees_with_symbolic():
    rng = np.random.default_rng(0)
    Z = rng.integers(0, 61, size=(5, 9))
    num = CS.cs_numeric(Z, 61)
    M = CS.cs_matrix()
    for n in range(5):
        pt = [int(x) for x in Z[n]]
        exact = [[int(f.reduce_mod(61).eval_raw(pt)) % 61 for f in r] for r in M.entries]
        assert num[n].tolist() == exact


def test_gamma_cs_identity():
    ok, bad = CS.gamma_cs_identity()
    assert ok, bad


def test_expected_series():
    h = CS.expected_hilbert(11)
    assert h[5] == 1287 and h[6] == 2999
    assert h[:4] == [1, 9, 45, 165]  # no relations below degree 4


def test_hilbert_both_primes(check):
    rep = check("cs.hilbert")
    vals = rep.to_json()["counts"]["values"]
    assert vals["61"] == vals["181"] == rep.counts["expected"]


def test_plane_and_point_counts():
    planes = CS.planes120()
    assert len(planes) == 120
    assert sum(pl.kind == 1 for pl in planes) == 12
    pts = CS.points360()
    assert [sum(q.kind == t for q in pts) for t in (1, 2, 3)] == [9, 108, 243]
    assert len({q.exps for q in pts}) == 360


def test_incidence_matrix():
    A = CS.incidence()
    assert A.shape == (120, 360)
    assert (A.sum(axis=1) == 12).all() and (A.sum(axis=0) == 4).all()


def test_plane_points_satisfy_equations_numerically():
    w = root_of_unity(61, 3)
    rng = np.random.default_rng(1)
    for pl in CS.planes120()[::7]:
        x = CS._plane_point(pl, [int(v) for v in rng.integers(1, 61, 3)], w, 61)
        for eq in pl.equations():
            s = sum(sign * pow(w, e, 61) * x[k] for k, (e, sign) in eq.items()) % 61
            assert s == 0


def test_points_have_rank_one_cs():
    F = Cyclotomic(3)
    for q in CS.points360()[::17]:
        assert CS._two_minors_vanish(CS._cs_exact(q, F), F)


def test_affine_group_orbits():
    assert len(CS.affine_group()) == 432
    assert sorted(len(o) for o in CS.four_subset_orbits()) == [54, 72]


def test_sliced_minors_match_symbolic_route():
    # vectorized product route against MultiPoly substitution and cofactor minors
    from coblekit.exactmath import GF
    from coblekit.matalg import PolyMatrix, minors
    from coblekit.polyring import MultiPoly, VarContext

    rng = np.random.default_rng(4)
    L = rng.integers(0, 61, size=(9, 3))
    fast = CS.sliced_three_minors(L, 61)
    F = GF(61)
    U = VarContext(("u1", "u2", "u3"))
    u = [MultiPoly.var(U, f"u{j}", F) for j in range(1, 4)]
    assign = {f"z{i + 1}": sum((u[j].scale(int(L[i, j])) for j in range(3)), MultiPoly.zero(U, F))
              for i in range(9)}
    M = PolyMatrix([[f.reduce_mod(61).substitute(assign, U) for f in r] for r in CS.cs_matrix().entries])
    slow = [m for _, _, m in minors(M, 3) if not m.is_zero()]
    assert sorted(f.render() for f in fast) == sorted(f.render() for f in slow)


def test_degree120(check):
    rep = check("cs.degree120")
    assert rep.passed, rep.witnesses[:3]
    assert rep.counts["degree"] == 120
    assert len(rep.counts["slice_values"]) == 3
