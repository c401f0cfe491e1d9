import random

import pytest
from hypothesis import given, settings, strategies as st

from coblekit.exactmath import GF
from coblekit.idealcalc import (
    GradedIdeal,
    InhomogeneousInput,
    NotMemberInDegree,
    hilbert_value,
    linear_span_dim,
    member_in_degree,
    series_coefficients,
    slice_degree,
)
from coblekit.polyring import MultiPoly, PolyRing, VarContext

R2 = PolyRing(VarContext.of("x y"))


def test_not_member():
    x, y = R2.vars()
    res = member_in_degree(x**2, GradedIdeal([y], R2.ctx), 61)
    assert isinstance(res, NotMemberInDegree) and not res


def test_member_certificate():
    x, y = R2.vars()
    I = GradedIdeal([x**2 - y**2, x * y], R2.ctx)
    cert = member_in_degree(x**3 - x * y**2 + 5 * x * x * y, I, 61)
    assert cert and cert.verify()


def test_one_variable_hilbert():
    R1 = PolyRing(VarContext.of("x"))
    assert hilbert_value(GradedIdeal([R1["x"]], R1.ctx), 3, 61) == 0


def test_inhomogeneous_rejected():
    x, y = R2.vars()
    with pytest.raises(InhomogeneousInput):
        member_in_degree(x + y**2, GradedIdeal([x], R2.ctx), 61)
    with pytest.raises(InhomogeneousInput):
        GradedIdeal([x + y**2], R2.ctx)


def test_span_examples():
    x, y = R2.vars()
    assert linear_span_dim([x, 2 * x]) == 1
    assert linear_span_dim([x, 2 * x], p=61) == 1


def test_series():
    assert series_coefficients([1], 2, 3) == [1, 2, 3, 4]


def test_twisted_cubic_degree():
    R = PolyRing(VarContext.of("a b c d"))
    a, b, c, d = R.vars()
    I = GradedIdeal([a * c - b * b, b * d - c * c, a * d - b * c], R.ctx)
    res = slice_degree(I, 1, 61, seed=3)
    assert res.value == 3 and res.agree
    # the curve itself: H(d) = 3d + 1
    assert [hilbert_value(I, k, 61) for k in range(1, 5)] == [4, 7, 10, 13]


def test_plane_curve_degree():
    R = PolyRing(VarContext.of("x y z"))
    x, y, z = R.vars()
    I = GradedIdeal([x**4 + y**4 + z**4 + x * y * z * z], R.ctx)
    assert slice_degree(I, 1, 61, seed=1).value == 4


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**9))
def test_below_generator_degree(seed):
    rng = random.Random(seed)
    R = PolyRing(VarContext.of("x y z"))
    gens = []
    for _ in range(3):
        e = [rng.randint(0, 3) for _ in range(2)]
        gens.append(MultiPoly(R.ctx, R.field, {(e[0], e[1], 3 - e[0] - e[1]) if sum(e) <= 3 else (3, 0, 0): rng.randint(1, 5), (0, 3, 0): 1}))
    I = GradedIdeal(gens, R.ctx)
    for d in range(3):
        assert hilbert_value(I, d, 61) == (d + 2) * (d + 1) // 2


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**9))
def test_certificates_reverify(seed):
    rng = random.Random(seed)
    R = PolyRing(VarContext.of("x y z"), GF(61))
    x, y, z = R.vars()
    pool = [x * x, y * y, z * z, x * y, y * z, x * z]
    gens = [sum((m.scale(rng.randrange(61)) for m in pool), R.zero()) for _ in range(3)]
    gens = [g for g in gens if not g.is_zero()]
    if not gens:
        return
    I = GradedIdeal(gens, R.ctx)
    target = R.zero()
    for g in gens:
        target = target + g * (x.scale(rng.randrange(61)) + z.scale(rng.randrange(61)))
    if target.is_zero():
        return
    cert = member_in_degree(target, I, 61)
    assert cert and cert.verify()
