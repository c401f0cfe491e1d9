from fractions import Fraction
import random

import pytest
from hypothesis import given, settings, strategies as st

from coblekit.exactmath import QQ, GF, Cyclotomic
from coblekit.polyring import (
    ContextMismatch,
    MultiPoly,
    PolyRing,
    UnknownVariable,
    VarContext,
    divmod_leading,
    parse_poly,
    poly_arith,
)

CTX = VarContext.of("x y z")
R = PolyRing(CTX)
x, y, z = R.vars()


def test_context_ranges():
    assert VarContext.of("c1..c4", "z1..z9").names[:5] == ("c1", "c2", "c3", "c4", "z1")


def test_difference_of_squares():
    assert poly_arith(x + y, x - y, "mul") == x**2 - y**2


def test_zero_product_and_identity():
    assert (0 * (x + y)).terms == {}
    f = x**3 + y**3 + z**3
    assert f + 0 == f


def test_differentiate():
    assert (x**3).differentiate("x") == 3 * x**2
    assert (x * y).differentiate("z").is_zero()
    with pytest.raises(UnknownVariable):
        x.differentiate("q")


def test_homogeneous_component():
    assert (x**2 + x).homogeneous_component(2) == x**2
    assert (x**2 + x).homogeneous_component(5).is_zero()


def test_substitute_identity():
    f = x**2 * y - 3 * z
    assert f.substitute({"x": x, "y": y, "z": z}) == f


def test_render_order_and_parse():
    f = 3 * x * y**2 - z**3 + Fraction(1, 2) * x**3 + 7
    s = f.render()
    assert parse_poly(s, CTX) == f
    assert s.startswith("1/2*x^3")


def test_render_cyclotomic_coefficients():
    F = Cyclotomic(3)
    w = F.gen()
    Rw = PolyRing(CTX, F)
    f = Rw["x"] * w + Rw["y"] * 2
    s = f.render()
    assert s == "(w)*x+2*y"
    g = Rw["x"] * (w + 1)
    assert g.render() == "(1+w)*x"
    assert parse_poly(g.render(), CTX, F) == g
    assert parse_poly(f.render(), CTX, F) == f


def test_json_roundtrip():
    f = x**2 - Fraction(2, 3) * y * z
    assert MultiPoly.from_json(f.to_json(), CTX) == f


def test_context_mismatch():
    other = PolyRing(VarContext.of("a b"))
    with pytest.raises(ContextMismatch):
        x + other["a"]


def test_evaluate():
    assert (x * y + z).evaluate([2, 3, 4]).value == 10
    with pytest.raises(ContextMismatch):
        x.evaluate([1, 2])


def test_exact_division():
    f = (x + y) * (x**2 - z * y)
    assert f.divide_exact(x + y) == x**2 - z * y
    q, r = divmod_leading(x**2 + 1, x)
    assert q == x and r == 1


def test_reduce_mod():
    F = Cyclotomic(3)
    Rw = PolyRing(CTX, F)
    f = Rw["x"] * F.gen()
    assert f.reduce_mod(61).terms == {(1, 0, 0): 13}


def rand_poly(rng, field=QQ, nterms=4, maxdeg=3):
    terms = {}
    for _ in range(nterms):
        e = tuple(rng.randint(0, maxdeg) for _ in range(3))
        terms[e] = rng.randint(-5, 5)
    return MultiPoly(CTX, field, terms)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_leibniz(seed):
    rng = random.Random(seed)
    f, g = rand_poly(rng), rand_poly(rng)
    for v in "xyz":
        assert (f * g).differentiate(v) == f.differentiate(v) * g + f * g.differentiate(v)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**9))
def test_substitute_then_evaluate(seed):
    rng = random.Random(seed)
    F = GF(61)
    Rp = PolyRing(CTX, F)
    f = rand_poly(rng, F)
    a = {v: rand_poly(rng, F, 3, 2) for v in "xyz"}
    pt = [rng.randrange(61) for _ in range(3)]
    inner = [a[v].eval_raw(pt) for v in "xyz"]
    assert f.substitute(a).eval_raw(pt) == f.eval_raw(inner)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 10**9))
def test_parse_render_roundtrip(seed):
    rng = random.Random(seed)
    f = rand_poly(rng) * Fraction(rng.randint(1, 5), rng.randint(1, 5))
    assert parse_poly(f.render(), CTX) == f
    F = Cyclotomic(5)
    g = MultiPoly(CTX, F, {e: F.random(rng) for e in [(1, 0, 2), (0, 3, 0), (0, 0, 0)]})
    assert parse_poly(g.render(), CTX, F) == g
