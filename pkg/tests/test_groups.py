import functools

import pytest
from hypothesis import given, settings, strategies as st

from coblekit import groups as G
from coblekit.exactmath import Cyclotomic, QQ


def test_heisenberg_commutators():
    h5 = G.heisenberg5()
    k = h5.commutator("sigma", "tau").scalar_exponent()
    assert k is not None and k % 5
    h = G.heisenberg33()
    for a, b in (("sigma1", "tau1"), ("sigma2", "tau2")):
        k = h.commutator(a, b).scalar_exponent()
        assert k in (1, 2)
    assert h.commutator("sigma1", "tau2").scalar_exponent() == 0
    assert len(h.elements()) == 243


def test_monomial_inverse_and_power():
    s = G.heisenberg33().gen("sigma1")
    assert s.compose(s.inverse()) == G.MonomialMap.identity(9, 3)
    assert s.power(3) == G.MonomialMap.identity(9, 3)


def test_iota_is_an_involution():
    io = G.iota33()
    assert io.compose(io) == G.MonomialMap.identity(9, 3)


def test_cartan_invariants(check):
    rep = check("groups.heisenberg")
    assert rep.passed, rep.witnesses
    assert rep.counts["wedge3 invariants"] == 4
    assert rep.counts["quintic invariants"] == 2


def test_trivial_invariants_are_everything():
    basis, _ = G.heisenberg_invariants("trivial")
    assert len(basis) == 3
    with pytest.raises(KeyError):
        G.heisenberg_invariants("nosuch")


def test_g16(check):
    rep = check("groups.g16")
    assert rep.passed
    assert rep.counts["order"] == 600 and rep.counts["lines"] == 12


def test_trivial_group():
    F = Cyclotomic(3)
    eye = [[F.one if i == j else F.zero for j in range(3)] for i in range(3)]
    T = G.enumerate_group(G.MatrixGroupGen(F, [eye]))
    assert len(T) == 1 and G.reflections(T) == []


def test_cap_exceeded():
    with pytest.raises(G.CapExceeded):
        G.enumerate_group(G.g16_generators(), cap=100)


def test_singular_generator_rejected():
    F = Cyclotomic(3)
    with pytest.raises(ValueError):
        G.MatrixGroupGen(F, [[[F.one, F.one], [F.one, F.one]]])


def test_g32_counts(check):
    rep = check("groups.g32")
    assert rep.passed, rep.witnesses
    assert rep.counts["order"] == 155520
    assert rep.counts["reflections"] == 80
    assert rep.counts["reflection_orders"] == [3]
    assert rep.counts["hyperplanes"] == 40
    assert rep.counts["forms dividing Delta"] == 40


def test_orbit_table(check):
    rep = check("groups.orbits")
    assert rep.passed, rep.witnesses
    sizes = sorted(s for _, s, _ in rep.counts["table"])
    assert sizes == [40, 40, 90, 240, 360]
    stabs = {(c, s): st_ for c, s, st_ in rep.counts["table"]}
    assert stabs == {(1, 40): 3, (2, 240): 9, (2, 90): 24, (3, 360): 72, (3, 40): 648}


def test_pointwise_stabilizers_divide_order(check):
    rep = check("groups.orbits")
    for _, size, stab in rep.counts["table"]:
        assert 155520 % stab == 0 and 155520 % size == 0


def test_macdonald(check):
    rep = check("groups.macdonald")
    assert rep.passed, rep.witnesses
    assert rep.counts["projective_order"] == 25920
    assert rep.counts["orbit of [0:0:0:0:1]"] == 160


F3 = Cyclotomic(3)
cyc = st.builds(lambda a, b: F3.add(F3.from_int(a), F3.mul(F3.from_int(b), F3.gen())),
                st.integers(-3, 3), st.integers(-3, 3))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(cyc, min_size=4, max_size=4), min_size=1, max_size=3),
       st.lists(cyc, min_size=3, max_size=3))
def test_flat_canonical_form_ignores_row_operations(rows, mults):
    # adding multiples of other rows and rescaling by a unit does not change the flat
    base = G.canonical_rows(rows, F3)
    mixed = [list(r) for r in rows]
    for i in range(1, len(mixed)):
        mixed[i] = [F3.add(x, F3.mul(mults[i - 1], y)) for x, y in zip(mixed[i], mixed[0])]
    unit = F3.gen()
    mixed[0] = [F3.mul(unit, x) for x in mixed[0]]
    assert G.canonical_rows(mixed, F3) == base


@functools.lru_cache(maxsize=None)
def _g32_forms():
    return tuple(G.hyperplanes(G.g32()))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 155519))
def test_g32_element_preserves_arrangement(k):
    g = G.g32()
    forms = _g32_forms()
    m = G._inverse(g.exact(k), g.field)
    # every element permutes the reflection hyperplanes
    imgs = {G.act_on_flat(G.Flat((h,)), m, g.field).equations[0] for h in forms}
    assert imgs == set(forms)
