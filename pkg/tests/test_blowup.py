import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from toricflips.blowup import (
    BadBlowupSpec,
    NotMaximal,
    WeightedBlowupSpec,
    chart_weights,
    exceptional_fiber,
    maximal_cones,
    subdivision_report,
    weighted_star_subdivision,
)
from toricflips.lattice import Cone, Fan, cone_index


def by_generator(cw):
    return dict(zip(cw.generators, cw.weights))


def test_spec_validation():
    with pytest.raises(BadBlowupSpec):
        WeightedBlowupSpec.from_weights(0, (1, 1))
    with pytest.raises(BadBlowupSpec):
        WeightedBlowupSpec.from_weights(2, (0, 1))
    with pytest.raises(BadBlowupSpec):
        WeightedBlowupSpec.from_weights(2, (2, 1))
    with pytest.raises(BadBlowupSpec):
        WeightedBlowupSpec(4, 2, (1, 0, 1, 1))
    with pytest.raises(BadBlowupSpec):
        WeightedBlowupSpec(4, 2, (0, 0, 1))
    assert WeightedBlowupSpec.from_weights(1, (1, 1), legacy=True).n == 3


def test_classical_blowup_of_the_plane():
    spec = WeightedBlowupSpec.from_weights(0, (1, 1), legacy=True)
    fan = weighted_star_subdivision(spec, samples=50)
    assert [c.generators for c in fan.maximal_cones()] == [((0, 1), (1, 1)), ((1, 0), (1, 1))]
    assert all(cone_index(c) == 1 for c in fan.maximal_cones())
    assert exceptional_fiber(spec).is_straight_projective_space


def test_weighted_blowup_of_the_plane():
    spec = WeightedBlowupSpec.from_weights(0, (1, 2), legacy=True)
    idx = {c.generators: cone_index(c) for c in weighted_star_subdivision(spec).maximal_cones()}
    assert idx == {((1, 0), (1, 2)): 2, ((0, 1), (1, 2)): 1}


def test_in_contract_example():
    spec = WeightedBlowupSpec.from_weights(2, (1, 2))
    assert spec.omega == (0, 0, 1, 2)
    fan = weighted_star_subdivision(spec, samples=50)
    cones = fan.maximal_cones()
    assert len(cones) == 2
    assert all((1, 0, 0, 0) in c.generators and (0, 1, 0, 0) in c.generators for c in cones)
    assert sorted(cone_index(c) for c in cones) == [1, 2]
    assert subdivision_report(spec, samples=20).ok


def test_exceptional_fibers():
    assert exceptional_fiber(WeightedBlowupSpec(4, 2, (0, 0, 1, 1))).is_straight_projective_space
    f = exceptional_fiber(WeightedBlowupSpec(4, 2, (0, 0, 1, 2)))
    assert f.weights == (1, 2) and not f.is_straight_projective_space
    g = exceptional_fiber(WeightedBlowupSpec(5, 2, (0, 0, 2, 3, 5)))
    assert g.weights == (2, 3, 5) and g.gcd == 1
    assert exceptional_fiber(WeightedBlowupSpec(4, 2, (0, 0, 2, 2))).gcd == 2


def test_chart_weights_examples():
    plain = Fan.from_maximal([Cone([(1, 0), (0, 1)], 2)])
    cw = chart_weights(plain, (-2, 1), Cone([(1, 0), (0, 1)], 2))
    assert by_generator(cw) == {(1, 0): -2, (0, 1): 1}
    fan = weighted_star_subdivision(WeightedBlowupSpec.from_weights(0, (1, 1), legacy=True))
    a = chart_weights(fan, (-2, 1), Cone([(1, 0), (1, 1)], 2))
    assert by_generator(a) == {(1, 0): -3, (1, 1): 1}
    b = chart_weights(fan, (-2, 1), Cone([(1, 1), (0, 1)], 2))
    assert by_generator(b) == {(1, 1): -2, (0, 1): 3}
    assert a.is_integral and not a.non_reduced


def test_chart_weights_on_singular_chart():
    fan = weighted_star_subdivision(WeightedBlowupSpec.from_weights(0, (1, 2), legacy=True))
    cw = chart_weights(fan, (0, 1), Cone([(1, 0), (1, 2)], 2))
    assert cw.non_reduced and cw.index == 2
    assert by_generator(cw) == {(1, 0): Fraction(-1, 2), (1, 2): Fraction(1, 2)}
    assert not cw.is_integral


def test_chart_weights_errors():
    fan = weighted_star_subdivision(WeightedBlowupSpec.from_weights(0, (1, 1), legacy=True))
    with pytest.raises(NotMaximal):
        chart_weights(fan, (1, 0), Cone([(1, 0), (0, 1)], 2))
    with pytest.raises(NotMaximal):
        chart_weights(fan, (1, 0), Cone([(1, 1)], 2))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 4), st.lists(st.integers(1, 4), min_size=1, max_size=3))
def test_subdivision_properties(d, qs):
    spec = WeightedBlowupSpec.from_weights(d, sorted(qs))
    # omega lies in the relative interior of tau
    assert spec.tau.locate(spec.omega) == "interior"
    fan = weighted_star_subdivision(spec, samples=10)
    assert len(fan.maximal_cones()) == len(qs)
    for c, i in zip(maximal_cones(spec), range(d, spec.n)):
        # the chart dropping e_i has index equal to the i-th entry of the primitive ray
        assert cone_index(c) == spec.ray[i]


def test_sigma_chart_returns_v():
    for n in (2, 3, 4):
        units = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        sigma = Cone(units, n)
        fan = Fan.from_maximal([sigma])
        for v in itertools.product(range(-2, 3), repeat=n):
            assert by_generator(chart_weights(fan, v, sigma)) == {e: v[e.index(1)] for e in units}
