import pytest

from toricflips.cobordism import (
    BadBlockSizes,
    ConeNotInFan,
    Direction,
    FlipKind,
    bordism_fan,
    bundle_fans,
    classify_flip,
    delta_cone,
    expected_index,
    facet_cone,
    fans_B,
    limit_in_fan,
    make_setup,
    multiplicity_oracle,
    quotient_fans,
)
from toricflips.lattice import Cone, cone_index, project_cone, validate_fan


def maximal_gens(fan):
    return [c.generators for c in fan.maximal_cones()]


def test_make_setup_validation():
    with pytest.raises(BadBlockSizes):
        make_setup((1,), 0, (1,))
    with pytest.raises(BadBlockSizes):
        make_setup((1, 0), 0, (1,))
    with pytest.raises(BadBlockSizes):
        make_setup((1, 1), 0, ())
    s = make_setup((1,), 0, (1,), unchecked=True)
    assert not s.within_hypotheses
    assert "warning" in s.to_json()


def test_make_setup_divides_gcd():
    s = make_setup((4, 2), 1, (2,))
    assert s.v == (-2, -1, 0, 1)
    assert s.note
    assert (s.d1, s.d2, s.n_plus_1) == (2, 3, 4)


def test_small_flip_fans():
    s = make_setup((2, 1), 0, (1,))
    f = quotient_fans(s, samples=20)
    assert f.projection == ((1, 0, 2), (0, 1, 1))
    assert maximal_gens(f.delta_plus) == [((0, 1, 0), (1, 0, 0))]
    assert maximal_gens(f.delta_minus) == [((0, 0, 1), (0, 1, 0)), ((0, 0, 1), (1, 0, 0))]
    assert f.delta_bar.generators == ((0, 1), (1, 0))
    assert maximal_gens(f.sink_fan) == [((0, 1), (1, 0))]
    assert maximal_gens(f.source_fan) == [((0, 1), (2, 1)), ((1, 0), (2, 1))]
    assert f.plus_report.ok and f.minus_report.ok


def test_small_flip_indices_and_kind():
    s = make_setup((2, 1), 0, (1,))
    f = quotient_fans(s, samples=0)
    idx = [cone_index(project_cone(f.projection, facet_cone(s, i))) for i in range(3)]
    assert idx == [2, 1, 1]
    assert [multiplicity_oracle(s, i) for i in range(3)] == [2, 1, 1]
    c = classify_flip(s, f)
    assert c.kind is FlipKind.NON_EQUALIZED
    assert c.smooth_minus and not c.smooth_plus
    assert c.smoothness_agrees


def test_atiyah_flip():
    s = make_setup((1, 1), 0, (1, 1))
    c = classify_flip(s)
    assert c.kind is FlipKind.ATIYAH and c.smooth_minus and c.smooth_plus


def test_non_well_formed_weights():
    # e_3 maps to twice a primitive vector of N/Zv; both quotients are C^2
    s = make_setup((2, 2), 0, (1,))
    assert not s.well_formed
    assert [s.divisor(j) for j in range(3)] == [1, 1, 2]
    f = quotient_fans(s, samples=10)
    c = classify_flip(s, f)
    assert c.kind is FlipKind.NON_EQUALIZED
    assert c.smooth_minus and c.smooth_plus
    assert not c.smoothness_agrees
    assert "smoothness_note" in c.to_json()
    idx = [cone_index(project_cone(f.projection, facet_cone(s, i))) for i in range(3)]
    assert idx == [expected_index(s, i) for i in range(3)] == [1, 1, 1]
    assert [multiplicity_oracle(s, i) for i in range(3)] == [2, 2, 1]


def test_index_law_with_divisors():
    s = make_setup((3, 2), 0, (1, 1))
    f = quotient_fans(s, samples=0)
    for i in range(4):
        c = project_cone(f.projection, facet_cone(s, i))
        assert cone_index(c) == expected_index(s, i) == s.weight(i)


def test_fans_B_and_bundles():
    s = make_setup((1, 1), 1, (1,))
    plus, minus = fans_B(s)
    assert maximal_gens(plus) == [facet_cone(s, 3).generators]
    assert len(minus.maximal_cones()) == 2
    lp, lm = bundle_fans(s)
    assert validate_fan(lp).valid and validate_fan(lm).valid
    assert all(c.dim == 4 for c in lp.maximal_cones())


def test_bordism_fan():
    s = make_setup((1, 1), 1, (1,))
    b = bordism_fan(s)
    assert b.report.valid
    assert b.inner_dim == 1
    assert len(b.sigma_tilde.maximal_cones()) == 4
    assert all(r.valid for r in b.piece_reports.values())
    assert delta_cone(s) in b.sigma_tilde


def test_limits():
    s = make_setup((2, 1), 0, (1,))
    fan = bordism_fan(s).sigma_tilde
    zero = Cone.zero(3)
    assert limit_in_fan(fan, zero, s.v) == Cone([s.v], 3)
    assert limit_in_fan(fan, zero, (1, 1, 1)) == delta_cone(s)
    assert limit_in_fan(fan, zero, (-1, -1, -1)) is None
    with pytest.raises(ConeNotInFan):
        limit_in_fan(fan, Cone([(1, 1, 1)], 3), (1, 0, 0))


def test_limit_direction():
    s = make_setup((1, 1), 0, (1, 1))
    fan = bordism_fan(s).sigma_tilde
    zero = Cone.zero(4)
    assert limit_in_fan(fan, zero, s.v, Direction.TO_ZERO) == Cone([s.v], 4)
    assert limit_in_fan(fan, zero, s.v, Direction.TO_INFINITY) == Cone([(1, 1, -1, -1)], 4)


def test_small_grid_is_consistent(grid):
    small = [r for r in grid if sum(len(b) if isinstance(b, tuple) else b for b in r["setup"]) <= 4]
    assert len(small) == 33 + 194
    for r in small:
        assert r["plus_ok"] and r["minus_ok"] and r["sigma_valid"]
