from collections import Counter
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from toricflips.actions import (
    ActionError,
    ComponentKind,
    DiagonalAction,
    IncompleteReport,
    NonIntegralDegree,
    NonInvariantForm,
    NotIsotropic,
    PairingQuadric,
    TrivialAction,
    Verdict,
    am_fm_degree,
    analyze,
    analyze_og,
    analyze_pn,
    analyze_quadric,
    classify_psi,
    component_normal_weights,
    criticality_and_bandwidth,
    fixed_components_pn,
    form_weight,
    og_example,
    og_fixed_points,
    og_tangent_weights,
    order_graph,
    plucker_action,
    quadric_example,
    restrict_quadric,
)


def test_diagonal_action_basics():
    a = DiagonalAction((1, 1, 0, 0, -1, -1, 0))
    assert fixed_components_pn(a) == [(-1, (0, 1)), (0, (2, 3, 6)), (1, (4, 5))]
    assert len(fixed_components_pn(DiagonalAction((1, -1)))) == 2
    with pytest.raises(TrivialAction):
        DiagonalAction((0, 0, 0))
    assert DiagonalAction((2, 0)).faithful is False
    # shifting every weight only moves mu
    b = a.shifted(3)
    assert [len(ix) for _, ix in fixed_components_pn(b)] == [2, 3, 2]


def test_pairing_quadric_validation():
    with pytest.raises(ActionError):
        PairingQuadric(((0, 1), (1, 2)))
    with pytest.raises(ActionError):
        PairingQuadric((), (0, 1))
    q = PairingQuadric(((0, 2),), (1,))
    assert q.polar(0, 2) == 1 and q.polar(1, 1) == 2 and q.value_on_basis(1) == 1
    with pytest.raises(NonInvariantForm):
        form_weight(DiagonalAction((1, 0, 0)), q)


def test_restrict_quadric_levels():
    a, q = quadric_example(3, 2)
    assert restrict_quadric(a, q, -1).identically_zero
    assert restrict_quadric(a, q, -1).dimension == 1
    inner = restrict_quadric(a, q, 0)
    assert not inner.identically_zero and inner.dimension == 1


def test_small_criticality_and_bandwidth():
    assert criticality_and_bandwidth(analyze_pn(DiagonalAction((1, -1)))) == (1, 2)
    a, q = quadric_example(3, 2)
    assert criticality_and_bandwidth(analyze_quadric(a, q)) == (2, 2)
    a, q = og_example(3)
    assert criticality_and_bandwidth(analyze_og(a, q)) == (2, 4)


def test_am_fm_degree():
    assert am_fm_degree(1, -1, 2) == 1
    assert am_fm_degree(2, 0, 1) == 2
    with pytest.raises(NonIntegralDegree):
        am_fm_degree(1, -1, 3)
    with pytest.raises(ActionError):
        am_fm_degree(0, 1, 1)


def test_plucker_action():
    assert plucker_action(DiagonalAction((1, 0, -1)), 2).weights == (1, 0, -1)
    lv = Counter(plucker_action(DiagonalAction((1, 1, 1, 0, -1, -1, -1)), 2).weights)
    assert lv == {2: 3, 1: 3, 0: 9, -1: 3, -2: 3}
    assert plucker_action(DiagonalAction((3, 1, 2)), 1).weights == (3, 1, 2)


def test_og_fixed_points():
    a, q = og_example(3)
    pts = og_fixed_points(a, q)
    assert len(pts) == 12
    assert Counter(mu for _, mu in pts) == {-2: 3, 0: 6, 2: 3}
    pairs = {p for p, _ in pts}
    assert (0, 3) not in pairs and (0, 4) not in pairs
    assert dict(pts)[(0, 1)] == -2


def test_og_tangent_weights():
    a, q = og_example(3)
    assert og_tangent_weights(a, q, (0, 5)) == [-2, -1, 0, 0, 0, 1, 2]
    # (0, 1) spans the sink: no positive directions
    assert all(x <= 0 for x in og_tangent_weights(a, q, (0, 1)))
    with pytest.raises(NotIsotropic):
        og_tangent_weights(a, q, (0, 4))
    a4, q4 = og_example(4)
    for p, mu in og_fixed_points(a4, q4):
        t = og_tangent_weights(a4, q4, p)
        assert len(t) == 4 * 4 - 5
        if mu == 0:
            assert Counter(x for x in t if x) == {1: 1, -1: 1, 2: 2, -2: 2}


def test_quadric_report_and_weights():
    r = analyze_quadric(*quadric_example(3, 2))
    assert [c.label for c in r.nonempty()] == ["P^1[0,1]", "Q^1[2,3,6]", "P^1[4,5]"]
    assert r.sink.label == "P^1[0,1]" and r.source.label == "P^1[4,5]"
    assert r.sink.normal_weights_neg == (-1, -1, -1, -2) and r.sink.normal_weights_pos == ()
    assert r.source.normal_weights_pos == (1, 1, 1, 2)
    inner = r.inner()[0]
    assert inner.kind is ComponentKind.QUADRIC
    assert component_normal_weights(r, inner) == ((1, 1), (-1, -1), True)
    assert r.sink.blowup_fiber.weights == (1, 1, 1, 2)


def test_quadric_point_components():
    # n = 2, k = 1: sink and source are points, the inner component is a conic
    r = analyze_quadric(*quadric_example(2, 1))
    assert r.criticality == 2
    assert all(c.equalized for c in r.nonempty())


def test_order_graph_quadric():
    r = analyze_quadric(*quadric_example(3, 2))
    g = order_graph(r)
    assert g.edges == (("P^1[4,5]", "P^1[0,1]"), ("P^1[4,5]", "Q^1[2,3,6]"), ("Q^1[2,3,6]", "P^1[0,1]"))
    assert g.successors("P^1[4,5]") == ["P^1[0,1]", "Q^1[2,3,6]"]
    assert all(c.am_fm_holds for c in g.curves if c.degree is not None)


def test_order_graph_criticality_one():
    r = analyze_pn(DiagonalAction((1, -1)))
    g = order_graph(r)
    assert g.edges == ((r.source.label, r.sink.label),)


def test_verdicts():
    r = analyze_quadric(*quadric_example(3, 2))
    assert classify_psi(r, picard_rank_one=True).verdict is Verdict.ATIYAH
    assert classify_psi(r).verdict is Verdict.ATIYAH  # inner nu+- = 2 suffices
    og = analyze_og(*og_example(3))
    assert classify_psi(og, picard_rank_one=True).verdict is Verdict.NON_EQUALIZED
    low = classify_psi(analyze_pn(DiagonalAction((1, -1))))
    assert low.verdict is Verdict.NOT_APPLICABLE and low.reason == "criticality<2"


def test_psi_identity_note():
    # k = 1: sink and source are points and every weight is +-1
    r = analyze_quadric(*quadric_example(3, 1))
    v = classify_psi(r, picard_rank_one=True)
    assert "ψ is the identity" in v.notes


def test_not_a_bordism():
    # P^2 with weights (1, 0, -1): inner point has nu+ = nu- = 1
    r = analyze_pn(DiagonalAction((1, 0, -1)))
    v = classify_psi(r)
    assert v.verdict is Verdict.NOT_APPLICABLE and v.reason == "not a bordism after blow-up"


def test_incomplete_report():
    r = analyze_quadric(*quadric_example(3, 2))
    stripped = replace(r, components=tuple(replace(c, normal_weights_pos=None, normal_weights_neg=None)
                                           for c in r.components))
    with pytest.raises(IncompleteReport):
        classify_psi(stripped)


def test_analyze_dispatch_errors():
    with pytest.raises(ActionError):
        analyze("quadric", DiagonalAction((1, -1)))
    with pytest.raises(ActionError):
        analyze("nope", DiagonalAction((1, -1)))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=6).filter(lambda w: len(set(w)) > 1))
def test_pn_reports_are_consistent(ws):
    r = analyze_pn(DiagonalAction(tuple(ws)))
    assert sum(c.dimension + 1 for c in r.nonempty()) == len(ws)
    assert r.sink.normal_weights_pos == () and r.source.normal_weights_neg == ()
    for c in r.nonempty():
        assert c.nu_plus + c.nu_minus + c.dimension == len(ws) - 1
    for e in order_graph(r).curves:
        if e.degree is not None:
            assert e.am_fm_holds
