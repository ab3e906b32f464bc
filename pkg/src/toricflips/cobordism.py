"""Toric cobordism and bordism fans attached to a one-parameter subgroup.

The lattice is ``N = Z^{n+1}`` with the positive orthant ``delta``.  A weight
vector ``v = (-q_neg, 0^z, q_pos)`` gives a C*-action on ``C^{n+1}``; the
fans below are the ones built out of it (open loci with non-converging
orbits, their quotients, the line-bundle fans and the bordism fan).

Sign convention, used throughout: ``quot_plus`` is the image of
``delta_plus`` and its toric variety is the *sink* ``X_-``; ``quot_minus``
gives the *source* ``X_+``.  Reports always label varieties by sink/source.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import reduce
from math import gcd
from typing import Sequence

from .lattice import (
    Cone,
    Fan,
    LatticeError,
    SubdivisionReport,
    ValidationReport,
    cone_index,
    det,
    nonneg_combination,
    project_cone,
    quotient_projection,
    validate_fan,
    verify_subdivision,
)


class BadBlockSizes(LatticeError):
    pass


class VerificationFailed(AssertionError):
    """An internal certificate failed; this indicates a bug, not bad input."""


class SubdivisionCheckFailed(VerificationFailed):
    pass


class FanValidationFailed(VerificationFailed):
    def __init__(self, msg, report=None):
        super().__init__(msg)
        self.report = report


class DegenerateCone(VerificationFailed):
    pass


class ConeNotInFan(LatticeError):
    pass


class FlipKind(str, enum.Enum):
    ATIYAH = "Atiyah"
    NON_EQUALIZED = "NonEqualized"


class Direction(str, enum.Enum):
    TO_ZERO = "ToZero"
    TO_INFINITY = "ToInfinity"


@dataclass(frozen=True)
class CobordismSetup:
    q_neg: tuple[int, ...]
    zero_count: int
    q_pos: tuple[int, ...]
    unchecked: bool = False
    note: str = ""

    @property
    def n_plus_1(self) -> int:
        return len(self.q_neg) + self.zero_count + len(self.q_pos)

    @property
    def d1(self) -> int:
        return len(self.q_neg)

    @property
    def d2(self) -> int:
        return self.d1 + self.zero_count

    @property
    def v(self) -> tuple[int, ...]:
        return tuple(-q for q in self.q_neg) + (0,) * self.zero_count + self.q_pos

    @property
    def negative_indices(self) -> range:
        return range(self.d1)

    @property
    def positive_indices(self) -> range:
        return range(self.d2, self.n_plus_1)

    @property
    def within_hypotheses(self) -> bool:
        return 1 < self.d1 <= self.d2 < self.n_plus_1

    def weight(self, i: int) -> int:
        return abs(self.v[i])

    def divisor(self, j: int) -> int:
        """gcd of all weights except the j-th; the image of e_j in N/Zv is this multiple
        of a primitive vector."""
        v = self.v
        return reduce(gcd, (abs(v[k]) for k in range(len(v)) if k != j), 0)

    @property
    def well_formed(self) -> bool:
        """Every e_j maps to a primitive vector of N/Zv."""
        return all(self.divisor(j) == 1 for j in range(self.n_plus_1))

    def to_json(self) -> dict:
        out = {"q_neg": list(self.q_neg), "zero_count": self.zero_count,
               "q_pos": list(self.q_pos), "n_plus_1": self.n_plus_1,
               "d1": self.d1, "d2": self.d2, "v": list(self.v),
               "well_formed": self.well_formed}
        if self.note:
            out["note"] = self.note
        if not self.within_hypotheses:
            out["warning"] = "outside the standing hypotheses 1 < d1 <= d2 < n+1"
        return out


def make_setup(q_neg: Sequence[int], zero_count: int, q_pos: Sequence[int],
               unchecked: bool = False) -> CobordismSetup:
    """Assemble ``v`` in block order, dividing the q's by their gcd.

    Raises ``BadBlockSizes`` unless ``1 < d1 <= d2 < n+1``; ``unchecked``
    lets degenerate block sizes through for exploration.
    """
    q_neg = tuple(int(q) for q in q_neg)
    q_pos = tuple(int(q) for q in q_pos)
    zero_count = int(zero_count)
    if any(q <= 0 for q in q_neg + q_pos):
        raise BadBlockSizes("weights q must be positive integers")
    if zero_count < 0:
        raise BadBlockSizes("zero_count must be non-negative")
    if not q_neg or not q_pos:
        raise BadBlockSizes("need at least one negative and one positive weight")
    if not unchecked and len(q_neg) < 2:
        raise BadBlockSizes(f"need 1 < d1, got d1 = {len(q_neg)}")
    g = reduce(gcd, q_neg + q_pos)
    note = ""
    if g > 1:
        q_neg = tuple(q // g for q in q_neg)
        q_pos = tuple(q // g for q in q_pos)
        note = f"weights divided by their gcd {g}"
    return CobordismSetup(q_neg, zero_count, q_pos, unchecked, note)


def _unit(n: int, i: int) -> tuple[int, ...]:
    return tuple(int(j == i) for j in range(n))


def delta_cone(setup: CobordismSetup) -> Cone:
    n = setup.n_plus_1
    return Cone([_unit(n, i) for i in range(n)], n)


def facet_cone(setup: CobordismSetup, i: int) -> Cone:
    """``delta_i``: the facet of ``delta`` opposite to ``e_i`` (0-based)."""
    n = setup.n_plus_1
    return Cone([_unit(n, j) for j in range(n) if j != i], n)


def fans_B(setup: CobordismSetup) -> tuple[Fan, Fan]:
    """Fans of the open sets where the limit at infinity (resp. zero) fails.

    ``delta_plus`` holds the faces of ``delta`` not containing the whole
    positive block ``<e_{d2+1},...,e_{n+1}>``; ``delta_minus`` the faces not
    containing the whole negative block.  Maximal cones are the facets
    ``delta_i`` for ``i`` in the respective block.
    """
    plus = Fan.from_maximal([facet_cone(setup, i) for i in setup.positive_indices])
    minus = Fan.from_maximal([facet_cone(setup, i) for i in setup.negative_indices])
    return plus, minus


@dataclass
class CobordismFans:
    delta: Cone
    delta_plus: Fan
    delta_minus: Fan
    delta_bar: Cone
    quot_plus: Fan   # toric variety X_- (sink)
    quot_minus: Fan  # toric variety X_+ (source)
    projection: tuple
    plus_report: SubdivisionReport
    minus_report: SubdivisionReport

    @property
    def sink_fan(self) -> Fan:
        return self.quot_plus

    @property
    def source_fan(self) -> Fan:
        return self.quot_minus


def quotient_fans(setup: CobordismSetup, samples: int = 200, seed: int = 0,
                  canonical: bool = True) -> CobordismFans:
    """Project everything to ``N / Z v`` and certify both subdivisions."""
    p = quotient_projection(setup.v, canonical=canonical)
    delta = delta_cone(setup)
    plus, minus = fans_B(setup)
    delta_bar = project_cone(p, delta)
    reports = []
    quot = []
    for block in (setup.positive_indices, setup.negative_indices):
        cones = [project_cone(p, facet_cone(setup, i)) for i in block]
        for c in cones:
            if not (c.is_simplicial and c.dim == setup.n_plus_1 - 1):
                raise SubdivisionCheckFailed(f"projected facet {c} is not simplicial of full dimension")
        rep = verify_subdivision(delta_bar, cones, samples=samples, seed=seed)
        if not rep.ok:
            raise SubdivisionCheckFailed(f"not a subdivision of {delta_bar}: {rep.to_json()}")
        reports.append(rep)
        quot.append(Fan.from_maximal(cones, setup.n_plus_1 - 1))
    return CobordismFans(delta, plus, minus, delta_bar, quot[0], quot[1], p,
                         reports[0], reports[1])


@dataclass(frozen=True)
class FlipClassification:
    kind: FlipKind
    nonzero_weights: tuple[int, ...]
    smooth_minus: bool  # X_- (sink) smooth
    smooth_plus: bool   # X_+ (source) smooth
    within_hypotheses: bool = True
    well_formed: bool = True

    @property
    def smoothness_agrees(self) -> bool:
        return (self.kind is FlipKind.ATIYAH) == (self.smooth_minus and self.smooth_plus)

    def to_json(self) -> dict:
        out = {"kind": self.kind.value, "nonzero_weights": list(self.nonzero_weights),
               "sink_smooth": self.smooth_minus, "source_smooth": self.smooth_plus,
               "smoothness_agrees": self.smoothness_agrees}
        if not self.within_hypotheses:
            out["note"] = "outside the standing hypotheses"
        if not self.smoothness_agrees:
            out["smoothness_note"] = ("some e_j maps to a non-primitive vector of N/Zv, so quotient "
                                      "singularities of the weights are absorbed")
        return out


def classify_flip(setup: CobordismSetup, fans: CobordismFans | None = None) -> FlipClassification:
    """Atiyah iff every nonzero weight is +-1.

    Smoothness of both quotient fans is recorded alongside.  For well-formed
    weights the two tests must agree and a disagreement raises; otherwise a
    non-equalized flip can have smooth quotients (e.g. v = (-2, -2, 1)).
    """
    if fans is None:
        fans = quotient_fans(setup, samples=0)
    weights = tuple(x for x in setup.v if x != 0)
    kind = FlipKind.ATIYAH if all(abs(x) == 1 for x in weights) else FlipKind.NON_EQUALIZED
    smooth_minus = all(cone_index(c) == 1 for c in fans.sink_fan.maximal_cones())
    smooth_plus = all(cone_index(c) == 1 for c in fans.source_fan.maximal_cones())
    out = FlipClassification(kind, weights, smooth_minus, smooth_plus, setup.within_hypotheses,
                             setup.well_formed)
    if setup.well_formed and not out.smoothness_agrees:
        raise VerificationFailed("weight test and smoothness test disagree")
    return out


def expected_index(setup: CobordismSetup, i: int) -> int:
    """Index of the projected facet delta_i: q_i over the divisors of the other images."""
    d = 1
    for j in range(setup.n_plus_1):
        if j != i:
            d *= setup.divisor(j)
    q, r = divmod(setup.weight(i), d)
    if r:
        raise VerificationFailed("divisors do not divide the weight")
    return q


def multiplicity_oracle(setup: CobordismSetup, i: int) -> int:
    """|det(e_j (j != i), v)| = q_i: the index of the images of the e_j in N/Zv."""
    n = setup.n_plus_1
    rows = [_unit(n, j) for j in range(n) if j != i] + [setup.v]
    return abs(det(rows))


def bundle_fans(setup: CobordismSetup) -> tuple[Fan, Fan]:
    """Fans of the line bundles over sink and source.

    ``lambda_plus`` has maximal cones ``<delta_i, -v>`` (i positive),
    ``lambda_minus`` has ``<delta_i, v>`` (i negative).
    """
    v = setup.v
    neg_v = tuple(-x for x in v)
    out = []
    for block, ray in ((setup.positive_indices, neg_v), (setup.negative_indices, v)):
        cones = []
        for i in block:
            c = Cone(facet_cone(setup, i).generators + (ray,), setup.n_plus_1)
            if not (c.is_simplicial and c.dim == setup.n_plus_1):
                raise DegenerateCone(f"<delta_{i + 1}, {ray}> is not simplicial")
            cones.append(c)
        fan = Fan.from_maximal(cones)
        rep = validate_fan(fan)
        if not rep.valid:
            raise FanValidationFailed("bundle fan is not a fan", rep)
        out.append(fan)
    return out[0], out[1]


@dataclass
class BordismFan:
    sigma_tilde: Fan
    lambda_plus: Fan
    lambda_minus: Fan
    sink_fan: Fan
    source_fan: Fan
    inner_dim: int
    report: ValidationReport
    piece_reports: dict = field(default_factory=dict)


def bordism_fan(setup: CobordismSetup, fans: CobordismFans | None = None) -> BordismFan:
    """Glue ``Lambda_+``, the faces of ``delta`` and ``Lambda_-``; validate."""
    if fans is None:
        fans = quotient_fans(setup, samples=0)
    lp, lm = bundle_fans(setup)
    sigma_delta = Fan.from_maximal([delta_cone(setup)])
    sigma = lp.union(sigma_delta, lm)
    report = validate_fan(sigma)
    if not report.valid:
        raise FanValidationFailed("bordism fan failed validation", report)
    pieces = {"lambda_plus": validate_fan(lp), "delta": validate_fan(sigma_delta),
              "lambda_minus": validate_fan(lm)}
    return BordismFan(sigma, lp, lm, fans.sink_fan, fans.source_fan,
                      setup.d2 - setup.d1, report, pieces)


def limit_in_fan(f: Fan, sigma: Cone, w: Sequence[int],
                 direction: Direction = Direction.TO_ZERO) -> Cone | None:
    """Cone whose orbit contains ``lim lambda_w(t) x_sigma``; None if no limit.

    The limit as t -> 0 exists iff ``w`` lies in ``tau + span(sigma)`` for
    some cone ``tau`` of ``f`` having ``sigma`` as a face; the limit point is
    the distinguished point of the minimal such ``tau``.  For t -> infinity
    use ``-w``.
    """
    if sigma not in f:
        raise ConeNotInFan(f"{sigma} is not a cone of the fan")
    w = tuple(int(x) for x in w)
    if direction is Direction.TO_INFINITY or direction == "ToInfinity":
        w = tuple(-x for x in w)
    lineality = [tuple(-x for x in g) for g in sigma.generators]
    hits = [tau for tau in f.cones
            if set(sigma.generators) <= set(tau.generators) and sigma.is_face_of(tau)
            and nonneg_combination(w, list(tau.generators) + lineality)]
    if not hits:
        return None
    return min(hits, key=lambda c: (c.dim, c.generators))
