"""Toric weighted blow-up of ``C^n`` along a coordinate subspace.

With ``sigma = <e_1..e_n>`` and ``tau = <e_{d+1}..e_n>``, the weight vector
``omega = (0^d, q_{d+1}..q_n)`` is inserted as a new ray; the maximal cones
of the subdivision drop one of ``e_{d+1}..e_n`` each.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from functools import reduce
from typing import Sequence

from .lattice import (
    Cone,
    Fan,
    LatticeError,
    SubdivisionReport,
    cone_index,
    primitive,
    solve_in_span,
    validate_fan,
    verify_subdivision,
)


class BadBlowupSpec(LatticeError):
    pass


class NotMaximal(LatticeError):
    pass


@dataclass(frozen=True)
class WeightedBlowupSpec:
    """Ambient rank ``n``, number ``d`` of zero weights and the vector ``omega``.

    ``2 <= d < n`` is enforced unless ``legacy`` is set, which also admits
    ``d = 0, 1`` (classical blow-ups of a point or a line).
    """

    n: int
    d: int
    omega: tuple
    legacy: bool = False

    def __post_init__(self):
        omega = tuple(int(x) for x in self.omega)
        object.__setattr__(self, "omega", omega)
        n, d = self.n, self.d
        if len(omega) != n:
            raise BadBlowupSpec(f"omega has length {len(omega)}, expected {n}")
        if not 0 <= d < n:
            raise BadBlowupSpec(f"need 0 <= d < n, got d = {d}, n = {n}")
        if d < 2 and not self.legacy:
            raise BadBlowupSpec(f"d = {d} < 2 is only accepted with legacy=True")
        if any(omega[:d]):
            raise BadBlowupSpec("the first d entries of omega must be 0")
        qs = omega[d:]
        if any(q <= 0 for q in qs):
            raise BadBlowupSpec("the last n - d entries of omega must be positive")
        if list(qs) != sorted(qs):
            raise BadBlowupSpec("the weights of omega must be non-decreasing")

    @classmethod
    def from_weights(cls, d: int, qs: Sequence[int], legacy: bool = False) -> "WeightedBlowupSpec":
        return cls(d + len(qs), d, (0,) * d + tuple(qs), legacy)

    @property
    def weights(self) -> tuple:
        return self.omega[self.d:]

    @property
    def ray(self) -> tuple:
        """Primitive generator of the inserted ray."""
        return primitive(self.omega)

    @property
    def sigma(self) -> Cone:
        return Cone(_basis(self.n), self.n)

    @property
    def tau(self) -> Cone:
        return Cone(_basis(self.n)[self.d:], self.n)

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "omega": list(self.omega), "legacy": self.legacy}


def _basis(n: int) -> list[tuple]:
    return [tuple(int(i == j) for j in range(n)) for i in range(n)]


@dataclass(frozen=True)
class WPSSignature:
    weights: tuple
    gcd: int

    @property
    def is_straight_projective_space(self) -> bool:
        return all(q == 1 for q in self.weights)

    def to_json(self) -> dict:
        return {"weights": list(self.weights), "gcd": self.gcd,
                "is_straight_projective_space": self.is_straight_projective_space}


def maximal_cones(spec: WeightedBlowupSpec) -> list[Cone]:
    e = _basis(spec.n)
    head = e[:spec.d] + [spec.ray]
    return [Cone(head + [e[j] for j in range(spec.d, spec.n) if j != i], spec.n)
            for i in range(spec.d, spec.n)]


def weighted_star_subdivision(spec: WeightedBlowupSpec, samples: int = 200,
                              seed: int = 0) -> Fan:
    """The fan of the weighted blow-up, checked to be a fan refining ``sigma``."""
    from .cobordism import FanValidationFailed, SubdivisionCheckFailed

    cones = maximal_cones(spec)
    report = verify_subdivision(spec.sigma, cones, samples=samples, seed=seed)
    if not report.ok:
        raise SubdivisionCheckFailed("weighted star subdivision", report)
    fan = Fan.from_maximal(cones, spec.n)
    vrep = validate_fan(fan)
    if not vrep.valid:
        raise FanValidationFailed("weighted star subdivision", vrep)
    return fan


def subdivision_report(spec: WeightedBlowupSpec, samples: int = 200, seed: int = 0) -> SubdivisionReport:
    return verify_subdivision(spec.sigma, maximal_cones(spec), samples=samples, seed=seed)


def exceptional_fiber(spec: WeightedBlowupSpec) -> WPSSignature:
    qs = tuple(sorted(spec.weights))
    return WPSSignature(qs, reduce(gcd, qs))


@dataclass(frozen=True)
class ChartWeights:
    """Weights of ``v`` on the affine chart of a maximal cone.

    ``weights[i]`` pairs ``v`` with the dual vector of ``generators[i]``.  If
    the cone has index > 1 these are the rational weights on the smooth cover
    and ``non_reduced`` is set.
    """

    generators: tuple
    weights: tuple
    index: int

    @property
    def non_reduced(self) -> bool:
        return self.index > 1

    @property
    def is_integral(self) -> bool:
        return all(w.denominator == 1 for w in self.weights)

    def to_json(self) -> dict:
        return {"generators": [list(g) for g in self.generators],
                "weights": [str(w) if w.denominator != 1 else int(w) for w in self.weights],
                "index": self.index, "non_reduced": self.non_reduced}


def chart_weights(f: Fan, v: Sequence[int], c: Cone) -> ChartWeights:
    if c not in f or c not in f.maximal_cones():
        raise NotMaximal(f"{c} is not a maximal cone of the fan")
    if not c.is_simplicial:
        raise NotMaximal(f"{c} is not simplicial")
    coeffs = solve_in_span(c.generators, v)
    if coeffs is None:
        raise LatticeError(f"{tuple(v)} is not in the span of {c}")
    return ChartWeights(c.generators, tuple(Fraction(x) for x in coeffs), cone_index(c))
