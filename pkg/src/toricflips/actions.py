"""Weight bookkeeping for diagonal C*-actions.

Supported varieties: projective space ``P^N``, a quadric ``Q`` cut out by a
pairing form (``sum x_i x_j`` plus at most one square) and the orthogonal
Grassmannian ``OG(2, V)`` of isotropic planes for such a form.

Linearization convention.  The action multiplies coordinate ``x_i`` by
``t^{w_i}``.  A fixed point ``[e_i]`` of ``P^N`` is a fixed line of
``O(-1)``, so ``O(1)`` carries the weight ``-w_i`` there::

    mu([e_i]) = offset - w_i            mu(<e_i, e_j>) = offset - w_i - w_j

With this choice the sink is the component of minimal ``mu`` (all normal
weights negative), the source the one of maximal ``mu``, and the AM vs FM
identity ``mu(y+) - mu(y-) = delta(y+) deg`` holds with ``y+`` the limit for
``t -> 0``.  The tangent weight of ``[e_i]`` in direction ``e_c`` is
``w_c - w_i``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, replace
from functools import reduce
from math import gcd
from typing import Sequence

from .blowup import WPSSignature


class ActionError(ValueError):
    pass


class TrivialAction(ActionError):
    pass


class NonInvariantForm(ActionError):
    pass


class SingularQuadric(ActionError):
    pass


class NonIntegralDegree(ActionError):
    pass


class NotIsotropic(ActionError):
    pass


class NoTorusFixedRepresentative(ActionError):
    pass


class InconsistentWeights(AssertionError):
    """Two representatives of one component carry different tangent weights."""


class IncompleteReport(ActionError):
    pass


# ---------------------------------------------------------------------------
# inputs


@dataclass(frozen=True)
class DiagonalAction:
    weights: tuple
    linearization_offset: int = 0

    def __post_init__(self):
        w = tuple(int(x) for x in self.weights)
        object.__setattr__(self, "weights", w)
        if len(set(w)) < 2:
            raise TrivialAction("a diagonal action needs two distinct weights")

    @property
    def size(self) -> int:
        return len(self.weights)

    @property
    def faithful(self) -> bool:
        return reduce(gcd, (abs(a - self.weights[0]) for a in self.weights), 0) == 1

    def mu(self, i: int) -> int:
        return self.linearization_offset - self.weights[i]

    def shifted(self, c: int) -> "DiagonalAction":
        return DiagonalAction(tuple(w + c for w in self.weights), self.linearization_offset)

    def to_json(self) -> dict:
        return {"weights": list(self.weights), "linearization_offset": self.linearization_offset,
                "faithful": self.faithful}


@dataclass(frozen=True)
class PairingQuadric:
    """``sum x_i x_j`` over ``pairs`` plus ``sum x_s^2`` over ``squares``."""

    pairs: tuple = ()
    squares: tuple = ()

    def __post_init__(self):
        pairs = tuple(sorted(tuple(sorted((int(i), int(j)))) for i, j in self.pairs))
        squares = tuple(sorted(int(s) for s in self.squares))
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "squares", squares)
        used = [i for p in pairs for i in p] + list(squares)
        if len(used) != len(set(used)):
            raise ActionError("quadric indices must be distinct across monomials")
        if any(i == j for i, j in pairs):
            raise ActionError("pair indices must differ")
        if len(squares) > 1:
            raise ActionError("at most one square term is supported")
        if not pairs and not squares:
            raise ActionError("empty quadric")

    @property
    def partner(self) -> dict:
        d = {}
        for i, j in self.pairs:
            d[i], d[j] = j, i
        return d

    @property
    def square(self) -> int | None:
        return self.squares[0] if self.squares else None

    def indices(self) -> set:
        return set(self.partner) | set(self.squares)

    def value_on_basis(self, i: int) -> int:
        """Q(e_i)."""
        return int(i in self.squares)

    def polar(self, i: int, j: int) -> int:
        """B(e_i, e_j) for the symmetric bilinear form with B(x, x) = Q(x) up to 2."""
        if i == j:
            return 2 * self.value_on_basis(i)
        return int(self.partner.get(i) == j)

    def monomials(self) -> list[tuple]:
        return list(self.pairs) + [(s, s) for s in self.squares]

    def to_json(self) -> dict:
        return {"pairs": [list(p) for p in self.pairs], "squares": list(self.squares)}


def form_weight(a: DiagonalAction, q: PairingQuadric) -> int:
    """The common weight of all monomials of ``q``; raises if there is none."""
    if max(q.indices()) >= a.size:
        raise NonInvariantForm("quadric uses a coordinate the action does not have")
    ws = {a.weights[i] + a.weights[j] for i, j in q.monomials()}
    if len(ws) != 1:
        raise NonInvariantForm(f"monomials have weights {sorted(ws)}")
    return ws.pop()


def quadric_example(n: int, k: int) -> tuple[DiagonalAction, PairingQuadric]:
    """``x_0 x_{n+1} + ... + x_{n-1} x_{2n} + x_n^2`` with the action ``H_k``."""
    if n < 1 or not 1 <= k <= n:
        raise ActionError(f"need 1 <= k <= n, got n = {n}, k = {k}")
    w = [0] * (2 * n + 1)
    for i in range(k):
        w[i] = 1
        w[n + 1 + i] = -1
    q = PairingQuadric(tuple((i, n + 1 + i) for i in range(n)), (n,))
    return DiagonalAction(tuple(w)), q


def og_example(n: int) -> tuple[DiagonalAction, PairingQuadric]:
    """``H_n`` on ``V = C^{2n+1}``, for the Grassmannian of lines on ``Q^{2n-1}``."""
    return quadric_example(n, n)


# ---------------------------------------------------------------------------
# projective space and quadric restriction


def fixed_components_pn(a: DiagonalAction) -> list[tuple[int, tuple]]:
    """Coordinates grouped by weight, as ``(mu, indices)`` sorted by ``mu``."""
    groups: dict[int, list[int]] = {}
    for i in range(a.size):
        groups.setdefault(a.mu(i), []).append(i)
    return sorted((mu, tuple(ix)) for mu, ix in groups.items())


@dataclass(frozen=True)
class RestrictedQuadric:
    level: tuple
    monomials: tuple

    @property
    def identically_zero(self) -> bool:
        return not self.monomials

    @property
    def dimension(self) -> int:
        """Dimension of the zero locus inside ``P(level)`` (``-1`` when empty)."""
        n = len(self.level) - 1
        return n if self.identically_zero else n - 1

    def to_json(self) -> dict:
        if self.identically_zero:
            return {"type": "IdenticallyZero", "dimension": self.dimension}
        return {"type": "QuadricOfDim", "dimension": self.dimension,
                "monomials": [list(m) for m in self.monomials]}


def restrict_quadric(a: DiagonalAction, q: PairingQuadric, level_mu: int) -> RestrictedQuadric:
    form_weight(a, q)
    level = dict(fixed_components_pn(a)).get(level_mu)
    if level is None:
        raise ActionError(f"no coordinates at level mu = {level_mu}")
    s = set(level)
    mons = tuple(m for m in q.monomials() if m[0] in s and m[1] in s)
    return RestrictedQuadric(level, mons)


# ---------------------------------------------------------------------------
# varieties as torus-fixed point models
#
# Each model lists its coordinate fixed points, the tangent weights there,
# fixed lines joining two of them, and invariant curves (with their degree)
# joining fixed points of different weight.


@dataclass(frozen=True)
class Curve:
    ends: tuple          # (a, b), fixed points
    deltas: tuple        # tangent weights along the curve at a and at b
    degree: int
    kind: str


class _PN:
    variety = "pn"

    def __init__(self, a: DiagonalAction):
        self.a = a
        self.w = a.weights

    def points(self) -> list:
        return list(range(self.a.size))

    def mu(self, p) -> int:
        return self.a.mu(p)

    def tangent(self, p) -> list[int]:
        return [self.w[c] - self.w[p] for c in range(self.a.size) if c != p]

    def on_fixed_line(self, p, r) -> bool:
        return self.w[p] == self.w[r]

    def curves(self) -> list[Curve]:
        out = []
        for i, j in itertools.combinations(range(self.a.size), 2):
            if self.w[i] != self.w[j] and self._line_ok(i, j):
                out.append(Curve((i, j), (self.w[j] - self.w[i], self.w[i] - self.w[j]), 1, "line"))
        return out

    def _line_ok(self, i, j) -> bool:
        return True


class _Quadric(_PN):
    variety = "quadric"

    def __init__(self, a: DiagonalAction, q: PairingQuadric):
        super().__init__(a)
        self.q = q
        self.c = form_weight(a, q)
        if q.indices() != set(range(a.size)):
            raise SingularQuadric("every coordinate must occur in the form")

    def points(self) -> list:
        return [i for i in range(self.a.size) if self.q.value_on_basis(i) == 0]

    def tangent(self, p) -> list[int]:
        # T_{e_p} Q = {x_{partner(p)} = 0}
        skip = self.q.partner[p]
        return [self.w[c] - self.w[p] for c in range(self.a.size) if c not in (p, skip)]

    def on_fixed_line(self, p, r) -> bool:
        return self.w[p] == self.w[r] and self.q.polar(p, r) == 0

    def _line_ok(self, i, j) -> bool:
        return (self.q.value_on_basis(i) == 0 and self.q.value_on_basis(j) == 0
                and self.q.polar(i, j) == 0)

    def curves(self) -> list[Curve]:
        out = super().curves()
        m = self.q.square
        if m is None:
            return out
        # conics e_i + s e_m - s^2 e_partner(i)
        for i, j in self.q.pairs:
            if self.w[i] != self.w[m]:
                out.append(Curve((i, j), (self.w[m] - self.w[i], self.w[m] - self.w[j]), 2, "conic"))
        return out


class _OG(_PN):
    """Isotropic planes ``<e_i, e_j>`` for a pairing quadric on ``V``."""

    variety = "og2"

    def __init__(self, a: DiagonalAction, q: PairingQuadric):
        super().__init__(a)
        self.q = q
        self.c = form_weight(a, q)
        if q.indices() != set(range(a.size)):
            raise SingularQuadric("every coordinate must occur in the form")
        if a.size < 5:
            raise ActionError("the orthogonal Grassmannian of planes needs dim V >= 5")

    def isotropic(self, i, j) -> bool:
        return (i != j and self.q.value_on_basis(i) == 0 and self.q.value_on_basis(j) == 0
                and self.q.polar(i, j) == 0)

    def points(self) -> list:
        return [p for p in itertools.combinations(range(self.a.size), 2) if self.isotropic(*p)]

    def mu(self, p) -> int:
        i, j = p
        return self.a.linearization_offset - self.w[i] - self.w[j]

    def tangent(self, p) -> list[int]:
        i, j = p
        if not self.isotropic(i, j):
            raise NotIsotropic(f"<e_{i}, e_{j}> is not isotropic")
        par = self.q.partner
        quotient = [c for c in range(self.a.size) if c not in (i, j, par[i], par[j])]
        out = [self.w[c] - self.w[s] for c in quotient for s in (i, j)]
        out.append(self.c - self.w[i] - self.w[j])
        return out

    def on_fixed_line(self, p, r) -> bool:
        # planes sharing one vector, the other two spanning a fixed isotropic pencil
        common = set(p) & set(r)
        if len(common) != 1:
            return False
        (x,), (y,) = set(p) - common, set(r) - common
        return self.w[x] == self.w[y] and self.q.polar(x, y) == 0

    def curves(self) -> list[Curve]:
        out = []
        pts = set(self.points())
        for p in sorted(pts):
            for keep, move in ((p[0], p[1]), (p[1], p[0])):
                for c in range(self.a.size):
                    r = tuple(sorted((keep, c)))
                    if c == move or r <= p or r not in pts or self.w[c] == self.w[move]:
                        continue
                    if self.q.polar(move, c) != 0:
                        continue
                    # <e_keep, e_move + s e_c>
                    out.append(Curve((p, r), (self.w[c] - self.w[move], self.w[move] - self.w[c]),
                                     1, "pencil"))
        m = self.q.square
        if m is not None:
            par = self.q.partner
            for p in sorted(pts):
                for moving, fixed in ((p[0], p[1]), (p[1], p[0])):
                    other = par[moving]
                    r = tuple(sorted((other, fixed)))
                    if moving > other or self.w[m] == self.w[moving] or r not in pts:
                        continue
                    # <e_moving + s e_m - s^2 e_partner, e_fixed>
                    out.append(Curve((p, r), (self.w[m] - self.w[moving], self.w[m] - self.w[other]),
                                     2, "conic"))
        return sorted(set(out), key=lambda cv: (cv.ends, cv.kind))


def plucker_action(a: DiagonalAction, p: int) -> DiagonalAction:
    if not 1 <= p < a.size:
        raise ActionError(f"need 1 <= p < {a.size}")
    ws = tuple(sum(a.weights[i] for i in s) for s in itertools.combinations(range(a.size), p))
    return DiagonalAction(ws, a.linearization_offset)


def og_fixed_points(a: DiagonalAction, q: PairingQuadric) -> list[tuple[tuple, int]]:
    """Isotropic coordinate planes with their ``mu``, sorted by ``mu`` then pair."""
    model = _OG(a, q)
    return sorted(((p, model.mu(p)) for p in model.points()), key=lambda x: (x[1], x[0]))


def og_tangent_weights(a: DiagonalAction, q: PairingQuadric, pair: Sequence[int]) -> list[int]:
    i, j = sorted(pair)
    return sorted(_OG(a, q).tangent((i, j)))


def am_fm_degree(mu_plus: int, mu_minus: int, delta_plus: int) -> int:
    """Degree of an invariant curve from ``mu(y+) - mu(y-) = delta(y+) deg``."""
    if mu_plus <= mu_minus:
        raise ActionError("need mu_plus > mu_minus")
    if delta_plus <= 0:
        raise ActionError("delta_plus must be positive")
    d, r = divmod(mu_plus - mu_minus, delta_plus)
    if r:
        raise NonIntegralDegree(f"({mu_plus} - {mu_minus}) / {delta_plus} is not an integer")
    return d


# ---------------------------------------------------------------------------
# reports


class ComponentKind(str, enum.Enum):
    LINEAR = "LinearSubspace"
    QUADRIC = "QuadricInSubspace"
    SUB_GRASSMANNIAN = "SubGrassmannian"
    INNER_OG = "InnerOG"
    EMPTY = "Empty"


@dataclass(frozen=True)
class FixedComponent:
    label: str
    mu: int
    dimension: int
    kind: ComponentKind
    representatives: tuple
    normal_weights_pos: tuple | None = None
    normal_weights_neg: tuple | None = None
    role: str = "inner"

    @property
    def empty(self) -> bool:
        return self.kind == ComponentKind.EMPTY

    @property
    def has_weights(self) -> bool:
        return self.normal_weights_pos is not None

    @property
    def nu_plus(self) -> int:
        return len(self.normal_weights_pos or ())

    @property
    def nu_minus(self) -> int:
        return len(self.normal_weights_neg or ())

    @property
    def equalized(self) -> bool | None:
        if not self.has_weights:
            return None
        return all(abs(x) == 1 for x in self.normal_weights_pos + self.normal_weights_neg)

    @property
    def blowup_fiber(self) -> WPSSignature | None:
        """Exceptional fiber of the weighted blow-up along an extremal component."""
        if self.role not in ("sink", "source") or not self.has_weights:
            return None
        qs = tuple(sorted(abs(x) for x in self.normal_weights_pos + self.normal_weights_neg))
        return WPSSignature(qs, reduce(gcd, qs, 0))

    def to_json(self) -> dict:
        fiber = self.blowup_fiber
        return {
            "label": self.label, "mu": self.mu, "dimension": self.dimension,
            "kind": self.kind.value, "role": self.role,
            "representatives": [list(r) if isinstance(r, tuple) else r for r in self.representatives],
            "normal_weights_pos": None if self.normal_weights_pos is None else list(self.normal_weights_pos),
            "normal_weights_neg": None if self.normal_weights_neg is None else list(self.normal_weights_neg),
            "equalized": self.equalized,
            "blowup_fiber": None if fiber is None else fiber.to_json(),
        }


@dataclass(frozen=True)
class FixedComponentReport:
    variety: str
    action: DiagonalAction
    quadric: PairingQuadric | None
    components: tuple

    def nonempty(self) -> list[FixedComponent]:
        return [c for c in self.components if not c.empty]

    @property
    def levels(self) -> list[int]:
        return sorted({c.mu for c in self.nonempty()})

    @property
    def criticality(self) -> int:
        return len(self.levels) - 1

    @property
    def bandwidth(self) -> int:
        return self.levels[-1] - self.levels[0]

    @property
    def sink(self) -> FixedComponent:
        return next(c for c in self.nonempty() if c.role == "sink")

    @property
    def source(self) -> FixedComponent:
        return next(c for c in self.nonempty() if c.role == "source")

    def inner(self) -> list[FixedComponent]:
        return [c for c in self.nonempty() if c.role == "inner"]

    def component_of(self, point) -> FixedComponent:
        for c in self.components:
            if point in c.representatives:
                return c
        raise KeyError(point)

    def model(self):
        return _model(self.variety, self.action, self.quadric)

    def to_json(self) -> dict:
        return {
            "variety": self.variety,
            "action": self.action.to_json(),
            "quadric": None if self.quadric is None else self.quadric.to_json(),
            "components": [c.to_json() for c in self.components],
            "levels": self.levels,
            "criticality": self.criticality,
            "bandwidth": self.bandwidth,
            "sink": self.sink.label,
            "source": self.source.label,
        }


def _model(variety: str, a: DiagonalAction, q: PairingQuadric | None):
    if variety == "pn":
        return _PN(a)
    if q is None:
        raise ActionError(f"variety {variety!r} needs a quadric")
    if variety == "quadric":
        return _Quadric(a, q)
    if variety == "og2":
        return _OG(a, q)
    raise ActionError(f"unknown variety {variety!r}")


def criticality_and_bandwidth(r: FixedComponentReport) -> tuple[int, int]:
    if len(r.nonempty()) < 2:
        raise ActionError("need at least two fixed components")
    return r.criticality, r.bandwidth


def _split_by_fixed_lines(model, pts: list) -> list[list]:
    """Connected pieces of a weight level, joined by fixed coordinate lines."""
    parent = {p: p for p in pts}

    def find(p):
        while parent[p] != p:
            parent[p] = parent[parent[p]]
            p = parent[p]
        return p

    for p, r in itertools.combinations(pts, 2):
        if model.on_fixed_line(p, r):
            parent[find(p)] = find(r)
    groups: dict = {}
    for p in pts:
        groups.setdefault(find(p), []).append(p)
    return sorted((sorted(g) for g in groups.values()), key=lambda g: g[0])


def _tangent_at(model, rep) -> list[int]:
    return sorted(model.tangent(rep))


def component_normal_weights(report: FixedComponentReport, comp: FixedComponent):
    """``(pos, neg, equalized)`` from the tangent weights at the representatives.

    Every representative is evaluated and all must agree.
    """
    if not comp.representatives:
        raise NoTorusFixedRepresentative(comp.label)
    model = report.model()
    tangents = {tuple(_tangent_at(model, r)) for r in comp.representatives}
    if len(tangents) != 1:
        raise InconsistentWeights(f"{comp.label}: {sorted(tangents)}")
    t = tangents.pop()
    pos = tuple(sorted(x for x in t if x > 0))
    neg = tuple(sorted((x for x in t if x < 0), reverse=True))
    return pos, neg, all(abs(x) == 1 for x in pos + neg)


def _finish(variety, a, q, comps: list[FixedComponent]) -> FixedComponentReport:
    comps.sort(key=lambda c: (c.mu, c.label))
    live = [c for c in comps if not c.empty]
    lo, hi = min(c.mu for c in live), max(c.mu for c in live)
    roles = []
    for c in comps:
        if c.empty:
            roles.append(replace(c, role="empty"))
        elif c.mu == lo:
            roles.append(replace(c, role="sink"))
        elif c.mu == hi:
            roles.append(replace(c, role="source"))
        else:
            roles.append(c)
    if sum(c.role == "sink" for c in roles) != 1 or sum(c.role == "source" for c in roles) != 1:
        raise ActionError("extremal levels must each carry a single component")
    report = FixedComponentReport(variety, a, q, tuple(roles))
    model = report.model()
    filled = []
    for c in report.components:
        if c.empty:
            filled.append(c)
            continue
        pos, neg, _ = component_normal_weights(report, c)
        zeros = sum(1 for x in _tangent_at(model, c.representatives[0]) if x == 0)
        if zeros != c.dimension:
            raise InconsistentWeights(f"{c.label}: dimension {c.dimension} but {zeros} zero weights")
        filled.append(replace(c, normal_weights_pos=pos, normal_weights_neg=neg))
    return FixedComponentReport(variety, a, q, tuple(filled))


def analyze_pn(a: DiagonalAction) -> FixedComponentReport:
    comps = []
    for mu, ix in fixed_components_pn(a):
        comps.append(FixedComponent(f"P^{len(ix) - 1}[{_fmt(ix)}]", mu, len(ix) - 1,
                                    ComponentKind.LINEAR, ix))
    return _finish("pn", a, None, comps)


def analyze_quadric(a: DiagonalAction, q: PairingQuadric) -> FixedComponentReport:
    model = _Quadric(a, q)
    on_q = set(model.points())
    comps = []
    for mu, ix in fixed_components_pn(a):
        rq = restrict_quadric(a, q, mu)
        pts = [i for i in ix if i in on_q]
        if rq.dimension < 0:
            comps.append(FixedComponent(f"Q^-1[{_fmt(ix)}]", mu, -1, ComponentKind.EMPTY, ()))
        elif rq.identically_zero:
            comps.append(FixedComponent(f"P^{rq.dimension}[{_fmt(ix)}]", mu, rq.dimension,
                                        ComponentKind.LINEAR, tuple(pts)))
        elif rq.dimension == 0:
            # a zero-dimensional quadric: one component per point
            for p in pts:
                comps.append(FixedComponent(f"P^0[{p}]", mu, 0, ComponentKind.LINEAR, (p,)))
        else:
            comps.append(FixedComponent(f"Q^{rq.dimension}[{_fmt(ix)}]", mu, rq.dimension,
                                        ComponentKind.QUADRIC, tuple(pts)))
    return _finish("quadric", a, q, comps)


def analyze_og(a: DiagonalAction, q: PairingQuadric) -> FixedComponentReport:
    model = _OG(a, q)
    by_mu: dict[int, list] = {}
    for p, mu in og_fixed_points(a, q):
        by_mu.setdefault(mu, []).append(p)
    lo, hi = min(by_mu), max(by_mu)
    comps = []
    for mu in sorted(by_mu):
        by_type: dict = {}
        for p in by_mu[mu]:
            by_type.setdefault(tuple(sorted(a.weights[i] for i in p)), []).append(p)
        for wt in sorted(by_type):
            for g in _split_by_fixed_lines(model, by_type[wt]):
                dim = sum(1 for x in model.tangent(g[0]) if x == 0)
                kind = ComponentKind.SUB_GRASSMANNIAN if mu in (lo, hi) else ComponentKind.INNER_OG
                label = f"OG[w={wt[0]},{wt[1]}|{_fmt(g[0])}]"
                comps.append(FixedComponent(label, mu, dim, kind, tuple(g)))
    return _finish("og2", a, q, comps)


def analyze(variety: str, a: DiagonalAction, q: PairingQuadric | None = None) -> FixedComponentReport:
    if variety == "pn":
        return analyze_pn(a)
    if variety == "quadric":
        if q is None:
            raise ActionError("the quadric case needs a quadric")
        return analyze_quadric(a, q)
    if variety == "og2":
        if q is None:
            raise ActionError("the og2 case needs a quadric")
        return analyze_og(a, q)
    raise ActionError(f"unknown variety {variety!r}")


def _fmt(ix) -> str:
    return ",".join(str(i) for i in ix)


# ---------------------------------------------------------------------------
# order graph


@dataclass(frozen=True)
class OrbitEdge:
    """An invariant curve from ``y_plus`` (limit t -> 0) to ``y_minus``."""

    source: str
    target: str
    y_plus: object
    y_minus: object
    mu_plus: int
    mu_minus: int
    delta_plus: int
    degree: int | None
    kind: str

    @property
    def am_fm_holds(self) -> bool | None:
        if self.degree is None:
            return None
        return self.mu_plus - self.mu_minus == self.delta_plus * self.degree

    def to_json(self) -> dict:
        def enc(p):
            return list(p) if isinstance(p, tuple) else p
        return {"source": self.source, "target": self.target, "y_plus": enc(self.y_plus),
                "y_minus": enc(self.y_minus), "mu_plus": self.mu_plus, "mu_minus": self.mu_minus,
                "delta_plus": self.delta_plus, "degree": self.degree, "kind": self.kind,
                "am_fm_holds": self.am_fm_holds}


@dataclass(frozen=True)
class OrderGraph:
    nodes: tuple
    curves: tuple           # every coordinate orbit examined
    edges: tuple            # (source label, target label), deduplicated

    def successors(self, label: str) -> list[str]:
        return sorted({t for s, t in self.edges if s == label})

    def to_json(self) -> dict:
        return {"nodes": list(self.nodes), "edges": [list(e) for e in self.edges],
                "curves": [c.to_json() for c in self.curves]}


def order_graph(report: FixedComponentReport) -> OrderGraph:
    model = report.model()
    where = {}
    for c in report.nonempty():
        for p in c.representatives:
            where[p] = c.label
    curves = []
    for cv in model.curves():
        a, b = cv.ends
        da, db = cv.deltas
        if da > 0:
            yp, ym, d = a, b, da
        else:
            yp, ym, d = b, a, db
        if d <= 0:
            continue
        s, t = where.get(yp), where.get(ym)
        if s is None or t is None or s == t:
            continue
        curves.append(OrbitEdge(s, t, yp, ym, model.mu(yp), model.mu(ym), d, cv.degree, cv.kind))
    edges = {(c.source, c.target) for c in curves}
    src, snk = report.source.label, report.sink.label
    if (src, snk) not in edges:
        # the general orbit joins source and sink
        curves.append(OrbitEdge(src, snk, None, None, report.source.mu, report.sink.mu, 0, None, "generic"))
        edges.add((src, snk))
    curves.sort(key=lambda c: (c.source, c.target, c.kind, repr(c.y_plus), repr(c.y_minus)))
    return OrderGraph(tuple(c.label for c in report.nonempty()), tuple(curves), tuple(sorted(edges)))


# ---------------------------------------------------------------------------
# verdict


class Verdict(str, enum.Enum):
    ATIYAH = "AtiyahLocal"
    NON_EQUALIZED = "NonEqualizedLocal"
    NOT_APPLICABLE = "NotApplicable"


@dataclass(frozen=True)
class PsiVerdict:
    verdict: Verdict
    reason: str | None
    criticality_two: bool
    bordism_after_blowup: bool
    picard_rank_one_assumed: bool
    order_condition: bool
    notes: tuple = ()

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value, "reason": self.reason,
                "hypotheses": {"criticality_two": self.criticality_two,
                               "bordism_after_blowup": self.bordism_after_blowup,
                               "picard_rank_one_assumed": self.picard_rank_one_assumed,
                               "order_condition": self.order_condition},
                "notes": list(self.notes)}


def classify_psi(report: FixedComponentReport, picard_rank_one: bool = False) -> PsiVerdict:
    """Local type of the birational map between the blown-up extremal components."""
    if any(not c.has_weights for c in report.nonempty()):
        raise IncompleteReport("every nonempty component needs normal weights")
    crit = report.criticality
    inner = report.inner()
    extremal = [report.sink, report.source]
    graph = order_graph(report)
    inner_labels = {c.label for c in inner}
    order_ok = not any(s in inner_labels and t in inner_labels for s, t in graph.edges)
    by_nu = all(c.nu_plus >= 2 and c.nu_minus >= 2 for c in inner)
    by_picard = picard_rank_one and all(c.dimension > 0 for c in extremal)
    bordism = by_nu or by_picard
    notes = []
    if all(c.dimension == 0 for c in extremal) and all(c.equalized for c in report.nonempty()):
        notes.append("ψ is the identity")

    def verdict(v, reason=None):
        return PsiVerdict(v, reason, crit == 2, bordism, picard_rank_one, order_ok, tuple(notes))

    if crit < 2:
        return verdict(Verdict.NOT_APPLICABLE, "criticality<2")
    if not bordism:
        return verdict(Verdict.NOT_APPLICABLE, "not a bordism after blow-up")
    if crit > 2 and not order_ok:
        return verdict(Verdict.NOT_APPLICABLE, "order condition fails")
    if all(c.equalized for c in inner):
        return verdict(Verdict.ATIYAH)
    return verdict(Verdict.NON_EQUALIZED)
