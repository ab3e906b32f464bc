"""Exact lattice and cone arithmetic.

Vectors are tuples of Python ints (or ``Fraction`` for rational points);
matrices are tuples of row tuples.  Nothing in this module touches floating
point.
"""

from __future__ import annotations

import itertools
from itertools import combinations
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, reduce
from math import comb, gcd, lcm
from typing import Iterable, Sequence

Vector = tuple
Matrix = tuple


class LatticeError(ValueError):
    pass


class NonPrimitive(LatticeError):
    pass


class NotSimplicial(LatticeError):
    pass


# ---------------------------------------------------------------------------
# vectors and matrices


def vgcd(v: Iterable[int]) -> int:
    """gcd of the entries; 0 for the zero (or empty) vector."""
    return reduce(gcd, (abs(int(x)) for x in v), 0)


def is_primitive(v: Sequence[int]) -> bool:
    return vgcd(v) == 1


def primitive(v: Sequence) -> Vector:
    """Primitive integer vector on the ray through a nonzero rational vector."""
    if all(type(x) is int for x in v):
        ints = list(v)
    else:
        den = reduce(lcm, (Fraction(x).denominator for x in v), 1)
        ints = [int(Fraction(x) * den) for x in v]
    g = vgcd(ints)
    if g == 0:
        raise LatticeError("zero vector has no primitive part")
    return tuple(x // g for x in ints)


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def as_matrix(rows: Iterable[Iterable[int]]) -> Matrix:
    m = tuple(tuple(int(x) for x in r) for r in rows)
    if m and len({len(r) for r in m}) != 1:
        raise LatticeError("matrix rows have unequal lengths")
    return m


def identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence]) -> Matrix:
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(dot(r, c) for c in bt) for r in a)


def matvec(a: Sequence[Sequence], v: Sequence) -> Vector:
    return tuple(dot(r, v) for r in a)


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def solve_scaled(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> tuple[list[list[int]], int]:
    """Integer ``(X, d)`` with ``a X = d b`` and ``d != 0``, for square non-singular ``a``.

    Fraction-free Gauss-Jordan elimination (Bareiss): every division is exact.
    """
    n = len(a)
    m = [list(ra) + list(rb) for ra, rb in zip(a, b)]
    prev = 1
    for k in range(n):
        p = next((i for i in range(k, n) if m[i][k] != 0), None)
        if p is None:
            raise LatticeError("singular matrix")
        m[k], m[p] = m[p], m[k]
        pk = m[k]
        piv = pk[k]
        for i in range(n):
            if i == k:
                continue
            row = m[i]
            f = row[k]
            m[i] = [(piv * x - f * y) // prev for x, y in zip(row, pk)]
        prev = piv
    return [row[n:] for row in m], prev


def rref(m: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    a = [[Fraction(x) for x in r] for r in m]
    ncols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def rank(m: Sequence[Sequence]) -> int:
    if not m:
        return 0
    if not all(isinstance(x, int) for r in m for x in r):
        return len(rref(m)[1])
    # fraction-free elimination keeps integer inputs fast
    a = [list(r) for r in m]
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        piv = a[r]
        for i in range(r + 1, len(a)):
            f = a[i][c]
            if f:
                row = [x * piv[c] - f * y for x, y in zip(a[i], piv)]
                g = vgcd(row)
                a[i] = [x // g for x in row] if g > 1 else row
        r += 1
        if r == len(a):
            break
    return r


def nullspace(m: Sequence[Sequence], ncols: int | None = None) -> list[Vector]:
    """Primitive integer basis of {x : m x = 0}."""
    if ncols is None:
        ncols = len(m[0])
    if not m:
        return [tuple(int(i == j) for j in range(ncols)) for i in range(ncols)]
    rows, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for row, p in zip(rows, pivots):
            x[p] = -row[f]
        basis.append(primitive(x))
    return basis


def solve_in_span(gens: Sequence[Sequence[int]], p: Sequence) -> tuple[Fraction, ...] | None:
    """Coefficients c with sum c_i gens_i = p, or None if p is not in the span.

    ``gens`` must be linearly independent.
    """
    k = len(gens)
    if k == 0:
        return () if all(x == 0 for x in p) else None
    # augmented system gens^T c = p
    aug = [[g[i] for g in gens] + [p[i]] for i in range(len(p))]
    rows, pivots = rref(aug)
    if k in pivots:
        return None
    coeffs = [Fraction(0)] * k
    for row, piv in zip(rows, pivots):
        coeffs[piv] = row[k]
    return tuple(coeffs)


# ---------------------------------------------------------------------------
# Smith and Hermite normal forms


def snf(m: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form.

    Returns ``(U, D, V)`` with ``U @ M @ V == D``, ``U`` and ``V`` unimodular,
    ``D`` diagonal with non-negative entries and ``D[0][0] | D[1][1] | ...``.
    """
    m = as_matrix(m)
    if not m or not m[0]:
        raise LatticeError("snf needs a nonempty matrix")
    rows, cols = len(m), len(m[0])
    d = [list(r) for r in m]
    u = [list(r) for r in identity(rows)]
    v = [list(r) for r in identity(cols)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for r in d:
            r[i], r[j] = r[j], r[i]
        for r in v:
            r[i], r[j] = r[j], r[i]

    def add_row(dst, src, f):
        d[dst] = [x + f * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + f * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, f):
        for r in d:
            r[dst] += f * r[src]
        for r in v:
            r[dst] += f * r[src]

    for t in range(min(rows, cols)):
        while True:
            entries = [(abs(d[i][j]), i, j) for i in range(t, rows)
                       for j in range(t, cols) if d[i][j] != 0]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            piv = d[t][t]
            dirty = False
            for i in range(t + 1, rows):
                if d[i][t]:
                    add_row(i, t, -(d[i][t] // piv))
                    dirty |= d[i][t] != 0
            for j in range(t + 1, cols):
                if d[t][j]:
                    add_col(j, t, -(d[t][j] // piv))
                    dirty |= d[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, rows)
                        if any(d[i][j] % piv for j in range(t + 1, cols))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return as_matrix(u), as_matrix(d), as_matrix(v)


def hnf_rows(m: Sequence[Sequence[int]]) -> Matrix:
    """Row Hermite normal form of an integer matrix (zero rows dropped).

    Upper echelon, positive pivots, entries above each pivot reduced into
    ``[0, pivot)``.  Two matrices have the same row lattice iff their HNFs agree.
    """
    a = [list(r) for r in as_matrix(m)]
    if not a:
        return ()
    ncols = len(a[0])
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(a)) if a[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][c]))
            a[r], a[p] = a[p], a[r]
            done = True
            for i in range(r + 1, len(a)):
                if a[i][c]:
                    q = a[i][c] // a[r][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
                    done &= a[i][c] == 0
            if done:
                break
        if r < len(a) and a[r][c] != 0:
            if a[r][c] < 0:
                a[r] = [-x for x in a[r]]
            for i in range(r):
                q = a[i][c] // a[r][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[r])]
            r += 1
            if r == len(a):
                break
    return as_matrix(row for row in a if any(row))


def quotient_projection(v: Sequence[int], canonical: bool = True) -> Matrix:
    """Integer matrix of the projection ``Z^{n+1} -> Z^{n+1} / Z v``.

    The result ``P`` is ``n x (n+1)`` with ``P v = 0`` and ``P`` surjective.
    Any such ``P`` is a valid choice; with ``canonical=True`` the row HNF is
    returned so that the choice does not depend on the elimination order.
    """
    v = tuple(int(x) for x in v)
    if len(v) < 2:
        raise LatticeError("need a vector of length >= 2")
    if not is_primitive(v):
        raise NonPrimitive(f"{v} is not primitive (gcd {vgcd(v)})")
    u, _, _ = snf([[x] for x in v])
    p = as_matrix(u[1:])
    if canonical:
        p = hnf_rows(p)
    assert all(x == 0 for x in matvec(p, v))
    return p


# ---------------------------------------------------------------------------
# Fourier-Motzkin elimination


@dataclass
class _Row:
    coeffs: list[Fraction]
    const: Fraction
    origin: frozenset = frozenset()

    def normalized(self) -> "_Row":
        vals = [c for c in self.coeffs if c] + ([self.const] if self.const else [])
        if not vals:
            return self
        den = reduce(lcm, (x.denominator for x in vals), 1)
        num = reduce(gcd, (abs(int(x * den)) for x in vals), 0)
        s = Fraction(den, num)
        return _Row([c * s for c in self.coeffs], self.const * s, self.origin)

    def key(self):
        return tuple(self.coeffs), self.const


def _substitute(row: _Row, var: int, expr: _Row) -> _Row:
    # expr gives x_var = expr.coeffs . x + expr.const (expr.coeffs[var] == 0)
    c = row.coeffs[var]
    if c == 0:
        return row
    coeffs = [a + c * b for a, b in zip(row.coeffs, expr.coeffs)]
    coeffs[var] = Fraction(0)
    return _Row(coeffs, row.const + c * expr.const, row.origin | expr.origin)


class FourierMotzkin:
    """Exact elimination for systems ``a.x + b >= 0`` and ``a.x + b == 0``.

    Used in two ways: projecting a homogeneous system onto a subset of its
    variables (dual descriptions of cones), and deciding feasibility of a
    small affine system together with an explicit rational solution.
    """

    def __init__(self, nvars: int, eqs=(), ineqs=()):
        self.nvars = nvars
        self.eqs = [_Row([Fraction(c) for c in a], Fraction(b)) for a, b in eqs]
        self.ineqs = [_Row([Fraction(c) for c in a], Fraction(b), frozenset([i]))
                      for i, (a, b) in enumerate(ineqs)]
        self._gauss: list[tuple[int, _Row]] = []
        self._stages: list[tuple[int, list[_Row]]] = []
        self.infeasible = False

    def eliminate(self, variables: Iterable[int]) -> None:
        variables = list(variables)
        self._clean()
        # equalities first: each one that mentions a target variable removes it
        for var in variables:
            row = next((r for r in self.eqs if r.coeffs[var] != 0), None)
            if row is None:
                continue
            self.eqs.remove(row)
            f = -1 / row.coeffs[var]
            expr = _Row([c * f for c in row.coeffs], row.const * f, row.origin)
            expr.coeffs[var] = Fraction(0)
            self._gauss.append((var, expr))
            self.eqs = [_substitute(r, var, expr) for r in self.eqs]
            self.ineqs = [_substitute(r, var, expr) for r in self.ineqs]
            self._clean()
        eliminated = len(self._gauss)
        for var in variables:
            if any(v == var for v, _ in self._gauss):
                continue
            self._stages.append((var, list(self.ineqs)))
            pos = [r for r in self.ineqs if r.coeffs[var] > 0]
            neg = [r for r in self.ineqs if r.coeffs[var] < 0]
            new = [r for r in self.ineqs if r.coeffs[var] == 0]
            eliminated += 1
            for p in pos:
                for n in neg:
                    origin = p.origin | n.origin
                    # Chernikov: a combination of more than (k+1) originals is redundant
                    if len(origin) > eliminated - len(self._gauss) + 1:
                        continue
                    a, b = p.coeffs[var], -n.coeffs[var]
                    row = _Row([b * x + a * y for x, y in zip(p.coeffs, n.coeffs)],
                               b * p.const + a * n.const, origin)
                    row.coeffs[var] = Fraction(0)
                    new.append(row)
            self.ineqs = new
            self._clean()

    def _clean(self) -> None:
        seen = {}
        for r in self.ineqs:
            r = r.normalized()
            if not any(r.coeffs):
                if r.const < 0:
                    self.infeasible = True
                continue
            k = r.key()
            if k not in seen or len(r.origin) < len(seen[k].origin):
                seen[k] = r
        self.ineqs = list(seen.values())
        eqs = []
        for r in self.eqs:
            r = r.normalized()
            if not any(r.coeffs):
                if r.const != 0:
                    self.infeasible = True
                continue
            eqs.append(r)
        self.eqs = eqs

    def solve(self) -> list[Fraction] | None:
        """Eliminate everything; return a rational solution or None."""
        self.eliminate(range(self.nvars))
        if self.infeasible:
            return None
        x = [Fraction(0)] * self.nvars
        for var, rows in reversed(self._stages):
            lo, hi = None, None
            for r in rows:
                c = r.coeffs[var]
                if c == 0:
                    continue
                rest = r.const + sum(a * b for i, (a, b) in enumerate(zip(r.coeffs, x))
                                     if i != var)
                bound = -rest / c
                if c > 0:
                    lo = bound if lo is None else max(lo, bound)
                else:
                    hi = bound if hi is None else min(hi, bound)
            if lo is not None and hi is not None:
                if lo > hi:
                    return None
                x[var] = (lo + hi) / 2
            elif lo is not None:
                x[var] = lo + 1
            elif hi is not None:
                x[var] = hi - 1
            else:
                x[var] = Fraction(0)
        for var, expr in reversed(self._gauss):
            x[var] = expr.const + dot(expr.coeffs, x)
        return x


# ---------------------------------------------------------------------------
# cones


def _normalize_generators(gens: Iterable[Sequence], ambient_rank: int | None):
    prim = sorted({primitive(g) for g in gens if any(x != 0 for x in g)})
    if ambient_rank is None:
        if not prim:
            raise LatticeError("ambient_rank is required for the zero cone")
        ambient_rank = len(prim[0])
    if any(len(g) != ambient_rank for g in prim):
        raise LatticeError("generator length does not match ambient rank")
    return prim, ambient_rank


def feasible_nonneg(a: Sequence[Sequence], b: Sequence) -> list[Fraction] | None:
    """A vertex ``x >= 0`` with ``a x = b``, or None if there is none.

    Phase one of the simplex method with Bland's rule.  The tableau is kept
    integral by fraction-free pivoting: every row except the pivot row is
    updated as ``(t * piv - f * pivot_row) / prev``, an exact division.
    """
    m = len(a)
    n = len(a[0]) if m else 0
    rows = []
    for ai, bi in zip(a, b):
        vals = list(ai) + [bi]
        if not all(type(x) is int for x in vals):
            den = reduce(lcm, (Fraction(x).denominator for x in vals), 1)
            vals = [int(Fraction(x) * den) for x in vals]
        if vals[-1] < 0:
            vals = [-x for x in vals]
        rows.append(vals)
    # columns: n originals, m artificials, rhs; the last row is the phase-one cost
    t = [r[:n] + [int(i == k) for k in range(m)] + [r[n]] for i, r in enumerate(rows)]
    t.append([-sum(r[j] for r in rows) for j in range(n)] + [0] * m + [-sum(r[n] for r in rows)])
    basis = [n + i for i in range(m)]
    width = n + m
    prev = 1
    cost = t[m]
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        r = -1
        for i in range(m):
            if t[i][enter] > 0:
                if r < 0:
                    r = i
                    continue
                lhs, rhs = t[i][-1] * t[r][enter], t[r][-1] * t[i][enter]
                if lhs < rhs or (lhs == rhs and basis[i] < basis[r]):
                    r = i
        if r < 0:  # cannot happen in phase one: the objective is bounded below
            raise AssertionError("unbounded phase-one problem")
        pr = t[r]
        piv = pr[enter]
        for i in range(m + 1):
            if i == r:
                continue
            row = t[i]
            f = row[enter]
            if f:
                t[i] = [(x * piv - f * y) // prev for x, y in zip(row, pr)]
            elif piv != prev:
                t[i] = [x * piv // prev for x in row]
        prev = piv
        cost = t[m]
        basis[r] = enter
    if cost[-1] != 0:
        return None
    x = [Fraction(0)] * n
    for i, j in enumerate(basis):
        if j < n:
            x[j] = Fraction(t[i][-1], prev)
    return x


def nonneg_combination(p: Sequence, gens: Sequence[Vector]) -> bool:
    """Is p a non-negative combination of gens?"""
    if not gens:
        return all(x == 0 for x in p)
    a = [[g[i] for g in gens] for i in range(len(p))]
    return feasible_nonneg(a, list(p)) is not None


_SUBSET_LIMIT = 400


@dataclass(frozen=True)
class Cone:
    """Rational polyhedral cone given by its minimal primitive generators.

    Generators are normalized on construction: primitive, deduplicated,
    lexicographically sorted, redundant ones dropped.
    """

    generators: tuple = ()
    ambient_rank: int | None = None

    def __post_init__(self):
        gens, r = _normalize_generators(self.generators, self.ambient_rank)
        if rank(gens) < len(gens):
            changed = True
            while changed:
                changed = False
                for g in gens:
                    others = [h for h in gens if h != g]
                    if nonneg_combination(g, others):
                        gens = others
                        changed = True
                        break
        object.__setattr__(self, "generators", tuple(gens))
        object.__setattr__(self, "ambient_rank", r)

    @classmethod
    def _trusted(cls, gens: tuple, ambient_rank: int, dim: int | None = None) -> "Cone":
        # gens must already be primitive, sorted and irredundant
        c = object.__new__(cls)
        object.__setattr__(c, "generators", gens)
        object.__setattr__(c, "ambient_rank", ambient_rank)
        if dim is not None:
            c.__dict__["dim"] = dim
        return c

    @classmethod
    def zero(cls, ambient_rank: int) -> "Cone":
        return cls((), ambient_rank)

    def __repr__(self):
        return f"Cone({[list(g) for g in self.generators]})"

    def __len__(self):
        return len(self.generators)

    @cached_property
    def dim(self) -> int:
        return rank(self.generators) if self.generators else 0

    @property
    def is_simplicial(self) -> bool:
        return self.dim == len(self.generators)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_rank

    @cached_property
    def equations(self) -> tuple[Vector, ...]:
        """Primitive integer normals m with m . x = 0 on the span of the cone."""
        if not self.generators:
            return identity(self.ambient_rank)
        return tuple(nullspace(self.generators, self.ambient_rank))

    @cached_property
    def inequalities(self) -> tuple[Vector, ...]:
        """Facet normals m (primitive, m . x >= 0 on the cone), sorted.

        Together with :attr:`equations` this is an irredundant description of
        the cone.  Simplicial cones use the dual basis of their generators;
        other cones go through Fourier-Motzkin elimination.
        """
        if self.is_simplicial:
            return self._simplicial_inequalities()
        if comb(len(self.generators), self.dim - 1) <= _SUBSET_LIMIT:
            return self._subset_inequalities()
        return self.fm_inequalities()

    def _subset_inequalities(self):
        # every facet is spanned by dim - 1 independent generators
        gens, eqs = self.generators, list(self.equations)
        facets = set()
        for sub in combinations(gens, self.dim - 1):
            ns = nullspace(list(sub) + eqs, self.ambient_rank)
            if len(ns) != 1:
                continue
            m = primitive(ns[0])
            vals = [dot(m, g) for g in gens]
            if all(x >= 0 for x in vals):
                facets.add(m)
            elif all(x <= 0 for x in vals):
                facets.add(tuple(-t for t in m))
        return tuple(sorted(facets))

    def _simplicial_inequalities(self):
        gens = self.generators
        if not gens:
            return ()
        k, r = len(gens), self.ambient_rank
        if k == r:
            # columns of G^{-1} (G has the generators as rows)
            x, d = solve_scaled(gens, identity(k))
            cols = [[x[j][i] for j in range(k)] for i in range(k)]
        else:
            # rows of (G G^T)^{-1} G form the dual basis inside span(G)
            gram = [[dot(a, b) for b in gens] for a in gens]
            x, d = solve_scaled(gram, identity(k))
            cols = [[sum(x[i][j] * gens[j][c] for j in range(k)) for c in range(r)] for i in range(k)]
        duals = []
        for i, col in enumerate(cols):
            m = primitive(col)
            if dot(m, gens[i]) < 0:
                m = tuple(-t for t in m)
            duals.append(m)
        return tuple(sorted(duals))

    def fm_inequalities(self) -> tuple[Vector, ...]:
        """Facet normals by eliminating the multipliers from ``G^T lam = x, lam >= 0``."""
        gens = self.generators
        m, r = len(gens), self.ambient_rank
        if m == 0:
            return ()
        nv = m + r
        eqs = []
        for i in range(r):
            row = [g[i] for g in gens] + [-int(j == i) for j in range(r)]
            eqs.append((row, 0))
        ineqs = [([int(j == i) for j in range(nv)], 0) for i in range(m)]
        fm = FourierMotzkin(nv, eqs, ineqs)
        fm.eliminate(range(m))
        facets = set()
        for row in fm.ineqs:
            normal = primitive(row.coeffs[m:])
            # keep facets only: tight generators must span a hyperplane of the cone
            tight = [g for g in gens if dot(normal, g) == 0]
            if any(dot(normal, g) < 0 for g in gens):
                raise AssertionError("Fourier-Motzkin produced an invalid inequality")
            if len(tight) == m:
                continue
            if (rank(tight) if tight else 0) == self.dim - 1:
                facets.add(self._reduce_normal(normal))
        return tuple(sorted(facets))

    def _reduce_normal(self, normal: Vector) -> Vector:
        # canonical representative modulo the equations: the tight generator set
        # determines the facet, so pick a normal in span(generators)
        if not self.equations:
            return normal
        gens = self.generators
        basis = [tuple(x) for x in rref(gens)[0]]
        proj = _project_onto_span(normal, basis)
        return primitive(proj)

    def contains(self, p: Sequence) -> bool:
        return self.locate(p) != "outside"

    def locate(self, p: Sequence) -> str:
        """'interior' (relative interior), 'boundary' or 'outside'."""
        if len(p) != self.ambient_rank:
            raise LatticeError("dimension mismatch")
        if any(dot(e, p) != 0 for e in self.equations):
            return "outside"
        vals = [dot(m, p) for m in self.inequalities]
        if any(x < 0 for x in vals):
            return "outside"
        if all(x > 0 for x in vals):
            return "interior"
        return "boundary"

    def coefficients(self, p: Sequence) -> tuple[Fraction, ...] | None:
        """Coordinates of p in the generator basis (simplicial cones only)."""
        if not self.is_simplicial:
            raise NotSimplicial(f"{self} is not simplicial")
        return solve_in_span(self.generators, p)

    def faces(self) -> list["Cone"]:
        """All faces, including the zero cone and the cone itself."""
        if self.is_simplicial:
            return [Cone._trusted(sub, self.ambient_rank, k)
                    for k in range(len(self.generators) + 1)
                    for sub in itertools.combinations(self.generators, k)]
        tight_sets = {frozenset(self.generators)}
        for k in range(1, len(self.inequalities) + 1):
            for ms in itertools.combinations(self.inequalities, k):
                tight_sets.add(frozenset(g for g in self.generators
                                         if all(dot(m, g) == 0 for m in ms)))
        return sorted({Cone(tuple(s), self.ambient_rank) for s in tight_sets}, key=cone_key)

    def facets(self) -> list["Cone"]:
        if self.is_simplicial:
            k = len(self.generators)
            return [Cone._trusted(sub, self.ambient_rank, k - 1)
                    for sub in itertools.combinations(self.generators, k - 1)] if k else []
        return [f for f in self.faces() if f.dim == self.dim - 1]

    def is_face_of(self, other: "Cone") -> bool:
        return any(f == self for f in other.faces())

    def relint_point(self) -> Vector:
        """Sum of generators: a lattice point in the relative interior."""
        if not self.generators:
            return (0,) * self.ambient_rank
        return tuple(sum(c) for c in zip(*self.generators))

    def to_json(self) -> dict:
        return {"generators": [list(g) for g in self.generators]}


def _project_onto_span(vec: Sequence, basis: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """Orthogonal projection of ``vec`` onto the row span of ``basis``."""
    k = len(basis)
    gram = [[sum(a * b for a, b in zip(x, y)) for y in basis] for x in basis]
    rhs = [sum(a * b for a, b in zip(x, vec)) for x in basis]
    rows, _ = rref([gram[i] + [rhs[i]] for i in range(k)])
    coef = [r[k] for r in rows]
    return [sum(coef[i] * basis[i][c] for i in range(k)) for c in range(len(vec))]


def cone_key(c: Cone):
    return (len(c.generators), c.generators)


def cone_index(c: Cone) -> int:
    """Index of the generated sublattice inside the saturation of its span.

    For a full-dimensional simplicial cone this is ``|det|`` of the generator
    matrix; the cone is smooth iff the index is 1.
    """
    if not c.is_simplicial:
        raise NotSimplicial(f"{c} is not simplicial")
    if not c.generators:
        return 1
    _, d, _ = snf(c.generators)
    out = 1
    for i in range(len(c.generators)):
        out *= d[i][i]
    return out


def is_smooth(c: Cone) -> bool:
    return c.is_simplicial and cone_index(c) == 1


def project_cone(p: Sequence[Sequence[int]], c: Cone) -> Cone:
    """Image of a cone under an integer linear map."""
    rows = len(p)
    images = [matvec(p, g) for g in c.generators]
    return Cone([x for x in images if any(x)], rows)


def point_in_cone(p: Sequence, c: Cone) -> str:
    return c.locate(p)


# ---------------------------------------------------------------------------
# common faces and fans


@dataclass(frozen=True)
class NotCommonFace:
    """Two cones meet outside any common face; ``witness`` lies in both."""

    witness: Vector


def _separates(m: Sequence, pos: Sequence[Vector], neg: Sequence[Vector]) -> bool:
    return all(dot(m, g) > 0 for g in pos) and all(dot(m, h) < 0 for h in neg)


def common_face(c1: Cone, c2: Cone) -> Cone | NotCommonFace:
    """Return ``c1 & c2`` when it is a face of both, else a witness point.

    Both cones must be simplicial.  The intersection is then a common face iff
    it equals the cone on the shared generators S; this fails exactly when
    sum a_g g - sum b_h h lies in span(S) for some a, b >= 0 not all zero
    (g running over c1's other generators, h over c2's).
    """
    if c1.ambient_rank != c2.ambient_rank:
        raise LatticeError("ambient ranks differ")
    for c in (c1, c2):
        if not c.is_simplicial:
            raise NotSimplicial(f"{c} is not simplicial")
    shared = sorted(set(c1.generators) & set(c2.generators))
    g1 = [g for g in c1.generators if g not in shared]
    g2 = [h for h in c2.generators if h not in shared]
    face = Cone(shared, c1.ambient_rank)
    if not g1 or not g2:
        # one cone is spanned by shared generators, hence a face of the other
        return face
    # cheap certificates first: a dual-basis functional that separates
    for cone, pos, neg in ((c1, g1, g2), (c2, g2, g1)):
        duals = cone.inequalities
        cand = [m for m in duals if all(dot(m, s) == 0 for s in shared)]
        if cand:
            m = tuple(sum(col) for col in zip(*cand))
            if _separates(m, pos, neg) and all(dot(m, s) == 0 for s in shared):
                return face
    return _check_by_lp(c1, c2, shared, g1, g2)


def _check_by_lp(c1, c2, shared, g1, g2) -> Cone | NotCommonFace:
    r = c1.ambient_rank
    na, nb, ns = len(g1), len(g2), len(shared)
    # sum a g - sum b h - sum (c+ - c-) s = 0,  sum a + sum b = 1,  all >= 0
    a = [[g[i] for g in g1] + [-h[i] for h in g2] + [-s[i] for s in shared] + [s[i] for s in shared]
         for i in range(r)]
    a.append([1] * (na + nb) + [0] * (2 * ns))
    sol = feasible_nonneg(a, [0] * r + [1])
    face = Cone(shared, r)
    if sol is None:
        return face
    ca = sol[:na]
    c = [sol[na + nb + j] - sol[na + nb + ns + j] for j in range(ns)]
    # x = sum a g + sum alpha s = sum b h + sum (c + alpha) s with alpha, c + alpha > 0
    alpha = [max(Fraction(0), -x) + 1 for x in c]
    x = [sum(ca[j] * g1[j][i] for j in range(na)) + sum(alpha[j] * shared[j][i] for j in range(ns))
         for i in range(r)]
    witness = primitive(x)
    assert c1.contains(witness) and c2.contains(witness)
    return NotCommonFace(witness)


@dataclass
class ValidationReport:
    missing_faces: list = field(default_factory=list)
    overlaps: list = field(default_factory=list)  # (cone, cone, witness)

    @property
    def valid(self) -> bool:
        return not self.missing_faces and not self.overlaps

    def to_json(self) -> dict:
        return {
            "valid": self.valid,
            "missing_faces": [c.to_json() for c in self.missing_faces],
            "overlaps": [{"cones": [a.to_json(), b.to_json()], "witness": list(w)}
                         for a, b, w in self.overlaps],
        }


class Fan:
    """A finite collection of cones in a common lattice.

    ``Fan(cones)`` stores exactly the cones given; :meth:`from_maximal`
    closes a list of cones under taking faces.
    """

    def __init__(self, cones: Iterable[Cone], ambient_rank: int | None = None):
        cones = sorted(set(cones), key=cone_key)
        if ambient_rank is None:
            if not cones:
                raise LatticeError("ambient_rank is required for an empty fan")
            ambient_rank = cones[0].ambient_rank
        if any(c.ambient_rank != ambient_rank for c in cones):
            raise LatticeError("cones live in different lattices")
        self.cones: tuple[Cone, ...] = tuple(cones)
        self.ambient_rank = ambient_rank
        self._set = frozenset(cones)
        self._maximal = None

    @classmethod
    def from_maximal(cls, cones: Iterable[Cone], ambient_rank: int | None = None) -> "Fan":
        cones = list(cones)
        if ambient_rank is None and cones:
            ambient_rank = cones[0].ambient_rank
        allc = {f for c in cones for f in c.faces()}
        return cls(allc, ambient_rank)

    def __contains__(self, c: Cone) -> bool:
        return c in self._set

    def __iter__(self):
        return iter(self.cones)

    def __len__(self):
        return len(self.cones)

    def __eq__(self, other):
        return isinstance(other, Fan) and self._set == other._set and \
            self.ambient_rank == other.ambient_rank

    def __hash__(self):
        return hash(self._set)

    def __repr__(self):
        return f"Fan({list(self.maximal_cones())})"

    @property
    def closed_under_faces(self) -> bool:
        return not self._missing_faces()

    def maximal_cones(self) -> list[Cone]:
        if self._maximal is None:
            # a cone below any other cone lies below a maximal one
            found: list[tuple[Cone, frozenset]] = []
            for c in sorted(self.cones, key=lambda c: -len(c.generators)):
                s = frozenset(c.generators)
                if not any(s < t for _, t in found):
                    found.append((c, s))
            self._maximal = [c for c, _ in sorted(found, key=lambda x: cone_key(x[0]))]
        return list(self._maximal)

    def cones_of_dim(self, k: int) -> list[Cone]:
        return [c for c in self.cones if c.dim == k]

    def rays(self) -> list[Vector]:
        return sorted({g for c in self.cones for g in c.generators})

    def support_contains(self, p: Sequence) -> bool:
        return any(c.contains(p) for c in self.maximal_cones())

    def _missing_faces(self) -> list[Cone]:
        missing = set()
        keys = {c.generators for c in self.cones}
        for c in self.cones:
            if not c.generators:
                continue
            if c.is_simplicial:
                k = len(c.generators)
                for sub in itertools.combinations(c.generators, k - 1):
                    if sub not in keys:
                        missing.add(Cone._trusted(sub, self.ambient_rank, k - 1))
                continue
            for f in c.facets():
                if f.generators not in keys:
                    missing.add(f)
        return sorted(missing, key=cone_key)

    def union(self, *others: "Fan") -> "Fan":
        return Fan(itertools.chain(self.cones, *(o.cones for o in others)), self.ambient_rank)

    def to_json(self) -> dict:
        return {"ambient_rank": self.ambient_rank,
                "cones": [c.to_json() for c in self.cones]}

    def maximal_to_json(self) -> dict:
        return {"ambient_rank": self.ambient_rank,
                "cones": [c.to_json() for c in sorted(self.maximal_cones(), key=cone_key)]}

    @classmethod
    def from_json(cls, data: dict) -> "Fan":
        r = int(data["ambient_rank"])
        return cls([Cone([[int(x) for x in g] for g in c["generators"]], r)
                    for c in data["cones"]], r)


def validate_fan(f: Fan) -> ValidationReport:
    """Check face closure and that maximal cones meet along common faces.

    Pairwise checks are only needed on maximal cones: if those intersect in
    common faces, so do all their faces.
    """
    report = ValidationReport(missing_faces=f._missing_faces())
    maximal = f.maximal_cones()
    for a, b in itertools.combinations(maximal, 2):
        res = common_face(a, b)
        if isinstance(res, NotCommonFace):
            report.overlaps.append((a, b, res.witness))
    return report


# ---------------------------------------------------------------------------
# subdivision certificates


@dataclass
class SubdivisionReport:
    cones_inside: bool
    dimensions_ok: bool
    overlaps: list
    facet_matching_ok: bool
    samples: int
    uncovered: list

    @property
    def ok(self) -> bool:
        return (self.cones_inside and self.dimensions_ok and not self.overlaps
                and self.facet_matching_ok and not self.uncovered)

    def to_json(self) -> dict:
        return {"ok": self.ok, "cones_inside": self.cones_inside,
                "dimensions_ok": self.dimensions_ok,
                "overlaps": [list(w) for _, _, w in self.overlaps],
                "facet_matching_ok": self.facet_matching_ok,
                "samples": self.samples, "uncovered": [list(p) for p in self.uncovered]}


def verify_subdivision(support: Cone, cones: Sequence[Cone], samples: int = 200,
                       seed: int = 0) -> SubdivisionReport:
    """Certify that simplicial ``cones`` subdivide ``support``.

    Checks, all exact: every cone lies in the support and has its dimension;
    relative interiors are pairwise disjoint (common-face test); every facet
    of a cone lies either on the boundary of the support or is shared with
    exactly one other cone (which makes the union closed and open in the
    support, hence all of it).  On top of that, ``samples`` deterministic
    pseudo-random lattice points of the support are located in the union.
    """
    import random

    inside = all(support.contains(g) for c in cones for g in c.generators)
    dims_ok = all(c.is_simplicial and c.dim == support.dim for c in cones)
    overlaps = []
    for a, b in itertools.combinations(cones, 2):
        res = common_face(a, b)
        if isinstance(res, NotCommonFace):
            overlaps.append((a, b, res.witness))
    facet_ok = True
    owners: dict[Cone, list[Cone]] = {}
    for c in cones:
        for f in c.facets():
            owners.setdefault(f, []).append(c)
    for f, cs in owners.items():
        on_boundary = any(all(dot(m, g) == 0 for g in f.generators) for m in support.inequalities)
        if on_boundary:
            facet_ok &= len(cs) == 1
        else:
            facet_ok &= len(cs) == 2
    rng = random.Random(seed)
    gens = support.generators
    uncovered = []
    for _ in range(samples):
        coeffs = [rng.randint(0, 4) for _ in gens]
        if not any(coeffs):
            coeffs[rng.randrange(len(gens))] = 1
        p = tuple(sum(c * g[i] for c, g in zip(coeffs, gens)) for i in range(support.ambient_rank))
        if not any(c.contains(p) for c in cones):
            uncovered.append(p)
    return SubdivisionReport(inside, dims_ok, overlaps, facet_ok, samples, uncovered)
