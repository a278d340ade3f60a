"""Exact rational linear programming.

Two-phase simplex with Bland's anti-cycling rule on a dense tableau. Arithmetic
uses ``gmpy2.mpq`` when available and :class:`fractions.Fraction` otherwise;
inputs and outputs are always ``Fraction``.

Problems are in the form::

    minimise    c . x
    subject to  A_eq x == b_eq,  A_ub x <= b_ub,  x >= 0
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Hashable, Sequence

try:  # pragma: no cover - exercised implicitly
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

_ZERO = _Q(0)
_ONE = _Q(1)


def _q(x) -> object:
    t = type(x)
    if t is int:
        return _Q(x)
    if t is Fraction:
        return _Q(x.numerator, x.denominator)
    if isinstance(x, Fraction):
        return _Q(x.numerator, x.denominator)
    return _Q(x)


def _frac(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


class PivotLimit(RuntimeError):
    """The configured pivot cap was hit before the simplex terminated."""


@dataclass
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: list | None = None
    value: Fraction | None = None
    pivots: int = 0

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


class _Tableau:
    """Rows ``basis[i] : sum_j T[i][j] x_j = rhs[i]`` plus a reduced-cost row."""

    def __init__(self, rows, rhs, ncols, max_pivots=None):
        self.T = rows
        self.rhs = rhs
        self.ncols = ncols
        self.basis = [None] * len(rows)
        self.pivots = 0
        self.max_pivots = max_pivots

    def pivot(self, r: int, j: int, cost=None):
        if self.max_pivots is not None and self.pivots >= self.max_pivots:
            raise PivotLimit(f"pivot cap {self.max_pivots} reached")
        self.pivots += 1
        T, rhs = self.T, self.rhs
        row = T[r]
        p = row[j]
        if p != _ONE:
            inv = _ONE / p
            for k in range(self.ncols):
                if row[k]:
                    row[k] *= inv
            rhs[r] *= inv
        nz = [k for k in range(self.ncols) if row[k]]
        b = rhs[r]
        for i in range(len(T)):
            if i == r:
                continue
            other = T[i]
            fct = other[j]
            if fct:
                for k in nz:
                    other[k] -= fct * row[k]
                rhs[i] -= fct * b
        if cost is not None:
            fct = cost[0][j]
            if fct:
                cc = cost[0]
                for k in nz:
                    cc[k] -= fct * row[k]
                cost[1] -= fct * b
        self.basis[r] = j

    def run(self, cost, allowed):
        """Bland's rule on ``cost = [reduced_costs, -objective]``."""
        T, rhs = self.T, self.rhs
        while True:
            cc = cost[0]
            enter = -1
            for j in range(self.ncols):
                if allowed[j] and cc[j] < 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            leave = -1
            best = None
            for i in range(len(T)):
                a = T[i][enter]
                if a > 0:
                    ratio = rhs[i] / a
                    if (best is None or ratio < best
                            or (ratio == best and self.basis[i] < self.basis[leave])):
                        best = ratio
                        leave = i
            if leave < 0:
                return "unbounded"
            self.pivot(leave, enter, cost)

    def solution(self, n):
        x = [_ZERO] * n
        for i, j in enumerate(self.basis):
            if j < n:
                x[j] = self.rhs[i]
        return x


def _standard_form(A_eq, b_eq, A_ub, b_ub, n):
    rows, rhs = [], []
    m_ub = len(A_ub)
    ncols = n + m_ub
    for a, b in zip(A_eq, b_eq):
        rows.append([_q(v) if v else _ZERO for v in a] + [_ZERO] * m_ub)
        rhs.append(_q(b))
    for k, (a, b) in enumerate(zip(A_ub, b_ub)):
        row = [_q(v) if v else _ZERO for v in a] + [_ZERO] * m_ub
        row[n + k] = _ONE
        rows.append(row)
        rhs.append(_q(b))
    signs = [1] * len(rows)
    for i in range(len(rows)):
        if rhs[i] < 0:
            rows[i] = [-v for v in rows[i]]
            rhs[i] = -rhs[i]
            signs[i] = -1
    return rows, rhs, ncols, signs


def _phase_one(rows, rhs, ncols, max_pivots, signs=None):
    """Return ``(tableau, None)`` with a feasible basis over the structural
    columns (redundant rows dropped), or ``(None, y)`` where ``y`` is a Farkas
    certificate for the original rows: ``A^T y <= 0`` and ``b . y > 0``."""
    m = len(rows)
    for i in range(m):
        rows[i].extend(_ONE if k == i else _ZERO for k in range(m))
    tab = _Tableau(rows, rhs, ncols + m, max_pivots)
    tab.basis = [ncols + i for i in range(m)]
    cost_row = [_ZERO] * (ncols + m)
    obj = _ZERO
    for i in range(m):
        for k in range(ncols):
            if rows[i][k]:
                cost_row[k] -= rows[i][k]
        obj -= rhs[i]
    cost = [cost_row, obj]
    tab.run(cost, [True] * ncols + [False] * m)
    if cost[1] != 0:
        y = [_ONE - cost_row[ncols + i] for i in range(m)]
        if signs is not None:
            y = [v * s for v, s in zip(y, signs)]
        return None, [_frac(v) for v in y]
    # drive remaining artificials out of the basis
    keep = []
    for i in range(m):
        if tab.basis[i] >= ncols:
            j = next((k for k in range(ncols) if tab.T[i][k] != 0), -1)
            if j < 0:
                continue  # redundant constraint
            tab.pivot(i, j)
        keep.append(i)
    tab.T = [tab.T[i][:ncols] for i in keep]
    tab.rhs = [tab.rhs[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]
    tab.ncols = ncols
    return tab, None


def _reduced_costs(tab, c):
    cc = list(c) + [_ZERO] * (tab.ncols - len(c))
    obj = _ZERO
    for i, j in enumerate(tab.basis):
        cb = cc[j]
        if cb:
            row = tab.T[i]
            for k in range(tab.ncols):
                if row[k]:
                    cc[k] -= cb * row[k]
            obj -= cb * tab.rhs[i]
    return [cc, obj]


def solve(c: Sequence, A_eq=(), b_eq=(), A_ub=(), b_ub=(), *, maximize=False,
          max_pivots: int | None = None) -> LPResult:
    """Solve an LP exactly. Raises :class:`PivotLimit` past ``max_pivots``."""
    n = len(c)
    rows, rhs, ncols, _ = _standard_form(A_eq, b_eq, A_ub, b_ub, n)
    tab, _ = _phase_one(rows, rhs, ncols, max_pivots)
    if tab is None:
        return LPResult("infeasible")
    sign = -1 if maximize else 1
    cq = [_q(v) * sign for v in c]
    cost = _reduced_costs(tab, cq)
    status = tab.run(cost, [True] * tab.ncols)
    if status == "unbounded":
        return LPResult("unbounded", pivots=tab.pivots)
    x = tab.solution(n)
    value = -cost[1] * sign
    return LPResult("optimal", [_frac(v) for v in x], _frac(value), tab.pivots)


def feasible_point(A_eq=(), b_eq=(), A_ub=(), b_ub=(), n: int | None = None,
                   max_pivots: int | None = None, farkas: bool = False):
    """A basic feasible point, or ``None`` when the system is infeasible.

    With ``farkas=True`` returns ``(point, None)`` or ``(None, y)``; ``y`` has
    one entry per equality row then one per inequality row, and satisfies
    ``A_eq^T y_eq + A_ub^T y_ub <= 0``, ``y_ub <= 0`` and ``b . y > 0``.
    """
    if n is None:
        n = len(A_eq[0]) if A_eq else len(A_ub[0])
    rows, rhs, ncols, signs = _standard_form(A_eq, b_eq, A_ub, b_ub, n)
    tab, y = _phase_one(rows, rhs, ncols, max_pivots, signs)
    if tab is None:
        return (None, y) if farkas else None
    x = [_frac(v) for v in tab.solution(n)]
    return (x, None) if farkas else x


def enumerate_vertices(A_eq=(), b_eq=(), A_ub=(), b_ub=(), n: int | None = None,
                       max_bases: int = 2000):
    """Vertices of a bounded feasible region, by exhaustive pivoting over
    adjacent bases.

    Returns ``(vertices, complete)``; ``complete`` is ``False`` when the
    ``max_bases`` cap stopped the walk early.
    """
    if n is None:
        n = len(A_eq[0]) if A_eq else len(A_ub[0])
    rows, rhs, ncols, _ = _standard_form(A_eq, b_eq, A_ub, b_ub, n)
    tab, _ = _phase_one(rows, rhs, ncols, None)
    if tab is None:
        return [], True
    start = (tuple(tab.basis), [r[:] for r in tab.T], tab.rhs[:])
    seen = {frozenset(start[0])}
    stack = [start]
    verts = {}
    while stack:
        basis, T, rhs = stack.pop()
        x = [_ZERO] * n
        for i, j in enumerate(basis):
            if j < n:
                x[j] = rhs[i]
        key = tuple(x)
        if key not in verts:
            verts[key] = [_frac(v) for v in x]
        basic = set(basis)
        for j in range(ncols):
            if j in basic:
                continue
            best = None
            rows_ = []
            for i in range(len(T)):
                a = T[i][j]
                if a > 0:
                    ratio = rhs[i] / a
                    if best is None or ratio < best:
                        best, rows_ = ratio, [i]
                    elif ratio == best:
                        rows_.append(i)
            for r in rows_:
                nb = list(basis)
                nb[r] = j
                fs = frozenset(nb)
                if fs in seen:
                    continue
                if len(seen) >= max_bases:
                    return list(verts.values()), False
                seen.add(fs)
                t2 = _Tableau([row[:] for row in T], rhs[:], ncols)
                t2.basis = list(basis)
                t2.pivot(r, j)
                stack.append((tuple(t2.basis), t2.T, t2.rhs))
    return list(verts.values()), True


# ---------------------------------------------------------- named systems

@dataclass
class FeasibilitySystem:
    """Linear system over named nonnegative unknowns.

    ``equalities`` holds ``({var: coeff}, rhs)`` meaning ``sum == rhs``;
    ``inequalities`` holds ``({var: coeff}, rhs)`` meaning ``sum >= rhs``.
    """

    variables: list = field(default_factory=list)
    equalities: list = field(default_factory=list)
    inequalities: list = field(default_factory=list)

    def add_variable(self, key: Hashable):
        self.variables.append(key)

    def matrices(self):
        pos = {v: i for i, v in enumerate(self.variables)}
        n = len(self.variables)
        A_eq, b_eq, A_ub, b_ub = [], [], [], []
        for coeffs, rhs in self.equalities:
            row = [0] * n
            for var, a in coeffs.items():
                row[pos[var]] += a
            A_eq.append(row)
            b_eq.append(rhs)
        for coeffs, rhs in self.inequalities:
            row = [0] * n
            for var, a in coeffs.items():
                row[pos[var]] -= a
            A_ub.append(row)
            b_ub.append(-rhs)
        return A_eq, b_eq, A_ub, b_ub


def lp_feasible(system: FeasibilitySystem, max_pivots: int | None = None,
                farkas: bool = False):
    """Exact satisfying assignment ``{var: Fraction}`` or ``None``.

    With ``farkas=True`` returns ``(assignment, None)`` or ``(None, y)`` where
    ``y`` lists one multiplier per equality; a column can only restore
    feasibility if its equality coefficients have positive inner product
    with ``y``.
    """
    n = len(system.variables)
    A_eq, b_eq, A_ub, b_ub = system.matrices()
    if n == 0:
        ok = all(Fraction(b) == 0 for b in b_eq) and all(Fraction(b) <= 0 for b in b_ub)
        if farkas:
            return ({}, None) if ok else (None, [Fraction(1 if b > 0 else -1 if b < 0 else 0)
                                                  for b in b_eq])
        return {} if ok else None
    x, y = feasible_point(A_eq, b_eq, A_ub, b_ub, n=n, max_pivots=max_pivots, farkas=True)
    if x is None:
        return (None, y[:len(A_eq)]) if farkas else None
    sol = dict(zip(system.variables, x))
    return (sol, None) if farkas else sol
