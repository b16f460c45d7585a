"""Exact rational feasibility LP with strict-inequality support.

Decides whether a point exists with <e,x> = 0 for the equality rows,
<a,x> >= 0 for the weak rows, and <b,x> > 0 for every strict row.  The
equalities are eliminated by projecting onto their nullspace; strictness is
handled by maximizing an auxiliary slack t with every strict row >= t under
the normalization sum-of-strict-rows = 1, which bounds the program.  The
system is strictly feasible iff the optimal t is positive.

Two-phase primal simplex over Fractions with Bland's rule, so termination is
guaranteed under degeneracy.  Witnesses are re-checked exactly against the
original constraints before being returned.
"""

from __future__ import annotations

from fractions import Fraction

from .exactla import nullspace
from .vectors import clear_denominators

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _dot(f, x):
    return sum((fi * xi for fi, xi in zip(f, x)), _ZERO)


class _Tableau:
    """Dense simplex tableau: rows of Fractions, basis columns identity."""

    def __init__(self, rows, rhs, basis):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.ncols = len(rows[0]) if rows else 0

    def _reduced_costs(self, cost):
        red = list(cost)
        for i, bi in enumerate(self.basis):
            cb = cost[bi]
            if cb == 0:
                continue
            row = self.rows[i]
            for j in range(self.ncols):
                if row[j] != 0:
                    red[j] -= cb * row[j]
        return red

    def objective(self, cost):
        return sum(
            (cost[bi] * self.rhs[i] for i, bi in enumerate(self.basis)), _ZERO
        )

    def pivot(self, row, col):
        rows, rhs = self.rows, self.rhs
        inv = _ONE / rows[row][col]
        if inv != 1:
            rows[row] = [x * inv for x in rows[row]]
            rhs[row] *= inv
        prow = rows[row]
        pb = rhs[row]
        for i in range(len(rows)):
            if i == row:
                continue
            f = rows[i][col]
            if f == 0:
                continue
            rows[i] = [x - f * y for x, y in zip(rows[i], prow)]
            rhs[i] -= f * pb
        self.basis[row] = col

    def maximize(self, cost, stop_when_positive=False):
        """Run simplex to optimality (Bland's rule); 'optimal' or 'unbounded'."""
        while True:
            if stop_when_positive and self.objective(cost) > 0:
                return "optimal"
            red = self._reduced_costs(cost)
            enter = -1
            for j in range(self.ncols):
                if red[j] > 0:
                    enter = j
                    break
            if enter < 0:
                return "optimal"
            leave = -1
            best = None
            for i in range(len(self.rows)):
                a = self.rows[i][enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best:
                        best = key
                        leave = i
            if leave < 0:
                return "unbounded"
            self.pivot(leave, enter)

    def solution(self, nvars):
        x = [_ZERO] * nvars
        for i, bi in enumerate(self.basis):
            if bi < nvars:
                x[bi] = self.rhs[i]
        return x


def _solve_positive_t(rows_ns, rows_st, d):
    """Max t with a.y >= 0, b.y >= t, sum(b).y = 1; None if that is infeasible.

    Variables: y = u - v with u, v >= 0 (columns 0..d-1 and d..2d-1), then t,
    then one slack per weak row, one surplus per strict row, one artificial.
    Returns (t*, y) with y the attained point.
    """
    nu = 2 * d
    t_col = nu
    ns_base = nu + 1
    st_base = ns_base + len(rows_ns)
    art_col = st_base + len(rows_st)
    ncols = art_col + 1
    rows = []
    rhs = []
    basis = []

    def blank():
        return [_ZERO] * ncols

    for k, a in enumerate(rows_ns):
        row = blank()
        for i in range(d):
            row[i] = Fraction(-a[i])
            row[d + i] = Fraction(a[i])
        row[ns_base + k] = _ONE
        rows.append(row)
        rhs.append(_ZERO)
        basis.append(ns_base + k)
    for k, b in enumerate(rows_st):
        row = blank()
        for i in range(d):
            row[i] = Fraction(-b[i])
            row[d + i] = Fraction(b[i])
        row[t_col] = _ONE
        row[st_base + k] = _ONE
        rows.append(row)
        rhs.append(_ZERO)
        basis.append(st_base + k)
    norm = [sum(b[i] for b in rows_st) for i in range(d)]
    row = blank()
    for i in range(d):
        row[i] = Fraction(norm[i])
        row[d + i] = Fraction(-norm[i])
    row[art_col] = _ONE
    rows.append(row)
    rhs.append(_ONE)
    basis.append(art_col)

    tab = _Tableau(rows, rhs, basis)
    phase1 = [_ZERO] * ncols
    phase1[art_col] = -_ONE
    status = tab.maximize(phase1)
    if status != "optimal" or tab.objective(phase1) != 0:
        return None
    if art_col in tab.basis:
        i = tab.basis.index(art_col)
        piv = next((j for j in range(ncols - 1) if tab.rows[i][j] != 0), None)
        if piv is None:
            del tab.rows[i], tab.rhs[i], tab.basis[i]
        else:
            tab.pivot(i, piv)
    for r in tab.rows:
        r[art_col] = _ZERO

    phase2 = [_ZERO] * ncols
    phase2[t_col] = _ONE
    status = tab.maximize(phase2, stop_when_positive=True)
    if status == "unbounded":
        raise RuntimeError("auxiliary program unbounded despite normalization")
    sol = tab.solution(nu + 1)
    y = [sol[i] - sol[d + i] for i in range(d)]
    return sol[t_col], y


def lp_feasible(dimension: int, eqs, nonstrict, strict):
    """Exact point satisfying the three constraint groups, or None.

    eqs rows must vanish, nonstrict rows must be >= 0, strict rows must be
    > 0.  The witness is a tuple of Fractions of length `dimension`.
    """
    eq_rows = [tuple(e) for e in eqs]
    ns_rows = [tuple(a) for a in nonstrict]
    st_rows = [tuple(b) for b in strict]
    for group in (eq_rows, ns_rows, st_rows):
        for row in group:
            if len(row) != dimension:
                raise ValueError("constraint length does not match dimension")

    basis = nullspace(eq_rows, dimension)
    d = len(basis)
    zero = tuple(_ZERO for _ in range(dimension))
    if d == 0:
        return None if st_rows else zero

    def project(f):
        return tuple(_dot(f, nb) for nb in basis)

    proj_ns = set()
    for a in ns_rows:
        g = clear_denominators(project(a))
        if any(g):
            proj_ns.add(g)
    proj_st = set()
    for b in st_rows:
        g = clear_denominators(project(b))
        if not any(g):
            return None  # strict row vanishes identically on the subspace
        proj_st.add(g)

    if not proj_st:
        witness = zero
    else:
        res = _solve_positive_t(sorted(proj_ns), sorted(proj_st), d)
        if res is None:
            return None
        t_star, y = res
        if t_star <= 0:
            return None
        witness = tuple(
            sum((y[k] * basis[k][j] for k in range(d)), _ZERO)
            for j in range(dimension)
        )

    for e in eq_rows:
        if _dot(e, witness) != 0:
            raise AssertionError("witness violates an equality row")
    for a in ns_rows:
        if _dot(a, witness) < 0:
            raise AssertionError("witness violates a weak row")
    for b in st_rows:
        if _dot(b, witness) <= 0:
            raise AssertionError("witness violates a strict row")
    return witness
