"""Exact two-phase simplex over the rationals (Bland's rule, no cycling).

Solves ``max c.x  s.t.  A x = b, x >= 0``.  Infeasible problems come back with
a Farkas vector ``y``: ``y.A_j <= 0`` for every column and ``y.b > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple | None = None
    objective: Fraction | None = None
    basis: tuple | None = None  # basic column indices, aligned with ``rows``
    rows: tuple | None = None  # constraint rows kept after removing redundancy
    farkas: tuple | None = None

    @property
    def feasible(self) -> bool:
        return self.status != "infeasible"


def _pivot(T: list[list[Fraction]], r: int, c: int) -> None:
    piv = T[r][c]
    row = T[r]
    if piv != 1:
        T[r] = row = [v / piv for v in row]
    for i, other in enumerate(T):
        if i != r and other[c] != 0:
            f = other[c]
            T[i] = [a - f * b for a, b in zip(other, row)]


def _reduced_row(T, basis, cost, ncols):
    """Objective row ``cost_j - c_B B^-1 A_j`` followed by ``-c_B x_B``."""
    z = [Fraction(cost[j]) for j in range(ncols)] + [Fraction(0)]
    for i, bj in enumerate(basis):
        cb = cost[bj]
        if cb:
            row = T[i]
            z = [zj - cb * tj for zj, tj in zip(z, row)]
    return z


def _run(T, basis, cost, ncols, allowed) -> str:
    while True:
        z = _reduced_row(T, basis, cost, ncols)
        enter = next((j for j in range(ncols) if allowed[j] and z[j] > 0), None)
        if enter is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        r = best[1]
        _pivot(T, r, enter)
        basis[r] = enter


def linprog_exact(c: Sequence, A: Sequence[Sequence], b: Sequence) -> LPResult:
    m = len(A)
    n = len(c)
    c = [Fraction(v) for v in c]
    A = [[Fraction(v) for v in row] for row in A]
    b = [Fraction(v) for v in b]
    signs = [1 if bi >= 0 else -1 for bi in b]
    # tableau: original columns, artificial columns, rhs
    T = []
    for i in range(m):
        s = signs[i]
        T.append([s * v for v in A[i]] + [Fraction(1 if k == i else 0) for k in range(m)] + [s * b[i]])
    ncols = n + m
    basis = [n + i for i in range(m)]
    cost1 = [Fraction(0)] * n + [Fraction(-1)] * m
    _run(T, basis, cost1, ncols, [True] * ncols)
    phase1 = sum(T[i][-1] for i in range(m) if basis[i] >= n)
    if phase1 > 0:
        # y = c_B B^-1 with B^-1 read off the artificial columns
        y = [Fraction(0)] * m
        for i, bj in enumerate(basis):
            if cost1[bj]:
                for k in range(m):
                    y[k] += cost1[bj] * T[i][n + k]
        farkas = tuple(-y[k] * signs[k] for k in range(m))
        return LPResult("infeasible", farkas=farkas)
    # drive zero-level artificials out of the basis; drop redundant rows
    keep = list(range(m))
    i = 0
    while i < len(T):
        if basis[i] >= n:
            col = next((j for j in range(n) if T[i][j] != 0), None)
            if col is None:
                del T[i]
                del basis[i]
                del keep[i]
                continue
            _pivot(T, i, col)
            basis[i] = col
        i += 1
    allowed = [True] * n + [False] * m
    status = _run(T, basis, c + [Fraction(0)] * m, ncols, allowed)
    if status == "unbounded":
        return LPResult("unbounded", basis=tuple(basis), rows=tuple(keep))
    x = [Fraction(0)] * n
    for i, bj in enumerate(basis):
        x[bj] = T[i][-1]
    obj = sum(ci * xi for ci, xi in zip(c, x))
    return LPResult("optimal", tuple(x), obj, tuple(basis), tuple(keep))


def solve_linear(M: Sequence[Sequence], rhs: Sequence) -> list:
    """Solve a square nonsingular system exactly; entries may be polynomials.

    The matrix must be numeric; the right-hand side may hold any ring elements
    supporting ``+``, ``-`` and multiplication by rationals.
    """
    inv = invert(M)
    out = []
    for row in inv:
        acc = 0
        for a, v in zip(row, rhs):
            if a:
                acc = acc + a * v
        out.append(acc)
    return out


def invert(M: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(M)
    T = [[Fraction(v) for v in row] + [Fraction(1 if i == j else 0) for j in range(n)] for i, row in enumerate(M)]
    for col in range(n):
        r = next((i for i in range(col, n) if T[i][col] != 0), None)
        if r is None:
            raise ZeroDivisionError("singular matrix")
        T[col], T[r] = T[r], T[col]
        _pivot(T, col, col)
    return [row[n:] for row in T]


def rank_pivots(M: Sequence[Sequence]) -> list[int]:
    """Indices of a maximal set of linearly independent rows."""
    rows: list[list[Fraction]] = []
    chosen = []
    for idx, row in enumerate(M):
        v = [Fraction(x) for x in row]
        for basis_row, lead in rows:
            if v[lead] != 0:
                f = v[lead] / basis_row[lead]
                v = [a - f * b for a, b in zip(v, basis_row)]
        lead = next((j for j, a in enumerate(v) if a != 0), None)
        if lead is not None:
            rows.append((v, lead))
            chosen.append(idx)
    return chosen


def determinant(M: Sequence[Sequence]) -> Fraction:
    n = len(M)
    T = [[Fraction(v) for v in row] for row in M]
    det = Fraction(1)
    for col in range(n):
        r = next((i for i in range(col, n) if T[i][col] != 0), None)
        if r is None:
            return Fraction(0)
        if r != col:
            T[col], T[r] = T[r], T[col]
            det = -det
        det *= T[col][col]
        for i in range(col + 1, n):
            f = T[i][col] / T[col][col]
            if f:
                T[i] = [a - f * b for a, b in zip(T[i], T[col])]
    return det
