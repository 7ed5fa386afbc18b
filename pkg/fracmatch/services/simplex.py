"""Exact-rational phase-1 simplex with Bland's rule.

Solves feasibility of A x = b, x >= 0 over Fractions. When the system is
infeasible, the phase-1 dual u satisfies A^T u <= 0 and b^T u > 0, a Farkas
witness.
"""

from dataclasses import dataclass
from fractions import Fraction

from fracmatch.core.errors import ArithmeticFailure

Matrix = list[list[Fraction]]


@dataclass
class PhaseOneResult:
    feasible: bool
    x: list[Fraction]
    dual: list[Fraction]
    objective: Fraction
    pivots: int


def phase_one(a: Matrix, b: list[Fraction], max_pivots: int = 100_000) -> PhaseOneResult:
    """Minimize the sum of artificials t in A x + t = b over x, t >= 0."""
    m = len(a)
    nvars = len(a[0]) if m else 0
    if len(b) != m:
        raise ArithmeticFailure(f"row count mismatch: {m} rows, {len(b)} right-hand sides")

    flip = [bi < 0 for bi in b]
    width = nvars + m + 1
    rhs = width - 1
    tableau: Matrix = []
    for i in range(m):
        sign = -1 if flip[i] else 1
        row = [Fraction(sign * v) for v in a[i]]
        row.extend(Fraction(int(i == j)) for j in range(m))
        row.append(Fraction(sign * b[i]))
        tableau.append(row)
    basis = [nvars + i for i in range(m)]

    # reduced costs; cost 1 on artificials, last entry holds -objective
    cost = [Fraction(0)] * width
    for j in range(nvars):
        cost[j] = -sum((tableau[i][j] for i in range(m)), Fraction(0))
    cost[rhs] = -sum((tableau[i][rhs] for i in range(m)), Fraction(0))

    pivots = 0
    while True:
        entering = next((j for j in range(rhs) if cost[j] < 0), None)
        if entering is None:
            break
        leaving = None
        best: tuple[Fraction, int] | None = None
        for i in range(m):
            coef = tableau[i][entering]
            if coef > 0:
                key = (tableau[i][rhs] / coef, basis[i])
                if best is None or key < best:
                    best, leaving = key, i
        if leaving is None:
            # phase 1 is bounded below by zero
            raise ArithmeticFailure("phase-1 objective unbounded")
        _pivot(tableau, cost, leaving, entering)
        basis[leaving] = entering
        pivots += 1
        if pivots > max_pivots:
            raise ArithmeticFailure(f"simplex exceeded {max_pivots} pivots")

    objective = -cost[rhs]
    x = [Fraction(0)] * nvars
    for i, var in enumerate(basis):
        if var < nvars:
            x[var] = tableau[i][rhs]
    dual = []
    for i in range(m):
        u = 1 - cost[nvars + i]
        dual.append(-u if flip[i] else u)
    return PhaseOneResult(
        feasible=objective == 0, x=x, dual=dual, objective=objective, pivots=pivots
    )


def _pivot(tableau: Matrix, cost: list[Fraction], r: int, c: int) -> None:
    row = tableau[r]
    p = row[c]
    row[:] = [v / p for v in row]
    for i, other in enumerate(tableau):
        if i != r and other[c] != 0:
            f = other[c]
            tableau[i] = [v - f * w for v, w in zip(other, row)]
    f = cost[c]
    if f != 0:
        cost[:] = [v - f * w for v, w in zip(cost, row)]
