"""Ground-truth decomposability via exact linear algebra.

Decomposability of f is linear feasibility: f must lie in the span of the
invariance-class indicators of the transforms.  The elimination works on
integer rows (function values are scaled by a common denominator), tracks
the row operations, and therefore hands out an exact dual functional
whenever the system is infeasible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import List, Optional, Sequence, Tuple

from .core import (
    CommutingSystem,
    Decomposition,
    InternalContractViolation,
    PreconditionError,
    RationalFunction,
    integer_values,
    verify_decomposition,
)
from .orbits import invariance_classes


@dataclass(frozen=True)
class DualCertificate:
    """A linear functional on value tables proving non-decomposability.

    Pairs to zero with every invariance-kernel basis function of the system
    and to a nonzero value with the target f.
    """

    weights: RationalFunction

    def pair(self, f: RationalFunction) -> Fraction:
        return sum((w * v for w, v in zip(self.weights, f)), Fraction(0))


def kernel_basis(t: Sequence[int]) -> List[RationalFunction]:
    """Indicator functions of t's invariance classes; they span the
    t-invariant functions exactly."""
    part = invariance_classes(t)
    size = len(t)
    out = []
    for c in range(part.n_classes):
        out.append(RationalFunction(
            tuple(Fraction(1 if part.class_of[x] == c else 0)
                  for x in range(size))))
    return out


def _reduce_row(row: List[int]) -> None:
    """Divide by the gcd of all entries and make the first nonzero positive."""
    g = 0
    for v in row:
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        for i, v in enumerate(row):
            row[i] = v // g
    for v in row:
        if v:
            if v < 0:
                for i, w in enumerate(row):
                    row[i] = -w
            return


def linear_feasibility(
    rows: Sequence[Sequence[int]], rhs: Sequence[int], ncols: int
) -> Tuple[Optional[List[Fraction]], Optional[Tuple[int, ...]]]:
    """Exact feasibility of A c = b over the rationals, A and b integral.

    Returns (solution, dual) with exactly one side present: a solution with
    free unknowns pinned to 0, or an integer row y with y A = 0, y b != 0.
    Pivots prefer the smallest nonzero magnitude in the column, which keeps
    the integer entries from growing; rows are gcd-reduced after each step.
    """
    m = len(rows)
    # extended row: coefficient part | rhs | identity tracking part
    work = [list(rows[i]) + [rhs[i]] + [1 if j == i else 0 for j in range(m)]
            for i in range(m)]
    rank = 0
    pivots: List[Tuple[int, int]] = []
    for col in range(ncols):
        best = -1
        for i in range(rank, m):
            v = work[i][col]
            if v and (best < 0 or abs(v) < abs(work[best][col])):
                best = i
        if best < 0:
            continue
        work[rank], work[best] = work[best], work[rank]
        piv = work[rank][col]
        for i in range(rank + 1, m):
            v = work[i][col]
            if v:
                g = gcd(piv, v)
                a, b = piv // g, v // g
                row_i, row_p = work[i], work[rank]
                work[i] = [a * x - b * y for x, y in zip(row_i, row_p)]
                _reduce_row(work[i])
        pivots.append((col, rank))
        rank += 1
        if rank == m:
            break
    for i in range(rank, m):
        if work[i][ncols]:
            # the tracked row combination proves infeasibility
            return None, tuple(work[i][ncols + 1:])
    solution = [Fraction(0)] * ncols
    for col, row in reversed(pivots):
        acc = Fraction(work[row][ncols])
        for c in range(col + 1, ncols):
            if work[row][c]:
                acc -= work[row][c] * solution[c]
        solution[col] = acc / work[row][col]
    return solution, None


def nullspace(rows: Sequence[Sequence[int]], ncols: int) -> List[List[Fraction]]:
    """Basis of the rational nullspace of an integer matrix.

    One basis vector per free column: that column is 1 and the pivot
    columns are back-solved.
    """
    m = len(rows)
    work = [list(r) for r in rows]
    rank = 0
    pivots: List[Tuple[int, int]] = []
    for col in range(ncols):
        best = -1
        for i in range(rank, m):
            v = work[i][col]
            if v and (best < 0 or abs(v) < abs(work[best][col])):
                best = i
        if best < 0:
            continue
        work[rank], work[best] = work[best], work[rank]
        piv = work[rank][col]
        for i in range(rank + 1, m):
            v = work[i][col]
            if v:
                g = gcd(piv, v)
                a, b = piv // g, v // g
                work[i] = [a * x - b * y for x, y in zip(work[i], work[rank])]
                _reduce_row(work[i])
        pivots.append((col, rank))
        rank += 1
        if rank == m:
            break
    pivot_cols = {col for col, _ in pivots}
    basis = []
    for free in range(ncols):
        if free in pivot_cols:
            continue
        vec = [Fraction(0)] * ncols
        vec[free] = Fraction(1)
        for col, row in reversed(pivots):
            acc = Fraction(0)
            for c in range(col + 1, ncols):
                if work[row][c] and vec[c]:
                    acc -= work[row][c] * vec[c]
            vec[col] = acc / work[row][col]
        basis.append(vec)
    return basis


def oracle_decompose(system: CommutingSystem, f: RationalFunction):
    """Decide decomposability by exact elimination.

    Returns a verified Decomposition on feasibility, else a DualCertificate.
    The unknowns are one coefficient per (transform, invariance class);
    the returned decomposition is some feasible point, with no minimality.
    """
    if system.n < 1:
        raise PreconditionError("system needs at least one transformation")
    if len(f) != system.size:
        raise PreconditionError("function length does not match the domain")
    partitions = [invariance_classes(t) for t in system.transforms]
    offsets = [0]
    for part in partitions:
        offsets.append(offsets[-1] + part.n_classes)
    ncols = offsets[-1]
    rows = []
    for x in range(system.size):
        row = [0] * ncols
        for j, part in enumerate(partitions):
            row[offsets[j] + part.class_of[x]] += 1
        rows.append(row)
    rhs, denom = integer_values(f)
    solution, dual = linear_feasibility(rows, rhs, ncols)
    if dual is not None:
        certificate = DualCertificate(RationalFunction(
            tuple(Fraction(w) for w in dual)))
        for t in system.transforms:
            for basis in kernel_basis(t):
                if certificate.pair(basis) != 0:
                    raise InternalContractViolation(
                        "dual certificate does not annihilate a kernel basis")
        if certificate.pair(f) == 0:
            raise InternalContractViolation("dual certificate pairs to zero with f")
        return certificate
    parts = []
    for j, part in enumerate(partitions):
        values = tuple(solution[offsets[j] + part.class_of[x]] / denom
                       for x in range(system.size))
        parts.append(RationalFunction(values))
    decomposition = Decomposition(tuple(parts))
    verdict = verify_decomposition(system, f, decomposition)
    if not verdict:
        raise InternalContractViolation(
            f"oracle solution failed verification: {verdict.reason}")
    return decomposition
