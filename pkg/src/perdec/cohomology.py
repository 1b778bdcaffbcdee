"""Solvers for the transfer equation h(Tx) - h(x) = g(x) and variants.

All four solvers work directly on the functional-graph structure of the
acting map (orbit walks, cycle sums, quotients), so none of them needs an
exponent search bound.  Absence is always certified: the caller gets the
offending cycle or self-relation together with its nonzero sum.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

from .core import (
    InternalContractViolation,
    PreconditionError,
    RationalFunction,
    commute_witness,
    delta,
    identity,
    is_invariant,
)
from .orbits import Partition, _components, default_bound, find_relation, invariance_classes


@dataclass(frozen=True)
class CycleObstruction:
    """A T-cycle whose g-sum is nonzero, so h(Tx) - h(x) = g(x) is unsolvable."""

    points: tuple[int, ...]
    total: Fraction


@dataclass(frozen=True)
class ConstrainedObstruction:
    """Witness T^k S^l x = S^{l2} x whose orbit sum of G is nonzero."""

    x: int
    k: int
    l: int
    l2: int
    total: Fraction


@dataclass(frozen=True)
class TransferSolution:
    """solution g and the invariant correction term added to the right side."""

    solution: RationalFunction
    correction: Optional[RationalFunction] = None


@dataclass(frozen=True)
class BoundedTransfer:
    """solution plus the partial-sum bound C controlling its sup norm."""

    solution: RationalFunction
    bound: Fraction


def _orbit_to_repeat(t: Sequence[int], x0: int) -> Tuple[list, Dict[int, int], int]:
    """Forward orbit of x0 up to the first repeated point.

    Returns (orbit, index, start) where index maps point -> position and
    orbit[start:] is the unique cycle of x0's component.
    """
    orbit: list = []
    index: Dict[int, int] = {}
    p = x0
    while p not in index:
        index[p] = len(orbit)
        orbit.append(p)
        p = t[p]
    return orbit, index, index[p]


def solve_transfer(
    t: Sequence[int], g: RationalFunction
) -> Union[RationalFunction, CycleObstruction]:
    """Solve h(t(x)) - h(x) = g(x) exactly.

    Per weak class with representative x0 the solution is
    h(x) = sum_{i<n} g(t^i x0) - sum_{j<m} g(t^j x), where t^m x = t^n x0
    is the first meeting of the two forward orbits.  A solution exists iff
    the g-sum around every cycle vanishes; the first nonzero cycle (by
    class order) is returned otherwise.
    """
    size = len(g)
    part = invariance_classes(t)
    values: list = [None] * size
    for c in range(part.n_classes):
        x0 = part.representative[c]
        orbit, index, start = _orbit_to_repeat(t, x0)
        prefix = [Fraction(0)]
        for p in orbit:
            prefix.append(prefix[-1] + g[p])
        cycle_total = prefix[len(orbit)] - prefix[start]
        if cycle_total != 0:
            return CycleObstruction(tuple(orbit[start:]), cycle_total)
        for x in part.members(c):
            partial = Fraction(0)
            q = x
            while q not in index:
                partial += g[q]
                q = t[q]
            values[x] = prefix[index[q]] - partial
    return RationalFunction(tuple(values))


def _forced_gamma_values(t: Sequence[int], g: RationalFunction,
                         part: Partition) -> list:
    """Per-class negated cycle average of g, the only correction that works."""
    out = []
    for c in range(part.n_classes):
        orbit, _, start = _orbit_to_repeat(t, part.representative[c])
        cycle = orbit[start:]
        total = sum((g[p] for p in cycle), Fraction(0))
        out.append(-total / len(cycle))
    return out


def solve_transfer_mod_invariant(
    t: Sequence[int], g: RationalFunction
) -> TransferSolution:
    """Solve h(t(x)) - h(x) = g(x) + gamma(x) with gamma t-invariant.

    Always solvable: on each class gamma is the negated average of g around
    the class's unique cycle, which zeroes the cycle sum.
    """
    part = invariance_classes(t)
    per_class = _forced_gamma_values(t, g, part)
    gamma = RationalFunction(tuple(per_class[part.class_of[x]]
                                   for x in range(len(g))))
    h = solve_transfer(t, g + gamma)
    if isinstance(h, CycleObstruction):
        raise InternalContractViolation(
            "forced correction failed to zero a cycle sum")
    return TransferSolution(h, gamma)


def _check_commute(t: Sequence[int], s: Sequence[int]) -> None:
    w = commute_witness(t, s)
    if w is not None:
        raise PreconditionError(f"maps do not commute at x={w}")


def _quotient(t: Sequence[int], s: Sequence[int]):
    """S-class partition and the map induced by t on the classes."""
    part = invariance_classes(s)
    induced = tuple(part.class_of[t[part.representative[c]]]
                    for c in range(part.n_classes))
    return part, induced


def solve_transfer_pair(
    t: Sequence[int],
    s: Sequence[int],
    g: RationalFunction,
    class_values: Optional[Mapping[int, Fraction]] = None,
) -> TransferSolution:
    """Solve h(t(x)) - h(x) = g(x) + gamma(x) with h, gamma both s-invariant
    and gamma also t-invariant.

    Works on the quotient by s-classes, where t acts as an induced map, and
    lifts the solution back.  ``class_values`` optionally pins gamma's
    constant on the joint class containing a given element (the free-choice
    hook used by the three-transformation decomposition); a pin that
    conflicts with a forced cycle average raises PreconditionError.
    """
    _check_commute(t, s)
    if not is_invariant(s, g):
        raise PreconditionError("right side is not s-invariant")
    part, induced = _quotient(t, s)
    g_q = RationalFunction(tuple(g[rep] for rep in part.representative))
    qpart = invariance_classes(induced)
    per_class = _forced_gamma_values(induced, g_q, qpart)
    if class_values:
        pinned: Dict[int, Fraction] = {}
        for element, value in class_values.items():
            qc = qpart.class_of[part.class_of[element]]
            value = Fraction(value)
            if qc in pinned and pinned[qc] != value:
                raise PreconditionError(
                    f"conflicting pinned constants on one class: "
                    f"{pinned[qc]} vs {value}")
            pinned[qc] = value
        for qc, value in pinned.items():
            per_class[qc] = value
    gamma_q = RationalFunction(tuple(per_class[qpart.class_of[c]]
                                     for c in range(part.n_classes)))
    h_q = solve_transfer(induced, g_q + gamma_q)
    if isinstance(h_q, CycleObstruction):
        if class_values:
            raise PreconditionError(
                "pinned correction constant conflicts with a forced cycle "
                f"average (cycle total {h_q.total})")
        raise InternalContractViolation(
            "forced correction failed on the quotient")
    values = tuple(h_q[part.class_of[x]] for x in range(len(g)))
    gamma = tuple(gamma_q[part.class_of[x]] for x in range(len(g)))
    return TransferSolution(RationalFunction(values), RationalFunction(gamma))


def solve_transfer_constrained(
    t: Sequence[int], s: Sequence[int], g: RationalFunction
) -> Union[RationalFunction, ConstrainedObstruction]:
    """Solve h(t(x)) - h(x) = g(x) with h s-invariant (no correction term).

    Solvable iff the g-sum along T^i x, i < k, vanishes whenever
    T^k S^l x = S^{l2} x; the check happens on the quotient by s-classes,
    and a failure is returned as that witness with its nonzero sum.
    """
    _check_commute(t, s)
    if not is_invariant(s, g):
        raise PreconditionError("right side is not s-invariant")
    part, induced = _quotient(t, s)
    g_q = RationalFunction(tuple(g[rep] for rep in part.representative))
    h_q = solve_transfer(induced, g_q)
    if isinstance(h_q, CycleObstruction):
        size = len(g)
        x = part.representative[h_q.points[0]]
        k = len(h_q.points)
        u = x
        for _ in range(k):
            u = t[u]
        link = find_relation(identity(size), s, u, x, default_bound(size))
        if link is None:
            raise InternalContractViolation(
                "quotient cycle without a ground self-relation")
        return ConstrainedObstruction(x, k, link.k, link.k2, h_q.total)
    values = tuple(h_q[part.class_of[x]] for x in range(len(g)))
    return RationalFunction(values)


def partial_sum_bound(t: Sequence[int], g: RationalFunction,
                      horizon: Optional[int] = None) -> Fraction:
    """max |sum_{i<m} g(t^i x)| over x and 1 <= m <= horizon (default 2N).

    On solvable instances the partial sums are eventually periodic in m
    with preperiod plus period at most N, so the default horizon sees
    every value.
    """
    size = len(g)
    if horizon is None:
        horizon = 2 * size
    best = Fraction(0)
    for x in range(size):
        partial = Fraction(0)
        p = x
        for _ in range(horizon):
            partial += g[p]
            p = t[p]
            if abs(partial) > best:
                best = abs(partial)
    return best


def solve_bounded_transfer(
    t: Sequence[int], s: Sequence[int], g: RationalFunction
) -> Union[BoundedTransfer, ConstrainedObstruction]:
    """Constrained transfer solution recentered to a certified sup-norm bound.

    Returns (H, C) with h(t(x)) - h(x) = g(x), H s-invariant, C the
    partial-sum bound, and sup |H| <= 2C; recentering subtracts the
    midrange of H on each joint (s,t)-class, which preserves both defining
    identities.  Absent exactly when the constrained solve is absent.
    """
    solved = solve_transfer_constrained(t, s, g)
    if isinstance(solved, ConstrainedObstruction):
        return solved
    size = len(g)
    bound_c = partial_sum_bound(t, g)
    joint = _components(size, [t, s])
    values = list(solved.values)
    for c in range(joint.n_classes):
        members = joint.members(c)
        high = max(values[x] for x in members)
        low = min(values[x] for x in members)
        mid = (high + low) / 2
        for x in members:
            values[x] -= mid
    centered = RationalFunction(tuple(values))
    if (not is_invariant(s, centered)
            or delta(t, centered) != g
            or centered.max_abs() > 2 * bound_c):
        raise InternalContractViolation("recentering broke the solution")
    return BoundedTransfer(centered, bound_c)
