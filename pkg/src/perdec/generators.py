"""Random commuting systems and value tables for tests and the miner.

Independent uniformly random maps essentially never commute, so systems
are built constructively: translations on cyclic groups, powers of a
single random base map, and products of independent per-factor actions.
Every generated system still goes through full commutativity validation.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence

from .core import CommutingSystem, RationalFunction, power, validate_system
from .oracle import nullspace
from .orbits import invariance_classes


def random_commuting_system(rng: random.Random, n: int,
                            max_size: int) -> CommutingSystem:
    style = rng.choice(("translation", "power", "product"))
    if style == "translation":
        size = rng.randint(2, max_size)
        transforms = []
        for _ in range(n):
            a = rng.randrange(size)
            transforms.append(tuple((x + a) % size for x in range(size)))
        return validate_system(transforms, size)
    if style == "power":
        size = rng.randint(2, max_size)
        base = tuple(rng.randrange(size) for _ in range(size))
        transforms = [power(base, rng.randint(0, 3)) for _ in range(n)]
        return validate_system(transforms, size)
    return _product_system(rng, n, max_size)


def _product_system(rng: random.Random, n: int, max_size: int) -> CommutingSystem:
    """Transforms acting factor-by-factor on a product of small domains."""
    dims: List[int] = []
    cap = max_size
    while cap >= 2 and (not dims or rng.random() < 0.5):
        d = rng.randint(2, cap)
        dims.append(d)
        cap //= d
    size = 1
    for d in dims:
        size *= d
    bases = []
    for d in dims:
        if rng.random() < 0.5:
            a = rng.randrange(d)
            bases.append(tuple((c + a) % d for c in range(d)))
        else:
            bases.append(tuple(rng.randrange(d) for _ in range(d)))
    strides = [1] * len(dims)
    for i in range(len(dims) - 2, -1, -1):
        strides[i] = strides[i + 1] * dims[i + 1]
    transforms = []
    for _ in range(n):
        exps = [rng.randint(0, 2) for _ in dims]
        table = []
        for x in range(size):
            y = 0
            rem = x
            for i, d in enumerate(dims):
                c = rem // strides[i] % d
                rem -= c * strides[i]
                for _ in range(exps[i]):
                    c = bases[i][c]
                y += c * strides[i]
            table.append(y)
        transforms.append(tuple(table))
    return validate_system(transforms, size)


def random_invariant_part(rng: random.Random, t: Sequence[int]) -> RationalFunction:
    """Random function constant on each invariance class of t."""
    part = invariance_classes(t)
    picks = [Fraction(rng.randint(-3, 3), rng.choice((1, 1, 2)))
             for _ in range(part.n_classes)]
    return RationalFunction(tuple(picks[part.class_of[x]]
                                  for x in range(len(t))))


def decomposable_function(rng: random.Random,
                          system: CommutingSystem) -> RationalFunction:
    """Sum of one random invariant part per transform; decomposable by design."""
    total = RationalFunction.zero(system.size)
    for t in system.transforms:
        total = total + random_invariant_part(rng, t)
    return total


def mixed_kernel_function(rng: random.Random,
                          system: CommutingSystem) -> RationalFunction:
    """Random element of the kernel of the product of all unit differences.

    Such functions pass the all-singleton part of the partition condition
    by construction, which steers the search toward the deeper premises.
    """
    size = system.size
    n = system.n
    rows = []
    for x in range(size):
        coeff = [0] * size
        for mask in range(1 << n):
            w = x
            applied = 0
            for j in range(n):
                if mask >> j & 1:
                    w = system.transforms[j][w]
                    applied += 1
            coeff[w] += 1 if (n - applied) % 2 == 0 else -1
        rows.append(coeff)
    basis = nullspace(rows, size)
    if not basis:
        return RationalFunction.zero(size)
    values = [Fraction(0)] * size
    for vec in basis:
        c = Fraction(rng.randint(-3, 3))
        if c:
            values = [v + c * w for v, w in zip(values, vec)]
    return RationalFunction(tuple(values))


def generic_function(rng: random.Random, size: int) -> RationalFunction:
    return RationalFunction(tuple(
        Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2, 3)))
        for _ in range(size)))


def random_function(rng: random.Random, system: CommutingSystem,
                    style: Optional[str] = None) -> RationalFunction:
    if style is None:
        style = rng.choices(("generic", "decomposable", "mixed_kernel"),
                            weights=(35, 25, 40))[0]
    if style == "generic":
        return generic_function(rng, system.size)
    if style == "decomposable":
        return decomposable_function(rng, system)
    if style == "mixed_kernel":
        return mixed_kernel_function(rng, system)
    raise ValueError(f"unknown style {style!r}")


@dataclass(frozen=True)
class BranchInstance:
    """A cyclic-group instance steering the three-transform construction
    into a chosen correction branch at the stored exponent bound."""

    branch: str
    modulus: int
    transforms: tuple[tuple[int, ...], ...]
    f: RationalFunction
    bound: Optional[int]


def _shift_table(m: int, a: int) -> tuple[int, ...]:
    return tuple((x + a) % m for x in range(m))


def _periodic_part(rng: random.Random, m: int, period: int) -> RationalFunction:
    picks = [Fraction(rng.randint(-4, 4), rng.choice((1, 1, 2, 3)))
             for _ in range(period)]
    return RationalFunction(tuple(picks[x % period] for x in range(m)))


def branch_instance(rng: random.Random, branch: str,
                    modulus: Optional[int] = None) -> BranchInstance:
    """Build (t, s, u, f) on Z_m whose joint classes all classify as `branch`.

    Shifts are tuned so that prescribed-point witnesses for the hidden
    side(s) need exponents above the bound: with t = +1 a side with shift
    m/2 only admits relations whose t-exponents differ by a multiple of
    m/2, while shift m-1 admits t*u = identity at exponent 1.  The bound
    m/4 separates the two.  For "neither", t = +2 against two copies of
    shift m/2 hides both sides at bound 2; the derivative of f then has
    telescoping quotient cycles, so the pinned zero corrections are
    consistent.  f is decomposable by construction in every branch.
    """
    if branch not in ("both", "neither", "s-only", "u-only"):
        raise ValueError(f"unknown branch {branch!r}")
    if branch == "neither":
        m = modulus if modulus is not None else 4 * rng.randint(3, 8)
        if m % 4 != 0 or m < 12:
            raise ValueError("neither-branch instances need modulus = 4r >= 12")
        t = _shift_table(m, 2)
        half = _shift_table(m, m // 2)
        evens = Fraction(rng.randint(-3, 3))
        odds = Fraction(rng.randint(-3, 3))
        g = RationalFunction(tuple(evens if x % 2 == 0 else odds
                                   for x in range(m)))
        f = g + _periodic_part(rng, m, m // 2) + _periodic_part(rng, m, m // 2)
        return BranchInstance(branch, m, (t, half, half), f, 2)
    m = modulus if modulus is not None else 4 * rng.randint(2, 8)
    if m % 4 != 0 or m < 8:
        raise ValueError("branch instances need modulus = 4r >= 8")
    t = _shift_table(m, 1)
    half = _shift_table(m, m // 2)
    minus = _shift_table(m, m - 1)
    const = RationalFunction.constant(m, Fraction(rng.randint(-3, 3)))
    f = const + _periodic_part(rng, m, m // 2)
    if branch == "u-only":
        return BranchInstance(branch, m, (t, half, minus), f, m // 4)
    if branch == "s-only":
        return BranchInstance(branch, m, (t, minus, half), f, m // 4)
    return BranchInstance(branch, m, (t, minus, half), f, None)
