"""The partition-family necessary condition and its checkers.

For a partition of the transform indices into blocks with one distinguished
index per block, exponents k per block, and a base point z, the condition
says: whenever every non-distinguished index i in a block with head h
admits l, l2 with h^k i^l z = i^{l2} z, the mixed difference of f taken
with the heads at their exponents must vanish at z.  This is necessary for
decomposability for every n and sufficient for n <= 3; the miner at the
bottom of this module hunts for counterexamples beyond that.

Violations carry a full replayable instance; `replay_violation` re-derives
both the premises and the nonzero value from scratch.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Dict, Optional, Sequence, Tuple

from . import kernels
from .core import (
    CommutingSystem,
    PreconditionError,
    RangeError,
    RationalFunction,
    integer_values,
    power_table,
    validate_system,
)
from .oracle import Decomposition, DualCertificate, oracle_decompose
from .orbits import default_bound


@dataclass(frozen=True)
class StarInstance:
    """One premise/conclusion instance of the partition condition.

    blocks partition the transform indices; distinguished[b] is block b's
    head; exponents[b] its k; premises holds one (i, l, l2) triple per
    non-distinguished index i, witnessing head^k i^l z = i^{l2} z.
    """

    blocks: tuple[tuple[int, ...], ...]
    distinguished: tuple[int, ...]
    exponents: tuple[int, ...]
    premises: tuple[tuple[int, int, int], ...]
    z: int


@dataclass(frozen=True)
class StarViolation:
    """A premise-satisfying instance whose conclusion value is nonzero."""

    instance: StarInstance
    value: Fraction
    kind: str  # "MixedDeltaNonzero" | "CompatibilityFailure"


@lru_cache(maxsize=None)
def _partitions(n: int) -> tuple[tuple[tuple[int, ...], ...], ...]:
    """Set partitions of range(n), most blocks first, then lexicographic.

    The all-singleton partition therefore always comes first.
    """
    if n == 0:
        return ((),)
    results = []

    def grow(x: int, blocks: list):
        if x == n:
            results.append(tuple(tuple(b) for b in blocks))
            return
        for b in blocks:
            b.append(x)
            grow(x + 1, blocks)
            b.pop()
        blocks.append([x])
        grow(x + 1, blocks)
        blocks.pop()

    grow(0, [])
    results.sort(key=lambda blocks: (-len(blocks), blocks))
    return tuple(results)


def _premise_witnesses(pow_tables, heads, members, kvec, z, lmin, bound):
    """First (l, l2) pair per non-distinguished index, in scan order."""
    out = []
    for b, h in enumerate(heads):
        head_pow = pow_tables[h][kvec[b]]
        for i in members[b]:
            tabs = pow_tables[i]
            found = None
            for l in range(lmin, bound + 1):
                w = head_pow[tabs[l][z]]
                for l2 in range(lmin, bound + 1):
                    if w == tabs[l2][z]:
                        found = (i, l, l2)
                        break
                if found:
                    break
            if found is None:
                raise PreconditionError("premise witness vanished on replay")
            out.append(found)
    return tuple(sorted(out))


def check_star(system: CommutingSystem, f: RationalFunction,
               bound: Optional[int] = None, *,
               premise_lmin: int = 0) -> Optional[StarViolation]:
    """First violation of the partition condition, or None when it passes.

    Enumerates partitions (most blocks first, then lexicographic), then
    distinguished choices, then exponent vectors lexicographically, with z
    ascending innermost.  Premise exponents range over [premise_lmin,
    bound]; the head exponent of a one-element block is capped at 1, since
    its higher-exponent conclusions telescope into exponent-1 conclusions
    at shifted points whose premises follow by commuting the shift through.
    """
    if len(f) != system.size:
        raise PreconditionError("function length does not match the domain")
    if system.n == 0:
        return None
    if bound is None:
        bound = default_bound(system.size)
    if bound < 1:
        raise PreconditionError(f"bound must be >= 1, got {bound}")
    pow_tables = [power_table(t, bound) for t in system.transforms]
    f_num, denom = integer_values(f)
    for blocks in _partitions(system.n):
        for heads in product(*blocks):
            members = tuple(tuple(i for i in block if i != h)
                            for block, h in zip(blocks, heads))
            kmax = [1 if len(block) == 1 else bound for block in blocks]
            hit = kernels.star_scan(pow_tables, heads, members, kmax,
                                    premise_lmin, bound, f_num)
            if hit is None:
                continue
            kvec, z, value = hit
            premises = _premise_witnesses(pow_tables, heads, members, kvec,
                                          z, premise_lmin, bound)
            instance = StarInstance(blocks, tuple(heads), tuple(kvec),
                                    premises, z)
            return StarViolation(instance, Fraction(value, denom),
                                 "MixedDeltaNonzero")
    return None


def compare_premise_conventions(system: CommutingSystem, f: RationalFunction,
                                bound: Optional[int] = None) -> dict:
    """Verdicts under both premise-exponent conventions (l from 0 or from 1).

    Allowing l = 0 yields more premises, hence a check at least as strict.
    Returns the two outcomes and whether the verdicts agree; disagreement
    is flagged, not resolved.
    """
    with_zero = check_star(system, f, bound, premise_lmin=0)
    positive = check_star(system, f, bound, premise_lmin=1)
    return {
        "with_zero": with_zero,
        "positive_only": positive,
        "agree": (with_zero is None) == (positive is None),
    }


def replay_violation(system: CommutingSystem, f: RationalFunction,
                     violation: StarViolation) -> bool:
    """Re-derive a stored violation: structure, premises, and exact value."""
    inst = violation.instance
    covered = sorted(i for block in inst.blocks for i in block)
    if covered != list(range(system.n)):
        return False
    if len(inst.distinguished) != len(inst.blocks):
        return False
    for block, h, k in zip(inst.blocks, inst.distinguished, inst.exponents):
        if h not in block or k < 1:
            return False
    expected = sorted(i for block, h in zip(inst.blocks, inst.distinguished)
                      for i in block if i != h)
    if sorted(i for i, _, _ in inst.premises) != expected:
        return False
    if not 0 <= inst.z < system.size:
        return False
    head_of = {}
    k_of = {}
    for block, h, k in zip(inst.blocks, inst.distinguished, inst.exponents):
        for i in block:
            head_of[i] = h
            k_of[i] = k
    tables = system.transforms

    def iterate(t, steps, x):
        for _ in range(steps):
            x = t[x]
        return x

    for i, l, l2 in inst.premises:
        if l < 0 or l2 < 0:
            return False
        left = iterate(tables[head_of[i]], k_of[i],
                       iterate(tables[i], l, inst.z))
        right = iterate(tables[i], l2, inst.z)
        if left != right:
            return False
    value = Fraction(0)
    nb = len(inst.blocks)
    for mask in range(1 << nb):
        w = inst.z
        applied = 0
        for b in range(nb):
            if mask >> b & 1:
                w = iterate(tables[inst.distinguished[b]], inst.exponents[b], w)
                applied += 1
        term = f[w]
        value += term if (nb - applied) % 2 == 0 else -term
    return value == violation.value and value != 0


def _natural_multiple(a: int, b: int, modulus: Optional[int]) -> Optional[int]:
    """Smallest m >= 0 with m*a = b (over Z, or mod modulus), else None."""
    if modulus is None:
        if b == 0:
            return 0
        if a == 0:
            return None
        m, r = divmod(b, a)
        return m if r == 0 and m >= 0 else None
    a %= modulus
    b %= modulus
    seen = 0
    for m in range(modulus):
        if seen == b:
            return m
        seen = (seen + a) % modulus
    return None


def check_star_abelian(modulus: Optional[int], shifts: Sequence[int],
                       f: RationalFunction,
                       bound: Optional[int] = None) -> Optional[StarViolation]:
    """Partition-condition verdict for translation systems.

    modulus m means the domain Z_m with maps x -> x + a_i mod m; None
    means a window of Z (indices 0..len(f)-1) where conclusions are only
    evaluated at points whose whole difference stencil stays in-window.
    Premises become arithmetic: the head conclusion for block b at
    exponent k applies when each member shift a_i has a natural multiple
    equal to k * a_head (mod m when finite), removing the exponent search.
    The stored premise triples are (i, 0, multiple).
    """
    size = len(f)
    for a in shifts:
        if not isinstance(a, int) or isinstance(a, bool):
            raise RangeError(f"shift {a!r} is not an integer")
    if modulus is not None:
        if modulus < 1:
            raise RangeError(f"modulus must be positive, got {modulus}")
        if size != modulus:
            raise RangeError(
                f"function length {size} does not match modulus {modulus}")
    n = len(shifts)
    if n == 0:
        return None
    if bound is None:
        bound = 2 * size
    f_num, denom = integer_values(f)

    def offset_point(z: int, off: int) -> Optional[int]:
        if modulus is not None:
            return (z + off) % modulus
        w = z + off
        return w if 0 <= w < size else None

    for blocks in _partitions(n):
        for heads in product(*blocks):
            kmax = [1 if len(block) == 1 else bound for block in blocks]
            nb = len(blocks)
            for kvec in product(*[range(1, kmax[b] + 1) for b in range(nb)]):
                premises = []
                gated = True
                for b, (block, h) in enumerate(zip(blocks, heads)):
                    target = kvec[b] * shifts[h]
                    for i in block:
                        if i == h:
                            continue
                        mult = _natural_multiple(shifts[i], target, modulus)
                        if mult is None:
                            gated = False
                            break
                        premises.append((i, 0, mult))
                    if not gated:
                        break
                if not gated:
                    continue
                offsets = [kvec[b] * shifts[heads[b]] for b in range(nb)]
                for z in range(size):
                    value = 0
                    evaluable = True
                    for mask in range(1 << nb):
                        off = 0
                        applied = 0
                        for b in range(nb):
                            if mask >> b & 1:
                                off += offsets[b]
                                applied += 1
                        w = offset_point(z, off)
                        if w is None:
                            evaluable = False
                            break
                        value += (f_num[w] if (nb - applied) % 2 == 0
                                  else -f_num[w])
                    if evaluable and value:
                        instance = StarInstance(
                            blocks, tuple(heads), tuple(kvec),
                            tuple(sorted(premises)), z)
                        return StarViolation(instance, Fraction(value, denom),
                                             "MixedDeltaNonzero")
    return None


def replay_abelian_violation(modulus: Optional[int], shifts: Sequence[int],
                             f: RationalFunction,
                             violation: StarViolation) -> bool:
    """Re-derive an abelian violation arithmetically."""
    inst = violation.instance
    n = len(shifts)
    size = len(f)
    covered = sorted(i for block in inst.blocks for i in block)
    if covered != list(range(n)) or not 0 <= inst.z < size:
        return False
    head_of = {}
    k_of = {}
    for block, h, k in zip(inst.blocks, inst.distinguished, inst.exponents):
        if h not in block or k < 1:
            return False
        for i in block:
            head_of[i] = h
            k_of[i] = k
    for i, l, mult in inst.premises:
        if l != 0 or mult < 0:
            return False
        lhs = mult * shifts[i]
        rhs = k_of[i] * shifts[head_of[i]]
        if modulus is None:
            if lhs != rhs:
                return False
        elif (lhs - rhs) % modulus:
            return False
    nb = len(inst.blocks)
    value = Fraction(0)
    for mask in range(1 << nb):
        off = 0
        applied = 0
        for b in range(nb):
            if mask >> b & 1:
                off += inst.exponents[b] * shifts[inst.distinguished[b]]
                applied += 1
        if modulus is not None:
            w = (inst.z + off) % modulus
        else:
            w = inst.z + off
            if not 0 <= w < size:
                return False
        value += f[w] if (nb - applied) % 2 == 0 else -f[w]
    return value == violation.value and value != 0


def compatibility_violation(s: Sequence[int], t: Sequence[int],
                            f: RationalFunction, bound: int, *,
                            side: str = "t",
                            denom_hint=None) -> Optional[StarViolation]:
    """First failure of the orbit-value compatibility condition.

    Relations T^k S^n x = T^{k2} S^{n2} x with exponents <= bound must give
    f(T^k x) = f(T^{k2} x) (side "t") or f(S^n x) = f(S^{n2} x) (side "s").
    A failure is returned as a replayable one-block instance: the relation
    is rebased at z = (head)^min x so the head exponent difference is
    positive.  Transform indices refer to the system (s, t) = (0, 1).
    """
    f_num, denom = denom_hint if denom_hint else integer_values(f)
    pow_s = power_table(s, bound)
    pow_t = power_table(t, bound)
    if side == "t":
        head_idx, member_idx = 1, 0
        head_pow, other_pow = pow_t, pow_s
    elif side == "s":
        head_idx, member_idx = 0, 1
        head_pow, other_pow = pow_s, pow_t
    else:
        raise PreconditionError(f"side must be 't' or 's', got {side!r}")
    hit = kernels.compat_scan(head_pow, other_pow, f_num, bound, True)
    if hit is None:
        return None
    x, ka, na, kb, nb_, va, vb = hit
    if ka > kb:
        k, z_steps, l, l2, value = ka - kb, kb, na, nb_, va - vb
    else:
        k, z_steps, l, l2, value = kb - ka, ka, nb_, na, vb - va
    z = head_pow[z_steps][x]
    instance = StarInstance(
        blocks=((0, 1),),
        distinguished=(head_idx,),
        exponents=(k,),
        premises=((member_idx, l, l2),),
        z=z,
    )
    return StarViolation(instance, Fraction(value, denom),
                         "CompatibilityFailure")


def check_two_symmetric(s: Sequence[int], t: Sequence[int],
                        f: RationalFunction,
                        bound: Optional[int] = None) -> Optional[StarViolation]:
    """Both one-sided compatibility conditions plus the mixed difference.

    The T-side and S-side conditions are each equivalent to decomposability
    (given the vanishing mixed difference), so their verdicts always agree;
    the checks run in the order mixed difference, T side, S side, and the
    first failure is returned.
    """
    system = validate_system([s, t], len(f))
    if bound is None:
        bound = default_bound(system.size)
    f_num, denom = integer_values(f)
    for x in range(system.size):
        value = (f[t[s[x]]] - f[t[x]] - f[s[x]] + f[x])
        if value != 0:
            instance = StarInstance(
                blocks=((0,), (1,)), distinguished=(0, 1), exponents=(1, 1),
                premises=(), z=x)
            return StarViolation(instance, value, "MixedDeltaNonzero")
    for side in ("t", "s"):
        viol = compatibility_violation(s, t, f, bound, side=side,
                                       denom_hint=(f_num, denom))
        if viol is not None:
            return viol
    return None


@dataclass(frozen=True)
class Candidate:
    """A star-pass oracle-infeasible instance, re-verified from scratch."""

    trial: int
    size: int
    transforms: tuple[tuple[int, ...], ...]
    values: tuple[str, ...]
    dual_weights: tuple[str, ...]


@dataclass(frozen=True)
class SearchReport:
    """Outcome of a randomized search over commuting systems."""

    n: int
    max_size: int
    trials: int
    seed: int
    bound: Optional[int]
    star_pass: int
    star_fail: int
    oracle_feasible: int
    oracle_infeasible: int
    necessity_checked: int
    necessity_violations: int
    discrepancies: int
    candidates: tuple[Candidate, ...]


def _reverify_candidate(transforms, size, value_strings, bound):
    """Fresh objects, fresh verdicts; returns the new dual weights or None."""
    system = validate_system([list(t) for t in transforms], size)
    f = RationalFunction(tuple(Fraction(v) for v in value_strings))
    if check_star(system, f, bound) is not None:
        return None
    res = oracle_decompose(system, f)
    if isinstance(res, DualCertificate):
        return tuple(str(w) for w in res.weights)
    return None


def _run_trials(n: int, max_size: int, start: int, stop: int, seed: int,
                bound: Optional[int]) -> dict:
    from . import generators

    counts = {key: 0 for key in (
        "star_pass", "star_fail", "oracle_feasible", "oracle_infeasible",
        "necessity_checked", "necessity_violations", "discrepancies")}
    candidates = []
    smoke = n <= 3
    for trial in range(start, stop):
        rng = random.Random(f"{seed}:{trial}")
        system = generators.random_commuting_system(rng, n, max_size)
        f = generators.random_function(rng, system)
        violation = check_star(system, f, bound)
        if violation is None:
            counts["star_pass"] += 1
            res = oracle_decompose(system, f)
            if isinstance(res, DualCertificate):
                counts["oracle_infeasible"] += 1
                if smoke:
                    counts["discrepancies"] += 1
                value_strings = tuple(str(v) for v in f)
                weights = _reverify_candidate(
                    system.transforms, system.size, value_strings, bound)
                if weights is None:
                    counts["discrepancies"] += 1
                else:
                    candidates.append(Candidate(
                        trial, system.size, system.transforms,
                        value_strings, weights))
            else:
                counts["oracle_feasible"] += 1
        else:
            counts["star_fail"] += 1
            if smoke or trial % 7 == 0:
                counts["necessity_checked"] += 1
                res = oracle_decompose(system, f)
                if isinstance(res, Decomposition):
                    counts["necessity_violations"] += 1
                    counts["discrepancies"] += 1
                else:
                    counts["oracle_infeasible"] += 1
    counts["candidates"] = candidates
    return counts


def search_counterexample(n: int, max_size: int, trials: int, seed: int,
                          workers: int = 1,
                          bound: Optional[int] = None) -> SearchReport:
    """Randomized hunt for star-pass but non-decomposable instances.

    With n <= 3 this is a smoke regression: any star/oracle disagreement
    counts as a discrepancy and must not happen.  With n >= 4 a star-pass
    oracle-infeasible instance is a genuine find; it is re-verified from
    scratch and shipped with its dual certificate.  Star-fail instances
    are spot-checked (every 7th trial) for the necessity direction.

    Deterministic under a fixed seed: each trial reseeds from (seed,
    trial), so the worker count never changes the outcome.
    """
    if n < 2:
        raise PreconditionError("search needs at least two transformations")
    if max_size < 2:
        raise PreconditionError("max_size must be at least 2")
    if trials < 0:
        raise PreconditionError("trials must be nonnegative")
    shards: list
    if workers <= 1 or trials < 2:
        shards = [_run_trials(n, max_size, 0, trials, seed, bound)]
    else:
        from concurrent.futures import ProcessPoolExecutor

        workers = min(workers, trials)
        step = (trials + workers - 1) // workers
        spans = [(lo, min(lo + step, trials))
                 for lo in range(0, trials, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            shards = list(pool.map(_shard_entry,
                                   [(n, max_size, lo, hi, seed, bound)
                                    for lo, hi in spans]))
    merged = {key: sum(s[key] for s in shards)
              for key in shards[0] if key != "candidates"}
    all_candidates = sorted(
        (c for s in shards for c in s["candidates"]), key=lambda c: c.trial)
    return SearchReport(
        n=n, max_size=max_size, trials=trials, seed=seed, bound=bound,
        candidates=tuple(all_candidates), **merged)


def _shard_entry(args) -> dict:
    return _run_trials(*args)
