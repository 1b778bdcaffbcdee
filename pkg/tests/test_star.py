import random
from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perdec import generators, kernels
from perdec.core import (
    PreconditionError,
    RationalFunction,
    integer_values,
    power_table,
    validate_system,
)
from perdec.star import (
    StarInstance,
    StarViolation,
    _partitions,
    check_star,
    check_star_abelian,
    check_two_symmetric,
    compare_premise_conventions,
    compatibility_violation,
    replay_abelian_violation,
    replay_violation,
)
from tests.conftest import systems, systems_with_functions, value_functions


def test_partitions_counts_and_order():
    # Bell numbers, with the all-singleton partition always first
    for n, bell in ((0, 1), (1, 1), (2, 2), (3, 5), (4, 15)):
        parts = _partitions(n)
        assert len(parts) == bell
        if n:
            assert parts[0] == tuple((i,) for i in range(n))
    assert _partitions(2) == (((0,), (1,)), ((0, 1),))


def test_check_star_rejects_bad_inputs():
    system = validate_system([(1, 0)], 2)
    with pytest.raises(PreconditionError):
        check_star(system, RationalFunction.zero(3))
    with pytest.raises(PreconditionError):
        check_star(system, RationalFunction.zero(2), bound=0)


def test_check_star_single_swap_violation():
    system = validate_system([(1, 0)], 2)
    f = RationalFunction((Fraction(0), Fraction(1)))
    viol = check_star(system, f)
    assert viol is not None
    assert viol.kind == "MixedDeltaNonzero"
    assert viol.instance == StarInstance(
        blocks=((0,),), distinguished=(0,), exponents=(1,), premises=(), z=0)
    assert viol.value == 1
    assert replay_violation(system, f, viol)


def test_replay_rejects_tampered_violations():
    system = validate_system([(1, 0)], 2)
    f = RationalFunction((Fraction(0), Fraction(1)))
    viol = check_star(system, f)
    inst = viol.instance
    assert not replay_violation(system, f, StarViolation(
        inst, viol.value + 1, viol.kind))
    moved = StarInstance(inst.blocks, inst.distinguished, inst.exponents,
                         inst.premises, z=1)
    # z=1 flips the sign, so the stored value no longer matches
    assert not replay_violation(system, f, StarViolation(
        moved, viol.value, viol.kind))
    dropped = StarInstance(((0,), (1,)), (0, 1), (1, 1), (), 0)
    assert not replay_violation(system, f, StarViolation(
        dropped, viol.value, viol.kind))


@given(systems(max_size=5), st.integers(0, 10 ** 9))
@settings(max_examples=50, deadline=None)
def test_check_star_passes_on_planted_decompositions(system, seed):
    rng = random.Random(f"necessity:{seed}")
    f = generators.decomposable_function(rng, system)
    assert check_star(system, f) is None


@given(systems_with_functions(max_size=5))
@settings(max_examples=40, deadline=None)
def test_check_star_violations_replay(case):
    system, f = case
    viol = check_star(system, f)
    if viol is not None:
        assert replay_violation(system, f, viol)


def _uncapped_star_verdict(system, f, bound):
    """check_star without the exponent-1 cap on one-element blocks."""
    pow_tables = [power_table(t, bound) for t in system.transforms]
    f_num, _ = integer_values(f)
    for blocks in _partitions(system.n):
        for heads in product(*blocks):
            members = tuple(tuple(i for i in block if i != h)
                            for block, h in zip(blocks, heads))
            kmax = [bound] * len(blocks)
            if kernels.star_scan(pow_tables, heads, members, kmax,
                                 0, bound, f_num) is not None:
                return False
    return True


@given(systems_with_functions(max_size=4))
@settings(max_examples=30, deadline=None)
def test_singleton_exponent_cap_preserves_the_verdict(case):
    system, f = case
    passed = check_star(system, f) is None
    assert passed == _uncapped_star_verdict(system, f, 2 * system.size)


@given(systems_with_functions(max_size=5))
@settings(max_examples=40, deadline=None)
def test_premise_conventions_agree_at_default_bound(case):
    system, f = case
    report = compare_premise_conventions(system, f)
    assert report["agree"] is True


@given(st.integers(2, 6), st.data())
def test_abelian_checker_matches_table_checker(m, data):
    shifts = tuple(data.draw(st.integers(0, m - 1))
                   for _ in range(data.draw(st.integers(1, 2))))
    f = data.draw(value_functions(m))
    tables = [tuple((x + a) % m for x in range(m)) for a in shifts]
    system = validate_system(tables, m)
    table_verdict = check_star(system, f)
    abelian_verdict = check_star_abelian(m, shifts, f)
    assert (table_verdict is None) == (abelian_verdict is None)
    if abelian_verdict is not None:
        assert replay_abelian_violation(m, shifts, f, abelian_verdict)
        # abelian instances replay on the table system too
        assert replay_violation(system, f, abelian_verdict)


def test_abelian_window_shift_two():
    f = RationalFunction(tuple(Fraction(x) for x in range(5)))
    viol = check_star_abelian(None, (2,), f)
    assert viol is not None
    assert viol.value == 2
    assert replay_abelian_violation(None, (2,), f, viol)
    periodic = RationalFunction(tuple(Fraction(x % 2) for x in range(5)))
    assert check_star_abelian(None, (2,), periodic) is None


def test_abelian_replay_rejects_out_of_window_points():
    f = RationalFunction(tuple(Fraction(x) for x in range(5)))
    viol = check_star_abelian(None, (2,), f)
    inst = viol.instance
    shifted = StarInstance(inst.blocks, inst.distinguished, inst.exponents,
                           inst.premises, z=4)  # z + 2 leaves the window
    assert not replay_abelian_violation(None, (2,), f, StarViolation(
        shifted, viol.value, viol.kind))


def test_abelian_rejects_bad_inputs():
    f = RationalFunction.zero(4)
    with pytest.raises(Exception):
        check_star_abelian(3, (1,), f)  # length != modulus
    with pytest.raises(Exception):
        check_star_abelian(4, (True,), f)  # bool shift
    with pytest.raises(Exception):
        check_star_abelian(0, (), RationalFunction.zero(0))


def test_compatibility_violation_double_swap():
    swap = (1, 0)
    f = RationalFunction((Fraction(0), Fraction(1)))
    viol = compatibility_violation(swap, swap, f, bound=4, side="t")
    assert viol is not None
    assert viol.kind == "CompatibilityFailure"
    inst = viol.instance
    assert inst.blocks == ((0, 1),)
    assert inst.distinguished == (1,)
    assert inst.exponents[0] >= 1
    # the full instance replays as a one-block partition-condition failure
    system = validate_system([swap, swap], 2)
    assert replay_violation(system, f, viol)
    sided = compatibility_violation(swap, swap, f, bound=4, side="s")
    assert sided is not None and sided.instance.distinguished == (0,)
    with pytest.raises(PreconditionError):
        compatibility_violation(swap, swap, f, bound=4, side="x")


@given(systems(n=2, max_size=5), st.data())
@settings(max_examples=40, deadline=None)
def test_compatibility_sides_agree_when_mixed_passes(system, data):
    s, t = system.transforms
    f = data.draw(value_functions(system.size))
    mixed_ok = all(
        f[t[s[x]]] - f[t[x]] - f[s[x]] + f[x] == 0
        for x in range(system.size))
    if not mixed_ok:
        return
    t_side = compatibility_violation(s, t, f, 2 * system.size, side="t")
    s_side = compatibility_violation(s, t, f, 2 * system.size, side="s")
    assert (t_side is None) == (s_side is None)


@given(systems_with_functions(n=2, max_size=6))
@settings(max_examples=60, deadline=None)
def test_two_transform_checkers_agree(case):
    system, f = case
    s, t = system.transforms
    symmetric = check_two_symmetric(s, t, f)
    general = check_star(system, f)
    assert (symmetric is None) == (general is None)
    if symmetric is not None:
        assert replay_violation(system, f, symmetric)
