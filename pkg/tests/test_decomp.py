import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from perdec import generators
from perdec.core import (
    BoundTooSmallError,
    Decomposition,
    RationalFunction,
    is_invariant,
    validate_system,
)
from perdec.decomp import (
    decompose_one,
    decompose_three,
    decompose_three_report,
    decompose_two,
)
from perdec.oracle import DualCertificate, oracle_decompose
from perdec.star import StarViolation, replay_violation
from tests.conftest import systems, systems_with_functions, value_functions


def test_decompose_one_invariant_and_not():
    t = (1, 2, 2, 3)
    f = RationalFunction((Fraction(5), Fraction(5), Fraction(5), Fraction(-1)))
    got = decompose_one(t, f)
    assert isinstance(got, Decomposition)
    assert got.parts == (f,)
    bad = RationalFunction((Fraction(0), Fraction(1), Fraction(1), Fraction(0)))
    viol = decompose_one(t, bad)
    assert isinstance(viol, StarViolation)
    assert replay_violation(validate_system([t], 4), bad, viol)


def test_decompose_two_double_swap_fails_mixed():
    swap = (1, 0)
    f = RationalFunction((Fraction(0), Fraction(1)))
    viol = decompose_two(swap, swap, f)
    assert isinstance(viol, StarViolation)
    assert viol.kind == "MixedDeltaNonzero"
    assert replay_violation(validate_system([swap, swap], 2), f, viol)


@given(systems(n=2), st.integers(0, 10 ** 9))
def test_decompose_two_accepts_planted_sums(system, seed):
    rng = random.Random(f"plant2:{seed}")
    s, t = system.transforms
    f = (generators.random_invariant_part(rng, s)
         + generators.random_invariant_part(rng, t))
    got = decompose_two(s, t, f)
    assert isinstance(got, Decomposition)
    g, rest = got.parts
    assert g + rest == f
    assert is_invariant(s, g)
    assert is_invariant(t, rest)


@given(systems_with_functions(n=2, max_size=6))
@settings(max_examples=60, deadline=None)
def test_decompose_two_matches_oracle(case):
    system, f = case
    s, t = system.transforms
    got = decompose_two(s, t, f)
    oracle = oracle_decompose(system, f)
    if isinstance(got, Decomposition):
        assert not isinstance(oracle, DualCertificate)
    else:
        assert isinstance(oracle, DualCertificate)
        assert replay_violation(system, f, got)


@given(systems_with_functions(n=2, max_size=6))
@settings(max_examples=40, deadline=None)
def test_decompose_two_is_bound_independent(case):
    system, f = case
    s, t = system.transforms
    at_default = decompose_two(s, t, f)
    at_double = decompose_two(s, t, f, bound=4 * system.size)
    if isinstance(at_default, Decomposition):
        # the constructed value is witness-independent, so parts match exactly
        assert at_default == at_double
    else:
        assert isinstance(at_double, StarViolation)


def test_decompose_two_bound_too_small():
    m = 8
    plus = tuple((x + 1) % m for x in range(m))
    f = RationalFunction.constant(m, Fraction(3))
    with pytest.raises(BoundTooSmallError):
        decompose_two(plus, plus, f, bound=1)


def test_decompose_three_bound_too_small_propagates():
    m = 8
    plus = tuple((x + 1) % m for x in range(m))
    f = RationalFunction.constant(m, Fraction(3))
    with pytest.raises(BoundTooSmallError):
        decompose_three(plus, plus, plus, f, bound=1)


@given(systems(n=3, max_size=5), st.integers(0, 10 ** 9))
@settings(max_examples=40, deadline=None)
def test_decompose_three_accepts_planted_sums(system, seed):
    rng = random.Random(f"plant3:{seed}")
    t, s, u = system.transforms
    f = (generators.random_invariant_part(rng, t)
         + generators.random_invariant_part(rng, s)
         + generators.random_invariant_part(rng, u))
    got = decompose_three(t, s, u, f)
    assert isinstance(got, Decomposition)
    g, h, l = got.parts
    assert g + h + l == f
    assert is_invariant(t, g)
    assert is_invariant(s, h)
    assert is_invariant(u, l)


@given(systems_with_functions(n=3, max_size=5))
@settings(max_examples=40, deadline=None)
def test_decompose_three_matches_oracle(case):
    system, f = case
    t, s, u = system.transforms
    got = decompose_three(t, s, u, f)
    oracle = oracle_decompose(system, f)
    if isinstance(got, Decomposition):
        assert not isinstance(oracle, DualCertificate)
    else:
        assert isinstance(oracle, DualCertificate)
        assert replay_violation(system, f, got)


@given(systems_with_functions(n=3, max_size=5))
@settings(max_examples=30, deadline=None)
def test_decompose_three_all_both_at_default_bound(case):
    system, f = case
    t, s, u = system.transforms
    outcome, report = decompose_three_report(t, s, u, f)
    if isinstance(outcome, Decomposition):
        # at bound 2N every point carries both prescribed-relation kinds
        assert set(report["branches"].values()) <= {"both"}
        assert report["branches"]


@given(systems_with_functions(n=3, max_size=5))
@settings(max_examples=25, deadline=None)
def test_decompose_three_is_bound_independent(case):
    system, f = case
    t, s, u = system.transforms
    at_default = decompose_three(t, s, u, f)
    at_double = decompose_three(t, s, u, f, bound=4 * system.size)
    if isinstance(at_default, Decomposition):
        assert at_default == at_double


@pytest.mark.parametrize("branch", ["both", "neither", "s-only", "u-only"])
def test_decompose_three_engineered_branches(branch):
    for seed in range(3):
        rng = random.Random(f"branch:{branch}:{seed}")
        inst = generators.branch_instance(rng, branch)
        t, s, u = inst.transforms
        outcome, report = decompose_three_report(t, s, u, inst.f,
                                                 bound=inst.bound)
        assert isinstance(outcome, Decomposition)
        assert set(report["branches"].values()) == {branch}
        g, h, l = outcome.parts
        assert g + h + l == inst.f
        assert is_invariant(t, g)
        assert is_invariant(s, h)
        assert is_invariant(u, l)
