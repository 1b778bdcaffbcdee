import random
from fractions import Fraction

from hypothesis import strategies as st

from perdec import generators
from perdec.core import RationalFunction


def rationals(lo: int = -30, hi: int = 30, dmax: int = 12):
    return st.builds(Fraction, st.integers(lo, hi), st.integers(1, dmax))


def transform_tables(size: int):
    return st.lists(st.integers(0, size - 1), min_size=size,
                    max_size=size).map(tuple)


def value_functions(size: int):
    return st.lists(rationals(), min_size=size,
                    max_size=size).map(lambda vs: RationalFunction(tuple(vs)))


@st.composite
def sized_maps(draw, min_size: int = 1, max_size: int = 7):
    size = draw(st.integers(min_size, max_size))
    t = draw(transform_tables(size))
    return size, t


@st.composite
def systems(draw, n=None, max_size: int = 7, nmin: int = 1, nmax: int = 3):
    if n is None:
        n = draw(st.integers(nmin, nmax))
    seed = draw(st.integers(0, 10 ** 9))
    rng = random.Random(f"sys:{seed}")
    return generators.random_commuting_system(rng, n, max_size)


@st.composite
def systems_with_functions(draw, n=None, max_size: int = 7, style=None):
    system = draw(systems(n=n, max_size=max_size))
    seed = draw(st.integers(0, 10 ** 9))
    rng = random.Random(f"fun:{seed}")
    f = generators.random_function(rng, system, style)
    return system, f
