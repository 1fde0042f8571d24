from hypothesis import given, settings, strategies as st

from amalgam.groups import cyclic, integers
from amalgam.regions import FiniteRegion, IntRegion
from amalgam.topology import (FilterBase, adheres, region_is_open, subgroup_is_closed,
                              subgroup_is_open)

from test_regions import int_regions

Z = integers()
TWO_ADIC = FilterBase.adic(Z, 2, 1)


def brute_open_2adic(R):
    # every point of R (in a window wide enough to see all residue classes
    # and exceptions) has some x + 2^k Z inside R, tested on a wider window
    for x in range(-60, 61):
        if x not in R:
            continue
        if not any(all(y in R for y in range(x - 400 * 2**k, x + 400 * 2**k + 1, 2**k))
                   for k in range(1, 9)):
            return False
    return True


@settings(max_examples=150)
@given(int_regions())
def test_region_is_open_2adic_matches_brute_force(R):
    assert region_is_open(R, TWO_ADIC) == brute_open_2adic(R)


@given(int_regions())
def test_everything_open_in_discrete_z(R):
    assert region_is_open(R, FilterBase.discrete(Z))


@given(int_regions(), st.integers(-30, 30))
def test_adheres_2adic(R, x):
    brute = all(any(y in R for y in range(x - 400 * 2**k, x + 400 * 2**k + 1, 2**k))
                for k in range(1, 9))
    assert adheres(R, x, TWO_ADIC, 1) == brute


def test_subgroups_in_2adic_z():
    assert subgroup_is_open(2, TWO_ADIC)
    assert subgroup_is_open(8, TWO_ADIC)
    assert not subgroup_is_open(3, TWO_ADIC)
    assert not subgroup_is_open(0, TWO_ADIC)
    assert subgroup_is_closed(2, TWO_ADIC)
    assert not subgroup_is_closed(3, TWO_ADIC)  # 3Z is dense 2-adically
    assert subgroup_is_closed(0, TWO_ADIC)


def test_finite_chain():
    G = cyclic(4)
    base = FilterBase.from_generators(G, [[2]])
    assert region_is_open(FiniteRegion.points(G, [0, 2]), base)
    assert not region_is_open(FiniteRegion.points(G, [0]), base)
    assert subgroup_is_open(frozenset({0, 2}), base)
    assert not subgroup_is_open(frozenset({0}), base)


def test_coset_region():
    assert TWO_ADIC.coset(1, 2) == IntRegion.coset(1, 4)
