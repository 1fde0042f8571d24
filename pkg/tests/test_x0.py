import pytest
from hypothesis import given, settings, strategies as st

from amalgam.amalgam import kappa, lambda_, normalize
from amalgam.instances import load
from amalgam.specfile import parse_set
from amalgam.topology import UnsupportedDescription
from amalgam.x0 import (NOT_OPEN, OPEN, UNKNOWN, Cell, OpenDescription, PointAtom, blocks,
                        cell_member, compare_topologies, describe, is_open_x0, make_cell,
                        prop29_base, quotient_lift, recheck_certificate, recheck_witness)

Z4Z6 = load("z4_z2_z6")
ZZ = load("z_2z_z")
ZFREE = load("z_free_z")


def verdict(spec, text, bounds=(3, 3), window=8):
    O = parse_set(spec.instance, text)
    return O, is_open_x0(O, *bounds, window=window)


def test_odd_times_even_cell_misses_a1c1():
    S = ZZ.instance
    cell = make_cell(S, [("a", 1, 1), ("c", 0, 1)])
    assert not cell_member(kappa(S, 1) * lambda_(S, 1), cell)
    assert cell_member(kappa(S, 1) * lambda_(S, 2), cell)


def test_identity_is_not_open_2adic():
    O, v = verdict(ZZ, "{e}")
    assert v.status == NOT_OPEN
    assert v.witness.condition == "i"
    assert recheck_witness(O, v)


def test_identity_lift_is_not_open():
    O = parse_set(ZZ.instance, "{e}")
    v = is_open_x0(quotient_lift(O), 3, 3)
    assert v.status == NOT_OPEN
    assert recheck_witness(quotient_lift(O), v)


def test_even_side_lifts_to_open():
    O = parse_set(ZZ.instance, "[a: 0 + 2^1 Z]")
    assert is_open_x0(O, 3, 3).status == OPEN
    v = is_open_x0(quotient_lift(O), 3, 3)
    assert v.status == OPEN
    assert recheck_certificate(quotient_lift(O), v)


def test_c_side_on_free_product_fails_condition_i():
    O, v = verdict(ZFREE, "side(c)")
    assert v.status == NOT_OPEN and v.witness.condition == "i"
    assert recheck_witness(O, v)


def test_finite_intersection_rule():
    O, v = verdict(ZZ, "side(a) | {a(1)*c(1)}")
    assert v.status == NOT_OPEN
    assert v.witness.rule.startswith("finite")
    assert recheck_witness(O, v)


def test_complement_of_identity_stays_unknown_at_bound():
    # the complement of a point is open only in the limit of depth
    _, v = verdict(ZZ, "~({e})")
    assert v.status == UNKNOWN


@pytest.mark.parametrize("spec", [Z4Z6, load("z2_free_z3")])
def test_discrete_factors_make_everything_open(spec):
    for O in spec.catalog():
        v = is_open_x0(O, 2, 1)
        assert v.status == OPEN, describe(O)
        assert recheck_certificate(O, v)


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 7), st.integers(1, 3)), min_size=1, max_size=3),
       st.sampled_from("ac"))
def test_basic_cells_are_certified_open(factors, first):
    S = ZZ.instance
    sides = [first if i % 2 == 0 else ("c" if first == "a" else "a") for i in range(len(factors))]
    cell = make_cell(S, [(s, c, k) for s, (c, k) in zip(sides, factors)])
    O = OpenDescription(S, (cell,))
    v = is_open_x0(O, 2, 3, window=4)
    assert v.status == OPEN
    assert recheck_certificate(O, v)


def test_blocks_partition_pushout_space():
    # even cosets of 2^k Z glue pairwise along B; odd ones stay apart
    S = ZZ.instance
    assert [len(blocks(S, k)) for k in (1, 2, 3)] == [3, 6, 12]
    # discrete Z4 * Z6: one block per point of (A - B) u C
    assert len(blocks(Z4Z6.instance, 1)) == 2 + 6


def test_prop29_base_counts():
    # discrete Z4 * Z6 at (2, 1): 4 + 6 singletons, 2 * 4 * 6 products
    assert len(prop29_base(Z4Z6.instance, 2, 1)) == 58
    # 2-adic on both sides at (2, 2): 6 cosets per side
    assert len(prop29_base(ZZ.instance, 2, 2)) == 12 + 2 * 36


def test_compare_topologies_small():
    res = compare_topologies(Z4Z6.instance, Z4Z6.catalog(), 2, 1)
    assert res.direction1 == res.direction2 == "Pass"
    res = compare_topologies(ZFREE.instance, ZFREE.catalog(), 2, 2)
    assert res.direction1 == "Pass" and res.direction2 == "Skipped"


def test_description_validation():
    S = ZZ.instance
    with pytest.raises(UnsupportedDescription):
        Cell(())
    with pytest.raises(UnsupportedDescription):
        make_cell(S, [("a", 1, 1), ("a", 0, 1)])
    other = load("z_free_z").instance
    with pytest.raises(UnsupportedDescription):
        OpenDescription(S, (PointAtom(normalize(other, [])),))
    with pytest.raises(ValueError):
        is_open_x0(OpenDescription(S, ()), 0, 1)


def test_image_of_c_is_open_when_b_is_open():
    # C is an open subgroup once B is open on both sides
    O, v = verdict(ZZ, "side(c)")
    assert v.status == OPEN
    assert recheck_certificate(O, v)
