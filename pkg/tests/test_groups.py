import pytest
from hypothesis import given, strategies as st

from amalgam.groups import (Embedding, GroupError, check_embedding, cyclic, integers,
                            symmetric3)

Z = integers()
ints = st.integers(-10**6, 10**6)


@given(ints, ints, ints)
def test_integers_group_laws(x, y, z):
    assert Z.op(Z.op(x, y), z) == Z.op(x, Z.op(y, z))
    assert Z.op(x, Z.inv(x)) == Z.identity


@pytest.mark.parametrize("G", [cyclic(1), cyclic(4), cyclic(6), symmetric3()])
def test_finite_group_laws(G):
    els = list(G.elements())
    for x in els:
        assert G.op(x, G.identity) == x == G.op(G.identity, x)
        assert G.op(x, G.inv(x)) == G.identity
        for y in els:
            for z in els:
                assert G.op(G.op(x, y), z) == G.op(x, G.op(y, z))


def test_s3_is_not_abelian():
    G = symmetric3()
    assert any(G.op(x, y) != G.op(y, x) for x in G.elements() for y in G.elements())


def test_element_order():
    G = cyclic(6)
    assert [G.element_order(x) for x in G.elements()] == [1, 6, 3, 2, 3, 6]


def test_bad_images_rejected():
    with pytest.raises(GroupError):
        Embedding("e", cyclic(2), cyclic(4), (0,))
    with pytest.raises(GroupError):
        Embedding("e", cyclic(2), cyclic(4), (0, 7))


def test_non_injective_or_non_hom_is_detected():
    assert not check_embedding(Embedding("e", cyclic(2), cyclic(4), (0, 1)))
    assert not check_embedding(Embedding("e", cyclic(2), cyclic(4), (0, 0)))
    assert check_embedding(Embedding("e", cyclic(2), cyclic(4), (0, 2)))
    assert not check_embedding(Embedding("e", Z, Z, (0,)))
    assert check_embedding(Embedding("e", Z, Z, (2,)))


@given(st.integers(-500, 500), st.sampled_from([1, 2, 3, 5]))
def test_decompose_on_integers(g, m):
    e = Embedding("e", Z, Z, (m,))
    b, t = e.decompose(g)
    assert e(b) + t == g
    assert 0 <= t < m
    assert e.is_rep(t)


def test_decompose_finite():
    e = Embedding("e", cyclic(2), cyclic(6), (0, 3))
    reps = set()
    for g in range(6):
        b, t = e.decompose(g)
        assert (e(b) + t) % 6 == g
        reps.add(t)
    assert len(reps) == e.index() == 3
