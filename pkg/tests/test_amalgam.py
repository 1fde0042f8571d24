import itertools

import pytest
from hypothesis import given, settings, strategies as st

from amalgam.amalgam import (MismatchedSetups, amalgam_inv, amalgam_mul, check_eq21,
                             elements_up_to, kappa, lambda_, normalize, project)
from amalgam.groups import GroupError
from amalgam.instances import load

from oracles import rewriting_closure

SETUPS = {key: load(key).instance for key in ("z4_z2_z6", "z_2z_z", "z_free_z", "z2_free_z3")}


def words(S, max_len=5, window=12):
    def letter(side):
        G = S.group(side)
        vals = st.integers(0, G.order - 1) if G.is_finite else st.integers(-window, window)
        return st.tuples(st.just(side), vals)
    return st.lists(st.one_of(letter("a"), letter("c")), max_size=max_len)


def check_nf_shape(d):
    S = d.setup
    sides = [s for s, _ in d.syllables]
    assert all(x != y for x, y in zip(sides, sides[1:]))
    for side, t in d.syllables:
        e = S.emb(side)
        assert t != S.group(side).identity
        assert e.is_rep(t)


@pytest.mark.parametrize("key", sorted(SETUPS))
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_group_axioms(key, data):
    S = SETUPS[key]
    x, y, z = (normalize(S, data.draw(words(S))) for _ in range(3))
    for d in (x, y, z):
        check_nf_shape(d)
        assert normalize(S, d.letters()) == d
    assert (x * y) * z == x * (y * z)
    assert x * amalgam_inv(x) == S.identity() == amalgam_inv(x) * x
    assert x * S.identity() == x


@pytest.mark.parametrize("key", sorted(SETUPS))
@settings(max_examples=60, deadline=None)
@given(data=st.data())
def test_normalize_is_a_monoid_map(key, data):
    S = SETUPS[key]
    u, v = data.draw(words(S)), data.draw(words(S))
    assert normalize(S, u + v) == normalize(S, u) * normalize(S, v)


@settings(max_examples=60, deadline=None)
@given(words(SETUPS["z_2z_z"]))
def test_b_is_central_in_zz(w):
    # a^2 = c^2 generates the amalgamated subgroup, which is central here
    S = SETUPS["z_2z_z"]
    d = normalize(S, w)
    b = kappa(S, 2)
    assert b == lambda_(S, 2)
    assert b * d == d * b


def test_rewriting_oracle_agrees_on_z4z6():
    S = SETUPS["z4_z2_z6"]
    uf, letters = rewriting_closure({"a": 4, "c": 6}, {"a": [0, 2], "c": [0, 3]}, 5)
    nf_of_class, class_of_nf = {}, {}
    for n in range(5):
        for w in itertools.product(letters, repeat=n):
            d, c = normalize(S, w), uf.find(w)
            assert nf_of_class.setdefault(c, d) == d
            assert class_of_nf.setdefault(d, c) == c


def test_identity_collapse_examples():
    S = SETUPS["z4_z2_z6"]
    assert normalize(S, [("a", 2), ("c", 3)]).is_identity()
    assert normalize(S, [("a", 1), ("a", 3)]).is_identity()
    assert normalize(S, []).is_identity()
    assert len(normalize(S, [("a", 1), ("c", 1), ("a", 1)])) == 3


def test_bad_letters():
    S = SETUPS["z4_z2_z6"]
    with pytest.raises(GroupError):
        normalize(S, [("a", 9)])
    with pytest.raises(ValueError):
        normalize(S, [("x", 1)])
    with pytest.raises(MismatchedSetups):
        amalgam_mul(S.identity(), SETUPS["z_2z_z"].identity())


@pytest.mark.parametrize("key,window", [("z4_z2_z6", 10), ("z_2z_z", 32), ("z_free_z", 10),
                                        ("z2_free_z3", 10)])
def test_eq21(key, window):
    res = check_eq21(SETUPS[key], window)
    assert res.ok
    S = SETUPS[key]
    if S.A.is_finite and S.C.is_finite:
        # oracle: count pairs (a, c) with kappa(a) = lambda(c) via B
        expected = sum(1 for a in S.A.elements() for c in S.C.elements()
                       if S.alpha.in_image(a) and S.gamma(S.alpha.preimage(a)) == c)
        assert len(res.coincidences) == expected


def test_elements_up_to_are_distinct_normal_forms():
    S = SETUPS["z_2z_z"]
    els = elements_up_to(S, 2, 3)
    assert len(set(els)) == len(els)
    for d in els:
        check_nf_shape(d)


def test_project_to_quotient():
    S = SETUPS["z_2z_z"]
    cover = S.free_cover()
    d = normalize(cover, [("a", 2), ("c", -2)])
    assert not d.is_identity()
    assert project(d, S).is_identity()
