import pytest
from hypothesis import given, settings, strategies as st

from amalgam.instances import FILES, load, spec_text
from amalgam.specfile import (ResolutionError, SpecInvariantViolation, SpecSyntaxError,
                              format_set, format_spec, parse_element, parse_set, parse_spec,
                              parse_word, resolve_set)
from amalgam.x0 import description_set

SMALL = """
group A { kind = finite-cyclic order = 4 }
group C { kind = finite-cyclic order = 6 }
group B { kind = finite-cyclic order = 2 }
embedding alpha { from = B to = A images = 0, 2 }
embedding gamma { from = B to = C images = 0, 3 }
topology tA { group = A kind = discrete }
topology tC { group = C kind = discrete }
instance I {
  a = A  c = C  b = B  alpha = alpha  gamma = gamma
  topology_a = tA  topology_c = tC
}
"""


@pytest.mark.parametrize("key", sorted(FILES))
def test_round_trip(key):
    spec = parse_spec(spec_text(key))
    text = format_spec(spec)
    again = parse_spec(text)
    assert format_spec(again) == text
    assert again.instance.name == spec.instance.name
    for (v1, c1), (v2, c2) in zip(spec.catalogs.values(), again.catalogs.values()):
        assert v1 == v2
        assert [format_set(O) for O in c1] == [format_set(O) for O in c2]


def test_small_spec_parses():
    spec = parse_spec(SMALL)
    assert spec.instance.A.order == 4
    assert str(parse_element(spec.instance, "a(2)*c(3)")) == "NF head=e syllables=[]"


def test_word_syntax():
    S = load("z_2z_z").instance
    assert parse_word(S, "a(2)*c(3)^-1") == [("a", 2), ("c", -3)]
    assert parse_word(S, "e") == []
    with pytest.raises(SpecSyntaxError):
        parse_word(S, "a(2)*")
    with pytest.raises(SpecSyntaxError):
        parse_word(S, "x(1)")


def test_non_homomorphic_embedding_is_invariant_violation():
    bad = SMALL.replace("images = 0, 2", "images = 0, 1")
    with pytest.raises(SpecInvariantViolation) as info:
        parse_spec(bad)
    assert info.value.rule == "InvariantViolation"
    assert info.value.line > 0


def test_undefined_topology_is_resolution_error():
    bad = SMALL.replace("topology_a = tA", "topology_a = nope")
    with pytest.raises(ResolutionError) as info:
        parse_spec(bad)
    assert (info.value.line, info.value.col) == (11, 3)


@pytest.mark.parametrize("text", [
    "group A { kind = finite-cyclic order = 4 ",
    "group A { kind = finite-cyclic order = four }",
    "widget A { }",
])
def test_syntax_errors(text):
    with pytest.raises(SpecSyntaxError) as info:
        parse_spec(text)
    assert info.value.rule == "SyntaxError"


def test_duplicate_declaration():
    with pytest.raises(SpecInvariantViolation) as info:
        parse_spec("group A { kind = finite-cyclic order = 4 }\ngroup A { kind = infinite-cyclic }")
    assert info.value.line == 2


def test_catalog_references():
    spec = load("z_2z_z")
    assert format_set(resolve_set(spec, "@main[4]")) == format_set(spec.catalog()[4])
    assert format_set(resolve_set(spec, "@catalog[0]")) == "all"
    with pytest.raises(ResolutionError):
        resolve_set(spec, "@main[99]")


ZZ = load("z_2z_z").instance

atoms = st.one_of(
    st.just("all"), st.just("empty"), st.just("side(a)"), st.just("side(c)"),
    st.builds(lambda v: f"{{a({v})*c(1)}}", st.integers(-5, 5)),
    st.builds(lambda s, v, k: f"[{s}: {v} + 2^{k} Z]", st.sampled_from("ac"),
              st.integers(0, 20), st.integers(1, 4)),
    st.builds(lambda v, k: f"[a: {v} + 2^{k} Z][c: 1 + 2^1 Z]", st.integers(0, 9),
              st.integers(1, 3)),
)


@settings(max_examples=60, deadline=None)
@given(st.lists(atoms, min_size=1, max_size=3), st.booleans())
def test_set_text_round_trip(parts, negate):
    text = " | ".join(parts)
    if negate:
        text = f"~({text})"
    O = parse_set(ZZ, text)
    printed = format_set(O)
    again = parse_set(ZZ, printed)
    assert format_set(again) == printed
    s1, s2 = description_set(O, 2), description_set(again, 2)
    assert s1.issubset(s2) and s2.issubset(s1)
