"""The amalgamated product ``D = A *_B C`` with exact normal forms.

Elements are stored in Schreier normal form ``(b; s1, ..., sn)``: a head
``b`` in ``B`` followed by alternating non-trivial right-coset
representatives of ``alpha(B)`` in ``A`` and ``gamma(B)`` in ``C``.
Words are reduced right to left: each incoming letter is multiplied into
the head and the leftmost syllable, and the ``B``-part is split off through
the transversal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .groups import Embedding, GroupDesc, GroupError, check_embedding, cyclic
from .topology import FilterBase, subgroup_is_closed, subgroup_is_open

SIDES = ("a", "c")


class MismatchedSetups(ValueError):
    pass


class InvariantViolation(ValueError):
    pass


def other(side: str) -> str:
    return "c" if side == "a" else "a"


@dataclass(eq=False)
class AmalgamSetup:
    """The span ``A <- B -> C`` with topologies on ``A`` and ``C``."""

    name: str
    A: GroupDesc
    C: GroupDesc
    B: GroupDesc
    alpha: Embedding
    gamma: Embedding
    base_a: FilterBase
    base_c: FilterBase
    base_b: Optional[FilterBase] = None
    b_closed: tuple = (True, True)
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.alpha.source != self.B or self.gamma.source != self.B:
            raise InvariantViolation("alpha and gamma must both start at B")
        if self.alpha.target != self.A or self.gamma.target != self.C:
            raise InvariantViolation("alpha must land in A and gamma in C")
        for e in (self.alpha, self.gamma):
            verdict = check_embedding(e)
            if not verdict:
                raise InvariantViolation(
                    f"embedding {e.name}: {verdict.reason}, witness {verdict.witness}")
        if self.base_a.group != self.A or self.base_c.group != self.C:
            raise InvariantViolation("topologies must live on A and C")
        self.b_closed = (subgroup_is_closed(self.image_subgroup("a"), self.base_a),
                         subgroup_is_closed(self.image_subgroup("c"), self.base_c))
        self._check_common_b_topology()

    def _check_common_b_topology(self):
        # B must carry one topology: the two restrictions agree at every depth
        from . import regions
        depth = max(len(self.base_a.chain), len(self.base_c.chain)) + 2
        ra = [regions.preimage(self.alpha, regions.subgroup_region(self.A, self.base_a.subgroup(k)))
              for k in range(1, 2 * depth + 1)]
        rc = [regions.preimage(self.gamma, regions.subgroup_region(self.C, self.base_c.subgroup(k)))
              for k in range(1, 2 * depth + 1)]
        # same filter: every neighbourhood on one side contains one on the other
        for R in ra[:depth]:
            if not any(S.issubset(R) for S in rc):
                raise InvariantViolation("the topologies induced on B by A and by C differ")
        for S in rc[:depth]:
            if not any(R.issubset(S) for R in ra):
                raise InvariantViolation("the topologies induced on B by A and by C differ")

    # -- side helpers --------------------------------------------------------

    def group(self, side: str) -> GroupDesc:
        return self.A if side == "a" else self.C

    def emb(self, side: str) -> Embedding:
        return self.alpha if side == "a" else self.gamma

    def base(self, side: str) -> FilterBase:
        return self.base_a if side == "a" else self.base_c

    def image_subgroup(self, side: str):
        e = self.emb(side)
        if e.target.is_finite:
            return e.image_set()
        return e.image_modulus

    def b_open(self) -> tuple[bool, bool]:
        return (subgroup_is_open(self.image_subgroup("a"), self.base_a),
                subgroup_is_open(self.image_subgroup("c"), self.base_c))

    def is_free_product(self) -> bool:
        return self.B.is_finite and self.B.order == 1

    def finite_index(self, side: str) -> bool:
        return self.emb(side).index() is not None

    def identity(self) -> "AmalgamElement":
        return AmalgamElement(self, self.B.identity, ())

    def free_cover(self) -> "AmalgamSetup":
        """The free product ``A * C`` with the same topologies (``B`` trivial)."""
        cover = self._cache.get("free_cover")
        if cover is None:
            triv = cyclic(1, "1")
            cover = AmalgamSetup(
                f"{self.name}~free", self.A, self.C, triv,
                Embedding("alpha0", triv, self.A, (0,)),
                Embedding("gamma0", triv, self.C, (0,)),
                self.base_a, self.base_c)
            self._cache["free_cover"] = cover
        return cover

    def __repr__(self):
        return f"AmalgamSetup({self.name})"


@dataclass(frozen=True)
class AmalgamElement:
    setup: AmalgamSetup = field(repr=False)
    head: int
    syllables: tuple  # ((side, rep), ...)

    def __eq__(self, other):
        return (isinstance(other, AmalgamElement) and self.setup is other.setup
                and self.head == other.head and self.syllables == other.syllables)

    def __hash__(self):
        return hash((id(self.setup), self.head, self.syllables))

    def __len__(self):
        return len(self.syllables)

    def __mul__(self, other):
        return amalgam_mul(self, other)

    def is_identity(self) -> bool:
        return not self.syllables and self.head == self.setup.B.identity

    def letters(self) -> list[tuple[str, int]]:
        """A word for this element: the head (on the first syllable's side) and syllables."""
        S = self.setup
        if not self.syllables:
            return [("a", S.alpha(self.head))]
        side, t = self.syllables[0]
        G = S.group(side)
        first = (side, G.op(S.emb(side)(self.head), t))
        return [first] + list(self.syllables[1:])

    def __str__(self):
        S = self.setup
        head = "e" if self.head == S.B.identity else S.B.label(self.head)
        syl = ",".join(f"{s}:{S.group(s).label(t)}" for s, t in self.syllables)
        return f"NF head={head} syllables=[{syl}]"


@dataclass(frozen=True)
class XPoint:
    """A point of the pushout space; ``B``-material always sits on the C-side."""

    side: str
    value: int


def xpoint(setup: AmalgamSetup, side: str, value: int) -> XPoint:
    if side == "a" and setup.alpha.in_image(value):
        return XPoint("c", setup.gamma(setup.alpha.preimage(value)))
    return XPoint(side, value)


def _prepend(setup: AmalgamSetup, side: str, g: int, head: int, syl: tuple):
    G = setup.group(side)
    e = setup.emb(side)
    y = G.op(g, e(head))
    if syl and syl[0][0] == side:
        y = G.op(y, syl[0][1])
        syl = syl[1:]
    b, t = e.decompose(y)
    if t == G.identity:
        return b, syl
    return b, ((side, t),) + syl


def normalize(setup: AmalgamSetup, word: Iterable[tuple[str, int]]) -> AmalgamElement:
    """Normal form of a word of ``(side, value)`` letters."""
    head, syl = setup.B.identity, ()
    for side, g in reversed(list(word)):
        if side not in SIDES:
            raise ValueError(f"unknown side {side!r}")
        if not setup.group(side).contains(g):
            raise GroupError(f"{g} is not an element of {setup.group(side).name}")
        head, syl = _prepend(setup, side, g, head, syl)
    return AmalgamElement(setup, head, syl)


def amalgam_mul(d1: AmalgamElement, d2: AmalgamElement) -> AmalgamElement:
    if d1.setup is not d2.setup:
        raise MismatchedSetups("elements belong to different amalgams")
    S = d1.setup
    head, syl = d2.head, d2.syllables
    for side, g in reversed(d1.letters()):
        head, syl = _prepend(S, side, g, head, syl)
    return AmalgamElement(S, head, syl)


def amalgam_inv(d: AmalgamElement) -> AmalgamElement:
    S = d.setup
    word = [(side, S.group(side).inv(g)) for side, g in reversed(d.letters())]
    return normalize(S, word)


def kappa(setup: AmalgamSetup, a: int) -> AmalgamElement:
    return normalize(setup, [("a", a)])


def lambda_(setup: AmalgamSetup, c: int) -> AmalgamElement:
    return normalize(setup, [("c", c)])


def omega(setup: AmalgamSetup, x: XPoint) -> AmalgamElement:
    return normalize(setup, [(x.side, x.value)])


def word_of(setup: AmalgamSetup, d: AmalgamElement) -> list[tuple[str, int]]:
    return d.letters()


def project(d: AmalgamElement, target: AmalgamSetup) -> AmalgamElement:
    """Image under the quotient map between two amalgams of the same ``A``, ``C``."""
    return normalize(target, d.letters())


@dataclass(frozen=True)
class Eq21Result:
    ok: bool
    window: int
    coincidences: tuple = ()
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def _window_values(G: GroupDesc, window: int) -> Sequence[int]:
    if G.is_finite:
        return G.elements()
    return range(-window, window + 1)


def check_eq21(setup: AmalgamSetup, window: int = 10) -> Eq21Result:
    """``kappa(A) & lambda(C) == kappa(alpha(B))`` on the window (exhaustive when finite)."""
    S = setup
    lam = {}
    for c in _window_values(S.C, window):
        lam.setdefault(lambda_(S, c), []).append(c)
    coincidences = []
    for a in _window_values(S.A, window):
        k = kappa(S, a)
        for c in lam.get(k, ()):
            coincidences.append((a, c))
            if not S.alpha.in_image(a):
                return Eq21Result(False, window, tuple(coincidences), (a, c))
    for b in _window_values(S.B, window):
        try:
            a, c = S.alpha(b), S.gamma(b)
        except OverflowError:
            continue
        if kappa(S, a) != lambda_(S, c):
            return Eq21Result(False, window, tuple(coincidences), ("b", b))
    return Eq21Result(True, window, tuple(coincidences))


def elements_up_to(setup: AmalgamSetup, max_len: int, window: int) -> list[AmalgamElement]:
    """Normal forms with at most ``max_len`` syllables and values within ``window``.

    Heads range over ``B`` values with ``|b| <= window``; syllables over
    non-trivial transversal representatives (for an infinite-index side, over
    non-zero values with ``|v| <= window``).
    """
    S = setup
    heads = list(_window_values(S.B, window))
    reps = {}
    for side in SIDES:
        e = S.emb(side)
        G = S.group(side)
        if e.index() is None:
            reps[side] = [v for v in range(-window, window + 1) if v != 0]
        elif G.is_finite:
            reps[side] = sorted({e.decompose(g)[1] for g in G.elements()} - {0})
        else:
            reps[side] = list(range(1, e.image_modulus))
    patterns = [()]
    frontier = [()]
    for _ in range(max_len):
        nxt = []
        for p in frontier:
            for side in SIDES:
                if p and p[-1][0] == side:
                    continue
                for t in reps[side]:
                    nxt.append(p + ((side, t),))
        patterns.extend(nxt)
        frontier = nxt
    return [AmalgamElement(S, h, p) for p in patterns for h in heads]
