"""Extending a pair of homomorphisms that agree on ``B`` to the amalgam."""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional

from .amalgam import AmalgamElement, AmalgamSetup, InvariantViolation
from .groups import GroupDesc, GroupError
from .topology import FilterBase, subgroup_is_open


class AgreementFailure(ValueError):
    pass


@dataclass(frozen=True)
class Hom:
    """A homomorphism given like an embedding: a table, or the image of ``1``."""

    name: str
    source: GroupDesc
    target: GroupDesc
    images: tuple

    def __post_init__(self):
        expected = self.source.order if self.source.is_finite else 1
        if len(self.images) != expected:
            raise GroupError(f"map {self.name} needs {expected} image(s)")
        for y in self.images:
            if not self.target.contains(y):
                raise GroupError(f"{y} is not an element of {self.target.name}")
        bad = self.failure()
        if bad is not None:
            raise InvariantViolation(f"map {self.name} is not a homomorphism at {bad}")

    def __call__(self, x: int) -> int:
        if self.source.is_finite:
            return self.images[x]
        return self.target.power(self.images[0], x)

    def failure(self) -> Optional[tuple]:
        S, T = self.source, self.target
        if not S.is_finite:
            return None  # Z is free on 1
        for x in S.elements():
            for y in S.elements():
                if self(S.op(x, y)) != T.op(self(x), self(y)):
                    return (x, y)
        return None

    def preimage_subgroup(self, H):
        """Preimage of a subgroup of the target (frozenset or modulus)."""
        S, T = self.source, self.target
        if S.is_finite:
            inside = (lambda y: y in H) if T.is_finite else (lambda y: (y % H == 0) if H else y == 0)
            return frozenset(x for x in S.elements() if inside(self(x)))
        g = self.images[0]
        if T.is_finite:
            d = 1
            while T.power(g, d) not in H:
                d += 1
            return d
        if g == 0:
            return 1
        if H == 0:
            return 0
        return H // gcd(H, abs(g))


@dataclass(frozen=True)
class HomPair:
    mu: Hom
    nu: Hom
    E: GroupDesc
    base_e: Optional[FilterBase] = None

    def __post_init__(self):
        if self.mu.target != self.E or self.nu.target != self.E:
            raise InvariantViolation("mu and nu must land in E")


@dataclass(frozen=True)
class Agreement:
    ok: bool
    witness: Optional[int] = None
    checked: int = 0

    def __bool__(self):
        return self.ok


def check_agreement(p: HomPair, setup: AmalgamSetup) -> Agreement:
    """``mu(alpha(b)) == nu(gamma(b))`` for every ``b`` (the generator when ``B = Z``)."""
    if p.mu.source != setup.A or p.nu.source != setup.C:
        raise InvariantViolation("mu must start at A and nu at C")
    B = setup.B
    domain = B.elements() if B.is_finite else (1,)
    for b in domain:
        if p.mu(setup.alpha(b)) != p.nu(setup.gamma(b)):
            return Agreement(False, b, len(domain))
    return Agreement(True, None, len(domain))


def continuity(p: HomPair, setup: AmalgamSetup, depth: int) -> Optional[tuple]:
    """First E-subgroup (up to ``depth``) whose preimage is not open, as ``(side, k)``."""
    if p.base_e is None:
        return None
    for k in range(1, depth + 1):
        H = p.base_e.subgroup(k)
        for side, h in (("a", p.mu), ("c", p.nu)):
            if not subgroup_is_open(h.preimage_subgroup(H), setup.base(side)):
                return (side, k)
    return None


class ExtendedHom:
    """The homomorphism ``D -> E`` induced by an agreeing pair."""

    def __init__(self, p: HomPair, setup: AmalgamSetup):
        self.pair = p
        self.setup = setup

    def __call__(self, d: AmalgamElement) -> int:
        if d.setup is not self.setup:
            raise InvariantViolation("element of another amalgam")
        E = self.pair.E
        out = E.identity
        for side, g in d.letters():
            h = self.pair.mu if side == "a" else self.pair.nu
            out = E.op(out, h(g))
        return out


def extend_hom(p: HomPair, setup: AmalgamSetup) -> ExtendedHom:
    verdict = check_agreement(p, setup)
    if not verdict:
        raise AgreementFailure(f"mu and nu disagree on b = {verdict.witness}")
    return ExtendedHom(p, setup)
