"""Group topologies given by descending chains of open subgroups.

Depths are 1-based: depth ``k`` refers to the ``k``-th subgroup of the chain.
Past the stored entries an infinite-cyclic chain continues by multiplying
its last modulus by ``ratio`` (``2, 4, 8, ...`` for the 2-adic topology);
without a ratio the chain stays at its last entry.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Optional, Sequence

from . import regions
from .groups import GroupDesc, GroupError, GroupValue, MismatchedGroups

DISCRETE = "discrete"
SUBGROUP_CHAIN = "subgroup-chain"


class UnsupportedDescription(ValueError):
    pass


def subgroup_closure(G: GroupDesc, gens) -> frozenset:
    """The subgroup of a finite group generated by ``gens``."""
    H = {0}
    frontier = [0]
    gens = list(gens)
    while frontier:
        x = frontier.pop()
        for g in gens:
            y = G.op(x, g)
            if y not in H:
                H.add(y)
                frontier.append(y)
    return frozenset(H)


@dataclass(frozen=True)
class FilterBase:
    """A neighbourhood base of the identity made of open subgroups.

    For the infinite cyclic group each entry is a modulus ``m`` standing for
    ``m Z`` (``0`` is the trivial subgroup); for finite groups each entry is
    the frozenset of elements of the subgroup.
    """

    group: GroupDesc
    kind: str
    chain: tuple
    ratio: Optional[int] = None
    generators: Optional[tuple] = None

    def __post_init__(self):
        G = self.group
        if self.kind not in (DISCRETE, SUBGROUP_CHAIN):
            raise GroupError(f"unknown topology kind {self.kind!r}")
        if not self.chain:
            raise GroupError("a filter base needs at least one subgroup")
        if self.kind == DISCRETE:
            trivial = 0 if not G.is_finite else frozenset({0})
            if self.chain != (trivial,) or self.ratio:
                raise GroupError("discrete kind has the trivial subgroup as its only entry")
            return
        if G.is_finite:
            if self.ratio:
                raise GroupError("ratio only applies to infinite-cyclic chains")
            for H in self.chain:
                if 0 not in H or any(G.op(x, y) not in H for x in H for y in H):
                    raise GroupError(f"{sorted(H)} is not a subgroup of {G.name}")
            for H, K in zip(self.chain, self.chain[1:]):
                if not K < H:
                    raise GroupError("chain is not strictly descending")
        else:
            for m in self.chain:
                if not isinstance(m, int) or m < 0:
                    raise GroupError("infinite-cyclic chain entries are moduli m >= 0")
            for m, n in zip(self.chain, self.chain[1:]):
                if m == 0 or (n != 0 and (n % m or n == m)):
                    raise GroupError(f"{n}Z is not strictly inside {m}Z")
            if self.ratio is not None:
                if self.ratio < 2 or self.chain[-1] == 0:
                    raise GroupError("chain ratio must be >= 2 on a nonzero modulus")

    # -- constructors --------------------------------------------------------

    @classmethod
    def discrete(cls, G: GroupDesc) -> "FilterBase":
        return cls(G, DISCRETE, (frozenset({0}),) if G.is_finite else (0,))

    @classmethod
    def adic(cls, G: GroupDesc, p: int, start: int = 1) -> "FilterBase":
        """``p^start Z > p^(start+1) Z > ...`` on the integers."""
        if G.is_finite:
            raise GroupError("adic chains live on the infinite cyclic group")
        return cls(G, SUBGROUP_CHAIN, (p**start,), ratio=p)

    @classmethod
    def from_generators(cls, G: GroupDesc, gens_chain: Sequence[Sequence[int]]) -> "FilterBase":
        chain = tuple(subgroup_closure(G, gens) for gens in gens_chain)
        trivial = len(chain) == 1 and chain[0] == frozenset({0})
        return cls(G, DISCRETE if trivial else SUBGROUP_CHAIN, chain,
                   generators=tuple(tuple(g) for g in gens_chain))

    # -- subgroups by depth --------------------------------------------------

    def subgroup(self, depth: int):
        if depth < 1:
            raise ValueError("depths start at 1")
        n = len(self.chain)
        if depth <= n:
            return self.chain[depth - 1]
        if self.ratio:
            return self.chain[-1] * self.ratio ** (depth - n)
        return self.chain[-1]

    def stable_depth(self) -> Optional[int]:
        """First depth after which the chain is constant, ``None`` if never."""
        return None if self.ratio else len(self.chain)

    def depth_of(self, sub) -> Optional[int]:
        """The smallest depth whose subgroup equals ``sub``."""
        for k in range(1, len(self.chain) + 1):
            if self.chain[k - 1] == sub:
                return k
        if self.ratio and not self.group.is_finite and sub:
            k, m = len(self.chain), self.chain[-1]
            while m < sub:
                m *= self.ratio
                k += 1
                if m == sub:
                    return k
        return None

    def is_discrete(self) -> bool:
        last = self.chain[-1]
        return not self.ratio and (last == 0 or last == frozenset({0}))

    def is_hausdorff(self) -> bool:
        return bool(self.ratio) or self.is_discrete()

    def coset(self, x: int, depth: int):
        return regions.coset(self.group, x, self.subgroup(depth))

    def coset_rep(self, x: int, depth: int) -> int:
        """Canonical (minimal) representative of ``x H_depth``."""
        H = self.subgroup(depth)
        if self.group.is_finite:
            return min(self.group.op(x, h) for h in H)
        return x % H if H else x

    def coset_reps(self, depth: int) -> list[int]:
        H = self.subgroup(depth)
        G = self.group
        if G.is_finite:
            return sorted({self.coset_rep(x, depth) for x in G.elements()})
        if H == 0:
            raise UnsupportedDescription("a discrete topology on Z has infinitely many cosets")
        return list(range(H))

    def limit_gcd(self, L: int) -> int:
        """``gcd(L, m_k)`` for all large ``k`` (infinite-cyclic chains)."""
        m = self.chain[-1]
        if not self.ratio:
            return gcd(L, m)
        g = gcd(L, m)
        for _ in range(L.bit_length() + 1):
            m *= self.ratio
            g = gcd(L, m)
        return g

    def __str__(self):
        if self.kind == DISCRETE:
            return "discrete"
        if self.group.is_finite:
            return " > ".join("{" + ",".join(map(str, sorted(H))) + "}" for H in self.chain)
        out = " > ".join(f"{m}Z" for m in self.chain)
        return out + " > ..." if self.ratio else out


@dataclass(frozen=True)
class BasicOpen:
    """The coset ``center * H_depth`` on one side of the pushout space."""

    side: str  # "a" or "c"
    center: int
    depth: int

    def __str__(self):
        return f"[{self.side}: {self.center} @{self.depth}]"


def basic_open(base: FilterBase, side: str, center: int, depth: int) -> BasicOpen:
    """Builds a basic open with its center reduced to the canonical coset rep."""
    if side not in ("a", "c"):
        raise ValueError(f"unknown side {side!r}")
    return BasicOpen(side, base.coset_rep(center, depth), depth)


def basic_member(g: GroupValue, o: BasicOpen, base: FilterBase) -> bool:
    if g.group != base.group:
        raise MismatchedGroups(f"{g.group.name} is not {base.group.name}")
    return g.value in base.coset(o.center, o.depth)


def subgroup_is_open(H, base: FilterBase) -> bool:
    """Does some chain entry lie inside ``H``?  ``H``: modulus or frozenset."""
    G = base.group
    if G.is_finite:
        H = frozenset(H)
        return any(K <= H for K in base.chain)
    m = abs(H)
    if m == 0:
        return any(k == 0 for k in base.chain)
    if any(k != 0 and k % m == 0 for k in base.chain):
        return True
    if base.ratio:
        # m | last * ratio^j for some j  iff  m | last * ratio^(bits of m)
        return (base.chain[-1] * base.ratio ** m.bit_length()) % m == 0
    return False


def subgroup_is_closed(H, base: FilterBase) -> bool:
    """Is the subgroup closed, i.e. is its complement open?"""
    G = base.group
    if G.is_finite:
        N = base.chain[-1] if not base.ratio else frozenset({0})
        H = frozenset(H)
        return all(G.op(h, n) in H for h in H for n in N)
    m = abs(H)
    if m == 0:
        return base.is_hausdorff()
    if base.chain[-1] == 0 and not base.ratio:
        return True
    # x + m_k Z misses mZ  iff  gcd(m_k, m) does not divide x
    return base.limit_gcd(m) == m


def region_is_open(R, base: FilterBase) -> bool:
    """Exact openness of a region of ``base.group``."""
    G = base.group
    if G.is_finite:
        k = base.stable_depth() or len(base.chain)
        return all(base.coset(x, k).issubset(R) for x in R)
    last = base.chain[-1]
    if not base.ratio and last == 0:
        return True
    if R.plus:
        return False
    g = base.limit_gcd(R.L)
    for r in R.residues():
        if any(not (R.mask >> s) & 1 for s in range(r % g, R.L, g)):
            return False
    if R.minus and not base.ratio:
        for h in R.minus:
            # points x != h with x = h mod last stay glued to the hole
            if any((R.mask >> s) & 1 for s in range(h % gcd(R.L, last), R.L, gcd(R.L, last))):
                return False
    return True


def adheres(R, x: int, base: FilterBase, from_depth: int) -> bool:
    """Does every coset ``x H_k`` with ``k >= from_depth`` meet ``R``?"""
    G = base.group
    if G.is_finite:
        k = max(from_depth, base.stable_depth() or len(base.chain))
        return not (base.coset(x, k) & R).is_empty()
    if not base.ratio:
        return R.coset_meets(x, base.subgroup(max(from_depth, len(base.chain))))
    if x in R:
        return True
    # cosets shrink to x: only the periodic part can keep meeting them
    g = base.limit_gcd(R.L)
    return any((R.mask >> s) & 1 for s in range(x % g, R.L, g))


def pushout_space_open(atoms, setup) -> bool:
    """Openness of a subset of the pushout space ``X = (A - B) u C``.

    ``atoms`` is an iterable of ``BasicOpen``, ``("point", side, value)`` or
    ``("side", side)`` items; the subset is their union.  Decided exactly:
    both preimages must be open in their groups.
    """
    PA, PC = pushout_preimages(atoms, setup)
    return region_is_open(PA, setup.base_a) and region_is_open(PC, setup.base_c)


def pushout_preimages(atoms, setup):
    A, C = setup.A, setup.C
    PA, PC = regions.empty(A), regions.empty(C)
    for atom in atoms:
        if isinstance(atom, BasicOpen):
            base = setup.base_a if atom.side == "a" else setup.base_c
            R = base.coset(atom.center, atom.depth)
            side = atom.side
        elif isinstance(atom, tuple) and atom and atom[0] == "point":
            _, side, value = atom
            R = regions.point(setup.group(side), value)
        elif isinstance(atom, tuple) and atom and atom[0] == "side":
            side = atom[1]
            R = regions.full(setup.group(side))
        else:
            raise UnsupportedDescription(f"not a pushout-space atom: {atom!r}")
        if side == "a":
            PA = PA | R
            PC = PC | regions.image(setup.gamma, regions.preimage(setup.alpha, R))
        else:
            PC = PC | R
            PA = PA | regions.image(setup.alpha, regions.preimage(setup.gamma, R))
    return PA, PC
