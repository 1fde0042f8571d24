"""Exact subsets ("regions") of the supported base groups.

A subset of the integers is stored as a periodic part (a residue set modulo
``L``) corrected by two finite sets: extra points outside the periodic part
and holes inside it.  This family is closed under boolean operations,
negation, Minkowski sums and the maps ``n -> k n``, which is everything the
normal-form set engine needs.  Subsets of finite groups are bitmasks.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import chain
from math import gcd
from typing import Iterable, Iterator

from .groups import Embedding, GroupDesc, GroupError, INFINITE_CYCLIC


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


@lru_cache(maxsize=4096)
def _repunit(L: int, reps: int) -> int:
    return ((1 << (L * reps)) - 1) // ((1 << L) - 1)


def _expand(mask: int, L: int, M: int) -> int:
    if L == M:
        return mask
    return mask * _repunit(L, M // L)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _rotate(mask: int, r: int, L: int) -> int:
    r %= L
    if not r:
        return mask
    full = (1 << L) - 1
    return ((mask << r) | (mask >> (L - r))) & full


@lru_cache(maxsize=4096)
def _divisors(n: int) -> tuple[int, ...]:
    return tuple(d for d in range(1, n + 1) if n % d == 0)


class IntRegion:
    """``{x : x mod L in residues} - minus | plus`` as a subset of Z."""

    __slots__ = ("L", "mask", "plus", "minus", "_hash")

    def __init__(self, L: int, mask: int, plus=frozenset(), minus=frozenset()):
        # canonicalise: minimal period, exceptional points only where needed
        if L < 1:
            raise ValueError("period must be positive")
        mask &= (1 << L) - 1
        for d in _divisors(L):
            if d == L:
                break
            low = mask & ((1 << d) - 1)
            if _expand(low, d, L) == mask:
                L, mask = d, low
                break
        self.L = L
        self.mask = mask
        self.plus = frozenset(p for p in plus if not (mask >> (p % L)) & 1)
        self.minus = frozenset(p for p in minus if (mask >> (p % L)) & 1)
        self._hash = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def empty(cls) -> "IntRegion":
        return cls(1, 0)

    @classmethod
    def full(cls) -> "IntRegion":
        return cls(1, 1)

    @classmethod
    def points(cls, xs: Iterable[int]) -> "IntRegion":
        return cls(1, 0, frozenset(xs))

    @classmethod
    def coset(cls, x: int, m: int) -> "IntRegion":
        """``x + m Z``; ``m = 0`` gives the singleton ``{x}``."""
        m = abs(m)
        if m == 0:
            return cls.points((x,))
        return cls(m, 1 << (x % m))

    # -- basic queries -------------------------------------------------------

    def __contains__(self, x: int) -> bool:
        if (self.mask >> (x % self.L)) & 1:
            return x not in self.minus
        return x in self.plus

    def is_empty(self) -> bool:
        return not self.mask and not self.plus

    def is_finite(self) -> bool:
        return not self.mask

    def __eq__(self, other):
        return (isinstance(other, IntRegion) and self.L == other.L and self.mask == other.mask
                and self.plus == other.plus and self.minus == other.minus)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.L, self.mask, self.plus, self.minus))
        return self._hash

    def residues(self) -> list[int]:
        return list(_bits(self.mask))

    def finite_points(self) -> list[int]:
        if self.mask:
            raise GroupError("region is infinite")
        return sorted(self.plus)

    def iter_window(self, w: int) -> Iterator[int]:
        """Elements with ``|x| <= w``, in order ``0, 1, -1, 2, -2, ...``."""
        for n in range(w + 1):
            for x in ((n,) if n == 0 else (n, -n)):
                if x in self:
                    yield x

    def sample(self, limit: int = 64) -> list[int]:
        """Up to ``limit`` elements of smallest absolute value."""
        if self.is_empty():
            return []
        spread = max(chain((abs(p) for p in self.plus), (abs(p) for p in self.minus), (0,)))
        out = []
        for x in self.iter_window(spread + self.L * (limit + 1)):
            out.append(x)
            if len(out) == limit:
                break
        return out

    def some(self) -> int:
        return self.sample(1)[0]

    # -- boolean algebra -----------------------------------------------------

    def _combine(self, other: "IntRegion", op) -> "IntRegion":
        L = _lcm(self.L, other.L)
        m1 = _expand(self.mask, self.L, L)
        m2 = _expand(other.mask, other.L, L)
        mask = op(m1, m2) & ((1 << L) - 1)
        plus, minus = set(), set()
        for x in self.plus | self.minus | other.plus | other.minus:
            want = bool(op(int(x in self), int(x in other)) & 1)
            have = bool((mask >> (x % L)) & 1)
            if want and not have:
                plus.add(x)
            elif have and not want:
                minus.add(x)
        return IntRegion(L, mask, frozenset(plus), frozenset(minus))

    def __or__(self, other):
        return self._combine(other, lambda a, b: a | b)

    def __and__(self, other):
        return self._combine(other, lambda a, b: a & b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a & ~b)

    def complement(self) -> "IntRegion":
        return IntRegion(self.L, ~self.mask & ((1 << self.L) - 1), self.minus, self.plus)

    def issubset(self, other: "IntRegion") -> bool:
        return (self - other).is_empty()

    # -- group structure -----------------------------------------------------

    def neg(self) -> "IntRegion":
        L = self.L
        mask = 0
        for r in _bits(self.mask):
            mask |= 1 << ((-r) % L)
        return IntRegion(L, mask, frozenset(-p for p in self.plus),
                         frozenset(-p for p in self.minus))

    def shift(self, t: int) -> "IntRegion":
        return IntRegion(self.L, _rotate(self.mask, t, self.L),
                         frozenset(p + t for p in self.plus),
                         frozenset(p + t for p in self.minus))

    def __add__(self, other: "IntRegion") -> "IntRegion":
        if self.is_empty() or other.is_empty():
            return IntRegion.empty()
        if not self.mask and len(self.plus) == 1 and not other.plus and not other.minus:
            return other.shift(next(iter(self.plus)))
        if not other.mask and len(other.plus) == 1 and not self.plus and not self.minus:
            return self.shift(next(iter(other.plus)))
        L = _lcm(self.L, other.L)
        m1 = _expand(self.mask, self.L, L)
        m2 = _expand(other.mask, other.L, L)
        mask = 0
        if m1 and m2:
            for r in _bits(m1):
                mask |= _rotate(m2, r, L)
        both_periodic = mask
        for p in self.plus:
            mask |= _rotate(m2, p, L)
        for q in other.plus:
            mask |= _rotate(m1, q, L)
        points = {p + q for p in self.plus for q in other.plus}
        candidates = ({h + q for h in self.minus for q in other.plus}
                      | {p + h for p in self.plus for h in other.minus} | points)

        def representable(x: int) -> bool:
            if (both_periodic >> (x % L)) & 1:
                return True
            if any((x - p) in other for p in self.plus):
                return True
            return any((x - q) in self for q in other.plus)

        plus, minus = set(), set()
        for x in candidates:
            want = representable(x)
            have = bool((mask >> (x % L)) & 1)
            if want and not have:
                plus.add(x)
            elif have and not want:
                minus.add(x)
        return IntRegion(L, mask, frozenset(plus), frozenset(minus))

    def scale(self, k: int) -> "IntRegion":
        """Image under ``n -> k n``."""
        if k == 0:
            return IntRegion.empty() if self.is_empty() else IntRegion.points((0,))
        if k < 0:
            return self.neg().scale(-k)
        L = self.L * k
        mask = 0
        for r in _bits(self.mask):
            mask |= 1 << (r * k)
        return IntRegion(L, mask, frozenset(p * k for p in self.plus),
                         frozenset(p * k for p in self.minus))

    def unscale(self, k: int) -> "IntRegion":
        """Preimage under ``n -> k n`` (``k != 0``)."""
        if k == 0:
            raise ValueError("preimage under the zero map")
        L = self.L
        mask = 0
        for n in range(L):
            if (self.mask >> ((k * n) % L)) & 1:
                mask |= 1 << n
        return IntRegion(L, mask, frozenset(p // k for p in self.plus if p % k == 0),
                         frozenset(p // k for p in self.minus if p % k == 0))

    # -- neighbourhood questions ---------------------------------------------

    def coset_inside(self, x: int, m: int) -> bool:
        """Is ``x + m Z`` contained in this region?"""
        if m == 0:
            return x in self
        # periodic part must cover every residue of the coset mod lcm(L, m)
        g = gcd(self.L, m)
        for r in range(x % g, self.L, g):
            if not (self.mask >> r) & 1:
                return False
        return not any((h - x) % m == 0 for h in self.minus)

    def coset_meets(self, x: int, m: int) -> bool:
        if m == 0:
            return x in self
        if any((p - x) % m == 0 for p in self.plus):
            return True
        g = gcd(self.L, m)
        # infinitely many points per residue, finitely many holes
        return any((self.mask >> r) & 1 for r in range(x % g, self.L, g))

    def __repr__(self):
        parts = []
        if self.mask == 1 and self.L == 1:
            parts.append("Z")
        elif self.mask:
            res = ",".join(str(r) for r in _bits(self.mask))
            parts.append(f"{{{res}}}+{self.L}Z")
        if self.plus:
            parts.append("{" + ",".join(str(p) for p in sorted(self.plus)) + "}")
        s = " | ".join(parts) or "{}"
        if self.minus:
            s += " - {" + ",".join(str(p) for p in sorted(self.minus)) + "}"
        return s


class FiniteRegion:
    """A subset of a finite group as a bitmask over element indices."""

    __slots__ = ("group", "mask")

    def __init__(self, group: GroupDesc, mask: int):
        self.group = group
        self.mask = mask & ((1 << group.order) - 1)

    @classmethod
    def points(cls, group: GroupDesc, xs: Iterable[int]) -> "FiniteRegion":
        mask = 0
        for x in xs:
            mask |= 1 << x
        return cls(group, mask)

    def __contains__(self, x: int) -> bool:
        return 0 <= x < self.group.order and bool((self.mask >> x) & 1)

    def __iter__(self):
        return _bits(self.mask)

    def __len__(self):
        return bin(self.mask).count("1")

    def is_empty(self) -> bool:
        return not self.mask

    def is_finite(self) -> bool:
        return True

    def finite_points(self) -> list[int]:
        return list(_bits(self.mask))

    def __eq__(self, other):
        return isinstance(other, FiniteRegion) and self.mask == other.mask and self.group == other.group

    def __hash__(self):
        return hash((self.group.order, self.mask))

    def _same(self, other):
        if not isinstance(other, FiniteRegion) or other.group != self.group:
            raise GroupError("regions live in different groups")

    def __or__(self, other):
        self._same(other)
        return FiniteRegion(self.group, self.mask | other.mask)

    def __and__(self, other):
        self._same(other)
        return FiniteRegion(self.group, self.mask & other.mask)

    def __sub__(self, other):
        self._same(other)
        return FiniteRegion(self.group, self.mask & ~other.mask)

    def complement(self) -> "FiniteRegion":
        return FiniteRegion(self.group, ~self.mask)

    def issubset(self, other) -> bool:
        return not (self - other).mask

    def iter_window(self, w: int) -> Iterator[int]:
        return _bits(self.mask)

    def sample(self, limit: int = 64) -> list[int]:
        return list(_bits(self.mask))[:limit]

    def some(self) -> int:
        return next(_bits(self.mask))

    def __repr__(self):
        G = self.group
        return "{" + ",".join(G.label(x) for x in _bits(self.mask)) + "}"


# -- group-level constructors and operations ---------------------------------


def empty(G: GroupDesc):
    return FiniteRegion(G, 0) if G.is_finite else IntRegion.empty()


def full(G: GroupDesc):
    return FiniteRegion(G, -1) if G.is_finite else IntRegion.full()


def point(G: GroupDesc, x: int):
    return FiniteRegion(G, 1 << x) if G.is_finite else IntRegion.points((x,))


def points(G: GroupDesc, xs: Iterable[int]):
    return FiniteRegion.points(G, xs) if G.is_finite else IntRegion.points(xs)


def subgroup_region(G: GroupDesc, sub):
    """``sub`` is a modulus for Z, a frozenset of elements for finite groups."""
    if G.is_finite:
        return FiniteRegion.points(G, sub)
    return IntRegion.coset(0, sub)


def coset(G: GroupDesc, x: int, sub):
    """The left coset ``x sub``."""
    if G.is_finite:
        return FiniteRegion.points(G, (G.op(x, h) for h in sub))
    return IntRegion.coset(x, sub)


def product(G: GroupDesc, R, S):
    """The set product ``R S``."""
    if not G.is_finite:
        return R + S
    if not R.mask or not S.mask:
        return FiniteRegion(G, 0)
    table = G.table
    mask = 0
    if table is None:
        n = G.order
        for x in _bits(R.mask):
            mask |= _rotate(S.mask, x, n)
    else:
        ys = list(_bits(S.mask))
        for x in _bits(R.mask):
            row = table[x]
            for y in ys:
                mask |= 1 << row[y]
    return FiniteRegion(G, mask)


def inverse(G: GroupDesc, R):
    if not G.is_finite:
        return R.neg()
    return FiniteRegion.points(G, (G.inv(x) for x in R))


def image(e: Embedding, R):
    """The image ``e(R)`` of a region of the source."""
    S, T = e.source, e.target
    if S.is_finite:
        return points(T, (e(x) for x in R.finite_points()))
    if T.kind != INFINITE_CYCLIC:
        raise GroupError("an infinite cyclic group does not embed in a finite one")
    return R.scale(e.images[0])


def preimage(e: Embedding, R):
    """``{b : e(b) in R}`` as a region of the source."""
    S = e.source
    if S.is_finite:
        return FiniteRegion.points(S, (b for b in S.elements() if e(b) in R))
    return R.unscale(e.images[0])
