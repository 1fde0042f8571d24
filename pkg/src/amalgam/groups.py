"""Base groups, their elements, and embeddings with coset transversals.

Three group classes are supported: finite groups given by a Cayley table,
finite cyclic groups, and the infinite cyclic group.  Elements of finite
groups are indices ``0 .. order-1`` (index 0 is the identity); elements of
the infinite cyclic group are signed integers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

FINITE_CAYLEY = "finite-cayley"
FINITE_CYCLIC = "finite-cyclic"
INFINITE_CYCLIC = "infinite-cyclic"
KINDS = (FINITE_CAYLEY, FINITE_CYCLIC, INFINITE_CYCLIC)

INT_LIMIT = 2**63 - 1


class GroupError(ValueError):
    pass


class MismatchedGroups(GroupError):
    pass


class InfiniteIndex(GroupError):
    pass


class ArithmeticOverflow(OverflowError):
    pass


def _checked(n: int) -> int:
    if n > INT_LIMIT or n < -INT_LIMIT:
        raise ArithmeticOverflow(f"integer {n} exceeds machine width")
    return n


@dataclass(frozen=True, eq=True)
class GroupDesc:
    """A finite description of a supported group."""

    name: str
    kind: str
    order: Optional[int] = None  # None means infinite
    table: Optional[tuple[tuple[int, ...], ...]] = field(default=None, repr=False)
    labels: Optional[tuple[str, ...]] = None

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.name, self.kind, self.order, self.table, self.labels))
            object.__setattr__(self, "_hash", h)
        return h

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GroupError(f"unknown group kind {self.kind!r}")
        if self.kind == INFINITE_CYCLIC:
            if self.order is not None or self.table is not None:
                raise GroupError("infinite-cyclic group takes no order or table")
            return
        if self.order is None or self.order < 1:
            raise GroupError(f"{self.kind} group needs a positive order")
        if self.kind == FINITE_CAYLEY:
            if self.table is None:
                raise GroupError("finite-cayley group needs a table")
            _validate_table(self.table, self.order)
        elif self.table is not None:
            raise GroupError("finite-cyclic group takes no table")
        if self.labels is not None and len(self.labels) != self.order:
            raise GroupError("label count does not match the order")

    @property
    def is_finite(self) -> bool:
        return self.kind != INFINITE_CYCLIC

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> range:
        if not self.is_finite:
            raise GroupError(f"{self.name} is infinite")
        return range(self.order)

    def contains(self, x) -> bool:
        if isinstance(x, bool) or not isinstance(x, int):
            return False
        if self.is_finite:
            return 0 <= x < self.order
        return -INT_LIMIT <= x <= INT_LIMIT

    def op(self, x: int, y: int) -> int:
        if self.kind == FINITE_CYCLIC:
            return (x + y) % self.order
        if self.kind == FINITE_CAYLEY:
            return self.table[x][y]
        return _checked(x + y)

    def inv(self, x: int) -> int:
        if self.kind == FINITE_CYCLIC:
            return (-x) % self.order
        if self.kind == FINITE_CAYLEY:
            return _cayley_inverses(self.table)[x]
        return _checked(-x)

    def power(self, x: int, n: int) -> int:
        if self.kind == INFINITE_CYCLIC:
            return _checked(x * n)
        if self.kind == FINITE_CYCLIC:
            return (x * n) % self.order
        base = x if n >= 0 else self.inv(x)
        acc = 0
        for _ in range(abs(n)):
            acc = self.op(acc, base)
        return acc

    def element_order(self, x: int) -> Optional[int]:
        if not self.is_finite:
            return None if x != 0 else 1
        k, acc = 1, x
        while acc != 0:
            acc = self.op(acc, x)
            k += 1
        return k

    def label(self, x: int) -> str:
        if self.labels is not None:
            return self.labels[x]
        return str(x)

    def parse_element(self, token: str) -> int:
        token = token.strip()
        if self.labels is not None and token in self.labels:
            return self.labels.index(token)
        try:
            x = int(token)
        except ValueError:
            raise GroupError(f"{token!r} is not an element of {self.name}") from None
        if self.kind == FINITE_CYCLIC:
            return x % self.order
        if not self.contains(x):
            raise GroupError(f"{x} is out of range for {self.name}")
        return x

    def __str__(self):
        if self.kind == INFINITE_CYCLIC:
            return "Z"
        if self.kind == FINITE_CYCLIC:
            return f"Z{self.order}"
        return self.name


_INVERSE_CACHE: dict = {}


def _cayley_inverses(table) -> tuple[int, ...]:
    inv = _INVERSE_CACHE.get(table)
    if inv is None:
        inv = tuple(row.index(0) for row in table)
        _INVERSE_CACHE[table] = inv
    return inv


def _validate_table(table, n: int) -> None:
    if len(table) != n or any(len(row) != n for row in table):
        raise GroupError(f"Cayley table must be {n}x{n}")
    full = set(range(n))
    for row in table:
        if set(row) != full:
            raise GroupError("Cayley table is not a Latin square")
    for j in range(n):
        if {table[i][j] for i in range(n)} != full:
            raise GroupError("Cayley table is not a Latin square")
    if tuple(table[0]) != tuple(range(n)) or any(table[i][0] != i for i in range(n)):
        raise GroupError("index 0 is not a two-sided identity")
    for x in range(n):
        for y in range(n):
            xy = table[x][y]
            for z in range(n):
                if table[xy][z] != table[x][table[y][z]]:
                    raise GroupError(f"table is not associative at ({x}, {y}, {z})")
    # a Latin square with identity gives inverses, but check both sides
    for x in range(n):
        y = table[x].index(0)
        if table[y][x] != 0:
            raise GroupError(f"element {x} has no two-sided inverse")


def cyclic(n: int, name: Optional[str] = None) -> GroupDesc:
    return GroupDesc(name or f"Z{n}", FINITE_CYCLIC, n)


def integers(name: str = "Z") -> GroupDesc:
    return GroupDesc(name, INFINITE_CYCLIC)


def cayley(name: str, table: Sequence[Sequence[int]], labels=None) -> GroupDesc:
    table = tuple(tuple(int(v) for v in row) for row in table)
    return GroupDesc(name, FINITE_CAYLEY, len(table), table,
                     tuple(labels) if labels is not None else None)


def symmetric3() -> GroupDesc:
    """S3 with elements e, r, r2, s, sr, sr2 (r a 3-cycle, s a transposition)."""
    perms = [(0, 1, 2), (1, 2, 0), (2, 0, 1), (1, 0, 2), (0, 2, 1), (2, 1, 0)]
    index = {p: i for i, p in enumerate(perms)}

    def compose(p, q):  # first q, then p
        return tuple(p[q[i]] for i in range(3))

    table = [[index[compose(p, q)] for q in perms] for p in perms]
    return cayley("S3", table, ("e", "r", "r2", "s", "sr", "sr2"))


@dataclass(frozen=True)
class GroupValue:
    group: GroupDesc
    value: int

    def __post_init__(self):
        if not self.group.contains(self.value):
            raise GroupError(f"{self.value} is not an element of {self.group.name}")

    def __mul__(self, other: "GroupValue") -> "GroupValue":
        return mul(self, other)

    def inverse(self) -> "GroupValue":
        return inverse(self)

    def is_identity(self) -> bool:
        return self.value == self.group.identity

    def __str__(self):
        return f"({self.group}: {self.group.label(self.value)})"


def mul(g: GroupValue, h: GroupValue) -> GroupValue:
    if g.group != h.group:
        raise MismatchedGroups(f"cannot multiply {g.group.name} by {h.group.name}")
    return GroupValue(g.group, g.group.op(g.value, h.value))


def inverse(g: GroupValue) -> GroupValue:
    return GroupValue(g.group, g.group.inv(g.value))


@dataclass(frozen=True)
class EmbeddingCheck:
    ok: bool
    reason: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


@dataclass(frozen=True)
class Embedding:
    """A homomorphism ``source -> target``, meant to be injective.

    For a finite source, ``images[i]`` is the image of element ``i``.  For an
    infinite cyclic source, ``images`` holds the single image of the
    generator ``1``.
    """

    name: str
    source: GroupDesc
    target: GroupDesc
    images: tuple[int, ...]

    def __post_init__(self):
        expected = self.source.order if self.source.is_finite else 1
        if len(self.images) != expected:
            raise GroupError(f"embedding {self.name} needs {expected} image(s)")
        for y in self.images:
            if not self.target.contains(y):
                raise GroupError(f"{y} is not an element of {self.target.name}")

    def __call__(self, x: int) -> int:
        if self.source.is_finite:
            return self.images[x]
        return self.target.power(self.images[0], x)

    # -- image as a subgroup -------------------------------------------------

    @property
    def image_modulus(self) -> int:
        """For an infinite cyclic target, the image is ``m Z``; returns ``m``."""
        if self.target.is_finite:
            raise GroupError("image_modulus only applies to infinite-cyclic targets")
        if self.source.is_finite:
            return 0
        return abs(self.images[0])

    def image_set(self) -> frozenset:
        if not self.source.is_finite:
            raise GroupError("image of an infinite source is not a finite set")
        return frozenset(self.images)

    def in_image(self, y: int) -> bool:
        return self.preimage(y) is not None

    def preimage(self, y: int) -> Optional[int]:
        if self.source.is_finite:
            table = _preimage_table(self)
            return table.get(y)
        k = self.images[0]
        if k == 0:
            return 0 if y == 0 else None
        return y // k if y % k == 0 else None

    def index(self) -> Optional[int]:
        """The index of the image in the target, ``None`` when infinite."""
        if self.target.is_finite:
            return self.target.order // len(set(self.images))
        m = self.image_modulus
        return m if m else None

    def decompose(self, g: int) -> tuple[int, int]:
        """Write ``g = image(b) * t`` with ``t`` the canonical representative
        of the right coset ``image * g``; returns ``(b, t)``."""
        T = self.target
        if T.is_finite:
            t = _canonical_reps(self)[g]
        else:
            m = self.image_modulus
            t = g % m if m else g
        b = self.preimage(T.op(g, T.inv(t)))
        return b, t

    def is_rep(self, t: int) -> bool:
        return self.decompose(t)[1] == t


_PREIMAGE_CACHE: dict = {}
_REPS_CACHE: dict = {}


def _preimage_table(e: Embedding) -> dict:
    key = (e.source, e.target, e.images)
    table = _PREIMAGE_CACHE.get(key)
    if table is None:
        table = {}
        for x in e.source.elements():
            table.setdefault(e.images[x], x)
        _PREIMAGE_CACHE[key] = table
    return table


def _canonical_reps(e: Embedding) -> tuple[int, ...]:
    key = (e.source, e.target, e.images)
    reps = _REPS_CACHE.get(key)
    if reps is None:
        T = e.target
        H = sorted(set(e.images))
        reps = [-1] * T.order
        for g in T.elements():
            if reps[g] < 0:
                coset = [T.op(h, g) for h in H]
                rep = min(coset)
                for y in coset:
                    reps[y] = rep
        reps = tuple(reps)
        _REPS_CACHE[key] = reps
    return reps


def check_embedding(e: Embedding) -> EmbeddingCheck:
    """Homomorphism and injectivity check, exhaustive for a finite source."""
    S, T = e.source, e.target
    if S.is_finite:
        for x in S.elements():
            for y in S.elements():
                lhs = e(S.op(x, y))
                rhs = T.op(e(x), e(y))
                if lhs != rhs:
                    return EmbeddingCheck(False, "not a homomorphism", (x, y))
        seen: dict = {}
        for x in S.elements():
            y = e(x)
            if y in seen:
                return EmbeddingCheck(False, "not injective", (seen[y], x))
            seen[y] = x
        return EmbeddingCheck(True)
    # the infinite cyclic group is free on 1: any generator image is a homomorphism
    g = e.images[0]
    if T.is_finite:
        return EmbeddingCheck(False, "not injective", (0, T.element_order(g)))
    if g == 0:
        return EmbeddingCheck(False, "not injective", (0, 1))
    return EmbeddingCheck(True)


def coset_transversal(e: Embedding) -> list[GroupValue]:
    """Canonical right-coset representatives of the image, identity first."""
    T = e.target
    if T.is_finite:
        reps = sorted(set(_canonical_reps(e)))
    else:
        m = e.image_modulus
        if m == 0:
            raise InfiniteIndex(f"image of {e.name} has infinite index in {T.name}")
        reps = list(range(m))
    return [GroupValue(T, t) for t in reps]
