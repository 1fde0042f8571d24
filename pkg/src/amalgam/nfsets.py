"""Exact sets of normal forms.

A set of elements of ``D`` is grouped by syllable pattern.  A pattern key is
a tuple of ``(side, rep)`` pairs; on a side where the image of ``B`` has
finite index ``rep`` is a concrete transversal representative, on an
infinite-index side (only possible for a trivial ``B`` inside ``Z``) it is
``None`` and the syllable value is carried by a region.  Each key maps to a
list of boxes ``(head_region, free_region_1, ...)``; the set is the union
of the boxes.

Left multiplication by a region of ``A`` or ``C`` only touches the head and
the leftmost syllable, which keeps every product of regions inside this
representation.  That gives exact membership, intersection and
containment for finite products of cosets, which is what the openness
checks quantify over.
"""
from __future__ import annotations

from itertools import product as cartesian

from . import regions
from .amalgam import SIDES, AmalgamElement, AmalgamSetup


def _side_reps(S: AmalgamSetup, side: str):
    key = ("reps", side)
    reps = S._cache.get(key)
    if reps is None:
        e = S.emb(side)
        G = S.group(side)
        if e.index() is None:
            reps = None
        elif G.is_finite:
            reps = tuple(sorted({e.decompose(g)[1] for g in G.elements()}))
        else:
            reps = tuple(range(e.image_modulus))
        S._cache[key] = reps
    return reps


def _box_empty(box) -> bool:
    return any(r.is_empty() for r in box)


def _box_and(b1, b2):
    return tuple(x & y for x, y in zip(b1, b2))


def _box_minus(a, b) -> list:
    inter = _box_and(a, b)
    if _box_empty(inter):
        return [a]
    out = []
    for i in range(len(a)):
        piece = inter[:i] + (a[i] - b[i],) + a[i + 1:]
        if not _box_empty(piece):
            out.append(piece)
    return out


class NFSet:
    """An exact set of normal forms of one amalgam."""

    __slots__ = ("setup", "entries")

    def __init__(self, setup: AmalgamSetup, entries: dict):
        self.setup = setup
        clean = {}
        for key, boxes in entries.items():
            boxes = [b for b in boxes if not _box_empty(b)]
            if not boxes:
                continue
            if len(boxes[0]) == 1 and len(boxes) > 1:
                head = boxes[0][0]
                for b in boxes[1:]:
                    head = head | b[0]
                boxes = [(head,)]
            clean[key] = tuple(boxes)
        self.entries = clean

    # -- constructors --------------------------------------------------------

    @classmethod
    def empty(cls, S: AmalgamSetup) -> "NFSet":
        return cls(S, {})

    @classmethod
    def identity(cls, S: AmalgamSetup) -> "NFSet":
        return cls(S, {(): [(regions.point(S.B, S.B.identity),)]})

    @classmethod
    def element(cls, d: AmalgamElement) -> "NFSet":
        S = d.setup
        key, free = _key_of(d)
        box = (regions.point(S.B, d.head),) + tuple(
            regions.point(S.group(side), v) for side, v in free)
        return cls(S, {key: [box]})

    @classmethod
    def side(cls, S: AmalgamSetup, side: str) -> "NFSet":
        """The whole image of ``A`` (side ``a``) or ``C`` (side ``c``)."""
        return cls.identity(S).prepend(side, regions.full(S.group(side)))

    @classmethod
    def everything(cls, S: AmalgamSetup, max_len: int) -> "NFSet":
        """All elements with at most ``max_len`` syllables."""
        key = ("everything", max_len)
        cached = S._cache.get(key)
        if cached is not None:
            return cached
        fullB = regions.full(S.B)
        entries = {(): [(fullB,)]}
        frontier = [()]
        for _ in range(max_len):
            nxt = []
            for p in frontier:
                for side in SIDES:
                    if p and p[-1][0] == side:
                        continue
                    reps = _side_reps(S, side)
                    if reps is None:
                        nxt.append(p + ((side, None),))
                    else:
                        nxt.extend(p + ((side, t),) for t in reps if t != S.group(side).identity)
            for p in nxt:
                free = tuple(regions.full(S.group(s)) - regions.point(S.group(s), 0)
                             for s, t in p if t is None)
                entries[p] = [(fullB,) + free]
            frontier = nxt
        result = cls(S, entries)
        S._cache[key] = result
        return result

    # -- queries -------------------------------------------------------------

    def is_empty(self) -> bool:
        return not self.entries

    def __contains__(self, d: AmalgamElement) -> bool:
        key, free = _key_of(d)
        for box in self.entries.get(key, ()):
            if d.head in box[0] and all(v in r for (_, v), r in zip(free, box[1:])):
                return True
        return False

    def max_len(self) -> int:
        return max((len(k) for k in self.entries), default=0)

    def is_finite(self) -> bool:
        return all(r.is_finite() for boxes in self.entries.values() for b in boxes for r in b)

    def restrict(self, max_len: int) -> "NFSet":
        return NFSet(self.setup, {k: v for k, v in self.entries.items() if len(k) <= max_len})

    def union(self, other: "NFSet") -> "NFSet":
        entries = {k: list(v) for k, v in self.entries.items()}
        for k, v in other.entries.items():
            entries.setdefault(k, []).extend(v)
        return NFSet(self.setup, entries)

    __or__ = union

    def intersect(self, other: "NFSet") -> "NFSet":
        entries = {}
        small, big = (self, other) if len(self.entries) <= len(other.entries) else (other, self)
        for k, boxes in small.entries.items():
            obox = big.entries.get(k)
            if obox:
                entries[k] = [_box_and(b1, b2) for b1 in boxes for b2 in obox]
        return NFSet(self.setup, entries)

    __and__ = intersect

    def meets(self, other: "NFSet") -> bool:
        small, big = (self, other) if len(self.entries) <= len(other.entries) else (other, self)
        for k, boxes in small.entries.items():
            obox = big.entries.get(k)
            if obox:
                for b1 in boxes:
                    for b2 in obox:
                        if not _box_empty(_box_and(b1, b2)):
                            return True
        return False

    def difference(self, other: "NFSet") -> "NFSet":
        entries = {}
        for k, boxes in self.entries.items():
            obox = other.entries.get(k)
            if not obox:
                entries[k] = list(boxes)
                continue
            pieces = list(boxes)
            for b in obox:
                pieces = [p for piece in pieces for p in _box_minus(piece, b)]
                if not pieces:
                    break
            entries[k] = pieces
        return NFSet(self.setup, entries)

    __sub__ = difference

    def issubset(self, other: "NFSet") -> bool:
        for k, boxes in self.entries.items():
            obox = other.entries.get(k)
            if not obox:
                return False
            pieces = list(boxes)
            for b in obox:
                pieces = [p for piece in pieces for p in _box_minus(piece, b)]
                if not pieces:
                    break
            if pieces:
                return False
        return True

    def elements(self, limit: int = 8) -> list[AmalgamElement]:
        """A few concrete members (small values first)."""
        out = []
        for key in sorted(self.entries, key=lambda k: (len(k), repr(k))):
            for box in self.entries[key]:
                choices = [r.sample(limit) for r in box]
                for combo in cartesian(*choices):
                    out.append(_element_of(self.setup, key, combo))
                    if len(out) >= limit:
                        return out
        return out

    def some(self) -> AmalgamElement:
        return self.elements(1)[0]

    # -- left multiplication -------------------------------------------------

    def prepend(self, side: str, R) -> "NFSet":
        """The set product ``R * self`` for a region ``R`` of ``A`` or ``C``."""
        S = self.setup
        G = S.group(side)
        e = S.emb(side)
        reps = _side_reps(S, side)
        entries: dict = {}
        if R.is_empty():
            return NFSet(S, {})
        for key, boxes in self.entries.items():
            consumes = bool(key) and key[0][0] == side
            rest_key = key[1:] if consumes else key
            for box in boxes:
                H, free = box[0], box[1:]
                Y = regions.product(G, R, regions.image(e, H))
                if consumes:
                    t0 = key[0][1]
                    if t0 is None:
                        S0, rest_free = free[0], free[1:]
                    else:
                        S0, rest_free = regions.point(G, t0), free
                    Y = regions.product(G, Y, S0)
                else:
                    rest_free = free
                if Y.is_empty():
                    continue
                if reps is None:
                    fullB = regions.full(S.B)
                    if G.identity in Y:
                        entries.setdefault(rest_key, []).append((fullB,) + rest_free)
                    Y = Y - regions.point(G, G.identity)
                    if not Y.is_empty():
                        entries.setdefault(((side, None),) + rest_key, []).append(
                            (fullB, Y) + rest_free)
                    continue
                for t in reps:
                    shifted = Y if t == G.identity else regions.product(
                        G, Y, regions.point(G, G.inv(t)))
                    Hn = regions.preimage(e, shifted)
                    if Hn.is_empty():
                        continue
                    nkey = rest_key if t == G.identity else ((side, t),) + rest_key
                    entries.setdefault(nkey, []).append((Hn,) + rest_free)
        return NFSet(S, entries)

    def prepend_x(self, xregion) -> "NFSet":
        """Left product with a subset of the pushout space ``(A-part, C-part)``."""
        ra, rc = xregion
        parts = []
        if ra is not None and not ra.is_empty():
            parts.append(self.prepend("a", ra))
        if rc is not None and not rc.is_empty():
            parts.append(self.prepend("c", rc))
        if not parts:
            return NFSet.empty(self.setup)
        out = parts[0]
        for p in parts[1:]:
            out = out | p
        return out

    def __repr__(self):
        items = []
        for k, boxes in self.entries.items():
            pat = ",".join(f"{s}:{'*' if t is None else t}" for s, t in k)
            items.append(f"[{pat}] " + " | ".join(str(b) for b in boxes))
        return "NFSet{" + "; ".join(items) + "}"


def _key_of(d: AmalgamElement):
    S = d.setup
    key, free = [], []
    for side, t in d.syllables:
        if _side_reps(S, side) is None:
            key.append((side, None))
            free.append((side, t))
        else:
            key.append((side, t))
    return tuple(key), free


def _element_of(S: AmalgamSetup, key, combo) -> AmalgamElement:
    head = combo[0]
    free = iter(combo[1:])
    syl = tuple((side, next(free) if t is None else t) for side, t in key)
    return AmalgamElement(S, head, syl)


def sequence_set(S: AmalgamSetup, seq: tuple) -> NFSet:
    """The product ``W1 W2 ... Wn`` of subsets of the pushout space.

    ``seq`` is a tuple of ``(A-region, C-region)`` pairs (either may be
    ``None``).  Suffix products are memoised on the setup.
    """
    cache = S._cache.setdefault("seq", {})
    hit = cache.get(seq)
    if hit is not None:
        return hit
    if not seq:
        result = NFSet.identity(S)
    else:
        result = sequence_set(S, seq[1:]).prepend_x(seq[0])
    cache[seq] = result
    return result
