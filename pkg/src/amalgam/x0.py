"""Bounded openness checks for the X0-topology on ``D``.

A subset ``O`` of ``D`` is open when
  (i)   ``O`` meets the pushout space ``X`` in an open set,
  (ii)  every product ``x1...xn`` of points of ``X`` lying in ``O`` has
        neighbourhoods ``W1...Wn`` of the factors with ``W1...Wn`` inside ``O``,
  (iii) every ``x`` with ``x^-1`` in ``O`` has a neighbourhood ``W`` with
        ``W^-1`` inside ``O``.

(i) is decided exactly.  For (ii) and (iii) the space ``X`` is cut into
depth-``k`` blocks: the connected pieces formed by ``A``-cosets and
``C``-cosets of the depth-``k`` subgroups that share points of ``B``.
Blocks are open and the block of a point is the smallest depth-``k``
neighbourhood it has, so (ii) holds at depth ``k`` for all tuples of length
``n`` exactly when every product of ``n`` blocks lies inside ``O`` or misses
it.  Passing at one depth implies passing at every deeper one, so a pass
is a proof (for tuples up to the length bound) and a failure at the depth
bound is only ``UnknownAtBound`` unless a closing rule applies.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as cartesian
from typing import Optional

from . import regions
from .amalgam import (SIDES, AmalgamElement, AmalgamSetup, XPoint, elements_up_to,
                      normalize, xpoint)
from .nfsets import NFSet, sequence_set
from .topology import BasicOpen, UnsupportedDescription, adheres, region_is_open

OPEN = "Open"
NOT_OPEN = "NotOpen"
UNKNOWN = "UnknownAtBound"


# -- descriptions -------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    """An alternating product of basic opens ``U1 V1 U2 ...``."""

    factors: tuple

    def __post_init__(self):
        if not self.factors:
            raise UnsupportedDescription("a cell needs at least one factor")
        for f, g in zip(self.factors, self.factors[1:]):
            if f.side == g.side:
                raise UnsupportedDescription("cell factors must alternate sides")

    def shape(self) -> str:
        return "".join("U" if f.side == "a" else "V" for f in self.factors)

    def max_depth(self) -> int:
        return max(f.depth for f in self.factors)

    def __len__(self):
        return len(self.factors)


def make_cell(setup: AmalgamSetup, factors) -> Cell:
    """Builds a cell with coset-reduced centers; ``factors`` are ``(side, center, depth)``."""
    out = []
    for side, center, depth in factors:
        base = setup.base(side)
        if not setup.group(side).contains(center):
            raise UnsupportedDescription(f"{center} is not in {setup.group(side).name}")
        depth = base.depth_of(base.subgroup(depth)) or depth
        out.append(BasicOpen(side, base.coset_rep(center, depth), depth))
    return Cell(tuple(out))


@dataclass(frozen=True)
class SideAtom:
    side: str


@dataclass(frozen=True)
class AllAtom:
    pass


@dataclass(frozen=True)
class PointAtom:
    element: AmalgamElement


@dataclass(frozen=True)
class Complement:
    inner: "OpenDescription"


@dataclass(frozen=True)
class OpenDescription:
    """A finite union of atoms (cells, full sides, points, complements)."""

    setup: AmalgamSetup = field(compare=False, hash=False)
    atoms: tuple

    def __post_init__(self):
        for atom in self.atoms:
            if isinstance(atom, Cell):
                for f in atom.factors:
                    if f.center != self.setup.base(f.side).coset_rep(f.center, f.depth):
                        raise UnsupportedDescription(f"factor {f} has an unreduced center")
            elif isinstance(atom, PointAtom):
                if atom.element.setup is not self.setup:
                    raise UnsupportedDescription("point belongs to another amalgam")
            elif isinstance(atom, SideAtom):
                if atom.side not in SIDES:
                    raise UnsupportedDescription(f"unknown side {atom.side!r}")
            elif isinstance(atom, Complement):
                if atom.inner.setup is not self.setup:
                    raise UnsupportedDescription("complement of a set in another amalgam")
            elif not isinstance(atom, AllAtom):
                raise UnsupportedDescription(f"not a description atom: {atom!r}")

    def union(self, other: "OpenDescription") -> "OpenDescription":
        return OpenDescription(self.setup, self.atoms + other.atoms)


@dataclass(frozen=True)
class LiftedDescription:
    """The saturation of ``base`` pulled back to the free product ``A * C``.

    Membership of ``d`` in the lift is membership of its image in ``base``;
    products of subsets of the free product's pushout space are evaluated
    after projecting to the amalgam, which is exact because the projection
    is a homomorphism that is the identity on letters.
    """

    base: OpenDescription
    cover: AmalgamSetup = field(compare=False, hash=False)


def quotient_lift(O: OpenDescription, N=None) -> LiftedDescription:
    """Lifts ``O`` over ``D = D'/N`` to ``D' = A * C``.

    ``N`` is the normal closure of ``alpha(b) gamma(b)^-1``; it is fixed by the
    setup, so the argument only serves as a guard.
    """
    if N not in (None, "amalgamation", O.setup):
        raise UnsupportedDescription("only the amalgamation kernel is supported")
    return LiftedDescription(O, O.setup.free_cover())


def cell_regions(setup: AmalgamSetup, cell: Cell) -> tuple:
    seq = []
    for f in cell.factors:
        R = setup.base(f.side).coset(f.center, f.depth)
        seq.append((R, None) if f.side == "a" else (None, R))
    return tuple(seq)


def cell_set(setup: AmalgamSetup, cell: Cell) -> NFSet:
    return sequence_set(setup, cell_regions(setup, cell))


def cell_member(d: AmalgamElement, cell: Cell) -> bool:
    """Does ``d`` factor as one element from each factor of ``cell``?"""
    return d in cell_set(d.setup, cell)


def description_set(O: OpenDescription, max_len: int) -> NFSet:
    """The part of ``O`` with at most ``max_len`` syllables, as an exact set."""
    S = O.setup
    out = NFSet.empty(S)
    for atom in O.atoms:
        if isinstance(atom, Cell):
            part = cell_set(S, atom)
        elif isinstance(atom, SideAtom):
            part = NFSet.side(S, atom.side)
        elif isinstance(atom, AllAtom):
            part = NFSet.everything(S, max_len)
        elif isinstance(atom, PointAtom):
            part = NFSet.element(atom.element)
        else:
            part = NFSet.everything(S, max_len) - description_set(atom.inner, max_len)
        out = out | part
    return out.restrict(max_len)


def describe(O) -> str:
    """Canonical text of a description (the spec-file set syntax)."""
    if isinstance(O, LiftedDescription):
        return "lift(" + describe(O.base) + ")"
    return " | ".join(atom_str(O.setup, a) for a in O.atoms) or "empty"


def factor_str(setup: AmalgamSetup, f: BasicOpen) -> str:
    base = setup.base(f.side)
    G = setup.group(f.side)
    H = base.subgroup(f.depth)
    if G.is_finite:
        if base.is_discrete():
            return f"[{f.side}:{{{G.label(f.center)}}}]"
        return f"[{f.side}: {G.label(f.center)} @{f.depth}]"
    if H == 0:
        return f"[{f.side}:{{{f.center}}}]"
    p = base.ratio or H
    k, m = 0, 1
    while m < H:
        m *= p
        k += 1
    if m == H and k > 0:
        return f"[{f.side}: {f.center} + {p}^{k} Z]"
    return f"[{f.side}: {f.center} + {H} Z]"


def atom_str(setup: AmalgamSetup, atom) -> str:
    if isinstance(atom, Cell):
        return "".join(factor_str(setup, f) for f in atom.factors)
    if isinstance(atom, SideAtom):
        return f"side({atom.side})"
    if isinstance(atom, AllAtom):
        return "all"
    if isinstance(atom, PointAtom):
        if atom.element.is_identity():
            return "{e}"
        word = "*".join(f"{s}({setup.group(s).label(v)})" for s, v in atom.element.letters())
        return "{" + word + "}"
    return "~(" + describe(atom.inner) + ")"


# -- blocks ---------------------------------------------------------------------

@dataclass(frozen=True)
class Block:
    index: int
    ra: object  # region of A or None
    rc: object  # region of C or None

    def xregion(self) -> tuple:
        return (self.ra, self.rc)

    def is_infinite(self) -> bool:
        return any(r is not None and not r.is_finite() for r in (self.ra, self.rc))


def blocks(setup: AmalgamSetup, depth: int) -> list[Block]:
    """Depth-``depth`` blocks of the pushout space (cosets glued along ``B``)."""
    key = ("blocks", depth)
    hit = setup._cache.get(key)
    if hit is not None:
        return hit
    S = setup
    nodes = [("a", r) for r in S.base_a.coset_reps(depth)] + \
            [("c", r) for r in S.base_c.coset_reps(depth)]
    parent = list(range(len(nodes)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    c_nodes = [(j, S.base_c.coset(r, depth)) for j, (s, r) in enumerate(nodes) if s == "c"]
    for i, (s, r) in enumerate(nodes):
        if s != "a":
            continue
        bpts = regions.preimage(S.alpha, S.base_a.coset(r, depth))
        if bpts.is_empty():
            continue
        img = regions.image(S.gamma, bpts)
        for j, R in c_nodes:
            if not (R & img).is_empty():
                parent[find(i)] = find(j)
    groups: dict = {}
    for i in range(len(nodes)):
        groups.setdefault(find(i), []).append(nodes[i])
    out = []
    for members in groups.values():
        ra = rc = None
        for s, r in members:
            R = S.base(s).coset(r, depth)
            if s == "a":
                ra = R if ra is None else ra | R
            else:
                rc = R if rc is None else rc | R
        out.append(Block(len(out), ra, rc))
    setup._cache[key] = out
    return out


def block_of(setup: AmalgamSetup, x: XPoint, depth: int) -> Block:
    for b in blocks(setup, depth):
        R = b.ra if x.side == "a" else b.rc
        if R is not None and x.value in R:
            return b
    raise ValueError(f"{x} lies in no block")


def _letters_as_points(setup: AmalgamSetup, d: AmalgamElement) -> list[XPoint]:
    return [xpoint(setup, s, v) for s, v in d.letters()]


# -- verdicts -------------------------------------------------------------------

@dataclass
class Witness:
    condition: str          # "i", "ii" or "iii"
    points: tuple           # XPoints of the offending factorisation
    depth: int              # neighbourhood depth searched up to
    value: object = None    # the product (or inverse) lying in O
    escape: object = None   # an element of the neighbourhood product outside O
    rule: str = ""          # what makes the failure final


@dataclass
class Verdict:
    status: str
    len_bound: int
    depth_bound: int
    certificate: dict = field(default_factory=dict)  # element -> Cell
    witness: Optional[Witness] = None
    depths: dict = field(default_factory=dict)       # condition -> depth that sufficed
    notes: tuple = ()

    def __bool__(self):
        return self.status == OPEN


class _Target:
    """What the engine needs to know about ``O``: exact queries in ``D``."""

    def __init__(self, O, max_len: int):
        if isinstance(O, LiftedDescription):
            self.space = O.cover           # points, blocks and tested elements
            self.evals = O.base.setup      # where products are evaluated
            self.lifted = True
            self.nf = description_set(O.base, max_len)
        elif isinstance(O, OpenDescription):
            self.space = self.evals = O.setup
            self.lifted = False
            self.nf = description_set(O, max_len)
        else:
            raise UnsupportedDescription(f"cannot check openness of {type(O).__name__}")
        self.max_len = max_len
        self._keys = frozenset(self.nf.entries)

    def product(self, seq: tuple) -> NFSet:
        return sequence_set(self.evals, seq)

    def contains(self, d: AmalgamElement) -> bool:
        if self.lifted:
            d = normalize(self.evals, d.letters())
        return d in self.nf

    def meets(self, P: NFSet) -> bool:
        if self._keys.isdisjoint(P.entries):
            return False
        return P.meets(self.nf)

    def inside(self, P: NFSet) -> bool:
        return P.issubset(self.nf)

    def side_region(self, side: str):
        """``{g : g in O}`` for ``g`` on one side (through kappa or lambda)."""
        S = self.evals
        G = S.group(side)
        e = S.emb(side)
        R = regions.empty(G)
        for key, boxes in self.nf.entries.items():
            if len(key) > 1 or (key and key[0][0] != side):
                continue
            for box in boxes:
                H = regions.image(e, box[0])
                if not key:
                    R = R | H
                elif key[0][1] is None:
                    R = R | box[1]
                else:
                    R = R | regions.product(G, H, regions.point(G, key[0][1]))
        return R


def _factorisation(T: _Target, seq_blocks, want_in: bool, window: int):
    """A tuple of points, one per block, whose product is (or is not) in ``O``."""
    S = T.space
    pools = []
    for b in seq_blocks:
        pool = []
        if b.ra is not None:
            pool += [("a", v) for v in b.ra.sample(window)]
        if b.rc is not None:
            pool += [("c", v) for v in b.rc.sample(window)]
        pools.append(pool)
    for letters in cartesian(*pools):
        d = normalize(T.evals, list(letters))
        if T.contains(d) == want_in:
            return tuple(xpoint(S, s, v) for s, v in letters), d
    return None, None


def _stable(S: AmalgamSetup, depth: int) -> bool:
    sa, sc = S.base_a.stable_depth(), S.base_c.stable_depth()
    return sa is not None and sc is not None and depth >= max(sa, sc)


def _check_i(T: _Target, depth_bound: int):
    S = T.space
    for side in SIDES:
        R = T.side_region(side)
        base = S.base(side)
        if region_is_open(R, base):
            continue
        rest = regions.full(S.group(side)) - R
        span = 64
        if not S.group(side).is_finite:
            span = max(64, 2 * R.L + max([abs(v) for v in R.plus | R.minus], default=0))
        for x in R.iter_window(span):
            if adheres(rest, x, base, 1):
                escape = (base.coset(x, depth_bound) & rest).some()
                # keep the side: B-material fails on one side only
                return Witness("i", (XPoint(side, x),), depth_bound,
                               value=normalize(T.evals, [(side, x)]),
                               escape=normalize(T.evals, [(side, escape)]),
                               rule="exact: every neighbourhood leaves the set")
        raise AssertionError("open-region test and witness search disagree")
    return None


def _scan(T: _Target, seqs, depth: int):
    """First block sequence whose product straddles ``O``, else None."""
    for seq in seqs:
        P = T.product(tuple(b.xregion() for b in seq))
        if T.meets(P) and not T.inside(P):
            return seq, P
    return None


def _sequences(S: AmalgamSetup, depth: int, n: int):
    return cartesian(blocks(S, depth), repeat=n)


def _check_products(T: _Target, L: int, K: int, inverse: bool):
    """Smallest depth at which (ii) (or (iii)) holds, or the straddling sequence at ``K``."""
    S = T.space
    bad = None
    for k in range(1, K + 1):
        bad = None
        if inverse:
            seqs = (((Block(b.index,
                            None if b.ra is None else regions.inverse(S.A, b.ra),
                            None if b.rc is None else regions.inverse(S.C, b.rc)),)
                     for b in blocks(S, k)))
            bad = _scan(T, seqs, k)
        else:
            for n in range(2, L + 1):
                bad = _scan(T, _sequences(S, k, n), k)
                if bad:
                    break
        if bad is None:
            return k, None
        if _stable(S, k):
            break
    return None, (bad[0], bad[1], k)


def _close_failure(T: _Target, cond: str, seq, P: NFSet, k: int, window: int):
    """Turns a straddling sequence into a final witness when a rule applies."""
    S = T.space
    pts, value = _factorisation(T, seq, True, window)
    escape_set = P - T.nf
    escape = escape_set.some() if not escape_set.is_empty() else None
    if pts is None:
        return None
    if _stable(S, k):
        rule = "stable: depth past the stable depth of both chains"
    elif (P & T.nf).is_finite() and all(b.is_infinite() for b in seq):
        rule = "finite-intersection: deeper products stay infinite, O meets them finitely"
    else:
        return None
    if cond == "iii":
        pts = tuple(XPoint(p.side, S.group(p.side).inv(p.value)) for p in pts)
        pts = tuple(xpoint(S, p.side, p.value) for p in pts)
    return Witness(cond, pts, k, value=value, escape=escape, rule=rule)


def covering_cell(T: _Target, d: AmalgamElement, K: int) -> Optional[Cell]:
    """A cell around the letters of ``d`` (depth <= K) that lies inside ``O``."""
    S = T.space
    letters = d.letters()
    variants = [letters]
    if len(letters) == 1:
        s = letters[0][0]
        other = "c" if s == "a" else "a"
        variants += [letters + [(other, 0)], [(other, 0)] + letters]
    for k in range(1, K + 1):
        for word in variants:
            cell = make_cell(S, [(s, v, k) for s, v in word])
            P = T.product(cell_regions(S, cell))
            if T.inside(P):
                return cell
    return None


def is_open_x0(O, len_bound: int, depth_bound: int, window: int = 8) -> Verdict:
    """Bounded X0-openness of a description (plain or lifted)."""
    if len_bound < 1 or depth_bound < 1:
        raise ValueError("bounds must be >= 1")
    T = _Target(O, len_bound)
    L, K = len_bound, depth_bound
    S = T.space
    w = _check_i(T, K)
    if w is not None:
        return Verdict(NOT_OPEN, L, K, witness=w)
    depths = {"i": 0}
    pending = []
    for cond, inverse in (("ii", False), ("iii", True)):
        k, bad = _check_products(T, L, K, inverse)
        if bad is None:
            depths[cond] = k
            continue
        seq, P, kk = bad
        w = _close_failure(T, cond, seq, P, kk, window)
        if w is not None:
            return Verdict(NOT_OPEN, L, K, witness=w, depths=depths)
        pending.append(cond)
    if pending:
        return Verdict(UNKNOWN, L, K, depths=depths,
                       notes=tuple(f"condition ({c}) not settled by depth {K}" for c in pending))
    cert = {}
    for d in elements_up_to(S, L, window):
        if not T.contains(d):
            continue
        cell = covering_cell(T, d, K)
        if cell is None:
            return Verdict(UNKNOWN, L, K, depths=depths,
                           notes=(f"no covering cell within depth {K} at {d}",))
        cert[d] = cell
    return Verdict(OPEN, L, K, certificate=cert, depths=depths)


# -- re-verification ------------------------------------------------------------

def recheck_certificate(O, verdict: Verdict) -> bool:
    """Every certified point lies in its cell and every cell lies inside ``O``."""
    T = _Target(O, verdict.len_bound)
    for d, cell in verdict.certificate.items():
        if d not in cell_set(T.space, cell):
            return False
        if not T.inside(T.product(cell_regions(T.space, cell))):
            return False
    return True


def recheck_witness(O, verdict: Verdict) -> bool:
    """Independent check of a NotOpen witness by search over every depth up to the bound."""
    w = verdict.witness
    if w is None:
        return False
    T = _Target(O, verdict.len_bound)
    S = T.space
    if w.condition == "i":
        (x,) = w.points
        if not T.contains(normalize(T.evals, [(x.side, x.value)])):
            return False
        R = T.side_region(x.side)
        base = S.base(x.side)
        for k in range(1, verdict.depth_bound + 1):
            if base.coset(x.value, k).issubset(R):
                return False
        return adheres(regions.full(S.group(x.side)) - R, x.value, base, 1)
    pts = w.points
    if w.condition == "iii":
        pts = tuple(xpoint(S, p.side, S.group(p.side).inv(p.value)) for p in pts)
    value = normalize(T.evals, [(p.side, p.value) for p in pts])
    if not T.contains(value):
        return False
    for k in range(1, w.depth + 1):
        seq = [block_of(S, p, k) for p in w.points]
        if w.condition == "iii":
            seq = [Block(b.index,
                         None if b.ra is None else regions.inverse(S.A, b.ra),
                         None if b.rc is None else regions.inverse(S.C, b.rc)) for b in seq]
        P = T.product(tuple(b.xregion() for b in seq))
        if T.inside(P):
            return False
    seq = [block_of(S, p, w.depth) for p in w.points]
    if w.rule.startswith("stable"):
        return _stable(S, w.depth)
    if w.rule.startswith("finite"):
        if w.condition == "iii":
            seq = [Block(b.index,
                         None if b.ra is None else regions.inverse(S.A, b.ra),
                         None if b.rc is None else regions.inverse(S.C, b.rc)) for b in seq]
        P = T.product(tuple(b.xregion() for b in seq))
        return (P & T.nf).is_finite() and all(b.is_infinite() for b in seq)
    return False


# -- the comparison base ------------------------------------------------------------

def prop29_base(setup: AmalgamSetup, len_bound: int, depth_bound: int) -> list[Cell]:
    """All alternating cells with at most ``len_bound`` factors of depth <= ``depth_bound``.

    Factors that denote the same coset (e.g. past a chain's stable depth)
    are generated once, at their smallest depth.
    """
    if len_bound < 1 or depth_bound < 1:
        raise ValueError("bounds must be >= 1")
    factors = {}
    for side in SIDES:
        base = setup.base(side)
        seen = set()
        opts = []
        for k in range(1, depth_bound + 1):
            H = base.subgroup(k)
            for r in base.coset_reps(k):
                if (r, H) not in seen:
                    seen.add((r, H))
                    opts.append(BasicOpen(side, r, k))
        factors[side] = opts
    cells = []
    for n in range(1, len_bound + 1):
        for first in SIDES:
            sides = [first if i % 2 == 0 else ("c" if first == "a" else "a") for i in range(n)]
            for combo in cartesian(*(factors[s] for s in sides)):
                cells.append(Cell(tuple(combo)))
    return cells


@dataclass
class Comparison:
    direction1: str
    direction2: str
    details: dict = field(default_factory=dict)

    def passed(self) -> bool:
        return self.direction1 == "Pass" and self.direction2 in ("Pass", "Skipped")


def compare_topologies(setup: AmalgamSetup, catalog, len_bound: int, depth_bound: int,
                       window: int = 8) -> Comparison:
    """Checks both inclusions between the X0-topology and the cell topology at bounds.

    Direction 1: every catalog entry certified Open has, around each tested
    point, a cell of the base inside it.  Direction 2 (only when ``B`` is
    open on both sides): every cell of the base is certified Open.
    """
    base = prop29_base(setup, len_bound, depth_bound)
    base_set = set(base)
    d1 = "Pass"
    details = {"cells": len(base), "catalog_open": 0}
    for O in catalog:
        v = is_open_x0(O, len_bound, depth_bound, window)
        if v.status != OPEN:
            continue
        details["catalog_open"] += 1
        for d, cell in v.certificate.items():
            if cell not in base_set:
                d1 = "Fail"
                details.setdefault("direction1_missing", (describe(O), str(d)))
    if not all(setup.b_open()):
        return Comparison(d1, "Skipped", details)
    d2 = "Pass"
    for cell in base:
        v = is_open_x0(OpenDescription(setup, (cell,)), len_bound, depth_bound, window)
        if v.status == NOT_OPEN:
            d2 = "Fail"
            details["direction2_witness"] = atom_str(setup, cell)
            break
        if v.status == UNKNOWN and d2 == "Pass":
            d2 = "Unknown"
            details["direction2_unknown"] = atom_str(setup, cell)
    return Comparison(d1, d2, details)
