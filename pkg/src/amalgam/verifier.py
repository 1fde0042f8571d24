"""Named, bounded check suites producing reports with evidence or witnesses."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import product as cartesian

from .amalgam import SIDES, AmalgamSetup, check_eq21, kappa, lambda_, normalize
from .topology import BasicOpen
from .x0 import (NOT_OPEN, OPEN, UNKNOWN, Cell, Complement, OpenDescription, SideAtom,
                 _Target, atom_str, cell_set, compare_topologies,
                 describe, is_open_x0, make_cell, quotient_lift, recheck_certificate,
                 recheck_witness)

PASS, FAIL, UNK = "PASS", "FAIL", "UNKNOWN"


class HypothesisNotMet(ValueError):
    pass


@dataclass
class CheckReport:
    name: str
    instance: str
    status: str
    bounds: dict = field(default_factory=dict)
    evidence: list = field(default_factory=list)
    witness: list = field(default_factory=list)
    runtime_ms: int = 0

    def lines(self, with_runtime: bool = False) -> list[str]:
        keys = " ".join(f"{k}={v}" for k, v in self.bounds.items())
        head = f"CHECK {self.name} {self.status}"
        if keys:
            head += " " + keys
        if with_runtime:
            head += f" ms={self.runtime_ms}"
        out = [head, f"  EVIDENCE instance={self.instance}"]
        out += [f"  EVIDENCE {e}" for e in self.evidence]
        out += [f"  WITNESS {w}" for w in self.witness]
        return out


def _timed(fn):
    def run(*args, **kwargs):
        t = time.perf_counter()
        report = fn(*args, **kwargs)
        report.runtime_ms = int((time.perf_counter() - t) * 1000)
        return report
    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _bounds(bounds) -> tuple[int, int, int]:
    L, K, W = (tuple(bounds) + (3, 3, 8)[len(bounds):])[:3]
    return int(L), int(K), int(W)


def _basic_opens(setup: AmalgamSetup, side: str, depth: int) -> list[BasicOpen]:
    base = setup.base(side)
    seen, out = set(), []
    for k in range(1, depth + 1):
        H = base.subgroup(k)
        for r in base.coset_reps(k):
            if (r, H) not in seen:
                seen.add((r, H))
                out.append(BasicOpen(side, r, k))
    return out


@_timed
def verify_eq21(setup: AmalgamSetup, window: int = 10) -> CheckReport:
    res = check_eq21(setup, window)
    rep = CheckReport("eq21", setup.name, PASS if res.ok else FAIL, {"window": window})
    exhaustive = setup.A.is_finite and setup.C.is_finite
    rep.evidence.append(f"coincidences={len(res.coincidences)} "
                        f"scope={'exhaustive' if exhaustive else 'window'}")
    if not res.ok:
        rep.witness.append(f"pair={res.witness}")
    return rep


def _embedding_openness(setup: AmalgamSetup, L: int, K: int, W: int, rep: CheckReport):
    """Every basic open on each side maps to a certified open set whose trace is itself."""
    statuses = []
    certified = points = 0
    for side in SIDES:
        for f in _basic_opens(setup, side, K):
            O = OpenDescription(setup, (Cell((f,)),))
            v = is_open_x0(O, L, K, W)
            statuses.append(v.status)
            if v.status == OPEN:
                if not recheck_certificate(O, v):
                    rep.witness.append(f"certificate of {describe(O)} does not re-verify")
                    statuses.append(NOT_OPEN)
                    continue
                trace = _Target(O, L).side_region(side)
                if trace != setup.base(side).coset(f.center, f.depth):
                    rep.witness.append(f"trace of {describe(O)} on side {side} is {trace}")
                    statuses.append(NOT_OPEN)
                    continue
                certified += 1
                points += len(v.certificate)
            elif v.status == NOT_OPEN:
                ok = recheck_witness(O, v)
                w = v.witness
                rep.witness.append(f"set={describe(O)} condition=({w.condition}) "
                                   f"point={_pts(w.points)} depth={w.depth} rechecked={ok}")
            else:
                rep.evidence.append(f"unknown set={describe(O)} {'; '.join(v.notes)}")
    rep.evidence.append(f"certified_opens={certified} certificate_points={points}")
    return statuses


def _pts(points) -> str:
    return ",".join(f"{p.side}({p.value})" for p in points)


def _injective_on_window(setup: AmalgamSetup, W: int) -> bool:
    for side, f in (("a", kappa), ("c", lambda_)):
        G = setup.group(side)
        vals = G.elements() if G.is_finite else range(-W, W + 1)
        if len({f(setup, v) for v in vals}) != len(vals):
            return False
    return True


@_timed
def verify_thm28_open_embedding(setup: AmalgamSetup, bounds=(3, 3, 8)) -> CheckReport:
    """Open ``B`` makes the canonical maps open embeddings (checked at bounds)."""
    L, K, W = _bounds(bounds)
    if not all(setup.b_open()):
        raise HypothesisNotMet("B is not open on both sides")
    rep = CheckReport("thm28", setup.name, PASS, {"len": L, "depth": K, "window": W})
    statuses = _embedding_openness(setup, L, K, W, rep)
    inj = _injective_on_window(setup, W)
    rep.evidence.append(f"injective_on_window={inj}")
    if not inj or NOT_OPEN in statuses:
        rep.status = FAIL
    elif UNKNOWN in statuses:
        rep.status = UNK
    return rep


def _letter_cell(setup: AmalgamSetup, d, k: int) -> Cell:
    return make_cell(setup, [(s, v, k) for s, v in d.letters()])


def words_up_to(setup: AmalgamSetup, max_len: int, window: int) -> list:
    """Elements spelled by alternating words of at most ``max_len`` letters in ``[-window, window]``."""
    vals = {}
    for side in SIDES:
        G = setup.group(side)
        vals[side] = list(G.elements()) if G.is_finite else list(range(-window, window + 1))
    seen = {setup.identity(): None}
    for n in range(1, max_len + 1):
        for first in SIDES:
            sides = [first if i % 2 == 0 else ("c" if first == "a" else "a") for i in range(n)]
            for combo in cartesian(*(vals[s] for s in sides)):
                seen.setdefault(normalize(setup, list(zip(sides, combo))), None)
    return list(seen)


@_timed
def verify_hausdorff_separation(setup: AmalgamSetup, bounds=(2, 6, 8)) -> CheckReport:
    """Distinct short elements have disjoint certified-open neighbourhoods."""
    L, K, W = _bounds(bounds)
    if not all(setup.b_open()):
        raise HypothesisNotMet("B is not open on both sides")
    rep = CheckReport("hausdorff", setup.name, PASS, {"len": L, "depth": K, "window": W})
    elems = words_up_to(setup, L, W)
    verdicts: dict = {}

    def certified(cell: Cell) -> str:
        v = verdicts.get(cell)
        if v is None:
            v = is_open_x0(OpenDescription(setup, (cell,)), L, K, 1).status
            verdicts[cell] = v
        return v

    unknown = 0
    pairs = 0
    ident = setup.identity()
    for i, d1 in enumerate(elems):
        for d2 in elems[i + 1:]:
            pairs += 1
            found = None
            for k in range(1, K + 1):
                c1, c2 = _letter_cell(setup, d1, k), _letter_cell(setup, d2, k)
                if cell_set(setup, c1).meets(cell_set(setup, c2)):
                    continue
                s1, s2 = certified(c1), certified(c2)
                if s1 == OPEN and s2 == OPEN:
                    found = (c1, c2)
                    break
                if NOT_OPEN in (s1, s2):
                    rep.status = FAIL
                    rep.witness.append(f"cell {atom_str(setup, c1 if s1 == NOT_OPEN else c2)} "
                                       "is not open")
                    return rep
            if found is None:
                unknown += 1
                if len(rep.witness) < 5:
                    rep.witness.append(f"unseparated {d1} | {d2} up to depth {K}")
            elif ident in (d1, d2) and len(rep.evidence) < 3:
                other_d = d2 if d1 == ident else d1
                cell = found[1] if d1 == ident else found[0]
                rep.evidence.append(f"closed-identity sample {other_d} in "
                                    f"{atom_str(setup, cell)}")
    rep.evidence.append(f"elements={len(elems)} pairs={pairs} unseparated={unknown} "
                        f"cells_certified={sum(v == OPEN for v in verdicts.values())}")
    if unknown:
        rep.status = UNK
    return rep


@_timed
def verify_lemma26(setup: AmalgamSetup, bounds=(2, 2, 4)) -> CheckReport:
    """Open ``B`` versus closed ``B`` with open embeddings, compared at bounds."""
    L, K, W = _bounds(bounds)
    rep = CheckReport("lemma26", setup.name, PASS, {"len": L, "depth": K, "window": W})
    first = all(setup.b_open())
    closed = all(setup.b_closed)
    statuses = _embedding_openness(setup, L, K, W, rep) if closed else []
    if not closed:
        second = False
    elif NOT_OPEN in statuses:
        second = False
    elif UNKNOWN in statuses:
        second = None
    else:
        second = True
    rep.evidence.append(f"b_open={first} b_closed={closed} embeddings_open="
                        f"{'unknown' if second is None else second}")
    if second is None:
        rep.status = UNK
    elif first != second:
        rep.status = FAIL
    return rep


@_timed
def verify_thm12_free_product(setup: AmalgamSetup, bounds=(2, 2, 4)) -> CheckReport:
    """Embeddings of the factors into a free product, with closed images, at bounds."""
    L, K, W = _bounds(bounds)
    if not setup.is_free_product():
        raise HypothesisNotMet("B must be trivial")
    rep = CheckReport("thm12", setup.name, PASS, {"len": L, "depth": K, "window": W})
    statuses = []
    for side in SIDES:
        for f in _basic_opens(setup, side, K):
            U = Cell((f,))
            # a basic open is the trace of U, or of U together with everything off this side
            cands = [OpenDescription(setup, (U,)),
                     OpenDescription(setup, (U, Complement(OpenDescription(setup, (SideAtom(side),)))))]
            best = UNKNOWN
            for O in cands:
                v = is_open_x0(O, L, K, W)
                if v.status == OPEN:
                    best = OPEN
                    break
            statuses.append(best)
            if best != OPEN:
                rep.evidence.append(f"embedding trace {atom_str(setup, U)} not certified")
        comp = OpenDescription(setup, (Complement(OpenDescription(setup, (SideAtom(side),))),))
        v = is_open_x0(comp, L, K, W)
        statuses.append(v.status)
        rep.evidence.append(f"complement of side {side}: {v.status}")
        if v.status == NOT_OPEN:
            rep.witness.append(f"complement of side {side} condition=({v.witness.condition}) "
                               f"point={_pts(v.witness.points)} rechecked={recheck_witness(comp, v)}")
    if NOT_OPEN in statuses:
        rep.status = FAIL
    elif UNKNOWN in statuses:
        rep.status = UNK
    return rep


@_timed
def verify_thm25_quotient_consistency(setup: AmalgamSetup, catalog, bounds=(3, 3, 4)) -> CheckReport:
    """Direct verdicts on ``D`` against verdicts through ``A * C`` and the quotient."""
    L, K, W = _bounds(bounds)
    rep = CheckReport("thm25", setup.name, PASS, {"len": L, "depth": K, "window": W})
    direct, lifted = [], []
    for O in catalog:
        direct.append(is_open_x0(O, L, K, W).status)
        lifted.append(is_open_x0(quotient_lift(O), L, K, W).status)
    rep.evidence.append("direct=" + ",".join(direct))
    rep.evidence.append("lifted=" + ",".join(lifted))
    for i, (a, b) in enumerate(zip(direct, lifted)):
        if a != b:
            rep.status = FAIL
            rep.witness.append(f"entry={i} set={describe(catalog[i])} direct={a} lifted={b}")
    return rep


@_timed
def verify_prop29(setup: AmalgamSetup, catalog, bounds=(3, 3, 8)) -> CheckReport:
    L, K, W = _bounds(bounds)
    rep = CheckReport("prop29", setup.name, PASS, {"len": L, "depth": K, "window": W})
    cmp = compare_topologies(setup, catalog, L, K, W)
    rep.evidence.append(f"direction1={cmp.direction1} direction2={cmp.direction2} "
                        f"cells={cmp.details['cells']} catalog_open={cmp.details['catalog_open']}")
    for key in ("direction1_missing", "direction2_witness", "direction2_unknown"):
        if key in cmp.details:
            rep.witness.append(f"{key}={cmp.details[key]}")
    if "Fail" in (cmp.direction1, cmp.direction2):
        rep.status = FAIL
    elif "Unknown" in (cmp.direction1, cmp.direction2):
        rep.status = UNK
    return rep


@_timed
def verify_open(O, bounds=(3, 3, 8)) -> CheckReport:
    """A single openness check, reported in the common format."""
    L, K, W = _bounds(bounds)
    setup = O.setup if isinstance(O, OpenDescription) else O.cover
    v = is_open_x0(O, L, K, W)
    status = {OPEN: "OPEN", NOT_OPEN: "NOTOPEN", UNKNOWN: "UNKNOWN"}[v.status]
    rep = CheckReport("open", setup.name, status, {"len": L, "depth": K, "window": W})
    rep.evidence.append(f"set={describe(O)}")
    if v.status == OPEN:
        rep.evidence.append(f"depths ii={v.depths.get('ii')} iii={v.depths.get('iii')} "
                            f"certified_points={len(v.certificate)} "
                            f"rechecked={recheck_certificate(O, v)}")
        for d, cell in list(v.certificate.items())[:8]:
            rep.evidence.append(f"cover {d} in {atom_str(setup, cell)}")
    elif v.status == NOT_OPEN:
        w = v.witness
        rep.witness.append(f"condition=({w.condition}) points={_pts(w.points)} depth={w.depth} "
                           f"rule={w.rule.split(':')[0]} rechecked={recheck_witness(O, v)}")
        rep.witness.append(f"value {w.value}")
        if w.escape is not None:
            rep.witness.append(f"escape {w.escape}")
    else:
        rep.evidence += list(v.notes)
    return rep
