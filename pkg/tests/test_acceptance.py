"""Acceptance suite: one test per criterion, each printing a single result line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in the
terminal summary) or directly with ``python tests/test_acceptance.py``.
"""
import itertools
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

from amalgam.amalgam import amalgam_mul, check_eq21, elements_up_to, normalize  # noqa: E402
from amalgam.instances import load  # noqa: E402
from amalgam.specfile import parse_set  # noqa: E402
from amalgam.universal import check_agreement, extend_hom  # noqa: E402
from amalgam.verifier import (PASS, HypothesisNotMet, verify_hausdorff_separation,  # noqa: E402
                              verify_thm25_quotient_consistency,
                              verify_thm28_open_embedding)
from amalgam.x0 import (NOT_OPEN, OPEN, OpenDescription, compare_topologies,  # noqa: E402
                        is_open_x0, prop29_base, recheck_certificate, recheck_witness)

from oracles import rewriting_closure  # noqa: E402

RESULTS: list = []


def record(number, title, ok, elapsed, budget, detail=""):
    within = elapsed < budget
    status = "PASS" if ok and within else "FAIL"
    line = (f"ACCEPTANCE {number} {status} {title} time={elapsed:.2f}s "
            f"budget={budget}s {detail}").rstrip()
    RESULTS.append(line)
    print(line)
    assert ok, line
    assert within, line


class Timer:
    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.t0


def test_criterion_1_normal_form_oracle():
    S = load("z4_z2_z6").instance
    with Timer() as t:
        # one extra letter of room lets the closure split off B-material
        uf, letters = rewriting_closure({"a": 4, "c": 6}, {"a": [0, 2], "c": [0, 3]}, 5)
        nf_of, cls_of = {}, {}
        n_words = mismatches = 0
        for n in range(5):
            for w in itertools.product(letters, repeat=n):
                n_words += 1
                d, c = normalize(S, w), uf.find(w)
                if nf_of.setdefault(c, d) != d or cls_of.setdefault(d, c) != c:
                    mismatches += 1
    record(1, "normal-form-oracle", mismatches == 0 and len(letters) == 8, t.elapsed, 10,
           f"words={n_words} classes={len(cls_of)} mismatches={mismatches}")


def test_criterion_2_eq21():
    with Timer() as t:
        r1 = check_eq21(load("z4_z2_z6").instance)
        r2 = check_eq21(load("z_2z_z").instance, 32)
    record(2, "eq21", r1.ok and r2.ok and len(r1.coincidences) == 2, t.elapsed, 1,
           f"z4z6_coincidences={len(r1.coincidences)}/24 zz_window=32")


def test_criterion_3_open_embedding():
    S = load("z_2z_z").instance
    with Timer() as t:
        rep = verify_thm28_open_embedding(S, (3, 3, 16))
        rechecked = total = 0
        for cell in prop29_base(S, 1, 3):
            O = OpenDescription(S, (cell,))
            v = is_open_x0(O, 3, 3, 16)
            total += 1
            rechecked += v.status == OPEN and recheck_certificate(O, v)
    record(3, "open-embedding", rep.status == PASS and rechecked == total, t.elapsed, 60,
           f"status={rep.status} certificates_rechecked={rechecked}/{total}")


def test_criterion_4_hausdorff():
    S = load("z_2z_z").instance
    with Timer() as t:
        rep = verify_hausdorff_separation(S, (2, 6, 8))
    summary = next(e for e in rep.evidence if e.startswith("elements="))
    record(4, "hausdorff-separation", rep.status == PASS, t.elapsed, 60, summary)


def test_criterion_5_topologies_coincide():
    zz, zfree = load("z_2z_z"), load("z_free_z")
    with Timer() as t:
        c1 = compare_topologies(zz.instance, zz.catalog(), 3, 3)
        c2 = compare_topologies(zfree.instance, zfree.catalog(), 3, 3)
    ok = (c1.direction1 == c1.direction2 == "Pass"
          and c2.direction1 == "Pass" and c2.direction2 == "Skipped")
    record(5, "topologies-coincide", ok, t.elapsed, 120,
           f"zz=({c1.direction1},{c1.direction2}) free=({c2.direction1},{c2.direction2}) "
           f"cells={c1.details['cells']}")


def test_criterion_6_dual_path():
    with Timer() as t:
        reps = {}
        for key in ("z4_z2_z6", "z_2z_z"):
            spec = load(key)
            reps[key] = verify_thm25_quotient_consistency(spec.instance, spec.catalog())
    ok = all(r.status == PASS for r in reps.values())
    record(6, "dual-path-consistency", ok, t.elapsed, 120,
           " ".join(f"{k}={r.status}" for k, r in reps.items()))


def test_criterion_7_universal_property():
    spec = load("z4_z2_z6")
    S = spec.instance
    with Timer() as t:
        agree_ok = True
        hom_ok = True
        pairs_checked = 0
        pool = elements_up_to(S, 3, 8)
        for name, pair in sorted(spec.hompairs.items()):
            brute = all(pair.mu(S.alpha(b)) == pair.nu(S.gamma(b)) for b in S.B.elements())
            agree_ok &= bool(check_agreement(pair, S)) == brute
            if not brute:
                continue
            phi = extend_hom(pair, S)
            for d1, d2 in itertools.product(pool, repeat=2):
                pairs_checked += 1
                hom_ok &= phi(amalgam_mul(d1, d2)) == pair.E.op(phi(d1), phi(d2))
    record(7, "universal-property", agree_ok and hom_ok, t.elapsed, 10,
           f"hompairs={len(spec.hompairs)} products_checked={pairs_checked}")


def test_criterion_8_negative_control():
    zz, zfree = load("z_2z_z").instance, load("z_free_z").instance
    with Timer() as t:
        try:
            verify_thm28_open_embedding(zfree, (3, 3, 16))
            gated = False
        except HypothesisNotMet:
            gated = True
        O = parse_set(zz, "side(c)")
        v = is_open_x0(O, 3, 3)
        witnessed = v.status == NOT_OPEN and recheck_witness(O, v)
    record(8, "negative-control", gated and witnessed, t.elapsed, 10,
           f"hypothesis_not_met={gated} lambda_Z_verdict={v.status}")


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
