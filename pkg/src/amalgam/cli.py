"""Command line entry point.

Exit codes: 0 pass or computed result, 1 fail, 2 unknown (or hypothesis not
met), 3 usage or parse error.
"""
from __future__ import annotations

import argparse
import os
import random
import sys
from typing import Optional

from .amalgam import GroupError, amalgam_inv, amalgam_mul, elements_up_to
from .instances import FILES, load
from .specfile import SpecError, parse_element, parse_spec, resolve_set
from .universal import AgreementFailure, check_agreement, continuity, extend_hom
from .verifier import (FAIL, PASS, CheckReport, HypothesisNotMet, verify_eq21,
                       verify_hausdorff_separation, verify_lemma26, verify_open,
                       verify_prop29, verify_thm12_free_product,
                       verify_thm25_quotient_consistency, verify_thm28_open_embedding)

EXIT_OK, EXIT_FAIL, EXIT_UNKNOWN, EXIT_USAGE = 0, 1, 2, 3

SEED_ENV = "AMALGAM_SEED"


def seed() -> int:
    """Sampling seed from ``AMALGAM_SEED`` (default 0)."""
    try:
        return int(os.environ.get(SEED_ENV, "0"))
    except ValueError:
        return 0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage().strip()}\n{self.prog}: {message}")


def _spec_args(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--spec", help="spec file path")
    g.add_argument("--instance", choices=sorted(FILES), help="built-in instance")


def _bound_args(p, L, K, W):
    p.add_argument("--len", type=int, default=L, dest="len_bound")
    p.add_argument("--depth", type=int, default=K)
    p.add_argument("--window", type=int, default=W)


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="amalgam", description="Amalgamated free products of topological groups.")
    sub = ap.add_subparsers(dest="cmd", parser_class=_Parser)
    sub.required = True

    p = sub.add_parser("normalize", help="normal form of a word")
    _spec_args(p)
    p.add_argument("--word", required=True)

    p = sub.add_parser("mul", help="product of two words")
    _spec_args(p)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)

    p = sub.add_parser("inv", help="inverse of a word")
    _spec_args(p)
    p.add_argument("--word", required=True)

    check = sub.add_parser("check", help="run one check")
    csub = check.add_subparsers(dest="check", parser_class=_Parser)
    csub.required = True
    p = csub.add_parser("eq21", help="kappa(A) & lambda(C) == kappa(alpha(B))")
    _spec_args(p)
    p.add_argument("--window", type=int, default=10)
    p = csub.add_parser("open", help="bounded openness of a set")
    _spec_args(p)
    p.add_argument("--set", required=True, dest="set_text")
    p.add_argument("--lift", action="store_true", help="check the lift to A * C instead")
    _bound_args(p, 3, 3, 8)
    for name, (L, K, W) in (("embedding", (3, 3, 8)), ("lemma26", (2, 2, 4)),
                            ("hausdorff", (2, 6, 8)), ("thm12", (2, 2, 4)),
                            ("thm25", (3, 3, 4)), ("prop29", (3, 3, 8))):
        p = csub.add_parser(name)
        _spec_args(p)
        _bound_args(p, L, K, W)
        if name in ("thm25", "prop29"):
            p.add_argument("--catalog", default=None)

    p = sub.add_parser("extend-hom", help="evaluate the extension of a hom pair")
    _spec_args(p)
    p.add_argument("--pair", required=True)
    p.add_argument("--word", default=None)
    p.add_argument("--samples", type=int, default=200)

    p = sub.add_parser("report", help="run every applicable check")
    _spec_args(p)
    p.add_argument("--all", action="store_true", required=True)
    return ap


def _load(args):
    if args.instance:
        return load(args.instance)
    try:
        with open(args.spec, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read spec file: {exc}") from None
    return parse_spec(text)


def _exit_for(status: str) -> int:
    return {PASS: EXIT_OK, "OPEN": EXIT_OK, FAIL: EXIT_FAIL, "NOTOPEN": EXIT_FAIL}.get(
        status, EXIT_UNKNOWN)


def _bounds(args):
    for v in (args.len_bound, args.depth):
        if v < 1:
            raise UsageError("--len and --depth must be >= 1")
    return (args.len_bound, args.depth, args.window)


def _hypothesis_report(name: str, setup, exc: Exception) -> CheckReport:
    rep = CheckReport(name, setup.name, "HYPOTHESIS_NOT_MET")
    rep.evidence.append(f"reason={exc}")
    return rep


def _run_check(args, spec) -> list[CheckReport]:
    S = spec.instance
    name = args.check
    if name == "eq21":
        return [verify_eq21(S, args.window)]
    if name == "open":
        O = resolve_set(spec, args.set_text)
        if args.lift:
            from .x0 import quotient_lift
            O = quotient_lift(O)
        return [verify_open(O, _bounds(args))]
    bounds = _bounds(args)
    try:
        if name == "embedding":
            return [verify_thm28_open_embedding(S, bounds)]
        if name == "lemma26":
            return [verify_lemma26(S, bounds)]
        if name == "hausdorff":
            return [verify_hausdorff_separation(S, bounds)]
        if name == "thm12":
            return [verify_thm12_free_product(S, bounds)]
        if name == "thm25":
            return [verify_thm25_quotient_consistency(S, spec.catalog(args.catalog), bounds)]
        if name == "prop29":
            return [verify_prop29(S, spec.catalog(args.catalog), bounds)]
    except HypothesisNotMet as exc:
        return [_hypothesis_report(name, S, exc)]
    except KeyError as exc:
        raise UsageError(f"unknown catalog {exc}") from None
    raise UsageError(f"unknown check {name}")


def _extend_hom(args, spec, out) -> int:
    S = spec.instance
    if args.pair not in spec.hompairs:
        raise UsageError(f"unknown hom pair '{args.pair}'")
    pair = spec.hompairs[args.pair]
    agree = check_agreement(pair, S)
    rep = CheckReport("agreement", S.name, PASS if agree else FAIL)
    if not agree:
        rep.witness.append(f"b={S.B.label(agree.witness)} mu(alpha(b))="
                           f"{pair.E.label(pair.mu(S.alpha(agree.witness)))} "
                           f"nu(gamma(b))={pair.E.label(pair.nu(S.gamma(agree.witness)))}")
        out.extend(rep.lines())
        return EXIT_FAIL
    rep.evidence.append(f"checked={agree.checked} scope="
                        f"{'exhaustive' if S.B.is_finite else 'generator'}")
    bad = continuity(pair, S, 3)
    rep.evidence.append("continuity=ok" if bad is None else f"continuity=fails side={bad[0]} depth={bad[1]}")
    phi = extend_hom(pair, S)
    rng = random.Random(seed())
    pool = elements_up_to(S, 3, 4)
    failures = 0
    for _ in range(args.samples):
        d1, d2 = rng.choice(pool), rng.choice(pool)
        if phi(amalgam_mul(d1, d2)) != pair.E.op(phi(d1), phi(d2)):
            failures += 1
    rep.evidence.append(f"homomorphism sampled_pairs={args.samples} failures={failures} seed={seed()}")
    if failures:
        rep.status = FAIL
    out.extend(rep.lines())
    if args.word is not None:
        d = parse_element(S, args.word)
        out.append(f"PHI {d} value={pair.E.label(phi(d))}")
    return EXIT_FAIL if failures else EXIT_OK


def _report_all(spec) -> list[CheckReport]:
    S = spec.instance
    reps = [verify_eq21(S, 10), verify_lemma26(S)]
    cat = spec.catalog()
    for name, fn in (("embedding", lambda: verify_thm28_open_embedding(S)),
                     ("hausdorff", lambda: verify_hausdorff_separation(S, (2, 4, 4))),
                     ("thm12", lambda: verify_thm12_free_product(S))):
        try:
            reps.append(fn())
        except HypothesisNotMet as exc:
            reps.append(_hypothesis_report(name, S, exc))
    if cat:
        reps.append(verify_thm25_quotient_consistency(S, cat))
        reps.append(verify_prop29(S, cat, (2, 2, 8)))
    return sorted(reps, key=lambda r: r.name)


def run_command(argv: Optional[list] = None, out=None) -> int:
    out_lines: list[str] = []
    stream = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        spec = _load(args)
        if spec.instance is None:
            raise UsageError("spec file defines no instance")
        S = spec.instance
        code = EXIT_OK
        if args.cmd == "normalize":
            out_lines.append(str(parse_element(S, args.word)))
        elif args.cmd == "mul":
            out_lines.append(str(amalgam_mul(parse_element(S, args.left),
                                             parse_element(S, args.right))))
        elif args.cmd == "inv":
            out_lines.append(str(amalgam_inv(parse_element(S, args.word))))
        elif args.cmd == "check":
            reps = _run_check(args, spec)
            for r in reps:
                out_lines.extend(r.lines())
            code = max(_exit_for(r.status) for r in reps)
        elif args.cmd == "extend-hom":
            code = _extend_hom(args, spec, out_lines)
        elif args.cmd == "report":
            reps = _report_all(spec)
            for r in reps:
                out_lines.extend(r.lines())
            codes = [_exit_for(r.status) for r in reps]
            code = EXIT_FAIL if EXIT_FAIL in codes else max(codes)
    except UsageError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except SpecError as exc:
        print(f"ERROR {exc.rule} line={exc.line} col={exc.col} {exc.message}", file=sys.stderr)
        return EXIT_USAGE
    except (GroupError, AgreementFailure, ValueError) as exc:
        print(f"ERROR {type(exc).__name__} {exc}", file=sys.stderr)
        return EXIT_USAGE
    stream.write("\n".join(out_lines) + ("\n" if out_lines else ""))
    return code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
