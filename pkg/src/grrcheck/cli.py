"""Command line front end: generators and verification suites.

Exit codes: 0 all checks pass, 1 at least one identity falsified, 2 usage or
input error.  ``verify`` emits one JSON object per report, ordered by
(identity, instance); the stream is byte-identical across runs unless
--timing is given (timing is the only nondeterministic field).  ``gen``
prints text by default and a JSON object with --json.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction

from .arith import (
    InputError,
    bernoulli,
    fulton_macpherson_L,
    todd_denominator,
    von_staudt_D,
)
from .geometry import VirtualCompleteIntersection
from .grr import MorphismDatum, check_main_theorem
from .identities import IDENTITY_CHECKS, verify_series_identity
from .report import FalsificationError, VerificationReport
from .series import (
    Mutation,
    UniversalClass,
    q_poly,
    set_mutation,
    todd_inverse_numerator,
    universal_chern_character,
    universal_ct,
    universal_todd,
)
from .specparse import (
    ParseError,
    ScopeError,
    build_geometry,
    evaluate_class,
    parse_class,
    parse_divisor,
    parse_geometry,
)
from .suites import SUITES, suite_all

DEFAULT_MAX_DEGREE = 12
DEFAULT_MAX_DIM = 6


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grrcheck",
        description="Exact generators and verifiers for integral "
        "characteristic-class identities on model geometries.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="print a generated object")
    gen.add_argument(
        "kind",
        choices=["todd", "ch", "ct", "q", "toddinv", "tm", "bernoulli", "D", "L"],
    )
    gen.add_argument("--degree", type=int, help="degree for todd/ch/ct/q/toddinv")
    gen.add_argument("--rank", type=int, help="number of roots for toddinv")
    gen.add_argument("--m", type=int, help="index for tm")
    gen.add_argument("--n", type=int, help="index for bernoulli/L")
    gen.add_argument("--g", type=int, help="index for D")
    gen.add_argument("--json", action="store_true")
    gen.add_argument("--max-degree", type=int, default=DEFAULT_MAX_DEGREE)

    verify = sub.add_parser("verify", help="run a verification suite or identity")
    verify.add_argument(
        "suite",
        help="a suite name (%s), an identity name, or 'all'"
        % ", ".join(sorted(SUITES)),
    )
    verify.add_argument("--max-degree", type=int, default=None)
    verify.add_argument("--max-dim", type=int, default=DEFAULT_MAX_DIM)
    verify.add_argument("-n", type=int, default=None, help="target codimension")
    verify.add_argument("--geometry", type=str, default=None)
    verify.add_argument("--sheaf", type=str, default=None)
    verify.add_argument(
        "--base-levels", type=int, default=0, help="levels kept as the base"
    )
    verify.add_argument(
        "--cut",
        action="append",
        default=[],
        help="divisor expression cutting the source (repeatable)",
    )
    verify.add_argument("--timing", action="store_true", help="include millis in JSON")
    verify.add_argument(
        "--mutate",
        type=str,
        default=None,
        help="test harness: corrupt a generated class, kind:degree:index:delta",
    )
    return parser


# ---------------------------------------------------------------------------
# gen
# ---------------------------------------------------------------------------


def _gen_universal(kind: str, args) -> tuple[dict, str]:
    degree = args.degree
    if degree is None:
        raise InputError("--degree is required for this kind")
    if degree > max(DEFAULT_MAX_DEGREE, args.max_degree):
        raise InputError(
            f"degree {degree} exceeds the resource guard; raise it with --max-degree"
        )
    if kind == "toddinv":
        if args.rank is None:
            raise InputError("--rank is required for toddinv")
        uc: UniversalClass = todd_inverse_numerator(degree, args.rank)
    else:
        builder = {
            "todd": universal_todd,
            "ch": universal_chern_character,
            "ct": universal_ct,
            "q": q_poly,
        }[kind]
        uc = builder(degree)
    payload = {
        "schema": "1",
        "kind": kind,
        "degree": uc.degree,
        "scale": str(uc.scale),
        "integral": uc.integral,
        "numerator": uc.numerator.serialize(),
        "pretty": uc.numerator.pretty(),
    }
    if kind in ("todd", "ct"):
        scale_line = str(todd_denominator(uc.degree))
    elif kind == "q":
        scale_line = str(todd_denominator(uc.degree - 1))
    else:
        scale_line = str(uc.scale)
    text = (
        f"kind: {kind}\n"
        f"degree: {uc.degree}\n"
        f"scale: {scale_line}\n"
        f"numerator: {uc.numerator.pretty()}"
    )
    return payload, text


def _gen_number(kind: str, args) -> tuple[dict, str]:
    if kind == "tm":
        if args.m is None:
            raise InputError("--m is required for tm")
        fi = todd_denominator(args.m)
        return (
            {
                "schema": "1",
                "kind": "tm",
                "m": args.m,
                "value": str(fi.value),
                "factorization": {str(p): e for p, e in fi.factorization},
            },
            str(fi),
        )
    if kind == "bernoulli":
        if args.n is None:
            raise InputError("--n is required for bernoulli")
        b = bernoulli(args.n)
        return (
            {"schema": "1", "kind": "bernoulli", "n": args.n, "value": str(b)},
            f"B_{args.n} = {b}",
        )
    if kind == "D":
        if args.g is None:
            raise InputError("--g is required for D")
        fi = von_staudt_D(args.g)
        return (
            {
                "schema": "1",
                "kind": "D",
                "g": args.g,
                "value": str(fi.value),
                "factorization": {str(p): e for p, e in fi.factorization},
            },
            str(fi),
        )
    if kind == "L":
        if args.n is None:
            raise InputError("--n is required for L")
        fi = fulton_macpherson_L(args.n)
        return (
            {
                "schema": "1",
                "kind": "L",
                "n": args.n,
                "value": str(fi.value),
                "factorization": {str(p): e for p, e in fi.factorization},
            },
            str(fi),
        )
    raise InputError(f"unknown kind {kind}")


def cmd_gen(args) -> int:
    if args.kind in ("todd", "ch", "ct", "q", "toddinv"):
        payload, text = _gen_universal(args.kind, args)
    else:
        payload, text = _gen_number(args.kind, args)
    print(json.dumps(payload, sort_keys=False) if args.json else text)
    return 0


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------


def _parse_mutation(spec: str) -> Mutation:
    try:
        kind, degree, index, delta = spec.split(":")
        return Mutation(kind, int(degree), int(index), Fraction(delta))
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad mutation spec {spec!r}: {exc}") from None


def _single_instance_reports(args) -> list[VerificationReport]:
    scope = build_geometry(parse_geometry(args.geometry))
    if scope.tower.dim > args.max_dim:
        raise InputError(
            f"geometry dimension {scope.tower.dim} exceeds the guard {args.max_dim}; "
            "raise it with --max-dim"
        )
    sheaf_text = args.sheaf or "O"
    sheaf = evaluate_class(parse_class(sheaf_text), scope)
    if args.cut:
        cuts = tuple(scope.divisor_vector(parse_divisor(c)) for c in args.cut)
        source = VirtualCompleteIntersection(scope.tower, cuts)
    else:
        source = scope.tower
    morphism = MorphismDatum(source, args.base_levels, args.geometry)
    n_values = [args.n] if args.n is not None else list(range(0, 4))
    reports: list[VerificationReport] = []
    for n in n_values:
        reports.extend(check_main_theorem(morphism, sheaf, n, sheaf_text))
    return reports


def cmd_verify(args) -> int:
    if args.mutate:
        set_mutation(_parse_mutation(args.mutate))
    try:
        started = time.monotonic()
        if args.suite == "all":
            reports = suite_all()
        elif args.suite == "main-theorem" and args.geometry:
            reports = _single_instance_reports(args)
        elif args.suite in SUITES:
            suite = SUITES[args.suite]
            if args.max_degree is not None and args.suite in (
                "series-identities",
                "integrality",
            ):
                reports = suite(args.max_degree)
            else:
                reports = suite()
        elif args.suite in IDENTITY_CHECKS:
            max_degree = args.max_degree if args.max_degree is not None else 8
            try:
                reports = [verify_series_identity(args.suite, max_degree)]
            except FalsificationError as exc:
                reports = [
                    VerificationReport.failure(
                        exc.identity or args.suite, exc.instance, str(exc)
                    )
                ]
        else:
            known = ", ".join(sorted(list(SUITES) + list(IDENTITY_CHECKS) + ["all"]))
            raise InputError(f"unknown suite or identity {args.suite!r}; known: {known}")
        elapsed_ms = int((time.monotonic() - started) * 1000)
    finally:
        set_mutation(None)

    reports.sort(key=lambda r: (r.identity, r.instance))
    if args.timing and reports:
        # per-run wall time attributed to the stream's last report
        reports[-1].millis = elapsed_ms
    failed = False
    for rep in reports:
        print(rep.to_json(timing=args.timing))
        failed = failed or rep.verdict != "pass"
    return 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        if args.command == "gen":
            return cmd_gen(args)
        return cmd_verify(args)
    except (InputError, ParseError, ScopeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FalsificationError as exc:
        print(
            VerificationReport.failure(
                exc.identity or "falsification", exc.instance, str(exc)
            ).to_json()
        )
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
