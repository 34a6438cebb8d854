"""Command line front end.

Exit status: 0 success, 1 a mathematical invariant failed (the report
carries the offending instance), 2 bad usage or malformed input.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any

from .core import EdgeTensor, InstanceError, build_Ed
from .field import FieldError, FieldSpec
from .geometry import PointConfig, assert_vanishing
from .linalg import InvariantViolation, det_exact, det_s2
from .oracle import regen
from .partitions import (
    Partition,
    exhaustive_survey,
    is_cycle_free,
    is_homogeneous,
    partition_to_tensor,
    sample_colorings,
    survey_colorings,
)
from .system import build_A, build_At, build_Mk
from .verify import run_all


class UsageError(Exception):
    pass


def _load_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise UsageError(f"input file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}") from None


def _field_from_args(args) -> FieldSpec:
    if getattr(args, "prime", None) is not None:
        return FieldSpec.gf(args.prime)
    return FieldSpec.rational()


def _emit(obj: Any, args) -> None:
    text = json.dumps(obj, sort_keys=False)
    out = getattr(args, "output", None)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def cmd_compute(args) -> int:
    t = EdgeTensor.from_json(_load_json(args.input))
    if args.omit is not None:
        det = det_exact(build_At(t, args.omit))
    else:
        det = det_s2(t)
    s = t.field.format(det)
    print(s)
    _emit({"det": s, "nonzero": det != 0}, args)
    return 0


def cmd_ed(args) -> int:
    _emit(build_Ed(args.d, _field_from_args(args)).to_json(), args)
    return 0


def cmd_matrix(args) -> int:
    t = EdgeTensor.from_json(_load_json(args.input))
    if args.which == "A":
        m = build_A(t)
    elif args.which == "At":
        m = build_At(t, args.k if args.k is not None else 1)
    else:
        if args.k is None:
            raise UsageError("--k is required for Mk")
        m = build_Mk(t, args.k)
    _emit(m.to_json(), args)
    return 0


def cmd_partition_check(args) -> int:
    p = Partition.from_json(_load_json(args.input))
    field = _field_from_args(args)
    cf = is_cycle_free(p)
    det = det_s2(partition_to_tensor(p, field))
    agrees = cf == (det != 0)
    report = {
        "cycle_free": cf,
        "homogeneous": is_homogeneous(p),
        "det": field.format(det),
        "agrees": agrees,
    }
    if not agrees:
        report["counterexample"] = p.to_json()
    _emit(report, args)
    return 0 if agrees else 1


def cmd_partition_survey(args) -> int:
    if args.exhaustive:
        if args.d >= 3 and not args.allow_large:
            raise UsageError("exhaustive survey for d >= 3 needs --allow-large")

        def progress(done, total):
            print(f"{done}/{total}", file=sys.stderr, flush=True)

        table = exhaustive_survey(args.d, args.prime, progress=progress if args.progress else None)
        mode = "exhaustive"
    else:
        if args.seed is None:
            raise UsageError("--seed is required for sampled surveys")
        table = survey_colorings(sample_colorings(args.d, args.samples, args.seed), args.d, args.prime)
        mode = "sampled"
    report = {"d": args.d, "prime": args.prime, "mode": mode, "seed": args.seed, **table.to_json()}
    _emit(report, args)
    return 0 if table.ok else 1


def cmd_geom(args) -> int:
    c = PointConfig.from_json(_load_json(args.points))
    _emit(assert_vanishing(c).to_json(), args)
    return 0


def cmd_verify(args) -> int:
    field = _field_from_args(args)
    results = run_all(args.d, field, args.seed, args.trials, args.workers)
    ok = all(r.ok for r in results)
    _emit(
        {"d": args.d, "field": field.to_json(), "seed": args.seed, "trials": args.trials, "ok": ok,
         "suites": [r.to_json() for r in results]},
        args,
    )
    return 0 if ok else 1


def cmd_oracle_regen(args) -> int:
    ok, values = regen(check=args.check)
    _emit({"check": args.check, "ok": ok, "values": values}, args)
    return 0 if ok else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dets2", description="Exact det^S2 computations over Q and GF(p).")
    sub = parser.add_subparsers(dest="command", required=True)

    def out(p):
        p.add_argument("--output", "-o", help="write the JSON report here instead of stdout")

    p = sub.add_parser("compute", help="det^S2 (or det A_t) of an edge-tensor instance")
    p.add_argument("--input", required=True)
    p.add_argument("--omit", type=int, help="report det A_t for this t instead of det A_1")
    out(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("ed", help="emit the canonical instance E_d")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--prime", type=int)
    out(p)
    p.set_defaults(func=cmd_ed)

    p = sub.add_parser("matrix", help="matrix debugging")
    msub = p.add_subparsers(dest="matrix_command", required=True)
    q = msub.add_parser("dump", help="dump A, A_t or M_k as JSON")
    q.add_argument("--input", required=True)
    q.add_argument("--which", choices=["A", "At", "Mk"], default="A")
    q.add_argument("--k", type=int)
    out(q)
    q.set_defaults(func=cmd_matrix)

    p = sub.add_parser("partition", help="d-partitions of K_2d")
    psub = p.add_subparsers(dest="partition_command", required=True)
    q = psub.add_parser("check", help="cycle-freeness vs det^S2 for one partition")
    q.add_argument("--input", required=True)
    q.add_argument("--prime", type=int)
    out(q)
    q.set_defaults(func=cmd_partition_check)
    q = psub.add_parser("survey", help="agreement table over sampled or all partitions")
    q.add_argument("--d", type=int, required=True)
    q.add_argument("--samples", type=int, default=100000)
    q.add_argument("--seed", type=int)
    q.add_argument("--prime", type=int, default=32003)
    q.add_argument("--exhaustive", action="store_true")
    q.add_argument("--allow-large", action="store_true", help="permit exhaustive runs for d >= 3")
    q.add_argument("--progress", action="store_true")
    out(q)
    q.set_defaults(func=cmd_partition_survey)

    p = sub.add_parser("geom", help="det^S2 and explicit witness for a point configuration")
    p.add_argument("--points", required=True)
    out(p)
    p.set_defaults(func=cmd_geom)

    p = sub.add_parser("verify", help="run the seeded property suites")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--prime", type=int, help="work over GF(prime) (default: Q)")
    p.add_argument("--workers", type=int, default=1)
    out(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="golden values")
    osub = p.add_subparsers(dest="oracle_command", required=True)
    q = osub.add_parser("regen", help="recompute golden values (write, or compare with --check)")
    q.add_argument("--check", action="store_true")
    out(q)
    q.set_defaults(func=cmd_oracle_regen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "d", None) is not None and args.d < 2:
            raise UsageError(f"--d must be >= 2, got {args.d}")
        if getattr(args, "prime", None) is not None:
            FieldSpec.gf(args.prime)
        return args.func(args)
    except (UsageError, InstanceError, FieldError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        _emit({"ok": False, "error": str(exc), "instance": exc.instance}, args)
        return 1


if __name__ == "__main__":
    sys.exit(main())
