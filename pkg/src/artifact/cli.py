"""Command-line front end: JSON in, JSON out.

Exit codes: 0 success, 1 internal failure (or a failing verify run),
2 usage or validation error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import verify as verify_mod
from .eltrans import EvenSubset, admissible_group, flip, is_admissible
from .parabolic import (
    InvalidWitness,
    LineSubbundleWitness,
    ParabolicBundle,
    TransformInvariantError,
    elementary_transform,
    is_isomorphic,
    line_slope,
    max_line_slope,
    max_line_slope_exhaustive,
    slope,
    stability_type,
    transform_line,
)
from .randgen import random_bundle, random_even_subset, random_weight_in_delta, trial_rng
from .survey import survey
from .weightpoly import (
    DimensionError,
    NotInPolytopeError,
    WeightVector,
    h_value,
    is_in_delta,
    is_in_pi,
    mask_from_indices,
    signature,
)
from .exactcore import format_rational


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise UsageError(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise UsageError(f"malformed JSON in {path}: {exc}")


def _single_n(args) -> int | None:
    if args.n is None:
        return None
    try:
        return int(args.n)
    except ValueError:
        raise UsageError(f"--n must be an integer, got {args.n!r}")


def _weights(args) -> WeightVector:
    if not args.weights:
        raise UsageError("--weights is required")
    A = WeightVector.from_json(_load_json(args.weights))
    n = _single_n(args)
    if n is not None and n != A.n:
        raise UsageError(f"--n {n} does not match the weight file (n = {A.n})")
    return A


def _bundle(args) -> ParabolicBundle:
    if not args.bundle:
        raise UsageError("--bundle is required")
    return ParabolicBundle.from_json(_load_json(args.bundle))


def _subset(text: str | None, n: int) -> EvenSubset:
    if text is None or text.strip() == "":
        return EvenSubset.empty(n)
    try:
        idx = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"--subset must be comma separated integers, got {text!r}")
    return EvenSubset.of(n, idx)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"expected comma separated integers, got {text!r}")


def _warn(msg: str) -> None:
    print(f"warning: {msg}", file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands


def cmd_polytope(args) -> dict:
    A = _weights(args)
    out = {
        "n": A.n,
        "in_delta": is_in_delta(A),
        "in_delta_interior": is_in_delta(A, strict=True),
        "in_pi": is_in_pi(A),
        "in_pi_interior": is_in_pi(A, strict=True),
    }
    if args.subset is not None:
        I = mask_from_indices(_int_list(args.subset), A.n)
        out["H"] = {"I": _int_list(args.subset), "value": format_rational(h_value(I, A))}
    if args.all_h:
        out["h_values"] = [{"mask": m, "value": format_rational(h_value(m, A))} for m in range(1 << A.n)]
    return out


def cmd_chamber(args) -> dict:
    A = _weights(args)
    sig = signature(A)
    out = {"n": A.n, "open": sig.is_open(), "zeros": len(sig.zeros()), "signature": sig.to_json()}
    if args.compare:
        B = WeightVector.from_json(_load_json(args.compare))
        out["same_chamber"] = signature(B) == sig
    return out


def cmd_admissible(args) -> dict:
    A = _weights(args)
    return admissible_group(A, method=args.method).to_json()


def cmd_stability(args) -> dict:
    E = _bundle(args)
    A = _weights(args)
    if E.repeated_directions():
        _warn("repeated parabolic directions: the configuration is special, not general")
    return stability_type(E, A).to_json()


def cmd_transform(args) -> dict:
    E = _bundle(args)
    R = _subset(args.subset, E.n)
    result = elementary_transform(E, R)
    out = result.to_json()
    if args.line:
        L = LineSubbundleWitness.from_json(_load_json(args.line))
        out["line"] = transform_line(L, E, R, result).to_json()
    return out


def cmd_survey(args) -> dict:
    n = _single_n(args)
    if n is None:
        raise UsageError("survey needs --n")
    if args.samples < 1:
        raise UsageError("--samples must be at least 1")
    return survey(n, args.samples, args.seed)


def _propcheck_trial(n: int, rng) -> dict[str, bool]:
    res = {}
    A = random_weight_in_delta(rng, n)
    R = random_even_subset(rng, n)
    S = random_even_subset(rng, n)
    I = int(rng.integers(0, 1 << n))
    res["wall_flip"] = h_value(I, flip(A, R)) == h_value(I ^ R.mask, A)
    res["complement_sum"] = h_value(I, A) + h_value(((1 << n) - 1) ^ I, A) == n
    res["flip_involution"] = flip(flip(A, R), R) == A
    g = admissible_group(A)
    res["group_closure"] = all((x.mask ^ y.mask) in {z.mask for z in g.elements}
                               for x in g.elements for y in g.elements) and len(g.elements) == g.order
    if is_admissible(A, R):
        res["functoriality"] = admissible_group(flip(A, R)).elements == g.elements
    E = random_bundle(rng, n)
    rep = stability_type(E, A)
    TR = elementary_transform(E, R)
    after = stability_type(TR.bundle, flip(A, R))
    res["preservation"] = (rep.verdict == "unstable") or (after.verdict != "unstable"
                                                           and (rep.verdict != "stable" or after.verdict == "stable"))
    L2 = transform_line(rep.witness, E, R, TR)
    AR = flip(A, R)
    res["slope_gap"] = line_slope(A, rep.witness, E) - slope(A, E) == line_slope(AR, L2, TR.bundle) - slope(AR, TR.bundle)
    res["determinant_law"] = sum(TR.kernel_splitting) == E.degree - R.size
    res["involution"] = is_isomorphic(elementary_transform(TR.bundle, R).bundle, E)
    res["group_law"] = is_isomorphic(elementary_transform(TR.bundle, S).bundle,
                                     elementary_transform(E, EvenSubset(n, R.mask ^ S.mask)).bundle)
    if n <= 6:
        res["oracle"] = max_line_slope(E, A)[0] == max_line_slope_exhaustive(E, A)
    return res


def cmd_propcheck(args) -> dict:
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    n = _single_n(args)
    n = 6 if n is None else n
    if n < 5:
        raise UsageError("n must be at least 5")
    checks: dict[str, dict] = {}
    for t in range(args.trials):
        s, rng = trial_rng(args.seed, t)
        for name, ok in _propcheck_trial(n, rng).items():
            entry = checks.setdefault(name, {"passed": 0, "failed_sub_seeds": []})
            if ok:
                entry["passed"] += 1
            else:
                entry["failed_sub_seeds"].append(s)
    ok = all(not c["failed_sub_seeds"] for c in checks.values())
    return {"n": n, "trials": args.trials, "seed": args.seed, "ok": ok,
            "checks": {k: checks[k] for k in sorted(checks)}}


def cmd_verify(args) -> tuple[dict, int]:
    n_list = _int_list(args.n) if args.n else list(verify_mod.ALL_N)
    bad = [n for n in n_list if not 5 <= n <= 10]
    if bad:
        raise UsageError(f"verify accepts n in 5..10, got {bad}")
    if args.inject_fault and args.inject_fault not in verify_mod.CRITERIA_BY_KEY:
        raise UsageError(f"unknown criterion {args.inject_fault!r}")
    ctx = verify_mod.Context(n_list, seed=args.seed, fault=args.inject_fault)
    results = []
    for crit in verify_mod.CRITERIA:
        r = crit(ctx)
        results.append(r)
        print(r.line(), file=sys.stderr)
    failed = [r.key for r in results if r.passed is False]
    report = {"n": n_list, "seed": args.seed, "all_passed": not failed, "failed": failed,
              "criteria": [r.to_json(timings=args.timings) for r in results]}
    return report, (1 if failed else 0)


# ---------------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(verify_mod.DEFAULT_SEED), help="64-bit seed")
    p.add_argument("--format", choices=("json", "csv"), default=d("json"))
    p.add_argument("--n", default=d(None), help="n (verify: comma separated list)")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="artifact", description="Walls, chambers, elementary transformations and stability "
                                             "for rank-2 parabolic bundles on P^1.")
    _common(p, suppress=False)
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    def add(name, help_text):
        sp = sub.add_parser(name, help=help_text)
        _common(sp, suppress=True)
        return sp

    sp = add("polytope", "membership in Delta and Pi, H values")
    sp.add_argument("--weights")
    sp.add_argument("--subset", help="comma separated I for a single H_I value")
    sp.add_argument("--all-h", action="store_true")

    sp = add("chamber", "wall signature of a weight")
    sp.add_argument("--weights")
    sp.add_argument("--compare", help="second weight file for a same-chamber test")

    sp = add("admissible", "admissible elementary transformations")
    sp.add_argument("--weights")
    sp.add_argument("--method", choices=("auto", "exhaustive", "generators"), default="auto")

    sp = add("stability", "slope stability of a bundle")
    sp.add_argument("--bundle")
    sp.add_argument("--weights")

    sp = add("transform", "elementary transformation of a bundle")
    sp.add_argument("--bundle")
    sp.add_argument("--subset", default="")
    sp.add_argument("--line", help="line witness JSON to carry along")

    sp = add("survey", "rank histogram over random weights in Pi")
    sp.add_argument("--samples", type=int, default=500)

    sp = add("propcheck", "randomized invariant checks")
    sp.add_argument("--trials", type=int, default=50)

    sp = add("verify", "run the acceptance criteria")
    sp.add_argument("--timings", action="store_true", help="include wall-clock seconds in the JSON report")
    sp.add_argument("--inject-fault", default=None, help="corrupt the fixture of one criterion (negative control)")
    return p


def _emit(payload, fmt: str, out) -> None:
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in payload:
            writer.writerow(row)
        out.write(buf.getvalue())
    else:
        out.write(json.dumps(payload, indent=2) + "\n")


def _error(kind: str, message: str) -> dict:
    return {"error": {"type": kind, "message": message}}


HANDLERS = {
    "polytope": cmd_polytope,
    "chamber": cmd_chamber,
    "admissible": cmd_admissible,
    "stability": cmd_stability,
    "transform": cmd_transform,
    "survey": cmd_survey,
    "propcheck": cmd_propcheck,
}


def dispatch(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("missing subcommand; choose one of " + ", ".join(list(HANDLERS) + ["verify"]))
        if args.seed < 0 or args.seed >= 2 ** 64:
            raise UsageError("--seed must be an unsigned 64-bit integer")
        csv_ok = args.command in ("survey", "verify")
        if args.format == "csv" and not csv_ok:
            raise UsageError(f"csv output is only available for survey and verify, not {args.command}")
        code = 0
        if args.command == "verify":
            report, code = cmd_verify(args)
            rows = [["criterion", "status"]] + [[c["criterion"], c["status"]] for c in report["criteria"]]
            _emit(rows if args.format == "csv" else report, args.format, out)
            return code
        result = HANDLERS[args.command](args)
        if args.command == "survey":
            _emit(result.csv_rows() if args.format == "csv" else result.to_json(), args.format, out)
        else:
            _emit(result, args.format, out)
        return code
    except (UsageError, ValueError, KeyError, TypeError, DimensionError, NotInPolytopeError, InvalidWitness) as exc:
        msg = f"missing field {exc}" if isinstance(exc, KeyError) else str(exc)
        _emit(_error("validation", msg), "json", out)
        return 2
    except (TransformInvariantError, AssertionError, RuntimeError) as exc:
        _emit(_error("internal", f"{type(exc).__name__}: {exc}"), "json", out)
        return 1


def main() -> None:
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
