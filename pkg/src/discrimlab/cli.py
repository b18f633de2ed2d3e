"""Batch command-line driver.

Subcommands:
  zn          exact minimal discriminating complexity for Z^n balls, with
              the Siegel lower bound and the theta upper bound
  bigpowers   certified nontriviality threshold for a padded word, with
              randomized and exhaustive validation
  curve       complexity curve of the top-stage retraction of an
              extension-of-centralizer group
  ball        ball sizes of an extension-of-centralizer group
  crosscheck  independent consistency checks (normalization is a
              homomorphism, p minimality brackets, optional forced p)

Exit codes: 0 success, 1 property violation, 2 input error, 3 budget
exceeded.  Output is CSV (with ``#`` metadata comment lines) or JSON
lines (metadata as the first record); files are written atomically.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
import time
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from .bigpowers import PaddedWordSpec, certify, threshold
from .eocgroup import EocGroup, load_group_spec
from .errors import BudgetExceeded, CertificationError, DiscrimError
from .freewords import Alphabet, parse_word
from .retraction import (
    _apply_chain,
    complexity_curve,
    compose_chain,
    minimal_discriminating_p,
)
from .zdiscrim import BallSpec, minimal_complexity, lower_bound_value, theta

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


class _Violation(DiscrimError):
    """A checked property failed; maps to exit code 1."""


def _atomic_write(path: str, text: str) -> None:
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "w") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, meta: dict, header: Sequence[str], rows: list[Sequence]) -> None:
    lines = []
    if args.format == "csv":
        for k, v in meta.items():
            lines.append(f"# {k}={v}")
        lines.append(",".join(header))
        for row in rows:
            lines.append(",".join(str(x) for x in row))
    else:
        lines.append(json.dumps({"meta": meta}))
        for row in rows:
            lines.append(json.dumps(dict(zip(header, row))))
    text = "\n".join(lines) + "\n"
    if args.out:
        _atomic_write(args.out, text)
    else:
        sys.stdout.write(text)


def _base_meta(args, **extra) -> dict:
    meta = {"tool": "discrimlab", "version": __version__, "command": args.command}
    if getattr(args, "seed", None) is not None:
        meta["seed"] = args.seed
    meta.update(extra)
    return meta


def _load_group(path: str) -> EocGroup:
    with open(path) as f:
        return load_group_spec(f.read())


# -- subcommands ---------------------------------------------------------------


def _cmd_zn(args) -> int:
    spec_shape = args.shape
    rows = []
    for R in range(args.rmin, args.rmax + 1):
        t0 = time.perf_counter()
        exact, witness = minimal_complexity(args.n, BallSpec(spec_shape, R), budget=args.budget)
        upper = theta(args.n, R).complexity
        lb = lower_bound_value(args.n, R) if args.n >= 2 else Fraction(0, 1)
        wall_ms = (time.perf_counter() - t0) * 1000.0
        if not (lb <= exact <= upper):
            raise _Violation(
                f"bound sandwich failed at n={args.n}, R={R}: {lb} <= {exact} <= {upper}"
            )
        rows.append(
            (args.n, R, lb.numerator, lb.denominator, exact, upper, f"{wall_ms:.3f}")
        )
    meta = _base_meta(args, n=args.n, shape=spec_shape, rmin=args.rmin, rmax=args.rmax)
    _emit(
        args,
        meta,
        ["n", "R", "lower_bound_num", "lower_bound_den", "exact_min", "theta_upper", "wall_ms"],
        rows,
    )
    return EXIT_OK


def _cmd_bigpowers(args) -> int:
    alphabet = Alphabet(args.free_rank)
    u = parse_word(alphabet, args.u)
    gs = tuple(parse_word(alphabet, g) for g in args.g)
    flank_left = parse_word(alphabet, args.flank_left) if args.flank_left else None
    flank_right = parse_word(alphabet, args.flank_right) if args.flank_right else None
    try:
        spec = PaddedWordSpec(u, gs, flank_left, flank_right)
    except ValueError as e:
        raise DiscrimError(str(e)) from e
    t0 = time.perf_counter()
    N = threshold(spec)
    report = certify(spec, N, samples=args.samples, seed=args.seed, sweep_cap=args.sweep_cap)
    wall_ms = (time.perf_counter() - t0) * 1000.0
    meta = _base_meta(args, u=args.u, k=len(gs))
    rows = [
        (
            N,
            report.sampled_ok,
            len(report.trivializing),
            "pass" if report.passed else "fail",
            f"{wall_ms:.3f}",
        )
    ]
    _emit(args, meta, ["threshold", "sampled_ok", "trivializing", "verdict", "wall_ms"], rows)
    if not report.passed:
        raise _Violation("certification found a trivializing tuple above threshold")
    return EXIT_OK


def _cmd_curve(args) -> int:
    group = _load_group(args.spec)
    if not group.stages:
        raise DiscrimError("group spec has no extension stage; nothing to retract")
    result = complexity_curve(group, range(args.rmin, args.rmax + 1), cap=args.cap)
    rows = []
    for rec in result.records:
        if not (rec.lower_bound <= rec.complexity):
            raise _Violation(
                f"lower bound exceeds achieved complexity at R={rec.R}: "
                f"{rec.lower_bound} > {rec.complexity}"
            )
        rows.append(
            (
                rec.R,
                rec.p_min,
                rec.complexity,
                rec.lower_bound.numerator,
                rec.lower_bound.denominator,
                rec.ball_size,
                f"{rec.wall_ms:.3f}",
            )
        )
    slope = "" if result.loglog_slope is None else f"{result.loglog_slope:.4f}"
    meta = _base_meta(args, spec=args.spec, loglog_slope=slope)
    if len(group.stages) > 1:
        chain = compose_chain(group, args.rmax, cap=args.cap)
        bound = 1
        for c in chain.stage_complexities:
            bound *= c
        meta["composite_p"] = chain.p
        meta["composite_complexity"] = chain.complexity
        meta["composite_bound"] = bound
        if any(l > b for _, l, b in chain.submultiplicative):
            raise _Violation("composite image exceeds product of stage complexities")
    _emit(
        args,
        meta,
        ["R", "p_min", "complexity", "lower_bound_num", "lower_bound_den", "ball_size", "wall_ms"],
        rows,
    )
    return EXIT_OK


def _cmd_ball(args) -> int:
    group = _load_group(args.spec)
    rows = []
    for R in range(args.rmax + 1):
        t0 = time.perf_counter()
        size = len(group.ball(R, cap=args.cap))
        wall_ms = (time.perf_counter() - t0) * 1000.0
        rows.append((R, size, f"{wall_ms:.3f}"))
    meta = _base_meta(args, spec=args.spec)
    _emit(args, meta, ["R", "ball_size", "wall_ms"], rows)
    return EXIT_OK


def _raw_words(gens, max_len):
    """All raw token sequences of length <= max_len, pruning immediate inverses.

    Pruned pairs normalize to shorter raw words already enumerated, so the
    set of represented group elements is unchanged.
    """
    frontier = [()]
    yield ()
    for _ in range(max_len):
        new = []
        for w in frontier:
            for tok in gens:
                if w and _is_inverse_pair(w[-1], tok):
                    continue
                nw = w + (tok,)
                new.append(nw)
                yield nw
        frontier = new


def _is_inverse_pair(x, y) -> bool:
    if isinstance(x, int) and isinstance(y, int):
        return x == -y
    if isinstance(x, tuple) and isinstance(y, tuple):
        return x[1] == y[1] and x[2] == -y[2]
    return False


def _cmd_crosscheck(args) -> int:
    group = _load_group(args.spec)
    rng = random.Random(args.seed)
    gens = group.generator_tokens()
    checks = []

    # normalization respects multiplication: norm(xy) == norm(x) * norm(y)
    ok = True
    for _ in range(args.samples):
        x_toks = [rng.choice(gens) for _ in range(rng.randint(0, 6))]
        y_toks = [rng.choice(gens) for _ in range(rng.randint(0, 6))]
        joint = group.element(x_toks + y_toks)
        split = group.element(x_toks) * group.element(y_toks)
        if joint != split:
            ok = False
            break
    checks.append(("homomorphism", "pass" if ok else "fail"))
    if not ok:
        raise _Violation("normalization is not multiplicative")

    # inverses: norm(x) * norm(x)^-1 is trivial
    ok = True
    for _ in range(args.samples):
        x = group.element([rng.choice(gens) for _ in range(rng.randint(0, 6))])
        if not (x * x.inverse()).is_trivial():
            ok = False
            break
    checks.append(("inverses", "pass" if ok else "fail"))
    if not ok:
        raise _Violation("inverse normalization failed")

    if group.stages:
        p_min = minimal_discriminating_p(group, args.r, cap=args.cap)
        checks.append(("p_min", p_min))
        p = args.force_p if args.force_p is not None else p_min
        checks.append(("p_used", p))
        # triviality oracle agreement over every raw word of token length <= r:
        # the normal form is empty iff the retraction at p kills the word
        agreements = 0
        disagreement = None
        for toks in _raw_words(gens, args.r):
            w = group.element(toks)
            img = _apply_chain(group, args.r, p, w)
            if w.is_trivial() == img.is_identity():
                agreements += 1
            else:
                disagreement = toks
                break
        checks.append(("raw_words_checked", agreements))
        checks.append(("agreement", "pass" if disagreement is None else "fail"))
        if disagreement is not None:
            raise _Violation(
                f"triviality verdicts disagree at p={p} on raw word {list(disagreement)!r}"
            )

    meta = _base_meta(args, spec=args.spec, r=args.r)
    _emit(args, meta, ["check", "result"], [list(c) for c in checks])
    return EXIT_OK


# -- argument parsing ----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="discrimlab", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common_out(p):
        p.add_argument("--out", help="output file (atomic write); stdout if omitted")
        p.add_argument("--format", choices=("csv", "jsonl"), default="csv")

    p = sub.add_parser("zn", help="minimal discriminating complexity for Z^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--rmin", type=int, default=0)
    p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--shape", choices=("l1", "box"), default="l1")
    p.add_argument("--budget", type=int, default=2_000_000)
    common_out(p)
    p.set_defaults(func=_cmd_zn)

    p = sub.add_parser("bigpowers", help="certified padded-word threshold")
    p.add_argument("--free-rank", type=int, default=2)
    p.add_argument("--u", required=True, help="amalgamating word, token format")
    p.add_argument("--g", action="append", required=True, help="interleaving word (repeatable)")
    p.add_argument("--flank-left")
    p.add_argument("--flank-right")
    p.add_argument("--samples", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--sweep-cap", type=int, default=6)
    common_out(p)
    p.set_defaults(func=_cmd_bigpowers)

    p = sub.add_parser("curve", help="retraction complexity curve")
    p.add_argument("--spec", required=True, help="group spec JSON file")
    p.add_argument("--rmin", type=int, default=0)
    p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--cap", type=int, default=500_000)
    common_out(p)
    p.set_defaults(func=_cmd_curve)

    p = sub.add_parser("ball", help="ball sizes of a group")
    p.add_argument("--spec", required=True, help="group spec JSON file")
    p.add_argument("--rmax", type=int, required=True)
    p.add_argument("--cap", type=int, default=500_000)
    common_out(p)
    p.set_defaults(func=_cmd_ball)

    p = sub.add_parser("crosscheck", help="independent consistency checks")
    p.add_argument("--spec", required=True, help="group spec JSON file")
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cap", type=int, default=500_000)
    p.add_argument(
        "--force-p",
        type=int,
        help="use this p instead of the computed p_min for the agreement check",
    )
    common_out(p)
    p.set_defaults(func=_cmd_crosscheck)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad input and 0 on --help; pass both through
        return e.code if isinstance(e.code, int) else EXIT_INPUT
    try:
        return args.func(args)
    except (_Violation, CertificationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_VIOLATION
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_BUDGET
    except (DiscrimError, OSError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
