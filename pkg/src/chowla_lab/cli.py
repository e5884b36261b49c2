"""Command-line surface: generation, analysis batteries, the Toeplitz
pipeline, bound audits, and report emission.

Exit codes: 0 on success/pass, 1 when a battery or audit fails, 2 on usage
errors.  Reports are JSON (schema 1) or CSV, written atomically, and embed
the parameters, seed, tool version, and thread budget, so identical
invocations produce byte-identical reports.  The CHOWLA_LAB_THREADS
environment variable caps the thread budget; all computations here are
single-threaded vectorized passes, which trivially honor any budget >= 1.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .correlations import (
    CorrelationCurve,
    PeriodicSampler,
    RotationSampler,
    SubshiftSampler,
    ch_battery,
    chowla_sum,
    davenport_scan,
    sarnak_sum,
)
from .empirics import complexity_profile, entropy_estimate, sign_extension_test
from .entbounds import EntropyPair, audit_entropy_pair
from .numbergen import BSet, liouville_prefix, mobius_prefix, mu_b_prefix
from .seqcore import SignSeq, read_sqz, write_sqz
from .symbolicgen import (
    BernoulliParams,
    DeterminizeParams,
    SturmianParams,
    bernoulli_prefix,
    determinize_step,
    doubling_word_prefix,
    masked_coin_prefix,
    pair_code_prefix,
    sturmian_prefix,
)
from .toeplitz import (
    ToeplitzSpec,
    build_toeplitz,
    interval_analytics,
    toeplitz_correlation,
    toeplitz_entropy_lower_bound,
)

THREADS_ENV = "CHOWLA_LAB_THREADS"


def thread_budget() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return os.cpu_count() or 1
    budget = int(raw)
    if budget < 1:
        raise ValueError(f"{THREADS_ENV} must be >= 1, got {budget}")
    return budget


def _atomic_write_text(path: str, text: str) -> None:
    tmp = f"{path}.tmp{os.getpid()}"
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _curve_rows(name: str, curve: CorrelationCurve | tuple) -> list[tuple[str, int, float]]:
    points = curve.checkpoints if isinstance(curve, CorrelationCurve) else curve
    return [(name, n, value) for n, value in points]


def emit_report(args, command: str, params: dict, results: dict, verdict: bool | None,
                curves: list[tuple[str, int, float]] | None = None) -> None:
    if getattr(args, "report", "json") == "csv":
        lines = ["series,n,value"]
        for name, n, value in curves or []:
            lines.append(f"{name},{n},{value!r}")
        text = "\n".join(lines) + "\n"
    else:
        report = {
            "schema": 1,
            "tool": "chowla-lab",
            "version": __version__,
            "command": command,
            "params": params,
            "threads": thread_budget(),
            "results": results,
        }
        if verdict is not None:
            report["verdict"] = "pass" if verdict else "fail"
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    out = getattr(args, "out_report", None)
    if out:
        _atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _csv_ints(text: str) -> list[int]:
    return [int(v) for v in text.split(",") if v.strip()]


def _csv_floats(text: str) -> list[float]:
    return [float(v) for v in text.split(",") if v.strip()]


def _load(path: str) -> SignSeq:
    if not os.path.exists(path):
        raise ValueError(f"input file does not exist: {path}")
    return read_sqz(path)


def cmd_generate(args) -> int:
    kind = args.kind
    n = args.n
    if kind == "mobius":
        seq = mobius_prefix(n)
    elif kind == "liouville":
        seq = liouville_prefix(n)
    elif kind == "mu-b":
        if args.bset is None:
            raise ValueError("--bset is required for --kind mu-b")
        if args.bset == "prime-squares":
            bset = BSet.prime_squares(n)
        else:
            bset = BSet.from_squares(_csv_ints(args.bset))
        seq = mu_b_prefix(bset, n)
    elif kind == "sturmian":
        if args.alpha is None:
            raise ValueError("--alpha is required for --kind sturmian")
        seq = sturmian_prefix(SturmianParams(alpha=args.alpha, beta=args.beta), n)
    elif kind == "bernoulli":
        if args.probs is None:
            raise ValueError("--probs is required for --kind bernoulli")
        probs = _csv_floats(args.probs)
        alphabet = {2: (-1, 1), 3: (-1, 0, 1)}.get(len(probs))
        if alphabet is None:
            raise ValueError(f"--probs needs 2 or 3 values, got {len(probs)}")
        seq = bernoulli_prefix(alphabet, BernoulliParams(tuple(probs), args.seed), n)
    elif kind == "coded":
        seq = pair_code_prefix(args.k0, args.seed, n)
    elif kind == "squares-needed":
        seq = masked_coin_prefix(args.seed, n)
    elif kind == "example-aa":
        seq = doubling_word_prefix(n)
    else:  # pragma: no cover - argparse restricts choices
        raise ValueError(f"unknown kind {kind}")
    write_sqz(args.out, seq)
    print(f"{args.out}: {os.path.getsize(args.out)} bytes, {len(seq)} symbols")
    return 0


def cmd_chowla(args) -> int:
    z = _load(args.input)
    n = args.n if args.n is not None else len(z) - args.max_lag
    report = ch_battery(z, args.max_lag, args.max_r, n, args.tol)
    witness_curve = chowla_sum(z, report.witness, n)
    results = {
        "n": report.n,
        "tol": report.tol,
        "max_abs": report.max_abs,
        "witness": report.witness.label(),
        "witness_curve": [{"n": cn, "value": cv} for cn, cv in witness_curve.checkpoints],
        "ch1_max_abs": report.ch1_max_abs,
        "ch1_witness": report.ch1_witness.label(),
        "ch1_passed": report.ch1_passed,
        "entries": [
            {"spec": e.spec.label(), "value": e.value} for e in report.entries
        ],
        "note": "vanishing for arithmetic sequences is a conjecture-consistency "
        "check, not a theorem",
    }
    curves = _curve_rows("witness:" + report.witness.label(), witness_curve)
    curves += [("entry:" + e.spec.label(), report.n, e.value) for e in report.entries]
    emit_report(args, "chowla", _params(args), results, report.passed, curves)
    return 0 if report.passed else 1


def _build_sampler(args):
    if args.system == "rotation":
        if args.alpha is None:
            raise ValueError("--alpha is required for --system rotation")
        return RotationSampler(alpha=args.alpha, x0=args.x0, observable=args.f)
    if args.system == "periodic":
        if args.pattern is None:
            raise ValueError("--pattern is required for --system periodic")
        return PeriodicSampler(pattern=tuple(_csv_floats(args.pattern)))
    if args.weights is None:
        raise ValueError("--weights is required for --system subshift")
    return SubshiftSampler(w=_load(args.weights))


def cmd_sarnak(args) -> int:
    z = _load(args.input)
    sampler = _build_sampler(args)
    n = args.n if args.n is not None else (len(z) if args.system != "subshift" else len(z) - 1)
    curve = sarnak_sum(sampler, z, n)
    results = {
        "n": n,
        "system": args.system,
        "final": curve.final,
        "curve": [{"n": cn, "value": cv} for cn, cv in curve.checkpoints],
    }
    emit_report(args, "sarnak", _params(args), results, None, _curve_rows("sarnak", curve))
    return 0


def cmd_davenport(args) -> int:
    z = _load(args.input)
    n = args.n if args.n is not None else len(z)
    result = davenport_scan(z, n, args.grid)
    results = {
        "n": n,
        "grid": result.grid,
        "max_value": result.max_value,
        "argmax_theta": result.argmax_theta,
        "curve": [{"n": cn, "value": cv} for cn, cv in result.curve],
    }
    emit_report(args, "davenport", _params(args), results, None,
                _curve_rows("davenport", result.curve))
    return 0


def cmd_entropy(args) -> int:
    w = _load(args.input)
    profile = complexity_profile(w, args.n_max)
    n_lo = args.n_lo if args.n_lo is not None else max(1, args.n_max - 4)
    n_hi = args.n_hi if args.n_hi is not None else args.n_max
    estimate = entropy_estimate(profile, n_lo, n_hi)
    results = {
        "prefix_length": profile.prefix_length,
        "counts": profile.counts.tolist(),
        "entropy_slope": profile.entropy_slope.tolist(),
        "estimate": estimate.value,
        "uncertainty": estimate.uncertainty,
        "window": [estimate.n_lo, estimate.n_hi],
        "note": "finite-scale estimator, not the true limit",
    }
    curve = [("p_n", n + 1, float(c)) for n, c in enumerate(profile.counts)]
    emit_report(args, "entropy", _params(args), results, None, curve)
    return 0


def cmd_hat_test(args) -> int:
    z = _load(args.input)
    report = sign_extension_test(z, args.k, args.tol)
    results = {
        "max_violation": report.max_violation,
        "witness": list(report.witness.letters) if report.witness else None,
        "audited_blocks": report.audited_blocks,
        "violations": [
            {"block": list(b.letters), "deviation": d} for b, d in report.violations
        ],
    }
    emit_report(args, "hat-test", _params(args), results, report.passed)
    return 0 if report.passed else 1


def cmd_toeplitz_build(args) -> int:
    ref = _load(args.ref)
    n = args.n if args.n is not None else len(ref)
    t = build_toeplitz(ToeplitzSpec(q=args.q, z_ref=ref), n)
    write_sqz(args.out, t)
    print(f"{args.out}: {os.path.getsize(args.out)} bytes, {len(t)} symbols")
    return 0


def cmd_toeplitz_analyze(args) -> int:
    ref = _load(args.ref) if args.ref else None
    spec_ref = ref if ref is not None else SignSeq(np.zeros(1, dtype=np.int8))
    spec = ToeplitzSpec(q=args.q, z_ref=spec_ref)
    report = interval_analytics(spec, args.m, args.ell, args.k)
    results = {
        "L": report.L,
        "good_count": report.good_count,
        "non_good_fraction": report.non_good_fraction,
        "non_good_bound": report.non_good_bound,
        "type1_count_expected": report.type1_count_expected,
        "type1_count_observed": report.type1_count_observed,
        "type1_fraction": report.type1_fraction,
        "type1_counts_equal": report.type1_counts_equal,
        "masks_identical": report.masks_identical,
        "type1_mask": list(report.type1_mask),
    }
    verdict = (
        report.masks_identical
        and report.type1_counts_equal
        and report.type1_count_observed == report.type1_count_expected
    )
    if ref is not None:
        needed = args.k * args.q**args.m
        if len(ref) >= needed:
            bound = toeplitz_entropy_lower_bound(spec, args.m, args.ell, args.k)
            corr = toeplitz_correlation(spec, needed)
            results["entropy_lower_bound"] = bound.estimate
            results["distinct_blocks"] = bound.distinct_blocks
            results["correlation"] = corr.value
            results["correlation_lower_bound"] = corr.lower_bound
            verdict = verdict and corr.holds
        else:
            results["note"] = f"reference too short for entropy bound (need {needed})"
    emit_report(args, "toeplitz-analyze", _params(args), results, verdict)
    return 0 if verdict else 1


def cmd_bounds(args) -> int:
    pair = EntropyPair(h_square=args.h_square, h_full=args.h_full)
    verdict = audit_entropy_pair(pair, recurrent_closed=args.recurrent)
    results = {
        "upper_margin": verdict.upper_margin,
        "lower_margin": verdict.lower_margin,
        "equality_flag": verdict.equality_flag,
    }
    emit_report(args, "bounds", _params(args), results, verdict.passed)
    return 0 if verdict.passed else 1


def cmd_determinize(args) -> int:
    u = _load(args.input)
    current = u
    steps = []
    ok = True
    for i in range(args.steps):
        params = DeterminizeParams(
            epsilon=args.epsilon / 2**i, n_block=args.n_block, big_n=args.big_n
        )
        result = determinize_step(current, params)
        bound = result.distinct_block_bound(params)
        ok = ok and result.distinct_block_count < bound
        steps.append(
            {
                "epsilon": params.epsilon,
                "distinct_blocks": result.distinct_block_count,
                "distinct_bound": bound,
                "changed_fraction": result.changed_fraction,
                "unacceptable_fraction": result.unacceptable_fraction,
                "heavy_blocks": result.heavy_block_count,
            }
        )
        current = result.sequence
    write_sqz(args.out, current)
    emit_report(args, "determinize", _params(args), {"steps": steps}, ok)
    return 0 if ok else 1


def _params(args) -> dict:
    skip = {"func", "out_report"}  # the report's own location is not an input
    return {
        k: v for k, v in sorted(vars(args).items()) if k not in skip and v is not None
    }


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chowla-lab",
        description="Generate {-1,0,1} sequences and run correlation/entropy batteries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate a sequence prefix into an .sqz file")
    p.add_argument("--kind", required=True, choices=[
        "mobius", "liouville", "mu-b", "sturmian", "bernoulli",
        "coded", "squares-needed", "example-aa",
    ])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--bset", help="comma-separated squares, or 'prime-squares'")
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--probs", help="comma-separated probabilities (2 or 3 values)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--k0", type=int, default=2)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("chowla", help="run the multi-lag autocorrelation battery")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--max-lag", type=int, default=5)
    p.add_argument("--max-r", type=int, default=2)
    p.add_argument("--n", type=int)
    p.add_argument("--tol", type=float, default=0.02)
    _report_flags(p)
    p.set_defaults(func=cmd_chowla)

    p = sub.add_parser("sarnak", help="weighted sum against an orbit sampler")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--system", required=True, choices=["rotation", "periodic", "subshift"])
    p.add_argument("--alpha", type=float)
    p.add_argument("--x0", type=float, default=0.0)
    p.add_argument("--f", choices=["cos", "sin"], default="cos")
    p.add_argument("--pattern", help="comma-separated floats for --system periodic")
    p.add_argument("--weights", help=".sqz file for --system subshift")
    p.add_argument("--n", type=int)
    _report_flags(p)
    p.set_defaults(func=cmd_sarnak)

    p = sub.add_parser("davenport", help="twisted-sum maximum over a frequency grid")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--n", type=int)
    p.add_argument("--grid", type=int, default=1000)
    _report_flags(p)
    p.set_defaults(func=cmd_davenport)

    p = sub.add_parser("entropy", help="block complexity profile and entropy estimate")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--n-lo", type=int)
    p.add_argument("--n-hi", type=int)
    _report_flags(p)
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("hat-test", help="randomized-sign extension audit")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--k", type=int, default=8)
    p.add_argument("--tol", type=float, default=0.01)
    _report_flags(p)
    p.set_defaults(func=cmd_hat_test)

    p = sub.add_parser("toeplitz", help="Toeplitz construction pipeline")
    tsub = p.add_subparsers(dest="subcommand", required=True)
    pb = tsub.add_parser("build", help="copy a reference onto initial progressions")
    pb.add_argument("--q", type=int, required=True)
    pb.add_argument("--ref", required=True)
    pb.add_argument("--n", type=int)
    pb.add_argument("--out", required=True)
    pb.set_defaults(func=cmd_toeplitz_build)
    pa = tsub.add_parser("analyze", help="interval classification and entropy bound")
    pa.add_argument("--q", type=int, required=True)
    pa.add_argument("--m", type=int, required=True)
    pa.add_argument("--ell", type=int, required=True)
    pa.add_argument("--k", type=int, required=True)
    pa.add_argument("--ref", help="reference .sqz for correlation/entropy results")
    _report_flags(pa)
    pa.set_defaults(func=cmd_toeplitz_analyze)

    p = sub.add_parser("bounds", help="audit an entropy pair against the boundary curves")
    p.add_argument("--h-square", type=float, required=True)
    p.add_argument("--h-full", type=float, required=True)
    p.add_argument("--recurrent", action="store_true")
    _report_flags(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("determinize", help="heavy-block recoding passes")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--n-block", type=int, required=True)
    p.add_argument("--big-n", type=int, required=True)
    p.add_argument("--steps", type=int, default=1,
                   help="number of passes; pass i uses epsilon/2**i")
    p.add_argument("--out", required=True)
    _report_flags(p)
    p.set_defaults(func=cmd_determinize)

    return parser


def _report_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--report", choices=["json", "csv"], default="json")
    p.add_argument("--out-report", help="report path (default: stdout)")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
