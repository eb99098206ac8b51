"""Command-line entry point: ``lmwv {constants,verify,synth,wvar,estimate}``.

Exit codes: 0 success, 2 argument or domain error, 3 numerical failure,
4 I/O or format error.
"""
from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from pathlib import Path

from .asymptotics import (
    ExpansionCoefficients,
    k_exponent_ratios,
    remainder_profile,
    reports_to_csv,
)
from .csvio import format_float, read_series_csv, read_table, write_text
from .errors import DomainError, InputFormatError, LMWVError
from .estimator import DEFAULT_J_MIN, Weighting, bias_corrected_fit, fit_log_regression
from .quadrature import QuadratureOptions
from .spectra import LongMemoryModel, Quadratic, Tabulated, Unit, check_memory_parameter
from .synthesis import synthesize
from .wavelets import WaveletFilter, WaveletVarianceProfile, transform, wavelet_variance

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_IO = 0, 2, 3, 4
THREADS_ENV = "LMWV_THREADS"
ADJUDICATION_MIN_J = 8


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "0").strip() or "0"
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"{THREADS_ENV} must be an integer, got {raw!r}") from None
    if n < 0:
        raise DomainError(f"{THREADS_ENV} must be >= 0, got {n}")
    return n or (os.cpu_count() or 1)


@contextmanager
def ordered_mapper():
    """A ``map`` that may run in threads but always yields results in input order."""
    workers = thread_count()
    if workers == 1:
        yield map
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield pool.map


def _quad_options(args) -> QuadratureOptions:
    return QuadratureOptions(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _emit(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        write_text(out, text)


def _model(args) -> LongMemoryModel:
    check_memory_parameter(args.d)
    if getattr(args, "short_memory", None):
        sm = Tabulated.from_csv(args.short_memory)
    elif args.beta:
        sm = Quadratic(args.beta)
    else:
        sm = Unit()
    return LongMemoryModel(args.d, sm)


def cmd_constants(args) -> int:
    check_memory_parameter(args.d)
    coeffs = ExpansionCoefficients.compute(args.d, args.beta)
    for key, value in coeffs.as_items():
        print(f"{key}={format_float(value)}")
    return EXIT_OK


def _adjudication_path(out: str) -> Path:
    p = Path(out)
    return p.with_name(f"{p.stem}_adjudication{p.suffix or '.csv'}")


def cmd_verify(args) -> int:
    if args.jmin >= args.jmax:
        raise DomainError(f"--jmin must be < --jmax, got {args.jmin} >= {args.jmax}")
    model = _model(args)
    opts = _quad_options(args)
    with ordered_mapper() as mapper:
        profile = remainder_profile(model, args.jmin, args.jmax, opts, mapper=mapper)
    reports = [k_exponent_ratios(model.d, r.j, r.gamma_quad) for r in profile.rows]
    _emit(profile.to_csv(), args.out)
    if args.out is not None:
        write_text(_adjudication_path(args.out), reports_to_csv(reports))
    else:
        sys.stdout.write("\n" + reports_to_csv(reports))

    last = profile.rows[-1]
    deep = [r for r in reports if r.j >= ADJUDICATION_MIN_J]
    verdict = deep[-1].verdict if deep else "not evaluated (needs j >= 8)"
    status = "PASS" if profile.converged() else "FAIL"
    print(f"{status}: e1({last.j})={format_float(last.e1)} a2={format_float(profile.a2)} "
          f"|e1-a2|={abs(last.e1 - profile.a2):.3e} K_tilde exponent: {verdict}",
          file=sys.stderr if args.out is None else sys.stdout)
    return EXIT_OK


def _replicate_path(out: str, index: int, count: int) -> Path:
    p = Path(out)
    if count == 1:
        return p
    return p.with_name(f"{p.stem}_r{index:03d}{p.suffix}")


def cmd_synth(args) -> int:
    if args.replicates < 1:
        raise DomainError(f"--replicates must be >= 1, got {args.replicates}")
    model = _model(args)
    opts = _quad_options(args)
    seeds = [args.seed + i for i in range(args.replicates)]

    def run(i):
        return synthesize(model, args.n, seeds[i], opts)

    # warm the autocovariance cache once so threads do not repeat it
    series = [run(0)]
    with ordered_mapper() as mapper:
        series += list(mapper(run, range(1, args.replicates)))
    for i, ts in enumerate(series):
        path = _replicate_path(args.out, i, args.replicates)
        write_text(path, ts.to_csv())
        write_text(f"{path}.meta", ts.meta_text())
    print(f"wrote {len(series)} series of length {args.n}")
    return EXIT_OK


def cmd_wvar(args) -> int:
    x = read_series_csv(args.input)
    coeffs = transform(x, WaveletFilter(args.filter), args.jmax)
    profile = wavelet_variance(coeffs)
    _emit(profile.to_csv(), args.out)
    return EXIT_OK


def _load_profile(path) -> WaveletVarianceProfile:
    header, _ = read_table(path)
    if header == ["j", "gamma_hat", "n_eff"]:
        return WaveletVarianceProfile.from_csv(path)
    if header == ["x"]:
        return wavelet_variance(transform(read_series_csv(path), WaveletFilter.IDEAL))
    raise InputFormatError(f"{path}: header must be 'x' (series) or 'j,gamma_hat,n_eff' (profile)")


def cmd_estimate(args) -> int:
    profile = _load_profile(args.input)
    if args.bias_correct:
        result = bias_corrected_fit(profile, args.jmin, args.jmax, args.beta, args.weighting)
    else:
        result = fit_log_regression(profile, args.jmin, args.jmax, args.weighting)
    sys.stdout.write(result.to_key_value())
    if args.out is not None:
        write_text(args.out, result.to_csv())
    return EXIT_OK


def _add_tolerances(p):
    p.add_argument("--rel-tol", type=float, default=QuadratureOptions.rel_tol)
    p.add_argument("--abs-tol", type=float, default=QuadratureOptions.abs_tol)


def _add_model(p, tabulated=False):
    p.add_argument("--d", type=float, required=True, help="memory parameter in (0, 1/2)")
    p.add_argument("--beta", type=float, default=0.0, help="S*(f) = 1 + beta f^2")
    if tabulated:
        p.add_argument("--short-memory", metavar="PATH",
                       help="tabulated S* as CSV 'f,value' (overrides --beta)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lmwv",
        description="Wavelet variance of long-memory processes: expansion checks and d estimation.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="print K_tilde, a2, M12, A1, A4", allow_abbrev=False)
    _add_model(p)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("verify", help="remainder profile and K_tilde adjudication", allow_abbrev=False)
    _add_model(p)
    p.add_argument("--jmin", type=int, default=4)
    p.add_argument("--jmax", type=int, default=12)
    p.add_argument("--out", help="remainder CSV (adjudication goes to <stem>_adjudication.csv)")
    _add_tolerances(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("synth", help="synthesize sample paths", allow_abbrev=False)
    _add_model(p, tabulated=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicates", type=int, default=1)
    p.add_argument("--out", required=True)
    _add_tolerances(p)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("wvar", help="wavelet variance profile of a series", allow_abbrev=False)
    p.add_argument("--input", required=True)
    p.add_argument("--filter", choices=[f.value for f in WaveletFilter], default="ideal")
    p.add_argument("--jmax", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_wvar)

    p = sub.add_parser("estimate", help="estimate d from a series or profile CSV", allow_abbrev=False)
    p.add_argument("--input", required=True)
    p.add_argument("--jmin", type=int, default=DEFAULT_J_MIN)
    p.add_argument("--jmax", type=int, default=None)
    p.add_argument("--weighting", choices=[w.value for w in Weighting], default="uniform")
    p.add_argument("--bias-correct", action="store_true",
                   help="divide out 1 + a2 2^(-2j) using --beta as the assumed beta")
    p.add_argument("--beta", type=float, default=0.0)
    p.add_argument("--out", help="single-row result CSV")
    p.set_defaults(func=cmd_estimate)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InputFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except LMWVError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
