"""Command-line entry point.

Commands: expand, sign-density, distribution, asymptotics, selftest.
Exit codes: 0 all requested checks pass, 1 a check failed, 2 usage error,
3 internal error.  Results are deterministic and independent of --threads;
the flag only parallelizes independent experiments, which are re-collected
by key.

CSV schemas (also in README.md):
  sign-density:  form,m,X,n_unramified,count_pos,count_neg,count_zero,
                 freq_pos,freq_neg,freq_zero,pred_pos,pred_neg,pred_zero,
                 err_pos,err_neg,err_zero
  histogram:     bin_left,bin_right,count,reference_mass
  partial sums:  form,m,kind,delta_m,x,A,R
  probes:        form,m,kind,sigma,j,T,ratio_to_prev
"""

from __future__ import annotations

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Hashable, TypeVar

from . import asymptotics, reports, selftest, stats, sympower
from .forms import REGISTRY, RecipeError, expand, cache_path, resolve_form
from .hecke import theta_table

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INTERNAL = 3

K = TypeVar("K", bound=Hashable)
V = TypeVar("V")

_BIG_X_GATE = 2_000_000


def run_keyed(tasks: dict[K, Callable[[], V]], threads: int) -> dict[K, V]:
    """Run independent tasks, collecting results by key (thread-count neutral)."""
    if threads <= 1 or len(tasks) <= 1:
        return {k: fn() for k, fn in tasks.items()}
    with ThreadPoolExecutor(max_workers=threads) as pool:
        futures = {k: pool.submit(fn) for k, fn in tasks.items()}
        return {k: fut.result() for k, fut in futures.items()}


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"{text}: must be a positive integer")
    return value


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text}: expected comma-separated integers")


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t]
    except ValueError:
        raise argparse.ArgumentTypeError(f"{text}: expected comma-separated numbers")


def _block_range(text: str) -> range:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"{text}: expected LO:HI")
    return range(int(lo), int(hi) + 1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heckelab",
        description="Exact newform coefficients and sign/equidistribution experiments.",
        epilog="CSV schemas" + __doc__.split("CSV schemas", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, with_out: bool = True):
        p.add_argument("--cache-dir", default=None, help="override the coefficient cache directory")
        p.add_argument("--threads", type=_positive_int, default=1,
                       help="worker threads for independent experiments (results identical for any value)")
        if with_out:
            p.add_argument("--out-dir", default="reports", help="report output directory")
            p.add_argument("--format", choices=("csv", "json", "both"), default="both")

    p = sub.add_parser("expand", help="expand a form and write the coefficient cache")
    p.add_argument("--form", required=True, choices=sorted(REGISTRY))
    p.add_argument("--X", type=_positive_int, default=1_000_000)
    p.add_argument("--allow-big", action="store_true",
                   help="required for X > 2e6; prints a memory estimate first")
    common(p, with_out=False)

    p = sub.add_parser("sign-density", help="empirical vs predicted sign frequencies")
    p.add_argument("--form", required=True, choices=sorted(REGISTRY))
    p.add_argument("--m", type=_int_list, default=[1, 2, 3, 4], metavar="M1,M2,...")
    p.add_argument("--X", type=_positive_int, required=True)
    p.add_argument("--tolerance", type=float, default=0.01)
    common(p)

    p = sub.add_parser("distribution", help="KS test of the angle sample plus histogram")
    p.add_argument("--form", required=True, choices=sorted(REGISTRY))
    p.add_argument("--X", type=_positive_int, required=True)
    p.add_argument("--reference", choices=("auto",) + stats.REFERENCES, default="auto")
    p.add_argument("--bins", type=_positive_int, default=50)
    p.add_argument("--threshold", type=float, default=0.02)
    common(p)

    p = sub.add_parser("asymptotics", help="partial sums, Abel check, abscissa probe")
    p.add_argument("--form", required=True, choices=sorted(REGISTRY))
    p.add_argument("--m", type=_int_list, default=[1, 2], metavar="M1,M2,...")
    p.add_argument("--kind", choices=("sym", "power", "both"), default="both")
    p.add_argument("--x", type=_positive_int, required=True)
    p.add_argument("--checkpoints", type=_int_list, default=None)
    p.add_argument("--sigma", type=_float_list, default=[1.1, 0.9])
    p.add_argument("--beta", type=_float_list, default=[0.5, 1.0, 1.5])
    p.add_argument("--blocks", type=_block_range, default=None, metavar="LO:HI")
    p.add_argument("--ratio-tolerance", type=float, default=0.10,
                   help="relative tolerance of dyadic ratio geometric means")
    p.add_argument("--r-variation", type=float, default=0.15,
                   help="allowed relative change of R(x) between the last two checkpoints")
    p.add_argument("--residual", type=float, default=1e-9,
                   help="allowed Abel-identity residual")
    common(p)

    p = sub.add_parser("selftest", help="run the reduced-scale invariant suite")
    p.add_argument("--X", type=_positive_int, default=10_000)
    p.add_argument("--seed", type=int, default=20260811)
    common(p, with_out=False)

    return parser


def _load_series(args, form_name: str, X: int):
    form = resolve_form(form_name)
    path = cache_path(form, X, args.cache_dir)
    if not path.exists():
        print(f"cache miss for {form.name} at X={X}; expanding (writes {path})")
    return expand(form, X, cache_dir=args.cache_dir)


def cmd_expand(args) -> int:
    if args.X > _BIG_X_GATE and not args.allow_big:
        n = 1 << (2 * args.X - 1).bit_length()
        est_gb = (7 * n * 8 + args.X * 64) / 1e9
        print(
            f"X={args.X} is above the desk-scale default; expect roughly "
            f"{est_gb:.1f} GB of working memory. Re-run with --allow-big to proceed."
        )
        return EXIT_USAGE
    if args.X > _BIG_X_GATE:
        n = 1 << (2 * args.X - 1).bit_length()
        print(f"memory estimate: ~{(7 * n * 8 + args.X * 64) / 1e9:.1f} GB working set")
    series = _load_series(args, args.form, args.X)
    head = ", ".join(str(series.a[n]) for n in range(1, min(20, series.X) + 1))
    print(f"{series.form.name} (k={series.form.weight}, N={series.form.level}) X={series.X}")
    print(f"a(1..{min(20, series.X)}) = {head}")
    print(f"cache: {cache_path(series.form, series.X, args.cache_dir)}")
    return EXIT_OK


def cmd_sign_density(args) -> int:
    series = _load_series(args, args.form, args.X)
    tasks = {m: (lambda mm=m: stats.empirical_sign_density(series, mm)) for m in args.m}
    results = run_keyed(tasks, args.threads)
    reps = [results[m] for m in sorted(results)]
    out = Path(args.out_dir)
    if args.format in ("csv", "both"):
        reports.write_csv(
            out / f"sign_density_{args.form}.csv",
            reports.SIGN_DENSITY_HEADER,
            reports.sign_density_rows(reps),
        )
    if args.format in ("json", "both"):
        reports.write_json(
            out / f"sign_density_{args.form}.json", reports.sign_density_payload(reps)
        )
    ok = True
    for r in reps:
        verdict = "pass" if r.max_abs_error <= args.tolerance else "FAIL"
        ok &= r.max_abs_error <= args.tolerance
        print(
            f"{r.form_name} m={r.m}: freq=({r.frequencies[0]:.6f}, {r.frequencies[1]:.6f}, "
            f"{r.frequencies[2]:.6f}) predicted=({r.predicted[0]:.6f}, {r.predicted[1]:.6f}, "
            f"{r.predicted[2]:.6f}) max_err={r.max_abs_error:.6f} [{verdict}]"
        )
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_distribution(args) -> int:
    series = _load_series(args, args.form, args.X)
    reference = args.reference
    if reference == "auto":
        reference = "deuring_mixture" if series.form.cm else "sato_tate"
    table = theta_table(series)
    report = stats.ks_test(table, reference)
    out = Path(args.out_dir)
    if args.format in ("csv", "both"):
        reports.write_csv(
            out / f"histogram_{args.form}.csv",
            reports.HISTOGRAM_HEADER,
            stats.histogram_with_reference(table, bins=args.bins, reference=reference),
        )
    if args.format in ("json", "both"):
        reports.write_json(
            out / f"distribution_{args.form}.json",
            reports.distribution_payload(report, args.threshold),
        )
    ok = report.ks_statistic <= args.threshold
    print(
        f"{args.form} vs {reference}: KS={report.ks_statistic:.6f} over "
        f"{report.sample_size} angles (threshold {args.threshold}) "
        f"[{'pass' if ok else 'FAIL'}]"
    )
    if table.clamped:
        print(f"note: {table.clamped} angle(s) clamped to [-1, 1] by float rounding")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_asymptotics(args) -> int:
    series = _load_series(args, args.form, args.x)
    table = theta_table(series)
    kinds = ("sym", "power") if args.kind == "both" else (args.kind,)
    if args.checkpoints:
        checkpoints = args.checkpoints
    else:
        checkpoints = [10**e for e in range(4, 7) if 10**e <= args.x] or [args.x]
    blocks = args.blocks
    if blocks is None:
        hi = args.x.bit_length() - 2
        blocks = range(max(hi - 5, 1), hi + 1)

    def run_one(m: int, kind: str):
        stream = sympower.assemble_multiplicative(table, m, args.x, kind)
        rep = asymptotics.partial_sums(stream, checkpoints)
        probes = {
            sigma: asymptotics.abscissa_probe(stream, sigma, blocks)
            for sigma in args.sigma
        }
        residuals = {
            beta: asymptotics.partial_summation_check(
                stream, beta, min(10**5, args.x)
            )[2]
            for beta in args.beta
        }
        return rep, probes, residuals

    tasks = {
        (m, kind): (lambda mm=m, kk=kind: run_one(mm, kk))
        for m in args.m
        for kind in kinds
    }
    results = run_keyed(tasks, args.threads)

    ok = True
    all_reps = []
    probe_dicts = []
    checks: dict[str, dict] = {"ratio_geomean": {}, "r_variation": {}, "residuals": {}}
    csv_rows = []
    probe_csv_rows = []
    for (m, kind) in sorted(results):
        rep, probes, residuals = results[(m, kind)]
        all_reps.append(rep)
        csv_rows.extend(reports.partial_sum_rows([rep]))
        tag = f"{args.form} m={m} {kind}"
        for sigma, tjs in sorted(probes.items()):
            gm = asymptotics.geometric_mean(asymptotics.block_ratios(tjs))
            expected = 2.0 ** (1.0 - sigma)
            rel = abs(gm / expected - 1)
            good = rel <= args.ratio_tolerance
            ok &= good
            checks["ratio_geomean"][f"{tag} sigma={sigma}"] = {
                "geomean": gm, "expected": expected, "rel_error": rel, "passed": good,
            }
            probe_dicts.append(
                {"form": args.form, "m": m, "kind": kind, "sigma": sigma,
                 "blocks": [{"j": j, "T": t} for j, t in tjs], "geomean_ratio": gm}
            )
            probe_csv_rows.extend(reports.probe_rows(args.form, m, kind, sigma, tjs))
            print(f"{tag} sigma={sigma}: ratio geomean {gm:.4f} vs 2^{1-sigma:+.2f}="
                  f"{expected:.4f} [{'pass' if good else 'FAIL'}]")
        for beta, residual in sorted(residuals.items()):
            good = residual <= args.residual
            ok &= good
            checks["residuals"][f"{tag} beta={beta}"] = {
                "residual": residual, "passed": good,
            }
            print(f"{tag} beta={beta}: Abel residual {residual:.2e} [{'pass' if good else 'FAIL'}]")
        if len(rep.checkpoints) >= 2:
            (x0, a0, r0), (x1, a1, r1) = rep.checkpoints[-2], rep.checkpoints[-1]
            variation = abs(r1 / r0 - 1)
            decreasing = all(
                a_prev / x_prev > a_next / x_next
                for (x_prev, a_prev, _), (x_next, a_next, _) in zip(
                    rep.checkpoints, rep.checkpoints[1:]
                )
            )
            good = variation <= args.r_variation and decreasing
            ok &= good
            checks["r_variation"][tag] = {
                "R_values": [r for _, _, r in rep.checkpoints],
                "variation": variation,
                "A_over_x_decreasing": decreasing,
                "passed": good,
            }
            print(
                f"{tag}: R({x0})={r0:.5f} R({x1})={r1:.5f} variation {variation:.1%}, "
                f"A(x)/x decreasing: {decreasing} [{'pass' if good else 'FAIL'}]"
            )
    out = Path(args.out_dir)
    if args.format in ("csv", "both"):
        reports.write_csv(out / f"partial_sums_{args.form}.csv",
                          reports.PARTIAL_SUM_HEADER, csv_rows)
        reports.write_csv(out / f"abscissa_probe_{args.form}.csv",
                          reports.PROBE_HEADER, probe_csv_rows)
    if args.format in ("json", "both"):
        reports.write_json(
            out / f"asymptotics_{args.form}.json",
            reports.asymptotics_payload(all_reps, probe_dicts, checks),
        )
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def cmd_selftest(args) -> int:
    results = selftest.run_selftest(X=args.X, seed=args.seed)
    worst = EXIT_OK
    for name, good, detail in results:
        print(f"{'PASS' if good else 'FAIL'} {name}: {detail}")
        if not good:
            worst = EXIT_CHECK_FAILED
    n_ok = sum(1 for _, good, _ in results if good)
    print(f"{n_ok}/{len(results)} checks passed")
    return worst


_COMMANDS = {
    "expand": cmd_expand,
    "sign-density": cmd_sign_density,
    "distribution": cmd_distribution,
    "asymptotics": cmd_asymptotics,
    "selftest": cmd_selftest,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, RecipeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except KeyboardInterrupt:
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - translate to the documented exit code
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
