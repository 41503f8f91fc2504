"""Command-line surface: drives every module and emits JSON/CSV verification
reports.

Exit codes: 0 all checks pass, 1 a check failed, 2 usage error.  The JSON
output is canonical (fixed key order, %.15g floats) so reports are diffable
and round-trip byte-identically.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from . import acceptance, bergman, ffcurves, opmodel, recon, regdet
from .errors import ZetaquantError
from .opmodel import TailModel
from .report import Report, check_row, info_row, report_csv, report_json

DEFAULT_ZEROS = Path("fixtures/zeta_zeros_100k.txt")


def parse_complex(text: str) -> complex:
    """Parse '2', '-0.5+3i', '2.5i', '1-2j' into a complex number."""
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _points(text: str):
    return [parse_complex(tok) for tok in text.split(",") if tok.strip()]


def _alphas(text: str):
    return [float(tok) for tok in text.split(",") if tok.strip()]


def parse_tail(text: str) -> TailModel:
    if text == "finite":
        return TailModel.finite()
    if text.startswith("power:"):
        return TailModel.power_law(float(text.split(":", 1)[1]))
    if text.startswith("declared:"):
        return TailModel.declared(int(text.split(":", 1)[1]))
    raise argparse.ArgumentTypeError(
        f"tail must be 'finite', 'power:KAPPA' or 'declared:P', got {text!r}"
    )


def _emit(report: Report, fmt: str) -> int:
    if fmt == "csv":
        sys.stdout.write(report_csv(report))
    else:
        sys.stdout.write(report_json(report))
    return 0 if report.passed else 1


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------


def cmd_regdet(args) -> int:
    if args.diag is not None:
        diag = _points(args.diag)
    elif args.diag_file is not None:
        diag = [parse_complex(line) for line in Path(args.diag_file).read_text().split()]
    else:
        print("regdet: need --diag or --diag-file", file=sys.stderr)
        return 2
    op = opmodel.diagonal_operator(diag, tail=args.tail)
    report = Report(
        "regdet",
        {
            "diagonal_length": len(diag),
            "order": args.order,
            "z": {"re": complex(args.z).real, "im": complex(args.z).imag},
            "pairing": args.pairing,
            "tail": str(args.tail),
        },
    )
    t0 = time.perf_counter()
    n = args.terms if args.terms else len(diag)
    res = regdet.det_p(op, regdet.RegDetRequest(args.order, args.z, n, args.pairing))
    report.add(info_row(f"det_{args.order}(I - zD)", res.value))
    report.add(info_row("tail_estimate", res.tail_estimate))
    if res.zero_index is not None:
        report.add(info_row("annihilating_index", float(res.zero_index)))
    cls = opmodel.classify(op, p_max=max(args.order, 4))
    report.add(info_row("operator_norm", opmodel.operator_norm(op)))
    report.add(info_row("p_star", float(cls.p_star if cls.p_star is not None else -1)))
    report.runtime_ms = (time.perf_counter() - t0) * 1e3
    return _emit(report, args.format)


def cmd_bergman(args) -> int:
    report = Report(
        "bergman",
        {"alpha": args.alpha, "n_max": args.n_max, "truncation": args.truncation, "k_max": args.k_max},
    )
    t0 = time.perf_counter()
    for alpha in args.alpha:
        params = bergman.BergmanParams(alpha)
        worst = 0.0
        for n in range(args.n_max + 1):
            closed = bergman.weight_norm_sq(n, alpha)
            quad = bergman.weight_norm_sq_quadrature(n, alpha, tol=1e-9)
            worst = max(worst, abs(closed - quad) / quad)
        report.add(check_row(f"norm vs quadrature alpha={alpha} (worst rel)", worst, 0.0, args.tol or 1e-6))
        tr = bergman.shift_truncation(params, args.truncation)
        chk = bergman.truncation_norm_checks(tr, args.k_max)
        report.add(
            check_row(
                f"power norms below bound alpha={alpha}",
                float(chk.all_below_bound),
                1.0,
                0.0,
            )
        )
        if alpha < 1.0:
            slope = bergman.gamma_asymptotic_fit(params, 10**3, 10**4)
            report.add(check_row(f"slope alpha={alpha}", slope, 1.0 - 1.0 / alpha, 0.03))
    report.runtime_ms = (time.perf_counter() - t0) * 1e3
    return _emit(report, args.format)


def cmd_gamma(args) -> int:
    report = Report("gamma", {"points": [str(p) for p in args.points], "terms": args.terms})
    t0 = time.perf_counter()
    tol = args.tol or 1e-5
    for z in args.points:
        got = recon.gamma_reconstruct(z, args.terms)
        report.add(check_row(f"Gamma({z})", got.value, recon.gamma_oracle(z), tol))
    report.runtime_ms = (time.perf_counter() - t0) * 1e3
    return _emit(report, args.format)


def cmd_euler(args) -> int:
    report = Report("euler", {"points": [str(p) for p in args.points], "bound": args.bound})
    t0 = time.perf_counter()
    tol = args.tol or 5e-5
    for s in args.points:
        got = recon.euler_product_det(s, args.bound)
        report.add(check_row(f"euler_product({s})", got, recon.zeta_oracle(s), tol))
    report.runtime_ms = (time.perf_counter() - t0) * 1e3
    return _emit(report, args.format)


def cmd_xi(args) -> int:
    report = Report(
        "xi", {"points": [str(p) for p in args.points], "zeros": str(args.zeros), "terms": args.terms}
    )
    t0 = time.perf_counter()
    data = recon.load_zero_dataset(args.zeros)
    n = min(args.terms, data.count)
    tol = args.tol or (1e-3 if n >= 10**5 else 3e-2)
    for s in args.points:
        got = recon.xi_reconstruct(s, data, n)
        report.add(check_row(f"xi({s})", got.value, recon.xi_oracle(s), tol))
        if args.symmetry:
            other = recon.xi_reconstruct(1.0 - s, data, n)
            report.add(check_row(f"xi({s}) vs xi(1-s)", got.value, other.value, 2 * tol))
    op = recon.xihat_operator(recon.ZeroDataset(data.heights[:n], data.source, n))
    cls = opmodel.classify(op, 2, tol=0.0)
    report.add(check_row("xi-hat data self-adjoint", float(cls.is_self_adjoint), 1.0, 0.0))
    report.runtime_ms = (time.perf_counter() - t0) * 1e3
    return _emit(report, args.format)


def cmd_zeta(args) -> int:
    report = Report(
        "zeta",
        {
            "points": [str(p) for p in args.points],
            "zeros": str(args.zeros),
            "terms": args.terms,
            "gamma_terms": args.gamma_terms,
        },
    )
    t0 = time.perf_counter()
    data = recon.load_zero_dataset(args.zeros)
    n = min(args.terms, data.count)
    tol = args.tol or 2e-3
    for s in args.points:
        got = recon.zeta_reconstruct(s, data, n, args.gamma_terms)
        oracle = recon.zeta_oracle(s)
        report.add(check_row(f"zeta({s})", got, oracle, tol))
    report.runtime_ms = (time.perf_counter() - t0) * 1e3
    return _emit(report, args.format)


_HADAMARD_FIXTURES = ("sinc", "one-minus-z", "exp-poly")


def cmd_hadamard(args) -> int:
    report = Report(
        "hadamard",
        {"fixture": args.fixture, "points": [str(p) for p in args.points], "terms": args.terms},
    )
    t0 = time.perf_counter()
    tol = args.tol or 1e-5
    if args.fixture == "sinc":
        pairs = args.terms // 2
        data = recon.sinc_fixture(pairs)
        tail = TailModel.power_law(1.0)
        oracle = recon.sinc_oracle
        n = 2 * pairs
    elif args.fixture == "one-minus-z":
        data = recon.HadamardData(opmodel.ZeroMultiset.from_values([1.0]), 0, (), 0.0)
        tail = None
        oracle = lambda z: 1.0 - complex(z)
        n = 1
    else:  # exp-poly: e^z (1-z), order 1, zero at 1, g = 0 (det_2 carries e^z)
        data = recon.HadamardData(opmodel.ZeroMultiset.from_values([1.0]), 0, (), 1.0)
        tail = None
        oracle = lambda z: np.exp(complex(z)) * (1.0 - complex(z))
        n = 1
    for z in args.points:
        got = recon.hadamard_reconstruct(data, z, n, tail=tail)
        report.add(check_row(f"{args.fixture}({z})", got.value, oracle(z), tol))
    report.runtime_ms = (time.perf_counter() - t0) * 1e3
    return _emit(report, args.format)


def cmd_curve_zeta(args) -> int:
    report = Report("curve-zeta", {"curve": str(args.curve), "counts": args.counts})
    t0 = time.perf_counter()
    curve = ffcurves.load_curve_file(args.curve)
    counts = [ffcurves.count_points(curve, n) for n in range(1, args.counts + 1)]
    lz = ffcurves.local_zeta_from_counts(counts, curve.base.q, curve.genus_hint)
    for n, y in enumerate(counts, start=1):
        report.add(info_row(f"Y_{n}", float(y)))
    for i, c in enumerate(lz.numerator):
        report.add(info_row(f"P_coeff_{i}", float(c)))
    report.add(info_row("genus", float(lz.genus)))
    wr = ffcurves.weil_rh_check(lz, args.tol or 1e-12)
    report.add(check_row("weil moduli deviation", wr.max_rel_deviation, 0.0, args.tol or 1e-12))
    report.add(check_row("weil bound", float(ffcurves.weil_bound_check(lz)), 1.0, 0.0))
    report.add(
        check_row("functional equation", float(ffcurves.functional_equation_check(lz)), 1.0, 0.0)
    )
    regen = ffcurves.counts_from_numerator(lz, len(counts))
    report.add(check_row("counts regenerated from P", float(regen == counts), 1.0, 0.0))
    for s in args.points or [2.0]:
        r = ffcurves.curve_zeta_det_form(lz, s)
        report.add(check_row(f"det form vs rational at s={s}", r.value, r.cross_check, 1e-10))
    report.runtime_ms = (time.perf_counter() - t0) * 1e3
    return _emit(report, args.format)


def cmd_verify_all(args) -> int:
    reports = acceptance.run_all(args.zeros, seed=args.seed, fast=args.fast)
    ok = True
    out = []
    for rep in reports:
        ok = ok and rep.passed
        out.append(rep.to_jsonable())
        for row in rep.values:
            status = "PASS" if row.passed else "FAIL"
            disc = f" disc={row.disc:.3g}" if row.disc is not None else ""
            tol = f" tol={row.tol:g}" if row.tol is not None else ""
            print(f"[{status}] {rep.command}: {row.label}{disc}{tol}", file=sys.stderr)
    from .report import dumps_canonical

    if args.format == "json":
        sys.stdout.write(dumps_canonical({"command": "verify-all", "reports": out, "pass": ok}) + "\n")
    else:
        for rep in reports:
            sys.stdout.write(report_csv(rep))
    return 0 if ok else 1


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="zetaquant",
        description="Operator-determinant reconstructions and their verification reports.",
    )
    ap.add_argument("--format", choices=("json", "csv"), default="json")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("regdet", help="regularized determinant of an explicit diagonal")
    p.add_argument("--diag", help="comma-separated diagonal entries")
    p.add_argument("--diag-file", help="file with one diagonal entry per line")
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--z", type=parse_complex, default=complex(1.0))
    p.add_argument("--terms", type=int, default=0, help="truncation (default: full diagonal)")
    p.add_argument("--pairing", choices=regdet._PAIRINGS, default="as-stored")
    p.add_argument("--tail", type=parse_tail, default=TailModel.finite())
    p.set_defaults(func=cmd_regdet)

    p = sub.add_parser("bergman", help="weighted Bergman space checks over an alpha grid")
    p.add_argument("--alpha", type=_alphas, default=[0.3, 0.5, 1.0])
    p.add_argument("--n-max", type=int, default=10)
    p.add_argument("--truncation", type=int, default=2000)
    p.add_argument("--k-max", type=int, default=20)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_bergman)

    p = sub.add_parser("gamma", help="Gamma reconstruction vs the Lanczos oracle")
    p.add_argument("--points", type=_points, default=[0.5, 1.0, 1.5])
    p.add_argument("--terms", type=int, default=10**6)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_gamma)

    p = sub.add_parser("euler", help="Euler product over primes vs the zeta oracle")
    p.add_argument("--points", type=_points, default=[2.0])
    p.add_argument("--bound", type=int, default=10**4)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_euler)

    p = sub.add_parser("xi", help="completed-zeta reconstruction from zero heights")
    p.add_argument("--points", type=_points, default=[0.5, 1.0, 2.0])
    p.add_argument("--zeros", default=DEFAULT_ZEROS)
    p.add_argument("--terms", type=int, default=10**5)
    p.add_argument("--symmetry", action="store_true", help="also check xi(s) = xi(1-s)")
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_xi)

    p = sub.add_parser("zeta", help="three-determinant zeta reconstruction")
    p.add_argument("--points", type=_points, default=[2.0, 3.0, 0.0, -1.0])
    p.add_argument("--zeros", default=DEFAULT_ZEROS)
    p.add_argument("--terms", type=int, default=10**5)
    p.add_argument("--gamma-terms", type=int, default=10**6)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("hadamard", help="quantized Hadamard factorization fixtures")
    p.add_argument("--fixture", choices=_HADAMARD_FIXTURES, default="sinc")
    p.add_argument("--points", type=_points, default=[0.5, 1.5])
    p.add_argument("--terms", type=int, default=2 * 10**6)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_hadamard)

    p = sub.add_parser("curve-zeta", help="zeta of a curve over a finite field, from a curve file")
    p.add_argument("--curve", required=True)
    p.add_argument("--counts", type=int, default=4)
    p.add_argument("--points", type=_points, default=None)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_curve_zeta)

    p = sub.add_parser("verify-all", help="run the full acceptance suite")
    p.add_argument("--zeros", default=DEFAULT_ZEROS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fast", action="store_true", help="relaxed 10^3-zero variant (seconds)")
    p.set_defaults(func=cmd_verify_all)

    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except ZetaquantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
