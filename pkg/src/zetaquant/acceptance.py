"""The acceptance suite: every top-level verification criterion as a library
function returning a Report, so the pytest gate and the CLI `verify-all`
command run the identical checks.

Tolerances are pinned here and nowhere else.
"""

from __future__ import annotations

import time
from typing import Callable, List, Optional

import numpy as np

from . import bergman, ffcurves, opmodel, recon, regdet
from .opmodel import TailModel, ZeroMultiset
from .report import Report, check_row

DIM_RANGE = range(2, 7)
ORDER_RANGE = range(1, 5)
MATRICES_PER_CELL = 100

GAMMA_TERMS = 10**6
XI_ZEROS_FULL = 10**5
XI_ZEROS_FAST = 10**3
EULER_BOUND = 10**4
SINC_PAIRS = 10**6

TOL_MATRIX_ROUTES = 1e-10
TOL_BERGMAN_NORM = 1e-6
TOL_GAMMA_ROUTES = 1e-12
TOL_SLOPE = 0.03
TOL_TRANSLATION = 1e-10
TOL_GAMMA_RECON = 1e-5
TOL_GAMMA_FUNCEQ = 2e-5
TOL_EULER_S2 = 5e-5
TOL_EULER_S3 = 1e-6
TOL_XI = 1e-3
TOL_XI_SYMMETRY = 2e-3
TOL_XI_FAST = 3e-2
TOL_ZETA = 2e-3
TOL_ZETA_VS_EULER = 2.1e-3  # zeta budget + Euler tail at s=2
TOL_HADAMARD = 1e-5
TOL_WEIL_MODULI = 1e-12
TOL_CURVE_DETFORM = 1e-10


def _timed(fn: Callable[[Report], None], report: Report) -> Report:
    t0 = time.perf_counter()
    fn(report)
    report.runtime_ms = (time.perf_counter() - t0) * 1e3
    return report


def _random_matrix(rng: np.random.Generator, dim: int) -> regdet.DenseMatrix:
    """Random complex matrix scaled to spectral radius ~0.8."""
    raw = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = float(np.abs(np.linalg.eigvals(raw)).max())
    return regdet.DenseMatrix(0.8 * raw / rho)


def criterion_determinant_identities(seed: int = 0) -> Report:
    """Criterion 1: matrix det_p routes, det/trace relation, exp-trace identity."""
    report = Report("acceptance.determinant-identities", {"seed": seed})

    def body(rep: Report):
        rng = np.random.default_rng(seed)
        worst_routes = 0.0
        for dim in DIM_RANGE:
            for n in ORDER_RANGE:
                for _ in range(MATRICES_PER_CELL):
                    A = _random_matrix(rng, dim)
                    mu = complex(rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9))
                    lams = np.linalg.eigvals(A.entries)
                    prod = 1.0 + 0.0j
                    for lam in lams:
                        prod *= regdet.regdet_term(n, complex(lam), mu)
                    muA = regdet.DenseMatrix(mu * A.entries)
                    direct = complex(
                        np.linalg.det(
                            np.eye(dim, dtype=complex) + regdet.rn_matrix(muA, n).entries
                        )
                    )
                    scale = max(abs(prod), abs(direct), 1e-300)
                    worst_routes = max(worst_routes, abs(prod - direct) / scale)
        rep.add(check_row("matrix_det_p route disagreement (worst)", worst_routes, 0.0, TOL_MATRIX_ROUTES))

        worst_tr = 0.0
        for dim in DIM_RANGE:
            for n in ORDER_RANGE:
                A = _random_matrix(rng, dim)
                r = regdet.det_trace_relation_check(A, 0.35 - 0.2j, n)
                worst_tr = max(worst_tr, r.rel_discrepancy)
        rep.add(check_row("det/trace relation discrepancy (worst)", worst_tr, 0.0, TOL_MATRIX_ROUTES))

        worst_et = 0.0
        for dim in DIM_RANGE:
            for _ in range(20):
                A = _random_matrix(rng, dim)  # rho = 0.8
                t = complex(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4))
                if abs(t) * 0.8 >= 0.5:
                    t *= 0.5 / (abs(t) * 0.8)
                r = regdet.exp_trace_identity_check(A, t, terms=60)
                worst_et = max(worst_et, r.rel_discrepancy)
        rep.add(check_row("exp-trace identity discrepancy (worst)", worst_et, 0.0, TOL_MATRIX_ROUTES))

    return _timed(body, report)


def criterion_bergman() -> Report:
    """Criterion 2: norms vs quadrature, weight routes, slopes, power norms, translation."""
    report = Report("acceptance.bergman", {})

    def body(rep: Report):
        worst = 0.0
        for alpha in (0.3, 0.5, 1.0):
            for n in range(11):
                closed = bergman.weight_norm_sq(n, alpha)
                quad = bergman.weight_norm_sq_quadrature(n, alpha, tol=1e-9)
                worst = max(worst, abs(closed - quad) / quad)
        rep.add(check_row("weight_norm_sq vs quadrature (worst rel)", worst, 0.0, TOL_BERGMAN_NORM))

        worst = 0.0
        for alpha in (0.3, 0.5, 1.0):
            route1 = bergman.shift_weights(bergman.BergmanParams(alpha), 1001)
            m, e = bergman.weight_norm_frexp(np.arange(1002), alpha)
            n1 = np.arange(1.0, 1002.0)
            route2 = n1 * np.sqrt(m[:-1] / m[1:] * 2.0 ** (e[:-1] - e[1:]).astype(float))
            worst = max(worst, float(np.abs(route1 / route2 - 1.0).max()))
        rep.add(check_row("gamma_n two routes (worst rel)", worst, 0.0, TOL_GAMMA_ROUTES))

        for alpha in (0.4, 0.5, 1.0):
            slope = bergman.gamma_asymptotic_fit(bergman.BergmanParams(alpha), 10**3, 10**4)
            rep.add(check_row(f"slope fit alpha={alpha}", slope, 1.0 - 1.0 / alpha, TOL_SLOPE))

        for alpha in (0.4, 0.5, 1.0):
            tr = bergman.shift_truncation(bergman.BergmanParams(alpha), 2000)
            rpt = bergman.truncation_norm_checks(tr, 20)
            rep.add(
                check_row(
                    f"||T^k|| <= optimized bound, k<=20, alpha={alpha}",
                    float(rpt.all_below_bound),
                    1.0,
                    0.0,
                )
            )

        cubic = [0.3 - 0.1j, 1.0, -2.0 + 0.5j, 0.25j]
        worst = 0.0
        for alpha in (0.4, 1.0):
            tr = bergman.shift_truncation(bergman.BergmanParams(alpha), 24)
            for s in (1.0, 2.0 + 1.0j):
                r = bergman.translation_check(tr, s, cubic)
                worst = max(worst, r.max_coeff_discrepancy)
        rep.add(check_row("translation check on cubics (worst)", worst, 0.0, TOL_TRANSLATION))

    return _timed(body, report)


def criterion_gamma() -> Report:
    """Criterion 3: Gamma reconstruction against the Lanczos oracle."""
    report = Report("acceptance.gamma", {"terms": GAMMA_TERMS})

    def body(rep: Report):
        for z in (0.5, 1.0, 1.5, 2.0 + 1.0j):
            got = recon.gamma_reconstruct(z, GAMMA_TERMS).value
            rep.add(check_row(f"Gamma({z})", got, recon.gamma_oracle(z), TOL_GAMMA_RECON))
        for z in (0.5, 1.5, 2.0 + 1.0j):
            num = recon.gamma_reconstruct(z + 1.0, GAMMA_TERMS).value
            den = recon.gamma_reconstruct(z, GAMMA_TERMS).value
            rep.add(check_row(f"Gamma({z}+1)/Gamma({z})", num / den, z, TOL_GAMMA_FUNCEQ))

    return _timed(body, report)


def criterion_euler() -> Report:
    """Criterion 4: operator Euler product against zeta."""
    report = Report("acceptance.euler", {"prime_bound": EULER_BOUND})

    def body(rep: Report):
        v2 = recon.euler_product_det(2.0, EULER_BOUND)
        rep.add(check_row("euler(2) vs pi^2/6", v2, np.pi**2 / 6.0, TOL_EULER_S2))
        v3 = recon.euler_product_det(3.0, EULER_BOUND)
        rep.add(check_row("euler(3) vs zeta oracle", v3, recon.zeta_oracle(3.0), TOL_EULER_S3))

    return _timed(body, report)


_XI_POINTS = (0.5, 1.0, 2.0, 3.0, 0.5 + 1.0j, 0.5 + 5.0j)


def criterion_xi(zeros_path, n_zeros: int = XI_ZEROS_FULL, tol: Optional[float] = None) -> Report:
    """Criterion 5: xi reconstruction from zero heights (full or relaxed)."""
    if tol is None:
        tol = TOL_XI if n_zeros >= XI_ZEROS_FULL else TOL_XI_FAST
    sym_tol = TOL_XI_SYMMETRY if n_zeros >= XI_ZEROS_FULL else TOL_XI_FAST
    report = Report("acceptance.xi", {"zeros": str(zeros_path), "terms": n_zeros})

    def body(rep: Report):
        data = recon.load_zero_dataset(zeros_path)
        for s in _XI_POINTS:
            got = recon.xi_reconstruct(s, data, n_zeros).value
            rep.add(check_row(f"xi({s})", got, recon.xi_oracle(s), tol))
        exact0 = recon.xi_reconstruct(0.0, data, n_zeros).value
        rep.add(check_row("xi(0) exact prefactor", exact0, 0.5, 0.0))
        for s in _XI_POINTS:
            a = recon.xi_reconstruct(s, data, n_zeros).value
            b = recon.xi_reconstruct(1.0 - s, data, n_zeros).value
            rep.add(check_row(f"symmetry xi({s}) vs xi(1-{s})", a, b, sym_tol))

    return _timed(body, report)


def criterion_zeta(
    zeros_path,
    n_zeros: int = XI_ZEROS_FULL,
    gamma_terms: int = GAMMA_TERMS,
    tol: Optional[float] = None,
) -> Report:
    """Criterion 6: the three-determinant zeta formula (numeric audit included)."""
    if tol is None:
        tol = TOL_ZETA if n_zeros >= XI_ZEROS_FULL else TOL_XI_FAST
    report = Report(
        "acceptance.zeta",
        {"zeros": str(zeros_path), "terms": n_zeros, "gamma_terms": gamma_terms},
    )

    def body(rep: Report):
        data = recon.load_zero_dataset(zeros_path)
        for s in (2.0, 3.0, 0.0, -1.0):
            got = recon.zeta_reconstruct(s, data, n_zeros, gamma_terms)
            rep.add(check_row(f"zeta({s})", got, recon.zeta_oracle(s), tol))
        at_minus2 = recon.zeta_reconstruct(-2.0, data, n_zeros, gamma_terms)
        rep.add(check_row("zeta(-2) exact zero", at_minus2, 0.0, 0.0))
        recon_2 = recon.zeta_reconstruct(2.0, data, n_zeros, gamma_terms)
        euler_2 = recon.euler_product_det(2.0, EULER_BOUND)
        rep.add(check_row("zeta(2) det form vs Euler product", recon_2, euler_2, tol + 1e-4))

    return _timed(body, report)


def criterion_hadamard(sinc_pairs: int = SINC_PAIRS, tol: Optional[float] = None) -> Report:
    """Criterion 7: quantized Hadamard factorization on fixtures."""
    if tol is None:
        tol = TOL_HADAMARD if sinc_pairs >= SINC_PAIRS else 1e-2
    report = Report("acceptance.hadamard", {"sinc_pairs": sinc_pairs})

    def body(rep: Report):
        data = recon.sinc_fixture(sinc_pairs)
        tail = TailModel.power_law(1.0)
        for z in (0.5, 1.5, 2.5j):
            got = recon.hadamard_reconstruct(data, z, 2 * sinc_pairs, tail=tail).value
            rep.add(check_row(f"sinc({z})", got, recon.sinc_oracle(z), tol))
        for z in (1.0, -3.0, 7.0):
            got = recon.hadamard_reconstruct(data, z, 2 * sinc_pairs, tail=tail).value
            rep.add(check_row(f"sinc({z}) exact zero", got, 0.0, 0.0))
        # p = 0 finite case collapses to the rational reconstruction
        zeros = ZeroMultiset.from_values([2.0, -4.0])
        had = recon.HadamardData(zeros, 1, (0.25,), 0.0)
        for z in (0.5, -1.25, 3.0 + 1.0j):
            a = recon.hadamard_reconstruct(had, z, 2).value
            b = recon.rational_reconstruct(zeros, None, 1, np.exp(0.25), z)
            rep.add(check_row(f"hadamard p=0 vs rational at {z}", a, b, 0.0))

    return _timed(body, report)


def criterion_curves(seed: int = 0) -> Report:
    """Criterion 8: curve zeta data, Weil RH, determinant form."""
    report = Report("acceptance.curves", {"seed": seed})

    def body(rep: Report):
        rng = np.random.default_rng(seed)
        # P^1 over F_3: exact series coefficients (q^{j+1}-1)/(q-1)
        f3 = ffcurves.field_make(3, 1)
        p1 = ffcurves.PlaneCurve(f3, {(0, 0, 1): 1}, "projective")
        counts = [ffcurves.count_points(p1, n) for n in range(1, 5)]
        series = ffcurves.zeta_series(counts, 3)
        expect = [(3 ** (j + 1) - 1) // 2 for j in range(5)]
        rep.add(check_row("P1/F3 series coefficients", float(series == expect), 1.0, 0.0))
        lz1 = ffcurves.local_zeta_from_counts(counts, 3)
        rep.add(check_row("P1/F3 genus", lz1.genus, 0.0, 0.0))

        for (p, expected_poly) in ((3, (1, 0, 3)), (5, (1, -2, 5))):
            fq = ffcurves.field_make(p, 1)
            cv = ffcurves.PlaneCurve(
                fq, {(0, 2): 1, (3, 0): -1, (1, 0): -1}, "affine", infinity_count=1
            )
            counts = [ffcurves.count_points(cv, n) for n in range(1, 5)]
            lz = ffcurves.local_zeta_from_counts(counts, p)
            rep.add(
                check_row(
                    f"E/F{p} numerator matches",
                    float(lz.numerator == expected_poly),
                    1.0,
                    0.0,
                )
            )
            wr = ffcurves.weil_rh_check(lz, TOL_WEIL_MODULI)
            rep.add(check_row(f"E/F{p} Weil moduli deviation", wr.max_rel_deviation, 0.0, TOL_WEIL_MODULI))
            rep.add(check_row(f"E/F{p} Weil bound", float(ffcurves.weil_bound_check(lz)), 1.0, 0.0))
            rep.add(
                check_row(
                    f"E/F{p} functional equation",
                    float(ffcurves.functional_equation_check(lz)),
                    1.0,
                    0.0,
                )
            )
            worst = 0.0
            for _ in range(20):
                s = complex(rng.uniform(1.5, 3.0), rng.uniform(-3.0, 3.0))
                r = ffcurves.curve_zeta_det_form(lz, s, rtol=TOL_CURVE_DETFORM)
                worst = max(worst, r.rel_discrepancy)
            rep.add(check_row(f"E/F{p} det form vs rational (worst rel)", worst, 0.0, TOL_CURVE_DETFORM))

    return _timed(body, report)


def criterion_classification() -> Report:
    """Criterion 9: trace-ideal classification of model sequences and gamma_n."""
    report = Report("acceptance.classification", {})

    def body(rep: Report):
        n = np.arange(1, 10**4 + 1, dtype=float)
        harmonic = opmodel.diagonal_operator(1.0 / n, tail=TailModel.power_law(1.0))
        cls = opmodel.classify(harmonic, 4)
        rep.add(check_row("1/n Hilbert-Schmidt", float(cls.is_hilbert_schmidt), 1.0, 0.0))
        rep.add(check_row("1/n not trace class", float(not cls.is_trace_class), 1.0, 0.0))
        sq = opmodel.diagonal_operator(1.0 / n**2, tail=TailModel.power_law(2.0))
        cls2 = opmodel.classify(sq, 4)
        rep.add(check_row("1/n^2 trace class", float(cls2.is_trace_class), 1.0, 0.0))

        for alpha in (0.35, 0.4, 0.45, 0.55, 0.65, 0.7):
            cls = bergman.gamma_ideal_class(bergman.BergmanParams(alpha), p_max=3)
            for p in (1, 2, 3):
                expected = alpha < p / (p + 1.0)
                rep.add(
                    check_row(
                        f"gamma_n in J_{p} at alpha={alpha}",
                        float(cls.in_Jp(p)),
                        float(expected),
                        0.0,
                    )
                )

    return _timed(body, report)


def criterion_rh_predicate(zeros_path) -> Report:
    """Criterion 10: self-adjointness predicate wiring (tests data reality only)."""
    report = Report("acceptance.rh-predicate", {"zeros": str(zeros_path)})

    def body(rep: Report):
        data = recon.load_zero_dataset(zeros_path)
        sub = recon.ZeroDataset(data.heights[:1000], data.source, 1000)
        op = recon.xihat_operator(sub)
        cls = opmodel.classify(op, 2, tol=0.0)
        rep.add(check_row("fixture data self-adjoint", float(cls.is_self_adjoint), 1.0, 0.0))
        op_bad = recon.xihat_operator(sub, extra_zeros=[5000.0 + 0.5j])
        cls_bad = opmodel.classify(op_bad, 2, tol=0.0)
        rep.add(check_row("synthetic complex height detected", float(not cls_bad.is_self_adjoint), 1.0, 0.0))

    return _timed(body, report)


def run_all(zeros_path, seed: int = 0, fast: bool = False) -> List[Report]:
    """Run every acceptance criterion; `fast` relaxes xi/zeta to 10^3 zeros."""
    n_zeros = XI_ZEROS_FAST if fast else XI_ZEROS_FULL
    gamma_terms = 10**5 if fast else GAMMA_TERMS
    sinc_pairs = 10**4 if fast else SINC_PAIRS
    return [
        criterion_determinant_identities(seed),
        criterion_bergman(),
        criterion_gamma() if not fast else _fast_gamma(),
        criterion_euler(),
        criterion_xi(zeros_path, n_zeros),
        criterion_zeta(zeros_path, n_zeros, gamma_terms),
        criterion_hadamard(sinc_pairs),
        criterion_curves(seed),
        criterion_classification(),
        criterion_rh_predicate(zeros_path),
    ]


def _fast_gamma() -> Report:
    report = Report("acceptance.gamma", {"terms": 10**5, "fast": True})

    def body(rep: Report):
        for z in (0.5, 1.0, 1.5, 2.0 + 1.0j):
            got = recon.gamma_reconstruct(z, 10**5).value
            rep.add(check_row(f"Gamma({z})", got, recon.gamma_oracle(z), 1e-4))

    return _timed(body, report)
