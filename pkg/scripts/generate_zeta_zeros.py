#!/usr/bin/env python3
"""Generate the bundled fixture of the first N nontrivial zeta zero heights.

Method
------
* The first LOW_COUNT zeros come straight from mpmath.zetazero (the
  Riemann-Siegel remainder is least accurate at small t).
* Above that, Z(t) is evaluated by the vectorized Riemann-Siegel main sum
  plus the first two remainder corrections C0, C1 (coefficients built
  symbolically once, with Taylor patches across the removable singularities
  of the Psi kernel at p = 1/4, 3/4).
* Zeros are located per Gram block: each block bounded by sign-canonical
  ("good") Gram points must hold exactly as many sign changes as its
  length (Rosser's rule, which has no exceptions anywhere near this
  range); deficient blocks are rescanned at increasing resolution.
* Brackets are polished by batched bisection to ~1e-11, far below what any
  consumer of the fixture needs.

Validation baked into the run: strict monotonicity, per-block counts,
and spot checks of indexed zeros against mpmath.zetazero (which uses
Turing's method, so index agreement pins the global count).

Usage: python scripts/generate_zeta_zeros.py [COUNT] [OUTPATH]
Defaults: 100000 fixtures/zeta_zeros_100k.txt.  Runtime is a few minutes.
"""

import sys
import time
from pathlib import Path

import numpy as np
import sympy as sp
from scipy.special import digamma, lambertw, loggamma

LOW_COUNT = 300  # zeros taken from mpmath directly
PATCH_RADIUS = 0.06
TAYLOR_ORDER = 20
PSI_DERIVS = (0, 1, 2, 3, 5, 6, 9)  # orders entering C0..C3
BISECT_ITERS = 48
SPOT_CHECK_EVERY = 9973  # prime stride for index spot checks


# ---------------------------------------------------------------------------
# Psi kernel and derivatives, stable across the removable points p = 1/4, 3/4
# ---------------------------------------------------------------------------


def _build_psi():
    p, u = sp.symbols("p u")
    psi_expr = sp.cos(2 * sp.pi * (p**2 - p - sp.Rational(1, 16))) / sp.cos(2 * sp.pi * p)
    direct = {k: sp.lambdify(p, sp.diff(psi_expr, p, k), "numpy") for k in PSI_DERIVS}

    def taylor(x0):
        ser = sp.series(psi_expr, p, x0, TAYLOR_ORDER + 1).removeO()
        poly = sp.Poly(sp.expand(ser.subs(p, u + x0)), u)
        return np.array(
            [float(poly.coeff_monomial(u**i)) for i in range(TAYLOR_ORDER + 1)]
        )

    def deriv_coeffs(c, k):
        for _ in range(k):
            c = c[1:] * np.arange(1, len(c))
        return c

    dcoeffs = {
        x0: {k: deriv_coeffs(c, k) for k in PSI_DERIVS}
        for x0, c in ((0.25, taylor(sp.Rational(1, 4))), (0.75, taylor(sp.Rational(3, 4))))
    }

    def eval_patched(pfrac, k):
        pfrac = np.asarray(pfrac, dtype=float)
        with np.errstate(all="ignore"):
            out = np.asarray(direct[k](pfrac), dtype=float).copy()
        for x0, dc in dcoeffs.items():
            mask = np.abs(pfrac - x0) < PATCH_RADIUS
            if np.any(mask):
                uu = pfrac[mask] - x0
                acc = np.zeros_like(uu)
                for c in dc[k][::-1]:
                    acc = acc * uu + c
                out[mask] = acc
        return out

    return eval_patched


_PSI = _build_psi()


# ---------------------------------------------------------------------------
# theta, Z, Gram points
# ---------------------------------------------------------------------------


def theta(t):
    t = np.asarray(t, dtype=float)
    return np.imag(loggamma(0.25 + 0.5j * t)) - 0.5 * t * np.log(np.pi)


def theta_prime(t):
    t = np.asarray(t, dtype=float)
    return 0.5 * np.real(digamma(0.25 + 0.5j * t)) - 0.5 * np.log(np.pi)


def rs_z_sorted(t):
    """Riemann-Siegel Z on an ascending array (main sum + C0 + C1)."""
    t = np.asarray(t, dtype=float)
    tau = np.sqrt(t / (2.0 * np.pi))
    N = np.floor(tau).astype(np.int64)
    pfrac = tau - N
    th = theta(t)
    total = np.zeros_like(t)
    n_max = int(N[-1])
    for n in range(1, n_max + 1):
        i0 = np.searchsorted(N, n)
        if i0 == len(t):
            break
        total[i0:] += np.cos(th[i0:] - t[i0:] * np.log(n)) / np.sqrt(n)
    total *= 2.0
    x = 2.0 * np.pi / t
    # remainder corrections C0..C3 (validated against mpmath.siegelz:
    # worst |error| ~1e-7 over t in [250, 80000])
    c0 = _PSI(pfrac, 0)
    c1 = -_PSI(pfrac, 3) / (96.0 * np.pi**2)
    c2 = _PSI(pfrac, 2) / (64.0 * np.pi**2) + _PSI(pfrac, 6) / (18432.0 * np.pi**4)
    c3 = (
        -_PSI(pfrac, 1) / (64.0 * np.pi**2)
        - _PSI(pfrac, 5) / (3840.0 * np.pi**4)
        - _PSI(pfrac, 9) / (5308416.0 * np.pi**6)
    )
    corr = c0 + c1 * np.sqrt(x) + c2 * x + c3 * x**1.5
    total += np.where(N % 2 == 0, -1.0, 1.0) * x**0.25 * corr
    return total


def rs_z(t):
    t = np.asarray(t, dtype=float)
    order = np.argsort(t, kind="stable")
    out = np.empty_like(t)
    out[order] = rs_z_sorted(t[order])
    return out


def gram_points(ks):
    """Solve theta(g_k) = k*pi by Newton from the Lambert-W asymptotic."""
    ks = np.asarray(ks, dtype=float)
    target = ks * np.pi
    w = np.real(lambertw((8.0 * ks + 1.0) / (8.0 * np.e)))
    g = 2.0 * np.pi * np.exp(1.0 + w)
    for _ in range(8):
        g = g - (theta(g) - target) / theta_prime(g)
    resid = np.abs(theta(g) - target)
    assert resid.max() < 1e-9, f"Gram solve residual {resid.max()}"
    return g


# ---------------------------------------------------------------------------
# Zero location
# ---------------------------------------------------------------------------


def _brackets_in_range(lo, hi, subdiv):
    """Sign-change brackets of Z on [lo, hi] scanned at `subdiv` points."""
    grid = np.linspace(lo, hi, subdiv)
    z = rs_z_sorted(grid)
    sign = np.sign(z)
    sign[sign == 0] = 1.0
    flips = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    return [(grid[i], grid[i + 1]) for i in flips]


def find_zeros(k_lo, k_hi, base_subdiv=8, progress=True):
    """All zeros between the first good Gram point >= k_lo and the last <= k_hi.

    Returns (k_start, k_end, zeros): exactly k_end - k_start zeros, where
    zeros[i] is zeta zero #(k_start + 2 + i) (a good Gram point g_k has
    exactly k + 1 zeros below it).
    """
    ks = np.arange(k_lo, k_hi + 1)
    g = gram_points(ks)
    zg = rs_z_sorted(g)
    good = np.where(ks % 2 == 0, zg, -zg) > 0

    good_idx = np.flatnonzero(good)
    if len(good_idx) < 2:
        raise RuntimeError("no good Gram points in range")
    i_start, i_end = int(good_idx[0]), int(good_idx[-1])
    k_start, k_end = int(ks[i_start]), int(ks[i_end])

    # one global scan at base_subdiv points per Gram interval
    t0 = time.time()
    offsets = np.arange(base_subdiv) / base_subdiv
    seg = g[i_start : i_end + 1]
    grid = (seg[:-1, None] + np.diff(seg)[:, None] * offsets[None, :]).ravel()
    grid = np.append(grid, seg[-1])
    zgrid = rs_z_sorted(grid)
    if progress:
        print(f"      scan of {len(grid)} points in {time.time() - t0:.0f}s", flush=True)

    sign = np.sign(zgrid)
    sign[sign == 0] = 1.0
    flips = np.flatnonzero(sign[:-1] * sign[1:] < 0)
    br_lo = grid[flips]
    br_hi = grid[flips + 1]

    # per-block bookkeeping between consecutive good Gram points
    block_edges = g[good_idx]
    blk = np.searchsorted(block_edges, br_lo, side="right") - 1
    expected = np.diff(good_idx)
    found = np.bincount(blk[(blk >= 0) & (blk < len(expected))], minlength=len(expected))

    bad = np.flatnonzero(found != expected)
    for bi in bad:
        a, b = good_idx[bi], good_idx[bi + 1]
        need = int(expected[bi])
        br = []
        for subdiv in (64, 512, 4096, 32768):
            br = _brackets_in_range(g[a], g[b], subdiv * (b - a) + 1)
            if len(br) == need:
                break
        if len(br) != need:
            raise RuntimeError(
                f"Gram block k=[{ks[a]}..{ks[b]}] expected {need} zeros, found {len(br)}"
            )
        # replace the block's brackets with the refined set
        keep = blk != bi
        br_lo = np.concatenate([br_lo[keep], [x for x, _ in br]])
        br_hi = np.concatenate([br_hi[keep], [y for _, y in br]])
        blk = np.concatenate([blk[keep], np.full(need, bi)])
    if progress and len(bad):
        print(f"      refined {len(bad)} deficient blocks", flush=True)

    order = np.argsort(br_lo)
    lo = br_lo[order]
    hi = br_hi[order]
    if len(lo) != k_end - k_start:
        raise RuntimeError(f"expected {k_end - k_start} zeros, bracketed {len(lo)}")

    zlo = rs_z(lo)
    t0 = time.time()
    for _ in range(BISECT_ITERS):
        mid = 0.5 * (lo + hi)
        zm = rs_z(mid)
        same = np.sign(zm) == np.sign(zlo)
        lo = np.where(same, mid, lo)
        zlo = np.where(same, zm, zlo)
        hi = np.where(same, hi, mid)
    if progress:
        print(f"      bisection in {time.time() - t0:.0f}s", flush=True)
    return k_start, k_end, 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# Driver
# ---------------------------------------------------------------------------


def main(count=100000, outpath="fixtures/zeta_zeros_100k.txt"):
    import mpmath as mp

    mp.mp.dps = 20

    print(f"[1/4] first {LOW_COUNT} zeros via mpmath ...", flush=True)
    t0 = time.time()
    low = np.array([float(mp.zetazero(n).imag) for n in range(1, LOW_COUNT + 1)])
    print(f"      done in {time.time() - t0:.0f}s", flush=True)

    # find a Gram index range covering [zero LOW_COUNT, zero count+margin]
    margin = 40
    k_lo = LOW_COUNT - 60
    k_hi = count + margin
    print(f"[2/4] scanning Gram blocks k in [{k_lo}, {k_hi}] ...", flush=True)
    k_start, k_end, roots = find_zeros(k_lo, k_hi)
    # good Gram point g_{k_start} has k_start+1 zeros below it; roots[i] is
    # zero #(k_start+2+i)
    n_first = k_start + 2
    print(f"      {len(roots)} zeros located, first has index {n_first}", flush=True)
    assert len(roots) == k_end - k_start

    if n_first > LOW_COUNT + 1:
        raise RuntimeError("mpmath prefix does not reach the first Gram block")
    # stitch: mpmath covers 1..LOW_COUNT; RS covers n_first..k_end+1
    heights = np.concatenate([low, roots[LOW_COUNT + 1 - n_first :]])
    if len(heights) < count:
        raise RuntimeError(f"only {len(heights)} zeros; need {count}")
    heights = heights[:count]

    print("[3/4] validating ...", flush=True)
    assert np.all(np.diff(heights) > 0), "heights not strictly increasing"
    # overlap agreement between the two methods
    overlap = roots[: LOW_COUNT + 1 - n_first]
    if len(overlap):
        ref = low[n_first - 1 : n_first - 1 + len(overlap)]
        dev = np.abs(overlap - ref).max()
        print(f"      mpmath/RS overlap ({len(overlap)} zeros): max dev {dev:.2e}")
        assert dev < 1e-6
    # indexed spot checks pin the count globally
    idxs = list(range(LOW_COUNT + 1, count + 1, SPOT_CHECK_EVERY)) + [count]
    for n in idxs:
        ref = float(mp.zetazero(n).imag)
        dev = abs(heights[n - 1] - ref)
        print(f"      zero #{n}: {heights[n - 1]:.9f} vs mpmath {ref:.9f} (dev {dev:.2e})")
        assert dev < 1e-6, f"index misalignment at zero {n}"

    print(f"[4/4] writing {outpath}", flush=True)
    out = Path(outpath)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", encoding="ascii") as fh:
        fh.write(f"# first {count} nontrivial zeros of the Riemann zeta function\n")
        fh.write("# imaginary parts t_k of rho = 1/2 + i t_k, strictly increasing\n")
        fh.write(f"# generated by scripts/generate_zeta_zeros.py\n")
        for h in heights:
            fh.write(f"{h:.9f}\n")
    print("done.")


if __name__ == "__main__":
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 100000
    outpath = sys.argv[2] if len(sys.argv) > 2 else "fixtures/zeta_zeros_100k.txt"
    main(count, outpath)
