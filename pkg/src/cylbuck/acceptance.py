"""Acceptance criteria: quantitative desk-scale checks of every headline claim.

Each criterion returns a CriterionResult with a PASS/FAIL verdict and a
one-line summary of the measured numbers; `run_all` drives them in order.
Tolerances are fixed here, not configurable: they are the package's exit
criteria.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional

import numpy as np

from . import critical_load as cl
from . import modes as modes_mod
from . import oracle as oracle_mod
from .material import IsotropicElasticity, coercivity_bound, energy_density, random_strain
from .spectral import ShellGeometry, WaveNumbers
from .trivial_branch import StVenantKirchhoff, linearized_displacement_slope, solve_radial_stretch

NU_DEFAULT = 0.3
L_DEFAULT = math.pi
SWEEP_H = (0.1, 0.03, 0.01, 0.003, 0.001)
KORN_H = (0.1, 0.05, 0.02, 0.01, 0.005)
ANSATZ_H = (1e-4, 3e-5, 1e-5)
EQUIV_H = (0.05, 0.02, 0.01, 0.005)
MODE_H = (0.03, 0.01, 0.003)
MODE_L = 2 * math.pi  # finer axial lattice so both harmonics track the circle


def _seed() -> int:
    return int(os.environ.get("KOITER_SEED", "42"))


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: str

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number}: {self.name} -- {self.details}"


def _problem(h: float, nu: float = NU_DEFAULT, L: float = L_DEFAULT) -> cl.CriticalLoadProblem:
    return cl.CriticalLoadProblem(
        geom=ShellGeometry(h=h, L=L), elastic=IsotropicElasticity(nu=nu)
    )


@lru_cache(maxsize=8)
def _sweep_ratio_errors(nu: float, L: float):
    errs = []
    for h in SWEEP_H:
        p = _problem(h, nu, L)
        errs.append(abs(cl.sweep(p).strain / cl.classical_strain(p) - 1.0))
    return tuple(errs)


def criterion_1() -> CriterionResult:
    """Integer sweep converges to the classical strain formula."""
    errs = _sweep_ratio_errors(NU_DEFAULT, L_DEFAULT)
    at_001 = errs[SWEEP_H.index(0.01)]
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    passed = at_001 <= 0.05 and decreasing
    details = (
        f"|ratio-1| at h=0.01 is {at_001:.4f} (<= 0.05); sequence "
        + " > ".join(f"{e:.4f}" for e in errs)
        + (" decreasing" if decreasing else " NOT decreasing")
    )
    return CriterionResult(1, "classical formula convergence", passed, details)


def criterion_2(jobs: int = 1) -> CriterionResult:
    """Discretized-elasticity minimum agrees with and never exceeds the
    closed-form reduced objective."""
    h = 0.005
    p = _problem(h)
    res = cl.sweep(p)
    disc = oracle_mod.RadialDiscretization()
    om = oracle_mod.oracle_sweep(p.geom, p.elastic, disc, p.window(), jobs=jobs)
    agree = abs(om.value / res.strain - 1.0)
    at_winner = oracle_mod.min_rayleigh(
        oracle_mod.assemble_pencil(p.geom, p.elastic, p.wave_numbers(res.m, res.n), "phi_rz", disc)
    )
    below = at_winner <= res.strain * (1.0 + 1e-8)
    passed = agree <= 0.10 and below
    details = (
        f"window min {om.value:.6e} at (m={om.wn.m}, n={om.wn.n}) vs closed form "
        f"{res.strain:.6e}: rel gap {agree:.2e} (<= 0.1); at the winner the oracle "
        f"is {'below' if below else 'ABOVE'} (ratio-1 = {at_winner / res.strain - 1:.2e})"
    )
    return CriterionResult(2, "oracle independence", passed, details)


def criterion_3() -> CriterionResult:
    """Near-optimal integer pairs populate the Koiter circle.

    Evidence that the minimum is attained on the circle: at least five
    distinct pairs are simultaneously within 2% of the sweep minimum and
    within integer-rounding distance 1 of the circle.  (The 2% level set is
    wider than the unit tube -- the landscape is flat transverse to the
    circle -- so the tube condition selects among the near-optimal pairs.)
    """
    h = 0.001
    p = _problem(h)
    best = cl.sweep(p).strain
    R = p.koiter_radius
    near = 0
    on_circle = 0
    for wn in p.window_pairs():
        if cl.per_mode_strain(p, wn).value <= 1.02 * best:
            near += 1
            if abs(math.hypot(wn.m_hat - R, float(wn.n)) - R) <= 1.0:
                on_circle += 1
    passed = on_circle >= 5
    details = (
        f"{near} pairs within 2% of the minimum, of which {on_circle} lie "
        f"within circle distance 1 (need >= 5)"
    )
    return CriterionResult(3, "Koiter circle population", passed, details)


def criterion_4() -> CriterionResult:
    """Exact amplitude solve reproduces the closed-form axial amplitude."""
    rng = np.random.default_rng(_seed())
    worst = 0.0
    for _ in range(1000):
        nu = float(rng.uniform(-0.45, 0.45))
        el = IsotropicElasticity(nu=nu)
        m = int(rng.integers(1, 40))
        n = int(rng.integers(0, 40))
        L = float(rng.uniform(0.5, 10.0))
        at = float(rng.uniform(-5.0, 5.0))
        wn = WaveNumbers(m=m, n=n, L=L)
        mh = wn.m_hat
        want = -mh * (2 * nu + (nu + 1) * n * at) / (2 * mh**2 + (1 - nu) * n**2)
        got = cl.q0_argmin_az(wn, at, el)
        worst = max(worst, abs(got - want) / max(1.0, abs(want)))
    passed = worst <= 1e-12
    return CriterionResult(
        4, "axial amplitude closed form", passed, f"worst mismatch {worst:.2e} (<= 1e-12)"
    )


@lru_cache(maxsize=4)
def _korn_scan_values(jobs: int = 1):
    vals: Dict[str, List[float]] = {"korn": [], "theta_z": [], "r_z": []}
    disc = oracle_mod.RadialDiscretization()
    el = IsotropicElasticity(nu=NU_DEFAULT)
    for h in KORN_H:
        geom = ShellGeometry(h=h, L=L_DEFAULT)
        window = cl.CriticalLoadProblem(geom=geom, elastic=el).window()
        for est in oracle_mod.korn_mode_scan(geom, el, disc, window, jobs=jobs):
            if est.kind in vals:
                vals[est.kind].append(est.value)
    return {k: tuple(v) for k, v in vals.items()}


def criterion_5(jobs: int = 1) -> CriterionResult:
    """Korn-type ratios scale with the predicted powers of h."""
    targets = {"korn": 1.5, "theta_z": -0.5, "r_z": -1.0}
    vals = _korn_scan_values(jobs)
    slopes = {k: oracle_mod.fitted_slope(KORN_H, vals[k]) for k in targets}
    scan_ok = all(abs(slopes[k] - targets[k]) <= 0.15 for k in targets)

    ratios = [oracle_mod.ansatz_ratios(ShellGeometry(h=h, L=L_DEFAULT)) for h in ANSATZ_H]
    aslopes = {
        "korn": oracle_mod.fitted_slope(ANSATZ_H, [r.korn for r in ratios]),
        "theta_z": oracle_mod.fitted_slope(ANSATZ_H, [r.theta_z for r in ratios]),
        "r_z": oracle_mod.fitted_slope(ANSATZ_H, [r.r_z for r in ratios]),
    }
    ansatz_ok = all(abs(aslopes[k] - targets[k]) <= 0.2 for k in targets)
    passed = scan_ok and ansatz_ok
    details = (
        "mode-scan slopes "
        + ", ".join(f"{k}={slopes[k]:+.3f}" for k in targets)
        + " (targets 1.5/-0.5/-1.0 +-0.15); ansatz slopes "
        + ", ".join(f"{k}={aslopes[k]:+.3f}" for k in targets)
        + " (+-0.2)"
    )
    return CriterionResult(5, "Korn scalings", passed, details)


def criterion_6(jobs: int = 1) -> CriterionResult:
    """Reciprocal-quotient gap vanishes against the classical strain scale."""
    el = IsotropicElasticity(nu=NU_DEFAULT)
    disc = oracle_mod.RadialDiscretization()
    prods = []
    for h in EQUIV_H:
        geom = ShellGeometry(h=h, L=L_DEFAULT)
        p = cl.CriticalLoadProblem(geom=geom, elastic=el)
        scan = oracle_mod.equivalence_scan(geom, el, disc, p.window(), jobs=jobs)
        prods.append(cl.classical_strain(p) * scan.full_vs_rz)
    decreasing = all(b < a for a, b in zip(prods, prods[1:]))
    slope = oracle_mod.fitted_slope(EQUIV_H, prods)
    passed = decreasing and slope >= 0.3
    details = (
        "lambda_star * sup|1/R - 1/R1| = "
        + " > ".join(f"{v:.3e}" for v in prods)
        + f"; fitted slope {slope:+.3f} (>= 0.3, theory 0.5)"
    )
    return CriterionResult(6, "buckling-equivalence gap decay", passed, details)


def criterion_7() -> CriterionResult:
    """Pre-buckled radial stretch: slope and quadratic remainder."""
    rows = []
    ok = True
    for nu in (0.0, 0.3, 0.45):
        model = StVenantKirchhoff(IsotropicElasticity(nu=nu))
        slope_err = abs(linearized_displacement_slope(model) - nu)
        rem = max(
            abs(solve_radial_stretch(model, lam) - nu * lam) / lam**2
            for lam in np.geomspace(1e-4, 1e-2, 7)
        )
        ok = ok and slope_err <= 1e-6 and rem < 10.0
        rows.append(f"nu={nu}: |a'(0)-nu|={slope_err:.1e}, remainder C={rem:.2f}")
    return CriterionResult(7, "trivial branch", ok, "; ".join(rows))


def criterion_8() -> CriterionResult:
    """Admissible two-term mode: boundary traces and quotient convergence."""
    el = IsotropicElasticity(nu=NU_DEFAULT)
    errs = []
    trace_ok = True
    for h in MODE_H:
        spec = modes_mod.BucklingModeSpec(
            geom=ShellGeometry(h=h, L=MODE_L), elastic=el, alpha=0.5
        )
        field = modes_mod.synthesize(spec, r_nodes=5)
        trace_ok = trace_ok and field.boundary_trace_max() <= 1e-12 * field.scale()
        errs.append(abs(modes_mod.quotient_ratio(spec) - 1.0))
    decreasing = all(b < a for a, b in zip(errs, errs[1:]))
    passed = trace_ok and decreasing
    details = (
        f"traces {'vanish' if trace_ok else 'DO NOT vanish'} to 1e-12 relative; "
        "|ratio-1| = " + " > ".join(f"{e:.4f}" for e in errs)
        + (" decreasing" if decreasing else " NOT decreasing")
    )
    return CriterionResult(8, "two-term buckling mode", passed, details)


def criterion_9() -> CriterionResult:
    """Property suite: homogeneity, coercivity, decoupling, wall inequality,
    sandwich."""
    rng = np.random.default_rng(_seed())
    el = IsotropicElasticity(nu=NU_DEFAULT)
    checks: List[bool] = []

    # quadratic homogeneity
    for _ in range(200):
        e = random_strain(rng)
        c = float(rng.uniform(-3, 3))
        a = energy_density(el, e.scaled(c))
        b = c * c * energy_density(el, e)
        checks.append(abs(a - b) <= 1e-12 * max(abs(b), 1e-12))
    # coercivity sampling
    alpha = coercivity_bound(el)
    for _ in range(10_000):
        e = random_strain(rng)
        f2 = e.frob2()
        if f2 > 1e-12:
            checks.append(energy_density(el, e) >= alpha * f2 * (1 - 1e-12))
    # Parseval decoupling of the stiffness over distinct modes
    from numpy.polynomial import Polynomial

    from .spectral import FourierMode, RadialProfile, mode_energy

    geom = ShellGeometry(h=0.05, L=L_DEFAULT)
    modes = []
    for (m, n) in ((1, 2), (3, 2), (2, 5)):
        profs = [
            RadialProfile.from_polynomial(Polynomial(rng.uniform(-1, 1, size=3)))
            for _ in range(3)
        ]
        modes.append(
            FourierMode(wn=WaveNumbers(m=m, n=n, L=L_DEFAULT), fr=profs[0], ftheta=profs[1], fz=profs[2])
        )
    total = sum(mode_energy(geom, el, mo) for mo in modes)
    checks.append(total > 0)  # decoupling itself is asserted in the unit suite

    # wall integral inequality on random polynomials
    for _ in range(100):
        h = float(rng.uniform(0.01, 0.5))
        f = Polynomial(rng.uniform(-2, 2, size=6))
        F = f.integ()
        g = (F - F(1.0)) ** 2
        lo, hi = 1 - h / 2, 1 + h / 2
        lhs = g.integ()(hi) - g.integ()(lo)
        f2 = (f**2).integ()
        rhs = h**2 / 4.0 * (f2(hi) - f2(lo))
        checks.append(lhs <= rhs * (1 + 1e-12))

    # sandwich between the reduced and unreduced objectives
    for _ in range(100):
        nu = float(rng.uniform(-0.3, 0.45))
        ell = IsotropicElasticity(nu=nu)
        h = float(rng.uniform(1e-4, 0.1))
        wn = WaveNumbers(m=int(rng.integers(1, 30)), n=int(rng.integers(0, 30)), L=L_DEFAULT)
        tilde = cl.mode_strain_at(ell, wn, h, reduced=True).value
        full = cl.mode_strain_at(ell, wn, h, reduced=False).value
        checks.append((1 - h - h * h) * tilde <= full * (1 + 1e-12))
        checks.append(full <= (1 + h + h * h) * tilde * (1 + 1e-12))

    passed = all(checks)
    return CriterionResult(
        9, "property suites", passed, f"{sum(checks)}/{len(checks)} sampled properties hold"
    )


CRITERIA: Dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1,
    2: criterion_2,
    3: criterion_3,
    4: criterion_4,
    5: criterion_5,
    6: criterion_6,
    7: criterion_7,
    8: criterion_8,
    9: criterion_9,
}

_JOBS_AWARE = {2, 5, 6}


def run_all(numbers: Optional[Iterable[int]] = None, jobs: int = 1) -> List[CriterionResult]:
    selected = sorted(set(numbers)) if numbers else sorted(CRITERIA)
    results = []
    for num in selected:
        if num not in CRITERIA:
            raise ValueError(f"unknown criterion {num}")
        fn = CRITERIA[num]
        results.append(fn(jobs=jobs) if num in _JOBS_AWARE else fn())
    return results
