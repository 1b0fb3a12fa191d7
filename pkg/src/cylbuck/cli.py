"""Command-line interface: sweeps, verification scans, and plot-ready data.

Outputs are deterministic: fixed scan orders, fixed tie-breaks, and
shortest-round-trip float formatting make reruns byte-identical.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

from . import acceptance
from . import critical_load as cl
from . import modes as modes_mod
from . import oracle as oracle_mod
from .errors import CylbuckError
from .material import IsotropicElasticity
from .spectral import ShellGeometry


def fmt(x) -> str:
    """Shortest decimal that round-trips; integers stay integers."""
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, int):
        return str(x)
    return repr(float(x))


def write_text(path: str, text: str):
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def write_csv(path: str, header: Sequence[str], rows: Sequence[Sequence]):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(fmt(v) if not isinstance(v, str) else v for v in row))
    write_text(path, "\n".join(lines) + "\n")


def write_json(path: str, obj):
    write_text(path, json.dumps(obj, indent=2) + "\n")


@dataclass
class RunConfig:
    nu: float = 0.3
    E: float = 1.0
    L: float = math.pi
    h_list: List[float] = field(default_factory=lambda: [0.1, 0.03, 0.01])
    margin: float = 3.0
    degree: int = 12
    outdir: str = "."
    jobs: int = 1

    def validate(self):
        if not self.h_list:
            raise ValueError("h-list must be nonempty")
        if any(b >= a for a, b in zip(self.h_list, self.h_list[1:])):
            raise ValueError("h-list must be strictly decreasing")
        IsotropicElasticity(nu=self.nu, E=self.E)
        for h in self.h_list:
            ShellGeometry(h=h, L=self.L)

    def elastic(self) -> IsotropicElasticity:
        return IsotropicElasticity(nu=self.nu, E=self.E)

    def problem(self, h: float) -> cl.CriticalLoadProblem:
        return cl.CriticalLoadProblem(
            geom=ShellGeometry(h=h, L=self.L), elastic=self.elastic(), margin=self.margin
        )

    def disc(self) -> oracle_mod.RadialDiscretization:
        return oracle_mod.RadialDiscretization(degree=self.degree)


def _result_record(config: RunConfig, h: float, res: cl.BucklingResult) -> dict:
    lam_star = cl.classical_strain_at(h, config.nu)
    return {
        "h": h,
        "m": res.m,
        "n": res.n,
        "m_hat": res.m_hat,
        "lambda3_tilde": res.strain,
        "lambda3_full": res.strain_full,
        "lambda_star": lam_star,
        "ratio": res.strain / lam_star,
        "a_theta": res.a_theta,
        "a_z": res.a_z,
        "koiter_residual": res.koiter_residual,
    }


SWEEP_COLUMNS = (
    "h", "m", "n", "m_hat", "lambda3_tilde", "lambda3_full",
    "lambda_star", "ratio", "a_theta", "a_z",
)


def cmd_critical_load(config: RunConfig, args) -> int:
    h = args.h if args.h is not None else config.h_list[0]
    res = cl.sweep(config.problem(h))
    record = _result_record(config, h, res)
    write_json(os.path.join(config.outdir, "critical_load.json"), record)
    print(json.dumps(record, indent=2))
    return 0


def cmd_sweep(config: RunConfig, args) -> int:
    rows, records = [], []
    for h in config.h_list:
        res = cl.sweep(config.problem(h))
        rec = _result_record(config, h, res)
        records.append(rec)
        rows.append([rec[c] for c in SWEEP_COLUMNS])
    write_csv(os.path.join(config.outdir, "sweep.csv"), SWEEP_COLUMNS, rows)
    write_json(os.path.join(config.outdir, "sweep.json"), records)
    for rec in records:
        print(f"h={fmt(rec['h'])}: (m={rec['m']}, n={rec['n']}) ratio={fmt(rec['ratio'])}")
    return 0


def cmd_koiter(config: RunConfig, args) -> int:
    h = args.h if args.h is not None else config.h_list[0]
    problem = config.problem(h)
    found = cl.koiter_circle(problem, rel_tol=args.tolerance)
    R = problem.koiter_radius
    records = []
    for wn in found:
        records.append(
            {
                "m": wn.m,
                "n": wn.n,
                "m_hat": wn.m_hat,
                "circle_residual": abs(math.hypot(wn.m_hat - R, wn.n) - R) / R,
                "lambda3_tilde": cl.per_mode_strain(problem, wn).value,
            }
        )
    out = {"h": h, "radius": R, "tolerance": args.tolerance, "modes": records}
    write_json(os.path.join(config.outdir, "koiter.json"), out)
    print(f"{len(records)} integer pairs within {fmt(args.tolerance)} of the circle (R={fmt(R)})")
    return 0


def _kind_series(config: RunConfig, estimates_by_h) -> list:
    """Rows (h, kind, value, fitted_slope) with the slope shared per kind."""
    kinds = sorted({e.kind for ests in estimates_by_h.values() for e in ests})
    rows = []
    slopes = {}
    for kind in kinds:
        hs = sorted(estimates_by_h, reverse=True)
        vals = []
        for h in hs:
            vals.extend(e.value for e in estimates_by_h[h] if e.kind == kind)
        slopes[kind] = oracle_mod.fitted_slope(hs, vals) if len(vals) > 1 else float("nan")
    for h in sorted(estimates_by_h, reverse=True):
        for e in sorted(estimates_by_h[h], key=lambda e: e.kind):
            rows.append([e.h, e.kind, e.value, slopes[e.kind]])
    return rows


def cmd_korn(config: RunConfig, args) -> int:
    el = config.elastic()
    disc = config.disc()
    by_h = {}
    for h in config.h_list:
        problem = config.problem(h)
        by_h[h] = oracle_mod.korn_mode_scan(
            problem.geom, el, disc, problem.window(), jobs=config.jobs
        )
    rows = _kind_series(config, by_h)
    write_csv(os.path.join(config.outdir, "korn.csv"), ("h", "kind", "value", "fitted_slope"), rows)
    records = [
        {"h": r[0], "kind": r[1], "value": r[2], "fitted_slope": r[3]} for r in rows
    ]
    out = {"estimates": records}
    if len(config.h_list) > 1:
        # slenderness sufficient condition: classical_strain^2 / K -> 0,
        # measured through its log-log slope (expected ~ +1/2)
        ratios = [
            cl.classical_strain_at(h, config.nu) ** 2
            / next(e.value for e in by_h[h] if e.kind == "korn")
            for h in config.h_list
        ]
        out["slenderness_condition_slope"] = oracle_mod.fitted_slope(config.h_list, ratios)
    write_json(os.path.join(config.outdir, "korn.json"), out)
    for r in rows:
        print(f"h={fmt(r[0])} {r[1]}: {fmt(r[2])} (slope {fmt(r[3])})")
    if "slenderness_condition_slope" in out:
        print(f"strain^2/K slope: {fmt(out['slenderness_condition_slope'])}")
    return 0


def cmd_ansatz(config: RunConfig, args) -> int:
    by_h = {}
    for h in config.h_list:
        geom = ShellGeometry(h=h, L=config.L)
        r = oracle_mod.ansatz_ratios(geom)
        by_h[h] = [
            oracle_mod.KornEstimate(h=h, kind="korn", value=r.korn),
            oracle_mod.KornEstimate(h=h, kind="theta_z", value=r.theta_z),
            oracle_mod.KornEstimate(h=h, kind="r_z", value=r.r_z),
        ]
    rows = _kind_series(config, by_h)
    write_csv(
        os.path.join(config.outdir, "ansatz.csv"), ("h", "kind", "value", "fitted_slope"), rows
    )
    write_json(
        os.path.join(config.outdir, "ansatz.json"),
        [{"h": r[0], "kind": r[1], "value": r[2], "fitted_slope": r[3]} for r in rows],
    )
    for r in rows:
        print(f"h={fmt(r[0])} {r[1]}: {fmt(r[2])} (slope {fmt(r[3])})")
    return 0


def cmd_equivalence(config: RunConfig, args) -> int:
    el = config.elastic()
    disc = config.disc()
    records = []
    for h in config.h_list:
        problem = config.problem(h)
        scan = oracle_mod.equivalence_scan(problem.geom, el, disc, problem.window(), jobs=config.jobs)
        lam = cl.classical_strain(problem)
        records.append(
            {
                "h": h,
                "sup_gap_full_vs_rz": scan.full_vs_rz,
                "lambda_star_times_gap": lam * scan.full_vs_rz,
                "rz_vs_mid_coefficient": scan.rz_vs_mid_coef,
            }
        )
    slope = oracle_mod.fitted_slope(
        [r["h"] for r in records], [r["lambda_star_times_gap"] for r in records]
    ) if len(records) > 1 else float("nan")
    out = {"records": records, "lambda_star_gap_slope": slope}
    write_json(os.path.join(config.outdir, "equivalence.json"), out)
    write_csv(
        os.path.join(config.outdir, "equivalence.csv"),
        ("h", "sup_gap_full_vs_rz", "lambda_star_times_gap", "rz_vs_mid_coefficient"),
        [[r["h"], r["sup_gap_full_vs_rz"], r["lambda_star_times_gap"], r["rz_vs_mid_coefficient"]] for r in records],
    )
    print(f"lambda_star * gap slope: {fmt(slope)}")
    return 0


def write_vtk(path: str, field: modes_mod.DisplacementField):
    """Legacy ASCII structured grid; r varies fastest, then theta, then z."""
    nr, nt, nz = len(field.r), len(field.theta), len(field.z)
    lines = [
        "# vtk DataFile Version 3.0",
        "cylbuck buckling mode displacement",
        "ASCII",
        "DATASET STRUCTURED_GRID",
        f"DIMENSIONS {nr} {nt} {nz}",
        f"POINTS {nr * nt * nz} double",
    ]
    for kz in range(nz):
        for jt in range(nt):
            ct, st = math.cos(field.theta[jt]), math.sin(field.theta[jt])
            for ir in range(nr):
                r = field.r[ir]
                lines.append(f"{fmt(r * ct)} {fmt(r * st)} {fmt(field.z[kz])}")
    lines.append(f"POINT_DATA {nr * nt * nz}")
    for name, data in (
        ("phi_r", field.phi_r),
        ("phi_theta", field.phi_theta),
        ("phi_z", field.phi_z),
    ):
        lines.append(f"SCALARS {name} double 1")
        lines.append("LOOKUP_TABLE default")
        for kz in range(nz):
            for jt in range(nt):
                for ir in range(nr):
                    lines.append(fmt(data[ir, jt, kz]))
    write_text(path, "\n".join(lines) + "\n")


def write_mode_csv(path: str, field: modes_mod.DisplacementField):
    rows = []
    for kz in range(len(field.z)):
        for jt in range(len(field.theta)):
            for ir in range(len(field.r)):
                rows.append(
                    [
                        field.r[ir],
                        field.theta[jt],
                        field.z[kz],
                        field.phi_r[ir, jt, kz],
                        field.phi_theta[ir, jt, kz],
                        field.phi_z[ir, jt, kz],
                    ]
                )
    write_csv(path, ("r", "theta", "z", "phi_r", "phi_theta", "phi_z"), rows)


def cmd_mode(config: RunConfig, args) -> int:
    h = args.h if args.h is not None else config.h_list[0]
    spec = modes_mod.BucklingModeSpec(
        geom=ShellGeometry(h=h, L=config.L), elastic=config.elastic(), alpha=args.alpha
    )
    field_data = modes_mod.synthesize(spec)
    ratio = modes_mod.quotient_ratio(spec)
    meta = {
        "h": h,
        "alpha": args.alpha,
        "m": spec.m,
        "n": spec.n,
        "m_hat": spec.m_hat,
        "lambda_star": spec.lambda_star,
        "quotient_ratio": ratio,
        "boundary_trace_max": field_data.boundary_trace_max(),
        "grid": [len(field_data.r), len(field_data.theta), len(field_data.z)],
        "format": args.format,
    }
    if args.format == "vtk":
        write_vtk(os.path.join(config.outdir, "mode.vtk"), field_data)
    else:
        write_mode_csv(os.path.join(config.outdir, "mode.csv"), field_data)
    write_json(os.path.join(config.outdir, "mode.json"), meta)
    print(json.dumps(meta, indent=2))
    return 0


def cmd_verify(config: RunConfig, args) -> int:
    numbers = None
    if args.criteria:
        numbers = [int(tok) for tok in args.criteria.split(",")]
    results = acceptance.run_all(numbers, jobs=config.jobs)
    for res in results:
        print(res.line())
    failed = [r for r in results if not r.passed]
    print(f"{len(results) - len(failed)}/{len(results)} criteria passed")
    return 0 if not failed else 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cylbuck",
        description="Critical buckling strain and buckling modes of axially "
        "compressed cylindrical shells.",
    )
    parser.add_argument("--config", help="JSON file with RunConfig fields; flags override")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--nu", type=float, default=None, help="Poisson ratio (default 0.3)")
        p.add_argument("--E", type=float, default=None, help="Young modulus (default 1)")
        p.add_argument("--L", type=float, default=None, help="shell length over radius (default pi)")
        p.add_argument("--h-list", default=None, help="comma-separated decreasing slendernesses")
        p.add_argument("--margin", type=float, default=None, help="sweep window margin factor")
        p.add_argument("--degree", type=int, default=None, help="radial polynomial degree")
        p.add_argument("--outdir", default=None, help="output directory (default .)")
        p.add_argument("--jobs", type=int, default=None, help="parallel workers (default: CPUs)")

    p = sub.add_parser("critical-load", help="sweep one slenderness, report the winner")
    common(p)
    p.add_argument("--h", type=float, default=None)
    p.set_defaults(fn=cmd_critical_load)

    p = sub.add_parser("sweep", help="integer sweep over an h-list -> sweep.csv")
    common(p)
    p.set_defaults(fn=cmd_sweep)

    p = sub.add_parser("koiter", help="integer pairs near the Koiter circle")
    common(p)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--tolerance", type=float, default=0.05)
    p.set_defaults(fn=cmd_koiter)

    p = sub.add_parser("korn", help="Korn-type extremal ratios over mode windows -> korn.csv")
    common(p)
    p.set_defaults(fn=cmd_korn)

    p = sub.add_parser("ansatz", help="Korn ratios of the wave-packet ansatz")
    common(p)
    p.set_defaults(fn=cmd_ansatz)

    p = sub.add_parser("equivalence", help="reciprocal Rayleigh-quotient gaps")
    common(p)
    p.set_defaults(fn=cmd_equivalence)

    p = sub.add_parser("mode", help="synthesize the two-term buckling mode field")
    common(p)
    p.add_argument("--h", type=float, default=None)
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--format", choices=("vtk", "csv"), default="vtk")
    p.set_defaults(fn=cmd_mode)

    p = sub.add_parser("verify", help="run the acceptance criteria, print PASS/FAIL")
    common(p)
    p.add_argument("--criteria", default=None, help="comma-separated subset, e.g. 1,4,7")
    p.set_defaults(fn=cmd_verify)

    return parser


def merge_config(args) -> RunConfig:
    base = RunConfig()
    file_keys = set()
    if args.config:
        with open(args.config) as fh:
            data = json.load(fh)
        for key, val in data.items():
            if not hasattr(base, key):
                raise ValueError(f"unknown config key {key!r}")
            setattr(base, key, val)
            file_keys.add(key)
    if args.nu is not None:
        base.nu = args.nu
    if args.E is not None:
        base.E = args.E
    if args.L is not None:
        base.L = args.L
    if args.h_list is not None:
        base.h_list = [float(tok) for tok in args.h_list.split(",")]
    if args.margin is not None:
        base.margin = args.margin
    if args.degree is not None:
        base.degree = args.degree
    if args.outdir is not None:
        base.outdir = args.outdir
    if args.jobs is not None:
        base.jobs = args.jobs
    elif "jobs" not in file_keys:
        base.jobs = os.cpu_count() or 1
    base.validate()
    return base


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = merge_config(args)
        os.makedirs(config.outdir, exist_ok=True)
        return args.fn(config, args)
    except CylbuckError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
