"""Command-line harness.

Subcommands: `spb` prints the spectral bound of a matrix file, `curve` writes
a parameter sweep as CSV, `check` runs every checker applicable to a scenario
family, `threshold` bisects the zero crossing of spb(m*A + V), and `suite`
runs the seeded randomized battery.

Exit codes: 0 success, 1 check failure, 2 parse/IO error, 3 numerical failure.
"""

import argparse
import sys

import numpy as np

from .battery import run_suite
from .checks import (
    CheckOutcome,
    check_midpoint_convexity,
    check_monotone_reduction,
    derivative_bound_check,
    find_threshold,
    homogeneity_check,
    kingman_superconvexity_check,
    kirkland_check,
    karlin_monotonicity_check,
    lindqvist_check,
    perron_derivative,
    sweep_spb_in_beta,
    sweep_spb_in_m,
)
from .errors import (
    InvariantViolation,
    NoSignChange,
    NotMonotoneOnBracket,
    ParseError,
    ReductionLabError,
)
from .gallery import (
    KarlinFamily,
    KingmanFamily,
    LinearFamily,
    elliptic_1d,
    karlin_matrix,
    karlin_to_linear,
    kingman_family_eval,
    laplacian_1d,
    nonlocal_operator,
)
from .matrixio import format_value, load_matrix
from .perron import (
    is_essentially_nonnegative,
    is_irreducible,
    is_resolvent_positive_at,
    perron_vectors,
    spectral_bound,
)
from .scenario import Scenario, coefficient_values, kernel_values, parse_scenario
from .semigroup import growth_bound_estimate, positivity_of_semigroup_check


def _write_lines(path, lines):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in lines:
            fh.write(line + "\n")


def _operator_matrix(sc: Scenario) -> np.ndarray:
    grid = sc.grid1d
    if sc.family_kind == "laplacian":
        return laplacian_1d(grid)
    if sc.family_kind == "elliptic":
        x = grid.points
        a = coefficient_values(sc.coefficients["a"], x, grid.length)
        b = coefficient_values(sc.coefficients["b"], x, grid.length)
        c = coefficient_values(sc.coefficients["c"], x, grid.length)
        return elliptic_1d(a, b, c, grid)
    K = kernel_values(sc.coefficients["kernel"], grid.points)
    b = coefficient_values(sc.coefficients["b"], grid.points, grid.length)
    return nonlocal_operator(K, b, grid)


def _operator_split(sc: Scenario) -> LinearFamily:
    """Mixing/growth split for the discretized operators: A mixes, V multiplies."""
    grid = sc.grid1d
    n = grid.n
    if sc.family_kind == "laplacian":
        return LinearFamily(laplacian_1d(grid), np.zeros((n, n)))
    if sc.family_kind == "elliptic":
        x = grid.points
        a = coefficient_values(sc.coefficients["a"], x, grid.length)
        b = coefficient_values(sc.coefficients["b"], x, grid.length)
        c = coefficient_values(sc.coefficients["c"], x, grid.length)
        return LinearFamily(elliptic_1d(a, b, 0.0, grid), np.diag(c))
    K = kernel_values(sc.coefficients["kernel"], grid.points)
    b = coefficient_values(sc.coefficients["b"], grid.points, grid.length)
    mixing = nonlocal_operator(K, np.zeros(n), grid)
    return LinearFamily(mixing, np.diag(b))


def run_spb(args) -> int:
    M = load_matrix(args.matrix)
    data = spectral_bound(M)
    print(f"spb {format_value(data.spb)}")
    if data.u is not None:
        print("u " + " ".join(format_value(x) for x in data.u))
        print("v " + " ".join(format_value(x) for x in data.v))
    return 0


def _curve_rows(sc: Scenario):
    """Yield (header, rows) for the scenario's sweep."""
    if sc.grid is None:
        raise ParseError(f"{sc.source}: curve needs a [grid] section")
    grid = sc.grid
    kind = sc.family_kind
    if kind == "linear":
        fam = LinearFamily(sc.matrices["A"], sc.matrices["V"])
        if sc.grid_name not in ("m", "beta"):
            raise ParseError(f"{sc.source}: linear families sweep m or beta")
        in_m = sc.grid_name == "m"
        values, derivs = [], []
        direction = fam.A if in_m else fam.V
        for p in grid:
            M = fam.matrix_at(p) if in_m else fam.matrix_at(1.0, p)
            values.append(spectral_bound(M).spb)
            if derivs is not None and is_irreducible(M):
                u, v = perron_vectors(M)
                derivs.append(float(u @ (direction @ v)))
            else:
                derivs = None
        if derivs is not None:
            header = "param,spb,analytic_derivative"
            rows = [
                f"{format_value(p)},{format_value(s)},{format_value(d)}"
                for p, s, d in zip(grid, values, derivs)
            ]
        else:
            header = "param,spb"
            rows = [f"{format_value(p)},{format_value(s)}" for p, s in zip(grid, values)]
        return header, rows
    if kind == "karlin":
        fam = KarlinFamily(sc.matrices["P"], sc.matrices["D"])
        if sc.grid_name != "alpha":
            raise ParseError(f"{sc.source}: karlin families sweep alpha")
        values = [spectral_bound(karlin_matrix(fam, a)).spb for a in grid]
    elif kind == "kingman":
        fam = KingmanFamily(sc.matrices["c"], sc.matrices["g"])
        if sc.grid_name != "theta":
            raise ParseError(f"{sc.source}: kingman families sweep theta")
        values = [spectral_bound(kingman_family_eval(fam, t)).spb for t in grid]
    else:
        if sc.grid_name != "m":
            raise ParseError(f"{sc.source}: operator families sweep m")
        A = _operator_matrix(sc)
        values = [spectral_bound(m * A).spb for m in grid]
    rows = [f"{format_value(p)},{format_value(s)}" for p, s in zip(grid, values)]
    return "param,spb", rows


def run_curve(args) -> int:
    sc = parse_scenario(args.scenario)
    header, rows = _curve_rows(sc)
    _write_lines(args.out, [header] + rows)
    return 0


def _check_outcome_line(name, outcome: CheckOutcome, lines):
    status = "pass" if outcome.passed else "fail"
    lines.append(f"{name},{status},{outcome.margin:.17g},{outcome.witness_text()}")
    return outcome.passed


def _check_convexity_line(name, report, grid, param, lines):
    status = "pass" if report.convex else "fail"
    witness = f"{param}={grid[report.witness_index]:.9g}"
    lines.append(f"{name},{status},{report.strictness_margin:.17g},{witness}")
    return report.convex


def _linear_checks(fam: LinearFamily, sc: Scenario, lines):
    ok = True
    tol = sc.tolerances
    m_grid = sc.grid if sc.grid_name == "m" else np.linspace(0.1, 5.0, 21)
    beta_grid = sc.grid if sc.grid_name == "beta" else np.linspace(-3.0, 3.0, 21)
    sweep_b = sweep_spb_in_beta(fam, beta_grid)
    ok &= _check_convexity_line(
        "convexity_beta",
        check_midpoint_convexity(sweep_b, tol.get("convexity_beta", 1e-9)),
        beta_grid, "beta", lines,
    )
    sweep_m = sweep_spb_in_m(fam, m_grid)
    ok &= _check_convexity_line(
        "convexity_m",
        check_midpoint_convexity(sweep_m, tol.get("convexity_m", 1e-9)),
        m_grid, "m", lines,
    )
    spb_A = spectral_bound(fam.A).spb
    ok &= _check_outcome_line("monotone_reduction", check_monotone_reduction(sweep_m, spb_A), lines)
    m_mid = float(m_grid[len(m_grid) // 2])
    if is_irreducible(fam.matrix_at(m_mid)):
        bound = derivative_bound_check(fam, m_mid)
        ok &= _check_outcome_line("derivative_bound", bound, lines)
        analytic = perron_derivative(fam, m_mid)
        fd = bound.witness["fd"]
        dtol = 1e-6 * max(1.0, abs(analytic), abs(fd))
        agree = CheckOutcome(
            passed=abs(analytic - fd) <= dtol,
            margin=dtol - abs(analytic - fd),
            witness={"m": m_mid, "analytic": analytic},
        )
        ok &= _check_outcome_line("perron_derivative_agreement", agree, lines)
    ok &= _check_outcome_line(
        "homogeneity", homogeneity_check(fam, m_mid, 1.0, [0.1, 2.0, 10.0]), lines
    )
    if is_irreducible(fam.A):
        ok &= _check_outcome_line("lindqvist", lindqvist_check(fam.A, fam.V), lines)
        ok &= _check_outcome_line("kirkland", kirkland_check(fam.A), lines)
        probe = check_midpoint_convexity(sweep_b)
        scale = max(1.0, float(np.max(np.abs(sweep_b.values))))
        verdict = "strict" if probe.strictness_margin > 1e-9 * scale else "flat"
        lines.append(
            f"strict_convexity_probe,pass,{probe.strictness_margin:.17g},verdict={verdict}"
        )
    return ok


def _karlin_checks(fam: KarlinFamily, sc: Scenario, lines):
    ok = True
    alpha_grid = sc.grid if sc.grid_name == "alpha" else np.linspace(0.0, 1.0, 11)
    ok &= _check_outcome_line(
        "karlin_monotonicity", karlin_monotonicity_check(fam, alpha_grid), lines
    )
    derived = karlin_to_linear(fam)
    spb_mix = spectral_bound(derived.A).spb
    zero = CheckOutcome(
        passed=abs(spb_mix) <= 1e-10,
        margin=1e-10 - abs(spb_mix),
        witness={"spb": spb_mix},
        detail="reciprocal growth rates form a positive right null vector of (P - I)D",
    )
    ok &= _check_outcome_line("mixing_spb_zero", zero, lines)
    if np.max(np.abs(fam.P.sum(axis=0) - 1.0)) <= 1e-12:
        # the left-null identity is a theorem only when columns also sum to 1
        worst = float(np.max(np.abs(derived.A.sum(axis=0))))
        null_tol = 1e-13 * max(1.0, float(np.max(np.abs(derived.A))))
        null = CheckOutcome(
            passed=worst <= null_tol,
            margin=null_tol - worst,
            witness={"max_colsum": worst},
            detail="ones vector must annihilate (P - I)D from the left",
        )
        ok &= _check_outcome_line("left_null_identity", null, lines)
    worst_gap = 0.0
    for a in alpha_grid:
        direct = ((1.0 - a) * np.eye(fam.n) + a * fam.P) @ fam.D
        worst_gap = max(worst_gap, float(np.max(np.abs(direct - karlin_matrix(fam, a)))))
    cons_tol = 1e-13 * max(1.0, float(np.max(np.abs(fam.D))))
    cons = CheckOutcome(
        passed=worst_gap <= cons_tol, margin=cons_tol - worst_gap, witness={"max_gap": worst_gap}
    )
    ok &= _check_outcome_line("karlin_consistency", cons, lines)
    sweep = sweep_spb_in_m(derived, np.linspace(0.1, 3.0, 11))
    spb_A = spectral_bound(derived.A).spb
    ok &= _check_outcome_line("monotone_reduction", check_monotone_reduction(sweep, spb_A), lines)
    return ok


def _kingman_checks(fam: KingmanFamily, sc: Scenario, lines):
    ok = True
    theta_grid = sc.grid if sc.grid_name == "theta" else np.linspace(-1.0, 1.0, 9)
    ok &= _check_convexity_line(
        "kingman_superconvexity",
        kingman_superconvexity_check(fam, theta_grid),
        theta_grid, "theta", lines,
    )
    probes = [float(theta_grid[0]), float(theta_grid[len(theta_grid) // 2]), float(theta_grid[-1])]
    worst = 0.0
    if not np.allclose(np.diff(probes), probes[1] - probes[0]):
        probes = [probes[0], 0.5 * (probes[0] + probes[2]), probes[2]]
    for i in range(fam.n):
        for j in range(fam.n):
            if fam.c[i, j] == 0.0:
                continue
            logs = [np.log(fam.c[i, j]) + fam.g[i, j] * t for t in probes]
            worst = max(worst, abs(logs[0] - 2.0 * logs[1] + logs[2]))
    affine = CheckOutcome(
        passed=worst <= 1e-12,
        margin=1e-12 - worst,
        witness={"second_difference": worst},
        detail="log of every nonzero entry must be affine in theta",
    )
    ok &= _check_outcome_line("log_affine_entries", affine, lines)
    return ok


def _operator_checks(sc: Scenario, lines):
    ok = True
    A = _operator_matrix(sc)
    n = A.shape[0]
    metzler = is_essentially_nonnegative(A)
    off = A[~np.eye(n, dtype=bool)]
    ess = CheckOutcome(passed=metzler, margin=float(np.min(off)), witness={"n": float(n)})
    ok &= _check_outcome_line("essential_nonnegativity", ess, lines)
    if not metzler:
        return ok
    data = spectral_bound(A)
    if sc.family_kind == "laplacian" and sc.grid1d.boundary in ("neumann", "periodic"):
        zero = CheckOutcome(
            passed=abs(data.spb) <= 1e-10,
            margin=1e-10 - abs(data.spb),
            witness={"spb": data.spb},
            detail="zero row sums force spb = 0",
        )
        ok &= _check_outcome_line("spb_zero", zero, lines)
    worst = None
    for offset in (0.1, 1.0, 10.0):
        good = is_resolvent_positive_at(A, data.spb + offset)
        if not good and worst is None:
            worst = offset
    res = CheckOutcome(
        passed=worst is None,
        margin=1.0 if worst is None else -1.0,
        witness={"spb": data.spb},
        detail="resolvent entrywise nonnegative beyond the spectral bound",
    )
    ok &= _check_outcome_line("resolvent_positive", res, lines)
    ok &= _check_outcome_line(
        "semigroup_positivity", positivity_of_semigroup_check(A, [0.1, 1.0, 5.0]), lines
    )
    est = growth_bound_estimate(A, t_max=50.0, k=10)
    gtol = sc.tolerances.get("growth_bound", 1e-3) * max(1.0, abs(data.spb))
    gap = abs(est.omega - data.spb)
    growth = CheckOutcome(
        passed=gap <= gtol, margin=gtol - gap, witness={"omega": est.omega, "spb": data.spb}
    )
    ok &= _check_outcome_line("growth_bound", growth, lines)
    fam = _operator_split(sc)
    m_grid = sc.grid if sc.grid_name == "m" else np.linspace(0.5, 2.0, 7)
    sweep = sweep_spb_in_m(fam, m_grid)
    spb_mix = spectral_bound(fam.A).spb
    ok &= _check_outcome_line("monotone_reduction", check_monotone_reduction(sweep, spb_mix), lines)
    return ok


def run_check(args) -> int:
    sc = parse_scenario(args.scenario)
    lines: list[str] = []
    if sc.family_kind == "linear":
        ok = _linear_checks(LinearFamily(sc.matrices["A"], sc.matrices["V"]), sc, lines)
    elif sc.family_kind == "karlin":
        ok = _karlin_checks(KarlinFamily(sc.matrices["P"], sc.matrices["D"]), sc, lines)
    elif sc.family_kind == "kingman":
        ok = _kingman_checks(KingmanFamily(sc.matrices["c"], sc.matrices["g"]), sc, lines)
    else:
        ok = _operator_checks(sc, lines)
    _write_lines(args.out, lines)
    return 0 if ok else 1


def run_threshold(args) -> int:
    sc = parse_scenario(args.scenario)
    if sc.family_kind != "linear":
        raise ParseError(f"{sc.source}: threshold needs a linear family")
    if sc.bracket is None:
        raise ParseError(f"{sc.source}: threshold needs a [threshold] section with m_lo, m_hi")
    fam = LinearFamily(sc.matrices["A"], sc.matrices["V"])
    try:
        m_star = find_threshold(fam, *sc.bracket)
    except (NoSignChange, NotMonotoneOnBracket) as exc:
        print(type(exc).__name__)
        return 3
    print(format_value(m_star))
    return 0


def run_suite_cmd(args) -> int:
    lines, failed = run_suite(args.seed_count)
    _write_lines(args.out, [line.format() for line in lines])
    mandatory = sum(1 for l in lines if not l.advisory)
    failures = sum(1 for l in lines if not l.passed)
    print(f"suite: {len(lines)} checks over {args.seed_count} seeds, {mandatory} mandatory, {failures} failed")
    return 1 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reduction-lab",
        description="Spectral-bound sweeps and reduction certifiers for Metzler matrix families",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spb", help="print the spectral bound of a matrix file")
    p.add_argument("matrix")
    p.set_defaults(func=run_spb)

    p = sub.add_parser("curve", help="sweep a scenario and write param,spb CSV")
    p.add_argument("scenario")
    p.add_argument("--out", required=True)
    p.set_defaults(func=run_curve)

    p = sub.add_parser("check", help="run every checker applicable to a scenario")
    p.add_argument("scenario")
    p.add_argument("--out", required=True)
    p.set_defaults(func=run_check)

    p = sub.add_parser("threshold", help="bisect spb(m*A + V) = 0 on the scenario bracket")
    p.add_argument("scenario")
    p.set_defaults(func=run_threshold)

    p = sub.add_parser("suite", help="run the seeded randomized battery")
    p.add_argument("--seed-count", type=int, required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=run_suite_cmd)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, InvariantViolation) as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"io error: {exc}", file=sys.stderr)
        return 2
    except ReductionLabError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
