"""Command-line interface.

Every subcommand writes a table to stdout (CSV with a header row, or JSON)
and diagnostics to stderr. Exit codes: 0 success, 1 a verification
tolerance failed, 2 bad flags.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from . import asymptotics, genfun, measure, polys, specfun, walk

DEFAULT_N_LIST = [2**k for k in range(6, 15)]
DEFAULT_Z_GRID = [float(v) for v in 1.0 - np.geomspace(0.1, 0.001, 12)]


class FlagError(Exception):
    """Invalid flag combination, reported with exit code 2."""


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return "%.17g" % float(v)
    return str(v)


def _jsonable(v):
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, np.floating):
        v = float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return None
    return v


@dataclass
class Table:
    columns: list
    rows: list
    meta: dict | None = None

    def render(self, fmt: str) -> str:
        if fmt == "json":
            out = dict(self.meta or {})
            out["columns"] = self.columns
            out["rows"] = [[_jsonable(v) for v in r] for r in self.rows]
            return json.dumps(out) + "\n"
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows([_fmt(v) for v in r] for r in self.rows)
        return buf.getvalue()


# --- validation -------------------------------------------------------------

def _need_normalizable(delta):
    if not delta > 1.0:
        raise FlagError(f"--delta {delta}: the walk needs delta > 1 for a normalizable stationary law")


def _need_subcritical(delta):
    _need_normalizable(delta)
    if not delta < 2.0:
        raise FlagError(f"--delta {delta}: this subcommand needs 1 < delta < 2")


def _nodes(text):
    n = int(text)
    if n < 64 or n > 4096 or n & (n - 1):
        raise argparse.ArgumentTypeError("nodes must be a power of two between 64 and 4096")
    return n


def _nonneg(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return v


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def _ints(text):
    try:
        return [int(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


# --- subcommands ------------------------------------------------------------

def cmd_dp(a):
    _need_normalizable(a.delta)
    if a.means:
        m = walk.mean_trajectory(a.delta, a.x0, a.n)
        return Table(["n", "mean"], [[k, m[k]] for k in range(a.n + 1)]), 0
    dist = walk.evolve(a.delta, a.x0, a.n)
    rows = [[y, dist.probs[y]] for y in range((a.x0 + a.n) % 2, dist.probs.size, 2)]
    return Table(["y", "prob"], rows), 0


def cmd_mc(a):
    _need_normalizable(a.delta)
    if a.paths < 1:
        raise FlagError("--paths must be at least 1")
    res = walk.simulate(a.delta, a.x0, a.n, a.paths, a.seed, workers=a.workers)
    rows = [[k, res.mean[k], res.stderr[k]] for k in range(a.n + 1)]
    return Table(["n", "mean", "stderr"], rows, {"paths": a.paths, "seed": a.seed}), 0


def cmd_stationary(a):
    _need_normalizable(a.delta)
    st = walk.stationary(a.delta, a.max_site)
    return Table(["y", "pi"], [[y, v] for y, v in enumerate(st.values)]), 0


def cmd_polys(a):
    t = np.asarray(a.t, dtype=float)
    if np.any(np.abs(t) > 1):
        raise FlagError("--t values must lie in [-1, 1]")
    if a.family == "Gegenbauer":
        if a.lam is None or not a.lam > 0:
            raise FlagError("--lam > 0 is required for the Gegenbauer family")
        vals = polys.gegenbauer(a.lam, a.max_degree, t)
    else:
        _need_normalizable(a.delta)
        vals = polys.eval_family(a.family, a.max_degree, t, delta=a.delta)
    rows = [[y, t[i], vals[y, i]] for y in range(a.max_degree + 1) for i in range(t.size)]
    return Table(["degree", "t", "value"], rows, {"family": a.family}), 0


def cmd_ortho(a):
    _need_subcritical(a.delta)
    m = measure.build_measure(a.delta, a.nodes)
    G = measure.gram(m, a.max_degree)
    pi = walk.stationary(a.delta, a.max_degree).values
    target = np.diag(pi[0] / pi)
    err = np.abs(G - target)
    rows = [[x, y, G[x, y], target[x, y], err[x, y]]
            for x in range(a.max_degree + 1) for y in range(a.max_degree + 1)]
    worst = float(err.max())
    print(f"max |Gram - target| = {worst:.3e} (tol {a.tol:g})", file=sys.stderr)
    return Table(["x", "y", "gram", "target", "abs_error"], rows), int(worst > a.tol)


def cmd_transition(a):
    _need_subcritical(a.delta)
    m = measure.build_measure(a.delta, a.nodes)
    km = measure.km_row(m, a.x0, a.n)
    dp = walk.evolve(a.delta, a.x0, a.n).probs
    rows = []
    for y in range((a.x0 + a.n) % 2, a.x0 + a.n + 1, 2):
        tr = measure.Transition(float(km[y]))
        rows.append([y, tr.raw, tr.probability, dp[y], abs(tr.raw - dp[y])])
    worst = float(np.max(np.abs(km - dp)))
    print(f"max |spectral - DP| = {worst:.3e} (tol {a.tol:g})", file=sys.stderr)
    return Table(["y", "spectral_raw", "spectral", "dp", "abs_diff"], rows), int(worst > a.tol)


def cmd_dette(a):
    _need_subcritical(a.delta)
    r = measure.dette_checks(a.delta, a.max_degree, a.nodes)
    rows = [
        ["qstar1_offdiag", r.qstar1_offdiag],
        ["q1_offdiag", r.q1_offdiag],
        ["qstar_offdiag", r.qstar_offdiag],
        ["density_ratio_spread", r.density_ratio_spread],
        ["density_ratio_mean", r.density_ratio_mean],
        ["gegenbauer_ratio_spread", r.gegenbauer_ratio_spread],
        ["gegenbauer_ratio_mean", r.gegenbauer_ratio_mean],
    ]
    worst = r.worst()
    print(f"worst Dette residual = {worst:.3e} (tol {a.tol:g})", file=sys.stderr)
    return Table(["metric", "value"], rows), int(worst > a.tol)


def cmd_genfun(a):
    _need_subcritical(a.delta)
    m = measure.build_measure(a.delta, a.nodes)
    rows = []
    fail = 0
    for z in a.z:
        if not 0.0 <= z <= genfun.Z_CAP:
            raise FlagError(f"--z values must lie in [0, {genfun.Z_CAP}]")
        g = genfun.generating_functions(a.delta, z, measure=m)
        ref, tail = genfun.generating_functions_dp(a.delta, z, a.n_max)
        de, do = abs(g.g_e - ref.g_e), abs(g.g_o - ref.g_o)
        rows.append([z, g.g_e, g.g_o, ref.g_e, ref.g_o, tail, de, do])
        # DP sums are lower bounds; the spectral value must sit within tol + tail
        if max(de, do) > a.tol + tail:
            fail = 1
    cols = ["z", "g_e", "g_o", "g_e_dp", "g_o_dp", "dp_tail_bound", "abs_diff_e", "abs_diff_o"]
    return Table(cols, rows), fail


def cmd_kdelta(a):
    _need_subcritical(a.delta)
    k = asymptotics.k_delta(a.delta, a.nodes)
    return {"delta": a.delta, "k_delta": k.value, "nodes": a.nodes, "converged": k.converged}, 0


def _report_table(rep, first):
    meta = {"delta": rep.delta, "k_delta": rep.k_delta, "fitted_exponent": rep.fitted_exponent,
            "correction_slope": rep.correction_slope, "envelope_constant": rep.envelope_constant,
            "stated_correction_exponent": asymptotics.correction_exponent(rep.delta)}
    for k, v in meta.items():
        print(f"{k} = {_fmt(v)}", file=sys.stderr)
    return Table([first, "value", "ratio"], [list(s) for s in rep.samples], meta)


def cmd_asym(a):
    _need_subcritical(a.delta)
    if any(n % 2 or n <= 0 for n in a.n_list):
        raise FlagError("--n-list must hold positive even integers")
    if max(a.n_list) > walk.DP_CAP:
        raise FlagError(f"--n-list entries must not exceed {walk.DP_CAP}")
    return _report_table(asymptotics.check_moment_asymptotics(a.delta, a.n_list), "n"), 0


def cmd_asymz(a):
    _need_subcritical(a.delta)
    if any(not 0.9 <= z <= 0.999 for z in a.z):
        raise FlagError("--z values must lie in [0.9, 0.999]")
    return _report_table(asymptotics.check_gen_asymptotics(a.delta, a.z, a.nodes), "z"), 0


# --- verification suite -----------------------------------------------------

@dataclass(frozen=True)
class Check:
    name: str
    value: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(self.value <= self.tol)


def _gram_error(delta, n, max_degree):
    G = measure.gram(measure.build_measure(delta, n), max_degree)
    pi = walk.stationary(delta, max_degree).values
    return float(np.max(np.abs(G - np.diag(pi[0] / pi)))), G


def run_checks(delta: float) -> list:
    """Cross-checks of every layer at one delta in (1, 2)."""
    d = delta
    out = []
    x = np.linspace(0.5, 10.0, 39)
    lg = np.abs(np.asarray(specfun.log_gamma(x + 1)) - np.asarray(specfun.log_gamma(x)) - np.log(x))
    out.append(Check("log_gamma recursion", float(lg.max()), 1e-12))
    t = np.linspace(-1.0, 1.0, 41)
    f2 = specfun.boundary_F(d, t).abs_squared
    out.append(Check("|F|^2 evenness", float(np.max(np.abs(f2 - f2[::-1]))), 1e-10))

    pi = walk.stationary(d, 1001).values
    up, down = walk.step_probs(d, np.arange(1002))
    db = np.abs(pi[:-1] * up[:-1] - pi[1:] * down[1:]) / (pi[:-1] * up[:-1])
    out.append(Check("detailed balance", float(db.max()), 1e-12))
    dist = walk.evolve(d, 0, 2000)
    out.append(Check("probability conservation", abs(float(dist.probs.sum()) - 1.0), 1e-12))

    grid = np.linspace(-1.0, 1.0, 101)
    out.append(Check("Gegenbauer identities", max(polys.identity_residuals(d, 30, grid).values()), 1e-10))
    fam = polys.PolyFamily("Q", d)
    out.append(Check("Q recursion residual",
                     polys.recursion_residual(fam, polys.eval_family(fam, 100, grid), grid), 1e-10))

    err512, G512 = _gram_error(d, 512, 30)
    out.append(Check("orthogonality", err512, 1e-8))
    m = measure.build_measure(d, 512)
    out.append(Check("total mass", abs(m.total_mass - 1.0), 1e-10))
    out.append(Check("continuous mass", abs(m.continuous_mass - 1.0 / d), 1e-10))
    _, G256 = _gram_error(d, 256, 30)
    out.append(Check("node doubling 256->512", float(np.max(np.abs(G512 - G256))), 1e-9))
    km = 0.0
    big = measure.build_measure(d, measure.KM_NODES)
    for x0 in (0, 1, 3):
        for n in (0, 1, 2, 7, 30, 100):
            km = max(km, float(np.max(np.abs(measure.km_row(big, x0, n) - walk.evolve(d, x0, n).probs))))
    out.append(Check("spectral vs DP transitions", km, 1e-8))
    out.append(Check("Dette chain", measure.dette_checks(d).worst(), 1e-8))

    tt, uu = np.meshgrid([-0.9, 0.0, 0.5, 0.99], np.linspace(0.06, 0.3, 9))
    series = genfun.phi_series(d, tt, uu)
    closed = genfun.closed_forms(d, tt, uu)
    out.append(Check("Phi series vs closed form", float(np.max(np.abs(series[0] - closed[0]))), 1e-10))
    out.append(Check("Psi series vs closed form", float(np.max(np.abs(series[1] - closed[1]))), 1e-10))
    out.append(Check("Psi' series vs closed form", float(np.max(np.abs(series[2] - closed[2]))), 1e-10))
    out.append(Check("ODE residual", genfun.ode_residual(d, 0.5, np.linspace(0.1, 0.9, 9)), 1e-6))
    out.append(Check("Psi = 2u Phi' + d Phi", genfun.psi_identity_residual(d), 1e-7))
    g = genfun.generating_functions(d, 0.3)
    ref, tail = genfun.generating_functions_dp(d, 0.3)
    out.append(Check("g_e and g_o vs DP at z=0.3", max(abs(g.g_e - ref.g_e), abs(g.g_o - ref.g_o)), 1e-8 + tail))
    out.append(Check("K_delta node doubling", asymptotics.k_delta(d).change, asymptotics.CONVERGENCE_TOL))
    return out


def cmd_verify_all(a):
    _need_subcritical(a.delta)
    checks = run_checks(a.delta)
    rows = [[c.name, c.value, c.tol, "pass" if c.passed else "FAIL"] for c in checks]
    failed = [c.name for c in checks if not c.passed]
    if failed:
        print("failed: " + "; ".join(failed), file=sys.stderr)
    else:
        print(f"all {len(checks)} checks passed", file=sys.stderr)
    return Table(["check", "value", "tol", "status"], rows), int(bool(failed))


# --- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    fmt = argparse.ArgumentDefaultsHelpFormatter
    p = argparse.ArgumentParser(prog="wallwalk", formatter_class=fmt,
                                description="Wall-attracted random walk: exact, spectral and asymptotic computations.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--delta", type=float, default=1.5, help="walk parameter delta")
    common.add_argument("--format", choices=["csv", "json"], default=None,
                        help="output format (csv, except kdelta which defaults to json)")
    common.add_argument("--output", default="-", help="output path, - for stdout")
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text):
        sp = sub.add_parser(name, parents=[common], help=help_text, description=help_text, formatter_class=fmt)
        sp.set_defaults(func=func)
        return sp

    sp = add("dp", cmd_dp, "exact law of X_n (or E X_k for k <= n with --means)")
    sp.add_argument("--x0", type=_nonneg, default=0, help="starting site")
    sp.add_argument("--n", type=_nonneg, required=True, help="number of steps")
    sp.add_argument("--means", action="store_true", help="emit E_x0 X_k for k = 0..n instead")

    sp = add("mc", cmd_mc, "Monte Carlo estimate of E X_k for k <= n")
    sp.add_argument("--x0", type=_nonneg, default=0, help="starting site")
    sp.add_argument("--n", type=_nonneg, required=True, help="number of steps")
    sp.add_argument("--paths", type=int, default=100_000, help="number of sample paths")
    sp.add_argument("--seed", type=int, required=True, help="RNG seed (required)")
    sp.add_argument("--workers", type=int, default=None,
                    help="worker threads (default: WALLWALK_THREADS or 1); results do not depend on it")

    sp = add("stationary", cmd_stationary, "stationary law pi_y for y <= max-site")
    sp.add_argument("--max-site", type=_nonneg, default=50, help="largest site")

    sp = add("polys", cmd_polys, "values of a polynomial family")
    sp.add_argument("--family", choices=list(polys.FAMILIES) + ["Gegenbauer"], default="Q", help="family")
    sp.add_argument("--max-degree", type=_nonneg, default=10, help="largest degree")
    sp.add_argument("--t", type=_floats, default=[-1.0, -0.5, 0.0, 0.5, 1.0], help="comma-separated points")
    sp.add_argument("--lam", type=float, default=None, help="Gegenbauer index")

    sp = add("ortho", cmd_ortho, "Gram matrix of Q under the spectral measure")
    sp.add_argument("--max-degree", type=_nonneg, default=30, help="largest degree")
    sp.add_argument("--nodes", type=_nodes, default=measure.DEFAULT_NODES, help="quadrature nodes")
    sp.add_argument("--tol", type=float, default=1e-8, help="tolerance on |Gram - target|")

    sp = add("transition", cmd_transition, "spectral transition probabilities next to the exact DP")
    sp.add_argument("--x0", type=_nonneg, default=0, help="starting site")
    sp.add_argument("--n", type=_nonneg, required=True, help="number of steps")
    sp.add_argument("--nodes", type=_nodes, default=measure.KM_NODES, help="quadrature nodes")
    sp.add_argument("--tol", type=float, default=1e-8, help="tolerance on the difference")

    sp = add("dette", cmd_dette, "orthogonality of the associated and dual families")
    sp.add_argument("--max-degree", type=_nonneg, default=20, help="largest degree")
    sp.add_argument("--nodes", type=_nodes, default=256, help="quadrature nodes")
    sp.add_argument("--tol", type=float, default=1e-8, help="tolerance on every residual")

    sp = add("genfun", cmd_genfun, "g_e and g_o from the spectral integral next to DP partial sums")
    sp.add_argument("--z", type=_floats, default=[0.3], help="comma-separated z values in [0, 0.999]")
    sp.add_argument("--nodes", type=_nodes, default=genfun.GEN_NODES, help="quadrature nodes")
    sp.add_argument("--n-max", type=_nonneg, default=400, help="DP partial-sum length")
    sp.add_argument("--tol", type=float, default=1e-8, help="tolerance beyond the DP tail bound")

    sp = add("kdelta", cmd_kdelta, "the amplitude K_delta with a node-doubling check")
    sp.add_argument("--nodes", type=_nodes, default=measure.DEFAULT_NODES, help="quadrature nodes")

    sp = add("asym", cmd_asym, "E_0 X_n against K_delta n^(1 - delta/2)")
    sp.add_argument("--n-list", type=_ints, default=DEFAULT_N_LIST, help="comma-separated even step counts")

    sp = add("asymz", cmd_asymz, "g_e(z) against its z -> 1 power law")
    sp.add_argument("--z", type=_floats, default=DEFAULT_Z_GRID, help="comma-separated z values in [0.9, 0.999]")
    sp.add_argument("--nodes", type=_nodes, default=genfun.GEN_NODES, help="quadrature nodes")

    add("verify-all", cmd_verify_all, "run every cross-check; exit 1 if any fails")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result, code = args.func(args)
    except FlagError as exc:
        print(f"wallwalk {args.command}: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, MemoryError, OverflowError) as exc:
        print(f"wallwalk {args.command}: error: {exc}", file=sys.stderr)
        return 2
    if isinstance(result, dict):
        fmt = args.format or "json"
        if fmt == "json":
            text = json.dumps({k: _jsonable(v) for k, v in result.items()}) + "\n"
        else:
            text = Table(list(result), [list(result.values())]).render("csv")
    else:
        text = result.render(args.format or "csv")
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
