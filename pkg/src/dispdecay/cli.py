"""Command-line front end: scenario configuration, verification pipelines,
JSON reports and CSV series.

Every command assembles a report of verdict records; a record always
carries (predicted, fitted, slack, verdict) where a fit is involved so the
verdict can be rechecked offline.  Reports are deterministic for a fixed
scenario and seed up to the timestamp field; exit status is 0 when all
verdicts pass, 1 on a failing verdict, 2 on configuration errors.
"""

import argparse
import csv
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import decay_fit, dispersion, kernel, nonlinear, propagator, special, strichartz

__all__ = ["main", "run_command", "report_merge", "COMMANDS"]


class ConfigError(Exception):
    pass


def _resolve_relation(config):
    spec = config.get("relation", "klein_gordon")
    if isinstance(spec, str):
        try:
            return dispersion.builtin(spec)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    try:
        return dispersion.relation_from_expressions(
            name=spec.get("name", "custom"),
            phi_expr=spec["phi"], dphi_expr=spec["dphi"], d2phi_expr=spec["d2phi"],
            m1=spec["m1"], m2=spec["m2"],
            alpha1=spec.get("alpha1"), alpha2=spec.get("alpha2"))
    except KeyError as exc:
        raise ConfigError(f"custom relation missing field {exc}") from exc


def _series_record(series, extra=None):
    rec = {
        "label": series.label,
        "predicted": series.predicted_exponent,
        "fitted": series.fitted_exponent,
        "residual": series.residual,
        "slack": series.slack,
        "sharp": series.sharp,
        "verdict": bool(series.verdict),
    }
    if extra:
        rec.update(extra)
    return rec


def _write_csv(path, header, rows):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


DEFAULT_HYPOTHESES = [
    "klein_gordon", "beam", "schrodinger4",
    # the linear phase has no curvature: only the growth checks can hold
    {"name": "wave", "expect": ["h1", "h2"]},
]


def cmd_hypotheses(config, out_dir, seed, slack):
    C = float(config.get("C", 10.0))
    records = []
    for entry in config.get("relations", DEFAULT_HYPOTHESES):
        if isinstance(entry, str):
            entry = {"name": entry}
        rel = _resolve_relation({"relation": entry.get("relation", entry["name"])})
        report = dispersion.verify_hypotheses(rel, C=C)
        rec = report.to_dict()
        expected = entry.get("expect")
        if expected is None:
            rec["verdict"] = rec["pass"]
        else:
            passed = {k for k, c in report.checks.items() if c.passed}
            rec["expected"] = sorted(expected)
            rec["verdict"] = passed == set(expected)
        records.append(rec)
    return {"records": records}


def cmd_bessel_selftest(config, out_dir, seed, slack):
    orders = config.get("orders", [0.0, 0.5, 1.0, 1.5])
    n_points = int(config.get("n_points", 200))
    r = np.geomspace(float(config.get("r_min", 1e-6)),
                     float(config.get("r_max", 1e4)), n_points)
    try:
        from scipy import special as sp
    except ImportError as exc:
        raise ConfigError("bessel-selftest needs scipy for the reference column; "
                          "install the [test] extra") from exc
    rows = []
    worst = 0.0
    for nu in orders:
        mine = special.bessel_j(nu, r)
        ref = sp.jv(nu, r)
        err = np.abs(mine - ref)
        worst = max(worst, float(err.max()))
        rows.extend([(nu, float(rv), float(mv), float(fv), float(ev))
                     for rv, mv, fv, ev in zip(r, mine, ref, err)])
    if out_dir is not None:
        _write_csv(out_dir / "bessel_selftest.csv",
                   ("nu", "r", "value", "reference", "abs_error"), rows)
    record = {"label": "bessel-selftest", "max_abs_error": worst,
              "tolerance": 1e-10, "verdict": bool(worst < 1e-10)}
    return {"records": [record]}


def cmd_kernel_decay(config, out_dir, seed, slack):
    rel = _resolve_relation(config)
    n = int(config.get("n", 1))
    k = int(config.get("k", 0))
    t = decay_fit.default_time_grid(float(config.get("t_min", 10.0)),
                                    float(config.get("t_max", 1e3)),
                                    int(config.get("n_t", 16)))
    series = decay_fit.kernel_decay_series(
        rel, n, k, t, predicted=config.get("predicted"),
        slack=slack, sharp=bool(config.get("sharp", False)))
    if k >= 0:
        branch = "B" if rel.alpha1 is not None else "A"
        theta_star = 1.0 if branch == "B" else 0.5 * (n - 1)
    else:
        branch = "B" if rel.alpha2 is not None else "A"
        theta_star = 1.0 if branch == "B" else 0.5 * (n - 1)
    if out_dir is not None:
        rows = [(n, k, float(tv), float(mv)) for tv, mv in zip(series.t, series.M)]
        _write_csv(out_dir / "kernel_decay.csv", ("n", "k", "t", "sup_norm"), rows)
        # pointwise kernel profile at the first time sample
        t0 = float(series.t[0])
        s_grid = np.linspace(0.0, float(config.get("profile_s_max", 64.0)),
                             int(config.get("profile_points", 129)))
        vals, errs = kernel.kernel_profile(rel, n, k, t0, s_grid)
        _write_csv(out_dir / "kernel_profile.csv",
                   ("n", "k", "t", "s", "re", "im", "abs", "err_est"),
                   [(n, k, t0, float(s), float(v.real), float(v.imag),
                     float(abs(v)), float(e))
                    for s, v, e in zip(s_grid, vals, errs)])
    records = [_series_record(series, {"relation": rel.name, "n": n, "k": k,
                                       "branch": branch,
                                       "theta_star": theta_star})]
    if "dyadic_k_list" in config:
        k_list = [int(v) for v in config["dyadic_k_list"]]
        t_fixed = float(config.get("dyadic_t", 200.0))
        slope = decay_fit.dyadic_scaling_fit(rel, n, t_fixed, k_list)
        predicted = float(config["dyadic_predicted"])
        tol = float(config.get("dyadic_tol", 0.2))
        records.append({
            "label": f"{rel.name} n={n} dyadic t={t_fixed:g}",
            "predicted": predicted, "fitted": slope, "slack": tol,
            "residual": 0.0, "sharp": True,
            "verdict": bool(abs(slope - predicted) <= tol)})
    return {"records": records}


def cmd_lowfreq_decay(config, out_dir, seed, slack):
    rel = _resolve_relation(config)
    n = int(config.get("n", 1))
    t = decay_fit.default_time_grid(float(config.get("t_min", 10.0)),
                                    float(config.get("t_max", 1e3)),
                                    int(config.get("n_t", 12)))
    series = decay_fit.lowfreq_decay_series(rel, n, t,
                                            tol=float(config.get("tol", 1e-6)),
                                            slack=slack)
    if out_dir is not None:
        rows = [(n, "lowfreq", float(tv), float(mv))
                for tv, mv in zip(series.t, series.M)]
        _write_csv(out_dir / "lowfreq_decay.csv", ("n", "k", "t", "sup_norm"), rows)
    return {"records": [_series_record(series, {"relation": rel.name, "n": n})]}


def _group_data(config, rel_for_box, n, t_max):
    xi_cut = float(config.get("xi_cut", 2.0))
    N, L = propagator.auto_box(rel_for_box, xi_cut, t_max)
    N = int(config.get("N", N))
    L = float(config.get("L", L))
    g = propagator.gaussian_field(n, N, L, width=float(config.get("width", 1.0)))
    return propagator.band_limit(g, xi_cut)


def cmd_group_decay(config, out_dir, seed, slack):
    records = []
    scenarios = config.get("scenarios") or [config]
    for sc in scenarios:
        group = sc.get("group", "kg")
        n = int(sc.get("n", 1))
        p = float(sc.get("p", math.inf))
        q = float(sc.get("q", 2.0))
        s = float(sc.get("s", 0.0))
        s2 = float(sc.get("s2", 0.0))
        theta = float(sc.get("theta", 1.0))
        t = np.geomspace(float(sc.get("t_min", 1.0)), float(sc.get("t_max", 32.0)),
                         int(sc.get("n_t", 10)))
        box_rel = dispersion.builtin(
            {"kg": "klein_gordon", "beam": "beam", "fourth": "schrodinger4"}[group])
        data = _group_data(sc, box_rel, n, t.max())
        series = propagator.group_decay_check(group, n, s, s2, p, q, data, t,
                                              theta=theta,
                                              slack=float(sc.get("slack", slack)))
        if out_dir is not None:
            _write_csv(out_dir / f"group_decay_{group}_n{n}.csv",
                       ("group", "n", "p", "q", "t", "ratio"),
                       [(group, n, p, q, float(tv), float(rv))
                        for tv, rv in zip(series.t, series.M)])
            # snapshot of the evolved field magnitude along the center line
            final = propagator._GROUPS[group](data, float(t[-1]))
            xs, mags = propagator.center_line_profile(final)
            _write_csv(out_dir / f"group_snapshot_{group}_n{n}.csv",
                       ("x", "abs"),
                       [(float(a), float(b)) for a, b in zip(xs, mags)])
        fitted_zero = sc.get("expect_zero_slope", False)
        rec = _series_record(series, {"group": group, "n": n, "p": p, "q": q})
        if fitted_zero:
            tol = float(sc.get("zero_tol", 0.02))
            rec["verdict"] = bool(abs(series.fitted_exponent) <= tol)
            rec["predicted"] = 0.0
            rec["slack"] = tol
        records.append(rec)
    return {"records": records}


def cmd_strichartz(config, out_dir, seed, slack):
    rel = _resolve_relation(config)
    n = int(config.get("n", 1))
    profile = strichartz.DecayProfile(
        theta1=float(config.get("theta1", 0.25)),
        theta2=float(config.get("theta2", 0.25)),
        alpha=float(config.get("alpha", 0.0)),
        p=float(config.get("p", 4.0)))
    report = strichartz.strichartz_stability_report(
        rel, n, float(config.get("q", 8.0)), profile.p,
        float(config.get("eta", 0.0)), profile.alpha, profile,
        trials=int(config.get("trials", 50)),
        T_list=tuple(config.get("T_list", (4.0, 8.0, 16.0))),
        N=int(config.get("N", 1024)), seed=seed,
        stability=float(config.get("stability", 0.3)))
    record = {"label": f"strichartz {rel.name} n={n}",
              "ratios": report["ratios"], "spread": report["spread"],
              "stability": 0.3, "verdict": report["pass"]}
    return {"records": [record]}


def cmd_hls(config, out_dir, seed, slack):
    spec = strichartz.HlsKernelSpec(
        gamma1=float(config.get("gamma1", 0.5)),
        gamma2=float(config.get("gamma2", 2.0)),
        p=float(config.get("p", 2.0)), q=float(config.get("q", 2.0)),
        n=int(config.get("n", 1)))
    try:
        result = strichartz.hls_numeric_check(
            spec, trials=int(config.get("trials", 20)),
            grid_n=int(config.get("grid_n", 4096)), seed=seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    record = {"label": f"hls gamma=({spec.gamma1},{spec.gamma2}) p={spec.p} q={spec.q}",
              "max_ratio": result["max_ratio"],
              "refined_ratio": result["refined_ratio"],
              "verdict": result["stable"],
              "note": "grid check restricted to 1 < p <= q < inf"}
    return {"records": [record]}


def cmd_nonlinear(config, out_dir, seed, slack):
    family = config.get("family", "kg")
    n = int(config.get("n", 1))
    kappa = float(config.get("kappa", 3.0))
    N = int(config.get("N", 512 if n == 1 else 128))
    L = float(config.get("L", 64.0 if n == 1 else 32.0))
    u0 = propagator.gaussian_field(n, N, L, width=float(config.get("width", 1.0)))
    u1 = propagator.gaussian_field(n, N, L, width=float(config.get("width", 1.0)))
    problem = nonlinear.NonlinearProblem(
        family=family, n=n, kappa=kappa, u0=u0, u1=u1,
        T=float(config.get("T", 4.0)), M_t=int(config.get("M_t", 128)),
        data_scale=float(config.get("data_scale", 1e-2)),
        s=float(config.get("s", 2.0)))
    result = nonlinear.picard_iterate(problem,
                                      max_iters=int(config.get("max_iters", 6)))
    rho_limit = float(config.get("rho_limit", 0.5))
    record = {
        "label": f"picard {family} n={n} kappa={kappa:g}",
        "conditions": problem.conditions(),
        "ratios": [float(r) for r in result.ratios],
        "increments": [float(d) for d in result.increments],
        "mixed_norms": [float(m) for m in result.mixed_norms],
        "rho_limit": rho_limit,
        "verdict": bool(result.converged
                        and all(r < rho_limit for r in result.ratios)),
    }
    if out_dir is not None:
        rows = [(j, float(d)) for j, d in enumerate(result.increments, start=1)]
        _write_csv(out_dir / f"picard_{family}_increments.csv",
                   ("iteration", "increment_l2"), rows)
        cell = (L / N) ** n
        final = result.last()
        axes = tuple(range(1, final.ndim))
        l2 = np.sqrt(cell * np.sum(np.abs(final) ** 2, axis=axes))
        lp = (cell * np.sum(np.abs(final) ** (2.0 + kappa), axis=axes)) \
            ** (1.0 / (2.0 + kappa))
        _write_csv(out_dir / f"picard_{family}_norms.csv",
                   ("t", "l2_norm", "l_2_plus_kappa_norm"),
                   [(float(tv), float(a), float(b))
                    for tv, a, b in zip(result.times, l2, lp)])
    records = [record]
    if config.get("threshold_scales"):
        threshold, trace = nonlinear.small_data_threshold(
            problem, [float(s) for s in config["threshold_scales"]],
            max_iters=int(config.get("max_iters", 6)), rho_limit=rho_limit)
        records.append({"label": f"threshold {family} n={n}",
                        "threshold": threshold,
                        "trace": [[float(s), bool(ok)] for s, ok in trace],
                        "verdict": threshold is not None})
    return {"records": records}


COMMANDS = {
    "hypotheses": cmd_hypotheses,
    "bessel-selftest": cmd_bessel_selftest,
    "kernel-decay": cmd_kernel_decay,
    "lowfreq-decay": cmd_lowfreq_decay,
    "group-decay": cmd_group_decay,
    "strichartz": cmd_strichartz,
    "hls": cmd_hls,
    "nonlinear": cmd_nonlinear,
}


def _record_passes(record):
    if "verdict" in record:
        return bool(record["verdict"])
    if "pass" in record:
        return bool(record["pass"])
    return True


def run_command(command, config=None, out_dir=None, seed=0, slack=0.1):
    """Execute one verification pipeline and return its report dict."""
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}; known: {sorted(COMMANDS)}")
    config = config or {}
    out_path = Path(out_dir) if out_dir is not None else None
    body = COMMANDS[command](config, out_path, seed, slack)
    report = {
        "command": command,
        "parameters": {"config": config, "seed": seed, "slack": slack},
        "records": body["records"],
        "pass": all(_record_passes(r) for r in body["records"]),
    }
    return report


def report_merge(paths):
    """Concatenate report records and recompute the aggregate flag."""
    records = []
    for path in paths:
        with open(path) as fh:
            data = json.load(fh)
        records.extend(data.get("records", []))
    merged = {"command": "merge", "records": records,
              "pass": all(_record_passes(r) for r in records)}
    if not records:
        merged["no_data"] = True
    return merged


def write_report(report, out_dir, name="report.json", timestamp=True):
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    payload = dict(report)
    if timestamp:
        payload["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    path = out / name
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="dispdecay",
        description="numerical verification suites for dispersive decay estimates")
    parser.add_argument("command", choices=sorted(COMMANDS) + ["merge"])
    parser.add_argument("inputs", nargs="*", help="report paths for merge")
    parser.add_argument("--config", type=Path, default=None,
                        help="JSON scenario configuration")
    parser.add_argument("--out", type=Path, default=Path("out"),
                        help="output directory for report and CSV files")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--slack", type=float, default=0.1)
    args = parser.parse_args(argv)

    try:
        if args.command == "merge":
            report = report_merge(args.inputs)
        else:
            config = {}
            if args.config is not None:
                try:
                    config = json.loads(args.config.read_text())
                except (OSError, json.JSONDecodeError) as exc:
                    raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
            report = run_command(args.command, config, out_dir=args.out,
                                 seed=args.seed, slack=args.slack)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    path = write_report(report, args.out)
    for record in report["records"]:
        status = "pass" if _record_passes(record) else "FAIL"
        label = record.get("label") or record.get("relation", "record")
        print(f"[{status}] {label}")
    print(f"report: {path}")
    if not report["pass"]:
        failing = [r.get("label", "record") for r in report["records"]
                   if not _record_passes(r)]
        print(f"failing records: {failing}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
