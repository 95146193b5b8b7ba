"""Command-line front end.

Subcommands: ``tradeoff`` (emit curve knots), ``bound`` (risk-bound tables),
``calibrate`` (noise calibration), ``queries`` (Laplace query-count case
study), ``verify`` (brute-force oracle corpus). Output is CSV by default,
``--format json`` as alternative. Exit codes: 0 success, 2 parse/config
error, 3 infeasible calibration, 4 verification failure.
"""

from __future__ import annotations

import argparse
import configparser
import io
import json
import os
import sys

import numpy as np

from . import accountant, calibrate, oracle, prior_bounds, risk, tradeoff
from .accountant import MechanismSpec
from .calibrate import CalibrationRequest, InfeasibleTargetError
from .risk import RISK_REPORT_CSV_HEADER, BaselineSpec, RiskReport
from .tradeoff import ParameterError, TradeoffCurve

OUTPUT_DIR_ENV = "FDPRISK_OUTPUT_DIR"

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_VERIFY = 4


def _open_output(path: str | None):
    """stdout when no path; otherwise a file under $FDPRISK_OUTPUT_DIR."""
    if path is None:
        return sys.stdout, False
    if not os.path.isabs(path):
        base = os.environ.get(OUTPUT_DIR_ENV, "")
        if base:
            path = os.path.join(base, path)
    return open(path, "w"), True


def _emit(args, text: str) -> None:
    out, close = _open_output(getattr(args, "output", None))
    try:
        out.write(text)
    finally:
        if close:
            out.close()


# --------------------------------------------------------------------------
# tradeoff

def _curve_from_args(args) -> TradeoffCurve:
    if args.gaussian_mu is not None:
        return tradeoff.gaussian_curve(args.gaussian_mu)
    if args.laplace_eps is not None:
        return tradeoff.laplace_curve(args.laplace_eps)
    if args.rr_p is not None:
        return accountant.randomized_response_curve(args.rr_p)
    if args.epsilon is not None:
        return tradeoff.curve_from_epsilon_delta(args.epsilon, args.delta or 0.0)
    if args.profile is not None:
        with open(args.profile) as fh:
            return tradeoff.curve_from_profile(tradeoff.profile_from_csv(fh))
    if args.curve is not None:
        with open(args.curve) as fh:
            return tradeoff.curve_from_csv(fh)
    if args.mechanism is not None:
        return accountant.curve_of(accountant.spec_from_config(args.mechanism))
    raise ParameterError(
        "specify a curve source: --gaussian-mu, --laplace-eps, --rr-p, "
        "--epsilon [--delta], --profile, --curve, or --mechanism")


def cmd_tradeoff(args) -> int:
    curve = _curve_from_args(args)
    grid = tradeoff.default_alpha_grid(args.grid_points)
    knots = curve.as_knots(None if curve.is_piecewise else grid)
    if args.format == "json":
        payload = {"provenance": curve.provenance,
                   "knots": [{"alpha": float(a), "f": float(b)}
                             for a, b in knots]}
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        buf = io.StringIO()
        tradeoff.curve_to_csv(curve, buf,
                              None if curve.is_piecewise else grid)
        _emit(args, buf.getvalue())
    return EXIT_OK


# --------------------------------------------------------------------------
# bound

def parse_baseline(text: str) -> tuple[str, BaselineSpec]:
    """Parse ``fixed:0.1`` / ``pso:5000:2e-4`` / ``spso:1e-4`` /
    ``bernoulli:0.5`` / ``worst_case`` baseline descriptors."""
    parts = text.strip().split(":")
    kind = parts[0].strip().lower()
    try:
        if kind == "fixed":
            return text, BaselineSpec.fixed(float(parts[1]))
        if kind == "pso":
            return text, BaselineSpec.pso_weight(int(parts[1]), float(parts[2]))
        if kind == "spso":
            return text, BaselineSpec.spso_weight(float(parts[1]))
        if kind == "bernoulli":
            return text, BaselineSpec.bernoulli(float(parts[1]))
        if kind == "worst_case":
            return text, BaselineSpec.worst_case()
    except (IndexError, ValueError) as exc:
        raise ParameterError(f"bad baseline {text!r}: {exc}") from None
    raise ParameterError(f"unknown baseline kind in {text!r}")


def _parse_method(text: str) -> tuple[str, float | None]:
    """Method token -> (method, rdp_order). ``rdp-t2`` pins the order."""
    m = text.strip().lower()
    if m.startswith("rdp-t"):
        try:
            return "rdp", float(m[5:])
        except ValueError:
            raise ParameterError(f"bad RDP order in method {text!r}") from None
    if m in ("fdp", "rdp", "zcdp", "eps_delta"):
        return m, None
    raise ParameterError(f"unknown method {text!r}")


def _load_scenario(path: str) -> dict:
    cp = configparser.ConfigParser()
    try:
        with open(path) as fh:
            cp.read_string(fh.read())
    except (OSError, configparser.Error) as exc:
        raise ParameterError(f"cannot read scenario {path!r}: {exc}") from None
    if not cp.has_section("mechanism"):
        raise ParameterError("scenario needs a [mechanism] section")
    mech_sec = dict(cp["mechanism"])
    mech: dict = {"section": mech_sec}
    if "curve_file" in mech_sec:
        with open(mech_sec["curve_file"]) as fh:
            mech["kind"] = "curve"
            mech["curve"] = tradeoff.curve_from_csv(fh)
    elif "profile_file" in mech_sec:
        with open(mech_sec["profile_file"]) as fh:
            mech["kind"] = "curve"
            mech["curve"] = tradeoff.curve_from_profile(
                tradeoff.profile_from_csv(fh))
    elif "epsilon" in mech_sec and "family" not in mech_sec:
        mech["kind"] = "eps_delta"
        mech["epsilon"] = float(mech_sec["epsilon"])
        mech["delta"] = float(mech_sec.get("delta", "0"))
        mech["curve"] = tradeoff.curve_from_epsilon_delta(mech["epsilon"],
                                                          mech["delta"])
    else:
        mech["kind"] = "spec"
        mech["spec"] = accountant.spec_from_config(
            "[mechanism]\n" + "\n".join(f"{k} = {v}"
                                        for k, v in mech_sec.items()),
            is_text=True)
        mech["curve"] = accountant.curve_of(mech["spec"])
    baselines = []
    if cp.has_section("baselines"):
        for _, v in cp["baselines"].items():
            baselines.append(parse_baseline(v))
    methods = []
    if cp.has_section("methods"):
        raw = cp["methods"].get("methods", "")
        for tok in raw.split(","):
            if tok.strip():
                methods.append((tok.strip(), *_parse_method(tok)))
    if not baselines or not methods:
        raise ParameterError("scenario needs at least one baseline and one method")
    name = cp["scenario"].get("name", "scenario") if cp.has_section("scenario") \
        else "scenario"
    return {"name": name, "mechanism": mech, "baselines": baselines,
            "methods": methods}


def _mech_params(mech: dict) -> dict:
    if mech["kind"] == "spec":
        s = mech["spec"]
        return {"family": s.family, "noise_scale": s.noise_scale,
                "sensitivity": s.sensitivity, "compositions": s.compositions,
                "neighborhood": s.neighborhood}
    if mech["kind"] == "eps_delta":
        return {"epsilon": mech["epsilon"], "delta": mech["delta"]}
    return {"curve": mech["curve"].provenance}


def _bound_report(mech: dict, baseline_label: str, baseline: BaselineSpec,
                  method_label: str, method: str,
                  rdp_order: float | None) -> RiskReport:
    params = _mech_params(mech)
    params["baseline"] = baseline_label
    curve = mech["curve"]

    if baseline.kind == "pso_weight":
        if method == "fdp":
            succ = prior_bounds.pso_bound_fdp(baseline.n, baseline.w, curve)
        elif method == "eps_delta":
            if mech["kind"] != "eps_delta":
                raise ParameterError(
                    "eps_delta PSO bound needs an (epsilon, delta) mechanism")
            succ = prior_bounds.pso_bound_eps_delta(
                baseline.n, baseline.w, mech["epsilon"], mech["delta"])
        else:
            raise ParameterError(
                f"method {method_label!r} has no singling-out bound")
        base = risk.baseline_value(baseline)
        return RiskReport(method=method_label, baseline_value=base,
                          success_bound=succ,
                          advantage_bound=max(0.0, succ - base),
                          parameters=params)

    if method == "fdp":
        if baseline.kind == "worst_case":
            adv = risk.adv_bound_worst_case(curve)
            return RiskReport(method=method_label, baseline_value=0.0,
                              success_bound=1.0, advantage_bound=adv,
                              parameters=params)
        if baseline.kind == "bernoulli":
            base = risk.baseline_value(baseline)
            succ = risk.bernoulli_succ_bound(curve, baseline.pi)
        else:
            base = risk.baseline_value(baseline)
            succ = risk.succ_bound(curve, base)
        return RiskReport(method=method_label, baseline_value=base,
                          success_bound=succ,
                          advantage_bound=max(0.0, succ - base),
                          parameters=params)

    if mech["kind"] != "spec":
        raise ParameterError(
            f"method {method_label!r} needs a parametric mechanism spec")
    spec = mech["spec"]
    req = CalibrationRequest(family=spec.family, target_kind="advantage",
                             target_value=0.5, baseline=baseline,
                             method=method, sensitivity=spec.sensitivity,
                             compositions=spec.compositions,
                             rdp_order=rdp_order)
    if baseline.kind == "worst_case":
        adv = calibrate.risk_at(req, spec.noise_scale)
        return RiskReport(method=method_label, baseline_value=0.0,
                          success_bound=1.0, advantage_bound=adv,
                          parameters=params)
    base = risk.baseline_value(baseline)
    succ = calibrate._succ_at_base(req, spec.noise_scale, base)
    return RiskReport(method=method_label, baseline_value=base,
                      success_bound=min(1.0, succ),
                      advantage_bound=max(0.0, min(1.0, succ) - base),
                      parameters=params)


def cmd_bound(args) -> int:
    scenario = _load_scenario(args.scenario)
    rows: list[str] = []
    reports: list[RiskReport] = []
    errors: list[str] = []
    n_ok = 0
    for b_label, baseline in scenario["baselines"]:
        for m_label, method, order in scenario["methods"]:
            try:
                rep = _bound_report(scenario["mechanism"], b_label, baseline,
                                    m_label, method, order)
                reports.append(rep)
                rows.append(rep.csv_row())
                n_ok += 1
            except ParameterError as exc:
                msg = str(exc).replace(",", ";").replace("\n", " ")
                rows.append(f"{m_label},,,,baseline={b_label};error:{msg}")
                errors.append(f"{b_label}/{m_label}: {exc}")
    if args.format == "json":
        payload = [r.to_json_dict() for r in reports]
        for err in errors:
            payload.append({"error": err})
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        _emit(args, RISK_REPORT_CSV_HEADER + "\n" + "\n".join(rows) + "\n")
    if n_ok == 0:
        print("all bound rows failed", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


# --------------------------------------------------------------------------
# calibrate

def cmd_calibrate(args) -> int:
    _, baseline = parse_baseline(args.baseline)
    if args.target_adv is not None:
        target_kind, target_value = "advantage", args.target_adv
    elif args.target_succ is not None:
        target_kind, target_value = "success", args.target_succ
    else:
        raise ParameterError("specify --target-adv or --target-succ")
    results = []
    for method_label in args.methods.split(","):
        method, order = _parse_method(method_label)
        req = CalibrationRequest(
            family=args.family, target_kind=target_kind,
            target_value=target_value, baseline=baseline, method=method,
            sensitivity=args.sensitivity, compositions=args.compositions,
            rdp_order=order, eps_delta_delta=args.delta,
            tolerance=args.tolerance)
        res = calibrate.calibrate_noise(req)
        results.append((method_label.strip(), res))
    ref = results[0][1].noise_scale
    if args.format == "json":
        payload = [{"method": label, "noise_scale": r.noise_scale,
                    "status": r.status, "achieved_risk": r.achieved_risk,
                    "ratio_to_first": r.noise_scale / ref}
                   for label, r in results]
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        lines = ["method,noise_scale,status,achieved_risk,ratio_to_first"]
        for label, r in results:
            lines.append(f"{label},{r.noise_scale:.17g},{r.status},"
                         f"{r.achieved_risk:.17g},{r.noise_scale / ref:.17g}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# queries

def cmd_queries(args) -> int:
    eps = args.sensitivity / args.b
    rows = []
    max_k_fdp = 0
    max_k_std = 0
    for k in range(1, args.k_max + 1):
        spec = MechanismSpec(family="laplace", noise_scale=args.b,
                             sensitivity=args.sensitivity, compositions=k)
        f_fdp = accountant.curve_of(spec, grid_step=args.grid_step)
        adv_fdp = risk.adv_bound(f_fdp, args.base)
        eps_g, _ = prior_bounds.optimal_composition_pure(eps, k,
                                                         args.delta_std)
        f_std = tradeoff.curve_from_epsilon_delta(eps_g, args.delta_std)
        adv_std = risk.adv_bound(f_std, args.base)
        ok_fdp = adv_fdp <= args.target_adv
        ok_std = adv_std <= args.target_adv
        if ok_fdp:
            max_k_fdp = max(max_k_fdp, k)
        if ok_std:
            max_k_std = max(max_k_std, k)
        rows.append((k, adv_fdp, adv_std, int(ok_fdp), int(ok_std)))
    if args.format == "json":
        payload = {
            "per_query_epsilon": eps,
            "max_feasible_k_fdp": max_k_fdp,
            "max_feasible_k_standard": max_k_std,
            "rows": [{"k": k, "adv_fdp": a, "adv_standard": s,
                      "feasible_fdp": bool(ff), "feasible_standard": bool(fs)}
                     for k, a, s, ff, fs in rows],
        }
        _emit(args, json.dumps(payload, indent=2) + "\n")
    else:
        lines = ["k,adv_fdp,adv_standard,feasible_fdp,feasible_standard"]
        for k, a, s, ff, fs in rows:
            lines.append(f"{k},{a:.17g},{s:.17g},{ff},{fs}")
        lines.append(f"# max_feasible_k_fdp={max_k_fdp} "
                     f"max_feasible_k_standard={max_k_std}")
        _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


# --------------------------------------------------------------------------
# verify

def _curve_invariant_violations(curve: TradeoffCurve,
                                grid: np.ndarray) -> list[str]:
    errs = []
    vals = curve(grid)
    if np.any(vals < -1e-12) or np.any(vals > 1.0 + 1e-12):
        errs.append("range outside [0, 1]")
    if np.any(vals - (1.0 - grid) > 1e-9):
        errs.append("f(alpha) exceeds 1 - alpha")
    if np.any(np.diff(vals) > 1e-12):
        errs.append("not non-increasing")
    if curve.is_piecewise:
        k = curve.knots
        slopes = np.diff(k[:, 1]) / np.diff(k[:, 0])
        if np.any(np.diff(slopes) < -1e-9):
            errs.append("knot slopes decrease (non-convex)")
    return errs


def run_verification(seed: int = 0, n_pairs: int = 60,
                     inject_violation: bool = False) -> tuple[bool, list[str]]:
    """Oracle corpus: curve invariants, TV consistency, attack soundness."""
    rng = np.random.default_rng(seed)
    lines = []
    ok = True
    grid = np.linspace(0.0, 1.0, 2001)

    n_inv = n_tv = n_sound = 0
    for i in range(n_pairs):
        size = int(rng.integers(2, 9))
        p = rng.dirichlet(np.ones(size))
        q = rng.dirichlet(np.ones(size))
        p = p / p.sum()
        q = q / q.sum()
        pair = oracle.DiscretePair(p=p, q=q)
        curve = oracle.exact_tradeoff(pair)
        errs = _curve_invariant_violations(curve, grid)
        if errs:
            ok = False
            lines.append(f"FAIL pair {i}: {'; '.join(errs)}")
        else:
            n_inv += 1
        tv = oracle.exact_tv(pair)
        if abs(tv - tradeoff.tv_from_curve(curve).eta) > 1e-10:
            ok = False
            lines.append(f"FAIL pair {i}: TV mismatch")
        else:
            n_tv += 1
        # two-candidate attack soundness against the success bound
        pi = float(rng.uniform(0.05, 0.95))
        prior = np.array([pi, 1.0 - pi])
        channels = np.vstack([p, q])
        succ = oracle.optimal_attack_success(channels, prior)
        bound = risk.succ_bound(curve, max(pi, 1.0 - pi))
        if succ - bound > 1e-12:
            ok = False
            lines.append(f"FAIL pair {i}: attack success {succ} exceeds "
                         f"bound {bound}")
        else:
            n_sound += 1
    lines.append(f"{'PASS' if n_inv == n_pairs else 'FAIL'} curve invariants "
                 f"({n_inv}/{n_pairs})")
    lines.append(f"{'PASS' if n_tv == n_pairs else 'FAIL'} TV consistency "
                 f"({n_tv}/{n_pairs})")
    lines.append(f"{'PASS' if n_sound == n_pairs else 'FAIL'} attack-success "
                 f"soundness ({n_sound}/{n_pairs})")

    # randomized-response tightness: the two-candidate Bayes success bound
    # is achieved exactly by the optimal attack
    p_flip = 0.25
    pair = oracle.DiscretePair(p=np.array([1 - p_flip, p_flip]),
                               q=np.array([p_flip, 1 - p_flip]))
    succ = oracle.optimal_attack_success(
        np.vstack([pair.p, pair.q]), np.array([0.5, 0.5]))
    bound = risk.bernoulli_succ_bound(oracle.exact_tradeoff(pair), 0.5)
    gap = bound - succ
    if abs(gap) <= 1e-9:
        lines.append(f"PASS randomized-response tightness (gap {gap:.2e})")
    else:
        ok = False
        lines.append(f"FAIL randomized-response tightness (gap {gap:.2e})")

    if inject_violation:
        bad = TradeoffCurve(kind="piecewise", provenance="injected",
                            knots=np.array([[0.0, 1.0], [0.5, 0.1],
                                            [0.6, 0.4], [1.0, 0.0]]))
        errs = _curve_invariant_violations(bad, grid)
        if errs:
            ok = False
            lines.append(f"FAIL injected curve: {'; '.join(errs)}")
        else:
            lines.append("PASS injected curve (unexpected)")

    lines.append("VERIFICATION " + ("PASSED" if ok else "FAILED"))
    return ok, lines


def cmd_verify(args) -> int:
    ok, lines = run_verification(seed=args.seed, n_pairs=args.pairs,
                                 inject_violation=args.inject_violation)
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK if ok else EXIT_VERIFY


# --------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fdprisk",
        description="Privacy-risk bounds from trade-off curves")
    sub = ap.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--output", help="output file (relative paths resolve "
                       f"under ${OUTPUT_DIR_ENV} when set)")
        p.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("tradeoff", help="emit trade-off curve knots")
    p.add_argument("--gaussian-mu", type=float)
    p.add_argument("--laplace-eps", type=float)
    p.add_argument("--rr-p", type=float)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--profile", help="epsilon,delta CSV file")
    p.add_argument("--curve", help="alpha,f CSV file")
    p.add_argument("--mechanism", help="mechanism config file")
    p.add_argument("--grid-points", type=int, default=2001)
    add_common(p)
    p.set_defaults(func=cmd_tradeoff)

    p = sub.add_parser("bound", help="risk-bound table for a scenario")
    p.add_argument("--scenario", required=True, help="scenario config file")
    add_common(p)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("calibrate", help="calibrate noise to a target risk")
    p.add_argument("--family", required=True,
                   choices=("gaussian", "laplace", "randomized_response"))
    p.add_argument("--target-adv", type=float)
    p.add_argument("--target-succ", type=float)
    p.add_argument("--baseline", default="worst_case",
                   help="e.g. fixed:0.1, bernoulli:0.5, worst_case")
    p.add_argument("--methods", default="fdp",
                   help="comma list: fdp, zcdp, rdp, rdp-t2, eps_delta")
    p.add_argument("--sensitivity", type=float, default=1.0)
    p.add_argument("--compositions", type=int, default=1)
    p.add_argument("--delta", type=float, default=1e-5,
                   help="delta for the eps_delta method")
    p.add_argument("--tolerance", type=float, default=1e-4)
    add_common(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("queries", help="Laplace query-count case study")
    p.add_argument("--b", type=float, default=5.0, help="Laplace scale")
    p.add_argument("--k-max", type=int, default=20)
    p.add_argument("--base", type=float, default=0.1)
    p.add_argument("--target-adv", type=float, default=0.2)
    p.add_argument("--delta-std", type=float, default=1e-9,
                   help="delta for the optimal-composition comparison path")
    p.add_argument("--sensitivity", type=float, default=1.0)
    p.add_argument("--grid-step", type=float, default=1e-4)
    add_common(p)
    p.set_defaults(func=cmd_queries)

    p = sub.add_parser("verify", help="run the brute-force oracle corpus")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=int, default=60)
    p.add_argument("--inject-violation", action="store_true",
                   help=argparse.SUPPRESS)
    add_common(p)
    p.set_defaults(func=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InfeasibleTargetError as exc:
        print(f"infeasible target: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ParameterError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
