"""Noise calibration: invert a risk bound to the minimal noise scale.

Given a mechanism family, a baseline, and a target advantage (or success),
find the smallest noise scale whose bound meets the target, under any of the
supported accounting methods. Risk is monotone non-increasing in the noise
scale for every supported (family, method) pair, so robust bisection on the
log scale suffices.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np

from . import accountant, prior_bounds, risk
from .accountant import MechanismSpec
from .risk import BaselineSpec
from .tradeoff import (ParameterError, curve_from_epsilon_delta,
                       delta_for_epsilon)

METHODS = ("fdp", "rdp", "zcdp", "eps_delta")


class InfeasibleTargetError(RuntimeError):
    """The target risk cannot be met within the expanded noise bracket."""


class ConsistencyError(RuntimeError):
    """Risk failed to decrease with noise; calibration assumptions violated."""


@dataclasses.dataclass(frozen=True)
class CalibrationRequest:
    """Everything needed to calibrate: mechanism family, target, method."""

    family: str
    target_kind: str  # "advantage" or "success"
    target_value: float
    baseline: BaselineSpec
    method: str = "fdp"
    sensitivity: float = 1.0
    compositions: int = 1
    rdp_order: float | None = None  # None = optimize over a continuum of orders
    eps_delta_delta: float = 1e-5  # delta at which the eps_delta method reads off eps
    tolerance: float = 1e-4
    bracket: tuple = (1e-3, 1e3)

    def __post_init__(self):
        if self.method not in METHODS:
            raise ParameterError(f"unknown method {self.method!r}")
        if self.target_kind not in ("advantage", "success"):
            raise ParameterError(f"unknown target kind {self.target_kind!r}")
        if not 0.0 < self.target_value <= 1.0:
            raise ParameterError("target value must lie in (0, 1]")
        lo, hi = self.bracket
        if not (0 < lo < hi):
            raise ParameterError("bracket must satisfy 0 < lo < hi")
        if not self.tolerance > 0:
            raise ParameterError("tolerance must be > 0")
        if self.rdp_order is not None and not self.rdp_order > 1:
            raise ParameterError("rdp_order must be > 1")


@dataclasses.dataclass(frozen=True)
class CalibrationResult:
    noise_scale: float
    status: str  # "ok" or "trivial"
    achieved_risk: float
    method: str
    target_kind: str
    target_value: float


# --------------------------------------------------------------------------
# risk evaluation per method

def _rdp_epsilon_fn(family: str, noise_scale: float, sensitivity: float,
                    k: int):
    """Composed RDP curve t -> eps(t) of the mechanism (vectorized in t)."""
    if family == "gaussian":
        mu = sensitivity / noise_scale
        return lambda t: k * np.asarray(t) * mu * mu / 2.0
    if family == "laplace":
        eps = sensitivity / noise_scale

        def eps_of_t(t):
            t = np.asarray(t, dtype=float)
            inner = (t / (2.0 * t - 1.0)) * np.exp((t - 1.0) * eps) \
                + ((t - 1.0) / (2.0 * t - 1.0)) * np.exp(-t * eps)
            return k * np.log(inner) / (t - 1.0)

        return eps_of_t
    raise ParameterError(f"RDP accounting not supported for family {family!r}")


def _succ_at_bases(req: CalibrationRequest, noise_scale: float,
                   bases: np.ndarray) -> np.ndarray:
    """Success bound at an array of scalar baselines under the method."""
    bases = np.asarray(bases, dtype=float)
    spec = MechanismSpec(family=req.family, noise_scale=noise_scale,
                         sensitivity=req.sensitivity,
                         compositions=req.compositions)
    if req.method == "fdp":
        f = accountant.curve_of(spec)
        return np.clip(1.0 - f(bases), bases, 1.0)
    if req.method == "zcdp":
        if req.family != "gaussian":
            raise ParameterError("zCDP accounting requires the Gaussian family")
        mu2 = (req.sensitivity / noise_scale) ** 2 * req.compositions
        rho = mu2 / 2.0
        with np.errstate(divide="ignore"):
            root_log = np.sqrt(-np.log(np.maximum(bases, 1e-300)))
        vals = np.where(root_log >= math.sqrt(rho),
                        np.exp(-(root_log - math.sqrt(rho)) ** 2), 1.0)
        return np.where(bases == 0.0, 0.0, np.clip(vals, bases, 1.0))
    if req.method == "rdp":
        eps_of_t = _rdp_epsilon_fn(req.family, noise_scale, req.sensitivity,
                                   req.compositions)
        if req.rdp_order is not None:
            grid = [req.rdp_order]
        else:
            grid = prior_bounds.default_t_grid()
        return prior_bounds.srr_bound_rdp_curve(bases, eps_of_t, grid)
    # eps_delta: read off the smallest eps at the configured delta, then use
    # the single-pair (eps, delta) curve
    eps = _epsilon_at_delta(spec, req.eps_delta_delta)
    f = curve_from_epsilon_delta(eps, req.eps_delta_delta)
    return np.clip(1.0 - f(bases), bases, 1.0)


def _succ_at_base(req: CalibrationRequest, noise_scale: float,
                  base: float) -> float:
    """Success bound at a fixed scalar baseline under the requested method."""
    return float(_succ_at_bases(req, noise_scale, np.array([base]))[0])


def _epsilon_at_delta(spec: MechanismSpec, delta: float) -> float:
    """Smallest eps such that the mechanism satisfies (eps, delta)-DP."""
    f = accountant.curve_of(spec)
    if delta_for_epsilon(f, 0.0) <= delta:
        return 0.0
    lo, hi = 0.0, 1.0
    while delta_for_epsilon(f, hi) > delta:
        hi *= 2.0
        if hi > 1e6:
            raise ParameterError("cannot find finite epsilon at this delta")
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if delta_for_epsilon(f, mid) <= delta:
            hi = mid
        else:
            lo = mid
    return hi


def _worst_case_adv(req: CalibrationRequest, noise_scale: float) -> float:
    """Largest advantage over all scalar baselines under the method."""
    if req.method == "fdp":
        spec = MechanismSpec(family=req.family, noise_scale=noise_scale,
                             sensitivity=req.sensitivity,
                             compositions=req.compositions)
        return risk.adv_bound_worst_case(accountant.curve_of(spec))
    bases = np.concatenate([np.linspace(1e-6, 1.0 - 1e-6, 512),
                            np.logspace(-9, -0.05, 128)])
    vals = _succ_at_bases(req, noise_scale, bases) - bases
    i = int(np.argmax(vals))
    best, b0 = float(vals[i]), float(bases[i])
    lo = max(1e-9, b0 - 5e-3)
    hi = min(1.0 - 1e-9, b0 + 5e-3)
    for _ in range(6):
        bs = np.linspace(lo, hi, 65)
        vs = _succ_at_bases(req, noise_scale, bs) - bs
        j = int(np.argmax(vs))
        if vs[j] > best:
            best, b0 = float(vs[j]), float(bs[j])
        span = (hi - lo) / 16.0
        lo, hi = max(1e-9, b0 - span), min(1.0 - 1e-9, b0 + span)
    return max(0.0, best)


def risk_at(req: CalibrationRequest, noise_scale: float) -> float:
    """The requested risk bound (advantage or success) at one noise scale."""
    if not noise_scale > 0:
        raise ParameterError("noise_scale must be > 0")
    baseline = req.baseline
    if baseline.kind == "worst_case":
        if req.target_kind == "success":
            raise ParameterError(
                "worst-case baseline admits no success target; use advantage")
        return _worst_case_adv(req, noise_scale)
    if baseline.kind == "bernoulli" and req.method == "fdp":
        spec = MechanismSpec(family=req.family, noise_scale=noise_scale,
                             sensitivity=req.sensitivity,
                             compositions=req.compositions)
        succ = risk.bernoulli_succ_bound(accountant.curve_of(spec), baseline.pi)
        base = risk.baseline_value(baseline)
    else:
        base = risk.baseline_value(baseline)
        succ = _succ_at_base(req, noise_scale, base)
    if req.target_kind == "success":
        return succ
    return max(0.0, succ - base)


# --------------------------------------------------------------------------
# calibration loop

def calibrate_noise(req: CalibrationRequest) -> CalibrationResult:
    """Minimal noise scale whose risk bound meets the target.

    Bisection on log noise scale; the bracket auto-expands up to 2^16 in each
    direction before the target is declared infeasible. A target already met
    at the bracket's low end returns it with a trivial-target flag.
    """
    lo, hi = float(req.bracket[0]), float(req.bracket[1])
    risk_lo = risk_at(req, lo)
    risk_hi = risk_at(req, hi)

    if risk_lo <= req.target_value:
        return CalibrationResult(noise_scale=lo, status="trivial",
                                 achieved_risk=risk_lo, method=req.method,
                                 target_kind=req.target_kind,
                                 target_value=req.target_value)
    expansions = 0
    while risk_hi > req.target_value:
        expansions += 1
        if 2.0 ** expansions > 2 ** 16:
            raise InfeasibleTargetError(
                f"target {req.target_kind}={req.target_value} unreachable: "
                f"risk at noise_scale={hi} is still {risk_hi:.6g}")
        hi *= 2.0
        risk_hi = risk_at(req, hi)
    if risk_hi > risk_lo + 1e-9:
        raise ConsistencyError("risk increased with noise scale")

    log_lo, log_hi = math.log(lo), math.log(hi)
    while log_hi - log_lo > req.tolerance:
        mid = 0.5 * (log_lo + log_hi)
        if risk_at(req, math.exp(mid)) <= req.target_value:
            log_hi = mid
        else:
            log_lo = mid
    sigma = math.exp(log_hi)
    achieved = risk_at(req, sigma)
    if achieved > req.target_value + 1e-12:
        raise ConsistencyError("bisection landed above the target")
    return CalibrationResult(noise_scale=sigma, status="ok",
                             achieved_risk=achieved, method=req.method,
                             target_kind=req.target_kind,
                             target_value=req.target_value)
