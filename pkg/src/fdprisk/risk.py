"""Unified attack-risk bounds driven by a trade-off curve.

Success and advantage bounds for singling-out / reconstruction /
attribute-inference style attacks with a known baseline, the worst-case
(baseline-independent) TV bound, the Bernoulli-prior Bayes-error refinement,
and generalization / memorization / reconstruction corollaries.
"""

from __future__ import annotations

import dataclasses
import json

import numpy as np
from scipy import optimize

from .tradeoff import ParameterError, TradeoffCurve, group_privacy, tv_from_curve


@dataclasses.dataclass(frozen=True)
class BaselineSpec:
    """Attack baseline: best success achievable without the output.

    kind is one of fixed / pso_weight / spso_weight / bernoulli / worst_case.
    """

    kind: str
    base: float | None = None
    n: int | None = None
    w: float | None = None
    pi: float | None = None

    def __post_init__(self):
        k = self.kind
        if k == "fixed":
            if self.base is None or not 0.0 <= self.base <= 1.0:
                raise ParameterError("fixed baseline needs base in [0, 1]")
        elif k == "pso_weight":
            if self.n is None or self.n <= 1:
                raise ParameterError("pso_weight needs integer n > 1")
            if self.w is None or not 0.0 <= self.w <= 1.0 / self.n:
                raise ParameterError("pso_weight needs w in [0, 1/n]")
        elif k == "spso_weight":
            if self.w is None or not 0.0 <= self.w <= 1.0:
                raise ParameterError("spso_weight needs w in [0, 1]")
        elif k == "bernoulli":
            if self.pi is None or not 0.0 <= self.pi <= 1.0:
                raise ParameterError("bernoulli needs pi in [0, 1]")
        elif k != "worst_case":
            raise ParameterError(f"unknown baseline kind {k!r}")

    @classmethod
    def fixed(cls, base: float) -> "BaselineSpec":
        return cls(kind="fixed", base=base)

    @classmethod
    def pso_weight(cls, n: int, w: float) -> "BaselineSpec":
        return cls(kind="pso_weight", n=n, w=w)

    @classmethod
    def spso_weight(cls, w: float) -> "BaselineSpec":
        return cls(kind="spso_weight", w=w)

    @classmethod
    def bernoulli(cls, pi: float) -> "BaselineSpec":
        return cls(kind="bernoulli", pi=pi)

    @classmethod
    def worst_case(cls) -> "BaselineSpec":
        return cls(kind="worst_case")


def baseline_value(spec: BaselineSpec) -> float:
    """Scalar baseline of a spec; worst_case has none and raises."""
    if spec.kind == "fixed":
        return float(spec.base)
    if spec.kind == "pso_weight":
        return float(spec.n * spec.w * (1.0 - spec.w) ** (spec.n - 1))
    if spec.kind == "spso_weight":
        return float(spec.w)
    if spec.kind == "bernoulli":
        return float(max(spec.pi, 1.0 - spec.pi))
    raise ParameterError("worst_case baseline has no scalar value")


def _check_base(base: float) -> float:
    if not 0.0 <= base <= 1.0:
        raise ParameterError(f"baseline must lie in [0, 1], got {base}")
    return float(base)


def succ_bound(f: TradeoffCurve, base: float) -> float:
    """Attack success is at most 1 - f(base)."""
    base = _check_base(base)
    return float(min(1.0, max(base, 1.0 - f(base))))


def adv_bound(f: TradeoffCurve, base: float) -> float:
    """Attack advantage is at most 1 - f(base) - base, floored at 0."""
    base = _check_base(base)
    return float(max(0.0, 1.0 - f(base) - base))


def adv_bound_worst_case(f: TradeoffCurve) -> float:
    """Advantage over any baseline is at most the TV parameter eta."""
    return tv_from_curve(f).eta


def bayes_error(f: TradeoffCurve, pi: float) -> float:
    """Minimal weighted test error R_f(pi) = min_alpha (pi*alpha + (1-pi)*f(alpha)).

    Piecewise-linear curves are minimized exactly at knots (the objective is
    linear per segment); analytic curves use bounded scalar minimization
    seeded by a dense grid.
    """
    if not 0.0 <= pi <= 1.0:
        raise ParameterError(f"pi must lie in [0, 1], got {pi}")

    def obj(a):
        return pi * np.asarray(a, dtype=float) + (1.0 - pi) * f(a)

    if f.is_piecewise:
        return float(np.min(obj(f.knots[:, 0])))
    grid = np.concatenate([np.linspace(0.0, 1.0, 4097),
                           np.logspace(-16, -0.301, 200),
                           1.0 - np.logspace(-16, -0.301, 200)])
    vals = obj(grid)
    i = int(np.argmin(vals))
    best, x0 = float(vals[i]), float(grid[i])
    res = optimize.minimize_scalar(lambda x: float(obj(np.array([x]))[0]),
                                   bounds=(max(0.0, x0 - 5e-4),
                                           min(1.0, x0 + 5e-4)),
                                   method="bounded", options={"xatol": 1e-13})
    return float(min(best, res.fun))


def bernoulli_succ_bound(f: TradeoffCurve, pi: float) -> float:
    """Success against a Bernoulli(pi) two-candidate prior: 1 - R_f(pi)."""
    return float(min(1.0, 1.0 - bayes_error(f, pi)))


@dataclasses.dataclass(frozen=True)
class GeneralizationPair:
    """A known loss and the bound it implies in the other direction."""

    train_loss: float
    test_loss_bound: float
    direction: str  # "train_to_test" or "test_to_train"
    group_order: int = 1

    def __post_init__(self):
        for v in (self.train_loss, self.test_loss_bound):
            if not 0.0 <= v <= 1.0:
                raise ParameterError("losses must lie in [0, 1]")


def generalization_bound(f: TradeoffCurve, known_loss: float,
                         direction: str = "train_to_test") -> GeneralizationPair:
    """On-average loss transfer: the unknown loss is at most 1 - f(known)."""
    known_loss = _check_base(known_loss)
    if direction not in ("train_to_test", "test_to_train"):
        raise ParameterError(f"unknown direction {direction!r}")
    bound = float(min(1.0, max(0.0, 1.0 - f(known_loss))))
    if direction == "train_to_test":
        return GeneralizationPair(train_loss=known_loss, test_loss_bound=bound,
                                  direction=direction)
    return GeneralizationPair(train_loss=bound, test_loss_bound=known_loss,
                              direction=direction)


def nonlinear_generalization_bound(f: TradeoffCurve, n: int,
                                   known_value: float) -> float:
    """Bounded-statistic transfer through the order-n group curve.

    Also bounds narcissus-resiliency success: succ <= 1 - f^(n)(base).
    """
    if n < 1:
        raise ParameterError(f"group order must be >= 1, got {n}")
    known_value = _check_base(known_value)
    return float(min(1.0, max(0.0, 1.0 - group_privacy(f, n)(known_value))))


def memorization_bound(f: TradeoffCurve) -> float:
    """Per-record memorization (and strong-MIA advantage) is at most eta."""
    return tv_from_curve(f).eta


@dataclasses.dataclass(frozen=True)
class RiskReport:
    """One bound row: which bound produced which numbers, with inputs echoed."""

    method: str
    baseline_value: float
    success_bound: float
    advantage_bound: float
    parameters: dict = dataclasses.field(default_factory=dict)

    def __post_init__(self):
        if not (0.0 <= self.advantage_bound <= self.success_bound <= 1.0 + 1e-12):
            raise ParameterError(
                "need 0 <= advantage <= success <= 1 in a risk report")

    def csv_row(self) -> str:
        params = ";".join(f"{k}={self.parameters[k]}"
                          for k in sorted(self.parameters))
        return (f"{self.method},{self.baseline_value:.17g},"
                f"{self.success_bound:.17g},{self.advantage_bound:.17g},"
                f"{params}")

    def to_json_dict(self) -> dict:
        return {
            "method": self.method,
            "baseline": self.baseline_value,
            "success_bound": self.success_bound,
            "advantage_bound": self.advantage_bound,
            "params": {k: self.parameters[k] for k in sorted(self.parameters)},
        }


RISK_REPORT_CSV_HEADER = "method,baseline,success_bound,advantage_bound,params"


def urr_bounds(f: TradeoffCurve, base: float) -> RiskReport:
    """Unbiased-reconstruction bounds: succ <= 1 - f(base), adv <= eta too."""
    base = _check_base(base)
    succ = succ_bound(f, base)
    adv = float(max(0.0, min(succ - base, tv_from_curve(f).eta)))
    return RiskReport(method="urr", baseline_value=base, success_bound=succ,
                      advantage_bound=adv,
                      parameters={"base": base, "curve": f.provenance})


def reports_to_json(reports) -> str:
    return json.dumps([r.to_json_dict() for r in reports], indent=2)
