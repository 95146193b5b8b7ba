"""Trade-off curves: construction, evaluation, and derived privacy quantities.

A trade-off curve maps the false-positive rate alpha of the optimal
membership-inference test to the minimal achievable false-negative rate.
Every curve here is convex, continuous, non-increasing, and satisfies
0 <= f(alpha) <= 1 - alpha on [0, 1].
"""

from __future__ import annotations

import dataclasses
import io
import math
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import optimize
from scipy.stats import norm


class ParameterError(ValueError):
    """An input parameter is outside its admissible domain."""


# --------------------------------------------------------------------------
# alpha grids

def default_alpha_grid(n: int = 2001, tiny: float = 1e-12) -> np.ndarray:
    """Non-uniform grid on [0, 1], log-dense near both endpoints.

    Risk baselines of practical interest (e.g. rare-attribute priors around
    1e-4) live near alpha = 0, so uniform grids waste resolution.
    """
    half = np.logspace(np.log10(tiny), np.log10(0.5), n // 2)
    return np.unique(np.concatenate([[0.0], half, 1.0 - half[::-1], [1.0]]))


def lower_convex_hull(alphas: np.ndarray, betas: np.ndarray):
    """Keep only the vertices of the lower convex hull of (alpha, beta) points.

    Repairs floating-point convexity violations after envelope or numeric
    constructions; downstream Jensen-style bounds require convexity.
    """
    order = np.argsort(alphas, kind="stable")
    alphas, betas = alphas[order], betas[order]
    hull: list[tuple[float, float]] = []
    for x, y in zip(alphas, betas):
        if hull and hull[-1][0] == x:
            if y < hull[-1][1]:
                hull.pop()
            else:
                continue
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point if it lies on or above the chord
            if (y2 - y1) * (x - x1) >= (y - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append((x, y))
    pts = np.array(hull)
    return pts[:, 0], pts[:, 1]


# --------------------------------------------------------------------------
# core types

@dataclasses.dataclass(frozen=True)
class TradeoffCurve:
    """A convex, non-increasing trade-off function on [0, 1].

    Either analytic (``fn`` set, evaluated exactly) or piecewise linear
    (``knots`` set, linearly interpolated). ``kind`` tags the construction so
    that derived quantities can use closed forms where they exist.
    """

    kind: str
    provenance: str
    params: tuple = ()
    fn: Callable[[np.ndarray], np.ndarray] | None = dataclasses.field(
        default=None, repr=False, compare=False)
    knots: np.ndarray | None = dataclasses.field(default=None, repr=False)

    def __post_init__(self):
        if self.fn is None and self.knots is None:
            raise ParameterError("curve needs an analytic form or knots")
        if self.knots is not None:
            k = np.asarray(self.knots, dtype=float)
            if k.ndim != 2 or k.shape[1] != 2 or k.shape[0] < 2:
                raise ParameterError("knots must be an (m, 2) array, m >= 2")
            if np.any(np.diff(k[:, 0]) <= 0):
                raise ParameterError("knot alphas must be strictly increasing")
            object.__setattr__(self, "knots", k)

    def __call__(self, alpha):
        a = np.asarray(alpha, dtype=float)
        if self.fn is not None:
            out = np.asarray(self.fn(a), dtype=float)
        else:
            out = np.interp(a, self.knots[:, 0], self.knots[:, 1])
        out = np.clip(out, 0.0, 1.0)
        return out if np.ndim(alpha) else float(out)

    @property
    def is_piecewise(self) -> bool:
        return self.fn is None

    def as_knots(self, grid: np.ndarray | None = None) -> np.ndarray:
        """Knot representation, sampling analytic curves on ``grid``."""
        if self.is_piecewise and grid is None:
            return self.knots.copy()
        if grid is None:
            grid = default_alpha_grid()
        return np.column_stack([grid, self(grid)])


@dataclasses.dataclass(frozen=True)
class PrivacyProfile:
    """Attainable (epsilon, delta(epsilon)) guarantees of a mechanism."""

    points: np.ndarray  # (m, 2), sorted by epsilon, delta non-increasing

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[1] != 2 or pts.shape[0] == 0:
            raise ParameterError("profile must be a non-empty (m, 2) array")
        if np.any(pts[:, 0] < 0):
            raise ParameterError("epsilon must be non-negative")
        if np.any((pts[:, 1] < 0) | (pts[:, 1] > 1)):
            raise ParameterError("delta must lie in [0, 1]")
        if np.any(np.diff(pts[:, 0]) < 0):
            raise ParameterError("epsilons must be sorted ascending")
        if np.any(np.diff(pts[:, 1]) > 1e-12):
            raise ParameterError("delta must be non-increasing in epsilon")
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_points(cls, epsilons, deltas) -> "PrivacyProfile":
        """Build a profile, conservatively repairing delta monotonicity.

        Deltas are raised to the running maximum from the right, so any
        adjustment only weakens the claimed guarantee.
        """
        eps = np.asarray(epsilons, dtype=float)
        dlt = np.clip(np.asarray(deltas, dtype=float), 0.0, 1.0)
        order = np.argsort(eps, kind="stable")
        eps, dlt = eps[order], dlt[order]
        dlt = np.maximum.accumulate(dlt[::-1])[::-1]
        return cls(np.column_stack([eps, dlt]))

    @property
    def epsilons(self) -> np.ndarray:
        return self.points[:, 0]

    @property
    def deltas(self) -> np.ndarray:
        return self.points[:, 1]


@dataclasses.dataclass(frozen=True)
class TvParameter:
    """Total-variation privacy level: the mechanism satisfies (0, eta)-DP."""

    eta: float

    def __post_init__(self):
        if not 0.0 <= self.eta <= 1.0:
            raise ParameterError(f"eta must lie in [0, 1], got {self.eta}")


# --------------------------------------------------------------------------
# constructors

def curve_from_epsilon_delta(epsilon: float, delta: float) -> TradeoffCurve:
    """Trade-off curve equivalent to an (epsilon, delta)-DP guarantee.

    f(a) = max(0, 1 - delta - e^eps * a, e^-eps * (1 - delta - a)).
    epsilon = inf or delta = 1 yield the zero curve (blatantly non-private).
    """
    if not (epsilon >= 0):
        raise ParameterError(f"epsilon must be >= 0, got {epsilon}")
    if not (0.0 <= delta <= 1.0):
        raise ParameterError(f"delta must lie in [0, 1], got {delta}")
    if math.isinf(epsilon) or delta == 1.0:
        return TradeoffCurve(kind="zero", provenance="eps_delta(degenerate)",
                             params=(epsilon, delta), fn=lambda a: np.zeros_like(a))
    e_pos, e_neg = math.exp(epsilon), math.exp(-epsilon)

    def fn(a):
        return np.maximum(0.0, np.maximum(1.0 - delta - e_pos * a,
                                          e_neg * (1.0 - delta - a)))

    return TradeoffCurve(kind="eps_delta", params=(epsilon, delta),
                         provenance=f"eps_delta(eps={epsilon!r}, delta={delta!r})",
                         fn=fn)


def _upper_envelope_of_lines(slopes: np.ndarray, intercepts: np.ndarray):
    """Knots of max_j (intercepts[j] + slopes[j] * x) restricted to [0, 1]."""
    order = np.lexsort((intercepts, slopes))
    slopes, intercepts = slopes[order], intercepts[order]
    # for equal slopes only the largest intercept can matter
    keep = np.concatenate([slopes[1:] != slopes[:-1], [True]])
    slopes, intercepts = slopes[keep], intercepts[keep]
    hull_s: list[float] = []
    hull_c: list[float] = []
    xs: list[float] = []  # xs[i] = intersection of hull line i-1 with line i
    for s, c in zip(slopes, intercepts):
        while hull_s:
            x = (hull_c[-1] - c) / (s - hull_s[-1])
            if xs and x <= xs[-1]:
                hull_s.pop(); hull_c.pop(); xs.pop()
            else:
                xs.append(x)
                break
        hull_s.append(s)
        hull_c.append(c)
    knots_x = np.array([0.0] + [x for x in xs if 0.0 < x < 1.0] + [1.0])
    knots_x = np.unique(knots_x)
    s_arr, c_arr = np.array(hull_s), np.array(hull_c)
    knots_y = (c_arr[None, :] + s_arr[None, :] * knots_x[:, None]).max(axis=1)
    return knots_x, knots_y


def curve_from_profile(profile: PrivacyProfile) -> TradeoffCurve:
    """Upper envelope of the single-pair curves of every profile point.

    Each (epsilon, delta) pair contributes two supporting lines; the envelope
    is their exact pointwise maximum (clipped below at zero), hence convex,
    and is represented by its exact knots.
    """
    eps = profile.epsilons
    dlt = profile.deltas
    finite = np.isfinite(eps) & (dlt < 1.0)
    if not np.any(finite):
        return TradeoffCurve(kind="zero", provenance="profile(degenerate)",
                             fn=lambda a: np.zeros_like(a))
    e_pos = np.exp(np.minimum(eps[finite], 700.0))
    e_neg = np.exp(-eps[finite])
    one_m_d = 1.0 - dlt[finite]
    slopes = np.concatenate([-e_pos, -e_neg, [0.0]])
    intercepts = np.concatenate([one_m_d, e_neg * one_m_d, [0.0]])
    kx, ky = _upper_envelope_of_lines(slopes, intercepts)
    ky = np.clip(ky, 0.0, 1.0)
    kx, ky = lower_convex_hull(kx, ky)
    return TradeoffCurve(kind="envelope",
                         provenance=f"profile_envelope({int(finite.sum())} points)",
                         knots=np.column_stack([kx, ky]))


def gaussian_curve(mu: float) -> TradeoffCurve:
    """Exact trade-off of a unit-sensitivity Gaussian pair at separation mu.

    f(a) = Phi(Phi^-1(1 - a) - mu).
    """
    if not (mu >= 0):
        raise ParameterError(f"mu must be >= 0, got {mu}")

    def fn(a):
        return norm.cdf(norm.isf(np.asarray(a, dtype=float)) - mu)

    return TradeoffCurve(kind="gaussian", params=(mu,),
                         provenance=f"gaussian(mu={mu!r})", fn=fn)


def laplace_curve(epsilon: float) -> TradeoffCurve:
    """Exact trade-off of two unit-shifted Laplace(1/epsilon) distributions.

    Three-regime form from likelihood-ratio thresholding:
    1 - e^eps * a for a < e^-eps / 2, e^-eps / (4a) up to 1/2, then
    e^-eps * (1 - a).
    """
    if not (epsilon >= 0):
        raise ParameterError(f"epsilon must be >= 0, got {epsilon}")
    e_pos, e_neg = math.exp(epsilon), math.exp(-epsilon)

    def fn(a):
        a = np.asarray(a, dtype=float)
        with np.errstate(divide="ignore"):
            mid = np.where(a > 0, e_neg / (4.0 * np.maximum(a, 1e-300)), 1.0)
        out = np.where(a < e_neg / 2.0, 1.0 - e_pos * a,
                       np.where(a <= 0.5, mid, e_neg * (1.0 - a)))
        return out

    return TradeoffCurve(kind="laplace", params=(epsilon,),
                         provenance=f"laplace(eps={epsilon!r})", fn=fn)


def piecewise_curve(alphas, betas, provenance: str = "piecewise") -> TradeoffCurve:
    """Piecewise-linear curve through (alpha, beta) knots, convexified."""
    a = np.asarray(alphas, dtype=float)
    b = np.clip(np.asarray(betas, dtype=float), 0.0, 1.0)
    a, b = lower_convex_hull(a, b)
    if a[0] > 0.0:
        a = np.concatenate([[0.0], a])
        b = np.concatenate([[min(1.0, b[0])], b])
    if a[-1] < 1.0:
        a = np.concatenate([a, [1.0]])
        b = np.concatenate([b, [0.0]])
        a, b = lower_convex_hull(a, b)
    return TradeoffCurve(kind="piecewise", provenance=provenance,
                         knots=np.column_stack([a, b]))


# --------------------------------------------------------------------------
# numeric helpers

def _concave_max(g: Callable[[np.ndarray], np.ndarray],
                 extra_candidates: Iterable[float] = (),
                 rounds: int = 4, n: int = 4097) -> float:
    """Maximum of a concave function on [0, 1] via grid seeding + refinement."""
    cand = np.concatenate([
        np.linspace(0.0, 1.0, n),
        np.logspace(-16, -0.301, 200),
        1.0 - np.logspace(-16, -0.301, 200),
        np.asarray(list(extra_candidates), dtype=float),
    ])
    cand = np.clip(cand, 0.0, 1.0)
    vals = g(cand)
    best_idx = int(np.argmax(vals))
    best_x, best = float(cand[best_idx]), float(vals[best_idx])
    lo = max(0.0, best_x - 1.0 / n)
    hi = min(1.0, best_x + 1.0 / n)
    for _ in range(rounds):
        xs = np.linspace(lo, hi, 257)
        ys = g(xs)
        i = int(np.argmax(ys))
        if ys[i] > best:
            best, best_x = float(ys[i]), float(xs[i])
        span = (hi - lo) / 64.0
        lo, hi = max(0.0, best_x - span), min(1.0, best_x + span)
    res = optimize.minimize_scalar(lambda x: -float(g(np.array([x]))[0]),
                                   bounds=(max(0.0, best_x - 1e-6),
                                           min(1.0, best_x + 1e-6)),
                                   method="bounded",
                                   options={"xatol": 1e-14})
    return max(best, -float(res.fun))


# --------------------------------------------------------------------------
# derived quantities

def tv_from_curve(f: TradeoffCurve) -> TvParameter:
    """TV privacy level eta = max_alpha (1 - f(alpha) - alpha).

    Closed forms for the analytic families; knot inspection for piecewise
    curves (valid by convexity); refined concave maximization otherwise.
    """
    if f.kind == "eps_delta":
        eps, delta = f.params
        eta = (math.exp(eps) - 1.0 + 2.0 * delta) / (math.exp(eps) + 1.0)
    elif f.kind == "gaussian":
        (mu,) = f.params
        eta = 2.0 * norm.cdf(mu / 2.0) - 1.0
    elif f.kind == "laplace":
        (eps,) = f.params
        eta = 1.0 - math.exp(-eps / 2.0)
    elif f.kind == "zero":
        eta = 1.0
    elif f.is_piecewise:
        a, b = f.knots[:, 0], f.knots[:, 1]
        eta = float(np.max(1.0 - b - a))
    else:
        eta = _concave_max(lambda a: 1.0 - f(a) - a)
    return TvParameter(float(min(1.0, max(0.0, eta))))


def group_privacy(f: TradeoffCurve, k: int) -> TradeoffCurve:
    """Trade-off guarantee against k simultaneous record changes.

    f^(k) = 1 - (1 - f) iterated k times; k = 1 returns f unchanged.
    """
    if k < 1:
        raise ParameterError(f"group order must be >= 1, got {k}")
    if k == 1:
        return f

    def fn(a):
        x = np.asarray(a, dtype=float)
        for _ in range(k):
            x = 1.0 - f(x)
        return 1.0 - x

    return TradeoffCurve(kind="group", params=(f.kind, k),
                         provenance=f"group(k={k}, base={f.provenance})", fn=fn)


def delta_for_epsilon(f: TradeoffCurve, epsilon: float) -> float:
    """Smallest delta at which f dominates the (epsilon, delta) curve.

    delta(eps) = max_alpha (1 - f(alpha) - e^eps * alpha), by convex
    conjugacy. Closed form for the Gaussian family (the maximizing alpha sits
    deep in the tail, where grid search loses all precision).
    """
    if epsilon < 0:
        raise ParameterError(f"epsilon must be >= 0, got {epsilon}")
    if f.kind == "gaussian":
        (mu,) = f.params
        if mu == 0.0:
            return 0.0
        d = norm.cdf(-epsilon / mu + mu / 2.0) \
            - math.exp(epsilon) * norm.cdf(-epsilon / mu - mu / 2.0)
        return float(min(1.0, max(0.0, d)))
    if f.kind == "eps_delta":
        eps0, delta0 = f.params
        if epsilon >= eps0:
            return float(delta0)
        a_star = (1.0 - delta0) / (1.0 + math.exp(eps0))
        d = delta0 + (math.exp(eps0) - math.exp(epsilon)) * a_star
        return float(min(1.0, max(delta0, d)))
    if f.kind == "zero":
        return 1.0
    e_eps = math.exp(min(epsilon, 700))
    if f.is_piecewise:
        a, b = f.knots[:, 0], f.knots[:, 1]
        d = float(np.max(1.0 - b - e_eps * a))
    else:
        d = _concave_max(lambda a: 1.0 - f(a) - e_eps * a)
    return float(min(1.0, max(0.0, d)))


def profile_from_curve(f: TradeoffCurve, epsilons: Sequence[float]) -> PrivacyProfile:
    """Privacy profile of a curve on an epsilon grid."""
    eps = np.asarray(epsilons, dtype=float)
    if eps.size == 0:
        raise ParameterError("epsilon grid must be non-empty")
    if np.any(eps < 0):
        raise ParameterError("epsilon grid must be non-negative")
    deltas = np.array([delta_for_epsilon(f, e) for e in eps])
    return PrivacyProfile.from_points(eps, deltas)


# --------------------------------------------------------------------------
# serialization (CSV, full double precision)

def _fmt(x: float) -> str:
    return f"{x:.17g}"


def curve_to_csv(curve: TradeoffCurve, out, grid: np.ndarray | None = None) -> None:
    """Write curve knots as ``alpha,f`` CSV rows at 17 significant digits."""
    knots = curve.as_knots(grid)
    out.write("alpha,f\n")
    for a, b in knots:
        out.write(f"{_fmt(a)},{_fmt(b)}\n")


def curve_from_csv(inp) -> TradeoffCurve:
    """Read a piecewise-linear curve from ``alpha,f`` CSV."""
    rows = _read_csv_rows(inp, ("alpha", "f"))
    return piecewise_curve(rows[:, 0], rows[:, 1], provenance="csv")


def profile_to_csv(profile: PrivacyProfile, out) -> None:
    out.write("epsilon,delta\n")
    for e, d in profile.points:
        out.write(f"{_fmt(e)},{_fmt(d)}\n")


def profile_from_csv(inp) -> PrivacyProfile:
    rows = _read_csv_rows(inp, ("epsilon", "delta"))
    return PrivacyProfile.from_points(rows[:, 0], rows[:, 1])


def _read_csv_rows(inp, expected_header: tuple[str, str]) -> np.ndarray:
    if isinstance(inp, (str, bytes)):
        inp = io.StringIO(inp.decode() if isinstance(inp, bytes) else inp)
    lines = [ln.strip() for ln in inp if ln.strip()]
    if not lines:
        raise ParameterError("empty CSV input")
    start = 1 if lines[0].replace(" ", "").lower() == ",".join(expected_header) else 0
    try:
        rows = np.array([[float(v) for v in ln.split(",")[:2]]
                         for ln in lines[start:]])
    except ValueError as exc:
        raise ParameterError(f"malformed CSV row: {exc}") from None
    if rows.size == 0:
        raise ParameterError("CSV contains no data rows")
    return rows
