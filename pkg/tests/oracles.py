"""Independent reference implementations used only by the tests.

Everything here recomputes quantities by brute force (dense grids with
iterative refinement, high-precision special functions, direct summation) so
the package's closed forms and numeric paths are checked against code that
shares none of their structure.
"""

import math

import mpmath
import numpy as np

mpmath.mp.dps = 50


def normal_cdf_hp(x) -> float:
    """Standard normal CDF at 50 decimal digits, returned as float."""
    return float(0.5 * mpmath.erfc(-mpmath.mpf(x) / mpmath.sqrt(2)))


def normal_ppf_hp(p) -> float:
    """High-precision standard normal quantile."""
    return float(mpmath.sqrt(2) * mpmath.erfinv(2 * mpmath.mpf(p) - 1))


def gaussian_tradeoff_hp(mu, alpha) -> float:
    """f(alpha) = Phi(Phi^-1(1 - alpha) - mu) via mpmath."""
    return normal_cdf_hp(normal_ppf_hp(1.0 - alpha) - mu)


def gaussian_profile_delta_hp(mu, eps) -> float:
    """delta(eps) = Phi(-eps/mu + mu/2) - e^eps Phi(-eps/mu - mu/2)."""
    mu, eps = mpmath.mpf(mu), mpmath.mpf(eps)
    phi = lambda x: 0.5 * mpmath.erfc(-x / mpmath.sqrt(2))
    return float(phi(-eps / mu + mu / 2) - mpmath.e**eps * phi(-eps / mu - mu / 2))


def grid_max(g, lo=0.0, hi=1.0, n=20001, rounds=6):
    """Maximum of a scalar function on [lo, hi] by grid + refinement."""
    best_x, best = lo, -math.inf
    for _ in range(rounds):
        xs = np.linspace(lo, hi, n)
        try:
            ys = np.asarray(g(xs), dtype=float)
            if ys.shape != xs.shape:
                raise TypeError
        except Exception:
            ys = np.array([g(float(x)) for x in xs])
        i = int(np.argmax(ys))
        if ys[i] > best:
            best, best_x = float(ys[i]), float(xs[i])
        span = (hi - lo) / (n - 1)
        lo, hi = max(lo, best_x - 2 * span), min(hi, best_x + 2 * span)
        n = 201
    return best, best_x


def grid_min(g, lo=0.0, hi=1.0, n=20001, rounds=6):
    best, x = grid_max(lambda v: -g(v), lo, hi, n, rounds)
    return -best, x


def np_tradeoff_points(p, q):
    """Achievable (alpha, beta) vertices of the Neyman-Pearson envelope,
    computed directly from the definition: for each likelihood-ratio
    threshold, reject the outcomes with ratio above it."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    with np.errstate(divide="ignore"):
        ratio = np.where(p > 0, q / np.maximum(p, 1e-300), np.inf)
    order = np.argsort(-ratio, kind="stable")
    sorted_ratio = ratio[order]
    ca = np.cumsum(p[order])
    cb = 1.0 - np.cumsum(q[order])
    # a threshold test rejects every outcome down to the end of a tie group
    boundary = np.concatenate([sorted_ratio[:-1] != sorted_ratio[1:], [True]])
    pts = [(0.0, 1.0)]
    pts += [(float(a), float(max(0.0, b)))
            for a, b in zip(ca[boundary], cb[boundary])]
    pts.append((1.0, 0.0))
    return sorted(set(pts))


def np_tradeoff_eval(p, q, alpha):
    """Exact NP beta at level alpha: the threshold-test vertices lie on a
    convex curve in threshold order, and randomized tests interpolate
    linearly between them."""
    pts = np_tradeoff_points(p, q)
    xs = np.array([a for a, _ in pts])
    ys = np.array([b for _, b in pts])
    return np.interp(alpha, xs, ys)


def discretized_laplace_pair(eps, cells=200_000, span=40.0):
    """Shifted unit-sensitivity Laplace pair on a fine grid."""
    b = 1.0 / eps
    lo, hi = -span * b, span * b + 1.0
    edges = np.linspace(lo, hi, cells + 1)

    def lap_cdf(x, loc):
        z = (np.asarray(x) - loc) / b
        return np.where(z < 0, 0.5 * np.exp(z), 1.0 - 0.5 * np.exp(-z))

    p = np.diff(lap_cdf(edges, 0.0))
    q = np.diff(lap_cdf(edges, 1.0))
    p = np.concatenate([p, [max(0.0, 1.0 - p.sum())]])
    q = np.concatenate([q, [max(0.0, 1.0 - q.sum())]])
    p[-1] += 1.0 - p.sum()
    q[-1] += 1.0 - q.sum()
    return p, q


def kov_delta_direct(eps0, k, eps_g) -> float:
    """Homogeneous pure-DP optimal-composition delta by direct summation
    with exact rationals where possible (mpmath high precision)."""
    e = mpmath.mpf(eps0)
    total = mpmath.mpf(0)
    denom = (1 + mpmath.e**e) ** k
    for ell in range(k + 1):
        if (2 * ell - k) * eps0 > eps_g:
            total += mpmath.binomial(k, ell) * (
                mpmath.e**(ell * e) - mpmath.e**(mpmath.mpf(eps_g))
                * mpmath.e**((k - ell) * e))
    return float(total / denom)
