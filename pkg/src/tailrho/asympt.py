"""First-order asymptotics: pointwise bias and variance-gain coefficients for
Bernstein smoothing, the limiting variance coefficient of the empirical
copula, the normalized corner-square integral operator, the MSE-balancing
smoothing degree, and the resulting MSE expansions.

Smoothing a degree-m Bernstein copula trades a deterministic bias of order
1/m against a variance reduction of order 1/(n*sqrt(m)); balancing the two
leading terms gives a degree proportional to n^(2/3).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .estimators import normalizer
from .quadrature import integrate_square

__all__ = [
    "DegenerateBiasError",
    "AsymptoticReport",
    "MseExpansion",
    "bias_coeff",
    "var_gain",
    "pointwise_variance",
    "normalized_tail_integral",
    "rule_of_thumb_degree",
    "optimal_degree",
    "mse_expansions",
    "asymptotic_report",
]


class DegenerateBiasError(ValueError):
    """The leading bias term vanishes, so no finite degree balances the MSE."""


def bias_coeff(model, u, v):
    """Leading smoothing-bias coefficient (u(1-u) C_uu + v(1-v) C_vv) / 2.

    Scaled by 1/m, this is the first-order bias of the degree-m smoothed
    copula at (u, v).  `model` must expose partials(u, v).
    """
    _, _, c_uu, c_vv = model.partials(u, v)
    return 0.5 * (u * (1.0 - u) * c_uu + v * (1.0 - v) * c_vv)


def var_gain(model, u, v):
    """Leading variance-reduction coefficient of Bernstein smoothing.

    C_u(1-C_u) sqrt(u(1-u)/pi) + C_v(1-C_v) sqrt(v(1-v)/pi): nonnegative,
    vanishing on the boundary of the unit square.  Scaled by 1/(n*sqrt(m)),
    this is how much pointwise variance smoothing removes.
    """
    c_u, c_v, _, _ = model.partials(u, v)
    root_u = np.sqrt(u * (1.0 - u) / math.pi)
    root_v = np.sqrt(v * (1.0 - v) / math.pi)
    return c_u * (1.0 - c_u) * root_u + c_v * (1.0 - c_v) * root_v


def pointwise_variance(model, u, v):
    """Limiting variance coefficient of the empirical copula at (u, v).

    The six-term expression combining C, C_u, C_v; n times the variance of
    the empirical copula converges to this.  Zero on the boundary.
    """
    c = model.cdf(u, v)
    c_u, c_v, _, _ = model.partials(u, v)
    return (
        c * (1.0 - c)
        + u * (1.0 - u) * c_u**2
        + v * (1.0 - v) * c_v**2
        - 2.0 * (1.0 - u) * c * c_u
        - 2.0 * (1.0 - v) * c * c_v
        + 2.0 * c_u * c_v * (c - u * v)
    )


def normalized_tail_integral(f, p: float, tol: float = 1e-9) -> float:
    """Integral of f over [0, p]^2 divided by the tail normalizer.

    Integration maps the square through u = p*sin(s)^2 per axis before the
    64-node Gauss-Legendre panels: the map keeps every node strictly inside
    the square and turns the sqrt(u(1-u)) boundary factors of the
    variance-gain coefficient into analytic functions, so panel doubling
    reaches 1e-9 agreement instead of stalling on the root singularity.
    `f(u, v)` must broadcast over numpy arrays.
    """
    scale = normalizer(p)

    def transformed(s, t):
        su = np.sin(s)
        sv = np.sin(t)
        u = p * su * su
        v = p * sv * sv
        jac = (p * np.sin(2.0 * s)) * (p * np.sin(2.0 * t))
        return f(u, v) * jac

    integral = integrate_square(
        transformed, math.pi / 2.0, tol * scale, order=64, max_doublings=7
    )
    return integral / scale


def rule_of_thumb_degree(n: int) -> int:
    """Largest integer m with m^3 <= n^2, i.e. floor(n^(2/3)) computed exactly.

    Pure float rounding can drop a unit (e.g. 200^(2/3) = 34.19... must give
    34, never 33), so the candidate is corrected with integer comparisons.
    """
    if n < 1:
        raise ValueError(f"sample size n={n} must be >= 1")
    m = max(1, int(round(n ** (2.0 / 3.0))))
    while m**3 > n * n:
        m -= 1
    while (m + 1) ** 3 <= n * n:
        m += 1
    return max(1, m)


def optimal_degree(model, p: float, n: int, tol: float = 1e-9) -> float:
    """MSE-balancing Bernstein degree {4 B^2 / V * n}^(2/3).

    B and V are the normalized corner-square integrals of the bias and
    variance-gain coefficients.  Returned unrounded; callers floor it before
    use.  Raises DegenerateBiasError when the bias term vanishes (independence)
    and every degree large enough is asymptotically fine.
    """
    if n < 1:
        raise ValueError(f"sample size n={n} must be >= 1")
    bias_term = normalized_tail_integral(lambda u, v: bias_coeff(model, u, v), p, tol)
    if abs(bias_term) < 1e-12:
        raise DegenerateBiasError(
            "leading bias term vanishes; fall back to the n^(2/3) rule of thumb"
        )
    gain_term = normalized_tail_integral(lambda u, v: var_gain(model, u, v), p, tol)
    return (4.0 * bias_term**2 / gain_term * n) ** (2.0 / 3.0)


@dataclass(frozen=True)
class MseExpansion:
    """First-order MSE expansions at a given (n, m).

    `difference` (smoothed minus empirical) is always available:
    -V/(n*sqrt(m)) + (B/m)^2.  The absolute expansions additionally need the
    limiting variance of the root-n estimator and are None without it.
    """

    difference: float
    mse_bernstein: float | None
    mse_empirical: float | None


def mse_expansions(
    model,
    p: float,
    n: int,
    m: int,
    limit_variance: float | None = None,
    tol: float = 1e-9,
) -> MseExpansion:
    """First-order MSE of both estimators at sample size n and degree m.

    The empirical estimator's expansion is limit_variance/n; the smoothed one
    subtracts the variance gain V/(n*sqrt(m)) and adds the squared bias
    (B/m)^2.  With limit_variance omitted (it is only available as a Monte
    Carlo estimate), just the difference of the two expansions is filled in.
    """
    if m < 1:
        raise ValueError(f"degree m={m} must be >= 1")
    bias_term = normalized_tail_integral(lambda u, v: bias_coeff(model, u, v), p, tol)
    gain_term = normalized_tail_integral(lambda u, v: var_gain(model, u, v), p, tol)
    difference = -gain_term / (n * math.sqrt(m)) + (bias_term / m) ** 2
    if limit_variance is None:
        return MseExpansion(difference=difference, mse_bernstein=None, mse_empirical=None)
    base = limit_variance / n
    return MseExpansion(
        difference=difference,
        mse_bernstein=base + difference,
        mse_empirical=base,
    )


@dataclass(frozen=True)
class AsymptoticReport:
    """Expansion summary for one (model, p, n) setting.

    bias_term and gain_term are the normalized corner integrals of the bias
    and variance-gain coefficients; m_opt is None when the bias term is
    degenerate.  The absolute MSE expansions are filled only when a Monte
    Carlo estimate of the limiting variance is supplied.
    """

    p: float
    n: int
    bias_term: float
    gain_term: float
    m_opt: float | None
    rule_degree: int
    mse_bernstein_expansion: float | None
    mse_empirical_expansion: float | None
    limit_variance: float | None


def asymptotic_report(
    model,
    p: float,
    n: int,
    limit_variance: float | None = None,
    tol: float = 1e-9,
) -> AsymptoticReport:
    """Assemble the expansion quantities for one setting.

    Degenerate bias (independence) produces m_opt = None with a warning; the
    rule-of-thumb degree is always reported as the practical fallback.
    """
    bias_term = normalized_tail_integral(lambda u, v: bias_coeff(model, u, v), p, tol)
    gain_term = normalized_tail_integral(lambda u, v: var_gain(model, u, v), p, tol)
    rule_degree = rule_of_thumb_degree(n)
    if abs(bias_term) < 1e-12:
        warnings.warn(
            "leading bias term vanishes; using the n^(2/3) rule of thumb",
            stacklevel=2,
        )
        m_opt = None
        m_for_mse = rule_degree
    else:
        m_opt = (4.0 * bias_term**2 / gain_term * n) ** (2.0 / 3.0)
        m_for_mse = max(1, math.floor(m_opt))
    expansion = mse_expansions(model, p, n, m_for_mse, limit_variance, tol)
    return AsymptoticReport(
        p=p,
        n=n,
        bias_term=bias_term,
        gain_term=gain_term,
        m_opt=m_opt,
        rule_degree=rule_degree,
        mse_bernstein_expansion=expansion.mse_bernstein,
        mse_empirical_expansion=expansion.mse_empirical,
        limit_variance=limit_variance,
    )
