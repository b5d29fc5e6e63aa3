"""Divergence risk evaluation by the primal infimum formula.

The risk of a loss X at aversion beta > 0 is

    rho(X) = inf_{t > 0, mu} t * (beta + mu + E psi(X/t - mu)),

a jointly convex problem.  The evaluator works in the translated variable
nu = t * mu, solving E psi'((X - nu)/t) = 1 for nu by bisection (the inner
first-order condition) and minimising the resulting one-variable objective
over log t by golden section.  The derivative of that outer objective is
beta - E phi(psi'((X - nu)/t)), so interior optima solve the characterizing
system

    1    = E psi'((X - nu)/t),
    beta = E phi(psi'((X - nu)/t)),

whose solutions also deliver the optimal dual density (see divrisk.dual).

When the infimum is only approached as t -> 0 the evaluation reports
attained=False and the essential supremum, which is the limiting value.
Inputs are affinely normalised to [0, 1] before searching, so brackets are
instance-independent: positive homogeneity and translation equivariance make
this exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ._search import golden_min
from .divergence import DivergenceSpec
from .empirical import EmpiricalDistribution
from .errors import InvalidParameterError, NumericsError

__all__ = [
    "RiskEvaluation",
    "evaluate_primal",
    "evaluate_primal_batch",
    "solve_characterizing_equations",
    "alpha_bar",
    "is_attained",
]

_T_FLOOR = 1e-13       # left end of the log-t bracket
_ATTAIN_CUTOFF = 1e-10  # below this t the infimum is treated as unattained
_GOLDEN_ITERS = 60
_INNER_ITERS = 48


@dataclass(frozen=True)
class RiskEvaluation:
    """Value of rho(X) with optimizers and first-order diagnostics.

    ``residuals`` holds the gaps of the characterizing equations at
    (t_star, mu_star); both are absent when the infimum is not attained.
    """

    value: float
    t_star: Optional[float]
    mu_star: Optional[float]
    attained: bool
    residuals: Optional[Tuple[float, float]]


def _check_beta(beta) -> float:
    beta = float(beta)
    if not math.isfinite(beta) or beta <= 0:
        raise InvalidParameterError(f"risk aversion beta must be positive, got {beta!r}")
    return beta


def _solve_inner_nu(y, probs, spec, t):
    """Solve E psi'((y - nu)/t) = 1 for nu, row-wise.

    y: (m, n) atoms, t: (m,) positive.  The map is non-increasing in nu, so
    plain bisection applies; the left end is pushed out geometrically until
    the expectation exceeds one.
    """
    row_min = y.min(axis=1)
    row_max = y.max(axis=1)

    def expectation(nu):
        vals = spec.psi_prime((y - nu[:, None]) / t[:, None])
        return np.asarray(vals * probs).sum(axis=1)

    slope_margin = max(float(spec.phi_prime(2.0)), 0.0) + 1.0
    k = np.full(y.shape[0], slope_margin)
    lo = row_min - k * t
    for _ in range(80):
        need = expectation(lo) < 1.0
        if not need.any():
            break
        k = np.where(need, 4.0 * k, k)
        lo = row_min - k * t
    else:
        raise NumericsError("inner bracket (left) expansion exhausted")

    hi = row_max.copy()
    width = row_max - row_min + k * t
    for _ in range(80):
        need = expectation(hi) > 1.0
        if not need.any():
            break
        hi = np.where(need, hi + width, hi)
        width = np.where(need, 2.0 * width, width)
    else:
        raise NumericsError("inner bracket (right) expansion exhausted")

    for _ in range(_INNER_ITERS):
        mid = 0.5 * (lo + hi)
        above = expectation(mid) > 1.0
        lo = np.where(above, mid, lo)
        hi = np.where(above, hi, mid)
    return 0.5 * (lo + hi)


def _objective_of_t(y, probs, spec, beta, t):
    """q(t) = t*beta + nu*(t) + t * E psi((y - nu*)/t) row-wise."""
    nu = _solve_inner_nu(y, probs, spec, t)
    vals = np.asarray(spec.psi((y - nu[:, None]) / t[:, None]))
    return t * beta + nu + t * (vals * probs).sum(axis=1), nu


def _minimise_rows(y, probs, spec, beta):
    """Minimise q over t for rows of y normalised to [0, 1].

    Returns (value, t_star, nu_star) per row; rows whose best t collapses to
    the bracket floor report the essential supremum (here 1.0).
    """
    m = y.shape[0]
    log_lo = np.full(m, math.log(_T_FLOOR))
    log_hi = np.full(m, max(math.log(2.0 / beta), math.log(_T_FLOOR) + 1.0))

    def q_of_log_t(log_t):
        return _objective_of_t(y, probs, spec, beta, np.exp(log_t))[0]

    for _ in range(3):
        log_t_best, q_best = golden_min(q_of_log_t, log_lo, log_hi, iters=_GOLDEN_ITERS)
        at_right = log_t_best > log_hi - 0.05 * (log_hi - log_lo)
        if not at_right.any():
            break
        log_hi = np.where(at_right, log_hi + math.log(8.0), log_hi)

    t_best = np.exp(log_t_best)
    _, nu_best = _objective_of_t(y, probs, spec, beta, t_best)
    attained = t_best > _ATTAIN_CUTOFF
    value = np.where(attained, q_best, np.minimum(q_best, 1.0))
    return value, t_best, nu_best, attained


def evaluate_primal_batch(atoms, probs, spec: DivergenceSpec, beta) -> np.ndarray:
    """rho for many loss vectors sharing one probability vector.

    atoms: (m, n) matrix, one loss vector per row; probs: (n,).  Returns the
    (m,) vector of risk values.  This is the same solver as evaluate_primal,
    vectorised across rows.
    """
    beta = _check_beta(beta)
    y = np.asarray(atoms, dtype=float)
    if y.ndim != 2:
        raise InvalidParameterError("atoms must be a (m, n) matrix")
    p = np.asarray(probs, dtype=float)
    values = np.empty(y.shape[0])

    lo = y.min(axis=1)
    spread = y.max(axis=1) - lo
    const = spread <= 1e-15 * np.maximum(1.0, np.abs(lo))
    values[const] = lo[const]
    if (~const).any():
        ynorm = (y[~const] - lo[~const, None]) / spread[~const, None]
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            val, _, _, _ = _minimise_rows(ynorm, p, spec, beta)
        values[~const] = lo[~const] + spread[~const] * val
    return values


def evaluate_primal(dist: EmpiricalDistribution, spec: DivergenceSpec, beta) -> RiskEvaluation:
    """Evaluate rho(X) for one empirical distribution.

    Returns the optimal (t, mu) and the characterizing-equation residuals
    when the infimum is attained; otherwise the essential supremum with
    attained=False (constant X always lands in that branch, its infimum is
    approached as t -> 0).
    """
    beta = _check_beta(beta)
    x = dist.atoms
    p = dist.probs
    lo = dist.essinf
    spread = dist.esssup - lo
    if spread <= 1e-15 * max(1.0, abs(lo)):
        return RiskEvaluation(value=lo, t_star=None, mu_star=None, attained=False, residuals=None)

    ynorm = (x[None, :] - lo) / spread
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        val, t_n, nu_n, attained = _minimise_rows(ynorm, p, spec, beta)
    value = lo + spread * float(val[0])
    if not bool(attained[0]):
        return RiskEvaluation(value=value, t_star=None, mu_star=None, attained=False, residuals=None)

    t_star = spread * float(t_n[0])
    mu_star = (lo + spread * float(nu_n[0])) / t_star
    r1, r2 = _equation_residuals(dist, spec, beta, t_star, mu_star)
    return RiskEvaluation(value=value, t_star=t_star, mu_star=mu_star, attained=True, residuals=(r1, r2))


def _equation_residuals(dist, spec, beta, t, mu):
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        z = np.asarray(spec.psi_prime(dist.atoms / t - mu))
        r1 = 1.0 - float(np.dot(dist.probs, z))
        r2 = beta - float(np.dot(dist.probs, np.asarray(spec.phi(z))))
    return r1, r2


def solve_characterizing_equations(
    dist: EmpiricalDistribution, spec: DivergenceSpec, beta, residual_tol: float = 1e-9
):
    """Solve 1 = E psi'(X/t - mu), beta = E phi(psi'(X/t - mu)) for (t, mu).

    For fixed t the first equation pins mu by bisection; the divergence
    expectation B(t) then decreases from its small-t limit towards 0, so the
    second equation is bisected in log t with geometric bracket expansion.
    Near the boundary where beta equals the small-t limit, B approaches beta
    asymptotically; any t whose residual is below ``residual_tol`` is
    accepted.  Returns (t_star, mu_star) or None when no bracket with an
    acceptable residual exists (expected for non-attained instances).
    """
    beta = _check_beta(beta)
    x = dist.atoms
    p = dist.probs
    lo = dist.essinf
    spread = dist.esssup - lo
    if spread <= 1e-15 * max(1.0, abs(lo)):
        return None
    y = (x[None, :] - lo) / spread

    def divergence_at(t_scalar):
        t = np.array([t_scalar])
        nu = _solve_inner_nu(y, p, spec, t)
        z = np.asarray(spec.psi_prime((y - nu[:, None]) / t[:, None]))
        return float((np.asarray(spec.phi(z)) * p).sum())

    def finish(t_scalar):
        t = np.array([t_scalar])
        nu = _solve_inner_nu(y, p, spec, t)
        t_star = spread * t_scalar
        mu_star = (lo + spread * float(nu[0])) / t_star
        return t_star, mu_star

    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        t_hi = 1.0 / (1.0 + beta)
        for _ in range(200):
            if divergence_at(t_hi) <= beta:
                break
            t_hi *= 2.0
        else:
            return None

        t_lo = t_hi
        best_t, best_res = None, math.inf
        for _ in range(200):
            b = divergence_at(t_lo)
            res = abs(b - beta)
            if res < best_res:
                best_t, best_res = t_lo, res
            if b >= beta:
                break
            if res <= residual_tol:
                return finish(t_lo)
            if t_lo < _T_FLOOR:
                return None
            t_lo *= 0.5
        else:
            return None

        log_lo, log_hi = math.log(t_lo), math.log(t_hi)
        for _ in range(100):
            mid = math.exp(0.5 * (log_lo + log_hi))
            b = divergence_at(mid)
            res = abs(b - beta)
            if res < best_res:
                best_t, best_res = mid, res
            if res <= residual_tol:
                return finish(mid)
            if b > beta:
                log_lo = math.log(mid)
            else:
                log_hi = math.log(mid)
        if best_res <= residual_tol:
            return finish(best_t)
    return None


def alpha_bar(spec: DivergenceSpec, beta) -> float:
    """Largest alpha in [0, 1) with phi(0)*alpha + phi(1/(1-alpha))*(1-alpha) <= beta.

    The left side is non-decreasing in alpha and explodes as alpha -> 1 by
    superlinear growth, so bisection on the feasibility predicate applies.
    The convention 0*alpha = 0 is used when phi(0) = 0.
    """
    beta = _check_beta(beta)
    phi0 = spec.phi_at_zero

    def load(alpha: float) -> float:
        tail = 1.0 - alpha
        return phi0 * alpha + float(spec.phi(1.0 / tail)) * tail

    lo, hi = 0.0, 1.0 - 1e-15
    if load(hi) <= beta:
        return hi
    for _ in range(100):
        mid = 0.5 * (lo + hi)
        if load(mid) <= beta:
            lo = mid
        else:
            hi = mid
    return lo


def is_attained(dist: EmpiricalDistribution, spec: DivergenceSpec, beta) -> bool:
    """Sufficient attainability check: P(X = esssup X) < 1 - alpha_bar.

    False means "not guaranteed", not "not attained"; the criterion is only
    sufficient.
    """
    return dist.prob_at_esssup() < 1.0 - alpha_bar(spec, beta)
