"""Critical ratio and the first-moment rate function.

``H(c) = ln c + (2/c - 1) ln(2 - c)`` is strictly increasing on ``(1, 2)``
(``H'(c) = -(2/c^2) ln(2 - c) > 0``), which makes the root of
``alpha H(c) = 1`` unique when ``alpha ln 2 > 1``.

The rate function ``g_{alpha,c}(beta, gamma)`` depends on ``x0``, the
positive root of ``1 - exp(-x) = (beta/gamma) x``.  ``g`` is evaluated two
ways: the expanded closed form in double precision, and the raw product
form in 40-digit mpmath with its own ``x0``; the two must agree.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import mpmath
import numpy as np

from .errors import DomainError, InternalMismatch, NonPositiveAlpha

LN2 = math.log(2.0)
ROOT_TOL = 1e-12
IDENTITY_TOL = 1e-10


class Branch(str, Enum):
    SATURATED2 = "Saturated2"
    ROOT_OF_H = "RootOfH"


@dataclass(frozen=True)
class ThresholdResult:
    alpha: float
    c_star: float
    branch: Branch
    residual: float = 0.0

    def to_json(self) -> dict:
        return {"alpha": self.alpha, "c_star": self.c_star, "branch": self.branch.value, "residual": self.residual}


@dataclass(frozen=True)
class GPoint:
    alpha: float
    c: float
    beta: float
    gamma: float
    x0: float
    value: float


def H(c: float) -> float:
    if not 1.0 <= c <= 2.0:
        raise DomainError(f"H needs 1 <= c <= 2, got {c}")
    if c == 2.0:
        return LN2
    return math.log(c) + (2.0 / c - 1.0) * math.log(2.0 - c)


def dH(c: float) -> float:
    if not 1.0 <= c < 2.0:
        raise DomainError(f"H' needs 1 <= c < 2, got {c}")
    return -(2.0 / (c * c)) * math.log(2.0 - c)


def critical_ratio(alpha: float) -> ThresholdResult:
    if not alpha > 0:
        raise NonPositiveAlpha(f"alpha must be positive, got {alpha}")
    # the second test catches alpha = 1/ln 2 when alpha*LN2 rounds above 1
    if alpha * LN2 <= 1.0 or alpha <= 1.0 / LN2:
        return ThresholdResult(float(alpha), 2.0, Branch.SATURATED2, 0.0)
    target = 1.0 / alpha
    lo, hi = 1.0, 2.0  # H(lo) - target < 0 < H(hi) - target
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if H(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    c = 0.5 * (lo + hi)
    for _ in range(20):
        f = H(c) - target
        if abs(alpha * f) < 1e-15:
            break
        step = f / dH(c)
        nxt = c - step
        if not lo <= nxt <= hi:
            break
        c = nxt
        if abs(step) < 1e-17:
            break
    res = abs(alpha * H(c) - 1.0)
    return ThresholdResult(float(alpha), c, Branch.ROOT_OF_H, res)


def c_star(alpha: float) -> float:
    return critical_ratio(alpha).c_star


# -- x0 and the rate function ------------------------------------------------


def _x0_f(x, r):
    return -math.expm1(-x) - r * x


def solve_x0(beta: float, gamma: float) -> float:
    """Unique ``x0 >= 0`` with ``1 - exp(-x0) = (beta/gamma) x0``."""
    if not (beta > 0 and gamma >= beta):
        raise DomainError(f"solve_x0 needs 0 < beta <= gamma, got beta={beta}, gamma={gamma}")
    if beta == gamma:
        return 0.0
    r = beta / gamma
    lo, hi = 0.0, 1.0 / r  # f > 0 on (0, x0), f(1/r) < 0
    x = hi
    for _ in range(200):
        f = _x0_f(x, r)
        if f > 0:
            lo = x
        else:
            hi = x
        d = math.exp(-x) - r
        nxt = x - f / d if d != 0 else lo - 1.0
        if not (lo < nxt < hi):
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= 4e-16 * max(x, 1e-300):
            x = nxt
            break
        x = nxt
    return x


def x0_residual(beta: float, gamma: float, x0: float) -> float:
    return abs(1.0 - math.exp(-x0) - (beta / gamma) * x0)


def _log_expm1(x: float) -> float:
    # log(e^x - 1) without overflow for large x
    return x + math.log1p(-math.exp(-x)) if x > 30 else math.log(math.expm1(x))


def _xlogx(v):
    return v * math.log(v) if v > 0 else 0.0


def _check_domain(alpha, c, beta, gamma):
    if not alpha > 0:
        raise NonPositiveAlpha(f"alpha must be positive, got {alpha}")
    if not c > 0:
        raise DomainError(f"c must be positive, got {c}")
    if not (0 < beta <= alpha and beta <= gamma):
        raise DomainError(f"(beta, gamma)=({beta}, {gamma}) outside 0 < beta <= alpha, beta <= gamma")


def g_expanded(alpha: float, c: float, beta: float, gamma: float) -> float:
    """Closed form; the diagonal ``beta == gamma`` has its own formula."""
    _check_domain(alpha, c, beta, gamma)
    head = -1.0 + _xlogx(alpha) - _xlogx(alpha - beta)
    if beta == gamma:
        return head + beta * math.log(c / (math.e * alpha))
    x0 = solve_x0(beta, gamma)
    return (
        head
        + gamma * math.log(c * gamma / (2.0 * math.e * x0 * alpha))
        + beta * (math.log(2.0 / beta) + _log_expm1(x0))
    )


_MP_DPS = 40


def g_definition_mp(alpha, c, beta, gamma, dps: int = _MP_DPS):
    """Log of the raw product as an mpf, with ``x0`` solved in mpmath."""
    with mpmath.workdps(dps):
        a, cc, b, gm = (mpmath.mpf(v) for v in (alpha, c, beta, gamma))
        e = mpmath.e
        mid = a**a / (b**b * (a - b) ** (a - b)) if a != b else a**a / b**b
        if b == gm:
            # 0^0 = 1 and (e^x0 - 1)/x0 -> 1: the first and last factors merge
            prod = (1 / e) * (cc / (2 * e * a)) ** gm * mid * 2**b * gm**gm
            return +mpmath.log(prod)
        r = b / gm
        seed = mpmath.mpf(solve_x0(float(b), float(gm))) or 1 / r
        x0 = mpmath.findroot(lambda t: 1 - mpmath.exp(-t) - r * t, seed)
        prod = (1 / e) * (cc * gm / (2 * e * x0 * a)) ** gm * mid * 2**b * mpmath.expm1(x0) ** b
        return +mpmath.log(prod)


def g_definition(alpha, c, beta, gamma) -> float:
    _check_domain(alpha, c, beta, gamma)
    return float(g_definition_mp(alpha, c, beta, gamma))


def g(alpha: float, c: float, beta: float, gamma: float, check: bool = True) -> GPoint:
    value = g_expanded(alpha, c, beta, gamma)
    if check:
        other = g_definition(alpha, c, beta, gamma)
        if abs(other - value) > IDENTITY_TOL * max(1.0, abs(value)):
            raise InternalMismatch(f"g forms disagree: {value!r} vs {other!r}")
    x0 = 0.0 if beta == gamma else solve_x0(beta, gamma)
    return GPoint(float(alpha), float(c), float(beta), float(gamma), x0, value)


def solve_x0_array(r: np.ndarray) -> np.ndarray:
    """Vectorised ``x0`` for ratios ``0 < r <= 1`` (``x0 = 0`` at ``r = 1``)."""
    r = np.asarray(r, dtype=float)
    x = np.where(r < 1, 1.0 / r, 0.0)
    for _ in range(100):
        f = -np.expm1(-x) - r * x
        d = np.exp(-x) - r
        step = np.where(r < 1, f / np.where(d == 0, -1.0, d), 0.0)
        # concave f, start right of the root: Newton decreases monotonically
        x = np.maximum(x - step, 0.0)
        if np.all(np.abs(step) <= 4e-16 * np.maximum(x, 1e-300)):
            break
    return x


def g_array(alpha: float, c: float, beta: np.ndarray, gamma: np.ndarray) -> np.ndarray:
    """Expanded form on arrays; entries outside the domain are ``nan``."""
    beta, gamma = np.broadcast_arrays(np.asarray(beta, float), np.asarray(gamma, float))
    ok = (beta > 0) & (beta <= alpha) & (gamma >= beta)
    b = np.where(ok, beta, 1.0)
    gm = np.where(ok, gamma, 1.0)
    x0 = solve_x0_array(b / gm)
    amb = alpha - b
    head = -1.0 + alpha * math.log(alpha) - np.where(amb > 0, amb * np.log(np.where(amb > 0, amb, 1.0)), 0.0)
    diag = b == gm
    safe_x0 = np.where(diag, 1.0, x0)
    big = safe_x0 > 30
    log_em1 = np.where(big, safe_x0 + np.log1p(-np.exp(-safe_x0)), np.log(np.expm1(np.where(big, 1.0, safe_x0))))
    off = gm * np.log(c * gm / (2 * math.e * safe_x0 * alpha)) + b * (np.log(2 / b) + log_em1)
    on = b * np.log(c / (math.e * alpha))
    out = head + np.where(diag, on, off)
    return np.where(ok, out, np.nan)


# -- stationary point, gamma_beta, K ------------------------------------------


def _check_ac(alpha, c):
    if not alpha > 0:
        raise NonPositiveAlpha(f"alpha must be positive, got {alpha}")
    if not 1.0 < c < 2.0:
        raise DomainError(f"need 1 < c < 2, got {c}")


def stationary_point(alpha: float, c: float) -> tuple[float, float]:
    _check_ac(alpha, c)
    return 2.0 * alpha * (c - 1.0) / c, -2.0 * alpha * math.log(2.0 - c) / c


def gamma_of_beta(alpha: float, c: float, beta: float) -> float:
    if not alpha > 0:
        raise NonPositiveAlpha(f"alpha must be positive, got {alpha}")
    if not (0 < beta <= alpha and beta * c < 2 * alpha):
        raise DomainError(f"gamma_of_beta needs 0 < beta <= alpha and beta*c < 2 alpha, got beta={beta}")
    return -(2.0 * alpha / c) * math.log1p(-beta * c / (2.0 * alpha))


def K(c: float, x: float) -> float:
    if not (0 < x < 1 and c * x < 2):
        raise DomainError(f"K needs 0 < x < 1 and c x < 2, got c={c}, x={x}")
    return x * math.log(c) + (2.0 / c - x) * math.log1p(-c * x / 2.0) - (1.0 - x) * math.log1p(-x)


def dg_dgamma(alpha, c, beta, gamma) -> float:
    _check_domain(alpha, c, beta, gamma)
    return math.log(c * gamma / (2.0 * solve_x0(beta, gamma) * alpha))


def dg_dbeta(alpha, c, beta, gamma) -> float:
    _check_domain(alpha, c, beta, gamma)
    x0 = solve_x0(beta, gamma)
    return math.log(2.0 * (alpha - beta) / beta) + _log_expm1(x0)


def d2g_dgamma2(alpha, c, beta, gamma) -> float:
    _check_domain(alpha, c, beta, gamma)
    x0 = solve_x0(beta, gamma)
    return (gamma - beta * x0) / (gamma * (gamma - beta * (x0 + 1.0)))


def figure1_rows(alphas) -> list[tuple[float, float, str]]:
    out = []
    for a in alphas:
        r = critical_ratio(a)
        out.append((r.alpha, r.c_star, r.branch.value))
    return out
