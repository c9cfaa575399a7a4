"""Real-argument special functions behind the closed-form evaluators.

Scalar log-gamma with explicit sign tracking (negative arguments such as
Gamma(-5/4) occur routinely in the action formulas), digamma, generalized
binomial coefficients with their derivative in the upper argument, and the
odd harmonic partial sums of the sharp-cutoff regularization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
CATALAN = 0.91596559417721901505
LOG2 = 0.69314718055994530942

# Lanczos coefficients, g = 7, n = 9 (double precision).
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


@dataclass(frozen=True)
class Jet1:
    """Value and first s-derivative of a function of s, taken at s = 0."""

    value: float
    deriv: float

    def __post_init__(self):
        if not (math.isfinite(self.value) and math.isfinite(self.deriv)):
            raise DomainError("Jet1 fields must be finite")

    @staticmethod
    def zero() -> "Jet1":
        return Jet1(0.0, 0.0)

    def __add__(self, other: "Jet1") -> "Jet1":
        return Jet1(self.value + other.value, self.deriv + other.deriv)

    def scaled(self, c: float) -> "Jet1":
        return Jet1(c * self.value, c * self.deriv)

    @property
    def is_zero(self) -> bool:
        return self.value == 0.0 and self.deriv == 0.0


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def _sinpi(x: float) -> float:
    """sin(pi*x), exact at integers and accurate near them."""
    r = math.remainder(x, 2.0)  # r in [-1, 1]
    if r == math.floor(r):
        return 0.0
    if r > 0.5:
        r = 1.0 - r
    elif r < -0.5:
        r = -1.0 - r
    return math.sin(math.pi * r)


def _cotpi(x: float) -> float:
    """cos(pi*x)/sin(pi*x) with the argument reduced to a half period."""
    r = math.remainder(x, 1.0)  # r in [-0.5, 0.5]
    if r == 0.0:
        raise DomainError("cot(pi x) pole at integer x")
    return math.cos(math.pi * r) / math.sin(math.pi * r)


def _lanczos_log_gamma(x: float) -> float:
    # valid for x >= 0.5
    s = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        s += c / (x - 1.0 + i)
    t = x + _LANCZOS_G - 0.5
    return _HALF_LOG_2PI + (x - 0.5) * math.log(t) - t + math.log(s)


def log_gamma(x: float) -> tuple[float, float]:
    """Return (log|Gamma(x)|, sign of Gamma(x)).

    Raises DomainError at the poles x = 0, -1, -2, ...
    """
    if _is_nonpositive_integer(x):
        raise DomainError(f"Gamma pole at x = {x}")
    if x >= 0.5:
        return _lanczos_log_gamma(x), 1.0
    # reflection: Gamma(x) Gamma(1-x) = pi / sin(pi x); Gamma(1-x) > 0 here
    s = _sinpi(x)
    value = math.log(math.pi) - math.log(abs(s)) - _lanczos_log_gamma(1.0 - x)
    return value, math.copysign(1.0, s)


def gamma(x: float) -> float:
    """Signed Gamma(x) for moderate arguments."""
    lg, sign = log_gamma(x)
    return sign * math.exp(lg)


def digamma(x: float) -> float:
    """psi(x) = Gamma'(x)/Gamma(x)."""
    if _is_nonpositive_integer(x):
        raise DomainError(f"digamma pole at x = {x}")
    if x < 0.0:
        # psi(x) = psi(1-x) - pi cot(pi x)
        return digamma(1.0 - x) - math.pi * _cotpi(x)
    acc = 0.0
    while x < 12.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    # asymptotic series: log x - 1/(2x) - sum B_{2n}/(2n x^{2n})
    series = inv2 * (1.0 / 12.0
                     - inv2 * (1.0 / 120.0
                               - inv2 * (1.0 / 252.0
                                         - inv2 * (1.0 / 240.0
                                                   - inv2 * (1.0 / 132.0
                                                             - inv2 * (691.0 / 32760.0))))))
    return acc + math.log(x) - 0.5 / x - series


def general_binomial(alpha: float, k: int) -> float:
    """binom(alpha, k) = alpha (alpha-1) ... (alpha-k+1) / k!

    Product recurrence, well defined for any real alpha.
    """
    if k < 0:
        raise DomainError("k must be a nonnegative integer")
    out = 1.0
    for i in range(k):
        out *= (alpha - i) / (i + 1)
    return out


def general_binomial_alpha_deriv(alpha: float, k: int) -> float:
    """d/d(alpha) of binom(alpha, k), by the product rule.

    Safe even when some factor (alpha - i) vanishes.
    """
    if k < 0:
        raise DomainError("k must be a nonnegative integer")
    # derivative of prod (alpha - i) is sum_j prod_{i != j} (alpha - i)
    total = 0.0
    for j in range(k):
        term = 1.0
        for i in range(k):
            if i != j:
                term *= alpha - i
        total += term
    fact = 1.0
    for i in range(1, k + 1):
        fact *= i
    return total / fact


def odd_harmonic_partial(K: int) -> float:
    """sum_{k=0}^{K-1} 1/(2k+1)."""
    if K < 1:
        raise DomainError("K must be a positive integer")
    # backwards summation keeps the rounding error at the 1e-16 level
    total = 0.0
    for k in range(K - 1, -1, -1):
        total += 1.0 / (2 * k + 1)
    return total
