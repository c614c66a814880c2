"""Self-contained special-function kernel: log-gamma, log-beta, real-argument
log-binomial, and signed log-sum-exp with a cancellation diagnostic.

Everything here is implemented in-repo (no scipy/numpy) so the accuracy
contract can be tested in isolation and the kernel ports cleanly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


LN_SQRT_2PI = 0.9189385332046727  # ln sqrt(2*pi)

# Lanczos approximation, g = 7, 9 coefficients.  Relative accuracy of the
# reconstructed Gamma is ~1e-15 over the positive real axis.
_LANCZOS_G = 7.0
_LANCZOS_COEF = (
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

# ln((n-1)!) for small integer arguments, built once by exact log summation.
_LNFACT_MAX = 512
_lnfact_cache: list[float] = []


def _lnfact(n: int) -> float:
    """ln(n!) for 0 <= n < _LNFACT_MAX via cumulative fsum of logs."""
    global _lnfact_cache
    if not _lnfact_cache:
        logs = [0.0]
        for k in range(1, _LNFACT_MAX):
            logs.append(math.log(k))
        acc = []
        running: list[float] = []
        for k in range(_LNFACT_MAX):
            running.append(logs[k])
            acc.append(math.fsum(running))
        _lnfact_cache = acc
    return _lnfact_cache[n]


def _lanczos_log_gamma(z: float) -> float:
    """Core Lanczos evaluation, valid for z >= 0.5."""
    zm1 = z - 1.0
    series = _LANCZOS_COEF[0]
    for i in range(1, 9):
        series += _LANCZOS_COEF[i] / (zm1 + i)
    t = zm1 + _LANCZOS_G + 0.5
    return LN_SQRT_2PI + (zm1 + 0.5) * math.log(t) - t + math.log(series)


def log_gamma(z: float) -> float:
    """ln Gamma(z) for z > 0.

    Lanczos approximation for z >= 0.5; one recurrence step
    ln Gamma(z) = ln Gamma(z+1) - ln z keeps accuracy for z < 0.5.
    Integer arguments below 512 come from an exact log-factorial table.
    """
    z = float(z)
    if not math.isfinite(z) or z <= 0.0:
        raise DomainError(f"log_gamma requires finite z > 0, got {z!r}")
    if z.is_integer() and z < _LNFACT_MAX:
        return _lnfact(int(z) - 1)
    if z < 0.5:
        return _lanczos_log_gamma(z + 1.0) - math.log(z)
    return _lanczos_log_gamma(z)


def log_beta(r: float, s: float) -> float:
    """ln B(r, s) = ln Gamma(r) + ln Gamma(s) - ln Gamma(r+s), for r, s > 0."""
    if not (r > 0.0 and s > 0.0):
        raise DomainError(f"log_beta requires positive arguments, got ({r!r}, {s!r})")
    return log_gamma(r) + log_gamma(s) - log_gamma(r + s)


def log_binomial(n: float, x: int) -> float:
    """ln [Gamma(n+1) / (Gamma(x+1) Gamma(n-x+1))] for real n and integer x >= 0.

    Both gamma arguments n+1 and n-x+1 must be positive.
    """
    if x != int(x) or x < 0:
        raise DomainError(f"log_binomial requires a nonnegative integer x, got {x!r}")
    x = int(x)
    if not (n + 1.0 > 0.0 and n - x + 1.0 > 0.0):
        raise DomainError(f"log_binomial undefined for n={n!r}, x={x}")
    return log_gamma(n + 1.0) - log_gamma(x + 1.0) - log_gamma(n - x + 1.0)


@dataclass(frozen=True, slots=True)
class SignedLogValue:
    """A real number stored as (sign, log of absolute value).

    sign is one of {+1, -1, 0}; sign == 0 represents exact zero and any
    stored log_mag is then treated as -inf.
    """

    sign: int
    log_mag: float

    @classmethod
    def from_real(cls, v: float) -> "SignedLogValue":
        if v == 0.0:
            return cls(0, -math.inf)
        if v > 0.0:
            return cls(1, math.log(v))
        return cls(-1, math.log(-v))

    def to_real(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_mag)


_ZERO = SignedLogValue(0, -math.inf)


def signed_log_sum(terms: Sequence[SignedLogValue] | Iterable[SignedLogValue]) -> tuple[SignedLogValue, float]:
    """Exact-as-possible signed sum of log-represented reals.

    All terms are rescaled by the maximum log-magnitude, the positive and
    negative groups are accumulated separately with compensated summation
    (math.fsum), and the groups are subtracted once at the end.

    Returns (result, cancellation) where cancellation = sum|terms| / |result|
    (+inf when the result is exactly zero).  Large cancellation means the
    leading digits of the inputs annihilated and the result is untrustworthy
    in ordinary double precision.
    """
    terms = list(terms)
    if not terms:
        raise DomainError("signed_log_sum requires a nonempty sequence")
    m = -math.inf
    for t in terms:
        if t.sign != 0 and t.log_mag > m:
            m = t.log_mag
    if m == -math.inf:
        return _ZERO, math.inf
    pos = math.fsum(math.exp(t.log_mag - m) for t in terms if t.sign > 0)
    neg = math.fsum(math.exp(t.log_mag - m) for t in terms if t.sign < 0)
    diff = pos - neg
    total = pos + neg
    if diff == 0.0:
        return _ZERO, math.inf
    sign = 1 if diff > 0.0 else -1
    return SignedLogValue(sign, m + math.log(abs(diff))), total / abs(diff)
