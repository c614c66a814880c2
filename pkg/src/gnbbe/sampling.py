"""Deterministic, seedable random variates for the GNB-BE family via its
stochastic representation: draw lam from the beta exponential law, set
theta = exp(-lam), then draw the count from the conditional generalized
negative binomial by sequential inverse-CDF.
"""

from __future__ import annotations

import math

from .distributions import BeParams, GnbBeParams, GnbParams, gnb_log_pmf
from .specfun import DomainError


class SamplerExhaustedError(RuntimeError):
    """Too many rejected draws: the conditional law is severely mass deficient."""


_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_STREAM_SALT = 0xD1B54A32D192ED03
_INV_2_53 = 2.0 ** -53


def _mix64(z: int) -> int:
    """SplitMix64 output permutation (Steele, Lea & Flood's finalizer)."""
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


class RandomSource:
    """Counter-based uniform stream with an explicit 64-bit state.

    Algorithm (the external contract, so ports can reproduce streams
    bit-for-bit): the state starts at

        s0 = mix64((seed * 0x9E3779B97F4A7C15 + stream * 0xD1B54A32D192ED03) mod 2^64)

    and each draw advances s by the golden-ratio increment 0x9E3779B97F4A7C15
    and emits mix64(s), where mix64 is the SplitMix64 finalizer.  Uniforms are
    the top 53 bits scaled by 2^-53, always in [0, 1).
    """

    __slots__ = ("seed", "stream", "_state")

    def __init__(self, seed: int, stream: int = 0):
        self.seed = int(seed) & _MASK64
        self.stream = int(stream) & _MASK64
        self._state = _mix64((self.seed * _GOLDEN + self.stream * _STREAM_SALT) & _MASK64)

    @property
    def state(self) -> int:
        return self._state

    def next_uint64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return _mix64(self._state)

    def next_uniform(self) -> float:
        return (self.next_uint64() >> 11) * _INV_2_53


def _standard_normal(rng: RandomSource) -> float:
    """One N(0,1) variate by Box-Muller (cosine branch, no rejection)."""
    u1 = 1.0 - rng.next_uniform()
    u2 = rng.next_uniform()
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)


def sample_gamma(shape: float, rng: RandomSource) -> float:
    """Gamma(shape, 1) variate by Marsaglia-Tsang squeeze/acceptance.

    For shape < 1 the standard boosting transform is applied:
    G_a = G_(a+1) * U^(1/a).
    """
    if not shape > 0.0:
        raise DomainError(f"gamma shape must be positive, got {shape!r}")
    boost = 1.0
    if shape < 1.0:
        u = 1.0 - rng.next_uniform()
        boost = u ** (1.0 / shape)
        shape += 1.0
    d = shape - 1.0 / 3.0
    c = 1.0 / math.sqrt(9.0 * d)
    while True:
        z = _standard_normal(rng)
        v = 1.0 + c * z
        if v <= 0.0:
            continue
        v = v * v * v
        u = 1.0 - rng.next_uniform()
        z2 = z * z
        if u < 1.0 - 0.0331 * z2 * z2:
            return boost * d * v
        if math.log(u) < 0.5 * z2 + d - d * v + d * math.log(v):
            return boost * d * v


def sample_beta(a: float, b: float, rng: RandomSource) -> float:
    """Beta(a, b) variate as a ratio of two gamma variates."""
    if not (a > 0.0 and b > 0.0):
        raise DomainError(f"beta shapes must be positive, got ({a!r}, {b!r})")
    while True:
        ga = sample_gamma(a, rng)
        gb = sample_gamma(b, rng)
        s = ga + gb
        if s > 0.0 and ga < s:
            return ga / s
        # underflow of both gammas, or ga == s: retry (vanishingly rare)


def sample_be(p: BeParams, rng: RandomSource) -> float:
    """Beta exponential variate.

    If V ~ Beta(a, b) then lam = -ln(1 - V)/c has exactly the BE(a, b, c)
    density: substituting u = 1 - exp(-c lam) into the density maps it onto
    the Beta(a, b) law.
    """
    v = sample_beta(p.a, p.b, rng)
    return -math.log1p(-v) / p.c


def sample_gnbbe(p: GnbBeParams, rng: RandomSource,
                 x_cap: int = 10_000, max_retries: int = 1000) -> int:
    """One count from the five-parameter mixed distribution.

    Draws lam, sets theta = exp(-lam), then inverts the conditional CDF by
    accumulating pmf terms from x = 0 upward.  The beta = 1 (negative
    binomial) and beta = 0 (binomial) conditionals use the exact pmf ratio
    recurrence instead of re-evaluating gamma functions per step; general
    beta goes through gnb_log_pmf.  When the conditional law is mass
    deficient (possible for beta > 1) the uniform can exceed every reachable
    partial sum; such draws are rejected and retried with a fresh lam, so
    the sampler conditions on the event that a value was generated.
    """
    m, beta = p.m, p.beta
    uniform = rng.next_uniform
    for _ in range(max_retries):
        lam = sample_be(p.be, rng)
        theta = math.exp(-lam)
        if theta <= 0.0 or theta >= 1.0:
            continue
        u = uniform()
        if beta == 1.0:
            pmf = theta ** m
            if pmf == 0.0:
                continue
            q = 1.0 - theta
            acc = pmf
            if u < acc:
                return 0
            for x in range(1, x_cap + 1):
                pmf *= (m + x - 1.0) / x * q
                acc += pmf
                if u < acc:
                    return x
        elif beta == 0.0:
            pmf = theta ** m
            if pmf == 0.0:
                continue
            ratio = (1.0 - theta) / theta
            acc = pmf
            if u < acc:
                return 0
            for x in range(1, min(x_cap, int(m)) + 1):
                pmf *= (m - x + 1.0) / x * ratio
                acc += pmf
                if u < acc:
                    return x
        else:
            cond = GnbParams(m, beta, theta)
            acc = 0.0
            for x in range(x_cap + 1):
                acc += math.exp(gnb_log_pmf(cond, x))
                if u < acc:
                    return x
    raise SamplerExhaustedError(
        f"no value generated after {max_retries} conditional draws; "
        f"parameters are severely mass deficient"
    )
