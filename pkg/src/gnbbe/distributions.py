"""The generalized negative binomial-beta exponential (GNB-BE) count
distribution and its special cases.

The five-parameter family arises by mixing a generalized negative binomial
GNB(m, beta, theta) over theta = exp(-lam) with lam drawn from the beta
exponential law BE(a, b, c).  The probability of a count x has the closed
form

    p(x) = m/(m+beta*x) * C(m+beta*x, x)
           * sum_{j=0}^{x} C(x,j) (-1)^j B(b + (j+m+beta*x-x)/c, a) / B(a,b)

which alternates and cancels catastrophically for large x, so every
evaluation carries a cancellation diagnostic and falls back to a
nonnegative-integrand quadrature of the defining mixture integral when the
alternating sum is no longer trustworthy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .specfun import (
    DomainError,
    SignedLogValue,
    log_beta,
    log_binomial,
    log_gamma,
    signed_log_sum,
)


class MomentExistenceError(DomainError):
    """A requested moment does not exist for the given parameters."""


class QuadratureConvergenceError(RuntimeError):
    """Panel doubling failed to stabilise the quadrature oracle."""


# Above this cancellation the alternating closed form has lost too many
# digits (empirically relerr ~ 1e-15 * cancellation) and evaluation is
# rerouted through the quadrature oracle.
CANCELLATION_LIMIT = 1e5
_FALLBACK_PANELS = 256

_GL_ORDER = 8
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise DomainError(msg)


def _check_count(x) -> int:
    if x != int(x) or x < 0:
        raise DomainError(f"count must be a nonnegative integer, got {x!r}")
    return int(x)


def _check_gnb_shape(m: float, beta: float) -> None:
    _require(math.isfinite(m) and m > 0.0, f"m must be positive and finite, got {m!r}")
    _require(math.isfinite(beta), f"beta must be finite, got {beta!r}")
    _require(beta == 0.0 or beta >= 1.0, f"beta must be 0 or >= 1, got {beta!r}")
    if beta == 0.0:
        _require(float(m).is_integer(), f"beta=0 requires integer m, got {m!r}")


@dataclass(frozen=True, slots=True)
class GnbParams:
    """Generalized negative binomial parameters (size m, Lagrangian beta,
    success probability theta)."""

    m: float
    beta: float
    theta: float

    def __post_init__(self):
        _check_gnb_shape(self.m, self.beta)
        _require(0.0 < self.theta < 1.0, f"theta must lie in (0,1), got {self.theta!r}")


@dataclass(frozen=True, slots=True)
class BeParams:
    """Beta exponential parameters: shapes a, b and rate scale c, all > 0."""

    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            _require(math.isfinite(v) and v > 0.0, f"{name} must be positive and finite, got {v!r}")


@dataclass(frozen=True, slots=True)
class GnbBeParams:
    """Parameters of the five-parameter mixed count distribution."""

    m: float
    beta: float
    a: float
    b: float
    c: float

    def __post_init__(self):
        _check_gnb_shape(self.m, self.beta)
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            _require(math.isfinite(v) and v > 0.0, f"{name} must be positive and finite, got {v!r}")

    @property
    def be(self) -> BeParams:
        return BeParams(self.a, self.b, self.c)


@dataclass(frozen=True, slots=True)
class QuadratureConfig:
    """Composite Gauss-Legendre settings for the mixture-integral oracle.

    upper_cut=None selects the automatic cut: the point beyond which both
    the mixing density's survival mass (< 1e-12, found by bisection) and the
    integrand's own decay (60 e-folds below its peak) are negligible.
    """

    panel_count: int = 2000
    upper_cut: float | None = None

    def __post_init__(self):
        _require(self.panel_count >= 16, "panel_count must be at least 16")


_DEFAULT_QUAD = QuadratureConfig()


# ---------------------------------------------------------------------------
# component distributions
# ---------------------------------------------------------------------------

def gnb_log_pmf(p: GnbParams, x) -> float:
    """log pmf of the generalized negative binomial.

    Returns -inf for x beyond the binomial support when beta = 0.
    """
    x = _check_count(x)
    m, beta, theta = p.m, p.beta, p.theta
    if beta == 0.0 and x > m:
        return -math.inf
    n = m + beta * x
    if n - x + 1.0 <= 0.0:
        raise DomainError(f"gnb_log_pmf undefined: m + beta*x - x + 1 <= 0 for x={x}")
    return (
        math.log(m / n)
        + log_binomial(n, x)
        + x * math.log1p(-theta)
        + (n - x) * math.log(theta)
    )


def be_log_pdf(p: BeParams, lam: float) -> float:
    """log density of the beta exponential law at lam > 0."""
    if not lam > 0.0:
        raise DomainError(f"be_log_pdf requires lam > 0, got {lam!r}")
    a, b, c = p.a, p.b, p.c
    return (
        math.log(c)
        - log_beta(a, b)
        - b * c * lam
        + (a - 1.0) * math.log1p(-math.exp(-c * lam))
    )


def be_log_mgf(p: BeParams, t: float) -> float:
    """log moment generating function of the beta exponential law.

    Defined for t < b*c; the defining integral diverges beyond.
    """
    a, b, c = p.a, p.b, p.c
    if not t < b * c:
        raise DomainError(f"be_log_mgf requires t < b*c = {b * c!r}, got t={t!r}")
    return log_beta(b - t / c, a) - log_beta(a, b)


# ---------------------------------------------------------------------------
# alternating closed form
# ---------------------------------------------------------------------------

def _be_alternating_sum(x: int, shift: float, a: float, b: float, c: float) -> tuple[SignedLogValue, float]:
    """sum_{j=0}^{x} C(x,j)(-1)^j B(b+(j+shift)/c, a)/B(a,b) in signed log space."""
    lg_a = log_gamma(a)
    lb0 = log_gamma(b) + lg_a - log_gamma(a + b)
    inv_c = 1.0 / c
    terms = []
    for j in range(x + 1):
        z = b + (j + shift) * inv_c
        log_beta_j = log_gamma(z) + lg_a - log_gamma(z + a)
        terms.append(SignedLogValue(-1 if j & 1 else 1, log_binomial(x, j) + log_beta_j - lb0))
    return signed_log_sum(terms)


def _log_pmf_routed(p: GnbBeParams, x: int, quad: QuadratureConfig) -> tuple[float, float, bool]:
    """(log pmf, cancellation, used_oracle) with the fallback policy applied."""
    m, beta = p.m, p.beta
    if beta == 0.0 and x > m:
        return -math.inf, 1.0, False
    shift = m + beta * x - x
    s, kappa = _be_alternating_sum(x, shift, p.a, p.b, p.c)
    if s.sign > 0 and kappa <= CANCELLATION_LIMIT:
        log_pref = math.log(m / (m + beta * x)) + log_binomial(m + beta * x, x)
        return log_pref + s.log_mag, kappa, False
    # Alternating sum untrustworthy (or annihilated to a nonpositive value):
    # integrate the nonnegative mixture integrand instead.
    return _oracle_log_pmf(p, x, quad), kappa, True


def gnbbe_log_pmf(p: GnbBeParams, x) -> tuple[float, float]:
    """log pmf of the GNB-BE distribution, with a cancellation diagnostic.

    Evaluates the alternating closed form in signed log space.  When the
    cancellation exceeds CANCELLATION_LIMIT the value is transparently
    recomputed from the mixture integral; the diagnostic is preserved so
    callers can see that the sum was untrustworthy.
    """
    x = _check_count(x)
    lp, kappa, _ = _log_pmf_routed(p, x, QuadratureConfig(panel_count=_FALLBACK_PANELS))
    return lp, kappa


def _log_pmf_many(p: GnbBeParams, xs: Sequence[int],
                  quad: QuadratureConfig | None = None) -> list[tuple[float, float]]:
    """(log pmf, cancellation) for several counts, batching the quadrature
    fallbacks onto shared meshes."""
    quad = quad or QuadratureConfig(panel_count=_FALLBACK_PANELS)
    m, beta, a, b, c = p.m, p.beta, p.a, p.b, p.c
    out: list[tuple[float, float] | None] = [None] * len(xs)
    pending: list[tuple[int, int, float]] = []  # (position, x, kappa)
    for i, x in enumerate(xs):
        if beta == 0.0 and x > m:
            out[i] = (-math.inf, 1.0)
            continue
        s, kappa = _be_alternating_sum(x, m + beta * x - x, a, b, c)
        if s.sign > 0 and kappa <= CANCELLATION_LIMIT:
            log_pref = math.log(m / (m + beta * x)) + log_binomial(m + beta * x, x)
            out[i] = (log_pref + s.log_mag, kappa)
        else:
            pending.append((i, x, kappa))
    for start in range(0, len(pending), 8):
        chunk = pending[start:start + 8]
        lps = _oracle_log_many(p, [x for _, x, _ in chunk], quad)
        for (i, _, kappa), lp in zip(chunk, lps):
            out[i] = (lp, kappa)
    return out  # type: ignore[return-value]


# ---------------------------------------------------------------------------
# quadrature oracle over the mixture integral
# ---------------------------------------------------------------------------
#
# The lam-integrand of the mixture, prefactor excluded, is exp(phi) with
#     phi(lam) = x ln(1-e^-lam) + (a-1) ln(1-e^-(c lam)) - (K + b c) lam,
#     K = m + beta x - x.
# It is nonnegative, unimodal on the lam*density scale, integrably singular
# at 0 when a < 1 and x = 0, and decays exponentially.  The mesh anchors on
# the peak of psi = phi + ln(lam), cuts 60 e-folds down on both sides, and
# grades panels dyadically into a lam = 0 endpoint.


def _log1mexp_scalar(t: float) -> float:
    """ln(1 - e^-t) for t > 0, accurate for tiny t."""
    if t < 1e-8:
        return math.log(t) - 0.5 * t
    return math.log1p(-math.exp(-t))


def _log1mexp(t: np.ndarray) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    safe = np.where(t < 1e-8, 1.0, t)
    return np.where(t < 1e-8, np.log(t) - 0.5 * t, np.log1p(-np.exp(-safe)))


def _phi_scalar(lam: float, x: int, a: float, c: float, rate: float) -> float:
    out = -rate * lam
    if x:
        out += x * _log1mexp_scalar(lam)
    if a != 1.0:
        out += (a - 1.0) * _log1mexp_scalar(c * lam)
    return out


def _be_survival_cut(p: GnbBeParams, tol: float = 1e-12) -> float:
    """lam beyond which the mixing density's tail mass is below tol.

    Uses the analytic bound S(lam) <= max(1, (1-e^-c lam)^(a-1))
    * e^(-b c lam) / (b B(a,b)), monotone decreasing, found by bisection.
    """
    a, b, c = p.a, p.b, p.c
    log_tol = math.log(tol)
    lbb = math.log(b) + log_beta(a, b)

    def log_bound(lam):
        s = (a - 1.0) * _log1mexp_scalar(c * lam)
        return max(0.0, s) - b * c * lam - lbb

    hi = 1.0 / (b * c)
    while log_bound(hi) > log_tol:
        hi *= 2.0
        if hi > 1e306:
            return hi
    lo = hi / 2.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if log_bound(mid) > log_tol:
            lo = mid
        else:
            hi = mid
    return hi


def _integration_interval(p: GnbBeParams, x: int) -> tuple[float, float]:
    """(lo, hi) spanning everything that matters of exp(phi).

    Anchors on the peak of psi(lam) = phi(lam) + ln lam (the mass per decade
    of lam), then walks dyadically 60 e-folds down on each side; the cuts
    only need to be safe, not tight, so no refinement beyond the factor-2
    bracket.  psi -> -inf at both ends even in the singular a < 1 cases, so
    the anchor is always interior.
    """
    a, c = p.a, p.c
    rate = p.m + p.beta * x - x + p.b * c

    def psi(lam: float) -> float:
        return _phi_scalar(lam, x, a, c, rate) + math.log(lam)

    scale = 1.0 / (rate + x + 1.0)
    grid = np.geomspace(scale * 1e-9, scale * 1e9, 96)
    vals = (
        -rate * grid
        + (x * _log1mexp(grid) if x else 0.0)
        + ((a - 1.0) * _log1mexp(c * grid) if a != 1.0 else 0.0)
        + np.log(grid)
    )
    i = int(np.argmax(vals))
    anchor = float(grid[i])
    target = float(vals[i]) - 60.0

    hi = 2.0 * anchor
    while psi(hi) > target and hi < 1e300:
        hi *= 2.0

    if x == 0 and a < 1.0:
        return 0.0, hi  # integrable singularity at 0: keep the endpoint
    lo = 0.5 * anchor
    while lo > 1e-280 and psi(lo) > target:
        lo *= 0.5
    if lo <= 1e-280 or lo < 1e-8 * anchor:
        lo = 0.0
    return lo, hi


def _panel_edges(lo: float, hi: float, n_panels: int) -> np.ndarray:
    """Uniform panels, dyadically graded toward lo == 0 so an endpoint
    singularity sits in exponentially shrinking panels."""
    if lo == 0.0:
        n_geo = 80
        n_uni = max(8, n_panels - n_geo)
        first = hi / n_uni
        geo = first * 2.0 ** (-np.arange(n_geo, 0.0, -1.0))
        return np.concatenate(([0.0], geo, np.linspace(first, hi, n_uni)))
    return np.linspace(lo, hi, max(8, n_panels) + 1)


def _gl_nodes_weights(edges: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    nodes = (mid[:, None] + half[:, None] * _GL_NODES[None, :]).ravel()
    wts = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    return nodes, wts


def _log_dot(wts: np.ndarray, logf: np.ndarray) -> float:
    m = float(np.max(logf))
    if m == -math.inf:
        return -math.inf
    return m + math.log(float(np.dot(wts, np.exp(logf - m))))


def _log_prefactor(p: GnbBeParams, x: int) -> float:
    return (
        math.log(p.m / (p.m + p.beta * x))
        + log_binomial(p.m + p.beta * x, x)
        + math.log(p.c)
        - log_beta(p.a, p.b)
    )


def _oracle_log_many(p: GnbBeParams, xs: Sequence[int],
                     quad: QuadratureConfig | None = None,
                     check: bool = False) -> list[float]:
    """log pmf by quadrature for several counts on one shared mesh.

    The integration interval is the union of the per-count intervals at the
    smallest, middle and largest x (the cuts move monotonically with x), so
    all integrands are resolved by the same panels; the lam-only parts of
    phi are evaluated once and reused across counts.
    """
    quad = quad or _DEFAULT_QUAD
    xs = list(xs)
    a, b, c, m, beta = p.a, p.b, p.c, p.m, p.beta
    lo = math.inf
    hi = 0.0
    span = max(xs) - min(xs)
    for x in sorted({min(xs), min(xs) + span // 3, min(xs) + (2 * span) // 3, max(xs)}):
        l, h = _integration_interval(p, x)
        lo = min(lo, l)
        hi = max(hi, h)
    # The core panels stay on the integrand's own support; the stretch out to
    # the mixing density's survival cut (or a user-supplied upper_cut beyond
    # the core) carries next to nothing and gets a few geometric panels so it
    # cannot dilute the core resolution.
    if quad.upper_cut is not None:
        ext = quad.upper_cut
        hi = min(hi, ext)
    else:
        ext = max(hi, _be_survival_cut(p))

    def integrate_all(n_panels: int) -> list[float]:
        edges = _panel_edges(lo, hi, n_panels)
        if ext > hi * (1.0 + 1e-12):
            edges = np.concatenate((edges, np.geomspace(hi, ext, 25)[1:]))
        nodes, wts = _gl_nodes_weights(edges)
        shared = -b * c * nodes
        if a != 1.0:
            shared = shared + (a - 1.0) * _log1mexp(c * nodes)
        lx = _log1mexp(nodes)
        out = []
        for x in xs:
            logf = shared - (m + beta * x - x) * nodes
            if x:
                logf = logf + x * lx
            out.append(_log_dot(wts, logf))
        return out

    vals = integrate_all(quad.panel_count)
    if check:
        vals2 = integrate_all(2 * quad.panel_count)
        for x, l1, l2 in zip(xs, vals, vals2):
            if l1 == -math.inf and l2 == -math.inf:
                continue
            if abs(math.expm1(l1 - l2)) > 1e-8:
                raise QuadratureConvergenceError(
                    f"panel doubling moved the oracle by {abs(math.expm1(l1 - l2)):.3e} "
                    f"relative at x={x} (panel_count={quad.panel_count})"
                )
        vals = vals2
    return [v + _log_prefactor(p, x) for x, v in zip(xs, vals)]


def _oracle_log_pmf(p: GnbBeParams, x: int, quad: QuadratureConfig | None = None,
                    check: bool = False) -> float:
    if p.beta == 0.0 and x > p.m:
        return -math.inf
    return _oracle_log_many(p, [x], quad, check)[0]


def gnbbe_pmf_oracle(p: GnbBeParams, x, quad: QuadratureConfig | None = None) -> float:
    """pmf from direct quadrature of the mixture integral.

    Independent of the alternating closed form: the integrand is nonnegative
    so nothing cancels.  Self-checks by panel doubling at 1e-8 relative and
    raises QuadratureConvergenceError when that fails.
    """
    x = _check_count(x)
    return math.exp(_oracle_log_pmf(p, x, quad, check=True))


def gnbbe_pmf_oracle_many(p: GnbBeParams, xs: Sequence[int],
                          quad: QuadratureConfig | None = None) -> list[float]:
    """gnbbe_pmf_oracle over several counts on one shared, doubling-checked
    mesh; much faster than per-count calls for grid sweeps."""
    xs = [_check_count(x) for x in xs]
    finite = [x for x in xs if not (p.beta == 0.0 and x > p.m)]
    vals: dict[int, float] = {x: 0.0 for x in xs}
    if finite:
        for x, lp in zip(finite, _oracle_log_many(p, finite, quad, check=True)):
            vals[x] = math.exp(lp)
    return [vals[x] for x in xs]


# ---------------------------------------------------------------------------
# total mass and moments
# ---------------------------------------------------------------------------

class MassResult(NamedTuple):
    mass: float
    x_used: int
    converged: bool


def total_mass(p: GnbBeParams, tail_tol: float = 1e-12, x_cap: int = 10_000) -> MassResult:
    """Partial sum of the pmf over x = 0, 1, 2, ...

    Stops once the running term drops below tail_tol * mass for 10
    consecutive counts, or at x_cap.  For beta > 1 the distribution can be
    mass deficient; the reported mass quantifies that rather than assuming
    unit total.  Once the alternating form falls back to quadrature for some
    x, the remaining tail is integrated directly (cancellation only worsens
    with x).
    """
    _require(0.0 < tail_tol <= 1e-2, f"tail_tol must lie in (0, 1e-2], got {tail_tol!r}")
    _require(x_cap >= 1, f"x_cap must be >= 1, got {x_cap!r}")
    fallback = QuadratureConfig(panel_count=_FALLBACK_PANELS)
    finite_support = p.beta == 0.0
    support_cap = min(x_cap, int(p.m)) if finite_support else x_cap
    mass = 0.0
    consecutive = 0
    oracle_mode = False
    x_used = 0
    block_start = 0
    while block_start <= support_cap:
        block = list(range(block_start, min(block_start + 16, support_cap + 1)))
        if oracle_mode:
            lps = _oracle_log_many(p, block, fallback)
        else:
            lps = []
            for xv in block:
                lp, _, used = _log_pmf_routed(p, xv, fallback)
                lps.append(lp)
                if used:
                    oracle_mode = True
                    rest = block[len(lps):]
                    if rest:
                        lps.extend(_oracle_log_many(p, rest, fallback))
                    break
        for xv, lp in zip(block, lps):
            x_used = xv
            term = math.exp(lp)
            mass += term
            if term < tail_tol * mass:
                consecutive += 1
                if consecutive >= 10:
                    return MassResult(mass, x_used, True)
            else:
                consecutive = 0
        block_start = x_used + 1
    return MassResult(mass, x_used, finite_support)


def factorial_moment(p: GnbBeParams, k: int) -> float:
    """Factorial moment E[X(X-1)...(X-k+1)] of the mixed distribution,

        Gamma(m+k)/Gamma(m) * sum_{j=0}^{k} C(k,j)(-beta)^j
                              * B(b-(k-j)/c, a)/B(a,b),

    which requires b > k/c.  Exact for beta = 1; for beta > 1 the underlying
    conditional-moment identity does not hold and the value is reported as
    defined rather than as a true moment.
    """
    if k != int(k) or k < 0:
        raise DomainError(f"moment order must be a nonnegative integer, got {k!r}")
    k = int(k)
    if k == 0:
        return 1.0
    m, beta, a, b, c = p.m, p.beta, p.a, p.b, p.c
    if not b > k / c:
        raise MomentExistenceError(
            f"factorial moment of order {k} requires b > k/c = {k / c!r}, got b={b!r}"
        )
    lb0 = log_beta(a, b)
    terms = []
    for j in range(k + 1):
        if beta == 0.0 and j > 0:
            continue
        mag = log_binomial(k, j) + log_beta(b - (k - j) / c, a) - lb0
        if j > 0:
            mag += j * math.log(beta)
        terms.append(SignedLogValue(-1 if j & 1 else 1, mag))
    s, _ = signed_log_sum(terms)
    log_pref = log_gamma(m + k) - log_gamma(m)
    return s.sign * math.exp(log_pref + s.log_mag)


def mean(p: GnbBeParams) -> float:
    """E[X] = m [B(b-1/c, a) - beta B(a,b)] / B(a,b); requires b > 1/c."""
    if not p.b > 1.0 / p.c:
        raise MomentExistenceError(f"mean requires b > 1/c = {1.0 / p.c!r}, got b={p.b!r}")
    r1 = math.exp(log_beta(p.b - 1.0 / p.c, p.a) - log_beta(p.a, p.b))
    return p.m * (r1 - p.beta)


def paper_variance(p: GnbBeParams) -> float:
    """The family's printed variance formula, evaluated verbatim:

        [m(m+1) B2 B0 + m B1 B0 - m^2 B1^2 - 2 beta m B1 B0] / B0^2

    with B0 = B(a,b), B1 = B(b-1/c, a), B2 = B(b-2/c, a).  Agrees with
    moment_variance exactly at beta = 1 (and beta = 0) and differs by
    m*beta*(beta-1) otherwise; both routes are exposed on purpose.
    """
    m = p.m
    if not p.b > 2.0 / p.c:
        raise MomentExistenceError(f"variance requires b > 2/c = {2.0 / p.c!r}, got b={p.b!r}")
    lb0 = log_beta(p.a, p.b)
    r1 = math.exp(log_beta(p.b - 1.0 / p.c, p.a) - lb0)
    r2 = math.exp(log_beta(p.b - 2.0 / p.c, p.a) - lb0)
    return m * (m + 1.0) * r2 + m * r1 - m * m * r1 * r1 - 2.0 * p.beta * m * r1


def moment_variance(p: GnbBeParams) -> float:
    """Variance via factorial moments: mu_[2] + mu_[1] - mu_[1]^2."""
    m1 = factorial_moment(p, 1)
    m2 = factorial_moment(p, 2)
    return m2 + m1 - m1 * m1


def index_of_dispersion(p: GnbBeParams) -> float:
    """moment_variance / mean; > 1 signals overdispersion."""
    mu = mean(p)
    if mu == 0.0:
        raise DomainError("index of dispersion undefined: mean is zero")
    return moment_variance(p) / mu


# ---------------------------------------------------------------------------
# special-case closed forms
# ---------------------------------------------------------------------------

def nbbe_log_pmf(m: float, a: float, b: float, c: float, x) -> float:
    """log pmf of the negative binomial-beta exponential distribution
    (the beta = 1 slice of the five-parameter family)."""
    x = _check_count(x)
    p = GnbBeParams(m, 1.0, a, b, c)
    lp, _, _ = _log_pmf_routed(p, x, QuadratureConfig(panel_count=_FALLBACK_PANELS))
    return lp


def binbe_log_pmf(m: int, a: float, b: float, c: float, x) -> float:
    """log pmf of the binomial-beta exponential mixture (beta = 0, integer m);
    -inf for x > m."""
    x = _check_count(x)
    p = GnbBeParams(float(m), 0.0, a, b, c)
    lp, _, _ = _log_pmf_routed(p, x, QuadratureConfig(panel_count=_FALLBACK_PANELS))
    return lp


def gen_waring_log_pmf(m: float, a: float, b: float, x) -> float:
    """log pmf of the generalized Waring distribution,

        Gamma(a+b) Gamma(m+b) a_(x) m_(x) /
        [Gamma(b) Gamma(m+a+b) (m+a+b)_(x) x!]

    with rising factorials z_(x) = Gamma(z+x)/Gamma(z).  Pure gamma products:
    nothing alternates, so this is oracle-grade at any x.
    """
    x = _check_count(x)
    _require(m > 0.0 and a > 0.0 and b > 0.0, "gen_waring_log_pmf requires m, a, b > 0")
    s = m + a + b
    return (
        log_gamma(a + b)
        + log_gamma(m + b)
        - log_gamma(b)
        - log_gamma(s)
        + (log_gamma(a + x) - log_gamma(a))
        + (log_gamma(m + x) - log_gamma(m))
        - (log_gamma(s + x) - log_gamma(s))
        - log_gamma(x + 1.0)
    )


def waring_log_pmf(m: float, k: float, x) -> float:
    """log pmf of the Waring distribution, (k-m) Gamma(m+x) Gamma(k) /
    [Gamma(m) Gamma(k+x+1)]; requires k > m > 0."""
    x = _check_count(x)
    _require(m > 0.0 and k > m, "waring_log_pmf requires k > m > 0")
    return (
        math.log(k - m)
        + log_gamma(m + x)
        - log_gamma(m)
        + log_gamma(k)
        - log_gamma(k + x + 1.0)
    )


def yule_log_pmf(b: float, x) -> float:
    """log pmf of the Yule distribution, b x! / (b+1)_(x+1); requires b > 0."""
    x = _check_count(x)
    _require(b > 0.0, "yule_log_pmf requires b > 0")
    return (
        math.log(b)
        + log_gamma(x + 1.0)
        + log_gamma(b + 1.0)
        - log_gamma(b + x + 2.0)
    )
