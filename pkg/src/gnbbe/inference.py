"""Maximum-likelihood fitting of Poisson, negative binomial, NB-BE and
GNB-BE models to grouped count data, with expected frequencies, information
criteria and a chi-square goodness-of-fit helper.

The five-parameter likelihood surface is multimodal and the printed score
equations for this family are unreliable, so fitting is derivative-free:
multistart Nelder-Mead over an unconstrained reparameterization, followed by
a central-difference gradient-ascent polish of the best point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import distributions as dist
from .sampling import RandomSource
from .specfun import DomainError, log_binomial, log_gamma

MODEL_KINDS = ("poisson", "nb", "nbbe", "gnbbe")

_PARAM_NAMES = {
    "poisson": ("lam",),
    "nb": ("r", "p"),
    "nbbe": ("m", "a", "b", "c"),
    "gnbbe": ("m", "a", "b", "c", "beta"),
}


@dataclass(frozen=True, slots=True)
class ModelSpec:
    """One of the four fitted model families."""

    kind: str

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise DomainError(f"unknown model kind {self.kind!r}; expected one of {MODEL_KINDS}")

    @property
    def param_names(self) -> tuple[str, ...]:
        return _PARAM_NAMES[self.kind]

    @property
    def param_count(self) -> int:
        return len(_PARAM_NAMES[self.kind])


@dataclass(frozen=True)
class FrequencyTable:
    """Grouped count data: ordered (count, frequency) cells.

    Counts must be strictly increasing with at least two cells of nonzero
    frequency; use from_pairs() to merge and sort raw rows first.
    """

    cells: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if len(self.cells) < 2:
            raise DomainError("frequency table needs at least two cells")
        prev = -1
        nonzero = 0
        for count, freq in self.cells:
            if count != int(count) or count < 0:
                raise DomainError(f"counts must be nonnegative integers, got {count!r}")
            if freq != int(freq) or freq < 0:
                raise DomainError(f"frequencies must be nonnegative integers, got {freq!r}")
            if count <= prev:
                raise DomainError("counts must be strictly increasing (merge duplicates first)")
            prev = count
            if freq > 0:
                nonzero += 1
        if nonzero < 2:
            raise DomainError("frequency table needs at least two cells with nonzero frequency")
        if self.total_n <= 0:
            raise DomainError("total frequency must be positive")

    @classmethod
    def from_pairs(cls, pairs: Sequence[tuple[int, int]]) -> "FrequencyTable":
        merged: dict[int, int] = {}
        for count, freq in pairs:
            merged[int(count)] = merged.get(int(count), 0) + int(freq)
        return cls(tuple(sorted(merged.items())))

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(c for c, _ in self.cells)

    @property
    def frequencies(self) -> tuple[int, ...]:
        return tuple(f for _, f in self.cells)

    @property
    def total_n(self) -> int:
        return sum(f for _, f in self.cells)

    @property
    def sample_mean(self) -> float:
        return sum(c * f for c, f in self.cells) / self.total_n

    @property
    def sample_variance(self) -> float:
        mu = self.sample_mean
        return sum(f * (c - mu) ** 2 for c, f in self.cells) / self.total_n


@dataclass(frozen=True, slots=True)
class FitOptions:
    n_starts: int = 20
    max_iters: int = 5000
    f_tol: float = 1e-9
    seed: int = 0

    def __post_init__(self):
        if self.n_starts < 1:
            raise DomainError("n_starts must be >= 1")


@dataclass(frozen=True)
class FitResult:
    model: ModelSpec
    params: tuple[float, ...]
    loglik: float
    aic: float
    bic: float
    expected: tuple[float, ...]
    total_mass: float
    converged: bool
    n_evals: int
    starts_used: int
    seed: int

    def params_dict(self) -> dict[str, float]:
        return dict(zip(self.model.param_names, self.params))


# ---------------------------------------------------------------------------
# per-model pmfs
# ---------------------------------------------------------------------------

def poisson_log_pmf(lam: float, x) -> float:
    if not lam > 0.0:
        raise DomainError(f"poisson rate must be positive, got {lam!r}")
    if x != int(x) or x < 0:
        raise DomainError(f"count must be a nonnegative integer, got {x!r}")
    x = int(x)
    return -lam + x * math.log(lam) - log_gamma(x + 1.0)


def nb_log_pmf(r: float, p: float, x) -> float:
    """Negative binomial with success probability p: C(r+x-1, x) p^r (1-p)^x,
    mean r(1-p)/p."""
    if not r > 0.0:
        raise DomainError(f"nb size must be positive, got {r!r}")
    if not 0.0 < p < 1.0:
        raise DomainError(f"nb probability must lie in (0,1), got {p!r}")
    if x != int(x) or x < 0:
        raise DomainError(f"count must be a nonnegative integer, got {x!r}")
    x = int(x)
    return log_binomial(r + x - 1.0, x) + r * math.log(p) + x * math.log1p(-p)


def model_log_pmf(model: ModelSpec, params: Sequence[float], x) -> float:
    if model.kind == "poisson":
        return poisson_log_pmf(params[0], x)
    if model.kind == "nb":
        return nb_log_pmf(params[0], params[1], x)
    if model.kind == "nbbe":
        m, a, b, c = params
        return dist.nbbe_log_pmf(m, a, b, c, x)
    m, a, b, c, beta = params
    return dist.gnbbe_log_pmf(dist.GnbBeParams(m, beta, a, b, c), x)[0]


def log_likelihood(model: ModelSpec, params: Sequence[float], data: FrequencyTable) -> float:
    """sum over cells of frequency * log pmf(count); -inf when any observed
    cell has zero probability."""
    cells = [(c, f) for c, f in data.cells if f > 0]
    if model.kind in ("nbbe", "gnbbe"):
        if model.kind == "nbbe":
            m, a, b, c = params
            gp = dist.GnbBeParams(m, 1.0, a, b, c)
        else:
            m, a, b, c, beta = params
            gp = dist.GnbBeParams(m, beta, a, b, c)
        lps = [lp for lp, _ in dist._log_pmf_many(gp, [c for c, _ in cells])]
    else:
        lps = [model_log_pmf(model, params, c) for c, _ in cells]
    total = 0.0
    for (_, freq), lp in zip(cells, lps):
        if lp == -math.inf:
            return -math.inf
        total += freq * lp
    return total


# ---------------------------------------------------------------------------
# unconstrained reparameterization
# ---------------------------------------------------------------------------

def transform_params(model: ModelSpec, eta: Sequence[float]) -> tuple[float, ...]:
    """Unconstrained coordinates -> natural parameters.

    log transform for rates/shapes, logit for the nb probability, and
    beta = 1 + exp(eta) for the Lagrangian parameter (the beta = 1 boundary
    itself is handled by the nested nbbe fit, not by this map).
    """
    if model.kind == "poisson":
        return (math.exp(eta[0]),)
    if model.kind == "nb":
        return (math.exp(eta[0]), 1.0 / (1.0 + math.exp(-eta[1])))
    if model.kind == "nbbe":
        return tuple(math.exp(e) for e in eta)
    return tuple(math.exp(e) for e in eta[:4]) + (1.0 + math.exp(eta[4]),)


def inverse_transform_params(model: ModelSpec, params: Sequence[float]) -> tuple[float, ...]:
    if model.kind == "poisson":
        return (math.log(params[0]),)
    if model.kind == "nb":
        p = params[1]
        return (math.log(params[0]), math.log(p / (1.0 - p)))
    if model.kind == "nbbe":
        return tuple(math.log(v) for v in params)
    return tuple(math.log(v) for v in params[:4]) + (math.log(params[4] - 1.0),)


def _start_point(model: ModelSpec, data: FrequencyTable) -> tuple[float, ...]:
    """Moment-matched heuristic start in natural coordinates."""
    mu = data.sample_mean
    var = data.sample_variance
    if model.kind == "poisson":
        return (mu,)
    if model.kind == "nb":
        p0 = min(0.95, max(0.05, mu / var if var > mu else 0.5))
        r0 = max(1e-3, mu * p0 / (1.0 - p0))
        return (r0, p0)
    # a = b = 2, c = 1 gives mean 2m at beta = 1; match m to the sample mean
    m0 = max(1e-3, mu / 2.0)
    if model.kind == "nbbe":
        return (m0, 2.0, 2.0, 1.0)
    return (m0, 2.0, 2.0, 1.0, 1.05)


# ---------------------------------------------------------------------------
# fitting
# ---------------------------------------------------------------------------

def _numeric_gradient(fn, eta: np.ndarray) -> np.ndarray:
    g = np.zeros_like(eta)
    for i in range(eta.size):
        h = 1e-5 * (1.0 + abs(eta[i]))
        up = eta.copy()
        dn = eta.copy()
        up[i] += h
        dn[i] -= h
        g[i] = (fn(up) - fn(dn)) / (2.0 * h)
    return g


def _polish(fn, eta: np.ndarray, f: float, max_rounds: int = 60) -> tuple[np.ndarray, float]:
    """Central-difference gradient ascent from an already-converged point."""
    for _ in range(max_rounds):
        g = _numeric_gradient(fn, eta)
        if not np.all(np.isfinite(g)) or float(np.max(np.abs(g))) < 1e-10:
            break
        t = 1.0 / (1.0 + float(np.max(np.abs(g))))
        improved = False
        while t > 1e-13:
            cand = eta + t * g
            fc = fn(cand)
            if fc > f:
                eta, f = cand, fc
                improved = True
                break
            t /= 4.0
        if not improved:
            break
    return eta, f


def _search(model: ModelSpec, data: FrequencyTable, opts: FitOptions):
    """Multistart Nelder-Mead plus polish; returns (eta, loglik, per-start
    loglik list, n_evals)."""
    n_evals = 0

    def objective(eta) -> float:
        nonlocal n_evals
        n_evals += 1
        # keep the search inside a numerically safe box; the likelihood of
        # this family can ridge toward infinite shape parameters where
        # double-precision evaluation degrades
        if max(abs(float(e)) for e in eta) > 16.0:
            return -math.inf
        try:
            params = transform_params(model, eta)
            return log_likelihood(model, params, data)
        except (DomainError, OverflowError):
            return -math.inf

    def neg(eta) -> float:
        v = objective(eta)
        return math.inf if v == -math.inf or math.isnan(v) else -v

    eta0 = np.asarray(inverse_transform_params(model, _start_point(model, data)))
    dim = eta0.size
    starts = [eta0]
    for k in range(1, opts.n_starts):
        rng = RandomSource(opts.seed, stream=k)
        jitter = np.array([4.0 * rng.next_uniform() - 2.0 for _ in range(dim)])
        starts.append(eta0 + jitter)

    results = []
    for x0 in starts:
        f0 = neg(x0)
        # the simplex only has to locate the basin; final precision comes
        # from the gradient polish, so its f-tolerance is 100x looser
        fatol = 100.0 * opts.f_tol * max(1.0, abs(f0) if math.isfinite(f0) else 1.0)
        res = minimize(
            neg, x0, method="Nelder-Mead",
            options={
                "maxiter": opts.max_iters,
                "maxfev": opts.max_iters,
                "fatol": fatol,
                "xatol": 1e-6,
                "adaptive": True,
            },
        )
        results.append((-(res.fun), np.asarray(res.x)))

    # polish the two best starts so the agreement check compares converged
    # values, then keep the better one
    results.sort(key=lambda t: t[0], reverse=True)
    polished = []
    for ll, eta in results[:2]:
        if math.isfinite(ll):
            eta, ll = _polish(objective, eta, ll)
        polished.append((ll, eta))
    lls = sorted([ll for ll, _ in polished] + [ll for ll, _ in results[2:]], reverse=True)
    best_ll, best_eta = max(polished, key=lambda t: t[0])
    return best_eta, best_ll, lls, n_evals


def _starts_agree(lls: Sequence[float], f_tol: float) -> bool:
    if len(lls) < 2:
        return math.isfinite(lls[0])
    a, b = lls[0], lls[1]
    if not (math.isfinite(a) and math.isfinite(b)):
        return False
    return abs(a - b) <= 10.0 * f_tol * max(1.0, abs(a))


def _model_total_mass(model: ModelSpec, params: Sequence[float]) -> float:
    if model.kind in ("poisson", "nb"):
        mass = 0.0
        consecutive = 0
        for x in range(100_000):
            term = math.exp(model_log_pmf(model, params, x))
            mass += term
            if term < 1e-15 * max(mass, 1e-300):
                consecutive += 1
                if consecutive >= 10:
                    break
            else:
                consecutive = 0
        return mass
    if model.kind == "nbbe":
        m, a, b, c = params
        return dist.total_mass(dist.GnbBeParams(m, 1.0, a, b, c)).mass
    m, a, b, c, beta = params
    return dist.total_mass(dist.GnbBeParams(m, beta, a, b, c)).mass


def expected_frequencies(model: ModelSpec, params: Sequence[float],
                         data: FrequencyTable, total_mass: float | None = None) -> tuple[float, ...]:
    """total_n * pmf at each observed count, plus one aggregated tail cell
    total_n * (total_mass - sum of listed pmfs), floored at zero."""
    n = data.total_n
    pmfs = [math.exp(model_log_pmf(model, params, c)) for c in data.counts]
    mass = _model_total_mass(model, params) if total_mass is None else total_mass
    tail = max(0.0, n * (mass - math.fsum(pmfs)))
    return tuple(n * q for q in pmfs) + (tail,)


def _assemble(model: ModelSpec, params: tuple[float, ...], loglik: float,
              data: FrequencyTable, converged: bool, n_evals: int,
              starts_used: int, seed: int) -> FitResult:
    k = model.param_count
    mass = _model_total_mass(model, params)
    expected = expected_frequencies(model, params, data, total_mass=mass)
    return FitResult(
        model=model,
        params=params,
        loglik=loglik,
        aic=2.0 * k - 2.0 * loglik,
        bic=k * math.log(data.total_n) - 2.0 * loglik,
        expected=expected,
        total_mass=mass,
        converged=converged,
        n_evals=n_evals,
        starts_used=starts_used,
        seed=seed,
    )


def fit(model: ModelSpec, data: FrequencyTable, opts: FitOptions = FitOptions()) -> FitResult:
    """Maximize the grouped log-likelihood.

    Poisson is closed form (lam = sample mean).  For gnbbe the search uses
    beta = 1 + exp(eta), which cannot reach the beta = 1 boundary, so the
    nested nbbe model is fitted as well and whichever attains the higher
    log-likelihood wins; in the boundary case beta is reported as exactly 1.
    """
    if model.kind == "poisson":
        lam = data.sample_mean
        ll = log_likelihood(model, (lam,), data)
        return _assemble(model, (lam,), ll, data, True, 1, 0, opts.seed)

    eta, ll, lls, n_evals = _search(model, data, opts)
    converged = _starts_agree(lls, opts.f_tol) and math.isfinite(ll)
    params = transform_params(model, eta)
    starts_used = opts.n_starts

    if model.kind == "gnbbe":
        nested = fit(ModelSpec("nbbe"), data, opts)
        n_evals += nested.n_evals
        starts_used += nested.starts_used
        if nested.loglik >= ll:
            params = nested.params + (1.0,)
            ll = nested.loglik
            converged = nested.converged
    return _assemble(model, tuple(params), ll, data, converged, n_evals, starts_used, opts.seed)


# ---------------------------------------------------------------------------
# goodness of fit and model comparison
# ---------------------------------------------------------------------------

def chi_square_gof(observed: FrequencyTable, expected: Sequence[float],
                   min_expected: float = 5.0, n_params: int = 0) -> tuple[float, int, int]:
    """Pearson chi-square with trailing cells pooled until the last pooled
    cell's expected count reaches min_expected.

    expected may carry one extra tail cell beyond the observed counts (its
    observed frequency is zero).  Returns (statistic, df, pooled_cells) with
    df = pooled_cells - 1 - n_params.
    """
    obs = list(observed.frequencies)
    exp_ = list(expected)
    if len(exp_) == len(obs) + 1:
        obs.append(0)
    if len(exp_) != len(obs):
        raise DomainError("expected vector is not aligned with the observed table")
    if not math.fsum(exp_) > 0.0:
        raise DomainError("expected frequencies sum to zero")
    while len(exp_) > 2 and exp_[-1] < min_expected:
        exp_[-2] += exp_[-1]
        obs[-2] += obs[-1]
        del exp_[-1], obs[-1]
    if len(exp_) == 2 and exp_[-1] < min_expected:
        # honoring the min-expected rule would leave fewer than two cells
        raise DomainError("pooling collapsed the table below two usable cells")
    stat = math.fsum((o - e) ** 2 / e for o, e in zip(obs, exp_))
    df = len(exp_) - 1 - n_params
    return stat, df, len(exp_)


@dataclass(frozen=True)
class ComparisonReport:
    results: tuple[FitResult, ...]          # sorted by AIC, ascending
    failures: tuple[tuple[str, str], ...]   # (model kind, error message)
    nesting_ok: bool | None                 # gnbbe >= nbbe - f_tol, when both fitted


def compare_models(data: FrequencyTable, models: Sequence[ModelSpec],
                   opts: FitOptions = FitOptions()) -> ComparisonReport:
    """Fit every model and rank by AIC; individual failures are recorded,
    not fatal."""
    if not models:
        raise DomainError("compare_models needs at least one model")
    fitted: list[FitResult] = []
    failures: list[tuple[str, str]] = []
    for model in models:
        try:
            fitted.append(fit(model, data, opts))
        except Exception as exc:  # noqa: BLE001 - per-model isolation is the contract
            failures.append((model.kind, str(exc)))
    by_kind = {r.model.kind: r for r in fitted}
    nesting_ok = None
    if "gnbbe" in by_kind and "nbbe" in by_kind:
        nesting_ok = by_kind["gnbbe"].loglik >= by_kind["nbbe"].loglik - opts.f_tol
    fitted.sort(key=lambda r: r.aic)
    return ComparisonReport(tuple(fitted), tuple(failures), nesting_ok)
