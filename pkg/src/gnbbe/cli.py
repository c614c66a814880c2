"""Command-line front end: dataset ingestion, model fitting, pmf tabulation,
sampling and model comparison, with the Belgium 1958 automobile insurance
claim-count dataset built in.

Exit codes: 0 success, 2 usage, 3 I/O or data errors, 4 fit non-convergence
(the result is still printed), 5 domain errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Sequence

from . import distributions as dist
from .inference import (
    FitOptions,
    FitResult,
    FrequencyTable,
    ModelSpec,
    compare_models,
    fit,
    model_log_pmf,
)
from .sampling import RandomSource, sample_gnbbe
from .specfun import DomainError

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_NOT_CONVERGED = 4
EXIT_DOMAIN = 5

ENV_STARTS = "GNBBE_STARTS"

# Automobile insurance claim counts, Belgium 1958 (Denuit's portfolio).
_DENUIT_1958 = (
    (0, 7840), (1, 1317), (2, 239), (3, 42), (4, 14), (5, 4), (6, 4), (7, 1),
)
_BUILTIN_DATASETS = {"denuit1958": _DENUIT_1958}

_FIT_MODELS = ("poisson", "nb", "nbbe", "gnbbe")
_PMF_MODELS = {
    "poisson": ("lam",),
    "nb": ("r", "p"),
    "nbbe": ("m", "a", "b", "c"),
    "gnbbe": ("m", "a", "b", "c", "beta"),
    "binbe": ("m", "a", "b", "c"),
    "genwaring": ("m", "a", "b"),
    "waring": ("m", "k"),
    "yule": ("b",),
}
_SAMPLE_MODELS = ("gnbbe", "nbbe")


class CliDataError(RuntimeError):
    """Unreadable, malformed, or unknown input data."""


@dataclass
class CliConfig:
    command: str
    model: str | None = None
    data_path: str | None = None
    params: dict[str, float] | None = None
    from_fit: str | None = None
    seed: int = 0
    stream: int = 0
    n_starts: int | None = None
    max_count: int = 20
    n_samples: int = 10
    tail_tol: float = 1e-12
    output_format: str = "table"
    extra: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# data ingestion
# ---------------------------------------------------------------------------

def builtin_dataset(name: str) -> FrequencyTable:
    if name not in _BUILTIN_DATASETS:
        raise CliDataError(
            f"unknown built-in dataset {name!r}; available: {', '.join(sorted(_BUILTIN_DATASETS))}"
        )
    return FrequencyTable(_BUILTIN_DATASETS[name])


def load_frequency_csv(path: str) -> FrequencyTable:
    """Two-column count,frequency CSV; optional header (detected by a
    non-numeric first field); duplicate counts merged; rows sorted."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            raw = fh.read()
    except OSError as exc:
        raise CliDataError(f"cannot read {path!r}: {exc}") from exc
    pairs: list[tuple[int, int]] = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        fields = [f.strip() for f in line.split(",")]
        if len(fields) != 2:
            raise CliDataError(f"{path}:{lineno}: expected two comma-separated fields")
        if lineno == 1 and not _is_number(fields[0]):
            continue  # header row
        try:
            count = int(fields[0])
            freq = int(fields[1])
        except ValueError as exc:
            raise CliDataError(f"{path}:{lineno}: malformed row {line!r}") from exc
        if count < 0 or freq < 0:
            raise CliDataError(f"{path}:{lineno}: negative values are not allowed")
        pairs.append((count, freq))
    if not pairs:
        raise CliDataError(f"{path}: no data rows")
    try:
        return FrequencyTable.from_pairs(pairs)
    except DomainError as exc:
        raise CliDataError(f"{path}: {exc}") from exc


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def _load_data(spec: str) -> FrequencyTable:
    if spec in _BUILTIN_DATASETS:
        return builtin_dataset(spec)
    if os.path.exists(spec):
        return load_frequency_csv(spec)
    raise CliDataError(f"{spec!r} is neither a built-in dataset nor an existing file")


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------

def _parse_param_list(text: str, names: Sequence[str], parser: argparse.ArgumentParser) -> dict[str, float]:
    out: dict[str, float] = {}
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        if "=" not in item:
            parser.error(f"--params entries must be name=value, got {item!r}")
        key, _, val = item.partition("=")
        key = key.strip()
        if key not in names:
            parser.error(f"unknown parameter {key!r}; expected {', '.join(names)}")
        try:
            out[key] = float(val)
        except ValueError:
            parser.error(f"malformed number for parameter {key!r}: {val!r}")
    missing = [n for n in names if n not in out]
    if missing:
        parser.error(f"--params is missing {', '.join(missing)}")
    return out


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gnbbe",
        description="GNB-BE claim-count modelling: fit, tabulate, sample, compare.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_output_flags(p):
        p.add_argument("--json", action="store_true", help="emit JSON (full precision)")
        p.add_argument("--format", choices=("table", "json", "csv"), default="table")

    p_fit = sub.add_parser("fit", help="maximum-likelihood fit of one model")
    p_fit.add_argument("--model", required=True, choices=_FIT_MODELS)
    p_fit.add_argument("--data", required=True, help="built-in dataset name or CSV path")
    p_fit.add_argument("--seed", type=int, default=0)
    p_fit.add_argument("--starts", type=int, default=None)
    p_fit.add_argument("--tail-tol", type=float, default=1e-12)
    add_output_flags(p_fit)

    p_pmf = sub.add_parser("pmf", help="tabulate pmf and cumulative mass")
    p_pmf.add_argument("--model", required=True, choices=sorted(_PMF_MODELS))
    p_pmf.add_argument("--params", default=None, help="comma-separated name=value pairs")
    p_pmf.add_argument("--from-fit", default=None, help="JSON fit result to take parameters from")
    p_pmf.add_argument("--max-count", type=int, default=20)
    add_output_flags(p_pmf)

    p_sample = sub.add_parser("sample", help="draw random counts")
    p_sample.add_argument("--model", required=True, choices=_SAMPLE_MODELS)
    p_sample.add_argument("--params", default=None)
    p_sample.add_argument("--from-fit", default=None)
    p_sample.add_argument("--n", type=int, default=10)
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--stream", type=int, default=0)
    add_output_flags(p_sample)

    p_cmp = sub.add_parser("compare", help="fit and compare all four models")
    p_cmp.add_argument("--data", required=True)
    p_cmp.add_argument("--seed", type=int, default=0)
    p_cmp.add_argument("--starts", type=int, default=None)
    p_cmp.add_argument("--tail-tol", type=float, default=1e-12)
    add_output_flags(p_cmp)

    p_ds = sub.add_parser("dataset", help="print a dataset as a frequency table")
    p_ds.add_argument("--data", required=True)
    add_output_flags(p_ds)

    return parser


def parse_args(argv: Sequence[str]) -> CliConfig:
    parser = _build_parser()
    ns = parser.parse_args(list(argv))
    fmt = "json" if ns.json else ns.format
    cfg = CliConfig(command=ns.command, output_format=fmt)
    cfg.model = getattr(ns, "model", None)
    cfg.data_path = getattr(ns, "data", None)
    cfg.seed = getattr(ns, "seed", 0)
    cfg.stream = getattr(ns, "stream", 0)
    cfg.max_count = getattr(ns, "max_count", 20)
    cfg.n_samples = getattr(ns, "n", 10)
    cfg.tail_tol = getattr(ns, "tail_tol", 1e-12)
    cfg.from_fit = getattr(ns, "from_fit", None)

    starts = getattr(ns, "starts", None)
    if starts is None and ns.command in ("fit", "compare"):
        env = os.environ.get(ENV_STARTS)
        if env is not None:
            try:
                starts = int(env)
            except ValueError:
                parser.error(f"{ENV_STARTS} must be an integer, got {env!r}")
    cfg.n_starts = starts

    raw_params = getattr(ns, "params", None)
    if ns.command in ("pmf", "sample"):
        if raw_params is None and cfg.from_fit is None:
            parser.error("either --params or --from-fit is required")
        if raw_params is not None:
            cfg.params = _parse_param_list(raw_params, _PMF_MODELS[cfg.model], parser)
    if cfg.max_count < 0:
        parser.error("--max-count must be nonnegative")
    if cfg.n_samples < 0:
        parser.error("--n must be nonnegative")
    if cfg.n_starts is not None and cfg.n_starts < 1:
        parser.error("--starts must be at least 1")
    return cfg


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def _fmt(v: float) -> str:
    return f"{v:.6g}"


def fit_result_to_dict(result: FitResult) -> dict:
    """The stable JSON schema for a fit result."""
    return {
        "model": result.model.kind,
        "params": result.params_dict(),
        "loglik": result.loglik,
        "aic": result.aic,
        "bic": result.bic,
        "total_mass": result.total_mass,
        "expected": list(result.expected),
        "converged": result.converged,
        "seed": result.seed,
        "starts_used": result.starts_used,
        "n_evals": result.n_evals,
    }


def render_json(obj) -> str:
    return json.dumps(obj, indent=2)


def _print_fit_table(result: FitResult, data: FrequencyTable) -> None:
    print(f"model        {result.model.kind}")
    print(f"loglik       {_fmt(result.loglik)}")
    print(f"aic          {_fmt(result.aic)}")
    print(f"bic          {_fmt(result.bic)}")
    print(f"total_mass   {_fmt(result.total_mass)}")
    print(f"converged    {'yes' if result.converged else 'no'}")
    print(f"starts_used  {result.starts_used}")
    print(f"n_evals      {result.n_evals}")
    print("parameters:")
    for name, value in result.params_dict().items():
        print(f"  {name:6s} {_fmt(value)}")
    print(f"{'count':>6s} {'observed':>9s} {'expected':>12s}")
    for (count, freq), e in zip(data.cells, result.expected):
        print(f"{count:6d} {freq:9d} {_fmt(e):>12s}")
    print(f"{'tail':>6s} {'':>9s} {_fmt(result.expected[-1]):>12s}")


def _print_fit_csv(result: FitResult, data: FrequencyTable) -> None:
    print("key,value")
    print(f"model,{result.model.kind}")
    for name, value in result.params_dict().items():
        print(f"{name},{value!r}")
    print(f"loglik,{result.loglik!r}")
    print(f"aic,{result.aic!r}")
    print(f"bic,{result.bic!r}")
    print(f"total_mass,{result.total_mass!r}")
    print(f"converged,{int(result.converged)}")
    print("count,observed,expected")
    for (count, freq), e in zip(data.cells, result.expected):
        print(f"{count},{freq},{e!r}")
    print(f"tail,0,{result.expected[-1]!r}")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _fit_options(cfg: CliConfig) -> FitOptions:
    return FitOptions(n_starts=cfg.n_starts if cfg.n_starts is not None else 20,
                      seed=cfg.seed)


def _params_from_config(cfg: CliConfig) -> tuple[str, dict[str, float]]:
    """(model kind, params dict), honouring --from-fit."""
    if cfg.from_fit is not None:
        try:
            with open(cfg.from_fit, "r", encoding="utf-8") as fh:
                payload = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise CliDataError(f"cannot read fit result {cfg.from_fit!r}: {exc}") from exc
        model = payload.get("model")
        params = payload.get("params")
        if model not in _PMF_MODELS or not isinstance(params, dict):
            raise CliDataError(f"{cfg.from_fit!r} does not look like a fit result")
        if cfg.model is not None and cfg.model != model:
            raise CliDataError(f"--model {cfg.model} conflicts with fit result model {model}")
        return model, {k: float(v) for k, v in params.items()}
    return cfg.model, dict(cfg.params)


def _log_pmf_callable(model: str, params: dict[str, float]):
    if model in _FIT_MODELS:
        spec = ModelSpec(model)
        vec = tuple(params[n] for n in spec.param_names)
        return lambda x: model_log_pmf(spec, vec, x)
    if model == "binbe":
        return lambda x: dist.binbe_log_pmf(int(params["m"]), params["a"], params["b"], params["c"], x)
    if model == "genwaring":
        return lambda x: dist.gen_waring_log_pmf(params["m"], params["a"], params["b"], x)
    if model == "waring":
        return lambda x: dist.waring_log_pmf(params["m"], params["k"], x)
    return lambda x: dist.yule_log_pmf(params["b"], x)


def _cmd_fit(cfg: CliConfig) -> int:
    data = _load_data(cfg.data_path)
    result = fit(ModelSpec(cfg.model), data, _fit_options(cfg))
    if cfg.output_format == "json":
        print(render_json(fit_result_to_dict(result)))
    elif cfg.output_format == "csv":
        _print_fit_csv(result, data)
    else:
        _print_fit_table(result, data)
    return EXIT_OK if result.converged else EXIT_NOT_CONVERGED


def _cmd_pmf(cfg: CliConfig) -> int:
    model, params = _params_from_config(cfg)
    log_pmf = _log_pmf_callable(model, params)
    rows = []
    cum = 0.0
    for x in range(cfg.max_count + 1):
        p = math.exp(log_pmf(x))
        cum += p
        rows.append((x, p, cum))
    if cfg.output_format == "json":
        print(render_json({
            "model": model,
            "params": params,
            "rows": [{"x": x, "pmf": p, "cumulative": c} for x, p, c in rows],
        }))
    elif cfg.output_format == "csv":
        print("x,pmf,cumulative")
        for x, p, c in rows:
            print(f"{x},{p!r},{c!r}")
    else:
        print(f"{'x':>4s} {'pmf':>13s} {'cumulative':>13s}")
        for x, p, c in rows:
            print(f"{x:4d} {_fmt(p):>13s} {_fmt(c):>13s}")
    return EXIT_OK


def _cmd_sample(cfg: CliConfig) -> int:
    model, params = _params_from_config(cfg)
    if model == "nbbe":
        gp = dist.GnbBeParams(params["m"], 1.0, params["a"], params["b"], params["c"])
    else:
        gp = dist.GnbBeParams(params["m"], params["beta"], params["a"], params["b"], params["c"])
    rng = RandomSource(cfg.seed, stream=cfg.stream)
    draws = [sample_gnbbe(gp, rng) for _ in range(cfg.n_samples)]
    if cfg.output_format == "json":
        print(render_json({"model": model, "seed": cfg.seed, "stream": cfg.stream,
                           "samples": draws}))
    else:
        for d in draws:
            print(d)
    return EXIT_OK


def _cmd_compare(cfg: CliConfig) -> int:
    data = _load_data(cfg.data_path)
    report = compare_models(data, [ModelSpec(k) for k in _FIT_MODELS], _fit_options(cfg))
    results = {r.model.kind: r for r in report.results}
    ordered = [results[k] for k in _FIT_MODELS if k in results]
    if cfg.output_format == "json":
        print(render_json({
            "results": [fit_result_to_dict(r) for r in report.results],
            "failures": [{"model": k, "error": e} for k, e in report.failures],
            "nesting_ok": report.nesting_ok,
        }))
        return EXIT_OK if all(r.converged for r in report.results) and not report.failures \
            else EXIT_NOT_CONVERGED

    sep = "," if cfg.output_format == "csv" else None

    def emit(fields, widths):
        if sep is not None:
            print(sep.join(str(f) for f in fields))
        else:
            print(" ".join(f"{str(f):>{w}s}" for f, w in zip(fields, widths)))

    kinds = [r.model.kind for r in ordered]
    widths = [6, 9] + [12] * len(ordered)
    emit(["count", "observed"] + kinds, widths)
    for i, (count, freq) in enumerate(data.cells):
        emit([count, freq] + [_fmt(r.expected[i]) for r in ordered], widths)
    emit(["tail", 0] + [_fmt(r.expected[-1]) for r in ordered], widths)
    emit(["total", data.total_n] + [_fmt(sum(r.expected)) for r in ordered], widths)
    emit(["loglik", ""] + [_fmt(r.loglik) for r in ordered], widths)
    emit(["aic", ""] + [_fmt(r.aic) for r in ordered], widths)
    emit(["bic", ""] + [_fmt(r.bic) for r in ordered], widths)
    emit(["converged", ""] + [("yes" if r.converged else "no") for r in ordered], widths)
    print("estimated parameters:")
    for r in ordered:
        pairs = ", ".join(f"{n}={_fmt(v)}" for n, v in r.params_dict().items())
        print(f"  {r.model.kind:8s} {pairs}")
    for kind, err in report.failures:
        print(f"  {kind:8s} FAILED: {err}")
    return EXIT_OK if all(r.converged for r in report.results) and not report.failures \
        else EXIT_NOT_CONVERGED


def _cmd_dataset(cfg: CliConfig) -> int:
    data = _load_data(cfg.data_path)
    if cfg.output_format == "json":
        print(render_json({
            "cells": [{"count": c, "frequency": f} for c, f in data.cells],
            "total_n": data.total_n,
        }))
    elif cfg.output_format == "csv":
        print("count,frequency")
        for count, freq in data.cells:
            print(f"{count},{freq}")
    else:
        print(f"{'count':>6s} {'frequency':>10s}")
        for count, freq in data.cells:
            print(f"{count:6d} {freq:10d}")
        print(f"{'total':>6s} {data.total_n:10d}")
    return EXIT_OK


_COMMANDS = {
    "fit": _cmd_fit,
    "pmf": _cmd_pmf,
    "sample": _cmd_sample,
    "compare": _cmd_compare,
    "dataset": _cmd_dataset,
}


def run(cfg: CliConfig) -> int:
    return _COMMANDS[cfg.command](cfg)


def main(argv: Sequence[str] | None = None) -> int:
    cfg = parse_args(sys.argv[1:] if argv is None else argv)
    try:
        return run(cfg)
    except CliDataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
