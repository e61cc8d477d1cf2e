"""Command-line runner: ``polydense certify`` and ``polydense approx``.

Both subcommands read one JSON config::

    {
      "weight": {"family": "gaussian", "mu": 0, "sigma": 1},
      "max_degree": 20,
      "test_functions": ["sin", "abs"],
      "quadrature": {"rel_tol": 1e-10},
      "output_dir": "out"
    }

``weight`` may also be ``{"family": "tabulated", "path": "w.csv"}`` (path
relative to the config file), ``{"family": "counting", "grid": [...]}`` for
equal weights on a grid, or any named family with a ``"grid"`` key to put
that density on counting measure.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import measure
from .conditions import EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_OK, certify
from .errors import (
    DegeneracyError,
    DivergentIntegral,
    InconclusiveIntegral,
    InconsistencyError,
    InfiniteMassError,
    TabulatedParseError,
)
from .orthopoly import MAX_DEGREE, build_basis
from .projection import TEST_FUNCTIONS, project
from .quadrature import QuadraturePlan

__all__ = ["ConfigError", "ExperimentConfig", "load_config", "parse_config", "run_certify", "run_approx", "main"]

EXIT_CONFIG = 2
EXIT_NUMERIC = 5

DEFAULT_TEST_FUNCTIONS = ("sin", "cos", "gauss_bump", "cauchy_bump", "abs")
_FAMILY_PARAMS = {
    "gaussian": ("mu", "sigma"),
    "double_exponential": ("scale",),
    "uniform": ("lo", "hi"),
    "lognormal": ("mu", "sigma"),
}
_TOP_KEYS = {"weight", "max_degree", "test_functions", "quadrature", "output_dir", "certify"}
_CERTIFY_KEYS = {"delta_probe", "s_max", "eps_s", "k_max"}
_WITNESS_NOTE = (
    "density is asserted for every f in L2(a); the projections below check a "
    "finite witness set of test functions only"
)


class ConfigError(ValueError):
    """Invalid experiment config; ``field`` names the offending entry."""

    def __init__(self, field_name, message):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass
class ExperimentConfig:
    weight: measure.WeightDensity
    max_degree: int = 20
    test_functions: tuple = DEFAULT_TEST_FUNCTIONS
    plan: QuadraturePlan = field(default_factory=QuadraturePlan)
    output_dir: Path = Path("polydense_out")
    certify_options: dict = field(default_factory=dict)
    raw: dict = field(default_factory=dict)


def _number(name, value):
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(name, f"expected a number, got {value!r}")
    return float(value)


def _parse_weight(entry, base_dir):
    if not isinstance(entry, dict):
        raise ConfigError("weight", "expected an object")
    family = entry.get("family")
    grid = entry.get("grid")
    if grid is not None:
        if not isinstance(grid, list) or not grid:
            raise ConfigError("weight.grid", "expected a nonempty list of numbers")
        grid = [_number(f"weight.grid[{i}]", v) for i, v in enumerate(grid)]
    try:
        if family == "counting":
            extra = set(entry) - {"family", "grid"}
            if extra:
                raise ConfigError(f"weight.{sorted(extra)[0]}", "unknown field")
            if grid is None:
                raise ConfigError("weight.grid", "required for the counting family")
            return measure.equal_weights(grid)
        if family == "tabulated":
            extra = set(entry) - {"family", "path", "points", "grid"}
            if extra:
                raise ConfigError(f"weight.{sorted(extra)[0]}", "unknown field")
            if "path" in entry:
                path = Path(entry["path"])
                if not path.is_absolute():
                    path = base_dir / path
                try:
                    d = measure.load_tabulated_csv(path)
                except OSError as exc:
                    raise ConfigError("weight.path", str(exc)) from None
                except TabulatedParseError as exc:
                    raise ConfigError("weight.path", str(exc)) from None
            elif "points" in entry:
                try:
                    d = measure.tabulated(entry["points"])
                except (TypeError, ValueError) as exc:
                    raise ConfigError("weight.points", str(exc)) from None
            else:
                raise ConfigError("weight.path", "tabulated weight needs 'path' or 'points'")
        elif family in _FAMILY_PARAMS:
            names = _FAMILY_PARAMS[family]
            extra = set(entry) - {"family", "grid", *names}
            if extra:
                raise ConfigError(f"weight.{sorted(extra)[0]}", "unknown field")
            kwargs = {k: _number(f"weight.{k}", entry[k]) for k in names if k in entry}
            try:
                d = getattr(measure, family)(**kwargs)
            except ValueError as exc:
                raise ConfigError("weight", str(exc)) from None
        else:
            allowed = ", ".join([*_FAMILY_PARAMS, "tabulated", "counting"])
            raise ConfigError("weight.family", f"unknown family {family!r} (expected one of {allowed})")
        return d.on_grid(grid) if grid is not None else d
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError("weight", str(exc)) from None


def _parse_plan(entry):
    if entry is None:
        return QuadraturePlan()
    if not isinstance(entry, dict):
        raise ConfigError("quadrature", "expected an object")
    names = {f.name: f.type for f in dataclasses.fields(QuadraturePlan)}
    kwargs = {}
    for key, value in entry.items():
        if key not in names:
            raise ConfigError(f"quadrature.{key}", "unknown field")
        if key == "panel_rule":
            kwargs[key] = value
        elif key in ("max_doublings", "initial_panels", "max_panels"):
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"quadrature.{key}", f"expected an integer, got {value!r}")
            kwargs[key] = value
        else:
            kwargs[key] = _number(f"quadrature.{key}", value)
    try:
        return QuadraturePlan(**kwargs)
    except ValueError as exc:
        raise ConfigError("quadrature", str(exc)) from None


def parse_config(raw, base_dir=Path("."), output_dir=None):
    """Validate a decoded JSON config into an ``ExperimentConfig``."""
    if not isinstance(raw, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown field")
    if "weight" not in raw:
        raise ConfigError("weight", "required")
    weight = _parse_weight(raw["weight"], Path(base_dir))

    max_degree = raw.get("max_degree", 20)
    if isinstance(max_degree, bool) or not isinstance(max_degree, int):
        raise ConfigError("max_degree", f"expected an integer, got {max_degree!r}")
    if not 1 <= max_degree <= MAX_DEGREE:
        raise ConfigError("max_degree", f"must lie in [1, {MAX_DEGREE}], got {max_degree}")

    names = raw.get("test_functions", list(DEFAULT_TEST_FUNCTIONS))
    if not isinstance(names, list) or not all(isinstance(n, str) for n in names):
        raise ConfigError("test_functions", "expected a list of names")
    for i, n in enumerate(names):
        if n not in TEST_FUNCTIONS:
            raise ConfigError(f"test_functions[{i}]", f"unknown test function {n!r}")
    if len(set(names)) != len(names):
        raise ConfigError("test_functions", "duplicate names")

    plan = _parse_plan(raw.get("quadrature"))

    opts = raw.get("certify", {})
    if not isinstance(opts, dict):
        raise ConfigError("certify", "expected an object")
    for key, value in opts.items():
        if key not in _CERTIFY_KEYS:
            raise ConfigError(f"certify.{key}", "unknown field")
        if key == "k_max":
            if isinstance(value, bool) or not isinstance(value, int) or value < 1:
                raise ConfigError("certify.k_max", "expected a positive integer")
        elif not _number(f"certify.{key}", value) > 0:
            raise ConfigError(f"certify.{key}", "must be positive")

    out = output_dir if output_dir is not None else raw.get("output_dir", "polydense_out")
    if not isinstance(out, (str, Path)):
        raise ConfigError("output_dir", "expected a path string")
    return ExperimentConfig(weight, max_degree, tuple(names), plan, Path(out), dict(opts), raw)


def load_config(path, output_dir=None):
    """Read and validate a JSON config file."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError("<file>", str(exc)) from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    return parse_config(raw, path.parent, output_dir)


def _write_json(path, obj):
    path.write_text(json.dumps(obj, indent=2, allow_nan=False) + "\n")


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return "inf" if v > 0 else ("-inf" if v < 0 else "nan")
    return v


def run_certify(cfg, log=print):
    """Write certify.json; returns the conditions exit code."""
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    report = certify(cfg.weight, cfg.plan, **cfg.certify_options)
    _write_json(cfg.output_dir / "certify.json", report.to_dict())
    log(
        f"{cfg.weight.label()}: positivity={report.positivity_ok} laplace={report.laplace_ok} "
        f"tail_decay={report.tail_decay_ok} polynomial_tail={report.polynomial_tail_ok} "
        f"delta_hat={_jsonable(report.delta_hat)}"
    )
    for w in report.warnings:
        log(f"warning: {w}")
    return report.exit_code


def run_approx(cfg, log=print):
    """Build the basis, project every test function, write basis.json,
    projection_<name>.csv and report.json; returns an exit code."""
    out = cfg.output_dir
    out.mkdir(parents=True, exist_ok=True)
    report = {
        "config": cfg.raw,
        "weight": cfg.weight.to_dict(),
        "max_degree": cfg.max_degree,
        "note": _WITNESS_NOTE,
        "status": "ok",
    }

    def fail(code, kind, exc, **extra):
        report["status"] = kind
        report["diagnostic"] = {"error": type(exc).__name__, "message": str(exc), **extra}
        _write_json(out / "report.json", report)
        log(f"{kind}: {exc}")
        return code

    try:
        basis = build_basis(cfg.weight, cfg.max_degree, cfg.plan)
    except DegeneracyError as exc:
        return fail(EXIT_NUMERIC, "degenerate", exc, degree=exc.degree, beta=exc.beta)
    except (DivergentIntegral, InfiniteMassError) as exc:
        return fail(EXIT_NUMERIC, "divergent", exc)
    except InconclusiveIntegral as exc:
        return fail(EXIT_INCONCLUSIVE, "inconclusive", exc)

    _write_json(out / "basis.json", basis.to_dict())
    report["orthogonality_drift"] = basis.orthogonality_drift
    report["drift_tol"] = basis.drift_tol
    if not basis.valid:
        exc = InconsistencyError(
            f"orthogonality drift {basis.orthogonality_drift:.3e} exceeds {basis.drift_tol:.1e}"
        )
        return fail(EXIT_NUMERIC, "drift", exc, orthogonality_drift=basis.orthogonality_drift)

    results = {}
    report["projections"] = results
    for name in cfg.test_functions:
        try:
            res = project(TEST_FUNCTIONS[name], basis, cfg.plan, label=name)
        except InconsistencyError as exc:
            return fail(EXIT_NUMERIC, "inconsistent", exc, test_function=name)
        except DivergentIntegral as exc:
            return fail(EXIT_NUMERIC, "divergent", exc, test_function=name)
        except InconclusiveIntegral as exc:
            return fail(EXIT_INCONCLUSIVE, "inconclusive", exc, test_function=name)
        (out / f"projection_{name}.csv").write_text(res.to_csv())
        results[name] = {
            "f_norm_sq": res.f_norm_sq,
            "relative_residual": res.relative_residual,
            "final_residual": float(res.residuals[-1]),
            "tolerance": res.tolerance,
            "clamped": res.clamped,
        }
        log(f"{name}: relative residual {res.relative_residual:.3e} at N={cfg.max_degree}")
    _write_json(out / "report.json", report)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="polydense",
        description="Audit density hypotheses for a weight and measure polynomial approximation in L2(a).",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("certify", "check positivity, Laplace finiteness and tail decay"),
                       ("approx", "build orthonormal polynomials and project test functions")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", required=True, help="path to the JSON experiment config")
        p.add_argument("--output-dir", help="override the config's output_dir")
        p.add_argument("--quiet", action="store_true", help="suppress progress output")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    log = (lambda *a, **k: None) if args.quiet else print
    try:
        cfg = load_config(args.config, args.output_dir)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.command == "certify":
        return run_certify(cfg, log)
    return run_approx(cfg, log)


if __name__ == "__main__":
    sys.exit(main())
