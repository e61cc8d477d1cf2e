"""Weight densities a(x) on the real line and the base measure they live on.

A ``WeightDensity`` pairs a parametric (or tabulated) density with a
``BaseMeasure``: Lebesgue measure, optionally restricted to an interval, or
counting measure on a finite grid.  All integrals against the weight go
through :meth:`WeightDensity.integrate`, which hands the caller's kernel both
the abscissae and the log of the weight (including any change-of-variables
Jacobian) so that products like ``exp(s*x) * a(x)`` can be formed in log
space.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import quadrature
from .errors import DomainError, InfiniteMassError, InconclusiveIntegral, TabulatedParseError
from .quadrature import QuadraturePlan

__all__ = [
    "BaseMeasure",
    "WeightDensity",
    "FAMILIES",
    "gaussian",
    "double_exponential",
    "uniform",
    "lognormal",
    "tabulated",
    "load_tabulated_csv",
    "equal_weights",
    "eval_density",
    "total_mass",
]

FAMILIES = ("gaussian", "double_exponential", "uniform", "lognormal", "tabulated")

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
_DEFAULT_PLAN = QuadraturePlan()


@dataclass(frozen=True)
class BaseMeasure:
    """Lebesgue measure on ``interval`` or counting measure on ``grid``."""

    kind: str = "lebesgue"
    interval: tuple = (-math.inf, math.inf)
    grid: tuple = ()

    def __post_init__(self):
        if self.kind == "lebesgue":
            lo, hi = self.interval
            if not lo < hi:
                raise ValueError(f"empty interval {self.interval!r}")
        elif self.kind == "counting":
            g = np.asarray(self.grid, dtype=float)
            if g.size == 0 or not np.all(np.isfinite(g)):
                raise ValueError("counting grid must be a nonempty list of finite reals")
            if np.any(np.diff(g) <= 0):
                raise ValueError("counting grid must be strictly increasing")
        else:
            raise ValueError(f"unknown base measure kind {self.kind!r}")

    @classmethod
    def lebesgue(cls, lo=-math.inf, hi=math.inf):
        return cls("lebesgue", (float(lo), float(hi)))

    @classmethod
    def counting(cls, grid):
        return cls("counting", grid=tuple(float(x) for x in grid))

    def to_dict(self):
        if self.kind == "counting":
            return {"kind": "counting", "grid": list(self.grid)}
        return {"kind": "lebesgue", "interval": [_jf(v) for v in self.interval]}


def _jf(v):
    return v if math.isfinite(v) else ("inf" if v > 0 else "-inf")


@dataclass(frozen=True)
class WeightDensity:
    family: str
    params: dict
    support: tuple
    base: BaseMeasure = field(default_factory=BaseMeasure)
    points: tuple = ()
    _mass_cache: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")

    # -- pointwise -------------------------------------------------------

    def logpdf(self, x):
        """log a(x), ``-inf`` outside the support."""
        x = np.asarray(x, dtype=float)
        p = self.params
        with np.errstate(divide="ignore", invalid="ignore"):
            if self.family == "gaussian":
                z = (x - p["mu"]) / p["sigma"]
                out = -0.5 * z * z - math.log(p["sigma"]) - _LOG_SQRT_2PI
            elif self.family == "double_exponential":
                b = p["scale"]
                out = -np.abs(x) / b - math.log(2.0 * b)
            elif self.family == "uniform":
                lo, hi = p["lo"], p["hi"]
                inside = (x >= lo) & (x <= hi)
                out = np.where(inside, -math.log(hi - lo), -np.inf)
            elif self.family == "lognormal":
                pos = x > 0
                lx = np.log(np.where(pos, x, 1.0))
                z = (lx - p["mu"]) / p["sigma"]
                out = np.where(pos, -0.5 * z * z - lx - math.log(p["sigma"]) - _LOG_SQRT_2PI, -np.inf)
            else:
                out = np.log(self._interp(x))
        return out

    def pdf(self, x):
        x = np.asarray(x, dtype=float)
        if self.family == "tabulated":
            return self._interp(x)
        if self.family == "uniform":
            lo, hi = self.params["lo"], self.params["hi"]
            return np.where((x >= lo) & (x <= hi), 1.0 / (hi - lo), 0.0)
        if self.family == "double_exponential":
            b = self.params["scale"]
            return np.exp(-np.abs(x) / b) / (2.0 * b)
        if self.family == "gaussian":
            mu, sigma = self.params["mu"], self.params["sigma"]
            z = (x - mu) / sigma
            return np.exp(-0.5 * z * z) / (sigma * math.sqrt(2.0 * math.pi))
        with np.errstate(under="ignore"):
            return np.exp(self.logpdf(x))

    def _interp(self, x):
        xs = np.array([pt[0] for pt in self.points])
        ys = np.array([pt[1] for pt in self.points])
        return np.interp(x, xs, ys, left=0.0, right=0.0)

    # -- integration -----------------------------------------------------

    @property
    def breakpoints(self):
        if self.family == "double_exponential":
            return (0.0,)
        if self.family == "tabulated":
            return tuple(pt[0] for pt in self.points)
        return ()

    def integration_domain(self):
        """Support intersected with the base interval (Lebesgue only)."""
        lo = max(self.support[0], self.base.interval[0])
        hi = min(self.support[1], self.base.interval[1])
        return lo, hi

    def integrate_many(self, kernel, plan=None, *, log_substitution=True):
        """Integrate ``kernel(x, logw)`` against the base measure.

        ``kernel`` receives abscissae ``x`` and ``logw``, the log of the
        weight times the change-of-variables Jacobian, and returns an array
        of shape ``(n,)`` or ``(m, n)``.  The integral is that of the
        returned values with respect to the internal integration variable,
        so ``kernel = lambda x, lw: f(x) * np.exp(lw)`` yields
        ``∫ f a dλ``.  Contributions where the weight is exactly zero are
        dropped.

        Lognormal weights are integrated in y = ln x unless
        ``log_substitution`` is false; the substitution suits integrands
        whose mass sits at large ln x (moments, polynomials) while
        exponentially growing integrands are better tracked in x.

        Returns a list of ``IntegralOutcome``.
        """
        plan = plan or _DEFAULT_PLAN

        def masked(x, logw):
            with np.errstate(all="ignore"):
                vals = np.asarray(kernel(x, logw), dtype=float)
            zero = np.isneginf(logw)
            if zero.any():
                vals = np.where(zero, 0.0, vals)
            return vals

        if self.base.kind == "counting":
            x = np.asarray(self.base.grid, dtype=float)
            sums = np.atleast_1d(quadrature.integrate_counting(lambda t: masked(t, self.logpdf(t)), x))
            return [quadrature.IntegralOutcome(float(v), 0.0, quadrature.CONVERGED) for v in sums]

        lo, hi = self.integration_domain()
        if not lo < hi:
            m = np.atleast_2d(masked(np.array([0.0]), np.array([-np.inf]))).shape[0]
            return [quadrature.IntegralOutcome(0.0, 0.0, quadrature.CONVERGED) for _ in range(m)]

        if self.family == "lognormal" and log_substitution:
            # integrate in y = ln x, where a(x) dx = N(y; mu, sigma) dy
            mu, sigma = self.params["mu"], self.params["sigma"]
            ylo = math.log(lo) if lo > 0 else -math.inf
            yhi = math.log(hi) if math.isfinite(hi) else math.inf

            def g(y):
                with np.errstate(over="ignore"):
                    x = np.exp(y)
                z = (y - mu) / sigma
                logw = -0.5 * z * z - math.log(sigma) - _LOG_SQRT_2PI
                # exp(y) overflows only where the weight is far below exp(-2e5)
                logw = np.where(np.isfinite(x), logw, -np.inf)
                return masked(x, logw)

            return quadrature.integrate_many(g, (ylo, yhi), plan, center=mu)

        center = self.params.get("mu", 0.0) if self.family == "gaussian" else 0.0
        return quadrature.integrate_many(
            lambda x: masked(x, self.logpdf(x)),
            (lo, hi),
            plan,
            breakpoints=self.breakpoints,
            center=center,
        )

    def integrate(self, kernel, plan=None, **kw):
        """Scalar form of :meth:`integrate_many`."""
        return self.integrate_many(kernel, plan, **kw)[0]

    # -- derived ---------------------------------------------------------

    @property
    def normalization(self):
        """Total mass under the default plan, computed once."""
        return total_mass(self)

    def on_grid(self, grid):
        """Same density, evaluated against counting measure on ``grid``."""
        return replace(self, base=BaseMeasure.counting(grid), _mass_cache={})

    def restricted(self, lo, hi):
        """Same density against Lebesgue measure restricted to [lo, hi]."""
        return replace(self, base=BaseMeasure.lebesgue(lo, hi), _mass_cache={})

    @property
    def is_symmetric(self):
        if self.base.kind == "counting":
            g = np.asarray(self.base.grid)
            if not np.array_equal(g, -g[::-1]):
                return False
        elif self.base.interval[0] != -self.base.interval[1]:
            return False
        if self.family == "gaussian":
            return self.params["mu"] == 0.0
        if self.family == "double_exponential":
            return True
        if self.family == "uniform":
            return self.params["lo"] == -self.params["hi"]
        return False

    def label(self):
        if self.family == "tabulated":
            name = f"tabulated[{len(self.points)}]"
        else:
            args = ",".join(f"{k}={v:g}" for k, v in self.params.items())
            name = f"{self.family}({args})"
        if self.base.kind == "counting":
            name += f" on {len(self.base.grid)}-point grid"
        return name

    def to_dict(self):
        out = {"family": self.family, **self.params}
        if self.family == "tabulated":
            out["points"] = [list(pt) for pt in self.points]
        if self.base.kind != "lebesgue" or self.base.interval != (-math.inf, math.inf):
            out["base"] = self.base.to_dict()
        return out


def _positive(name, value):
    value = float(value)
    if not (math.isfinite(value) and value > 0):
        raise ValueError(f"{name} must be a positive finite real, got {value!r}")
    return value


def _finite(name, value):
    value = float(value)
    if not math.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value!r}")
    return value


def gaussian(mu=0.0, sigma=1.0):
    mu, sigma = _finite("mu", mu), _positive("sigma", sigma)
    return WeightDensity("gaussian", {"mu": mu, "sigma": sigma}, (-math.inf, math.inf))


def double_exponential(scale=1.0):
    """Laplace density exp(-|x|/scale) / (2 scale)."""
    scale = _positive("scale", scale)
    return WeightDensity("double_exponential", {"scale": scale}, (-math.inf, math.inf))


def uniform(lo=-1.0, hi=1.0):
    lo, hi = _finite("lo", lo), _finite("hi", hi)
    if not lo < hi:
        raise ValueError("uniform requires lo < hi")
    return WeightDensity("uniform", {"lo": lo, "hi": hi}, (lo, hi))


def lognormal(mu=0.0, sigma=1.0):
    mu, sigma = _finite("mu", mu), _positive("sigma", sigma)
    return WeightDensity("lognormal", {"mu": mu, "sigma": sigma}, (0.0, math.inf))


def tabulated(points):
    """Piecewise-linear density through ``points``, zero outside their range."""
    pts = tuple((float(x), float(a)) for x, a in points)
    if len(pts) < 4:
        raise ValueError("tabulated density needs at least 4 points")
    xs = np.array([p[0] for p in pts])
    ys = np.array([p[1] for p in pts])
    if not (np.all(np.isfinite(xs)) and np.all(np.isfinite(ys))):
        raise ValueError("tabulated points must be finite")
    if np.any(np.diff(xs) <= 0):
        raise ValueError("tabulated x values must be strictly increasing")
    if np.any(ys < 0):
        raise ValueError("tabulated density values must be nonnegative")
    if not np.any(ys > 0):
        raise ValueError("tabulated density has zero mass")
    return WeightDensity("tabulated", {}, (pts[0][0], pts[-1][0]), points=pts)


def load_tabulated_csv(path):
    """Read a ``x,a`` CSV file into a tabulated density."""
    rows = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["x", "a"]:
            raise TabulatedParseError(f"{path}: expected header 'x,a', got {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != 2:
                raise TabulatedParseError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            try:
                x, a = float(row[0]), float(row[1])
            except ValueError as exc:
                raise TabulatedParseError(f"{path}:{lineno}: {exc}") from None
            if not math.isfinite(x) or not math.isfinite(a):
                raise TabulatedParseError(f"{path}:{lineno}: non-finite value")
            if a < 0:
                raise TabulatedParseError(f"{path}:{lineno}: negative density {a!r}")
            if rows and x <= rows[-1][0]:
                raise TabulatedParseError(f"{path}:{lineno}: x values must be strictly increasing")
            rows.append((x, a))
    try:
        return tabulated(rows)
    except ValueError as exc:
        raise TabulatedParseError(f"{path}: {exc}") from None


def equal_weights(grid):
    """Counting measure on ``grid`` with the same weight at every point."""
    grid = [float(x) for x in grid]
    if len(grid) < 2:
        raise ValueError("need at least two grid points")
    return uniform(grid[0], grid[-1]).on_grid(grid)


def eval_density(d, x):
    """a(x) for finite ``x`` (scalar or array); 0 outside the support."""
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise DomainError(f"density argument must be finite, got {x!r}")
    out = d.pdf(arr)
    return float(out) if np.ndim(out) == 0 else out


def total_mass(d, plan=None):
    """∫ a dλ; cached on the density per plan."""
    plan = plan or _DEFAULT_PLAN
    cached = d._mass_cache.get(plan)
    if cached is not None:
        return cached
    out = d.integrate(lambda x, lw: np.exp(lw), plan)
    if out.divergent:
        raise InfiniteMassError(f"{d.label()} has infinite mass")
    if not out.converged:
        raise InconclusiveIntegral(f"total mass of {d.label()} is inconclusive", out)
    if not out.value > 0:
        raise InfiniteMassError(f"{d.label()} has non-positive mass {out.value!r}")
    d._mass_cache[plan] = out.value
    return out.value
