"""Laplace transforms M(s; f) = ∫ exp(s x) f(x) λ(dx) of weights, moments,
and the finiteness neighbourhood of the transform around s = 0."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DivergentIntegral, InconclusiveIntegral, InconsistencyError
from .quadrature import CONVERGED, DIVERGENT, INCONCLUSIVE, IntegralOutcome, QuadraturePlan

__all__ = [
    "UNDEFINED",
    "UNBOUNDED",
    "SignedFunction",
    "LaplaceReport",
    "CheckResult",
    "laplace_transform",
    "signed_laplace",
    "estimate_delta",
    "moment",
    "monomial_laplace",
    "check_weighted_monomial",
]

UNBOUNDED = math.inf


class _Undefined:
    """Marker for M(s; f+) - M(s; f-) when both terms are infinite."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNDEFINED"

    def __bool__(self):
        return False


UNDEFINED = _Undefined()


@dataclass(frozen=True)
class SignedFunction:
    """A real function split into positive and negative parts."""

    f: object

    def __call__(self, x):
        return np.asarray(self.f(x), dtype=float)

    def positive(self, x):
        return np.maximum(self(x), 0.0)

    def negative(self, x):
        return np.maximum(-self(x), 0.0)


def _laplace_kernel(s, power=0):
    def kernel(x, logw):
        if power == 0:
            return np.exp(s * x + logw)
        with np.errstate(divide="ignore"):
            mag = np.exp(s * x + power * np.log(np.abs(x)) + logw)
        return mag if power % 2 == 0 else np.sign(x) * mag
    return kernel


def _integrate(d, kernel, s, plan):
    # growing exponentials are tracked on an x-space truncation schedule
    return d.integrate(kernel, plan, log_substitution=s <= 0)


def laplace_transform(d, s, plan=None):
    """M(s; a) for the weight ``d``; the quadrature verdict is returned as-is."""
    s = float(s)
    return _integrate(d, _laplace_kernel(s), s, plan)


def monomial_laplace(d, s, n, plan=None):
    """M(s; x^n a(x))."""
    s = float(s)
    return _integrate(d, _laplace_kernel(s, int(n)), s, plan)


def signed_laplace(f, d, s, plan=None):
    """M(s; f a) = M(s; f⁺ a) − M(s; f⁻ a).

    Returns ``±inf`` when exactly one part diverges and :data:`UNDEFINED`
    when both do.  An inconclusive part raises ``InconclusiveIntegral``.
    """
    if not isinstance(f, SignedFunction):
        f = SignedFunction(f)
    s = float(s)
    base = _laplace_kernel(s)

    def part(which):
        def kernel(x, lw):
            v = which(x)
            return np.where(v > 0, v * base(x, lw), 0.0)
        return kernel

    pos = _integrate(d, part(f.positive), s, plan)
    neg = _integrate(d, part(f.negative), s, plan)
    for part in (pos, neg):
        if part.verdict == INCONCLUSIVE:
            raise InconclusiveIntegral(f"signed Laplace transform at s={s} is inconclusive", part)
    if pos.divergent and neg.divergent:
        return UNDEFINED
    if pos.divergent:
        return math.inf
    if neg.divergent:
        return -math.inf
    return pos.value - neg.value


@dataclass
class LaplaceReport:
    s_grid: list
    values: list
    delta_hat: float
    delta_resolution: float
    boundary_pos: float = UNBOUNDED
    boundary_neg: float = UNBOUNDED
    probe_limit: float = math.nan
    inconclusive: list = field(default_factory=list)

    @property
    def unbounded(self):
        return math.isinf(self.delta_hat)

    def outcome_at(self, s):
        for si, out in zip(self.s_grid, self.values):
            if si == s:
                return out
        raise KeyError(s)

    def to_dict(self):
        def num(v):
            return "unbounded" if math.isinf(v) else v

        return {
            "s_grid": list(self.s_grid),
            "values": [{"s": s, **o.to_dict()} for s, o in zip(self.s_grid, self.values)],
            "delta_hat": num(self.delta_hat),
            "delta_resolution": self.delta_resolution,
            "boundary_pos": num(self.boundary_pos),
            "boundary_neg": num(self.boundary_neg),
            "probe_limit": self.probe_limit,
            "inconclusive": list(self.inconclusive),
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _side_boundary(probe, s_max, eps_s):
    """Bisect (0, s_max] for the finiteness boundary on one side.

    Returns (boundary, resolution, inconclusive_points); boundary is the
    largest s known to converge, or UNBOUNDED.
    """
    top = probe(s_max)
    if top.verdict == CONVERGED:
        return UNBOUNDED, eps_s, []
    lo = 0.0
    hi = s_max  # smallest s known (or suspected) not to converge
    hi_div = s_max if top.verdict == DIVERGENT else math.nan
    hi_probe = s_max
    inconclusive = [] if top.verdict == DIVERGENT else [s_max]
    while hi_probe - lo > eps_s:
        mid = 0.5 * (lo + hi_probe)
        out = probe(mid)
        if out.verdict == CONVERGED:
            lo = mid
        elif out.verdict == DIVERGENT:
            hi = hi_div = hi_probe = mid
        else:
            inconclusive.append(mid)
            hi_probe = mid
    upper = hi_div if not math.isnan(hi_div) else hi
    return lo, upper - lo, inconclusive


def estimate_delta(d, s_max=4.0, eps_s=0.05, plan=None):
    """Estimate the half-width δ of the interval around 0 where M(s; a) < ∞.

    Each side is bisected independently and ``delta_hat`` is the smaller of
    the two boundaries.  A side with no divergence up to ``s_max`` is
    reported as ``UNBOUNDED``; ``probe_limit`` records ``s_max``.
    """
    s_max, eps_s = float(s_max), float(eps_s)
    if not (s_max > eps_s > 0):
        raise ValueError("require s_max > eps_s > 0")
    seen = {}

    def probe(s):
        if s not in seen:
            seen[s] = laplace_transform(d, s, plan)
        return seen[s]

    zero = probe(0.0)
    if not zero.converged:
        grid = sorted(seen)
        return LaplaceReport(grid, [seen[s] for s in grid], 0.0, eps_s, 0.0, 0.0, s_max,
                             [] if zero.divergent else [0.0])

    pos, res_pos, inc_pos = _side_boundary(probe, s_max, eps_s)
    neg, res_neg, inc_neg = _side_boundary(lambda s: probe(-s), s_max, eps_s)
    delta_hat = min(pos, neg)
    if math.isinf(delta_hat):
        resolution = eps_s
    elif pos <= neg:
        resolution = res_pos
    else:
        resolution = res_neg
    grid = sorted(seen)
    return LaplaceReport(
        s_grid=grid,
        values=[seen[s] for s in grid],
        delta_hat=delta_hat,
        delta_resolution=resolution,
        boundary_pos=pos,
        boundary_neg=neg,
        probe_limit=s_max,
        inconclusive=sorted(inc_pos + [-s for s in inc_neg]),
    )


def moment(d, k, plan=None, delta_hat=None):
    """∫ x^k a(x) λ(dx).

    Raises ``DivergentIntegral`` / ``InconclusiveIntegral`` when the integral
    does not converge.  If ``delta_hat > 0`` is supplied, a divergent moment
    contradicts the finite-moment guarantee and ``InconsistencyError`` is
    raised instead.
    """
    k = int(k)
    if k < 0:
        raise ValueError("moment order must be nonnegative")
    out = monomial_laplace(d, 0.0, k, plan)
    if out.converged:
        return out.value
    if out.divergent:
        if delta_hat is not None and delta_hat > 0:
            raise InconsistencyError(
                f"moment {k} of {d.label()} diverged although delta_hat={delta_hat} > 0; "
                "the quadrature plan is inadequate"
            )
        raise DivergentIntegral(f"moment {k} of {d.label()} diverges", out)
    raise InconclusiveIntegral(f"moment {k} of {d.label()} is inconclusive", out)


@dataclass
class CheckResult:
    """Pass/fail verdict for one condition with the raw evidence rows."""

    name: str
    passed: bool
    probes: list = field(default_factory=list)
    failure: object = None
    inconclusive: bool = False

    def __bool__(self):
        return bool(self.passed)

    def to_dict(self):
        return {
            "name": self.name,
            "passed": bool(self.passed),
            "inconclusive": bool(self.inconclusive),
            "failure": self.failure,
            "probes": self.probes,
        }


def check_weighted_monomial(d, n, delta, plan=None, eps_s=0.05, extra_probes=()):
    """Check that M(s; x^n a) is finite on the open interval (−δ/2, δ/2).

    Probes s ∈ {±(δ/2 − eps_s), ±δ/4, 0} plus any ``extra_probes``.
    """
    n = int(n)
    delta = float(delta)
    if not delta > 0:
        raise ValueError("delta must be positive")
    inner = max(delta / 2 - eps_s, 0.0)
    probes = sorted({-inner, -delta / 4, 0.0, delta / 4, inner, *map(float, extra_probes)})
    rows = []
    failure = None
    inconclusive = False
    for s in probes:
        out = monomial_laplace(d, s, n, plan)
        rows.append({"s": s, "n": n, "value": out.to_dict()["value"], "verdict": out.verdict})
        if out.verdict == DIVERGENT and failure is None:
            failure = {"s": s, "n": n}
        elif out.verdict == INCONCLUSIVE:
            inconclusive = True
            if failure is None:
                failure = {"s": s, "n": n, "reason": INCONCLUSIVE}
    return CheckResult(f"weighted_monomial[n={n}]", failure is None, rows, failure, inconclusive)
