"""Adaptive Gauss-Kronrod integration with an expanding-truncation protocol.

Bounded intervals are integrated by globally adaptive G7/K15 panels.
Unbounded intervals are truncated to a window around ``center`` whose
radius doubles from ``QuadraturePlan.initial_radius``.  The outcome is
``converged`` once successive truncations agree.  If the doubling budget
runs out (or the integrand overflows) first, the outcome is ``divergent``
when the partial integrals were still growing geometrically over the last
three doublings and ``inconclusive`` otherwise.

Integrands are vectorized: ``g(x)`` receives a 1-d array and returns an
array of shape ``(n,)`` or ``(m, n)`` for ``m`` simultaneous integrands.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "QuadraturePlan",
    "IntegralOutcome",
    "EvaluationError",
    "integrate",
    "integrate_many",
    "integrate_counting",
    "CONVERGED",
    "DIVERGENT",
    "INCONCLUSIVE",
]

CONVERGED = "converged"
DIVERGENT = "divergent"
INCONCLUSIVE = "inconclusive"

# QUADPACK qk15 abscissae (nonnegative half) and weights.
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point rule on [-1, 1], ordered left to right
NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[-2::-1]])
KRONROD_WEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[-2::-1]])
_gauss_half = np.zeros(8)
_gauss_half[1:7:2] = _WG[:3]
_gauss_half[7] = _WG[3]
GAUSS_WEIGHTS = np.concatenate([_gauss_half[:-1], [_gauss_half[-1]], _gauss_half[-2::-1]])

# successive partial integrals must grow at least this much per doubling
_GROWTH_FACTOR = 1.5
_GROWTH_RUN = 3


class EvaluationError(ArithmeticError):
    """The integrand returned a non-finite value at ``x``."""

    def __init__(self, x, value):
        super().__init__(f"integrand is {value!r} at x={x!r}")
        self.x = x
        self.value = value


@dataclass(frozen=True)
class QuadraturePlan:
    """Tolerances and truncation schedule shared by every integral."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    initial_radius: float = 8.0
    max_doublings: int = 12
    panel_rule: str = "gk15"
    initial_panels: int = 16
    max_panels: int = 4000

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("rel_tol and abs_tol must be positive")
        if not self.initial_radius > 0:
            raise ValueError("initial_radius must be positive")
        if self.max_doublings < 1:
            raise ValueError("max_doublings must be >= 1")
        if self.panel_rule != "gk15":
            raise ValueError(f"unknown panel rule {self.panel_rule!r}")
        if self.initial_panels < 1 or self.max_panels < self.initial_panels:
            raise ValueError("invalid panel budget")

    def tolerance(self, value):
        """Absolute error target for an integral of size ``value``."""
        return np.maximum(self.abs_tol, self.rel_tol * np.abs(value))


@dataclass(frozen=True)
class IntegralOutcome:
    value: float
    error_estimate: float
    verdict: str
    truncations_used: tuple = ()
    overflow: bool = False
    magnitude: float = math.nan

    def tolerance_met(self, plan):
        """Whether ``error_estimate`` is within the plan's target (incl. roundoff floor)."""
        target = max(plan.abs_tol, plan.rel_tol * abs(self.value))
        if math.isfinite(self.magnitude):
            target = max(target, float(roundoff_floor(self.magnitude)))
        return self.error_estimate <= target

    @property
    def converged(self):
        return self.verdict == CONVERGED

    @property
    def divergent(self):
        return self.verdict == DIVERGENT

    def to_dict(self):
        return {
            "value": _json_float(self.value),
            "error": _json_float(self.error_estimate),
            "verdict": self.verdict,
        }


def _json_float(v):
    v = float(v)
    if math.isfinite(v):
        return v
    return "inf" if v > 0 else ("-inf" if v < 0 else "nan")


def _evaluate(g, a, b):
    """Apply GK15 to panels [a_i, b_i].

    Returns (kronrod, error, absolute) estimates, each of shape (m, P).
    """
    center = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = (center[:, None] + half[:, None] * NODES[None, :]).ravel()
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        fx = np.asarray(g(x), dtype=float)
    if fx.ndim == 1:
        fx = fx[None, :]
    if fx.shape[-1] != x.size:
        fx = np.broadcast_to(fx, (fx.shape[0], x.size))
    bad = ~np.isfinite(fx)
    if bad.any():
        idx = np.argwhere(bad)[0]
        raise EvaluationError(float(x[idx[1]]), float(fx[tuple(idx)]))
    fx = fx.reshape(fx.shape[0], a.size, NODES.size)
    with np.errstate(over="ignore", invalid="ignore", under="ignore"):
        res_k = fx @ KRONROD_WEIGHTS
        res_g = fx @ GAUSS_WEIGHTS
        mean = 0.5 * res_k
        resasc = np.abs(fx - mean[..., None]) @ KRONROD_WEIGHTS
        resabs = np.abs(fx) @ KRONROD_WEIGHTS
        diff = np.abs(res_k - res_g)
        # QUADPACK error scaling without its roundoff floor
        ratio = np.where(resasc > 0, 200.0 * diff / np.where(resasc > 0, resasc, 1.0), 0.0)
        err = np.where(resasc > 0, resasc * np.minimum(1.0, ratio ** 1.5), diff)
    if not (np.all(np.isfinite(res_k)) and np.all(np.isfinite(err))):
        raise EvaluationError(float(center[0]), float("inf"))
    return res_k * half, err * np.abs(half), resabs * np.abs(half)


def _adaptive(g, edges, plan, target=None, share=1.0):
    """Globally adaptive integration over the union of panels ``edges``.

    ``target`` optionally fixes the absolute error target per component;
    otherwise ``share * plan.tolerance`` of the running value is used.

    The target never drops below the roundoff floor ``roundoff_floor(∫|g|)``.

    Returns (value, error, magnitude, ok), each of shape (m,) except ``ok``.
    """
    edges = np.asarray(edges, dtype=float)
    a, b = edges[:-1].copy(), edges[1:].copy()
    keep = b > a
    a, b = a[keep], b[keep]
    kron, err, absval = _evaluate(g, a, b)
    while True:
        value = _fsum_rows(kron)
        total_err = err.sum(axis=1)
        magnitude = absval.sum(axis=1)
        if target is None:
            tol = share * plan.tolerance(value)
        else:
            tol = np.broadcast_to(target, value.shape)
        tol = np.maximum(tol, roundoff_floor(magnitude))
        if np.all(total_err <= tol):
            return value, total_err, magnitude, True
        npan = a.size
        if npan >= plan.max_panels:
            return value, total_err, magnitude, False
        # normalized per-panel error, worst component decides
        scaled = (err / tol[:, None]).max(axis=0)
        split = scaled > 0.5 / npan
        split[np.argmax(scaled)] = True
        room = plan.max_panels - npan
        if split.sum() > room:
            order = np.argsort(scaled)[::-1][:room]
            split = np.zeros_like(split)
            split[order] = True
        mid = 0.5 * (a[split] + b[split])
        if np.any((mid <= a[split]) | (mid >= b[split])):
            # panels cannot be halved further in floating point
            return value, total_err, magnitude, False
        na = np.concatenate([a[split], mid])
        nb = np.concatenate([mid, b[split]])
        k_new, e_new, m_new = _evaluate(g, na, nb)
        keep = ~split
        a = np.concatenate([a[keep], na])
        b = np.concatenate([b[keep], nb])
        order = np.argsort(a, kind="stable")
        a, b = a[order], b[order]
        kron = np.concatenate([kron[:, keep], k_new], axis=1)[:, order]
        err = np.concatenate([err[:, keep], e_new], axis=1)[:, order]
        absval = np.concatenate([absval[:, keep], m_new], axis=1)[:, order]


def roundoff_floor(magnitude):
    """Smallest meaningful absolute error for an integral with ∫|g| = ``magnitude``."""
    return 50.0 * np.finfo(float).eps * np.asarray(magnitude)


def _fsum_rows(arr):
    return np.array([math.fsum(row) for row in arr])


def _panel_edges(lo, hi, count, breakpoints=()):
    """Split [lo, hi] into ``count`` equal panels plus interior breakpoints."""
    pts = set(np.linspace(lo, hi, count + 1).tolist())
    pts.update(p for p in breakpoints if lo < p < hi)
    return np.array(sorted(pts))


def integrate_many(g, domain, plan=None, *, breakpoints=(), center=0.0):
    """Integrate a vector-valued integrand over ``domain``.

    Returns a list of ``IntegralOutcome``, one per component of ``g``.
    """
    plan = plan or QuadraturePlan()
    lo, hi = map(float, domain)
    if not lo < hi:
        if lo == hi:
            m = np.atleast_2d(np.asarray(g(np.array([lo])), dtype=float)).shape[0]
            return [IntegralOutcome(0.0, 0.0, CONVERGED) for _ in range(m)]
        raise ValueError(f"empty domain {domain!r}")
    if math.isnan(lo) or math.isnan(hi):
        raise ValueError("domain endpoints must not be NaN")
    breakpoints = tuple(float(p) for p in breakpoints)
    if math.isfinite(lo) and math.isfinite(hi):
        edges = _panel_edges(lo, hi, plan.initial_panels, breakpoints)
        value, err, mag, ok = _adaptive(g, edges, plan)
        verdict = CONVERGED if ok else INCONCLUSIVE
        return [IntegralOutcome(float(v), float(e), verdict, magnitude=float(mg))
                for v, e, mg in zip(value, err, mag)]
    return _expanding(g, lo, hi, plan, breakpoints, float(center))


def integrate(g, domain, plan=None, *, breakpoints=(), center=0.0):
    """Integrate a scalar integrand ``g`` over ``domain``.

    Parameters
    ----------
    g : callable
        Vectorized integrand, ``g(x) -> array`` with the shape of ``x``.
    domain : tuple of float
        ``(lo, hi)``; either end may be infinite.
    plan : QuadraturePlan, optional
    breakpoints : sequence of float
        Interior points where ``g`` is not smooth.
    center : float
        Center of the truncation window for unbounded domains.

    Returns
    -------
    IntegralOutcome
    """
    return integrate_many(g, domain, plan, breakpoints=breakpoints, center=center)[0]


def _window(lo, hi, center, radius):
    left = lo if math.isfinite(lo) else (min(center, hi) if math.isfinite(hi) else center) - radius
    right = hi if math.isfinite(hi) else (max(center, lo) if math.isfinite(lo) else center) + radius
    return left, right


def _expanding(g, lo, hi, plan, breakpoints, center):
    radius = plan.initial_radius
    left, right = _window(lo, hi, center, radius)
    edges = _panel_edges(left, right, plan.initial_panels, breakpoints)
    try:
        # half the error budget here, the rest for the expanding shells
        value, err, mag, ok = _adaptive(g, edges, plan, share=0.5)
    except EvaluationError as exc:
        if math.isinf(exc.value):
            m = np.atleast_2d(np.asarray(g(np.array([exc.x])), dtype=float)).shape[0]
            return [IntegralOutcome(math.nan, math.inf, INCONCLUSIVE, ((radius, exc.value),),
                                    overflow=True, magnitude=math.inf) for _ in range(m)]
        raise
    quad_err = err.copy()
    quad_ok = ok
    m = value.size
    partials = [[(radius, float(v))] for v in value]
    last_step = np.full(m, np.inf)
    done = np.zeros(m, dtype=bool)
    overflow = None

    for _ in range(plan.max_doublings):
        new_radius = 2.0 * radius
        new_left, new_right = _window(lo, hi, center, new_radius)
        target = plan.tolerance(value) / 8.0
        step = np.zeros(m)
        step_err = np.zeros(m)
        step_mag = np.zeros(m)
        step_ok = True
        try:
            for a, b in ((new_left, left), (right, new_right)):
                if b > a:
                    e = _panel_edges(a, b, 4, breakpoints)
                    v, er, mg, o = _adaptive(g, e, plan, target=target)
                    step += v
                    step_err += er
                    step_mag += mg
                    step_ok = step_ok and o
        except EvaluationError as exc:
            if not math.isinf(exc.value):
                raise
            overflow = (new_radius, exc.value)
            break
        new_value = value + step
        if not np.all(np.isfinite(new_value)):
            overflow = (new_radius, math.inf)
            break
        value = new_value
        quad_err = quad_err + step_err
        mag = mag + step_mag
        quad_ok = quad_ok and step_ok
        radius, left, right = new_radius, new_left, new_right
        last_step = np.abs(step)
        tol = np.maximum(plan.tolerance(value), roundoff_floor(mag))
        for c in range(m):
            if not done[c]:
                partials[c].append((radius, float(value[c])))
                done[c] = quad_ok and last_step[c] + quad_err[c] <= tol[c]
        if done.all():
            break

    out = []
    for c in range(m):
        if done[c]:
            out.append(IntegralOutcome(float(value[c]), float(quad_err[c] + last_step[c]),
                                       CONVERGED, tuple(partials[c]), magnitude=float(mag[c])))
            continue
        seq = list(partials[c])
        if overflow is not None:
            seq.append(overflow)
        if _growing([p for _, p in partials[c]]):
            sign = math.copysign(1.0, partials[c][-1][1])
            out.append(IntegralOutcome(sign * math.inf, math.inf, DIVERGENT, tuple(seq),
                                       overflow=overflow is not None, magnitude=math.inf))
        else:
            out.append(IntegralOutcome(float(value[c]), float(quad_err[c] + last_step[c]),
                                       INCONCLUSIVE, tuple(seq), overflow=overflow is not None,
                                       magnitude=float(mag[c])))
    return out


def _growing(partials):
    """|partial| grew geometrically over the last ``_GROWTH_RUN`` doublings."""
    if len(partials) < _GROWTH_RUN + 2:
        return False
    mags = [abs(p) for p in partials[-(_GROWTH_RUN + 2):]]
    incs = [b - a for a, b in zip(mags, mags[1:])]
    if incs[0] <= 0:
        return False
    return all(later >= _GROWTH_FACTOR * earlier for earlier, later in zip(incs, incs[1:]))


def integrate_counting(g, grid):
    """Sum ``g`` over a finite grid with compensated summation."""
    x = np.asarray(grid, dtype=float)
    with np.errstate(over="ignore", invalid="ignore"):
        fx = np.asarray(g(x), dtype=float)
    if fx.ndim == 1:
        fx = fx[None, :]
    bad = ~np.isfinite(fx)
    if bad.any():
        idx = np.argwhere(bad)[0]
        raise EvaluationError(float(x[idx[1]]), float(fx[tuple(idx)]))
    sums = _fsum_rows(fx)
    return float(sums[0]) if sums.size == 1 else sums
