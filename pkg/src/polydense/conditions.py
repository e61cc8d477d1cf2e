"""Hypothesis audit for polynomial density in L²(a).

Three kinds of evidence are gathered for a weight:

* positivity of a on the whole line (declared support plus a sampled grid),
* a neighbourhood of s = 0 on which the Laplace transform M(s; a) is finite,
* tail decay of exp(±δx) a(x) and of x^k a(x), checked on a doubling probe
  schedule.  Decay of exp(±δx) a(x) is sufficient for finiteness of
  M(s; a) on |s| < δ and forces x^k a(x) → 0 for every k, so the report
  cross-checks these implications against the quadrature results.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .laplace import CheckResult, estimate_delta
from .quadrature import CONVERGED, QuadraturePlan

__all__ = [
    "ConditionReport",
    "tail_decay_check",
    "polynomial_tail_check",
    "positivity_check",
    "certify",
    "EXIT_OK",
    "EXIT_FAIL",
    "EXIT_INCONCLUSIVE",
]

EXIT_OK = 0
EXIT_FAIL = 3
EXIT_INCONCLUSIVE = 4

_LOG_MAX = math.log(np.finfo(float).max)
_SMALL = 1e-12
_TAIL_RUN = 3  # trailing probes that must be nonincreasing
_POSITIVITY_GRID = np.linspace(-50.0, 50.0, 1001)
_CONTINUITY_NOTE = (
    "continuity of the weight is assumed, not verified: named families are "
    "continuous and tabulated weights are piecewise linear"
)
_WITNESS_NOTE = (
    "tail and positivity checks sample finitely many points; a pass is "
    "numerical evidence, not a proof"
)


def _schedule(x_start, n_probes):
    x_start = float(x_start)
    n_probes = int(n_probes)
    if not (math.isfinite(x_start) and x_start > 0):
        raise ValueError("x_start must be a positive finite real")
    if n_probes < 4:
        raise ValueError("n_probes must be at least 4")
    return x_start * 2.0 ** np.arange(n_probes)


def _judge(log_values):
    """Verdict for one tail sequence given log-values; returns (ok, reason)."""
    lv = np.asarray(log_values, dtype=float)
    if np.any(lv > _LOG_MAX):
        return False, "overflow"
    v = np.exp(lv)
    tail = v[-_TAIL_RUN:]
    if np.any(np.diff(tail) > 0):
        return False, "not eventually decreasing"
    if not v[-1] <= _SMALL * (v[0] + 1.0):
        return False, "final value not small"
    return True, None


def _tail_rows(d, xs, log_factor, key, tag):
    """Probe rows and verdict for x ↦ exp(log_factor(x)) a(x) along ``xs``."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        lv = log_factor(xs) + d.logpdf(xs)
    lv = np.where(np.isnan(lv), -np.inf, lv)
    rows = []
    for x, l in zip(xs, lv):
        value = math.exp(l) if l <= _LOG_MAX else math.inf
        rows.append({"x": float(x), key: tag, "value": value})
    ok, reason = _judge(lv)
    return ok, reason, rows


def tail_decay_check(d, delta, x_start=8.0, n_probes=8):
    """Check exp(s x) a(x) → 0 as x → ±∞ for s = ±δ.

    The extreme exponents dominate every |s| < δ, so four sequences are
    probed at x = ±x_start·2^j, j = 0..n_probes-1.  Each passes if its last
    values are nonincreasing and the final one is at most
    1e-12·(first + 1).  A value overflowing double precision is recorded
    as a failure at that probe.

    Returns
    -------
    CheckResult
        ``probes`` holds rows ``{"x", "s", "value"}``.
    """
    delta = float(delta)
    if not (delta > 0 and math.isfinite(delta)):
        raise ValueError("delta must be a positive finite real")
    xs = _schedule(x_start, n_probes)
    rows, failure = [], None
    for side in (1.0, -1.0):
        for s in (delta, -delta):
            ok, reason, seq = _tail_rows(d, side * xs, lambda x, s=s: s * x, "s", s)
            rows.extend(seq)
            if not ok and failure is None:
                bad = next((r for r in seq if math.isinf(r["value"])), seq[-1])
                failure = {"x": bad["x"], "s": s, "reason": reason}
    return CheckResult(f"tail_decay[delta={delta:g}]", failure is None, rows, failure)


def polynomial_tail_check(d, k_max=8, x_start=8.0, n_probes=8):
    """Check |x|^k a(x) → 0 as x → ±∞ for k = 0..k_max, same criterion as
    :func:`tail_decay_check`.  Rows are ``{"x", "k", "value"}``."""
    k_max = int(k_max)
    if k_max < 1:
        raise ValueError("k_max must be at least 1")
    xs = _schedule(x_start, n_probes)
    rows, failure = [], None
    for k in range(k_max + 1):
        for side in (1.0, -1.0):
            ok, reason, seq = _tail_rows(d, side * xs, lambda x, k=k: k * np.log(np.abs(x)), "k", k)
            rows.extend(seq)
            if not ok and failure is None:
                failure = {"x": seq[-1]["x"], "k": k, "reason": reason}
    return CheckResult(f"polynomial_tail[k_max={k_max}]", failure is None, rows, failure)


def positivity_check(d, grid=None):
    """a(x) > 0 on all of ℝ: declared support and base measure, then a sampled grid."""
    grid = _POSITIVITY_GRID if grid is None else np.asarray(grid, dtype=float)
    rows = []
    failure = None
    if d.support != (-math.inf, math.inf):
        failure = {"reason": "declared support is not the whole line",
                   "support": [_num(v) for v in d.support]}
    elif d.base.kind != "lebesgue" or d.base.interval != (-math.inf, math.inf):
        failure = {"reason": "base measure is not Lebesgue measure on the whole line"}
    logw = d.logpdf(grid)
    bad = ~np.isfinite(logw)
    if bad.any():
        x0 = float(grid[np.argmax(bad)])
        rows.append({"x": x0, "value": 0.0})
        if failure is None:
            failure = {"reason": "density vanishes at a sampled point", "x": x0}
    return CheckResult("positivity", failure is None, rows, failure)


def _num(v):
    v = float(v)
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return v


@dataclass
class ConditionReport:
    weight: dict
    positivity_ok: bool
    laplace_ok: bool
    tail_decay_ok: bool
    polynomial_tail_ok: bool
    delta_hat: float
    delta_resolution: float
    delta_probe: float
    inconclusive: list = field(default_factory=list)
    warnings: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    checks: list = field(default_factory=list)
    probes: list = field(default_factory=list)

    @property
    def all_ok(self):
        return self.positivity_ok and self.laplace_ok and self.tail_decay_ok and self.polynomial_tail_ok

    @property
    def exit_code(self):
        if not self.all_ok:
            return EXIT_FAIL
        if self.inconclusive:
            return EXIT_INCONCLUSIVE
        return EXIT_OK

    def to_dict(self):
        return {
            "weight": self.weight,
            "positivity_ok": self.positivity_ok,
            "laplace_ok": self.laplace_ok,
            "tail_decay_ok": self.tail_decay_ok,
            "polynomial_tail_ok": self.polynomial_tail_ok,
            "delta_hat": "unbounded" if math.isinf(self.delta_hat) else self.delta_hat,
            "delta_resolution": self.delta_resolution,
            "delta_probe": self.delta_probe,
            "inconclusive": list(self.inconclusive),
            "warnings": list(self.warnings),
            "notes": list(self.notes),
            "checks": [c.to_dict() for c in self.checks],
            "evidence": self.probes,
            "exit_code": self.exit_code,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def certify(d, plan=None, delta_probe=None, s_max=4.0, eps_s=0.05, k_max=8,
            x_start=8.0, n_probes=8):
    """Audit the density hypotheses for ``d`` and return a ConditionReport.

    ``delta_probe`` defaults to half the estimated δ, to ``s_max/2`` when no
    divergence was found below ``s_max``, and to ``eps_s`` when δ ≈ 0.
    Failures are verdicts in the report; nothing is raised.
    """
    plan = plan or QuadraturePlan()
    positivity = positivity_check(d)
    lap = estimate_delta(d, s_max=s_max, eps_s=eps_s, plan=plan)
    laplace_ok = lap.delta_hat > lap.delta_resolution
    if delta_probe is None:
        if math.isinf(lap.delta_hat):
            delta_probe = s_max / 2
        elif lap.delta_hat > 0:
            delta_probe = lap.delta_hat / 2
        else:
            delta_probe = eps_s
    delta_probe = float(delta_probe)
    tail = tail_decay_check(d, delta_probe, x_start, n_probes)
    poly = polynomial_tail_check(d, k_max, x_start, n_probes)

    warnings = []
    if tail.passed:
        limit = delta_probe - eps_s
        for s, out in zip(lap.s_grid, lap.values):
            if abs(s) <= limit and out.verdict != CONVERGED:
                warnings.append(
                    f"numerical inconsistency: tails of exp(sx)a(x) decay at delta={delta_probe:g} "
                    f"but M(s; a) is {out.verdict} at s={s:g}"
                )
        if lap.delta_hat + lap.delta_resolution < limit:
            warnings.append(
                f"numerical inconsistency: tails decay at delta={delta_probe:g} but the "
                f"finiteness boundary was estimated at {lap.delta_hat:g}"
            )
        if not poly.passed:
            warnings.append(
                "numerical inconsistency: exponential tail decay holds but x^k a(x) does not vanish"
            )

    laplace_check = CheckResult(
        "laplace",
        laplace_ok,
        lap.to_dict()["values"],
        None if laplace_ok else {"delta_hat": _num(lap.delta_hat), "resolution": lap.delta_resolution},
        bool(lap.inconclusive),
    )
    checks = [positivity, laplace_check, tail, poly]
    evidence = []
    for c in checks:
        evidence.extend({"check": c.name, **row} for row in c.probes)
    return ConditionReport(
        weight=d.to_dict(),
        positivity_ok=bool(positivity.passed),
        laplace_ok=bool(laplace_ok),
        tail_decay_ok=bool(tail.passed),
        polynomial_tail_ok=bool(poly.passed),
        delta_hat=lap.delta_hat,
        delta_resolution=lap.delta_resolution,
        delta_probe=delta_probe,
        inconclusive=list(lap.inconclusive),
        warnings=warnings,
        notes=[_CONTINUITY_NOTE, _WITNESS_NOTE],
        checks=checks,
        probes=evidence,
    )
