"""L²(a) projection onto orthonormal polynomials and completeness diagnostics.

Residuals follow Parseval: r_n = ‖f‖²_a − Σ_{k≤n} c_k², which decreases to
zero exactly when the polynomials capture f.  For the lognormal weight the
function sin(2π ln x) is orthogonal to every polynomial, so its residual
stays at ‖f‖²_a however high the degree.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import DivergentIntegral, InconclusiveIntegral, InconsistencyError
from .orthopoly import build_basis
from .quadrature import QuadraturePlan

__all__ = [
    "TEST_FUNCTIONS",
    "SMOOTH_TEST_FUNCTIONS",
    "ProjectionResult",
    "inner_product",
    "project",
    "counterexample_audit",
    "annihilator_moments",
    "completeness_curve",
    "lognormal_annihilator",
]


def lognormal_annihilator(x):
    """sin(2π ln x) for x > 0, zero elsewhere."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(x > 0, np.sin(2.0 * np.pi * np.log(np.where(x > 0, x, 1.0))), 0.0)


TEST_FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "gauss_bump": lambda x: np.exp(-np.square(x)),
    "cauchy_bump": lambda x: 1.0 / (1.0 + np.square(x)),
    "abs": np.abs,
    "lognormal_annihilator": lognormal_annihilator,
}
SMOOTH_TEST_FUNCTIONS = ("sin", "cos", "gauss_bump", "cauchy_bump")


def _value(out, what):
    if out.divergent:
        raise DivergentIntegral(f"{what} diverged", out)
    if not out.converged:
        raise InconclusiveIntegral(f"{what} did not converge", out)
    return out.value


def inner_product(f, g, d, plan=None):
    """⟨f, g⟩_a = ∫ f g a dλ."""
    out = d.integrate(lambda x, lw: np.asarray(f(x)) * np.asarray(g(x)) * np.exp(lw), plan)
    return _value(out, "inner product")


@dataclass
class ProjectionResult:
    coefficients: np.ndarray
    f_norm_sq: float
    residuals: np.ndarray
    relative_residual: float
    tolerance: float
    clamped: list = field(default_factory=list)
    label: str = ""

    @property
    def max_degree(self):
        return len(self.coefficients) - 1

    def rows(self):
        """(n, c_n, r_n, r_n / ‖f‖²) for n = 0..N."""
        norm = self.f_norm_sq
        return [
            (n, float(c), float(r), float(r / norm) if norm > 0 else 0.0)
            for n, (c, r) in enumerate(zip(self.coefficients, self.residuals))
        ]

    def curve(self):
        return [(n, float(r)) for n, r in enumerate(self.residuals)]

    def partial_sum(self, basis, x, upto=None):
        """Σ_{k≤upto} c_k e_k(x)."""
        upto = self.max_degree if upto is None else upto
        e = basis.values(x, upto=upto)
        return np.tensordot(self.coefficients[: upto + 1], e, axes=1)

    def to_dict(self):
        return {
            "label": self.label,
            "coefficients": [float(c) for c in self.coefficients],
            "f_norm_sq": float(self.f_norm_sq),
            "residuals": [float(r) for r in self.residuals],
            "relative_residual": float(self.relative_residual),
            "tolerance": float(self.tolerance),
            "clamped": list(self.clamped),
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["n", "c_n", "r_n", "rel_residual"])
        for n, c, r, rel in self.rows():
            writer.writerow([n, repr(c), repr(r), repr(rel)])
        return buf.getvalue()


def project(f, b, plan=None, label=""):
    """Coefficients c_k = ⟨f, e_k⟩_a and Parseval residuals for basis ``b``.

    Residuals slightly below zero (down to -10 × tolerance) are clamped to
    zero and recorded in ``clamped``; anything lower raises
    ``InconsistencyError``.
    """
    plan = plan or QuadraturePlan()

    def kernel(x, logw):
        fx = np.broadcast_to(np.asarray(f(x), dtype=float), np.shape(x))
        e = b.scaled_values(x, logw)
        with np.errstate(under="ignore"):
            half = np.exp(0.5 * logw)
        return np.concatenate([(fx * fx * half * half)[None], fx * half * e])

    outs = b.weight.integrate_many(kernel, plan)
    f_norm_sq = _value(outs[0], "‖f‖²")
    coeffs = np.array([_value(o, f"coefficient {k}") for k, o in enumerate(outs[1:])])
    tol = max(plan.abs_tol, plan.rel_tol * f_norm_sq)
    raw = f_norm_sq - np.cumsum(coeffs * coeffs)
    residuals = raw.copy()
    clamped = []
    for n, r in enumerate(raw):
        if r < -10.0 * tol:
            raise InconsistencyError(
                f"residual r_{n} = {r:.3e} is below -10*tolerance ({-10 * tol:.3e}); "
                "quadrature error or basis drift is too large for this projection"
            )
        if r < 0:
            residuals[n] = 0.0
            clamped.append(n)
    rel = float(residuals[-1] / f_norm_sq) if f_norm_sq > 0 else 0.0
    return ProjectionResult(coeffs, f_norm_sq, residuals, rel, tol, clamped, label)


def counterexample_audit(b, plan=None):
    """Project sin(2π ln x) onto a basis built over lognormal(0, 1).

    Every coefficient vanishes while ‖f‖²_a ≈ 1/2, so the relative residual
    stays near 1: polynomials are not dense in L²(a) for this weight.
    """
    w = b.weight
    if w.family != "lognormal" or w.params != {"mu": 0.0, "sigma": 1.0} or w.base.kind != "lebesgue":
        raise ValueError(f"counterexample audit needs a lognormal(0,1) basis, got {w.label()}")
    if b.max_degree < 10:
        raise ValueError("counterexample audit needs a basis of degree >= 10")
    return project(lognormal_annihilator, b, plan, label="lognormal_annihilator")


def annihilator_moments(d, k_max, plan=None):
    """Raw moments ∫ x^k sin(2π ln x) a(x) dx next to ∫ x^k |sin(2π ln x)| a(x) dx.

    The signed integral is zero, so its absolute tolerance is scaled to the
    absolute one.  Returns (k, signed value, absolute value) for k = 0..k_max.
    """
    plan = plan or QuadraturePlan()
    rows = []
    for k in range(int(k_max) + 1):
        def kernel(x, lw, k=k, signed=True):
            fx = lognormal_annihilator(x)
            mag = np.exp(k * np.log(np.where(x > 0, x, 1.0)) + lw)
            return fx * mag if signed else np.abs(fx) * mag

        absolute = _value(d.integrate(lambda x, lw: kernel(x, lw, signed=False), plan),
                          f"|annihilator| moment {k}")
        scaled = replace(plan, abs_tol=max(plan.abs_tol, plan.rel_tol * absolute))
        signed = _value(d.integrate(kernel, scaled), f"annihilator moment {k}")
        rows.append((k, signed, absolute))
    return rows


def completeness_curve(f, d, max_degree, plan=None, basis=None):
    """Residual r_n against degree n for f in L²(d), n = 0..max_degree."""
    b = basis if basis is not None else build_basis(d, max_degree, plan)
    return project(f, b, plan).curve()
