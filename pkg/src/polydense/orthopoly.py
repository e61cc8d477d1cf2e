"""Orthonormal polynomials for a weight via the discretized Stieltjes procedure.

The sequence e_0, e_1, ... is what Gram-Schmidt produces from 1, x, x², ...
in L²(a), but it is generated from the three-term recurrence

    x e_k = β_{k+1} e_{k+1} + α_k e_k + β_k e_{k−1},

whose coefficients are inner products computed by adaptive quadrature.
Inside integrals the polynomials are carried as e_k(x)·√a(x), which keeps
them representable on heavy-tailed weights where e_k(x) alone overflows.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, DivergentIntegral, InconclusiveIntegral
from .measure import total_mass
from .quadrature import QuadraturePlan

__all__ = [
    "MAX_DEGREE",
    "AUDIT_REQUIRED_ABOVE",
    "OrthonormalBasis",
    "build_basis",
    "eval_basis",
    "orthogonality_audit",
    "monomial_coefficients",
]

MAX_DEGREE = 40
AUDIT_REQUIRED_ABOVE = 20
DEFAULT_DRIFT_TOL = 1e-8
_DEGENERACY_FACTOR = 1e3 * np.finfo(float).eps


def _recurrence(x, alpha, beta, norm0, upto, start=None):
    """Rows e_0..e_upto at ``x``, each multiplied by ``start``/norm0 at degree 0."""
    x = np.asarray(x, dtype=float)
    out = np.empty((upto + 1,) + x.shape)
    out[0] = (np.ones_like(x) if start is None else start) / norm0
    if upto >= 1:
        out[1] = (x - alpha[0]) * out[0] / beta[0]
    for k in range(1, upto):
        out[k + 1] = ((x - alpha[k]) * out[k] - beta[k - 1] * out[k - 1]) / beta[k]
    return out


@dataclass
class OrthonormalBasis:
    """Recurrence data for e_0..e_N; ``beta[k-1]`` holds β_k."""

    weight: object
    max_degree: int
    alpha: np.ndarray
    beta: np.ndarray
    norm0: float
    orthogonality_drift: float = math.nan
    drift_tol: float = DEFAULT_DRIFT_TOL
    audit_rows: list = field(default_factory=list, repr=False)

    @property
    def valid(self):
        return math.isfinite(self.orthogonality_drift) and self.orthogonality_drift <= self.drift_tol

    def values(self, x, upto=None):
        """Matrix of e_k(x) for k = 0..upto (default max_degree)."""
        upto = self.max_degree if upto is None else upto
        return _recurrence(x, self.alpha, self.beta, self.norm0, upto)

    def scaled_values(self, x, logw, upto=None):
        """Matrix of e_k(x)·exp(logw/2), i.e. the basis times √a."""
        upto = self.max_degree if upto is None else upto
        with np.errstate(under="ignore"):
            start = np.exp(0.5 * np.asarray(logw, dtype=float))
        return _recurrence(x, self.alpha, self.beta, self.norm0, upto, start)

    def __call__(self, k, x):
        return eval_basis(self, k, x)

    def leading_coefficients(self):
        """Coefficient of x^k in e_k, k = 0..N."""
        lead = np.empty(self.max_degree + 1)
        lead[0] = 1.0 / self.norm0
        for k in range(1, self.max_degree + 1):
            lead[k] = lead[k - 1] / self.beta[k - 1]
        return lead

    def to_dict(self):
        return {
            "family": self.weight.family,
            "weight": self.weight.to_dict(),
            "max_degree": self.max_degree,
            "alpha": [float(a) for a in self.alpha],
            "beta": [float(b) for b in self.beta],
            "norm0": float(self.norm0),
            "orthogonality_drift": float(self.orthogonality_drift)
            if math.isfinite(self.orthogonality_drift) else None,
            "drift_tol": self.drift_tol,
            "valid": self.valid,
        }

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), **kw)


def _converged_values(outcomes, what):
    for out in outcomes:
        if out.divergent:
            raise DivergentIntegral(f"{what} diverged", out)
        if not out.converged:
            raise InconclusiveIntegral(f"{what} did not converge", out)
    return [out.value for out in outcomes]


def build_basis(d, max_degree, plan=None, *, drift_tol=DEFAULT_DRIFT_TOL, audit=True):
    """Orthonormal polynomials e_0..e_N for the weight ``d``.

    Parameters
    ----------
    d : WeightDensity
    max_degree : int
        N, at most ``MAX_DEGREE``.
    plan : QuadraturePlan, optional
    drift_tol : float
        Largest |<e_i, e_j> - δ_ij| for which the basis counts as valid.
    audit : bool
        Run :func:`orthogonality_audit` after construction.  Mandatory
        above degree ``AUDIT_REQUIRED_ABOVE``.

    Returns
    -------
    OrthonormalBasis

    Raises
    ------
    DegeneracyError
        If some β_{k+1} vanishes relative to the recurrence scale, i.e. the
        weight has at most k+1 support points or precision is exhausted.
    """
    plan = plan or QuadraturePlan()
    n = int(max_degree)
    if not 0 <= n <= MAX_DEGREE:
        raise ValueError(f"max_degree must lie in [0, {MAX_DEGREE}], got {max_degree!r}")
    if not audit and n > AUDIT_REQUIRED_ABOVE:
        raise ValueError(f"the orthogonality audit is mandatory above degree {AUDIT_REQUIRED_ABOVE}")
    norm0 = math.sqrt(total_mass(d, plan))
    alpha = np.zeros(n)
    beta = np.zeros(n)
    scale = 0.0
    for k in range(n):
        def first(x, logw, k=k):
            ek = _recurrence(x, alpha, beta, norm0, k, np.exp(0.5 * logw))[k]
            sq = ek * ek
            return np.stack([x * sq, x * x * sq])

        a_k, xnorm_sq = _converged_values(d.integrate_many(first, plan), f"recurrence integral at degree {k}")
        alpha[k] = a_k

        def second(x, logw, k=k):
            rows = _recurrence(x, alpha, beta, norm0, k, np.exp(0.5 * logw))
            p = (x - alpha[k]) * rows[k]
            if k >= 1:
                p = p - beta[k - 1] * rows[k - 1]
            return p * p

        (b_sq,) = _converged_values([d.integrate(second, plan)], f"norm integral at degree {k + 1}")
        b_next = math.sqrt(max(b_sq, 0.0))
        scale = max(scale, abs(a_k), math.sqrt(max(xnorm_sq, 0.0)), float(np.max(beta[:k], initial=0.0)))
        if not b_next > _DEGENERACY_FACTOR * scale:
            raise DegeneracyError(
                f"beta_{k + 1} = {b_next:.3e} vanishes relative to scale {scale:.3e}: "
                f"{d.label()} cannot carry a degree-{k + 1} orthonormal polynomial",
                degree=k + 1,
                beta=b_next,
            )
        beta[k] = b_next
    basis = OrthonormalBasis(d, n, alpha, beta, norm0, drift_tol=drift_tol)
    if audit:
        orthogonality_audit(basis, plan)
    return basis


def eval_basis(b, k, x):
    """e_k(x) by forward recurrence."""
    k = int(k)
    if not 0 <= k <= b.max_degree:
        raise IndexError(f"degree {k} outside 0..{b.max_degree}")
    out = b.values(x, upto=k)[k]
    return float(out) if np.ndim(out) == 0 else out


def orthogonality_audit(b, plan=None):
    """max over i <= j <= N of |<e_i, e_j>_a - δ_ij|; stored on ``b``."""
    plan = plan or QuadraturePlan()
    n = b.max_degree
    iu, ju = np.triu_indices(n + 1)

    def gram(x, logw):
        e = b.scaled_values(x, logw)
        return e[iu] * e[ju]

    values = _converged_values(b.weight.integrate_many(gram, plan), "orthogonality audit")
    target = (iu == ju).astype(float)
    dev = np.abs(np.asarray(values) - target)
    b.audit_rows = [(int(i), int(j), float(v)) for i, j, v in zip(iu, ju, values)]
    b.orthogonality_drift = float(dev.max())
    return b.orthogonality_drift


def monomial_coefficients(b):
    """Lower-triangular matrix C with e_k(x) = Σ_j C[k, j] x^j."""
    n = b.max_degree
    c = np.zeros((n + 1, n + 1))
    c[0, 0] = 1.0 / b.norm0
    if n >= 1:
        c[1, 1:] = c[0, :-1] / b.beta[0]
        c[1] -= b.alpha[0] * c[0] / b.beta[0]
    for k in range(1, n):
        shifted = np.zeros(n + 1)
        shifted[1:] = c[k, :-1]
        c[k + 1] = (shifted - b.alpha[k] * c[k] - b.beta[k - 1] * c[k - 1]) / b.beta[k]
    return c
