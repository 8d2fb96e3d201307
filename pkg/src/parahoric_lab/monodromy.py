"""Numerical monodromy of ``d + A(z) dz/z`` around a small circle.

Along ``z = r e^{i phi}`` the flat sections satisfy ``dY/dphi = i A(z) Y``.
Counterclockwise transport of a constant form ``a`` is ``exp(2 pi i a)``; the
convention used for the exact formulas is ``exp(-2 pi i a)``, so by default
the inverse transport is returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import EvaluationOutsideTruncation, SchemaError, StepUnderflow
from .laurent import LaurentMatrix


@dataclass(frozen=True)
class NumericConnection:
    form: LaurentMatrix
    radius: float = 0.25
    tolerance: float = 1e-11

    def __post_init__(self):
        if not self.tolerance >= 1e-13:
            raise SchemaError("tolerance must be at least 1e-13", tolerance=self.tolerance)
        if not (0 < self.radius <= 1):
            raise EvaluationOutsideTruncation(
                "radius must lie in (0, 1] for a truncated series to be meaningful", radius=self.radius
            )
        if self.form.trunc is not None and self.form.trunc < 0:
            raise EvaluationOutsideTruncation(
                "no coefficient of the form is known at non-negative order", trunc=self.form.trunc
            )


@dataclass
class MonodromyResult:
    matrix: np.ndarray
    transport: np.ndarray
    steps: int
    rerun_deviation: float
    paper_convention: bool = True
    notes: list = field(default_factory=list)


def _transport(c: NumericConnection, tol: float) -> tuple[np.ndarray, int]:
    n = c.form.size
    r = c.radius

    def rhs(phi, y):
        z = r * complex(math.cos(phi), math.sin(phi))
        a = c.form.evaluate(z)
        return (1j * (a @ y.reshape(n, n))).reshape(-1)

    y0 = np.eye(n, dtype=complex).reshape(-1)
    sol = solve_ivp(rhs, (0.0, 2 * math.pi), y0, method="DOP853", rtol=tol, atol=tol)
    if not sol.success:
        raise StepUnderflow(f"integrator failed: {sol.message}", tol=tol)
    return sol.y[:, -1].reshape(n, n), len(sol.t) - 1


def integrate_monodromy(c: NumericConnection, paper_convention: bool = True) -> MonodromyResult:
    """Integrate the transport once around the circle of radius ``c.radius``.

    A second run at half the tolerance gives a consistency estimate
    (``rerun_deviation``, max-abs difference of the two transports).
    """
    T, steps = _transport(c, c.tolerance)
    T2, _ = _transport(c, c.tolerance / 2)
    dev = float(np.max(np.abs(T - T2)))
    M = np.linalg.inv(T2) if paper_convention else T2
    return MonodromyResult(M, T2, steps, dev, paper_convention)


def charpoly_numeric(m: np.ndarray) -> np.ndarray:
    """Characteristic polynomial coefficients (constant first, monic) by Faddeev-LeVerrier."""
    n = m.shape[0]
    coeffs = np.zeros(n + 1, dtype=complex)
    coeffs[n] = 1.0
    M = np.zeros_like(m, dtype=complex)
    ident = np.eye(n, dtype=complex)
    for k in range(1, n + 1):
        M = m @ M + coeffs[n - k + 1] * ident
        coeffs[n - k] = -np.trace(m @ M) / k
    return coeffs


@dataclass
class ConjugacyReport:
    equal: bool
    deviations: list
    coefficients_1: list
    coefficients_2: list


def compare_conjugacy(m1: np.ndarray, m2: np.ndarray, tol: float = 1e-8) -> tuple[bool, ConjugacyReport]:
    """Compare characteristic polynomials coefficient-wise.

    The deviation of a coefficient is ``|c1 - c2| / max(1, |c1|)``.
    """
    m1 = np.asarray(m1, dtype=complex)
    m2 = np.asarray(m2, dtype=complex)
    if m1.shape != m2.shape:
        return False, ConjugacyReport(False, [], [], [])
    p1, p2 = charpoly_numeric(m1), charpoly_numeric(m2)
    devs = [float(abs(a - b) / max(1.0, abs(a))) for a, b in zip(p1, p2)]
    ok = all(d <= tol for d in devs)
    return ok, ConjugacyReport(ok, devs, list(p1), list(p2))


__all__ = [
    "ConjugacyReport",
    "MonodromyResult",
    "NumericConnection",
    "charpoly_numeric",
    "compare_conjugacy",
    "integrate_monodromy",
]
