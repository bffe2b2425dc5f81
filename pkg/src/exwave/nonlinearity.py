"""Scalar nonlinearity g(z), the power nonlinearity F(u), and the ground state.

Everything here is closed-form; these functions serve as oracles for the ODE
and PDE solvers, so no numerical differentiation is used anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .quadrature import Integrand, integrate_tail

__all__ = [
    "SIGMA4",
    "GConstants",
    "g",
    "dg",
    "F",
    "g_constants",
    "ground_state",
    "ground_state_energy",
    "ground_state_residual",
    "m_k",
]

# area of the unit 4-sphere, kept as the exact expression
SIGMA4 = 8.0 * np.pi ** 2 / 3.0


def F(u):
    """Focusing power nonlinearity |u|^(4/3) u (odd)."""
    u = np.asarray(u, dtype=float)
    out = np.abs(u) ** (4.0 / 3.0) * u
    return out if out.ndim else float(out)


def g(z):
    """g(z) = 2 z - |z|^(4/3) z, the weight in the characteristic-ray integral."""
    z = np.asarray(z, dtype=float)
    out = 2.0 * z - np.abs(z) ** (4.0 / 3.0) * z
    return out if out.ndim else float(out)


def dg(z):
    """Derivative g'(z) = 2 - (7/3)|z|^(4/3)."""
    z = np.asarray(z, dtype=float)
    out = 2.0 - (7.0 / 3.0) * np.abs(z) ** (4.0 / 3.0)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class GConstants:
    """Closed-form landmarks of g: its positive zero, argmax and maximum."""

    z0: float
    z_max: float
    g_max: float


def g_constants() -> GConstants:
    z_max = (6.0 / 7.0) ** 0.75
    return GConstants(z0=2.0 ** 0.75, z_max=z_max, g_max=(8.0 / 7.0) * z_max)


def ground_state(r, lam: float = 1.0):
    """Value and radial derivative of the rescaled ground state W_lam.

    W(x) = (1 + |x|^2/15)^(-3/2) and W_lam(r) = lam^(-3/2) W(r/lam).
    Returns the pair (W_lam(r), d/dr W_lam(r)).
    """
    if lam <= 0:
        raise ValueError("scale lambda must be positive")
    r = np.asarray(r, dtype=float)
    x = r / lam
    q = 1.0 + x * x / 15.0
    w = lam ** (-1.5) * q ** (-1.5)
    dw = -lam ** (-2.5) * (x / 5.0) * q ** (-2.5)
    if w.ndim:
        return w, dw
    return float(w), float(dw)


def ground_state_residual(r: float) -> float:
    """-W'' - (4/r) W' - F(W) at radius r > 0; identically zero for the exact W."""
    if r <= 0:
        raise ValueError("radius must be positive")
    q = 1.0 + r * r / 15.0
    w = q ** (-1.5)
    dw = -(r / 5.0) * q ** (-2.5)
    d2w = -0.2 * q ** (-2.5) + (r * r / 15.0) * q ** (-3.5)
    return float(-d2w - 4.0 / r * dw - F(w))


def ground_state_energy(tol: float = 1e-10) -> float:
    """Conserved energy of the static pair (W, 0).

    E = sigma4 * int_0^inf (|W'|^2/2 - (3/10) W^(10/3)) rho^4 drho.  The
    integrand decays like rho^-4, declared explicitly for the tail rule.
    """
    def density(rho):
        w, dw = ground_state(rho)
        return (0.5 * dw * dw - 0.3 * w ** (10.0 / 3.0)) * rho ** 4

    return SIGMA4 * integrate_tail(Integrand(density, decay=4.0), 0.0, tol)


def m_k(z_lo: float, z_hi: float) -> float:
    """min of g over [z_lo, z_hi] taken at the endpoints.

    Valid because g is monotone between consecutive breakpoints of the
    z-ladder used by the verification table.
    """
    if not (0.0 <= z_lo < z_hi):
        raise ValueError("need 0 <= z_lo < z_hi")
    return min(g(z_lo), g(z_hi))
