"""Numerical toolkit for the radial focusing energy-critical wave equation in 5D.

Modules
-------
quadrature    adaptive Gauss-Kronrod integration, sqrt-singular and tail rules
profiles      self-similar profile ODE: integration, classification, inversion
nonlinearity  g(z), F(u), the ground state W and derived closed forms
radiation     radiation profiles of radial free waves: data maps, residues,
              asymptotic numbers, translation law, Born-level profile shifts
pdesim        leapfrog simulator for w = r^2 u in exterior regions with
              characteristic-ray, energy and virial diagnostics
verify        the reference-value verification pipeline (table, inequalities)
cli           command-line front end
"""

from . import nonlinearity, pdesim, profiles, quadrature, radiation, verify

__version__ = "0.1.0"

__all__ = ["nonlinearity", "pdesim", "profiles", "quadrature", "radiation", "verify"]
