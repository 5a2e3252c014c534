"""Exact computation of Dyck-path weighted sums and their identity web.

Modules: ``ring`` (exact arithmetic), ``qkz`` (paths, constant terms, the
component solve, partial sums), ``tee`` (the binomial determinant family and
its recurrences), ``hirota`` (octahedron recurrence, deformed determinants,
ASM enumeration), ``combin`` (lattice paths, loop diagrams, symmetric ASMs,
residue spot checks), ``cli`` (command line and verification suites).
"""

from .ring import Coeff, MultiPoly, RingMatrix, TauPoly, coeff_extract, det, pluecker_check, tau_qnumber

__all__ = [
    "Coeff",
    "MultiPoly",
    "RingMatrix",
    "TauPoly",
    "coeff_extract",
    "det",
    "pluecker_check",
    "tau_qnumber",
]

__version__ = "0.1.0"
