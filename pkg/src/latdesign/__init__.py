"""Exact classification and verification of strong-design lattices.

Library layout:

* exactmath   - rational matrices, polynomials, rational root extraction
* moments     - moment constants and the count/dual-class linear systems
* feasibility - dimension scans and the brute-force oracle
* dualclass   - elimination polynomial, rules, classification certificates
* lattice     - Gram matrices, minimal vectors, design verification
* cli         - the latdesign command
"""

from ._kernels import BACKEND, HAVE_COMPILED
from .dualclass import classify, run_classification
from .feasibility import brute_force_check, scan
from .lattice import (GramMatrix, even_sublattice, minimal_vectors,
                      moment_profile, verify_design)
from .moments import DesignProblem

__version__ = "0.1.0"
__all__ = [
    "BACKEND", "HAVE_COMPILED", "__version__",
    "DesignProblem", "scan", "brute_force_check",
    "classify", "run_classification",
    "GramMatrix", "minimal_vectors", "verify_design", "moment_profile",
    "even_sublattice",
]
