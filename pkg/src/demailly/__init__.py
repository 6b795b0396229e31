"""Degree bounds for symbolic powers of point ideals, checked exactly.

Submodules: ``exactnum`` (integer roots and radical comparisons),
``bounds`` (the two degree bounds and their inequality chain),
``interpolation`` (alpha via rank of fat-point matrices over GF(p)),
``verify`` (experiments and sweeps) and ``cli``.
"""

__version__ = "0.1.0"
