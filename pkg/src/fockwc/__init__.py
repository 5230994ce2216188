"""Weighted composition operators on the Fock space: exact classification
of boundedness and of cyclic, convex-cyclic and supercyclic behaviour,
with a truncated-basis numerical verification engine and a small CLI.

Submodules:

* `symbols`   exact scalars, affine maps, multipliers, operator symbols
* `classify`  boundedness, norm bounds, dynamics verdicts, eigendata
* `fock`      orthonormal-basis numerics (matrices, residuals, norms)
* `dynamics`  orbits, convex-hull distances, ratio experiments
* `cli`       the `fockwc` command line tool
"""

__version__ = "0.1.0"
