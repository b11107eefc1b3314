"""Hard-edge correlation kernels for products of coupled Gaussian matrices.

Subpackages:

* :mod:`hek.specfun` - scalar special functions with scaled variants
* :mod:`hek.finite_n` - exact finite-size coupled-ensemble quantities
* :mod:`hek.hard_edge` - limiting kernels at the hard edge
* :mod:`hek.meijer` - Mellin-Barnes engine and comparison kernels
* :mod:`hek.mc` - Monte Carlo sampling of the matrix ensembles
* :mod:`hek.verify` - the verification-check registry
* :mod:`hek.cli` - command-line frontend
"""

__version__ = "0.1.0"
