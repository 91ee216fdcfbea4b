"""Entanglement dynamics of three coupled harmonic oscillators after a quench.

Modules: ``model`` (coupling matrix and normal modes), ``ermakov`` (scale
factors), ``gaussian`` (full and reduced vacuum kernels), ``entropy``
(purity, ladders, Renyi / von Neumann entropies), ``oracle`` (grid
discretizations used as independent checks) and the CLI pieces
``config``, ``pipeline``, ``sweep``, ``checks``, ``cli``.
"""

__version__ = "0.1.0"
