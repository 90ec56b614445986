"""Minimal-variation embeddings of 2-D point clouds.

C++ core exposed through pybind11: dataset generation, a tanh feature map
with exact first- and second-order gradients, the three training energies
(SSL, graph Laplacian, Dirichlet), the orthonormality penalty, seeded SGD
training, the spectral oracle and linear probing.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
