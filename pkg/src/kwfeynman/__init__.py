r"""
Exact Feynman-graph computations for the Kontsevich matrix integral and the
KdV / Virasoro constraints on its partition function.
"""
__version__ = "0.1.0"
