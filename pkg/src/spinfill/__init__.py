"""Branched-double-cover invariants of alternating links.

Computes checkerboard graphs and Goeritz forms from PD codes, spin-c
classes and correction terms of the double branched cover, spin-filling
obstructions, a graph-level handle-slide simulator, and plumbing-tree
normal forms.
"""

from . import chainmail, cli, diagram, exactalg, graphs, plumbing, spinc  # noqa: F401

__version__ = "0.1.0"
