"""Maximum matchings in intersection graphs of disks and boxes.

The algebraic route draws a random Tutte matrix over a prime field and
eliminates it along a geometric separator tree; the sparsifier first thins
high-depth instances to a bounded-depth subfamily. Every result can be
checked against the exact blossom matcher in ``geomatch.oracle``.
"""

from .geometry import Box, Disk, unit_disk
from .graph import IntersectionGraph, build_graph
from .matching import algebraic_maximum_matching
from .oracle import blossom_maximum_matching, validate_matching
from .sparsify import sparsify

__version__ = "0.1.0"

__all__ = [
    "Box",
    "Disk",
    "IntersectionGraph",
    "algebraic_maximum_matching",
    "blossom_maximum_matching",
    "build_graph",
    "sparsify",
    "unit_disk",
    "validate_matching",
]
