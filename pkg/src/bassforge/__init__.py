"""Graphs of groups: normal forms, moves, trees of cylinders, groups of twists
and infiniteness criteria for outer automorphism groups."""

from .verdict import Certificate, Verdict
from .gog import (Composite, Edge, FamilyMember, GraphOfGroups, Inclusion, JsjAnnotation, Opaque,
                  OrbifoldDescriptor, Vertex, collapse, validate)
from .textformat import load, parse, serialize

__all__ = [
    "Certificate", "Verdict", "Composite", "Edge", "FamilyMember", "GraphOfGroups", "Inclusion",
    "JsjAnnotation", "Opaque", "OrbifoldDescriptor", "Vertex", "collapse", "validate", "load", "parse",
    "serialize",
]

__version__ = "0.1.0"
