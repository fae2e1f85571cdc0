"""Chromatic polynomials, stable partitions and coloring functors."""

from .chromatic import IntPolynomial, StVector, chromatic_number, chromatic_polynomial, st_vector
from .errors import ChromaError, DomainError, ParseError, PreconditionError, ResourceError, StructuralError
from .graph import FiniteGraph, GraphHom, Injection
from .graph6 import emit_graph6, parse_graph6
from .partitions import Partition, enumerate_stable_partitions

__version__ = "0.1.0"
