"""Exact arithmetic for q-deformed Witt vectors, necklace rings and their bridges."""

from .errors import QWittError
from .exactalg import MultiPolynomial, QPolynomial, QRationalFunction, TruncatedSeries, parse_expression
from .rings import CoeffRing, get_ring
from .witt import Deformation, GhostVector, WittContext, WittVector
from .necklace import NecklaceVector
from .lambdaf import LambdaElement
from .symfun import Alphabet, SymPoly

__all__ = [
    "QWittError",
    "MultiPolynomial",
    "QPolynomial",
    "QRationalFunction",
    "TruncatedSeries",
    "parse_expression",
    "CoeffRing",
    "get_ring",
    "Deformation",
    "GhostVector",
    "WittContext",
    "WittVector",
    "NecklaceVector",
    "LambdaElement",
    "Alphabet",
    "SymPoly",
]
__version__ = "0.1.0"
