"""Constant dimension subspace codes: finite fields, rank-metric codes,
multilevel-type and mixed dimension constructions, and exact lower bounds."""

from .errors import (FieldDivisionError, InvalidParameterError, MissingDataError,
                     ResourceError, UnsupportedDiagramError)
from .field import FieldSpec, extension, field_new

__version__ = "0.1.0"

__all__ = ["FieldSpec", "extension", "field_new", "FieldDivisionError", "InvalidParameterError",
           "MissingDataError", "ResourceError", "UnsupportedDiagramError", "__version__"]
