"""Open PT-symmetric XXX chain: Bethe ansatz, thermodynamic closed forms and an ED oracle."""

from .core import (BoundaryFields, ChainSpec, DomainError, PhaseLabel, Reference,
                   classify_phase, fields_from_h, fields_from_xi, flip_fields, pt_fields,
                   spin_flip)

__version__ = "0.1.0"

__all__ = [
    "BoundaryFields", "ChainSpec", "DomainError", "PhaseLabel", "Reference",
    "classify_phase", "fields_from_h", "fields_from_xi", "flip_fields", "pt_fields",
    "spin_flip", "__version__",
]
