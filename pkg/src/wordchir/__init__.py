"""Decide or bound chirality of words in free groups."""
from .classify import ClassifyOptions, Status, Verdict, census, classify, engel
from .groups import FiniteGroup, catalog, image, is_inverse_closed, surjectivity_check
from .morphism import Endomorphism, InversionCertificate, apply, compose, named_family, verify_certificate
from .whitehead import Indeterminate, aut_inverts, minimize, orbit_equivalent
from .words import Word, concat, exponent_vector, invert, parse, reduce

__version__ = "0.1.0"

__all__ = [
    "ClassifyOptions", "Endomorphism", "FiniteGroup", "Indeterminate", "InversionCertificate",
    "Status", "Verdict", "Word", "apply", "aut_inverts", "catalog", "census", "classify",
    "compose", "concat", "engel", "exponent_vector", "image", "invert", "is_inverse_closed",
    "minimize", "named_family", "orbit_equivalent", "parse", "reduce", "surjectivity_check",
    "verify_certificate",
]
