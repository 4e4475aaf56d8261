"""Adjoint orbits of so(3,4): types, families and representatives."""

from .canonical import canonical_representative
from .classify import Decomposition, Summand, classify, classify_compact, decompose
from .families import (
    FAMILIES,
    INDECOMPOSABLE_TABLE,
    ClassificationIncomplete,
    FamilyLabel,
    enumerate_signature_types,
    family_label,
    family_type_sum,
)
from .proper import ProperFreeReport, Verdict, is_proper_free
from .jordan import IllConditionedError, SemisimpleNilpotentPair, jordan_chevalley
from .types import IndecomposableType, Kind, TypeSum, dimension, height, parse_type_sum, signature, type_sum

__all__ = [
    "FAMILIES",
    "INDECOMPOSABLE_TABLE",
    "ClassificationIncomplete",
    "Decomposition",
    "FamilyLabel",
    "IllConditionedError",
    "IndecomposableType",
    "Kind",
    "ProperFreeReport",
    "Verdict",
    "is_proper_free",
    "SemisimpleNilpotentPair",
    "Summand",
    "TypeSum",
    "canonical_representative",
    "classify",
    "classify_compact",
    "decompose",
    "dimension",
    "enumerate_signature_types",
    "family_label",
    "family_type_sum",
    "height",
    "jordan_chevalley",
    "parse_type_sum",
    "signature",
    "type_sum",
]
