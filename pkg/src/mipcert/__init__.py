"""Constructive check that two non-isomorphic 2-groups have isomorphic group algebras over GF(2)."""

from .galgebra import AlgebraElement, GroupAlgebra, IdealFiltration, NotAUnit
from .gf2 import Gf2Matrix, Subspace, in_span, rref, solve, span
from .mipverify import (
    IsoCertificate,
    ProofStep,
    Report,
    algebra_invariant_fingerprint,
    brute_force_iso_search,
    build_certificate,
    close_group_basis,
    run_pipeline,
    verify_certificate,
    verify_identities,
    verify_nonisomorphism,
    verify_relations,
)
from .parsing import ParseError, parse_algebra_literal, parse_presentation_file
from .pcgroup import PcPresentation, PresentationError, build_G, build_H, consistency_check

__all__ = [
    "AlgebraElement", "GroupAlgebra", "IdealFiltration", "NotAUnit",
    "Gf2Matrix", "Subspace", "in_span", "rref", "solve", "span",
    "IsoCertificate", "ProofStep", "Report", "algebra_invariant_fingerprint",
    "brute_force_iso_search", "build_certificate", "close_group_basis", "run_pipeline",
    "verify_certificate", "verify_identities", "verify_nonisomorphism", "verify_relations",
    "ParseError", "parse_algebra_literal", "parse_presentation_file",
    "PcPresentation", "PresentationError", "build_G", "build_H", "consistency_check",
]
