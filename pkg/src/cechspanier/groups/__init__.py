"""Finitely presented groups: words, Smith normal form, coset enumeration,
Tietze simplification, normal-closure membership and covering complexes."""

from .cosets import CosetTable, IncompleteTableError, todd_coxeter
from .covering import Covering, build_covering_complex, verify_covering
from .membership import (IN, NOT_IN, UNKNOWN, Budget, MembershipVerdict, NormalSubgroup,
                         membership, mutual_membership, verify_certificate)
from .presentation import (EdgePathGroup, GroupPresentation, Homomorphism, edge_path_group,
                           induced_hom, word_of_loop)
from .snf import smith_normal_form
from .tietze import simplify
from .words import Word, free_reduce

__all__ = [
    "CosetTable", "IncompleteTableError", "todd_coxeter",
    "Covering", "build_covering_complex", "verify_covering",
    "IN", "NOT_IN", "UNKNOWN", "Budget", "MembershipVerdict", "NormalSubgroup",
    "membership", "mutual_membership", "verify_certificate",
    "EdgePathGroup", "GroupPresentation", "Homomorphism", "edge_path_group",
    "induced_hom", "word_of_loop", "smith_normal_form", "simplify", "Word", "free_reduce",
]
