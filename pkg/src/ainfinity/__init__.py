"""Exact-arithmetic A-infinity algebras over positively graded quivers.

Structure verifiers (defining identities, strict unitality, morphisms,
modules), bar/cobar constructions with certified differentials, twisted
tensor products, homotopy transfer to minimal models, and an end-to-end
Koszul double-dual verification pipeline, all over exact rationals or a
prime field.
"""

from .fields import QQ, PrimeField, field_by_name
from .graded import BasisElement, GradedBimodule
from .linalg import Bound, ChainComplexView, HomologyReport, SparseMatrix, \
    homology, mapping_cone
from .ainf import (AInfinityAlgebra, AInfinityModule, AInfinityMorphism,
                   AInfinityStructure, CheckResult, DgAlgebra,
                   UnitAugmentation, identity_morphism, module_stasheff_check,
                   morphism_check, stasheff_check, unitality_check)
from .quiver import (Arrow, GradedQuiver, canonical_resolution,
                     enumerate_paths, kq_dim_table, path_algebra)
from .barcobar import (DgCoalgebra, bar_construct, cobar_construct,
                       enveloping_algebra, graded_dual_algebra, twisted_tensor)
from .transfer import Contraction, MinimalModel, build_contraction, minimal_model
from .pipeline import (TheoremReport, check_multiplicative_match,
                       compare_graded_dims, verify_theorem)

__all__ = [
    "QQ", "PrimeField", "field_by_name", "BasisElement", "GradedBimodule",
    "Bound", "ChainComplexView", "HomologyReport", "SparseMatrix", "homology",
    "mapping_cone", "AInfinityAlgebra", "AInfinityModule", "AInfinityMorphism",
    "AInfinityStructure", "CheckResult", "DgAlgebra", "UnitAugmentation",
    "identity_morphism", "module_stasheff_check", "morphism_check",
    "stasheff_check", "unitality_check", "Arrow", "GradedQuiver",
    "canonical_resolution", "enumerate_paths", "kq_dim_table", "path_algebra",
    "DgCoalgebra", "bar_construct", "cobar_construct", "enveloping_algebra",
    "graded_dual_algebra", "twisted_tensor", "Contraction", "MinimalModel",
    "build_contraction", "minimal_model", "TheoremReport",
    "check_multiplicative_match", "compare_graded_dims", "verify_theorem",
]

__version__ = "0.1.0"
