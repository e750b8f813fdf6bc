"""Exact-arithmetic toolkit for quiver representations.

Modules over Z, Q, and prime fields with Smith-form presentations; quivers
with a small textual language; the representation category at desk scale
(kernels, cokernels, the vertex adjunction); componentwise torsion/flat
classification, purity, pure closures and filtrations; cover candidates
with tri-state verdicts; interval decomposition over fields; and a
document-driven command line (`qrep`).

All values are immutable after construction and every operation is a pure
function of its inputs, so concurrent use needs no locking.
"""

from .rings import ZZ, QQ, GF, TorsionTheorySpec, ring_from_name
from .linalg import Lattice, Matrix, smith_normal_form
from .modules import (
    FGModule,
    ModuleMap,
    classify_module,
    has_section,
    hom_module,
    is_pure_submodule,
    map_factorization_data,
    pure_superset,
)
from .quiver import Path, Quiver, classify_quiver, parse_quiver
from .pathring import PathRingElement, act, annihilator_witness, nloop_representation
from .reps import (
    RepElement,
    RepMorphism,
    Representation,
    rep_cokernel,
    rep_direct_sum,
    rep_hom_group,
    rep_image,
    rep_kernel,
    sub_representation,
    subrep_generated_by,
)
from .functors import (
    adjunction_card_check,
    adjunction_to_module,
    adjunction_to_representation,
    s_functor,
    t_functor,
)
from .properties import (
    classify_rep,
    is_categorical_flat,
    is_componentwise_pure_subrep,
    is_injective_rep,
)
from .covers import (
    ModuleCoverData,
    RECIPES,
    build_recipe,
    cover_verdict,
    covers_isomorphic,
    default_test_family,
    factor_through,
    is_precover,
)
from .closures import pure_closure_rep, small_filtration
from .ext import ext1_rep, is_in_perp
from .barcode import decompose_interval, interval_representation
from .documents import Document, document_to_text, load_document

__all__ = [
    "ZZ",
    "QQ",
    "GF",
    "TorsionTheorySpec",
    "ring_from_name",
    "Lattice",
    "Matrix",
    "smith_normal_form",
    "FGModule",
    "ModuleMap",
    "classify_module",
    "has_section",
    "hom_module",
    "is_pure_submodule",
    "map_factorization_data",
    "pure_superset",
    "Path",
    "Quiver",
    "classify_quiver",
    "parse_quiver",
    "PathRingElement",
    "act",
    "annihilator_witness",
    "nloop_representation",
    "RepElement",
    "RepMorphism",
    "Representation",
    "rep_cokernel",
    "rep_direct_sum",
    "rep_hom_group",
    "rep_image",
    "rep_kernel",
    "sub_representation",
    "subrep_generated_by",
    "adjunction_card_check",
    "adjunction_to_module",
    "adjunction_to_representation",
    "s_functor",
    "t_functor",
    "classify_rep",
    "is_categorical_flat",
    "is_componentwise_pure_subrep",
    "is_injective_rep",
    "ModuleCoverData",
    "RECIPES",
    "build_recipe",
    "cover_verdict",
    "covers_isomorphic",
    "default_test_family",
    "factor_through",
    "is_precover",
    "pure_closure_rep",
    "small_filtration",
    "ext1_rep",
    "is_in_perp",
    "decompose_interval",
    "interval_representation",
    "Document",
    "document_to_text",
    "load_document",
]
