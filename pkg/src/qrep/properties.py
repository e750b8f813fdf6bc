"""Componentwise and categorical properties of representations.

Componentwise classes evaluate the module-level classifier at every
vertex.  Injectivity is characterized by vertexwise injectivity plus the
split outgoing map condition, but only on quivers certified
source-injective; elsewhere the conjunction is not a characterization and
the check refuses instead of guessing.  The categorical-flat criterion
(vertexwise flat plus pure assembled incoming maps) is applied to finite
acyclic quivers.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Matrix
from .modules import (
    ModuleClassification,
    ModuleMap,
    classify_module,
    has_section,
    is_pure_submodule,
    module_is_flat,
    module_is_injective,
)
from .quiver import CyclicQuiverError, classify_quiver
from .reps import Representation, RepMorphism, sub_representation
from .rings import TorsionTheorySpec


class NotSourceInjectiveError(ValueError):
    """Refusal: conditions (i)+(ii) only characterize injectivity on
    source-injective quivers; answering elsewhere would be unsound."""


class PropertyBError(ValueError):
    """Refusal: the product over outgoing arrows is not certified finite."""


@dataclass(frozen=True)
class RepClassification:
    per_vertex: dict
    torsion_cw: bool
    torsion_free_cw: bool
    flat_cw: bool
    torsion_subrep: Representation
    torsion_inclusion: RepMorphism


def classify_rep(X: Representation, tt: TorsionTheorySpec) -> RepClassification:
    """Componentwise classification plus the torsion subrepresentation.

    Arrow maps automatically restrict to vertexwise torsion submodules
    (the restriction is re-validated during construction), and the
    quotient is componentwise torsion free.
    """
    tt.validate_for(X.ring)
    per_vertex: dict[str, ModuleClassification] = {}
    gens = {}
    for v in X.quiver.vertices:
        cls = classify_module(X.vertex_modules[v], tt)
        per_vertex[v] = cls
        gens[v] = cls.torsion_inclusion.matrix
    tsub, tinc = sub_representation(X, gens)
    return RepClassification(
        per_vertex=per_vertex,
        torsion_cw=all(c.torsion for c in per_vertex.values()),
        torsion_free_cw=all(c.torsion_free for c in per_vertex.values()),
        flat_cw=all(c.flat for c in per_vertex.values()),
        torsion_subrep=tsub,
        torsion_inclusion=tinc,
    )


def is_componentwise_pure_subrep(M: Representation, gens: dict) -> bool:
    """Vertexwise purity of a subrepresentation given by ambient generators.

    Raises if the generators are not closed under the arrow maps (then
    they do not define a subrepresentation at all).
    """
    sub_representation(M, gens)  # validates closure
    for v in M.quiver.vertices:
        g = gens.get(v)
        if g is None:
            g = Matrix.zeros(M.ring, M.vertex_modules[v].generators, 0)
        if not is_pure_submodule(g, M.vertex_modules[v]):
            return False
    return True


def _assembled_outgoing(X: Representation, v: str) -> ModuleMap:
    """X(v) -> (direct sum over arrows out of v of X(t(a))), stacked."""
    ring = X.ring
    arrows = X.quiver.arrows_from(v)
    target = None
    mat = None
    for a in arrows:
        mod = X.vertex_modules[a.target]
        target = mod if target is None else target.direct_sum(mod)
        m = X.arrow_maps[a.name].matrix
        mat = m if mat is None else mat.vstack(m)
    if target is None:
        from .modules import FGModule

        target = FGModule.zero(ring)
        mat = Matrix.zeros(ring, 0, X.vertex_modules[v].generators)
    return ModuleMap(X.vertex_modules[v], target, mat, check=False)


def _assembled_incoming(X: Representation, v: str) -> ModuleMap:
    """(direct sum over arrows into v of X(s(a))) -> X(v), side by side."""
    ring = X.ring
    arrows = X.quiver.arrows_into(v)
    source = None
    mat = None
    for a in arrows:
        mod = X.vertex_modules[a.source]
        source = mod if source is None else source.direct_sum(mod)
        m = X.arrow_maps[a.name].matrix
        mat = m if mat is None else mat.hstack(m)
    if source is None:
        from .modules import FGModule

        source = FGModule.zero(ring)
        mat = Matrix.zeros(ring, X.vertex_modules[v].generators, 0)
    return ModuleMap(source, X.vertex_modules[v], mat, check=False)


def is_injective_rep(X: Representation) -> bool:
    """Conditions (i) and (ii) on a certified source-injective quiver.

    (i): every vertex module is injective.  (ii): at every vertex, the
    assembled map into the product over outgoing arrows is a splitting
    epimorphism.  Products are finite direct sums thanks to property (B),
    which is enforced.
    """
    cls = classify_quiver(X.quiver)
    if cls.source_injective != "yes":
        raise NotSourceInjectiveError(
            "quiver is not certified source-injective: "
            "vertexwise injectivity plus split outgoing maps does not "
            f"characterize injective representations here ({cls.reason})"
        )
    if not cls.property_b:
        raise PropertyBError(
            "the family fails the finite-outgoing-targets property, so the "
            "product over outgoing arrows is not a finite direct sum"
        )
    for v in X.quiver.vertices:
        if not module_is_injective(X.vertex_modules[v]):
            return False
    for v in X.quiver.vertices:
        if not X.quiver.arrows_from(v):
            continue
        psi = _assembled_outgoing(X, v)
        if not psi.is_surjective() or has_section(psi) is None:
            return False
    return True


def is_categorical_flat(X: Representation) -> bool:
    """Vertexwise flat with pure injective assembled incoming maps.

    The criterion is certified for finite acyclic quivers only; cyclic
    quivers are refused rather than answered.
    """
    if not X.quiver.is_acyclic():
        raise CyclicQuiverError(
            "the categorical-flat criterion is certified for finite acyclic quivers only"
        )
    for v in X.quiver.vertices:
        if not module_is_flat(X.vertex_modules[v]):
            return False
    for v in X.quiver.vertices:
        phi = _assembled_incoming(X, v)
        if phi.source.is_zero():
            continue
        if not phi.is_injective():
            return False
        if not is_pure_submodule(phi.matrix, X.vertex_modules[v]):
            return False
    return True
