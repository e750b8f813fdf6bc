"""Ext^1 of representations via path-sum projective presentations.

The extension functors at the vertices supply projective generators, so
any representation X sits in an exact sequence 0 -> K -> P0 -> X -> 0 with
P0 a finite direct sum of vertex extensions of free modules; then
Ext^1(X, Y) is the cokernel of the restriction Hom(P0, Y) -> Hom(K, Y).
"""

from __future__ import annotations

from .functors import adjunction_to_representation, s_functor
from .linalg import Matrix
from .modules import FGModule, ModuleMap
from .quiver import CyclicQuiverError
from .reps import (
    RepMorphism,
    Representation,
    rep_direct_sum,
    rep_hom_group,
    rep_kernel,
)


def projective_presentation(X: Representation) -> tuple[Representation, RepMorphism]:
    """A projective P0 with a surjection onto X, hitting every generator."""
    if not X.quiver.is_acyclic():
        raise CyclicQuiverError("projective presentations need a finite acyclic quiver")
    ring = X.ring
    pieces = []
    for v in X.quiver.vertices:
        g = X.vertex_modules[v].generators
        if g == 0:
            continue
        ext = s_functor(X.quiver, v, FGModule.free(ring, g))
        counit = adjunction_to_representation(
            ext,
            X,
            ModuleMap(
                FGModule.free(ring, g),
                X.vertex_modules[v],
                Matrix.identity(ring, g),
                check=False,
            ),
        )
        pieces.append((ext.representation, counit))
    if not pieces:
        Z = Representation.zero(X.quiver, ring)
        return Z, RepMorphism.zero(Z, X)
    P0, eps = pieces[0]
    for rep, counit in pieces[1:]:
        ds = rep_direct_sum(P0, rep)
        comps = {
            v: ModuleMap(
                ds.rep.vertex_modules[v],
                X.vertex_modules[v],
                eps.components[v].matrix.hstack(counit.components[v].matrix),
                check=False,
            )
            for v in X.quiver.vertices
        }
        P0 = ds.rep
        eps = RepMorphism(P0, X, comps, check=False)
    if not eps.is_surjective():
        raise AssertionError("counit assembly is not surjective (bug)")
    return P0, eps


def ext1_rep(X: Representation, Y: Representation) -> FGModule:
    """Ext^1(X, Y) as a finitely generated module.

    >>> from qrep.rings import ZZ
    >>> from qrep.quiver import Quiver
    >>> q = Quiver.line(1)
    >>> z2 = Representation(q, ZZ, {"v1": FGModule.cyclic(ZZ, 2)}, {})
    >>> z = Representation(q, ZZ, {"v1": FGModule.free(ZZ, 1)}, {})
    >>> ext1_rep(z2, z).describe()
    'Z/2'
    """
    if X.quiver != Y.quiver or X.ring != Y.ring:
        raise ValueError("Ext needs one quiver and one ring")
    P0, eps = projective_presentation(X)
    K, incl = rep_kernel(eps)
    hom_p = rep_hom_group(P0, Y)
    hom_k = rep_hom_group(K, Y)
    cols = []
    for h in hom_p.basis:
        coords = hom_k.coordinates(h @ incl)
        if coords is None:
            raise AssertionError("restriction left the hom group (bug)")
        cols.append(coords)
    restriction = Matrix.from_columns(X.ring, cols, hom_k.group.generators)
    return FGModule(
        X.ring,
        hom_k.group.generators,
        hom_k.group.relations.hstack(restriction),
    )


def is_in_perp(C: Representation, family) -> bool:
    """Finite-family surrogate for right-orthogonality: Ext^1(F, C) = 0
    for every member of the given test family."""
    return all(ext1_rep(F, C).is_zero() for F in family)
