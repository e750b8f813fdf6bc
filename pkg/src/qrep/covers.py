"""Lifting problems, precover/cover verdicts, and the explicit cover recipes.

A precover check factors a generating set of Hom(F', X) through the
candidate; the cover check solves the endomorphism equation exactly.  The
verdict is tri-state: certainty comes from a trivial or unipotent solution
lattice, or from an explicit non-isomorphism witness; everything else is
Unknown with the sampling bound recorded.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .linalg import Matrix
from .modules import (
    FGModule,
    ModuleMap,
    map_factorization_data,
    module_is_flat,
    is_pure_submodule,
)
from .properties import classify_rep, is_categorical_flat
from .quiver import Quiver
from .reps import RepMorphism, Representation, _morphism_system, rep_hom_group
from .rings import TorsionTheorySpec


class RecipeError(ValueError):
    """Missing or inconsistent auxiliary data for a cover recipe."""


# ---------------------------------------------------------------------------
# Lifting
# ---------------------------------------------------------------------------


def factor_through(phi: RepMorphism, psi: RepMorphism) -> RepMorphism | None:
    """f with psi∘f = phi, by the exact Diophantine/linear solver, or None."""
    if phi.target != psi.target:
        raise ValueError("morphisms must share a target")
    Y, Xp = phi.source, psi.source
    sys, vars_by_vertex, _ = _morphism_system(Y, Xp)
    for v in Y.quiver.vertices:
        tgt = phi.target.vertex_modules[v]
        sys.add_constraint(
            [(1, psi.components[v].matrix, vars_by_vertex[v], None)],
            rhs=phi.components[v].matrix,
            mod=tgt.relations if tgt.relations.ncols else None,
        )
    sol = sys.solve()
    if sol is None:
        return None
    comps = {
        v: ModuleMap(Y.vertex_modules[v], Xp.vertex_modules[v], sol[v], check=False)
        for v in Y.quiver.vertices
    }
    return RepMorphism(Y, Xp, comps)


# ---------------------------------------------------------------------------
# Precovers
# ---------------------------------------------------------------------------


CLASS_KINDS = ("flat_cw", "torsion_free_cw", "flat_categorical")


def _in_class(F: Representation, kind: str, tt: TorsionTheorySpec | None) -> bool:
    if kind == "flat_cw":
        return classify_rep(F, tt or _default_tt(F.ring)).flat_cw
    if kind == "torsion_free_cw":
        return classify_rep(F, tt or _default_tt(F.ring)).torsion_free_cw
    if kind == "flat_categorical":
        return is_categorical_flat(F)
    raise ValueError(f"unknown class kind {kind!r}")


def _default_tt(ring) -> TorsionTheorySpec:
    return TorsionTheorySpec.trivial() if ring.is_field else TorsionTheorySpec.classical()


@dataclass(frozen=True)
class MemberReport:
    index: int
    description: str
    in_class: bool
    generators_tested: int
    lifted: bool


@dataclass(frozen=True)
class PrecoverReport:
    passed: bool
    kind: str
    family_description: str
    members: tuple
    failure_witness: RepMorphism | None = None
    lift_certificates: tuple = ()


def is_precover(
    psi: RepMorphism,
    family,
    kind: str = "flat_cw",
    tt: TorsionTheorySpec | None = None,
    family_description: str = "(ad hoc family)",
) -> PrecoverReport:
    """Factor a generating set of Hom(F', target) through psi, per member.

    A member outside the stated class is reported with a warning flag but
    still tested.  Pass returns the lifting certificates; Fail carries the
    first unliftable generator.
    """
    members = []
    certificates = []
    for idx, F in enumerate(family):
        in_class = _in_class(F, kind, tt)
        H = rep_hom_group(F, psi.target)
        lifted_all = True
        for b in H.basis:
            lift = factor_through(b, psi)
            if lift is None:
                members.append(
                    MemberReport(idx, F.describe(), in_class, len(H.basis), False)
                )
                return PrecoverReport(
                    passed=False,
                    kind=kind,
                    family_description=family_description,
                    members=tuple(members),
                    failure_witness=b,
                )
            certificates.append((idx, b, lift))
        members.append(MemberReport(idx, F.describe(), in_class, len(H.basis), lifted_all))
    return PrecoverReport(
        passed=True,
        kind=kind,
        family_description=family_description,
        members=tuple(members),
        lift_certificates=tuple(certificates),
    )


# ---------------------------------------------------------------------------
# Cover verdicts
# ---------------------------------------------------------------------------


def endomorphism_obstruction_basis(psi: RepMorphism) -> list[RepMorphism]:
    """Generators of {g : End(source) : psi∘g = 0}, dropping zero classes.

    The solution set of psi∘f = psi is exactly identity + this lattice.
    """
    Xp = psi.source
    sys, vars_by_vertex, _ = _morphism_system(Xp, Xp)
    for v in Xp.quiver.vertices:
        tgt = psi.target.vertex_modules[v]
        sys.add_constraint(
            [(1, psi.components[v].matrix, vars_by_vertex[v], None)],
            mod=tgt.relations if tgt.relations.ncols else None,
        )
    _, lattice = sys.solution_set()
    basis = []
    for j in range(lattice.gens.ncols):
        flat = lattice.gens.column(j)
        comps = {}
        for var in sys.vars:
            rows = [
                [flat[var.index(i, k)] for k in range(var.ncols)] for i in range(var.nrows)
            ]
            comps[var.name] = ModuleMap(
                Xp.vertex_modules[var.name],
                Xp.vertex_modules[var.name],
                Matrix(Xp.ring, rows, var.ncols),
                check=False,
            )
        g = RepMorphism(Xp, Xp, comps, check=False)
        if not g.is_zero_map():
            basis.append(g)
    return basis


@dataclass(frozen=True)
class CoverVerdict:
    status: str  # "is_cover" | "not_cover" | "unknown"
    certificate: str
    witness: RepMorphism | None
    sample_bound: int
    samples_tried: int
    test_family: str
    precover: PrecoverReport

    @property
    def is_cover(self):
        return self.status == "is_cover"


def cover_verdict(
    psi: RepMorphism,
    family,
    kind: str = "flat_cw",
    tt: TorsionTheorySpec | None = None,
    sample_bound: int = 8,
    seed: int | None = None,
    family_description: str = "(ad hoc family)",
) -> CoverVerdict:
    """Precover check plus the exact endomorphism analysis.

    Solutions of psi∘f = psi form identity + L.  L = 0 certifies a cover
    outright; if all pairwise composites of L-generators vanish, every
    id + g is unipotent, hence an automorphism, which also certifies.
    Otherwise sampled elements id + c*g are tested for isomorphism: the
    first failure is a NotCover witness (re-verified); exhausting the
    sample budget yields Unknown.
    """
    pre = is_precover(psi, family, kind, tt, family_description)
    if not pre.passed:
        return CoverVerdict(
            status="not_cover",
            certificate="precover test failed",
            witness=pre.failure_witness,
            sample_bound=sample_bound,
            samples_tried=0,
            test_family=family_description,
            precover=pre,
        )
    basis = endomorphism_obstruction_basis(psi)
    if not basis:
        return CoverVerdict(
            status="is_cover",
            certificate="endomorphism solution coset is exactly {identity}",
            witness=None,
            sample_bound=sample_bound,
            samples_tried=0,
            test_family=family_description,
            precover=pre,
        )
    if all((g @ h).is_zero_map() for g in basis for h in basis):
        return CoverVerdict(
            status="is_cover",
            certificate=(
                "all products of obstruction generators vanish: every solution "
                "of the endomorphism equation is unipotent, hence an automorphism"
            ),
            witness=None,
            sample_bound=sample_bound,
            samples_tried=0,
            test_family=family_description,
            precover=pre,
        )
    identity = RepMorphism.identity(psi.source)
    order = list(range(len(basis)))
    if seed is not None:
        random.Random(seed).shuffle(order)
    tried = 0
    for j in order:
        for c in (1, -1, 2, -2):
            if tried >= sample_bound:
                break
            tried += 1
            f = identity + basis[j].scale(c)
            # re-verify the defining equation before judging
            if not (psi @ f).equals(psi):
                raise AssertionError("solver produced a non-solution; this is a bug")
            if not f.is_isomorphism():
                return CoverVerdict(
                    status="not_cover",
                    certificate="witness endomorphism verified: composes to psi, not an isomorphism",
                    witness=f,
                    sample_bound=sample_bound,
                    samples_tried=tried,
                    test_family=family_description,
                    precover=pre,
                )
    return CoverVerdict(
        status="unknown",
        certificate=f"all {tried} sampled endomorphisms were automorphisms",
        witness=None,
        sample_bound=sample_bound,
        samples_tried=tried,
        test_family=family_description,
        precover=pre,
    )


def covers_isomorphic(psi1: RepMorphism, psi2: RepMorphism) -> bool:
    """Compare two covers of one object via the canonical comparison maps.

    For verified covers this decides isomorphism-over-the-base; the maps
    are produced by the lifting solver and their round trips are tested
    exactly.
    """
    f = factor_through(psi1, psi2)
    g = factor_through(psi2, psi1)
    if f is None or g is None:
        return False
    return (g @ f).is_isomorphism() and (f @ g).is_isomorphism()


# ---------------------------------------------------------------------------
# Test families
# ---------------------------------------------------------------------------


def default_test_family(
    quiver: Quiver,
    ring,
    max_rank: int = 2,
    entries: tuple = (0, 1),
    kind: str | None = None,
    tt: TorsionTheorySpec | None = None,
) -> list[Representation]:
    """Free-vertex representations with bounded rank and matrix entries.

    Over the integers these are componentwise flat and torsion free at
    once.  ``kind`` filters to a class (e.g. categorical flat members
    only).  The enumeration order is deterministic.
    """
    out = []
    n = len(quiver.vertices)
    for ranks in itertools.product(range(max_rank + 1), repeat=n):
        dims = dict(zip(quiver.vertices, ranks))
        mods = {v: FGModule.free(ring, dims[v]) for v in quiver.vertices}
        arrow_shapes = [(a, dims[a.target], dims[a.source]) for a in quiver.arrows]
        choice_lists = []
        for _, r, c in arrow_shapes:
            cells = r * c
            choice_lists.append(list(itertools.product(entries, repeat=cells)))
        for combo in itertools.product(*choice_lists):
            maps = {}
            for (a, r, c), flat in zip(arrow_shapes, combo):
                maps[a.name] = ModuleMap(
                    mods[a.source],
                    mods[a.target],
                    Matrix(ring, [flat[i * c : (i + 1) * c] for i in range(r)], c),
                    check=False,
                )
            rep = Representation(quiver, ring, mods, maps)
            if kind is None or _in_class(rep, kind, tt):
                out.append(rep)
    return out


# ---------------------------------------------------------------------------
# Recipes
# ---------------------------------------------------------------------------


RECIPES = (
    "a2-torsion-free",
    "a2-flat",
    "a2-flat-cw",
    "a2-identity",
    "a3-flat",
    "a3-flat-cw",
)


class ModuleCoverData:
    """Module-level inputs for the cover recipes.

    ``phi`` is a given module cover F -> M (these are inputs, never
    computed: the genuine covers of torsion modules are not finitely
    generated).  The kernel presentation is derived from phi.  Optional
    pieces: ``aux_cover`` t: G -> F with phi∘t = 0 (a cover of the kernel
    composed with its inclusion) and ``cotorsion_envelope`` i: F -> C with
    C flat and i injective.
    """

    def __init__(
        self,
        phi: ModuleMap,
        kind: str = "flat",
        aux_cover: ModuleMap | None = None,
        cotorsion_envelope: ModuleMap | None = None,
    ):
        if kind not in ("flat", "torsion_free"):
            raise RecipeError(f"unknown cover kind {kind!r}")
        fact = map_factorization_data(phi)
        if not (phi @ fact.kernel_inclusion).is_zero_map():
            raise AssertionError("kernel inclusion does not annihilate (bug)")
        if aux_cover is not None:
            if aux_cover.target != phi.source:
                raise RecipeError("aux_cover must land in the cover module")
            if not (phi @ aux_cover).is_zero_map():
                raise RecipeError("aux_cover must factor through the kernel (phi∘aux = 0)")
        if cotorsion_envelope is not None:
            if cotorsion_envelope.source != phi.source:
                raise RecipeError("cotorsion_envelope must start at the cover module")
            if not cotorsion_envelope.is_injective():
                raise RecipeError("cotorsion_envelope must be injective")
            if not module_is_flat(cotorsion_envelope.target):
                raise RecipeError("cotorsion envelope of a flat module must be flat")
        self.phi = phi
        self.kind = kind
        self.kernel = fact.kernel
        self.kernel_inclusion = fact.kernel_inclusion
        self.aux_cover = aux_cover
        self.cotorsion_envelope = cotorsion_envelope


@dataclass(frozen=True)
class RecipeResult:
    recipe: str
    quiver: Quiver
    source: Representation
    target: Representation
    morphism: RepMorphism
    certificate: tuple  # human-readable certified facts


def _certify(recipe, morphism, class_kind, tt=None) -> tuple:
    notes = ["all squares commute (validated on construction)"]
    if class_kind == "flat_categorical":
        ok = is_categorical_flat(morphism.source)
        notes.append(f"source is categorical flat: {'yes' if ok else 'NO'}")
    else:
        cls = classify_rep(morphism.source, tt or _default_tt(morphism.source.ring))
        flag = cls.flat_cw if class_kind == "flat_cw" else cls.torsion_free_cw
        notes.append(f"source is {class_kind}: {'yes' if flag else 'NO'}")
    return tuple(notes)


def build_recipe(recipe: str, data: ModuleCoverData) -> RecipeResult:
    """Emit one of the explicit cover diagrams as verified data.

    The two-vertex recipes cover (0 -> M) or (M = M); the three-vertex
    recipes cover (M -> 0 -> M).  M is the target of data.phi.
    """
    ring = data.phi.matrix.ring
    M = data.phi.target
    F = data.phi.source
    zero = FGModule.zero(ring)

    if recipe == "a2-torsion-free":
        if data.kind != "torsion_free":
            raise RecipeError("recipe needs a torsion-free module cover")
        q = Quiver.line(2)
        src = Representation(
            q, ring, {"v1": data.kernel, "v2": F}, {"a1": data.kernel_inclusion}
        )
        tgt = Representation(q, ring, {"v1": zero, "v2": M}, {"a1": ModuleMap.zero(zero, M)})
        mor = RepMorphism(src, tgt, {"v1": ModuleMap.zero(data.kernel, zero), "v2": data.phi})
        cert = _certify(recipe, mor, "torsion_free_cw")
        return RecipeResult(recipe, q, src, tgt, mor, cert)

    if recipe == "a2-flat":
        q = Quiver.line(2)
        src = Representation(q, ring, {"v1": zero, "v2": F}, {"a1": ModuleMap.zero(zero, F)})
        tgt = Representation(q, ring, {"v1": zero, "v2": M}, {"a1": ModuleMap.zero(zero, M)})
        mor = RepMorphism(src, tgt, {"v1": ModuleMap.zero(zero, zero), "v2": data.phi})
        cert = _certify(recipe, mor, "flat_categorical")
        return RecipeResult(recipe, q, src, tgt, mor, cert)

    if recipe == "a2-flat-cw":
        if data.aux_cover is None:
            raise RecipeError("recipe needs aux_cover (a flat cover of the kernel)")
        q = Quiver.line(2)
        G = data.aux_cover.source
        src = Representation(q, ring, {"v1": G, "v2": F}, {"a1": data.aux_cover})
        tgt = Representation(q, ring, {"v1": zero, "v2": M}, {"a1": ModuleMap.zero(zero, M)})
        mor = RepMorphism(src, tgt, {"v1": ModuleMap.zero(G, zero), "v2": data.phi})
        cert = _certify(recipe, mor, "flat_cw")
        return RecipeResult(recipe, q, src, tgt, mor, cert)

    if recipe == "a2-identity":
        q = Quiver.line(2)
        src = Representation(q, ring, {"v1": F, "v2": F}, {"a1": ModuleMap.identity(F)})
        tgt = Representation(q, ring, {"v1": M, "v2": M}, {"a1": ModuleMap.identity(M)})
        mor = RepMorphism(src, tgt, {"v1": data.phi, "v2": data.phi})
        kind = "flat_categorical" if data.kind == "flat" else "torsion_free_cw"
        cert = _certify(recipe, mor, kind)
        return RecipeResult(recipe, q, src, tgt, mor, cert)

    if recipe == "a3-flat":
        if data.cotorsion_envelope is None:
            raise RecipeError("recipe needs cotorsion_envelope")
        q = Quiver.line(3)
        i = data.cotorsion_envelope
        C = i.target
        CF = C.direct_sum(F)
        k1 = ModuleMap(
            C,
            CF,
            Matrix.identity(ring, C.generators).vstack(
                Matrix.zeros(ring, F.generators, C.generators)
            ),
            check=False,
        )
        p2 = ModuleMap(
            CF,
            F,
            Matrix.zeros(ring, F.generators, C.generators).hstack(
                Matrix.identity(ring, F.generators)
            ),
            check=False,
        )
        src = Representation(q, ring, {"v1": F, "v2": C, "v3": CF}, {"a1": i, "a2": k1})
        tgt = Representation(
            q,
            ring,
            {"v1": M, "v2": zero, "v3": M},
            {"a1": ModuleMap.zero(M, zero), "a2": ModuleMap.zero(zero, M)},
        )
        mor = RepMorphism(
            src,
            tgt,
            {"v1": data.phi, "v2": ModuleMap.zero(C, zero), "v3": data.phi @ p2},
        )
        cert = _certify(recipe, mor, "flat_categorical")
        cert = cert + (
            "envelope and first-factor inclusion are pure: "
            + (
                "yes"
                if is_pure_submodule(i.matrix, C) and is_pure_submodule(k1.matrix, CF)
                else "NO"
            ),
        )
        return RecipeResult(recipe, q, src, tgt, mor, cert)

    if recipe == "a3-flat-cw":
        if data.aux_cover is None:
            raise RecipeError("recipe needs aux_cover (a flat cover of the kernel)")
        q = Quiver.line(3)
        G = data.aux_cover.source
        src = Representation(
            q,
            ring,
            {"v1": F, "v2": G, "v3": F},
            {"a1": ModuleMap.zero(F, G), "a2": data.aux_cover},
        )
        tgt = Representation(
            q,
            ring,
            {"v1": M, "v2": zero, "v3": M},
            {"a1": ModuleMap.zero(M, zero), "a2": ModuleMap.zero(zero, M)},
        )
        mor = RepMorphism(
            src, tgt, {"v1": data.phi, "v2": ModuleMap.zero(G, zero), "v3": data.phi}
        )
        cert = _certify(recipe, mor, "flat_cw")
        return RecipeResult(recipe, q, src, tgt, mor, cert)

    raise RecipeError(f"unknown recipe {recipe!r}; valid: {', '.join(RECIPES)}")


def a3_flat_explicit_lift(
    result: RecipeResult,
    test: RepMorphism,
    tau1: ModuleMap,
    tau2: ModuleMap,
    z: ModuleMap,
    f: ModuleMap,
    g: ModuleMap,
) -> RepMorphism:
    """The hand-built lift for the three-vertex flat recipe.

    Given a test morphism (F1 -> F2 -> F3) over (M -> 0 -> M) and the
    auxiliary liftings (f into the cover, g into the envelope, tau1, tau2,
    and z with phi∘z = 0), assemble the lift whose third component is
    x -> (tau1(x), (tau2 - z)(x)) and verify it factors the test morphism
    through the recipe.  The generic solver finds some lift; this one
    realizes the explicit formula, and both are certified lifts.
    """
    if result.recipe != "a3-flat":
        raise RecipeError("the explicit lift belongs to the three-vertex flat recipe")
    src = result.source
    h_matrix = tau1.matrix.vstack((tau2 - z).matrix)
    comps = {
        "v1": f,
        "v2": g,
        "v3": ModuleMap(
            test.source.vertex_modules["v3"], src.vertex_modules["v3"], h_matrix
        ),
    }
    lift = RepMorphism(test.source, src, comps)  # validates the squares
    composite = result.morphism @ lift
    if not composite.equals(test):
        raise RecipeError("explicit data does not lift the test morphism")
    return lift
