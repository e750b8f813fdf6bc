import pytest

from qrep.rings import ZZ, QQ, TorsionTheorySpec
from qrep.linalg import Matrix
from qrep.modules import FGModule, ModuleMap
from qrep.quiver import Quiver
from qrep.reps import RepMorphism, Representation
from qrep.covers import (
    ModuleCoverData,
    RecipeError,
    a3_flat_explicit_lift,
    build_recipe,
    cover_verdict,
    covers_isomorphic,
    default_test_family,
    endomorphism_obstruction_basis,
    factor_through,
    is_precover,
)

classical = TorsionTheorySpec.classical()
trivial = TorsionTheorySpec.trivial()
A1 = Quiver.line(1)
A2 = Quiver.line(2)


def single(module) -> Representation:
    return Representation(A1, module.ring, {"v1": module}, {})


def single_map(f) -> RepMorphism:
    return RepMorphism(single(f.source), single(f.target), {"v1": f})


class TestFactorThrough:
    def test_identity_always_factors(self):
        z = FGModule.free(ZZ, 1)
        psi = single_map(ModuleMap(z, z, Matrix(ZZ, [[2]])))
        f = factor_through(psi, psi)
        assert f is not None
        assert (psi @ f).equals(psi)

    def test_double_does_not_factor_identity(self):
        z = FGModule.free(ZZ, 1)
        psi = single_map(ModuleMap(z, z, Matrix(ZZ, [[2]])))
        ident = single_map(ModuleMap.identity(z))
        assert factor_through(ident, psi) is None

    def test_a2_torsion_free_recipe_square(self):
        # test morphism (T1 -> T2) over (0 -> M) factors with g = f∘alpha
        z = FGModule.free(ZZ, 1)
        z3 = FGModule.cyclic(ZZ, 3)
        psi_mod = ModuleMap(z, z3, Matrix(ZZ, [[1]]))
        data = ModuleCoverData(psi_mod, kind="torsion_free")
        rec = build_recipe("a2-torsion-free", data)
        T1 = FGModule.free(ZZ, 1)
        T2 = FGModule.free(ZZ, 1)
        zero = FGModule.zero(ZZ)
        src = Representation(A2, ZZ, {"v1": T1, "v2": T2}, {"a1": ModuleMap(T1, T2, Matrix(ZZ, [[3]]))})
        beta = ModuleMap(T2, z3, Matrix(ZZ, [[1]]))
        test = RepMorphism(src, rec.target, {"v1": ModuleMap.zero(T1, zero), "v2": beta})
        lift = factor_through(test, rec.morphism)
        assert lift is not None
        # the square identity: kernel-component equals the lifted map after alpha
        alpha = src.arrow_maps["a1"]
        left = rec.source.arrow_maps["a1"] @ lift.components["v1"]
        right = lift.components["v2"] @ alpha
        assert left.equals(right)


class TestPrecover:
    def test_identity_passes(self):
        z = FGModule.free(ZZ, 1)
        psi = single_map(ModuleMap.identity(z))
        family = default_test_family(A1, ZZ, max_rank=2)
        rpt = is_precover(psi, family, "torsion_free_cw", classical)
        assert rpt.passed

    def test_surjection_onto_torsion_passes_free_tests(self):
        z = FGModule.free(ZZ, 1)
        z3 = FGModule.cyclic(ZZ, 3)
        psi = single_map(ModuleMap(z, z3, Matrix(ZZ, [[1]])))
        family = default_test_family(A1, ZZ, max_rank=2)
        assert len(family) == 3  # 0, Z, Z^2
        rpt = is_precover(psi, family, "torsion_free_cw", classical)
        assert rpt.passed

    def test_strict_inclusion_fails(self):
        z = FGModule.free(ZZ, 1)
        psi = single_map(ModuleMap(z, z, Matrix(ZZ, [[2]])))  # 2Z into Z
        family = [single(FGModule.free(ZZ, 1))]
        rpt = is_precover(psi, family, "torsion_free_cw", classical)
        assert not rpt.passed
        assert rpt.failure_witness is not None

    def test_class_warnings_recorded(self):
        z2t = FGModule.cyclic(ZZ, 2)
        psi = single_map(ModuleMap.identity(z2t))
        rpt = is_precover(psi, [single(z2t)], "torsion_free_cw", classical)
        assert rpt.passed
        assert not rpt.members[0].in_class  # warned, not aborted


class TestCoverVerdict:
    def test_identity_is_cover(self):
        z = FGModule.free(ZZ, 1)
        psi = single_map(ModuleMap.identity(z))
        v = cover_verdict(psi, default_test_family(A1, ZZ), "torsion_free_cw", classical)
        assert v.status == "is_cover"
        assert "identity" in v.certificate

    def test_z_onto_z3_not_cover_witness_times_4(self):
        z = FGModule.free(ZZ, 1)
        z3 = FGModule.cyclic(ZZ, 3)
        psi = single_map(ModuleMap(z, z3, Matrix(ZZ, [[1]])))
        v = cover_verdict(psi, default_test_family(A1, ZZ), "torsion_free_cw", classical)
        assert v.status == "not_cover"
        assert v.witness is not None
        assert v.witness.components["v1"].matrix == Matrix(ZZ, [[4]])

    def test_obstruction_basis_for_z_onto_z3(self):
        z = FGModule.free(ZZ, 1)
        z3 = FGModule.cyclic(ZZ, 3)
        psi = single_map(ModuleMap(z, z3, Matrix(ZZ, [[1]])))
        basis = endomorphism_obstruction_basis(psi)
        assert len(basis) == 1
        assert basis[0].components["v1"].matrix in (Matrix(ZZ, [[3]]), Matrix(ZZ, [[-3]]))


class TestRecipes:
    def test_a2_torsion_free_identity_cover(self):
        # phi = id on torsion-free M: candidate (0 -> M) over (0 -> M)
        z = FGModule.free(ZZ, 1)
        data = ModuleCoverData(ModuleMap.identity(z), kind="torsion_free")
        rec = build_recipe("a2-torsion-free", data)
        assert rec.source.vertex_modules["v1"].is_zero()
        fam = default_test_family(A2, ZZ, max_rank=1)
        v = cover_verdict(rec.morphism, fam, "torsion_free_cw", classical)
        assert v.status == "is_cover"

    def test_a2_flat_identity(self):
        q = FGModule.free(QQ, 1)
        data = ModuleCoverData(ModuleMap.identity(q), kind="flat")
        rec = build_recipe("a2-flat", data)
        fam = default_test_family(A2, QQ, max_rank=1, kind="flat_categorical")
        v = cover_verdict(rec.morphism, fam, "flat_categorical", trivial)
        assert v.status == "is_cover"

    def test_a2_identity_recipe(self):
        q = FGModule.free(QQ, 1)
        rec = build_recipe("a2-identity", ModuleCoverData(ModuleMap.identity(q), kind="flat"))
        fam = default_test_family(A2, QQ, max_rank=1)
        v = cover_verdict(rec.morphism, fam, "flat_cw", trivial)
        assert v.status == "is_cover"
        assert "categorical flat: yes" in " ".join(rec.certificate)

    def test_a2_flat_cw_needs_aux(self):
        z = FGModule.free(ZZ, 1)
        with pytest.raises(RecipeError):
            build_recipe("a2-flat-cw", ModuleCoverData(ModuleMap.identity(z), kind="flat"))

    def test_a2_flat_cw_with_zero_kernel(self):
        z = FGModule.free(ZZ, 1)
        zero = FGModule.zero(ZZ)
        aux = ModuleMap.zero(zero, z)
        rec = build_recipe("a2-flat-cw", ModuleCoverData(ModuleMap.identity(z), "flat", aux_cover=aux))
        v = cover_verdict(rec.morphism, default_test_family(A2, ZZ, max_rank=1), "flat_cw", classical)
        assert v.status == "is_cover"

    def test_a3_flat_over_rationals_is_cover(self):
        # phi = id on Q^2; every rational space is cotorsion so C = F
        q2 = FGModule.free(QQ, 2)
        data = ModuleCoverData(
            ModuleMap.identity(q2), kind="flat", cotorsion_envelope=ModuleMap.identity(q2)
        )
        rec = build_recipe("a3-flat", data)
        assert rec.source.vertex_modules["v3"].free_rank == 4
        fam = default_test_family(Quiver.line(3), QQ, max_rank=1, kind="flat_categorical")
        v = cover_verdict(rec.morphism, fam, "flat_categorical", trivial)
        assert v.status == "is_cover"
        assert "unipotent" in v.certificate

    def test_a3_flat_cw_recipe(self):
        q = FGModule.free(QQ, 1)
        zero = FGModule.zero(QQ)
        data = ModuleCoverData(
            ModuleMap.identity(q), kind="flat", aux_cover=ModuleMap.zero(zero, q)
        )
        rec = build_recipe("a3-flat-cw", data)
        fam = default_test_family(Quiver.line(3), QQ, max_rank=1)
        v = cover_verdict(rec.morphism, fam, "flat_cw", trivial)
        assert v.status == "is_cover"

    def test_bad_recipe_name(self):
        z = FGModule.free(ZZ, 1)
        with pytest.raises(RecipeError):
            build_recipe("nonsense", ModuleCoverData(ModuleMap.identity(z)))

    def test_recipe_outputs_pass_precover_batteries(self):
        z = FGModule.free(ZZ, 1)
        data = ModuleCoverData(ModuleMap.identity(z), kind="torsion_free")
        rec = build_recipe("a2-torsion-free", data)
        fam = default_test_family(A2, ZZ, max_rank=2)
        rpt = is_precover(rec.morphism, fam, "torsion_free_cw", classical)
        assert rpt.passed


class TestExplicitLift:
    def test_a3_formula_matches_solver(self):
        # over Q with phi = id: C = F and the kernel is zero
        q1 = FGModule.free(QQ, 1)
        q2 = FGModule.free(QQ, 2)
        data = ModuleCoverData(
            ModuleMap.identity(q1), kind="flat", cotorsion_envelope=ModuleMap.identity(q1)
        )
        rec = build_recipe("a3-flat", data)
        A3 = rec.quiver
        zero = FGModule.zero(QQ)
        alpha = ModuleMap(q1, q2, Matrix(QQ, [[1], [0]]))  # pure mono
        beta = ModuleMap(q2, q2, Matrix(QQ, [[1, 0], [0, 0]]))
        src = Representation(A3, QQ, {"v1": q1, "v2": q2, "v3": q2}, {"a1": alpha, "a2": beta})
        t1 = ModuleMap(q1, q1, Matrix(QQ, [[3]]))
        t3 = ModuleMap(q2, q1, Matrix(QQ, [[0, 5]]))  # t3∘beta = 0, as the square demands
        test = RepMorphism(
            src, rec.target, {"v1": t1, "v2": ModuleMap.zero(q2, zero), "v3": t3}
        )
        generic = factor_through(test, rec.morphism)
        assert generic is not None
        assert (rec.morphism @ generic).equals(test)
        # the paper-shaped data: f lifts t1; g extends i∘f along alpha;
        # tau1 extends g along beta; tau2 lifts t3; z corrects into the kernel
        f = t1
        g = ModuleMap(q2, q1, Matrix(QQ, [[3, 0]]))
        tau1 = ModuleMap(q2, q1, Matrix(QQ, [[3, 7]]))
        tau2 = t3
        z = ModuleMap.zero(q2, q1)
        explicit = a3_flat_explicit_lift(rec, test, tau1, tau2, z, f, g)
        assert (rec.morphism @ explicit).equals(test)
        # wrong auxiliary data is rejected, not silently accepted
        bad_tau1 = ModuleMap(q2, q1, Matrix(QQ, [[0, 7]]))
        with pytest.raises((RecipeError, ValueError)):
            a3_flat_explicit_lift(rec, test, bad_tau1, tau2, z, f, g)


class TestCoversIsomorphic:
    def test_same_cover_twice(self):
        z = FGModule.free(ZZ, 1)
        psi = single_map(ModuleMap.identity(z))
        assert covers_isomorphic(psi, psi)

    def test_distinct_presentations_of_same_cover(self):
        z = FGModule.free(ZZ, 1)
        psi1 = single_map(ModuleMap(z, z, Matrix(ZZ, [[1]])))
        psi2 = single_map(ModuleMap(z, z, Matrix(ZZ, [[-1]])))
        assert covers_isomorphic(psi1, psi2)
