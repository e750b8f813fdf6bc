import itertools

import pytest

from qrep.rings import ZZ, GF
from qrep.linalg import Matrix
from qrep.modules import FGModule, ModuleMap
from qrep.quiver import CyclicQuiverError, Quiver
from qrep.functors import (
    adjunction_card_check,
    adjunction_to_module,
    adjunction_to_representation,
    s_functor,
    s_functor_on_map,
    t_functor,
)
from qrep.reps import Representation, rep_hom_group

A2 = Quiver.line(2)
A3 = Quiver.line(3)


def field_rep(quiver, field, dims, mats):
    mods = {v: FGModule.free(field, d) for v, d in dims.items()}
    maps = {}
    for a in quiver.arrows:
        maps[a.name] = ModuleMap(
            mods[a.source], mods[a.target], Matrix(field, mats[a.name], mods[a.source].generators)
        )
    return Representation(quiver, field, mods, maps)


class TestSFunctor:
    def test_a2_base_vertex(self):
        ext = s_functor(A2, "v1", FGModule.free(ZZ, 1))
        rep = ext.representation
        assert rep.vertex_modules["v1"].normal_form == ((), 1)
        assert rep.vertex_modules["v2"].normal_form == ((), 1)
        assert rep.arrow_maps["a1"].matrix == Matrix.identity(ZZ, 1)

    def test_a2_sink_vertex(self):
        ext = s_functor(A2, "v2", FGModule.free(ZZ, 1))
        rep = ext.representation
        assert rep.vertex_modules["v1"].is_zero()
        assert rep.vertex_modules["v2"].normal_form == ((), 1)

    def test_zero_module_gives_zero_rep(self):
        ext = s_functor(A2, "v1", FGModule.zero(ZZ))
        assert ext.representation.is_zero()

    def test_refuses_cycles(self):
        with pytest.raises(CyclicQuiverError):
            s_functor(Quiver.loop(2), "v1", FGModule.free(ZZ, 1))

    def test_t_functor(self):
        ext = s_functor(A2, "v1", FGModule.free(ZZ, 1))
        assert t_functor("v2", ext.representation) == ext.representation.vertex_modules["v2"]

    def test_diamond_counts_paths(self):
        q = Quiver(["s", "l", "r", "t"], [("a", "s", "l"), ("b", "s", "r"), ("c", "l", "t"), ("d", "r", "t")])
        ext = s_functor(q, "s", FGModule.free(ZZ, 1))
        assert ext.representation.vertex_modules["t"].free_rank == 2


class TestTransport:
    def test_round_trips_are_identities(self):
        z = FGModule.free(ZZ, 1)
        ext = s_functor(A2, "v1", z)
        X = ext.representation  # transport against itself
        for mat in ([[0]], [[1]], [[2]]):
            f = ModuleMap(z, X.vertex_modules["v1"], Matrix(ZZ, mat))
            eta = adjunction_to_representation(ext, X, f)
            back = adjunction_to_module(ext, X, eta)
            assert back.equals(f)

    def test_rep_to_module_round_trip(self):
        F = GF(2)
        m = FGModule.free(F, 1)
        ext = s_functor(A2, "v1", m)
        X = field_rep(A2, F, {"v1": 1, "v2": 1}, {"a1": [[1]]})
        H = rep_hom_group(ext.representation, X)
        for coeffs in itertools.product(range(2), repeat=H.group.generators):
            eta = H.element(coeffs)
            f = adjunction_to_module(ext, X, eta)
            again = adjunction_to_representation(ext, X, f)
            assert again.equals(eta)

    def test_identity_transports_to_counit(self):
        z = FGModule.free(ZZ, 1)
        ext = s_functor(A2, "v1", z)
        X = ext.representation
        eta = adjunction_to_representation(ext, X, ModuleMap.identity(z))
        assert eta.components["v1"].equals(ModuleMap.identity(z))

    def test_zero_transports_to_zero(self):
        z = FGModule.free(ZZ, 1)
        ext = s_functor(A2, "v1", z)
        X = ext.representation
        eta = adjunction_to_representation(ext, X, ModuleMap.zero(z, z))
        assert eta.is_zero_map()

    def test_naturality_over_f3(self):
        # transport(f ∘ g) == transport(f) ∘ S_v(g) for sampled g: M' -> M
        F = GF(3)
        m = FGModule.free(F, 1)
        ext = s_functor(A2, "v1", m)
        X = field_rep(A2, F, {"v1": 2, "v2": 1}, {"a1": [[1, 2]]})
        for g_val in range(3):
            g = ModuleMap(m, m, Matrix(F, [[g_val]]))
            _, _, Sg = s_functor_on_map(A2, "v1", g)
            for f_cols in itertools.product(range(3), repeat=2):
                f = ModuleMap(m, X.vertex_modules["v1"], Matrix(F, [[f_cols[0]], [f_cols[1]]]))
                left = adjunction_to_representation(ext, X, f @ g)
                right = adjunction_to_representation(ext, X, f) @ Sg
                assert left.equals(right)


class TestCardCheck:
    def test_a2_f2_basic(self):
        F = GF(2)
        m = FGModule.free(F, 1)
        X = field_rep(A2, F, {"v1": 1, "v2": 1}, {"a1": [[1]]})
        chk = adjunction_card_check(A2, "v1", m, X)
        assert chk.module_side == 2
        assert chk.equal

    def test_a3_f3(self):
        F = GF(3)
        m = FGModule.free(F, 1)
        X = field_rep(A3, F, {"v1": 1, "v2": 1, "v3": 1}, {"a1": [[2]], "a2": [[1]]})
        chk = adjunction_card_check(A3, "v1", m, X)
        assert chk.module_side == 3
        assert chk.equal

    def test_rejects_integers(self):
        z = FGModule.free(ZZ, 1)
        X = field_rep(A2, GF(2), {"v1": 1, "v2": 1}, {"a1": [[1]]})
        with pytest.raises(ValueError):
            adjunction_card_check(A2, "v1", z, X)

    def test_consistency_with_hom_solver(self):
        # |Hom_Q(S_v(F_p), X)| from the solver equals the enumerated count
        F = GF(2)
        m = FGModule.free(F, 1)
        for dims, mat in [({"v1": 1, "v2": 1}, [[0]]), ({"v1": 2, "v2": 1}, [[1, 0]])]:
            X = field_rep(A2, F, dims, {"a1": mat})
            ext = s_functor(A2, "v1", m)
            H = rep_hom_group(ext.representation, X)
            chk = adjunction_card_check(A2, "v1", m, X)
            assert 2**H.group.free_rank == chk.representation_side == chk.module_side
