"""Acceptance criteria, one test per criterion, all exact (zero tolerance).

Run with ``pytest -v tests/test_acceptance.py`` (one PASSED line per
criterion) or ``pytest -s`` to see the explicit pass lines printed here.
"""

import itertools
import json
import time

import pytest

from qrep.rings import ZZ, QQ, GF, TorsionTheorySpec
from qrep.linalg import Lattice, Matrix
from qrep.modules import FGModule, ModuleMap, is_pure_submodule
from qrep.quiver import Quiver
from qrep.reps import RepElement, RepMorphism, Representation, rep_hom_group
from qrep.functors import (
    adjunction_card_check,
    adjunction_to_module,
    adjunction_to_representation,
    s_functor,
)
from qrep.pathring import annihilator_witness, nloop_representation
from qrep.properties import classify_rep, is_categorical_flat, is_injective_rep
from qrep.covers import ModuleCoverData, build_recipe, cover_verdict, default_test_family
from qrep.closures import pure_closure_rep, small_filtration
from qrep.barcode import (
    barcode_realization,
    decompose_interval,
    interval_representation,
    rank_invariant,
)
from qrep.cli import main as cli_main
from qrep.documents import document_to_text, load_document

from oracles import (
    F2Rep,
    f2_all_reps,
    f2_injectivity_oracle,
    f2_subrep_as_rep,
    f2_subrep_inclusions,
    purity_oracle,
)

classical = TorsionTheorySpec.classical()
trivial = TorsionTheorySpec.trivial()


def _ok(n, text):
    print(f"criterion {n}: PASS — {text}")


# ---------------------------------------------------------------------------
# 1. loop counterexample reproduction
# ---------------------------------------------------------------------------


def test_criterion_01_loop_counterexample():
    start = time.monotonic()
    for n in (2, 3):
        for E in (FGModule.free(QQ, 1), FGModule.free(GF(5), 1)):
            X = nloop_representation(n, E)
            r = annihilator_witness(X.quiver, X)
            assert r.annihilates, (n, E.ring.kind)
            assert r.element_nonzero
            assert r.condition_i and r.condition_ii
            assert r.injective_verdict == "not injective (not divisible)"
    elapsed = time.monotonic() - start
    assert elapsed < 1.0, f"took {elapsed:.3f}s"
    _ok(1, f"n in {{2,3}}, E in {{Q, F5}}: annihilated, (i)+(ii) hold, not injective ({elapsed:.3f}s)")


# ---------------------------------------------------------------------------
# 2. injectivity characterization vs exhaustive lifting oracle
# ---------------------------------------------------------------------------


def _bit_rep_to_library(rep: F2Rep, quiver: Quiver) -> Representation:
    F = GF(2)
    mods = {}
    for idx, v in enumerate(quiver.vertices):
        mods[v] = FGModule.free(F, rep.dims[idx])
    maps = {}
    for idx, a in enumerate(quiver.arrows):
        rows = [
            [(rep.maps[idx][i] >> j) & 1 for j in range(rep.dims[idx])]
            for i in range(rep.dims[idx + 1])
        ]
        maps[a.name] = ModuleMap(
            mods[a.source], mods[a.target], Matrix(F, rows, rep.dims[idx])
        )
    return Representation(quiver, F, mods, maps)


@pytest.mark.parametrize("n_vertices", [2, 3])
def test_criterion_02_injectivity_oracle_equivalence(n_vertices):
    start = time.monotonic()
    quiver = Quiver.line(n_vertices)
    reps = f2_all_reps(n_vertices, max_dim=2)
    # subrepresentation inclusion pairs, shared across all tested X;
    # every monomorphism factors as an iso onto its image, so lifting
    # against subrep inclusions is lifting against all monos of this size
    pairs = []
    for B in reps:
        for choice in f2_subrep_inclusions(B):
            A, incs = f2_subrep_as_rep(B, choice)
            if A.dims == B.dims:
                continue  # the identity inclusion lifts trivially
            pairs.append((B, A, incs))
    pairs.sort(key=lambda t: (sum(t[0].dims), t[0].key(), t[1].key()))
    hom_cache = {}
    disagreements = []
    for rep in reps:
        lib = _bit_rep_to_library(rep, quiver)
        claimed = is_injective_rep(lib)
        oracle = f2_injectivity_oracle(rep, pairs, hom_cache)
        if claimed != oracle:
            disagreements.append((rep.key(), claimed, oracle))
    assert not disagreements, disagreements[:5]
    elapsed = time.monotonic() - start
    assert elapsed < 300.0, f"took {elapsed:.1f}s"
    _ok(
        2,
        f"A_{n_vertices} over F_2: {len(reps)} representations x {len(pairs)} "
        f"inclusion pairs, 100% agreement ({elapsed:.1f}s)",
    )


# ---------------------------------------------------------------------------
# 3. purity: fast test vs full cyclic-tensor oracle
# ---------------------------------------------------------------------------


def _purity_battery():
    """All B with invariant-factor chains over {2,...,8} (length <= 2) and
    free rank <= 3, against a deterministic grid of submodules."""
    chains = [()]
    for d in range(2, 9):
        chains.append((d,))
        for e in range(d, 9):
            if e % d == 0:
                chains.append((d, e))
    bs = []
    for chain in chains:
        for rank in range(0, 4):
            if len(chain) + rank == 0 or len(chain) + rank > 4:
                continue
            bs.append(FGModule.from_invariant_factors(ZZ, chain, rank))
    pairs = []
    for B in bs:
        g = B.generators
        pool = [
            tuple(1 if k == i else 0 for k in range(g)) for i in range(g)
        ] + [
            tuple(2 if k == i else 0 for k in range(g)) for i in range(g)
        ] + [tuple(1 for _ in range(g)), tuple(3 if k == 0 else 1 for k in range(g))]
        pairs.append((Matrix.zeros(ZZ, g, 0), B))
        for col in pool:
            pairs.append((Matrix.from_columns(ZZ, [col], g), B))
        for c1, c2 in itertools.combinations(pool[: g + 2], 2):
            pairs.append((Matrix.from_columns(ZZ, [c1, c2], g), B))
    return pairs


def test_criterion_03_purity_oracle_equivalence():
    pairs = _purity_battery()
    assert len(pairs) >= 300
    mismatches = []
    for gens, B in pairs:
        fast = is_pure_submodule(gens, B)
        # the oracle evaluates the cyclic-tensor kernel condition
        # (A ∩ nB = nA for every modulus up to the documented bound)
        # by plain subgroup arithmetic, an independent route
        slow = purity_oracle(gens, B)
        if fast != slow:
            mismatches.append((B.describe(), gens.columns(), fast, slow))
    assert not mismatches, mismatches[:5]
    _ok(3, f"{len(pairs)} submodule pairs, fast test == full cyclic-tensor oracle")


# ---------------------------------------------------------------------------
# 4. adjunction cardinalities and transports
# ---------------------------------------------------------------------------


def _adjunction_instances():
    out = []
    for p in (2, 3):
        F = GF(p)
        free1 = FGModule.free(F, 1)
        a2 = Quiver.line(2)
        dims_list = [(1, 1), (2, 1), (1, 2), (2, 2), (0, 1), (1, 0)]
        for dims in dims_list:
            cells = dims[1] * dims[0]
            mats = list(itertools.product(range(p), repeat=cells))
            for flat in mats[:3]:
                mods = {
                    "v1": FGModule.free(F, dims[0]),
                    "v2": FGModule.free(F, dims[1]),
                }
                rows = [list(flat[i * dims[0] : (i + 1) * dims[0]]) for i in range(dims[1])]
                X = Representation(
                    a2,
                    F,
                    mods,
                    {"a1": ModuleMap(mods["v1"], mods["v2"], Matrix(F, rows, dims[0]))},
                )
                for v in ("v1", "v2"):
                    out.append((a2, v, free1, X))
        a3 = Quiver.line(3)
        mods = {v: FGModule.free(F, 1) for v in a3.vertices}
        for m1, m2 in itertools.product(range(p), repeat=2):
            maps = {
                "a1": ModuleMap(mods["v1"], mods["v2"], Matrix(F, [[m1]])),
                "a2": ModuleMap(mods["v2"], mods["v3"], Matrix(F, [[m2]])),
            }
            X = Representation(a3, F, mods, maps)
            out.append((a3, "v1", free1, X))
    return out


def test_criterion_04_adjunction():
    instances = _adjunction_instances()
    assert len(instances) >= 50
    p_counts = {2: 0, 3: 0}
    for quiver, v, M, X in instances:
        chk = adjunction_card_check(quiver, v, M, X)
        assert chk.equal, (quiver, v, X.describe(), chk)
        p_counts[M.ring.p] += 1
        # transport round trips on every module-side hom
        ext = s_functor(quiver, v, M)
        p = M.ring.p
        d = X.vertex_modules[v].generators
        for flat in itertools.product(range(p), repeat=d):
            f = ModuleMap(M, X.vertex_modules[v], Matrix(M.ring, [[x] for x in flat], 1))
            eta = adjunction_to_representation(ext, X, f)
            assert adjunction_to_module(ext, X, eta).equals(f)
        H = rep_hom_group(ext.representation, X)
        for coeffs in itertools.product(range(p), repeat=H.group.generators):
            eta = H.element(coeffs)
            f = adjunction_to_module(ext, X, eta)
            assert adjunction_to_representation(ext, X, f).equals(eta)
    assert p_counts[2] > 0 and p_counts[3] > 0
    _ok(4, f"{len(instances)} instances over F_2/F_3: equal cardinalities, round trips exact")


# ---------------------------------------------------------------------------
# 5. cover verdicts
# ---------------------------------------------------------------------------


def test_criterion_05_cover_verdicts():
    a1 = Quiver.line(1)
    z = FGModule.free(ZZ, 1)
    z3 = FGModule.cyclic(ZZ, 3)

    def single(mod):
        return Representation(a1, ZZ, {"v1": mod}, {})

    fam1 = default_test_family(a1, ZZ, max_rank=2)
    ident = RepMorphism(single(z), single(z), {"v1": ModuleMap.identity(z)})
    v = cover_verdict(ident, fam1, "torsion_free_cw", classical)
    assert v.status == "is_cover"

    psi = RepMorphism(single(z), single(z3), {"v1": ModuleMap(z, z3, Matrix(ZZ, [[1]]))})
    v = cover_verdict(psi, fam1, "torsion_free_cw", classical)
    assert v.status == "not_cover"
    assert v.witness.components["v1"].matrix == Matrix(ZZ, [[4]])
    assert (psi @ v.witness).equals(psi)
    assert not v.witness.is_isomorphism()

    rec = build_recipe("a2-torsion-free", ModuleCoverData(ModuleMap.identity(z), "torsion_free"))
    fam2 = default_test_family(Quiver.line(2), ZZ, max_rank=2)
    v = cover_verdict(rec.morphism, fam2, "torsion_free_cw", classical)
    assert v.status == "is_cover"

    q2 = FGModule.free(QQ, 2)
    data = ModuleCoverData(
        ModuleMap.identity(q2), "flat", cotorsion_envelope=ModuleMap.identity(q2)
    )
    rec53 = build_recipe("a3-flat", data)
    fam3 = default_test_family(Quiver.line(3), QQ, max_rank=1, kind="flat_categorical")
    v53 = cover_verdict(rec53.morphism, fam3, "flat_categorical", trivial)
    assert v53.status == "is_cover"
    _ok(5, "identity IsCover; Z->Z/3 NotCover (x4 verified); both recipe verdicts IsCover")


# ---------------------------------------------------------------------------
# 6. pure-closure battery
# ---------------------------------------------------------------------------


def _closure_battery():
    a2 = Quiver.line(2)
    a3 = Quiver.line(3)
    out = []

    def add(quiver, dims, mats, seed_vertex, seed):
        mods = {v: FGModule.free(ZZ, d) for v, d in dims.items()}
        maps = {}
        for a in quiver.arrows:
            maps[a.name] = ModuleMap(
                mods[a.source], mods[a.target], Matrix(ZZ, mats[a.name], mods[a.source].generators)
            )
        M = Representation(quiver, ZZ, mods, maps)
        out.append((M, RepElement(M, seed_vertex, seed)))

    for m in (1, 2, 3, 5, 8):
        add(a2, {"v1": 1, "v2": 1}, {"a1": [[m]]}, "v1", (1,))
    add(a2, {"v1": 1, "v2": 1}, {"a1": [[0]]}, "v1", (1,))
    add(a2, {"v1": 2, "v2": 1}, {"a1": [[2, 4]]}, "v1", (1, 1))
    add(a2, {"v1": 2, "v2": 2}, {"a1": [[2, 0], [0, 3]]}, "v1", (1, 0))
    add(a2, {"v1": 2, "v2": 2}, {"a1": [[1, 1], [0, 2]]}, "v1", (0, 1))
    add(a2, {"v1": 2, "v2": 2}, {"a1": [[4, 2], [2, 4]]}, "v1", (1, 1))
    add(a2, {"v1": 1, "v2": 2}, {"a1": [[6], [8]]}, "v1", (1,))
    add(a2, {"v1": 1, "v2": 2}, {"a1": [[2], [0]]}, "v1", (1,))
    add(a3, {"v1": 1, "v2": 1, "v3": 1}, {"a1": [[2]], "a2": [[3]]}, "v1", (1,))
    add(a3, {"v1": 1, "v2": 1, "v3": 1}, {"a1": [[8]], "a2": [[1]]}, "v1", (1,))
    add(a3, {"v1": 1, "v2": 2, "v3": 1}, {"a1": [[5], [7]], "a2": [[1, 1]]}, "v1", (1,))
    add(a3, {"v1": 2, "v2": 1, "v3": 1}, {"a1": [[2, 6]], "a2": [[4]]}, "v1", (1, 0))
    add(a3, {"v1": 1, "v2": 1, "v3": 2}, {"a1": [[3]], "a2": [[2], [4]]}, "v1", (1,))
    add(a3, {"v1": 1, "v2": 1, "v3": 1}, {"a1": [[7]], "a2": [[7]]}, "v2", (1,))
    add(a2, {"v1": 2, "v2": 2}, {"a1": [[8, 0], [0, 8]]}, "v1", (1, 1))
    add(a2, {"v1": 2, "v2": 2}, {"a1": [[0, 1], [1, 0]]}, "v1", (1, 0))
    # a couple with torsion ambient modules
    z4 = FGModule.cyclic(ZZ, 4)
    z = FGModule.free(ZZ, 1)
    M = Representation(
        a2, ZZ, {"v1": z, "v2": z4}, {"a1": ModuleMap(z, z4, Matrix(ZZ, [[1]]))}
    )
    out.append((M, RepElement(M, "v1", (1,))))
    M2 = Representation(
        a2, ZZ, {"v1": z4, "v2": z4}, {"a1": ModuleMap(z4, z4, Matrix(ZZ, [[2]]))}
    )
    out.append((M2, RepElement(M2, "v1", (1,))))
    return out


def test_criterion_06_pure_closure_battery():
    from qrep.properties import is_componentwise_pure_subrep

    battery = _closure_battery()
    assert len(battery) >= 20
    for M, x in battery:
        res = pure_closure_rep(M, x)
        # terminated (or it would have raised); output contains the seed
        lat = M.vertex_modules[x.vertex].relation_lattice.sum(
            Lattice(ZZ, M.vertex_modules[x.vertex].generators, res.gens[x.vertex])
        )
        assert lat.contains(x.coords)
        assert is_componentwise_pure_subrep(M, res.gens)
        kinds = [s.kind for s in res.stages]
        assert kinds[0] == "generate"
        for a, b in zip(kinds, kinds[1:]):
            assert (a, b) in (("generate", "purify"), ("purify", "generate")), kinds
    _ok(6, f"{len(battery)} integer representations: closure terminates, pure, alternating trace")


# ---------------------------------------------------------------------------
# 7. flat-class separation
# ---------------------------------------------------------------------------


def test_criterion_07_flat_separation():
    a2 = Quiver.line(2)
    z1 = FGModule.free(ZZ, 1)
    z2 = FGModule.free(ZZ, 2)
    X = Representation(a2, ZZ, {"v1": z1, "v2": z1}, {"a1": ModuleMap(z1, z1, Matrix(ZZ, [[2]]))})
    assert classify_rep(X, classical).flat_cw is True
    assert is_categorical_flat(X) is False
    Y = Representation(
        a2, ZZ, {"v1": z1, "v2": z2}, {"a1": ModuleMap(z1, z2, Matrix(ZZ, [[1], [0]]))}
    )
    assert is_categorical_flat(Y) is True
    _ok(7, "doubling map: cw-flat but not categorical; split embedding: categorical")


# ---------------------------------------------------------------------------
# 8. filtrations of free representations
# ---------------------------------------------------------------------------


def test_criterion_08_filtration():
    from qrep.properties import is_componentwise_pure_subrep

    cases = []
    a2, a3 = Quiver.line(2), Quiver.line(3)
    for dims, mats, q in [
        ({"v1": 2, "v2": 2}, {"a1": [[1, 0], [0, 2]]}, a2),
        ({"v1": 3, "v2": 3}, {"a1": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]}, a2),
        ({"v1": 3, "v2": 2}, {"a1": [[2, 0, 1], [0, 3, 0]]}, a2),
        ({"v1": 1, "v2": 3}, {"a1": [[1], [2], [3]]}, a2),
        ({"v1": 2, "v2": 2, "v3": 2}, {"a1": [[1, 0], [0, 1]], "a2": [[0, 1], [1, 0]]}, a3),
        ({"v1": 3, "v2": 2, "v3": 1}, {"a1": [[1, 0, 0], [0, 1, 0]], "a2": [[1, 1]]}, a3),
        ({"v1": 1, "v2": 2, "v3": 3}, {"a1": [[1], [0]], "a2": [[1, 0], [0, 1], [2, 2]]}, a3),
    ]:
        mods = {v: FGModule.free(ZZ, d) for v, d in dims.items()}
        maps = {}
        for a in q.arrows:
            maps[a.name] = ModuleMap(
                mods[a.source], mods[a.target], Matrix(ZZ, mats[a.name], mods[a.source].generators)
            )
        cases.append(Representation(q, ZZ, mods, maps))
    for F in cases:
        filt = small_filtration(F)
        for s in filt.stages:
            assert s.quotient_flat
            assert is_componentwise_pure_subrep(F, s.gens)
        last = filt.stages[-1].gens
        for v in F.quiver.vertices:
            g = F.vertex_modules[v].generators
            lat = Lattice(ZZ, g, last[v]).sum(Lattice(ZZ, g, F.vertex_modules[v].relations))
            assert lat.contains_columns(Matrix.identity(ZZ, g))
    _ok(8, f"{len(cases)} free representations: every quotient flat, union equals input")


# ---------------------------------------------------------------------------
# 9. barcodes
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("n_vertices", [2, 3])
def test_criterion_09_barcode(n_vertices):
    quiver = Quiver.line(n_vertices)
    F = GF(2)
    reps = f2_all_reps(n_vertices, max_dim=2)
    for rep in reps:
        X = _bit_rep_to_library(rep, quiver)
        bc = decompose_interval(X)
        Y = barcode_realization(quiver, F, bc)
        # equal rank invariants + dimensions = isomorphic line-quiver reps
        assert rank_invariant(Y) == bc.ranks
        for v in quiver.vertices:
            assert Y.vertex_modules[v].free_rank == X.vertex_modules[v].free_rank
    for start in range(1, n_vertices + 1):
        for end in range(start, n_vertices + 1):
            iv = interval_representation(quiver, F, start, end)
            assert is_injective_rep(iv) == (start == 1)
    _ok(9, f"A_{n_vertices}: {len(reps)} reconstructions exact; injective tags match")


# ---------------------------------------------------------------------------
# 10. CLI round trips and determinism
# ---------------------------------------------------------------------------


def test_criterion_10_cli(tmp_path, capsys):
    doc = {
        "version": "1",
        "ring": "Z",
        "torsion": "classical",
        "quiver": {"text": "v1"},
        "modules": {
            "Z1": {"generators": 1, "relations": [[]]},
            "Z3t": {"generators": 1, "relations": [[3]]},
        },
        "representations": {
            "F": {"vertices": {"v1": "Z1"}, "arrows": {}},
            "T": {"vertices": {"v1": "Z3t"}, "arrows": {}},
        },
        "module_maps": {"id_Z": {"source": "Z1", "target": "Z1", "matrix": [[1]]}},
        "morphisms": {"psi": {"source": "F", "target": "T", "components": {"v1": [[1]]}}},
    }
    path = tmp_path / "doc.json"
    path.write_text(json.dumps(doc))

    # emitted document round-trips byte for byte
    out1 = tmp_path / "built1.json"
    out2 = tmp_path / "built2.json"
    for out in (out1, out2):
        code = cli_main(
            ["cover", "build", str(path), "a2-torsion-free", "--phi", "id_Z",
             "--cover-kind", "torsion-free", "--out", str(out)]
        )
        capsys.readouterr()
        assert code == 0
    text1, text2 = out1.read_text(), out2.read_text()
    assert text1 == text2  # byte-identical across runs
    reloaded = load_document(text1)
    assert document_to_text(reloaded) == text1  # parse∘serialize identity

    # reports are byte-identical across runs, in both formats
    for fmt in ("text", "tree"):
        outs = []
        for _ in range(2):
            code = cli_main(
                ["--format", fmt, "cover", "verify", str(path), "psi",
                 "--family", "free2", "--kind", "torsion-free-cw"]
            )
            outs.append(capsys.readouterr().out)
            assert code == 1  # NotCover
        assert outs[0] == outs[1]
        assert "not_cover" in outs[0]
    _ok(10, "emitted documents round-trip; reports byte-identical across runs")
