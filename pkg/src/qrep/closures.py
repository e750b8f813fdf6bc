"""Pure-closure and finite filtrations of componentwise flat representations.

pure_closure_rep alternates "generate a subrepresentation" with
"vertexwise pure enlargement" until the chain stabilizes, mirroring the
ascending M0 ⊆ M1 ⊆ M2 ⊆ ... construction; termination is guaranteed at
finite scale because vertex lattices only grow inside a fixed finitely
generated module.  small_filtration peels a componentwise flat
representation into a finite chain of componentwise pure stages whose
quotients are again componentwise flat.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Lattice, Matrix, solve
from .modules import is_pure_submodule, pure_superset, quotient, submodule
from .properties import classify_rep, is_componentwise_pure_subrep
from .reps import (
    RepElement,
    RepMorphism,
    Representation,
    quotient_representation,
    sub_representation,
    subrep_generated_by,
)
from .rings import TorsionTheorySpec


@dataclass(frozen=True)
class ClosureStage:
    index: int
    kind: str  # "generate" | "purify"
    gens: dict
    changed: bool
    description: str


@dataclass(frozen=True)
class PureClosureResult:
    gens: dict
    representation: Representation
    inclusion: RepMorphism
    stages: tuple
    size_note: str

    def trace_lines(self):
        out = [f"stage {s.index} [{s.kind}]: {s.description}" for s in self.stages]
        out.append(f"fixpoint reached; {self.size_note}")
        return out


def _vertex_lattices(M: Representation, gens: dict) -> dict:
    out = {}
    for v in M.quiver.vertices:
        g = gens.get(v)
        if g is None:
            g = Matrix.zeros(M.ring, M.vertex_modules[v].generators, 0)
        out[v] = M.vertex_modules[v].relation_lattice.sum(
            Lattice(M.ring, M.vertex_modules[v].generators, g)
        )
    return out


def _gens_equal(M, a, b) -> bool:
    la, lb = _vertex_lattices(M, a), _vertex_lattices(M, b)
    return all(la[v].equals(lb[v]) for v in M.quiver.vertices)


def _describe_stage(M, gens) -> str:
    parts = []
    for v in M.quiver.vertices:
        sub, _ = submodule(gens[v], M.vertex_modules[v])
        lat = M.vertex_modules[v].relation_lattice
        seen, cols = set(), []
        for c in gens[v].columns():
            if c in seen or lat.contains(c):
                continue
            seen.add(c)
            cols.append(c)
        shown = ", ".join(str(tuple(c)) for c in cols[:6])
        if len(cols) > 6:
            shown += ", ..."
        parts.append(f"{v}: <{shown if cols else '0'}> = {sub.describe()}")
    return ", ".join(parts)


def pure_closure_rep(M: Representation, x: RepElement, max_rounds: int = 100) -> PureClosureResult:
    """The smallest (at this scale) componentwise pure subrepresentation
    reached from x by alternating generation and purification.

    The purify step enlarges only vertices that fail the purity test, via
    the torsion-preimage construction, so an already-pure stage is a
    fixpoint.  The trace records every stage; each stage contains the
    previous one.
    """
    if x.representation != M:
        raise ValueError("element does not live in the representation")
    gens = subrep_generated_by(M, [x])
    stages = [ClosureStage(0, "generate", gens, True, _describe_stage(M, gens))]
    size_factors = []
    for _ in range(max_rounds):
        # purify the impure vertices
        new_gens = {}
        p_changed = False
        for v in M.quiver.vertices:
            g = gens[v]
            mod = M.vertex_modules[v]
            if is_pure_submodule(g, mod):
                new_gens[v] = g
            else:
                enlarged = pure_superset(g, mod)
                new_gens[v] = enlarged
                p_changed = True
                q, _ = quotient(mod, g)
                size_factors.append(
                    f"{v}: grew by torsion factors {list(q.invariant_factors)}"
                )
        if not p_changed:
            break
        gens = new_gens
        stages.append(
            ClosureStage(len(stages), "purify", gens, True, _describe_stage(M, gens))
        )
        # re-close under the arrow maps
        regenerated = subrep_generated_by(M, [], seed_gens=gens)
        g_changed = not _gens_equal(M, regenerated, gens)
        gens = regenerated
        stages.append(
            ClosureStage(len(stages), "generate", gens, g_changed, _describe_stage(M, gens))
        )
    else:
        raise RuntimeError(f"closure did not stabilize within {max_rounds} rounds")
    rep, incl = sub_representation(M, gens)
    if not is_componentwise_pure_subrep(M, gens):
        raise AssertionError("closure fixpoint is not componentwise pure (bug)")
    lat = _vertex_lattices(M, gens)[x.vertex]
    if not lat.contains(x.coords):
        raise AssertionError("closure lost the seed element (bug)")
    note = (
        "per-step growth bounded by the quotient torsion: " + "; ".join(size_factors)
        if size_factors
        else "no purification was needed"
    )
    return PureClosureResult(
        gens=gens, representation=rep, inclusion=incl, stages=tuple(stages), size_note=note
    )


# ---------------------------------------------------------------------------
# Filtrations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FiltrationStage:
    index: int
    gens: dict
    representation: Representation
    quotient_flat: bool
    description: str


@dataclass(frozen=True)
class Filtration:
    stages: tuple
    representation: Representation

    def trace_lines(self):
        out = []
        for s in self.stages:
            out.append(
                f"stage {s.index}: {s.description}; quotient componentwise flat: "
                f"{'yes' if s.quotient_flat else 'NO'}"
            )
        out.append(f"chain length {len(self.stages)}; union equals the input")
        return out


def _unabsorbed_element(F: Representation, lattices) -> RepElement | None:
    for v in F.quiver.vertices:
        g = F.vertex_modules[v].generators
        for i in range(g):
            coords = tuple(F.ring.one if k == i else F.ring.zero for k in range(g))
            if not lattices[v].contains(coords):
                return RepElement(F, v, coords)
    return None


def small_filtration(F: Representation, tt: TorsionTheorySpec | None = None) -> Filtration:
    """A finite chain 0 = F_0 ⊆ F_1 ⊆ ... ⊆ F_n = F of pure stages.

    Each step pure-closes one unabsorbed element in the quotient by the
    previous stage and pulls the result back; every stage is componentwise
    pure in F and every successive quotient is componentwise flat.
    Requires F componentwise flat.
    """
    from .rings import TorsionTheorySpec as TT

    tt = tt or (TT.trivial() if F.ring.is_field else TT.classical())
    if not classify_rep(F, tt).flat_cw:
        raise ValueError("filtration needs a componentwise flat representation")
    current = {
        v: Matrix.zeros(F.ring, F.vertex_modules[v].generators, 0) for v in F.quiver.vertices
    }
    stages = []
    guard = sum(F.vertex_modules[v].generators for v in F.quiver.vertices) + 1
    for step in range(1, guard + 1):
        lattices = _vertex_lattices(F, current)
        x = _unabsorbed_element(F, lattices)
        if x is None:
            break
        Q, proj = quotient_representation(F, current)
        xbar = RepElement(Q, x.vertex, x.coords)
        closure = pure_closure_rep(Q, xbar)
        new_gens = {}
        for v in F.quiver.vertices:
            new_gens[v] = current[v].hstack(closure.gens[v])
        # certify the new stage before committing
        stage_rep, _ = sub_representation(F, new_gens)
        if not is_componentwise_pure_subrep(F, new_gens):
            raise AssertionError("filtration stage is not componentwise pure (bug)")
        quotient_flat = _stage_quotient_flat(F, current, new_gens, tt)
        stages.append(
            FiltrationStage(
                index=step,
                gens=new_gens,
                representation=stage_rep,
                quotient_flat=quotient_flat,
                description=_describe_stage(F, new_gens),
            )
        )
        current = new_gens
    lattices = _vertex_lattices(F, current)
    if not F.is_zero():
        full = all(
            lattices[v].contains_columns(
                Matrix.identity(F.ring, F.vertex_modules[v].generators)
            )
            for v in F.quiver.vertices
        )
        if not full:
            raise AssertionError("filtration did not exhaust the representation (bug)")
    return Filtration(stages=tuple(stages), representation=F)


def _stage_quotient_flat(F, prev_gens, new_gens, tt) -> bool:
    """Componentwise flatness of (stage_k / stage_{k-1})."""
    stage_rep, incl = sub_representation(F, new_gens)
    # previous generators expressed in the new stage's coordinates
    coords = {}
    for v in F.quiver.vertices:
        g_new = new_gens[v]
        combined = g_new.hstack(F.vertex_modules[v].relations)
        cols = []
        prev = prev_gens[v]
        for j in range(prev.ncols):
            sol = solve(combined, prev.column(j))
            if sol is None:
                raise AssertionError("previous stage not inside the new stage (bug)")
            cols.append(tuple(sol[: g_new.ncols]))
        coords[v] = Matrix.from_columns(F.ring, cols, g_new.ncols)
    quot, _ = quotient_representation(stage_rep, coords)
    return classify_rep(quot, tt).flat_cw
