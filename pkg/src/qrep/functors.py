"""The vertex adjunction: path-sum extension and evaluation.

For a finite acyclic quiver, the extension functor places one copy of a
module at every path out of the chosen vertex, with arrows relabelling
copies; evaluation reads off a vertex module.  The unit/counit transports
realize the natural bijection between the two hom sets, and over prime
fields both sides can be counted exhaustively.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .linalg import Matrix, block_diagonal
from .modules import FGModule, ModuleMap
from .quiver import CyclicQuiverError, Quiver
from .reps import RepMorphism, Representation
from .rings import PrimeField


@dataclass(frozen=True)
class VertexExtension:
    """S_v(M) together with the path bookkeeping needed for transport."""

    representation: Representation
    vertex: str
    module: FGModule
    paths: dict  # target vertex -> tuple of Paths, in enumeration order

    def trivial_index(self) -> int:
        return self.paths[self.vertex].index(
            next(p for p in self.paths[self.vertex] if p.is_trivial)
        )


def s_functor(quiver: Quiver, v: str, M: FGModule) -> VertexExtension:
    """One copy of M per path out of v; arrows send copy p to copy p-then-a."""
    if not quiver.is_acyclic():
        raise CyclicQuiverError("the extension functor needs a finite acyclic quiver")
    ring = M.ring
    paths = {w: tuple(quiver.paths_between(v, w)) for w in quiver.vertices}
    mods = {w: M.power(len(paths[w])) for w in quiver.vertices}
    g = M.generators
    maps = {}
    for a in quiver.arrows:
        src_paths = paths[a.source]
        tgt_paths = paths[a.target]
        rows = Matrix.zeros(ring, len(tgt_paths) * g, len(src_paths) * g).to_lists()
        for s_idx, p in enumerate(src_paths):
            extended = p.then(quiver.path_by_arrows([a.name]))
            t_idx = tgt_paths.index(extended)
            for r in range(g):
                rows[t_idx * g + r][s_idx * g + r] = ring.one
        maps[a.name] = ModuleMap(
            mods[a.source], mods[a.target], Matrix(ring, rows, len(src_paths) * g), check=False
        )
    rep = Representation(quiver, ring, mods, maps)
    return VertexExtension(representation=rep, vertex=v, module=M, paths=paths)


def s_functor_on_map(quiver: Quiver, v: str, f: ModuleMap) -> tuple[VertexExtension, VertexExtension, RepMorphism]:
    """The extension applied to a module map, as a morphism of extensions."""
    src = s_functor(quiver, v, f.source)
    tgt = s_functor(quiver, v, f.target)
    comps = {}
    for w in quiver.vertices:
        k = len(src.paths[w])
        comps[w] = ModuleMap(
            src.representation.vertex_modules[w],
            tgt.representation.vertex_modules[w],
            block_diagonal(f.matrix.ring, [f.matrix] * k, [f.matrix.shape] * k),
            check=False,
        )
    return src, tgt, RepMorphism(src.representation, tgt.representation, comps, check=False)


def t_functor(v: str, X: Representation) -> FGModule:
    """Evaluation at a vertex."""
    return X.vertex_modules[v]


# ---------------------------------------------------------------------------
# Transport along the adjunction
# ---------------------------------------------------------------------------


def adjunction_to_representation(ext: VertexExtension, X: Representation, f: ModuleMap) -> RepMorphism:
    """Module map M -> X(v) to the morphism S_v(M) -> X (copy p goes via X(p))."""
    quiver = ext.representation.quiver
    if f.source != ext.module or f.target != X.vertex_modules[ext.vertex]:
        raise ValueError("map must go from the extended module to X at the base vertex")
    comps = {}
    for w in quiver.vertices:
        blocks = [(X.path_map(p) @ f).matrix for p in ext.paths[w]]
        if blocks:
            mat = blocks[0]
            for b in blocks[1:]:
                mat = mat.hstack(b)
        else:
            mat = Matrix.zeros(X.ring, X.vertex_modules[w].generators, 0)
        comps[w] = ModuleMap(ext.representation.vertex_modules[w], X.vertex_modules[w], mat, check=False)
    return RepMorphism(ext.representation, X, comps)


def adjunction_to_module(ext: VertexExtension, X: Representation, eta: RepMorphism) -> ModuleMap:
    """Morphism S_v(M) -> X to the map M -> X(v): restrict to the trivial copy."""
    if eta.source != ext.representation or eta.target != X:
        raise ValueError("morphism must go from the extension to X")
    g = ext.module.generators
    idx = ext.trivial_index()
    comp = eta.components[ext.vertex].matrix
    cols = [comp.column(idx * g + r) for r in range(g)]
    mat = Matrix.from_columns(X.ring, cols, X.vertex_modules[ext.vertex].generators)
    return ModuleMap(ext.module, X.vertex_modules[ext.vertex], mat, check=False)


@dataclass(frozen=True)
class AdjunctionCardCheck:
    module_side: int
    representation_side: int

    @property
    def equal(self) -> bool:
        return self.module_side == self.representation_side


def adjunction_card_check(
    quiver: Quiver, v: str, M: FGModule, X: Representation, limit: int = 200000
) -> AdjunctionCardCheck:
    """Exhaustively count both hom sets over a prime field and compare.

    The module side enumerates all matrices M -> X(v) and filters
    well-definedness; the representation side enumerates all component
    families and filters well-definedness plus commuting squares.
    """
    ring = M.ring
    if not isinstance(ring, PrimeField):
        raise ValueError("the cardinality check needs a prime-field backend (finite hom sets)")
    p = ring.p

    def count_module_maps(A: FGModule, B: FGModule) -> int:
        cells = B.generators * A.generators
        if p**cells > limit:
            raise ValueError("enumeration too large; shrink the instance")
        seen = set()
        for entries in itertools.product(range(p), repeat=cells):
            mat = Matrix(ring, [entries[i * A.generators : (i + 1) * A.generators] for i in range(B.generators)], A.generators)
            if A.relations.ncols and not B.relation_lattice.contains_columns(mat @ A.relations):
                continue
            seen.add(tuple(B.canonical_key(mat.column(j)) for j in range(A.generators)))
        return len(seen)

    module_side = count_module_maps(M, X.vertex_modules[v])

    ext = s_functor(quiver, v, M)
    S = ext.representation
    cells = sum(
        X.vertex_modules[w].generators * S.vertex_modules[w].generators for w in quiver.vertices
    )
    if p**cells > limit:
        raise ValueError("enumeration too large; shrink the instance")
    seen_morphisms = set()
    shapes = [
        (w, X.vertex_modules[w].generators, S.vertex_modules[w].generators)
        for w in quiver.vertices
    ]
    for entries in itertools.product(range(p), repeat=cells):
        offset = 0
        comps = {}
        ok = True
        for w, rows, cols in shapes:
            block = entries[offset : offset + rows * cols]
            offset += rows * cols
            mat = Matrix(ring, [block[i * cols : (i + 1) * cols] for i in range(rows)], cols)
            src = S.vertex_modules[w]
            tgt = X.vertex_modules[w]
            if src.relations.ncols and not tgt.relation_lattice.contains_columns(mat @ src.relations):
                ok = False
                break
            comps[w] = ModuleMap(src, tgt, mat, check=False)
        if not ok:
            continue
        for a in quiver.arrows:
            left = X.arrow_maps[a.name] @ comps[a.source]
            right = comps[a.target] @ S.arrow_maps[a.name]
            if not left.equals(right):
                ok = False
                break
        if ok:
            # matrices equal as maps collapse to one morphism
            key = tuple(
                tuple(
                    X.vertex_modules[w].canonical_key(comps[w].matrix.column(j))
                    for j in range(comps[w].matrix.ncols)
                )
                for w, _, _ in shapes
            )
            seen_morphisms.add(key)
    return AdjunctionCardCheck(module_side=module_side, representation_side=len(seen_morphisms))
