"""The category of quiver representations at desk scale.

A Representation assigns an FGModule to each vertex and a well-defined
ModuleMap to each arrow; a RepMorphism is a vertex-indexed family of maps
whose squares commute (certified at construction).  Kernels, cokernels,
images and finite direct sums are computed vertexwise with induced arrow
maps; hom groups solve the commuting-square system exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import AffineSystem, Lattice, Matrix, block_diagonal, solve
from .modules import FGModule, ModuleMap, quotient, submodule
from .quiver import Path, Quiver
from .rings import RingMismatchError


class ClosureBoundExceeded(RuntimeError):
    """Fixpoint closure did not stabilize within the configured bound."""


class Representation:
    __slots__ = ("quiver", "ring", "vertex_modules", "arrow_maps")

    def __init__(self, quiver: Quiver, ring, vertex_modules: dict, arrow_maps: dict):
        missing = [v for v in quiver.vertices if v not in vertex_modules]
        if missing:
            raise ValueError(f"missing vertex modules for {missing}")
        for v, mod in vertex_modules.items():
            if not quiver.has_vertex(v):
                raise ValueError(f"unknown vertex {v!r}")
            if mod.ring != ring:
                raise RingMismatchError(f"module at {v!r} over {mod.ring}, expected {ring}")
        maps = {}
        for a in quiver.arrows:
            if a.name not in arrow_maps:
                raise ValueError(f"missing arrow map for {a.name!r}")
            f = arrow_maps[a.name]
            if f.source != vertex_modules[a.source] or f.target != vertex_modules[a.target]:
                raise ValueError(f"arrow map {a.name!r} does not match its endpoint modules")
            maps[a.name] = f
        self.quiver = quiver
        self.ring = ring
        self.vertex_modules = {v: vertex_modules[v] for v in quiver.vertices}
        self.arrow_maps = maps

    @staticmethod
    def zero(quiver: Quiver, ring) -> "Representation":
        z = FGModule.zero(ring)
        return Representation(
            quiver, ring, {v: z for v in quiver.vertices}, {a.name: ModuleMap.zero(z, z) for a in quiver.arrows}
        )

    @staticmethod
    def from_matrices(quiver, ring, vertex_modules, arrow_matrices) -> "Representation":
        maps = {}
        for a in quiver.arrows:
            maps[a.name] = ModuleMap(
                vertex_modules[a.source], vertex_modules[a.target], arrow_matrices[a.name]
            )
        return Representation(quiver, ring, vertex_modules, maps)

    def module_at(self, v) -> FGModule:
        return self.vertex_modules[v]

    def map_at(self, arrow_name) -> ModuleMap:
        return self.arrow_maps[arrow_name]

    def path_map(self, path: Path) -> ModuleMap:
        """The composite module map along a path (identity on trivial paths)."""
        f = ModuleMap.identity(self.vertex_modules[path.source])
        for name in path.arrows:
            f = self.arrow_maps[name] @ f
        return f

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.vertex_modules.values())

    def describe(self) -> str:
        return ", ".join(f"{v}: {self.vertex_modules[v].describe()}" for v in self.quiver.vertices)

    def __eq__(self, other):
        return (
            isinstance(other, Representation)
            and self.quiver == other.quiver
            and self.ring == other.ring
            and self.vertex_modules == other.vertex_modules
            and all(
                self.arrow_maps[a.name].matrix == other.arrow_maps[a.name].matrix
                for a in self.quiver.arrows
            )
        )

    def __hash__(self):
        return hash(
            (
                self.quiver,
                tuple(self.vertex_modules[v] for v in self.quiver.vertices),
                tuple(self.arrow_maps[a.name].matrix for a in self.quiver.arrows),
            )
        )

    def __repr__(self):
        return f"Representation({self.describe()})"


class RepMorphism:
    __slots__ = ("source", "target", "components")

    def __init__(self, source: Representation, target: Representation, components: dict, check: bool = True):
        if source.quiver != target.quiver:
            raise ValueError("morphism between representations of different quivers")
        comp = {}
        for v in source.quiver.vertices:
            if v not in components:
                raise ValueError(f"missing component at {v!r}")
            f = components[v]
            if f.source != source.vertex_modules[v] or f.target != target.vertex_modules[v]:
                raise ValueError(f"component at {v!r} has wrong ends")
            comp[v] = f
        if check:
            for a in source.quiver.arrows:
                left = target.arrow_maps[a.name] @ comp[a.source]
                right = comp[a.target] @ source.arrow_maps[a.name]
                if not left.equals(right):
                    raise ValueError(f"square at arrow {a.name!r} does not commute")
        self.source = source
        self.target = target
        self.components = comp

    @staticmethod
    def identity(X: Representation) -> "RepMorphism":
        return RepMorphism(X, X, {v: ModuleMap.identity(X.vertex_modules[v]) for v in X.quiver.vertices}, check=False)

    @staticmethod
    def zero(X: Representation, Y: Representation) -> "RepMorphism":
        return RepMorphism(
            X, Y, {v: ModuleMap.zero(X.vertex_modules[v], Y.vertex_modules[v]) for v in X.quiver.vertices}, check=False
        )

    def __matmul__(self, other: "RepMorphism") -> "RepMorphism":
        if other.target != self.source:
            raise ValueError("composition mismatch")
        return RepMorphism(
            other.source,
            self.target,
            {v: self.components[v] @ other.components[v] for v in self.source.quiver.vertices},
            check=False,
        )

    def __add__(self, other):
        if self.source != other.source or self.target != other.target:
            raise ValueError("sum of morphisms with different ends")
        return RepMorphism(
            self.source,
            self.target,
            {v: self.components[v] + other.components[v] for v in self.source.quiver.vertices},
            check=False,
        )

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "RepMorphism":
        return RepMorphism(
            self.source, self.target, {v: self.components[v].scale(c) for v in self.source.quiver.vertices}, check=False
        )

    def equals(self, other: "RepMorphism") -> bool:
        return self.source == other.source and self.target == other.target and all(
            self.components[v].equals(other.components[v]) for v in self.source.quiver.vertices
        )

    def is_zero_map(self) -> bool:
        return all(f.is_zero_map() for f in self.components.values())

    def is_injective(self) -> bool:
        return all(f.is_injective() for f in self.components.values())

    def is_surjective(self) -> bool:
        return all(f.is_surjective() for f in self.components.values())

    def is_isomorphism(self) -> bool:
        return all(f.is_isomorphism() for f in self.components.values())

    def __repr__(self):
        return f"RepMorphism({self.source.describe()} -> {self.target.describe()})"


@dataclass(frozen=True)
class RepElement:
    """An element of a representation: a vertex plus module coordinates."""

    representation: Representation
    vertex: str
    coords: tuple

    def __post_init__(self):
        mod = self.representation.vertex_modules[self.vertex]
        object.__setattr__(self, "coords", mod.element(self.coords))

    def is_zero(self) -> bool:
        return self.representation.vertex_modules[self.vertex].is_zero_element(self.coords)


# ---------------------------------------------------------------------------
# Kernels, cokernels, images, direct sums
# ---------------------------------------------------------------------------


def _induced_arrow_map(src_mod, tgt_mod, gens_src, gens_tgt, ambient_map, ambient_tgt):
    """Arrow map between presented submodules, from the ambient matrix."""
    ring = ambient_map.ring
    images = ambient_map @ gens_src
    combined = gens_tgt.hstack(ambient_tgt.relations)
    cols = []
    for j in range(images.ncols):
        sol = solve(combined, images.column(j))
        if sol is None:
            raise ValueError("submodule is not closed under the arrow maps")
        cols.append(tuple(sol[: gens_tgt.ncols]))
    return ModuleMap(src_mod, tgt_mod, Matrix.from_columns(ring, cols, gens_tgt.ncols))


def sub_representation(M: Representation, gens: dict) -> tuple[Representation, "RepMorphism"]:
    """The subrepresentation with the given ambient generators per vertex.

    Raises if the generators are not closed under the arrow maps.
    """
    mods, incs = {}, {}
    for v in M.quiver.vertices:
        g = gens.get(v)
        if g is None:
            g = Matrix.zeros(M.ring, M.vertex_modules[v].generators, 0)
        mods[v], incs[v] = submodule(g, M.vertex_modules[v])
    maps = {}
    for a in M.quiver.arrows:
        maps[a.name] = _induced_arrow_map(
            mods[a.source],
            mods[a.target],
            incs[a.source].matrix,
            incs[a.target].matrix,
            M.arrow_maps[a.name].matrix,
            M.vertex_modules[a.target],
        )
    P = Representation(M.quiver, M.ring, mods, maps)
    incl = RepMorphism(P, M, incs, check=False)
    return P, incl


def quotient_representation(M: Representation, gens: dict) -> tuple[Representation, "RepMorphism"]:
    """Quotient of M by the subrepresentation generated per vertex."""
    mods, projs = {}, {}
    for v in M.quiver.vertices:
        g = gens.get(v)
        if g is None:
            g = Matrix.zeros(M.ring, M.vertex_modules[v].generators, 0)
        mods[v], projs[v] = quotient(M.vertex_modules[v], g)
    maps = {}
    for a in M.quiver.arrows:
        maps[a.name] = ModuleMap(mods[a.source], mods[a.target], M.arrow_maps[a.name].matrix)
    Q = Representation(M.quiver, M.ring, mods, maps)
    proj = RepMorphism(M, Q, projs, check=False)
    return Q, proj


def rep_kernel(eta: RepMorphism) -> tuple[Representation, RepMorphism]:
    X = eta.source
    gens = {}
    for v in X.quiver.vertices:
        f = eta.components[v]
        pre = f.target.relation_lattice.preimage(f.matrix)
        gens[v] = pre.gens
    return sub_representation(X, gens)


def rep_image(eta: RepMorphism) -> tuple[Representation, RepMorphism, RepMorphism]:
    """(image, mono into target, epi from source)."""
    Y = eta.target
    gens = {v: eta.components[v].matrix for v in Y.quiver.vertices}
    I, mono = sub_representation(Y, gens)
    epi = RepMorphism(
        eta.source,
        I,
        {
            v: ModuleMap(
                eta.source.vertex_modules[v],
                I.vertex_modules[v],
                Matrix.identity(Y.ring, eta.source.vertex_modules[v].generators),
            )
            for v in Y.quiver.vertices
        },
        check=False,
    )
    return I, mono, epi


def rep_cokernel(eta: RepMorphism) -> tuple[Representation, RepMorphism]:
    Y = eta.target
    gens = {v: eta.components[v].matrix for v in Y.quiver.vertices}
    return quotient_representation(Y, gens)


@dataclass(frozen=True)
class RepDirectSum:
    rep: Representation
    inject_left: RepMorphism
    inject_right: RepMorphism
    project_left: RepMorphism
    project_right: RepMorphism


def rep_direct_sum(X: Representation, Y: Representation) -> RepDirectSum:
    if X.quiver != Y.quiver or X.ring != Y.ring:
        raise ValueError("direct sum needs one quiver and one ring")
    ring = X.ring
    mods, i1, i2, p1, p2 = {}, {}, {}, {}, {}
    for v in X.quiver.vertices:
        a, b = X.vertex_modules[v], Y.vertex_modules[v]
        s = a.direct_sum(b)
        mods[v] = s
        ia = Matrix.identity(ring, a.generators)
        ib = Matrix.identity(ring, b.generators)
        za = Matrix.zeros(ring, b.generators, a.generators)
        zb = Matrix.zeros(ring, a.generators, b.generators)
        i1[v] = ModuleMap(a, s, ia.vstack(za), check=False)
        i2[v] = ModuleMap(b, s, zb.vstack(ib), check=False)
        p1[v] = ModuleMap(s, a, ia.hstack(zb), check=False)
        p2[v] = ModuleMap(s, b, za.hstack(ib), check=False)
    maps = {}
    for arr in X.quiver.arrows:
        am = X.arrow_maps[arr.name].matrix
        bm = Y.arrow_maps[arr.name].matrix
        maps[arr.name] = ModuleMap(
            mods[arr.source],
            mods[arr.target],
            block_diagonal(ring, [am, bm], [am.shape, bm.shape]),
            check=False,
        )
    S = Representation(X.quiver, ring, mods, maps)
    return RepDirectSum(
        rep=S,
        inject_left=RepMorphism(X, S, i1, check=False),
        inject_right=RepMorphism(Y, S, i2, check=False),
        project_left=RepMorphism(S, X, p1, check=False),
        project_right=RepMorphism(S, Y, p2, check=False),
    )


# ---------------------------------------------------------------------------
# Hom groups of representations
# ---------------------------------------------------------------------------


class RepHomGroup:
    """Hom(X, Y) as an FGModule plus realizing basis morphisms."""

    def __init__(self, X: Representation, Y: Representation, flat_lattice: Matrix, var_layout):
        self.source = X
        self.target = Y
        self._S = flat_lattice
        self._layout = var_layout  # list of (vertex, rows, cols, offset)
        ring = X.ring
        total = flat_lattice.nrows
        zero_cols = []
        for v, rows, cols, offset in var_layout:
            rel = Y.vertex_modules[v].relations
            for j in range(cols):
                for t in range(rel.ncols):
                    col = [ring.zero] * total
                    for i in range(rows):
                        col[offset + i * cols + j] = rel[i, t]
                    zero_cols.append(col)
        self._Z0 = Lattice(ring, total, Matrix.from_columns(ring, zero_cols, total))
        rel = self._Z0.preimage(self._S)
        self.group = FGModule(ring, self._S.ncols, rel.gens)
        self.basis = [self._devectorize(self._S.column(j)) for j in range(self._S.ncols)]

    def _devectorize(self, flat) -> RepMorphism:
        comps = {}
        ring = self.source.ring
        for v, rows, cols, offset in self._layout:
            rows_data = [[flat[offset + i * cols + j] for j in range(cols)] for i in range(rows)]
            comps[v] = ModuleMap(
                self.source.vertex_modules[v],
                self.target.vertex_modules[v],
                Matrix(ring, rows_data, cols),
                check=False,
            )
        return RepMorphism(self.source, self.target, comps, check=False)

    def _vectorize(self, eta: RepMorphism) -> tuple:
        flat = [self.source.ring.zero] * self._S.nrows
        for v, rows, cols, offset in self._layout:
            m = eta.components[v].matrix
            for i in range(rows):
                for j in range(cols):
                    flat[offset + i * cols + j] = m[i, j]
        return tuple(flat)

    def element(self, coeffs) -> RepMorphism:
        coeffs = self.group.element(coeffs)
        out = RepMorphism.zero(self.source, self.target)
        for c, f in zip(coeffs, self.basis):
            out = out + f.scale(c)
        return out

    def coordinates(self, eta: RepMorphism) -> tuple | None:
        flat = self._vectorize(eta)
        combo = self._S.hstack(self._Z0.gens)
        sol = solve(combo, flat)
        if sol is None:
            return None
        return tuple(sol[: self._S.ncols])

    def is_zero(self) -> bool:
        return self.group.is_zero()


def _morphism_system(X: Representation, Y: Representation):
    """The affine system whose solutions are morphisms X -> Y."""
    if X.quiver != Y.quiver or X.ring != Y.ring:
        raise RingMismatchError("hom needs one quiver and one ring")
    sys = AffineSystem(X.ring)
    vars_by_vertex = {}
    layout = []
    for v in X.quiver.vertices:
        rows = Y.vertex_modules[v].generators
        cols = X.vertex_modules[v].generators
        var = sys.add_var(v, rows, cols)
        vars_by_vertex[v] = var
        layout.append((v, rows, cols, var.offset))
    for v in X.quiver.vertices:
        rel = X.vertex_modules[v].relations
        if rel.ncols:
            sys.add_constraint(
                [(1, None, vars_by_vertex[v], rel)], mod=Y.vertex_modules[v].relations
            )
    for a in X.quiver.arrows:
        terms = [
            (1, Y.arrow_maps[a.name].matrix, vars_by_vertex[a.source], None),
            (-1, None, vars_by_vertex[a.target], X.arrow_maps[a.name].matrix),
        ]
        sys.add_constraint(terms, mod=Y.vertex_modules[a.target].relations)
    return sys, vars_by_vertex, layout


def rep_hom_group(X: Representation, Y: Representation) -> RepHomGroup:
    sys, _, layout = _morphism_system(X, Y)
    _, lattice = sys.solution_set()
    return RepHomGroup(X, Y, lattice.gens, layout)


# ---------------------------------------------------------------------------
# Generated subrepresentations
# ---------------------------------------------------------------------------


def subrep_generated_by(
    M: Representation, elements, seed_gens: dict | None = None, max_steps: int = 1000
) -> dict:
    """Ambient generators of the subrepresentation generated by elements.

    Closes the given elements (plus optional per-vertex seed generators)
    under the arrow maps until the vertex lattices stabilize.  On acyclic
    quivers this is a single sweep along paths; cyclic quivers use the
    fixpoint, aborting after max_steps in case of runaway growth.
    """
    ring = M.ring
    cols = {v: [] for v in M.quiver.vertices}
    for x in elements:
        if x.representation is not M and x.representation != M:
            raise ValueError("element does not live in the representation")
        cols[x.vertex].append(x.coords)
    if seed_gens:
        for v, g in seed_gens.items():
            cols[v].extend(g.columns())
    gens = {
        v: Matrix.from_columns(ring, cols[v], M.vertex_modules[v].generators)
        for v in M.quiver.vertices
    }

    def lattice(v, g):
        return M.vertex_modules[v].relation_lattice.sum(
            Lattice(ring, M.vertex_modules[v].generators, g)
        )

    for _ in range(max_steps):
        changed = False
        for a in M.quiver.arrows:
            img = M.arrow_maps[a.name].matrix @ gens[a.source]
            tgt = lattice(a.target, gens[a.target])
            new_cols = [img.column(j) for j in range(img.ncols) if not tgt.contains(img.column(j))]
            if new_cols:
                gens[a.target] = gens[a.target].hstack(
                    Matrix.from_columns(ring, new_cols, img.nrows)
                )
                changed = True
        if not changed:
            return gens
    raise ClosureBoundExceeded(f"closure did not stabilize within {max_steps} sweeps")
