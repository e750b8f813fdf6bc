"""Finitely generated modules with Smith-form presentations, and their maps.

An FGModule over Z, Q, or F_p is a cokernel presentation: ``generators``
free coordinates modulo the column lattice of a relations matrix.  The
normal form (invariant factors + free rank) is computed once at
construction; two modules are isomorphic exactly when the normal forms
agree.

Submodules are handled as matrices of ambient-coordinate columns, so the
same machinery serves purity tests, torsion submodules, and the
closure/filtration algorithms upstream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import AffineSystem, Lattice, Matrix, block_diagonal, smith_normal_form, solve
from .rings import CoefficientRing, RingMismatchError, TorsionTheorySpec


class FGModule:
    """A finitely presented module; relations has `generators` rows."""

    __slots__ = (
        "ring",
        "generators",
        "relations",
        "invariant_factors",
        "free_rank",
        "_sf",
        "_lattice",
    )

    def __init__(self, ring: CoefficientRing, generators: int, relations: Matrix | None = None):
        if generators < 0:
            raise ValueError("negative generator count")
        if relations is None:
            relations = Matrix.zeros(ring, generators, 0)
        if relations.ring != ring:
            raise RingMismatchError("relations matrix over the wrong ring")
        if relations.nrows != generators:
            raise ValueError(
                f"relations must have {generators} rows, got {relations.nrows}"
            )
        self.ring = ring
        self.generators = generators
        self.relations = relations
        self._sf = smith_normal_form(relations)
        self._lattice = None
        diag = self._sf.diagonal
        if ring.is_field:
            rank = sum(1 for d in diag if d != ring.zero)
            self.invariant_factors = ()
            self.free_rank = generators - rank
        else:
            self.invariant_factors = tuple(d for d in diag if d > 1)
            nonzero = sum(1 for d in diag if d != 0)
            self.free_rank = generators - nonzero

    # -- constructors ---------------------------------------------------

    @staticmethod
    def free(ring, rank: int) -> "FGModule":
        return FGModule(ring, rank)

    @staticmethod
    def zero(ring) -> "FGModule":
        return FGModule(ring, 0)

    @staticmethod
    def cyclic(ring, n: int) -> "FGModule":
        """Z/n over the integers (n = 0 gives Z); scalars act as usual."""
        return FGModule(ring, 1, Matrix(ring, [[n]]) if n else Matrix.zeros(ring, 1, 0))

    @staticmethod
    def from_invariant_factors(ring, factors, rank=0) -> "FGModule":
        entries = list(factors)
        gens = len(entries) + rank
        rel = Matrix.diagonal(ring, entries, nrows=gens, ncols=len(entries))
        return FGModule(ring, gens, rel)

    # -- structure --------------------------------------------------------

    @property
    def normal_form(self):
        return (self.invariant_factors, self.free_rank)

    @property
    def relation_lattice(self) -> Lattice:
        if self._lattice is None:
            lat = Lattice(self.ring, self.generators, self.relations)
            lat._sf = self._sf
            self._lattice = lat
        return self._lattice

    def is_zero(self) -> bool:
        return self.free_rank == 0 and not self.invariant_factors

    def is_isomorphic_to(self, other: "FGModule") -> bool:
        return self.ring == other.ring and self.normal_form == other.normal_form

    def exponent(self) -> int:
        """Exponent of the torsion part (1 when torsion free)."""
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def size(self) -> int | None:
        """Number of elements when finite, else None."""
        if self.ring.is_field:
            p = getattr(self.ring, "p", None)
            if p is not None:
                return p**self.free_rank
            return 1 if self.is_zero() else None
        if self.free_rank > 0:
            return None
        n = 1
        for d in self.invariant_factors:
            n *= d
        return n

    def element(self, coords) -> tuple:
        coords = tuple(self.ring.element(c) for c in coords)
        if len(coords) != self.generators:
            raise ValueError(f"expected {self.generators} coordinates")
        return coords

    def is_zero_element(self, coords) -> bool:
        return self.relation_lattice.contains(self.element(coords))

    def elements_equal(self, a, b) -> bool:
        a, b = self.element(a), self.element(b)
        return self.is_zero_element(tuple(x - y for x, y in zip(a, b)))

    def canonical_key(self, coords) -> tuple:
        """A canonical token for the residue class of an element.

        Computed in Smith coordinates: torsion positions reduce mod their
        invariant factor, unit positions vanish, free positions pass
        through.  Equal keys iff equal elements.
        """
        coords = self.element(coords)
        y = self._sf.U.apply(coords)
        diag = self._sf.diagonal
        zero = self.ring.zero
        key = []
        for i in range(self.generators):
            d = diag[i] if i < len(diag) else zero
            if d == zero:
                key.append(y[i])
            elif self.ring.is_field:
                continue  # unit relation kills the coordinate
            elif d == 1:
                continue
            else:
                key.append(y[i] % d)
        return tuple(key)

    def describe(self) -> str:
        """Canonical human-readable shape, e.g. 'Z^2 x Z/2 x Z/6'."""
        if self.is_zero():
            return "0"
        name = self.ring.kind
        parts = []
        if self.free_rank == 1:
            parts.append(name)
        elif self.free_rank > 1:
            parts.append(f"{name}^{self.free_rank}")
        for d in self.invariant_factors:
            parts.append(f"{name}/{d}")
        return " x ".join(parts)

    def direct_sum(self, other: "FGModule") -> "FGModule":
        if self.ring != other.ring:
            raise RingMismatchError("direct sum over mismatched rings")
        rel = block_diagonal(
            self.ring,
            [self.relations, other.relations],
            [self.relations.shape, other.relations.shape],
        )
        return FGModule(self.ring, self.generators + other.generators, rel)

    def power(self, n: int) -> "FGModule":
        out = FGModule.zero(self.ring)
        for _ in range(n):
            out = out.direct_sum(self)
        return out

    # -- torsion ---------------------------------------------------------

    def torsion_generators(self, tt: TorsionTheorySpec) -> Matrix:
        """Ambient-coordinate generators of the tt-torsion submodule."""
        tt.validate_for(self.ring)
        if self.ring.is_field:
            return Matrix.zeros(self.ring, self.generators, 0)
        cols = []
        diag = self._sf.diagonal
        uinv = self._sf.U_inv
        for i, d in enumerate(diag):
            if d <= 1:
                continue
            if tt.kind == "classical":
                cols.append(uinv.column(i))
            else:
                p = tt.p
                e = 0
                dd = d
                while dd % p == 0:
                    dd //= p
                    e += 1
                if e:
                    scale = d // (p**e)
                    cols.append(tuple(scale * x for x in uinv.column(i)))
        return Matrix.from_columns(self.ring, cols, self.generators)

    def __eq__(self, other):
        return (
            isinstance(other, FGModule)
            and self.ring == other.ring
            and self.generators == other.generators
            and self.relations == other.relations
        )

    def __hash__(self):
        return hash((self.ring, self.generators, self.relations))

    def __repr__(self):
        return f"FGModule({self.describe()})"


# ---------------------------------------------------------------------------
# Module maps
# ---------------------------------------------------------------------------


class ModuleMap:
    """A homomorphism given by its matrix on generators.

    Construction certifies well-definedness: the matrix must carry every
    relation of the source into the relation lattice of the target
    (decidable by an exact linear solve).
    """

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: FGModule, target: FGModule, matrix: Matrix, check: bool = True):
        if source.ring != target.ring or matrix.ring != source.ring:
            raise RingMismatchError("map pieces over mismatched rings")
        if matrix.shape != (target.generators, source.generators):
            raise ValueError(
                f"matrix shape {matrix.shape} != ({target.generators}, {source.generators})"
            )
        if check and source.relations.ncols:
            moved = matrix @ source.relations
            if not target.relation_lattice.contains_columns(moved):
                raise ValueError("matrix does not preserve the relations (not well defined)")
        self.source = source
        self.target = target
        self.matrix = matrix

    @staticmethod
    def identity(module: FGModule) -> "ModuleMap":
        return ModuleMap(module, module, Matrix.identity(module.ring, module.generators), check=False)

    @staticmethod
    def zero(source: FGModule, target: FGModule) -> "ModuleMap":
        return ModuleMap(source, target, Matrix.zeros(source.ring, target.generators, source.generators), check=False)

    def __matmul__(self, other: "ModuleMap") -> "ModuleMap":
        """Composition: (self @ other)(x) = self(other(x))."""
        if other.target != self.source:
            raise ValueError("composition mismatch")
        return ModuleMap(other.source, self.target, self.matrix @ other.matrix, check=False)

    def apply(self, coords) -> tuple:
        return self.matrix.apply(self.source.element(coords))

    def equals(self, other: "ModuleMap") -> bool:
        if self.source != other.source or self.target != other.target:
            return False
        diff = self.matrix - other.matrix
        return self.target.relation_lattice.contains_columns(diff)

    def is_zero_map(self) -> bool:
        return self.target.relation_lattice.contains_columns(self.matrix)

    def __add__(self, other: "ModuleMap") -> "ModuleMap":
        if self.source != other.source or self.target != other.target:
            raise ValueError("sum of maps with different ends")
        return ModuleMap(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return ModuleMap(self.source, self.target, -self.matrix, check=False)

    def scale(self, c) -> "ModuleMap":
        return ModuleMap(self.source, self.target, self.matrix.scale(c), check=False)

    def is_injective(self) -> bool:
        pre = self.target.relation_lattice.preimage(self.matrix)
        return self.source.relation_lattice.contains_lattice(pre)

    def is_surjective(self) -> bool:
        reach = self.target.relation_lattice.sum(
            Lattice(self.target.ring, self.target.generators, self.matrix)
        )
        return reach.contains_columns(Matrix.identity(self.target.ring, self.target.generators))

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def __repr__(self):
        return f"ModuleMap({self.source.describe()} -> {self.target.describe()})"


# ---------------------------------------------------------------------------
# Kernel / image / cokernel
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MapFactorization:
    """kernel >-> source ->> image >-> target ->> cokernel, all exact."""

    kernel: FGModule
    kernel_inclusion: ModuleMap
    image: FGModule
    image_inclusion: ModuleMap
    image_projection: ModuleMap  # source ->> image
    cokernel: FGModule
    cokernel_projection: ModuleMap


def submodule(gens: Matrix, ambient: FGModule) -> tuple[FGModule, ModuleMap]:
    """Present the submodule generated by ambient-coordinate columns."""
    if gens.nrows != ambient.generators or gens.ring != ambient.ring:
        raise ValueError("generators do not live in the ambient module")
    rel = ambient.relation_lattice.preimage(gens)
    mod = FGModule(ambient.ring, gens.ncols, rel.gens)
    return mod, ModuleMap(mod, ambient, gens, check=False)


def quotient(ambient: FGModule, gens: Matrix) -> tuple[FGModule, ModuleMap]:
    """Quotient of ambient by the submodule generated by the columns."""
    if gens.nrows != ambient.generators:
        raise ValueError("generators do not live in the ambient module")
    q = FGModule(ambient.ring, ambient.generators, ambient.relations.hstack(gens))
    proj = ModuleMap(ambient, q, Matrix.identity(ambient.ring, ambient.generators), check=False)
    return q, proj


def map_factorization_data(phi: ModuleMap) -> MapFactorization:
    src, tgt = phi.source, phi.target
    ring = phi.matrix.ring
    # kernel: preimage of the target relations, as a module over the source
    ker_lat = tgt.relation_lattice.preimage(phi.matrix)
    kernel, kernel_inc = submodule(ker_lat.gens, src)
    # image: generated by the images of the source generators
    image, image_inc = submodule(phi.matrix, tgt)
    image_proj = ModuleMap(src, image, Matrix.identity(ring, src.generators), check=False)
    cokernel, coker_proj = quotient(tgt, phi.matrix)
    return MapFactorization(
        kernel=kernel,
        kernel_inclusion=kernel_inc,
        image=image,
        image_inclusion=image_inc,
        image_projection=image_proj,
        cokernel=cokernel,
        cokernel_projection=coker_proj,
    )


# ---------------------------------------------------------------------------
# Hom groups
# ---------------------------------------------------------------------------


class HomGroup:
    """Hom(A, B) presented as an FGModule with realizing basis maps.

    ``group`` has one generator per basis map; an assignment of integer
    (or field) coefficients to the generators names the map
    sum(c_i * basis_i), and two assignments name the same map exactly when
    they differ by a relation.
    """

    def __init__(self, source: FGModule, target: FGModule, solution_lattice: Matrix):
        self.source = source
        self.target = target
        self._S = solution_lattice  # columns = flattened well-defined matrices
        ring = source.ring
        b, a = target.generators, source.generators
        zero_cols = []
        for j in range(a):
            for t in range(target.relations.ncols):
                col = [ring.zero] * (b * a)
                for i in range(b):
                    col[i * a + j] = target.relations[i, t]
                zero_cols.append(col)
        self._Z0 = Lattice(ring, b * a, Matrix.from_columns(ring, zero_cols, b * a))
        rel = self._Z0.preimage(self._S)
        self.group = FGModule(ring, self._S.ncols, rel.gens)
        self.basis = [self._devectorize(self._S.column(j)) for j in range(self._S.ncols)]

    def _devectorize(self, flat) -> ModuleMap:
        b, a = self.target.generators, self.source.generators
        rows = [[flat[i * a + j] for j in range(a)] for i in range(b)]
        return ModuleMap(self.source, self.target, Matrix(self.source.ring, rows, a), check=False)

    def element(self, coeffs) -> ModuleMap:
        coeffs = self.group.element(coeffs)
        out = ModuleMap.zero(self.source, self.target)
        for c, f in zip(coeffs, self.basis):
            out = out + f.scale(c)
        return out

    def coordinates(self, f: ModuleMap) -> tuple | None:
        """Express a map in the presentation, or None if it is not a hom."""
        if f.source != self.source or f.target != self.target:
            raise ValueError("map has the wrong ends")
        flat = tuple(x for row in f.matrix.rows for x in row)
        combo = self._S.hstack(self._Z0.gens)
        sol = solve(combo, flat)
        if sol is None:
            return None
        return tuple(sol[: self._S.ncols])

    def is_zero(self) -> bool:
        return self.group.is_zero()


def hom_module(A: FGModule, B: FGModule) -> HomGroup:
    """The homomorphism group Hom(A, B) with a realizing basis.

    >>> from qrep.rings import ZZ
    >>> hom_module(FGModule.cyclic(ZZ, 4), FGModule.cyclic(ZZ, 6)).group.describe()
    'Z/2'
    """
    if A.ring != B.ring:
        raise RingMismatchError("hom over mismatched rings")
    sys = AffineSystem(A.ring)
    F = sys.add_var("F", B.generators, A.generators)
    if A.relations.ncols:
        sys.add_constraint([(1, None, F, A.relations)], mod=B.relations)
    _, lattice = sys.solution_set()
    if not sys.vars[0].size:
        return HomGroup(A, B, Matrix.zeros(A.ring, 0, 0))
    return HomGroup(A, B, lattice.gens)


# ---------------------------------------------------------------------------
# Purity
# ---------------------------------------------------------------------------


def _divisors(n: int) -> list[int]:
    out = [d for d in range(1, n + 1) if n % d == 0]
    return out


def tensor_with_cyclic(M: FGModule, n: int) -> FGModule:
    """M (x) Z/n: the same generators with n*identity added to the relations."""
    extra = Matrix.diagonal(M.ring, [n] * M.generators)
    return FGModule(M.ring, M.generators, M.relations.hstack(extra))


def purity_test_moduli(gens: Matrix, B: FGModule) -> list[int]:
    """The documented finite test set for purity of <gens> in B over Z.

    Divisors of d_max(B) * exp(torsion(B/A)).  Sufficiency: if x = n*b lies
    in A, the class of b in B/A is killed by g = gcd(n, exp torsion(B/A)),
    and A ∩ gB = gA already forces x into nA; so the divisors of the
    quotient exponent alone suffice, and this set contains them.
    """
    quot, _ = quotient(B, gens)
    bound = max(B.invariant_factors[-1] if B.invariant_factors else 1, 1)
    bound *= quot.exponent()
    return [d for d in _divisors(bound) if d > 1]


def is_pure_submodule(gens: Matrix, B: FGModule) -> bool:
    """Does the inclusion <gens> ⊆ B stay injective under every Z/n tensor?

    Over a field every submodule is pure.  Over Z the check runs over the
    finite test set of purity_test_moduli (sufficient for finitely
    generated modules over a PID).
    """
    if gens.nrows != B.generators or gens.ring != B.ring:
        raise ValueError("generators do not live in the ambient module")
    if B.ring.is_field:
        return True
    A, inc = submodule(gens, B)
    for n in purity_test_moduli(gens, B):
        An = tensor_with_cyclic(A, n)
        Bn = tensor_with_cyclic(B, n)
        inc_n = ModuleMap(An, Bn, inc.matrix, check=False)
        if not inc_n.is_injective():
            return False
    return True


def pure_superset(gens: Matrix, B: FGModule) -> Matrix:
    """A pure submodule P with <gens> ⊆ P ⊆ B: the torsion preimage.

    P is the preimage in B of the torsion submodule of B/<gens>, so B/P is
    torsion free, hence P is a direct summand (pure).  Over a field the
    quotient has no torsion and P = <gens>.
    """
    if gens.nrows != B.generators:
        raise ValueError("generators do not live in the ambient module")
    quot, _ = quotient(B, gens)
    extra = quot.torsion_generators(
        TorsionTheorySpec.classical() if not B.ring.is_field else TorsionTheorySpec.trivial()
    )
    return gens.hstack(extra)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


def module_is_flat(M: FGModule) -> bool:
    """Flat over these backends = torsion free = no invariant factors."""
    return not M.invariant_factors


def module_is_injective(M: FGModule) -> bool:
    """Over fields every module; over Z no nonzero f.g. module is injective."""
    if M.ring.is_field:
        return True
    return M.is_zero()


def module_is_divisible(M: FGModule) -> bool:
    if M.ring.is_field:
        return True
    return M.is_zero()


@dataclass(frozen=True)
class ModuleClassification:
    torsion: bool
    torsion_free: bool
    flat: bool
    injective: bool
    divisible: bool
    torsion_submodule: FGModule
    torsion_inclusion: ModuleMap


def classify_module(M: FGModule, tt: TorsionTheorySpec) -> ModuleClassification:
    tt.validate_for(M.ring)
    t_gens = M.torsion_generators(tt)
    t_mod, t_inc = submodule(t_gens, M)
    if M.ring.is_field:
        torsion = M.is_zero()
        torsion_free = True
    elif tt.kind == "classical":
        torsion = M.free_rank == 0
        torsion_free = not M.invariant_factors
    else:
        p = tt.p
        torsion = M.free_rank == 0 and all(_is_p_power(d, p) for d in M.invariant_factors)
        torsion_free = all(d % p != 0 for d in M.invariant_factors)
    return ModuleClassification(
        torsion=torsion,
        torsion_free=torsion_free,
        flat=module_is_flat(M),
        injective=module_is_injective(M),
        divisible=module_is_divisible(M),
        torsion_submodule=t_mod,
        torsion_inclusion=t_inc,
    )


def _is_p_power(d: int, p: int) -> bool:
    while d % p == 0:
        d //= p
    return d == 1


# ---------------------------------------------------------------------------
# Sections
# ---------------------------------------------------------------------------


def has_section(psi: ModuleMap) -> ModuleMap | None:
    """A map s with psi∘s = id on the target, when one exists.

    The section equation is linear in the entries of s (together with the
    well-definedness constraint), so existence is decided exactly.
    """
    ring = psi.matrix.ring
    tgt, src = psi.target, psi.source
    sys = AffineSystem(ring)
    S = sys.add_var("S", src.generators, tgt.generators)
    if tgt.relations.ncols:
        sys.add_constraint([(1, None, S, tgt.relations)], mod=src.relations)
    sys.add_constraint(
        [(1, psi.matrix, S, None)],
        rhs=Matrix.identity(ring, tgt.generators),
        mod=tgt.relations if tgt.relations.ncols else None,
    )
    sol = sys.solve()
    if sol is None:
        return None
    return ModuleMap(tgt, src, sol["S"])


def is_split_epimorphism(psi: ModuleMap) -> bool:
    return psi.is_surjective() and has_section(psi) is not None
