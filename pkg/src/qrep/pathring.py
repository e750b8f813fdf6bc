"""The path ring of a quiver and its action on representations.

Basis paths multiply by composition (zero when endpoints do not meet).
The multiplicative unit of the finite path ring is the sum of the vertex
idempotents, which makes elements like "(sum of rotated full cycles) - 1"
genuine finite ring elements on loops.
"""

from __future__ import annotations

from dataclasses import dataclass

from .linalg import Matrix
from .modules import FGModule, ModuleMap
from .quiver import Path, Quiver, QuiverStructureError
from .reps import RepElement, Representation
from .rings import RingMismatchError


class PathRingElement:
    """A finite linear combination of paths with coefficients in the ring."""

    __slots__ = ("quiver", "ring", "terms")

    def __init__(self, quiver: Quiver, ring, terms: dict | None = None):
        clean = {}
        if terms:
            for path, coeff in terms.items():
                coeff = ring.element(coeff)
                if coeff == ring.zero:
                    continue
                clean[path] = coeff
        self.quiver = quiver
        self.ring = ring
        self.terms = clean

    # -- constructors ---------------------------------------------------

    @staticmethod
    def zero(quiver, ring) -> "PathRingElement":
        return PathRingElement(quiver, ring)

    @staticmethod
    def of_path(quiver, ring, path: Path) -> "PathRingElement":
        return PathRingElement(quiver, ring, {path: ring.one})

    @staticmethod
    def vertex_unit(quiver, ring, v: str) -> "PathRingElement":
        return PathRingElement.of_path(quiver, ring, Path.trivial(v))

    @staticmethod
    def one(quiver, ring) -> "PathRingElement":
        """The sum of all vertex idempotents (the local-unit '1')."""
        return PathRingElement(
            quiver, ring, {Path.trivial(v): ring.one for v in quiver.vertices}
        )

    # -- ring structure ---------------------------------------------------

    def _check(self, other):
        if self.quiver != other.quiver or self.ring != other.ring:
            raise RingMismatchError("path-ring elements over different quivers or rings")

    def __add__(self, other):
        self._check(other)
        terms = dict(self.terms)
        for p, c in other.terms.items():
            terms[p] = self.ring.add(terms.get(p, self.ring.zero), c)
        return PathRingElement(self.quiver, self.ring, terms)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = self.ring.element(c)
        return PathRingElement(
            self.quiver, self.ring, {p: self.ring.mul(c, x) for p, x in self.terms.items()}
        )

    def __neg__(self):
        return self.scale(-1)

    def __mul__(self, other: "PathRingElement") -> "PathRingElement":
        """Composition product: (s*t) acts as 'apply t, then s'."""
        self._check(other)
        terms: dict[Path, object] = {}
        ring = self.ring
        for p, cp in self.terms.items():
            for q, cq in other.terms.items():
                if q.target != p.source:
                    continue
                comp = q.then(p)
                terms[comp] = ring.add(terms.get(comp, ring.zero), ring.mul(cp, cq))
        return PathRingElement(self.quiver, ring, terms)

    def is_zero(self) -> bool:
        return not self.terms

    def support(self):
        return sorted(self.terms, key=lambda p: (p.source, p.target, p.arrows))

    def __eq__(self, other):
        return (
            isinstance(other, PathRingElement)
            and self.quiver == other.quiver
            and self.ring == other.ring
            and self.terms == other.terms
        )

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*{p!r}" for p, c in sorted(self.terms.items(), key=lambda kv: repr(kv[0])))


# ---------------------------------------------------------------------------
# Action on representations
# ---------------------------------------------------------------------------


def apply_path(path: Path, x: RepElement) -> RepElement:
    """Strict single-path application; the path must start where x lives."""
    if path.source != x.vertex:
        raise ValueError(
            f"path starts at {path.source!r} but the element lives at {x.vertex!r}"
        )
    X = x.representation
    return RepElement(X, path.target, X.path_map(path).apply(x.coords))


def act(s: PathRingElement, x: RepElement) -> dict[str, tuple]:
    """Apply a path-ring element to an element, as a vertex-indexed family.

    Only paths starting at the element's vertex contribute; the result may
    be supported on several vertices.  Works on cyclic quivers since path
    evaluation just composes arrow maps.
    """
    X = x.representation
    if X.quiver != s.quiver:
        raise ValueError("path-ring element and representation live on different quivers")
    ring = X.ring
    out: dict[str, list] = {}
    for path, coeff in s.terms.items():
        if path.source != x.vertex:
            continue
        value = X.path_map(path).apply(x.coords)
        acc = out.setdefault(path.target, [ring.zero] * len(value))
        for i, val in enumerate(value):
            acc[i] = ring.add(acc[i], ring.mul(coeff, val))
    return {v: tuple(vals) for v, vals in out.items() if vals}


def family_is_zero(X: Representation, family: dict[str, tuple]) -> bool:
    return all(X.vertex_modules[v].is_zero_element(val) for v, val in family.items())


def act_on_generators(s: PathRingElement, X: Representation) -> dict:
    """Images of every vertex-module generator under the action."""
    out = {}
    for v in X.quiver.vertices:
        g = X.vertex_modules[v].generators
        for i in range(g):
            coords = tuple(X.ring.one if k == i else X.ring.zero for k in range(g))
            out[(v, i)] = act(s, RepElement(X, v, coords))
    return out


# ---------------------------------------------------------------------------
# The n-loop shift representation and its annihilator
# ---------------------------------------------------------------------------


def nloop_representation(n: int, E: FGModule) -> Representation:
    """Each vertex carries E^n; every arrow is the cyclic coordinate shift.

    The shift sends (x_1, ..., x_n) to (x_n, x_1, ..., x_{n-1}).
    """
    if n < 1:
        raise ValueError("the loop needs at least one vertex")
    quiver = Quiver.loop(n)
    ring = E.ring
    En = E.power(n)
    g = E.generators
    shift_rows = []
    for i in range(n):
        src_block = (i - 1) % n
        for r in range(g):
            row = [ring.zero] * (n * g)
            row[src_block * g + r] = ring.one
            shift_rows.append(row)
    shift = Matrix(ring, shift_rows, n * g)
    maps = {a.name: ModuleMap(En, En, shift) for a in quiver.arrows}
    return Representation(quiver, ring, {v: En for v in quiver.vertices}, maps)


def full_cycle_annihilator(quiver: Quiver, ring) -> PathRingElement:
    """(sum over vertices of the full cycle at that vertex) - 1 on an n-loop."""
    if quiver.family != "n_loop":
        raise QuiverStructureError("annihilator element is defined on n_loop quivers")
    s = PathRingElement.zero(quiver, ring)
    for v in quiver.vertices:
        arrows = []
        cur = v
        while True:
            a = quiver.arrows_from(cur)[0]
            arrows.append(a.name)
            cur = a.target
            if cur == v:
                break
        s = s + PathRingElement.of_path(quiver, ring, quiver.path_by_arrows(arrows))
    return s - PathRingElement.one(quiver, ring)


@dataclass(frozen=True)
class AnnihilatorReport:
    annihilates: bool
    element_nonzero: bool
    condition_i: bool | None
    condition_ii: bool | None
    divisible: bool | None
    injective_verdict: str
    vacuous: bool

    def lines(self):
        if self.vacuous:
            return ["representation is zero: vacuous, divisibility test skipped"]
        return [
            f"annihilates: {'yes' if self.annihilates else 'no'}",
            f"element nonzero in path ring: {'yes' if self.element_nonzero else 'no'}",
            f"condition (i): {_fmt(self.condition_i)}",
            f"condition (ii): {_fmt(self.condition_ii)}",
            f"divisible: {_fmt(self.divisible)}",
            f"injective: {self.injective_verdict}",
        ]


def _fmt(b):
    return "-" if b is None else ("yes" if b else "no")


def annihilator_witness(quiver: Quiver, X: Representation) -> AnnihilatorReport:
    """Build the cycle annihilator and certify non-injectivity of X.

    The element kills every generator, yet is nonzero in the path ring; a
    module with a nonzero annihilator cannot be divisible, and injective
    modules over the path ring are divisible, so X is not injective even
    though the vertexwise conditions (i) and (ii) hold over a field.
    """
    if quiver.family != "n_loop":
        raise QuiverStructureError("the witness is defined on n_loop quivers")
    if X.quiver != quiver:
        raise ValueError("representation lives on a different quiver")
    if X.is_zero():
        return AnnihilatorReport(
            annihilates=True,
            element_nonzero=True,
            condition_i=None,
            condition_ii=None,
            divisible=None,
            injective_verdict="vacuous (zero representation is injective)",
            vacuous=True,
        )
    s = full_cycle_annihilator(quiver, X.ring)
    annihilates = all(
        family_is_zero(X, family) for family in act_on_generators(s, X).values()
    )
    element_nonzero = not s.is_zero()

    from .modules import has_section, module_is_injective

    condition_i = all(module_is_injective(X.vertex_modules[v]) for v in quiver.vertices)
    condition_ii = True
    for v in quiver.vertices:
        a = quiver.arrows_from(v)[0]  # single outgoing arrow on a loop
        f = X.arrow_maps[a.name]
        if not (f.is_surjective() and has_section(f) is not None):
            condition_ii = False
            break
    divisible = not (annihilates and element_nonzero)
    verdict = "not injective (not divisible)" if not divisible else "inconclusive"
    return AnnihilatorReport(
        annihilates=annihilates,
        element_nonzero=element_nonzero,
        condition_i=condition_i,
        condition_ii=condition_ii,
        divisible=divisible,
        injective_verdict=verdict,
        vacuous=False,
    )
