"""Quivers: data model, a small textual language, and structural analysis.

A quiver is a finite directed graph with named vertices and arrows.
Truncations of infinite families carry a ``family`` tag whose certified
metadata answers classification questions the finite truncation alone
cannot (e.g. whether the infinite family has finitely many arrows out of
each vertex).
"""

from __future__ import annotations

import re
from dataclasses import dataclass


class QuiverStructureError(ValueError):
    """Malformed quiver data (dangling endpoints, duplicate ids, bad tag)."""


class QuiverSyntaxError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class CyclicQuiverError(ValueError):
    """The operation needs an acyclic quiver (path sets would be infinite)."""


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass(frozen=True)
class Path:
    """Either the trivial path at a vertex or a composable arrow chain.

    ``arrows`` is in application order: the first entry acts first.
    """

    source: str
    target: str
    arrows: tuple[str, ...] = ()

    @staticmethod
    def trivial(vertex: str) -> "Path":
        return Path(vertex, vertex, ())

    @property
    def is_trivial(self) -> bool:
        return not self.arrows

    def then(self, other: "Path") -> "Path":
        """The composite 'self first, then other'."""
        if self.target != other.source:
            raise ValueError(f"paths do not compose: {self} then {other}")
        return Path(self.source, other.target, self.arrows + other.arrows)

    def __repr__(self):
        if self.is_trivial:
            return f"e_{self.source}"
        return "*".join(reversed(self.arrows))


# certified metadata for truncated infinite families:
# (validator name, property (B) of the family, source-injective answer)
FAMILY_TAGS = {
    "a_n": ("line", True, "yes"),
    "a_inf_truncation": ("line", True, "yes"),
    "barren_tree_truncation": ("out_tree", True, "yes"),
    "n_loop": ("cycle", True, "no"),
    "parallel_arrows_truncation": ("parallel", False, "yes"),
    "custom": (None, None, None),
}

_ID = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class Quiver:
    """An immutable finite quiver with ordered vertices and arrows."""

    __slots__ = ("vertices", "arrows", "family", "_arrow_by_name", "_out", "_in", "_acyclic")

    def __init__(self, vertices, arrows, family: str | None = None):
        vertices = tuple(vertices)
        arrows = tuple(a if isinstance(a, Arrow) else Arrow(*a) for a in arrows)
        seen = set()
        for v in vertices:
            if v in seen:
                raise QuiverStructureError(f"duplicate vertex id {v!r}")
            seen.add(v)
        vertex_set = set(vertices)
        by_name = {}
        outgoing = {v: [] for v in vertices}
        incoming = {v: [] for v in vertices}
        for a in arrows:
            if a.name in by_name or a.name in vertex_set:
                raise QuiverStructureError(f"duplicate id {a.name!r}")
            if a.source not in vertex_set:
                raise QuiverStructureError(f"arrow {a.name!r} starts at undeclared vertex {a.source!r}")
            if a.target not in vertex_set:
                raise QuiverStructureError(f"arrow {a.name!r} ends at undeclared vertex {a.target!r}")
            by_name[a.name] = a
            outgoing[a.source].append(a)
            incoming[a.target].append(a)
        self.vertices = vertices
        self.arrows = arrows
        self.family = family
        self._arrow_by_name = by_name
        self._out = {v: tuple(lst) for v, lst in outgoing.items()}
        self._in = {v: tuple(lst) for v, lst in incoming.items()}
        self._acyclic = None
        if family is not None:
            self._validate_family(family)

    # -- construction helpers ------------------------------------------

    @staticmethod
    def line(n: int, family: str | None = "a_n") -> "Quiver":
        """The A_n line quiver v1 -> v2 -> ... -> vn."""
        if n < 1:
            raise QuiverStructureError("a line quiver needs at least one vertex")
        vertices = [f"v{i}" for i in range(1, n + 1)]
        arrows = [Arrow(f"a{i}", f"v{i}", f"v{i + 1}") for i in range(1, n)]
        return Quiver(vertices, arrows, family)

    @staticmethod
    def loop(n: int) -> "Quiver":
        """The n-loop: n vertices on a single oriented cycle."""
        if n < 1:
            raise QuiverStructureError("a loop needs at least one vertex")
        vertices = [f"v{i}" for i in range(1, n + 1)]
        arrows = [
            Arrow(f"a{i}", f"v{i}", f"v{i % n + 1}") for i in range(1, n + 1)
        ]
        return Quiver(vertices, arrows, "n_loop")

    def _validate_family(self, family):
        if family not in FAMILY_TAGS:
            raise QuiverStructureError(f"unknown family tag {family!r}")
        shape = FAMILY_TAGS[family][0]
        if shape == "line":
            ok = len(self.arrows) == len(self.vertices) - 1 and all(
                a.source == self.vertices[i] and a.target == self.vertices[i + 1]
                for i, a in enumerate(self.arrows)
            )
            if not ok:
                raise QuiverStructureError(f"family {family!r} requires a directed line")
        elif shape == "cycle":
            n = len(self.vertices)
            if len(self.arrows) != n or self.is_acyclic():
                raise QuiverStructureError("family 'n_loop' requires n arrows forming a single cycle")
            # one arrow out of and into each vertex, and the cycle is connected
            if any(len(self.arrows_from(v)) != 1 or len(self.arrows_into(v)) != 1 for v in self.vertices):
                raise QuiverStructureError("family 'n_loop' requires a single oriented cycle")
            seen, v = set(), self.vertices[0]
            while v not in seen:
                seen.add(v)
                v = self.arrows_from(v)[0].target
            if len(seen) != n:
                raise QuiverStructureError("family 'n_loop' requires one cycle through all vertices")
        elif shape == "out_tree":
            roots = [v for v in self.vertices if not self.arrows_into(v)]
            if len(roots) != 1 or not self.is_acyclic():
                raise QuiverStructureError("family 'barren_tree_truncation' requires a rooted out-tree")
            if any(len(self.arrows_into(v)) > 1 for v in self.vertices):
                raise QuiverStructureError("family 'barren_tree_truncation' requires a rooted out-tree")
        elif shape == "parallel":
            if len(self.vertices) != 2 or not self.arrows:
                raise QuiverStructureError(
                    "family 'parallel_arrows_truncation' requires two vertices and parallel arrows"
                )
            v1, v2 = self.vertices
            if any(a.source != v1 or a.target != v2 for a in self.arrows):
                raise QuiverStructureError("all arrows must run from the first vertex to the second")

    # -- lookups --------------------------------------------------------

    def has_vertex(self, v) -> bool:
        return v in self._out

    def arrow(self, name: str) -> Arrow:
        return self._arrow_by_name[name]

    def arrows_from(self, v) -> tuple[Arrow, ...]:
        return self._out[v]

    def arrows_into(self, v) -> tuple[Arrow, ...]:
        return self._in[v]

    def is_acyclic(self) -> bool:
        if self._acyclic is None:
            indeg = {v: len(self._in[v]) for v in self.vertices}
            queue = [v for v in self.vertices if indeg[v] == 0]
            seen = 0
            while queue:
                v = queue.pop()
                seen += 1
                for a in self._out[v]:
                    indeg[a.target] -= 1
                    if indeg[a.target] == 0:
                        queue.append(a.target)
            self._acyclic = seen == len(self.vertices)
        return self._acyclic

    def topological_order(self) -> tuple[str, ...]:
        if not self.is_acyclic():
            raise CyclicQuiverError("no topological order on a cyclic quiver")
        indeg = {v: len(self._in[v]) for v in self.vertices}
        ready = [v for v in self.vertices if indeg[v] == 0]
        order = []
        while ready:
            v = ready.pop(0)  # declaration order among the ready set
            order.append(v)
            for a in self._out[v]:
                indeg[a.target] -= 1
                if indeg[a.target] == 0:
                    ready.append(a.target)
        return tuple(order)

    # -- paths ------------------------------------------------------------

    def paths_between(self, v: str, w: str) -> list[Path]:
        """All paths from v to w on an acyclic quiver, in a stable order.

        The trivial path is included when v == w.  Refuses cyclic quivers,
        where the set would be infinite.
        """
        if not self.has_vertex(v) or not self.has_vertex(w):
            raise QuiverStructureError("path endpoints must be declared vertices")
        if not self.is_acyclic():
            raise CyclicQuiverError("path enumeration needs an acyclic quiver")
        out = []

        def walk(path: Path):
            if path.target == w:
                out.append(path)
            for a in self._out[path.target]:
                walk(path.then(Path(a.source, a.target, (a.name,))))

        walk(Path.trivial(v))
        return out

    def paths_from(self, v: str) -> dict[str, list[Path]]:
        """Paths out of v grouped by target vertex (acyclic only)."""
        return {w: self.paths_between(v, w) for w in self.vertices}

    def path_by_arrows(self, arrow_names) -> Path:
        arrow_names = tuple(arrow_names)
        if not arrow_names:
            raise ValueError("use Path.trivial for the empty path")
        first = self.arrow(arrow_names[0])
        path = Path(first.source, first.target, (first.name,))
        for name in arrow_names[1:]:
            a = self.arrow(name)
            path = path.then(Path(a.source, a.target, (a.name,)))
        return path

    def to_text(self) -> str:
        """Serialize back into the textual quiver language."""
        parts = [" ".join(self.vertices)]
        for a in self.arrows:
            parts.append(f"{a.name}: {a.source} -> {a.target}")
        return " ; ".join(parts)

    def __eq__(self, other):
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
            and self.family == other.family
        )

    def __hash__(self):
        return hash((self.vertices, self.arrows, self.family))

    def __repr__(self):
        fam = f", family={self.family!r}" if self.family else ""
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows{fam})"


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------


def parse_quiver(text: str, family: str | None = None) -> Quiver:
    """Parse the quiver language: vertex names, then 'a: v -> w' statements.

    Statements are separated by ';' or newlines; '#' comments to end of
    line.  Example: ``"v1 v2 ; a: v1 -> v2"``.
    """
    vertices: list[str] = []
    arrows: list[Arrow] = []
    ids: dict[str, tuple[int, int]] = {}

    def declare(name, lineno, offset):
        if name in ids:
            raise QuiverSyntaxError(f"duplicate id {name!r}", lineno, offset)
        ids[name] = (lineno, offset)

    for lineno, raw_line in enumerate(text.splitlines() or [""], start=1):
        line = raw_line.split("#", 1)[0]
        col = 1
        for stmt in line.split(";"):
            stripped = stmt.strip()
            offset = col + (len(stmt) - len(stmt.lstrip()))
            col += len(stmt) + 1
            if not stripped:
                continue
            if ":" in stmt:
                name_part, _, rest = stmt.partition(":")
                name = name_part.strip()
                if not _ID.fullmatch(name):
                    raise QuiverSyntaxError(f"bad arrow name {name!r}", lineno, offset)
                m = re.fullmatch(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*->\s*([A-Za-z_][A-Za-z0-9_]*)\s*", rest)
                if not m:
                    raise QuiverSyntaxError(
                        "expected 'arrow: source -> target'", lineno, offset + len(name_part) + 1
                    )
                declare(name, lineno, offset)
                for endpoint in (m.group(1), m.group(2)):
                    if endpoint not in vertices:
                        raise QuiverSyntaxError(
                            f"arrow endpoint {endpoint!r} is not a declared vertex", lineno, offset
                        )
                arrows.append(Arrow(name, m.group(1), m.group(2)))
            else:
                for tok in stripped.split():
                    if not _ID.fullmatch(tok):
                        raise QuiverSyntaxError(f"bad vertex name {tok!r}", lineno, offset)
                    declare(tok, lineno, offset)
                    vertices.append(tok)
    if not vertices:
        raise QuiverSyntaxError("no vertices declared", 1, 1)
    return Quiver(vertices, arrows, family)


# ---------------------------------------------------------------------------
# Classification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class QuiverClassification:
    property_b: bool
    property_b_source: str  # "computed" | "family metadata"
    acyclic: bool
    source_injective: str  # "yes" | "no" | "unknown"
    reason: str


def classify_quiver(q: Quiver) -> QuiverClassification:
    """Property (B), acyclicity, and the source-injectivity verdict.

    Property (B) is read as "finitely many arrows out of each vertex",
    counting parallel arrows with multiplicity; a finite quiver always
    satisfies it, but a truncation tag may certify that the infinite
    family it stands for does not.
    """
    acyclic = q.is_acyclic()
    meta = FAMILY_TAGS.get(q.family or "custom", FAMILY_TAGS["custom"])
    _, family_b, family_si = meta

    if family_b is False:
        property_b, b_source = False, "family metadata"
    else:
        property_b, b_source = True, "computed"

    if not acyclic:
        source_injective = "no"
        reason = (
            "contains an oriented cycle: on such quivers vertexwise injectivity plus "
            "split outgoing maps does not characterize injective representations "
            "(the cyclic shift representation is a counterexample)"
        )
    elif family_si == "yes" and q.family not in (None, "custom", "a_n"):
        source_injective = "yes"
        reason = f"certified by the {q.family} family metadata"
    elif acyclic:
        source_injective = "yes"
        reason = "finite quiver without oriented cycles"
    else:  # pragma: no cover - finite quivers always decide above
        source_injective = "unknown"
        reason = "no certificate for this family"

    return QuiverClassification(
        property_b=property_b,
        property_b_source=b_source,
        acyclic=acyclic,
        source_injective=source_injective,
        reason=reason,
    )
