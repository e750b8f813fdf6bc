"""The document format: one human-writable JSON text for whole workspaces.

A document names a coefficient ring, a torsion theory, one quiver (in the
textual arrow grammar), and dictionaries of modules, module maps,
representations, representation morphisms, and elements, plus an optional
job list.  Matrices are row lists; rational entries may be written
"p/q".  Serialization is canonical (sorted keys, fixed indentation), so
parse∘serialize is the identity on everything the tool emits.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .linalg import Matrix
from .modules import FGModule, ModuleMap
from .quiver import Quiver, parse_quiver
from .reps import RepElement, RepMorphism, Representation
from .rings import CoefficientRing, TorsionTheorySpec, ring_from_name


class DocumentError(ValueError):
    """Unresolvable reference or malformed document data."""


@dataclass
class Document:
    version: str
    ring: CoefficientRing
    torsion: TorsionTheorySpec
    quiver: Quiver | None
    modules: dict = field(default_factory=dict)
    module_maps: dict = field(default_factory=dict)
    representations: dict = field(default_factory=dict)
    morphisms: dict = field(default_factory=dict)
    elements: dict = field(default_factory=dict)
    jobs: list = field(default_factory=list)

    # -- resolution helpers -----------------------------------------------

    def representation(self, name: str) -> Representation:
        if name not in self.representations:
            raise DocumentError(f"unresolved representation {name!r}")
        return self.representations[name]

    def morphism(self, name: str) -> RepMorphism:
        if name not in self.morphisms:
            raise DocumentError(f"unresolved morphism {name!r}")
        return self.morphisms[name]

    def module_map(self, name: str) -> ModuleMap:
        if name not in self.module_maps:
            raise DocumentError(f"unresolved module map {name!r}")
        return self.module_maps[name]

    def element(self, name: str) -> RepElement:
        if name not in self.elements:
            raise DocumentError(f"unresolved element {name!r}")
        return self.elements[name]


def _matrix_to_rows(ring, m: Matrix):
    return [[ring.scalar_to_doc(x) for x in row] for row in m.rows]


def _matrix_from_rows(ring, rows, nrows, ncols, what):
    if rows is None:
        rows = [[] for _ in range(nrows)]
    if len(rows) != nrows:
        raise DocumentError(f"{what}: expected {nrows} rows, got {len(rows)}")
    for r in rows:
        if any(isinstance(x, float) for x in r):
            raise DocumentError(f"{what}: floating-point entries are not accepted")
    try:
        m = Matrix(ring, rows, ncols if ncols is not None else None)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{what}: {exc}") from exc
    if ncols is not None and m.ncols != ncols:
        raise DocumentError(f"{what}: expected {ncols} columns, got {m.ncols}")
    if nrows == 0:
        return Matrix.zeros(ring, 0, m.ncols if ncols is None else ncols)
    return m


def load_document(text: str) -> Document:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid document JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise DocumentError("document must be a JSON object")

    version = str(raw.get("version", "1"))
    ring = ring_from_name(raw.get("ring", "Z"))
    torsion_name = raw.get("torsion")
    if torsion_name is None:
        torsion = (
            TorsionTheorySpec.trivial() if ring.is_field else TorsionTheorySpec.classical()
        )
    else:
        torsion = TorsionTheorySpec.from_name(torsion_name)
    torsion.validate_for(ring)

    quiver = None
    qspec = raw.get("quiver")
    if qspec is not None:
        if isinstance(qspec, str):
            quiver = parse_quiver(qspec)
        elif isinstance(qspec, dict):
            quiver = parse_quiver(qspec["text"], family=qspec.get("family"))
        else:
            raise DocumentError("quiver must be grammar text or {text, family}")

    doc = Document(version=version, ring=ring, torsion=torsion, quiver=quiver)

    for name in sorted(raw.get("modules", {})):
        spec = raw["modules"][name]
        gens = int(spec["generators"])
        rel = _matrix_from_rows(ring, spec.get("relations"), gens, None, f"module {name!r}")
        doc.modules[name] = FGModule(ring, gens, rel)

    def resolve_module(name, what):
        if name not in doc.modules:
            raise DocumentError(f"{what}: unresolved module {name!r}")
        return doc.modules[name]

    for name in sorted(raw.get("module_maps", {})):
        spec = raw["module_maps"][name]
        src = resolve_module(spec["source"], f"module map {name!r}")
        tgt = resolve_module(spec["target"], f"module map {name!r}")
        mat = _matrix_from_rows(
            ring, spec.get("matrix"), tgt.generators, src.generators, f"module map {name!r}"
        )
        try:
            doc.module_maps[name] = ModuleMap(src, tgt, mat)
        except ValueError as exc:
            raise DocumentError(f"module map {name!r}: {exc}") from exc

    for name in sorted(raw.get("representations", {})):
        spec = raw["representations"][name]
        if quiver is None:
            raise DocumentError("representations need a quiver section")
        mods = {}
        for v in quiver.vertices:
            try:
                mods[v] = resolve_module(spec["vertices"][v], f"representation {name!r}")
            except KeyError:
                raise DocumentError(f"representation {name!r}: missing vertex {v!r}")
        maps = {}
        arrows_spec = spec.get("arrows", {})
        for a in quiver.arrows:
            mat = _matrix_from_rows(
                ring,
                arrows_spec.get(a.name),
                mods[a.target].generators,
                mods[a.source].generators,
                f"representation {name!r}, arrow {a.name!r}",
            )
            try:
                maps[a.name] = ModuleMap(mods[a.source], mods[a.target], mat)
            except ValueError as exc:
                raise DocumentError(
                    f"representation {name!r}, arrow {a.name!r}: {exc}"
                ) from exc
        doc.representations[name] = Representation(quiver, ring, mods, maps)

    for name in sorted(raw.get("morphisms", {})):
        spec = raw["morphisms"][name]
        src = doc.representation(spec["source"])
        tgt = doc.representation(spec["target"])
        comps = {}
        for v in src.quiver.vertices:
            mat = _matrix_from_rows(
                ring,
                spec.get("components", {}).get(v),
                tgt.vertex_modules[v].generators,
                src.vertex_modules[v].generators,
                f"morphism {name!r}, component {v!r}",
            )
            comps[v] = ModuleMap(src.vertex_modules[v], tgt.vertex_modules[v], mat)
        try:
            doc.morphisms[name] = RepMorphism(src, tgt, comps)
        except ValueError as exc:
            raise DocumentError(f"morphism {name!r}: {exc}") from exc

    for name in sorted(raw.get("elements", {})):
        spec = raw["elements"][name]
        rep = doc.representation(spec["representation"])
        vertex = spec["vertex"]
        if not rep.quiver.has_vertex(vertex):
            raise DocumentError(f"element {name!r}: unknown vertex {vertex!r}")
        doc.elements[name] = RepElement(rep, vertex, tuple(spec["value"]))

    jobs = raw.get("jobs", [])
    if not isinstance(jobs, list):
        raise DocumentError("jobs must be a list")
    doc.jobs = jobs
    return doc


def document_to_dict(doc: Document) -> dict:
    ring = doc.ring
    out: dict = {
        "version": doc.version,
        "ring": ring.kind,
        "torsion": doc.torsion.describe(),
    }
    if doc.quiver is not None:
        q = {"text": doc.quiver.to_text()}
        if doc.quiver.family is not None:
            q["family"] = doc.quiver.family
        out["quiver"] = q
    if doc.modules:
        out["modules"] = {
            name: {
                "generators": m.generators,
                "relations": _matrix_to_rows(ring, m.relations),
            }
            for name, m in sorted(doc.modules.items())
        }
    if doc.module_maps:
        out["module_maps"] = {}
        for name, f in sorted(doc.module_maps.items()):
            src = _module_name(doc, f.source, name)
            tgt = _module_name(doc, f.target, name)
            out["module_maps"][name] = {
                "source": src,
                "target": tgt,
                "matrix": _matrix_to_rows(ring, f.matrix),
            }
    if doc.representations:
        out["representations"] = {}
        for name, rep in sorted(doc.representations.items()):
            out["representations"][name] = {
                "vertices": {
                    v: _module_name(doc, rep.vertex_modules[v], name)
                    for v in rep.quiver.vertices
                },
                "arrows": {
                    a.name: _matrix_to_rows(ring, rep.arrow_maps[a.name].matrix)
                    for a in rep.quiver.arrows
                },
            }
    if doc.morphisms:
        out["morphisms"] = {}
        for name, eta in sorted(doc.morphisms.items()):
            out["morphisms"][name] = {
                "source": _rep_name(doc, eta.source, name),
                "target": _rep_name(doc, eta.target, name),
                "components": {
                    v: _matrix_to_rows(ring, eta.components[v].matrix)
                    for v in eta.source.quiver.vertices
                },
            }
    if doc.elements:
        out["elements"] = {}
        for name, x in sorted(doc.elements.items()):
            out["elements"][name] = {
                "representation": _rep_name(doc, x.representation, name),
                "vertex": x.vertex,
                "value": [ring.scalar_to_doc(c) for c in x.coords],
            }
    if doc.jobs:
        out["jobs"] = doc.jobs
    return out


def _module_name(doc, module, context):
    for name, m in doc.modules.items():
        if m == module:
            return name
    raise DocumentError(f"{context!r} refers to a module that has no name in the document")


def _rep_name(doc, rep, context):
    for name, r in doc.representations.items():
        if r == rep:
            return name
    raise DocumentError(f"{context!r} refers to a representation that has no name in the document")


def document_to_text(doc: Document) -> str:
    return json.dumps(document_to_dict(doc), sort_keys=True, indent=2) + "\n"
