"""Command-line front end.

Commands: check, cover verify, cover build, trace, decompose,
classify-quiver.  Exit codes: 0 = all properties hold / verdict IsCover
(Unknown exits 0 with a warning line); 1 = a checked property fails /
NotCover / trace precondition failure; 2 = invalid input or refusal.
Reports are byte-deterministic; QREP_SEED fixes the sampling order of the
cover verifier's endomorphism battery.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .barcode import NotLineQuiverError, decompose_interval
from .closures import pure_closure_rep, small_filtration
from .covers import (
    ModuleCoverData,
    RECIPES,
    RecipeError,
    build_recipe,
    cover_verdict,
    default_test_family,
)
from .documents import Document, DocumentError, document_to_text, load_document
from .pathring import annihilator_witness
from .properties import (
    NotSourceInjectiveError,
    PropertyBError,
    classify_rep,
    is_categorical_flat,
    is_componentwise_pure_subrep,
    is_injective_rep,
)
from .quiver import CyclicQuiverError, QuiverStructureError, QuiverSyntaxError, classify_quiver
from .reps import RepMorphism
from .rings import RingMismatchError

PASS, FAIL, INVALID = 0, 1, 2

_REFUSALS = (
    DocumentError,
    NotSourceInjectiveError,
    PropertyBError,
    CyclicQuiverError,
    QuiverSyntaxError,
    QuiverStructureError,
    NotLineQuiverError,
    RecipeError,
    RingMismatchError,
)


class _Report:
    """Accumulates text lines and a JSON payload side by side."""

    def __init__(self):
        self.lines = []
        self.payload = {}

    def line(self, text):
        self.lines.append(text)

    def set(self, key, value):
        self.payload[key] = value

    def render(self, fmt: str) -> str:
        if fmt == "tree":
            return json.dumps(self.payload, sort_keys=True, indent=2) + "\n"
        return "\n".join(self.lines) + "\n"


def _load(path: str, args) -> Document:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if getattr(args, "ring", None):
        raw["ring"] = args.ring
        if getattr(args, "torsion", None) is None:
            raw.pop("torsion", None)  # pick the new ring's default theory
    if getattr(args, "torsion", None):
        raw["torsion"] = args.torsion
    return load_document(json.dumps(raw))


# ---------------------------------------------------------------------------
# check
# ---------------------------------------------------------------------------

_CHECK_FLAGS = ("flat_cw", "torsion_free_cw", "torsion_cw", "injective", "categorical_flat", "pure")


def _run_check(doc: Document, target: str, properties, report: _Report) -> int:
    requested = [p for p in properties if properties[p]]
    results = {}
    if target in doc.morphisms:
        eta = doc.morphism(target)
        if properties.get("pure"):
            ok = eta.is_injective() and is_componentwise_pure_subrep(
                eta.target, {v: eta.components[v].matrix for v in eta.source.quiver.vertices}
            )
            results["pure"] = ok
        else:
            report.line(f"{target}: morphism validated (commuting squares hold)")
        for p in requested:
            if p != "pure" and p in _CHECK_FLAGS:
                raise DocumentError(f"property {p!r} applies to representations, not morphisms")
    else:
        X = doc.representation(target)
        cls = classify_rep(X, doc.torsion)
        if properties.get("flat_cw"):
            results["flat_cw"] = cls.flat_cw
        if properties.get("torsion_free_cw"):
            results["torsion_free_cw"] = cls.torsion_free_cw
        if properties.get("torsion_cw"):
            results["torsion_cw"] = cls.torsion_cw
        if properties.get("injective"):
            results["injective"] = is_injective_rep(X)
        if properties.get("categorical_flat"):
            results["categorical_flat"] = is_categorical_flat(X)
        if not requested:
            results = {
                "flat_cw": cls.flat_cw,
                "torsion_free_cw": cls.torsion_free_cw,
                "torsion_cw": cls.torsion_cw,
            }
    report.set("target", target)
    report.set("results", results)
    for key in sorted(results):
        report.line(f"{target} {key.replace('_', '-')}: {'pass' if results[key] else 'FAIL'}")
    if requested and not all(results.values()):
        return FAIL
    return PASS


def cmd_check(args) -> tuple[int, _Report]:
    report = _Report()
    doc = _load(args.document, args)
    properties = {
        "flat_cw": args.flat_cw,
        "torsion_free_cw": args.torsion_free_cw,
        "torsion_cw": args.torsion_cw,
        "injective": args.injective,
        "categorical_flat": args.categorical_flat,
        "pure": args.pure,
    }
    if args.target is not None:
        code = _run_check(doc, args.target, properties, report)
        return code, report
    jobs = [j for j in doc.jobs if j.get("kind") == "check"]
    if not jobs:
        raise DocumentError("no target named and the document has no check jobs")
    worst = PASS
    for job in jobs:
        job_props = {p: (p.replace("-", "_") in [q.replace("-", "_") for q in job.get("properties", [])]) for p in properties}
        code = _run_check(doc, job["target"], job_props, report)
        worst = max(worst, code)
    return worst, report


# ---------------------------------------------------------------------------
# cover verify / build
# ---------------------------------------------------------------------------


def _resolve_family(doc: Document, psi: RepMorphism, spec: str, kind: str):
    if spec in ("free1", "free2", "free3"):
        rank = int(spec[-1])
        fam = default_test_family(psi.source.quiver, psi.source.ring, max_rank=rank)
        return fam, f"all free-vertex representations of rank <= {rank}, matrix entries in {{0,1}}"
    with open(spec, "r", encoding="utf-8") as fh:
        fam_doc = load_document(fh.read())
    fam = [fam_doc.representations[name] for name in sorted(fam_doc.representations)]
    return fam, f"named family from {os.path.basename(spec)} ({len(fam)} members)"


def cmd_cover_verify(args) -> tuple[int, _Report]:
    report = _Report()
    doc = _load(args.document, args)
    psi = doc.morphism(args.morphism)
    kind = args.kind.replace("-", "_")
    family, family_desc = _resolve_family(doc, psi, args.family, kind)
    seed = os.environ.get("QREP_SEED")
    verdict = cover_verdict(
        psi,
        family,
        kind=kind,
        tt=doc.torsion,
        sample_bound=args.bound,
        seed=int(seed) if seed else None,
        family_description=family_desc,
    )
    report.set("morphism", args.morphism)
    report.set("class", kind)
    report.set("test_family", verdict.test_family)
    report.set("sample_bound", verdict.sample_bound)
    report.set("precover", {
        "passed": verdict.precover.passed,
        "members": [
            {
                "description": m.description,
                "in_class": m.in_class,
                "generators_tested": m.generators_tested,
                "lifted": m.lifted,
            }
            for m in verdict.precover.members
        ],
    })
    report.set("verdict", verdict.status)
    report.set("certificate", verdict.certificate)
    report.line(f"morphism: {args.morphism}")
    report.line(f"class: {kind}")
    report.line(f"test family: {verdict.test_family}")
    report.line(f"precover: {'pass' if verdict.precover.passed else 'FAIL'}")
    for m in verdict.precover.members:
        if not m.in_class:
            report.line(f"warning: family member {m.index} ({m.description}) is outside the class")
    report.line(f"verdict: {verdict.status}")
    report.line(f"certificate: {verdict.certificate}")
    if verdict.witness is not None:
        wit = {
            v: [list(r) for r in verdict.witness.components[v].matrix.rows]
            for v in verdict.witness.source.quiver.vertices
        }
        report.set("witness", wit)
        report.line(f"witness components: {json.dumps(wit, sort_keys=True)}")
    if verdict.status == "unknown":
        report.line(
            f"warning: verdict unknown after {verdict.samples_tried} samples "
            f"(bound {verdict.sample_bound}); rerun with a larger --bound"
        )
        return PASS, report
    return (PASS if verdict.is_cover else FAIL), report


def cmd_cover_build(args) -> tuple[int, _Report]:
    report = _Report()
    doc = _load(args.document, args)
    if args.phi is None:
        raise RecipeError("missing required input: --phi (module map of the cover)")
    phi = doc.module_map(args.phi)
    aux = doc.module_map(args.aux_cover) if args.aux_cover else None
    env = doc.module_map(args.cotorsion_envelope) if args.cotorsion_envelope else None
    data = ModuleCoverData(phi, kind=args.cover_kind.replace("-", "_"), aux_cover=aux, cotorsion_envelope=env)
    result = build_recipe(args.recipe, data)

    out = Document(version=doc.version, ring=doc.ring, torsion=doc.torsion, quiver=result.quiver)
    counter = 0

    def register(module):
        nonlocal counter
        for name, m in out.modules.items():
            if m == module:
                return name
        counter += 1
        name = f"m{counter}"
        out.modules[name] = module
        return name

    for rep_name, rep in (("cover_source", result.source), ("cover_target", result.target)):
        for v in result.quiver.vertices:
            register(rep.vertex_modules[v])
        out.representations[rep_name] = rep
    out.morphisms["cover_map"] = result.morphism
    text = document_to_text(out)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        report.line(f"wrote {args.out}")
    else:
        report.lines.extend(text.splitlines())
    report.set("recipe", result.recipe)
    report.set("certificate", list(result.certificate))
    report.set("document", json.loads(text))
    for note in result.certificate:
        report.line(f"certificate: {note}")
    return PASS, report


# ---------------------------------------------------------------------------
# trace / decompose / classify-quiver
# ---------------------------------------------------------------------------


def _trace_one(doc: Document, job: str, rep_name, element_name, report: _Report) -> int:
    if job == "pure-closure":
        if element_name is None:
            raise DocumentError("pure-closure trace needs an element")
        x = doc.element(element_name)
        try:
            res = pure_closure_rep(x.representation, x)
        except ValueError as exc:
            report.line(f"precondition failed: {exc}")
            return FAIL
        report.set("trace", [s.description for s in res.stages])
        for line in res.trace_lines():
            report.line(line)
        return PASS
    if job == "filtration":
        X = doc.representation(rep_name)
        try:
            filt = small_filtration(X, doc.torsion)
        except ValueError as exc:
            report.line(f"precondition failed: not componentwise flat ({exc})")
            report.set("error", str(exc))
            return FAIL
        report.set("stages", [s.description for s in filt.stages])
        for line in filt.trace_lines():
            report.line(line)
        return PASS
    if job == "barcode":
        X = doc.representation(rep_name)
        bc = decompose_interval(X)
        labels = " ".join(bc.labels())
        report.set("barcode", bc.labels())
        report.line(labels if labels else "(empty barcode)")
        return PASS
    if job == "annihilator":
        X = doc.representation(rep_name)
        rep_report = annihilator_witness(X.quiver, X)
        report.set("annihilator", rep_report.lines())
        for line in rep_report.lines():
            report.line(line)
        return PASS
    raise DocumentError(f"unknown trace job {job!r}")


def cmd_trace(args) -> tuple[int, _Report]:
    report = _Report()
    doc = _load(args.document, args)
    if args.job:
        code = _trace_one(doc, args.job, args.representation, args.element, report)
        return code, report
    jobs = [j for j in doc.jobs if j.get("kind") == "trace"]
    if not jobs:
        raise DocumentError("no --job named and the document has no trace jobs")
    worst = PASS
    for job in jobs:
        code = _trace_one(doc, job.get("job"), job.get("representation"), job.get("element"), report)
        worst = max(worst, code)
    return worst, report


def cmd_decompose(args) -> tuple[int, _Report]:
    report = _Report()
    doc = _load(args.document, args)
    X = doc.representation(args.representation)
    bc = decompose_interval(X)
    report.set("barcode", bc.labels())
    report.set(
        "intervals",
        [
            {"start": iv.start, "end": iv.end, "multiplicity": iv.multiplicity, "injective": iv.injective}
            for iv in bc.intervals
        ],
    )
    labels = " ".join(bc.labels())
    report.line(labels if labels else "(empty barcode)")
    for iv in bc.intervals:
        report.line(
            f"{iv.label()} x{iv.multiplicity} {'injective' if iv.injective else 'not injective'}"
        )
    return PASS, report


def cmd_classify_quiver(args) -> tuple[int, _Report]:
    report = _Report()
    doc = _load(args.document, args)
    if doc.quiver is None:
        raise DocumentError("document has no quiver section")
    cls = classify_quiver(doc.quiver)
    report.set("property_b", cls.property_b)
    report.set("property_b_source", cls.property_b_source)
    report.set("acyclic", cls.acyclic)
    report.set("source_injective", cls.source_injective)
    report.set("reason", cls.reason)
    report.line(f"property (B): {'yes' if cls.property_b else 'no'} [{cls.property_b_source}]")
    report.line(f"acyclic: {'yes' if cls.acyclic else 'no'}")
    report.line(f"source-injective: {cls.source_injective}")
    report.line(f"reason: {cls.reason}")
    return PASS, report


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qrep",
        description="exact checks, covers and traces for quiver representations",
    )
    parser.add_argument("--format", choices=("text", "tree"), default="text")
    parser.add_argument("--ring", default=None, metavar="{Z,Q,Fp}", help="override the document ring: Z, Q, or F<p> (e.g. F5)")
    parser.add_argument("--torsion", default=None, help="classical | p-primary:<p> | trivial")
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="classification and property checks")
    p_check.add_argument("document")
    p_check.add_argument("target", nargs="?", default=None)
    p_check.add_argument("--flat-cw", dest="flat_cw", action="store_true")
    p_check.add_argument("--torsion-free-cw", dest="torsion_free_cw", action="store_true")
    p_check.add_argument("--torsion-cw", dest="torsion_cw", action="store_true")
    p_check.add_argument("--injective", action="store_true")
    p_check.add_argument("--categorical-flat", dest="categorical_flat", action="store_true")
    p_check.add_argument("--pure", action="store_true")
    p_check.set_defaults(func=cmd_check)

    p_cover = sub.add_parser("cover", help="verify or build cover candidates")
    cover_sub = p_cover.add_subparsers(dest="cover_command", required=True)

    p_verify = cover_sub.add_parser("verify")
    p_verify.add_argument("document")
    p_verify.add_argument("morphism")
    p_verify.add_argument("--family", default="free2", help="free1|free2|free3 or a document path")
    p_verify.add_argument("--bound", type=int, default=8)
    p_verify.add_argument(
        "--kind",
        choices=("flat-cw", "torsion-free-cw", "flat-categorical"),
        default="flat-cw",
    )
    p_verify.set_defaults(func=cmd_cover_verify)

    p_build = cover_sub.add_parser("build")
    p_build.add_argument("document")
    p_build.add_argument("recipe", choices=RECIPES)
    p_build.add_argument("--phi", required=False, default=None, help="module map name of the given cover")
    p_build.add_argument("--aux-cover", dest="aux_cover", default=None)
    p_build.add_argument("--cotorsion-envelope", dest="cotorsion_envelope", default=None)
    p_build.add_argument("--cover-kind", dest="cover_kind", choices=("flat", "torsion-free"), default="flat")
    p_build.add_argument("--out", default=None)
    p_build.set_defaults(func=cmd_cover_build)

    p_trace = sub.add_parser("trace", help="step-by-step algorithm traces")
    p_trace.add_argument("document")
    p_trace.add_argument("--job", choices=("pure-closure", "filtration", "barcode", "annihilator"))
    p_trace.add_argument("--representation", default=None)
    p_trace.add_argument("--element", default=None)
    p_trace.set_defaults(func=cmd_trace)

    p_dec = sub.add_parser("decompose", help="interval decomposition of a line-quiver representation")
    p_dec.add_argument("document")
    p_dec.add_argument("representation")
    p_dec.set_defaults(func=cmd_decompose)

    p_cls = sub.add_parser("classify-quiver", help="structural classification of the document's quiver")
    p_cls.add_argument("document")
    p_cls.set_defaults(func=cmd_classify_quiver)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, report = args.func(args)
    except _REFUSALS as exc:
        sys.stderr.write(f"error: {exc}\n")
        return INVALID
    except FileNotFoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return INVALID
    except (KeyError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"error: malformed document ({exc})\n")
        return INVALID
    sys.stdout.write(report.render(args.format))
    return code


if __name__ == "__main__":
    sys.exit(main())
