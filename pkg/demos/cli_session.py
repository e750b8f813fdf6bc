"""A scripted tour of the command-line front end.

Writes a small document, then drives every subcommand against it:
classification checks, quiver classification, a cover verdict with an
explicit counterexample witness, a recipe build whose output document
round-trips, and the algorithm traces.
"""

import json
import os
import subprocess
import sys
import tempfile

DOC = {
    "version": "1",
    "ring": "Z",
    "torsion": "classical",
    "quiver": {"text": "v1 v2 ; a1: v1 -> v2"},
    "modules": {
        "Z1": {"generators": 1, "relations": [[]]},
        "Z3t": {"generators": 1, "relations": [[3]]},
    },
    "representations": {
        "X": {"vertices": {"v1": "Z1", "v2": "Z1"}, "arrows": {"a1": [[2]]}},
    },
    "module_maps": {"id_Z": {"source": "Z1", "target": "Z1", "matrix": [[1]]}},
    "elements": {"x": {"representation": "X", "vertex": "v1", "value": [1]}},
}

SINGLE = {
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
    "morphisms": {"psi": {"source": "F", "target": "T", "components": {"v1": [[1]]}}},
}


def run(argv):
    print(f"$ qrep {' '.join(argv)}")
    proc = subprocess.run(
        [sys.executable, "-m", "qrep.cli", *argv], capture_output=True, text=True
    )
    for line in (proc.stdout + proc.stderr).splitlines():
        print(f"  {line}")
    print(f"  [exit {proc.returncode}]")
    print()


def main():
    with tempfile.TemporaryDirectory() as tmp:
        doc = os.path.join(tmp, "doc.json")
        single = os.path.join(tmp, "single.json")
        built = os.path.join(tmp, "built.json")
        with open(doc, "w") as fh:
            json.dump(DOC, fh)
        with open(single, "w") as fh:
            json.dump(SINGLE, fh)

        run(["check", doc, "X", "--flat-cw", "--torsion-free-cw"])
        run(["check", doc, "X", "--categorical-flat"])
        run(["classify-quiver", doc])
        run(["cover", "verify", single, "psi", "--family", "free2", "--bound", "8",
             "--kind", "torsion-free-cw"])
        run(["cover", "build", single, "a2-torsion-free", "--phi", "id_Z",
             "--cover-kind", "torsion-free", "--out", built])
        run(["cover", "verify", built, "cover_map", "--kind", "torsion-free-cw"])
        run(["trace", doc, "--job", "pure-closure", "--element", "x"])


if __name__ == "__main__":
    main()
