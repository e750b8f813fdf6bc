"""Interval decomposition of line-quiver representations over a field.

The rank function of composed arrow maps determines the multiset of
intervals; intervals starting at the first vertex are exactly the
injective indecomposables, so the barcode also witnesses how an injective
representation decomposes as a direct sum of indecomposable injectives.
"""

from qrep.rings import GF
from qrep.linalg import Matrix
from qrep.modules import FGModule, ModuleMap
from qrep.quiver import Quiver
from qrep.reps import Representation
from qrep.properties import is_injective_rep
from qrep.barcode import decompose_interval


def f2_rep(quiver, dims, mats):
    F = GF(2)
    mods = {v: FGModule.free(F, d) for v, d in dims.items()}
    maps = {}
    for a in quiver.arrows:
        maps[a.name] = ModuleMap(
            mods[a.source], mods[a.target], Matrix(F, mats[a.name], mods[a.source].generators)
        )
    return Representation(quiver, F, mods, maps)


def show(X, label):
    bc = decompose_interval(X)
    print(f"{label}")
    print(f"  barcode: {' '.join(bc.labels()) or '(empty)'}")
    for iv in bc.intervals:
        print(f"    {iv.label()} x{iv.multiplicity}  injective: {iv.injective}")
    print(f"  representation injective: {is_injective_rep(X)}")
    print()


if __name__ == "__main__":
    a3 = Quiver.line(3)
    show(
        f2_rep(a3, {"v1": 2, "v2": 2, "v3": 1}, {"a1": [[1, 0], [0, 1]], "a2": [[1, 0]]}),
        "full-rank chain with one dying coordinate",
    )
    show(
        f2_rep(a3, {"v1": 1, "v2": 2, "v3": 1}, {"a1": [[1], [0]], "a2": [[0, 1]]}),
        "a bar born in the middle (so not injective)",
    )
    show(
        f2_rep(a3, {"v1": 2, "v2": 1, "v3": 0}, {"a1": [[1, 1]], "a2": []}),
        "nothing survives to the last vertex",
    )
