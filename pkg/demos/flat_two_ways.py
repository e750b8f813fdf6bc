"""Componentwise flat versus categorical flat.

Both classes ask for flat vertex modules; the categorical class also
demands that the assembled incoming map at each vertex be a pure
monomorphism.  The doubling map separates them: 2Z is not pure in Z.
"""

from qrep.rings import ZZ, TorsionTheorySpec
from qrep.linalg import Matrix
from qrep.modules import FGModule, ModuleMap, is_pure_submodule
from qrep.quiver import Quiver
from qrep.reps import Representation
from qrep.properties import classify_rep, is_categorical_flat

classical = TorsionTheorySpec.classical()


def z_rep(dims, mats):
    a2 = Quiver.line(2)
    mods = {v: FGModule.free(ZZ, d) for v, d in dims.items()}
    maps = {
        "a1": ModuleMap(mods["v1"], mods["v2"], Matrix(ZZ, mats, mods["v1"].generators))
    }
    return Representation(a2, ZZ, mods, maps)


def report(X, label):
    cw = classify_rep(X, classical).flat_cw
    cat = is_categorical_flat(X)
    print(f"{label}:")
    print(f"  componentwise flat: {cw}")
    print(f"  categorical flat:   {cat}")


if __name__ == "__main__":
    doubling = z_rep({"v1": 1, "v2": 1}, [[2]])
    report(doubling, "Z --x2--> Z")
    print(f"  (image 2Z pure in Z? {is_pure_submodule(Matrix(ZZ, [[2]]), FGModule.free(ZZ, 1))})")
    print()
    embedding = z_rep({"v1": 1, "v2": 2}, [[1], [0]])
    report(embedding, "Z --(1,0)--> Z^2")
    print("  (the image is a direct summand, hence pure)")
