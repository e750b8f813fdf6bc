"""The vertex adjunction, made countable.

Extending a module along all paths out of a vertex is left adjoint to
evaluating there: maps M -> X(v) correspond one to one with morphisms from
the extension into X.  Over a prime field both hom sets are finite, so the
bijection can be watched element by element.
"""

import itertools

from qrep.rings import GF
from qrep.linalg import Matrix
from qrep.modules import FGModule, ModuleMap
from qrep.quiver import Quiver
from qrep.reps import Representation
from qrep.functors import (
    adjunction_card_check,
    adjunction_to_module,
    adjunction_to_representation,
    s_functor,
)


def main():
    F = GF(2)
    a2 = Quiver.line(2)
    one = FGModule.free(F, 1)
    ext = s_functor(a2, "v1", one)
    print(f"extension of F2 at v1 on the two-vertex line: {ext.representation.describe()}")

    mods = {"v1": FGModule.free(F, 2), "v2": one}
    X = Representation(
        a2, F, mods, {"a1": ModuleMap(mods["v1"], mods["v2"], Matrix(F, [[1, 0]]))}
    )
    print(f"target representation: {X.describe()}")

    chk = adjunction_card_check(a2, "v1", one, X)
    print(f"|Hom(F2, X(v1))| = {chk.module_side}")
    print(f"|Hom(extension, X)| = {chk.representation_side}")
    print(f"equal: {chk.equal}")

    print("transporting every module-side map and back:")
    for flat in itertools.product(range(2), repeat=2):
        f = ModuleMap(one, mods["v1"], Matrix(F, [[flat[0]], [flat[1]]]))
        eta = adjunction_to_representation(ext, X, f)
        back = adjunction_to_module(ext, X, eta)
        comps = {v: m.matrix.to_lists() for v, m in sorted(eta.components.items())}
        print(f"  f = {f.matrix.to_lists()} -> morphism components {comps} "
              f"-> back {back.matrix.to_lists()}  (round trip exact: {back.equals(f)})")


if __name__ == "__main__":
    main()
