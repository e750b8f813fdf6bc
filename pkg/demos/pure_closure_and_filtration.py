"""Pure closures and filtrations, with their step-by-step traces.

Starting from one element, alternately generate a subrepresentation and
enlarge impure vertices by the torsion-preimage construction; the chain
stabilizes and the fixpoint is componentwise pure.  Iterating this inside
successive quotients filters a componentwise flat representation by pure
stages with flat quotients.
"""

from qrep.rings import ZZ
from qrep.linalg import Matrix
from qrep.modules import FGModule, ModuleMap
from qrep.quiver import Quiver
from qrep.reps import RepElement, Representation
from qrep.closures import pure_closure_rep, small_filtration


def doubling_rep():
    a2 = Quiver.line(2)
    z = FGModule.free(ZZ, 1)
    return Representation(
        a2, ZZ, {"v1": z, "v2": z}, {"a1": ModuleMap(z, z, Matrix(ZZ, [[2]]))}
    )


def main():
    M = doubling_rep()
    print("representation: Z --x2--> Z; seed element 1 at v1")
    res = pure_closure_rep(M, RepElement(M, "v1", (1,)))
    for line in res.trace_lines():
        print(f"  {line}")
    print(f"  closure: {res.representation.describe()}")
    print()

    F_mods = {"v1": FGModule.free(ZZ, 2), "v2": FGModule.free(ZZ, 2)}
    F = Representation(
        Quiver.line(2),
        ZZ,
        F_mods,
        {"a1": ModuleMap(F_mods["v1"], F_mods["v2"], Matrix(ZZ, [[1, 0], [0, 2]]))},
    )
    print("filtration of the free rank-2 representation with diag(1,2) arrow:")
    filt = small_filtration(F)
    for line in filt.trace_lines():
        print(f"  {line}")


if __name__ == "__main__":
    main()
