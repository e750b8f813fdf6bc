"""The cyclic-shift representation on a loop: conditions without injectivity.

On a loop quiver the two vertexwise conditions (injective vertex modules,
split maps into the outgoing products) do NOT characterize injective
representations.  The shift representation satisfies both, yet a single
nonzero path-ring element annihilates it, so it cannot be divisible and
therefore is not injective.
"""

from qrep.rings import QQ, GF
from qrep.modules import FGModule
from qrep.pathring import (
    act_on_generators,
    annihilator_witness,
    full_cycle_annihilator,
    nloop_representation,
)


def show(n, E, label):
    X = nloop_representation(n, E)
    print(f"--- {n}-loop, vertex module {label}^{n} ---")
    print(f"vertex modules: {X.describe()}")
    s = full_cycle_annihilator(X.quiver, X.ring)
    print(f"annihilator element: {s!r}")
    images = act_on_generators(s, X)
    nonzero = [key for key, fam in images.items() if any(
        not X.vertex_modules[v].is_zero_element(val) for v, val in fam.items()
    )]
    print(f"generators not killed: {nonzero if nonzero else 'none (all annihilated)'}")
    report = annihilator_witness(X.quiver, X)
    for line in report.lines():
        print(f"  {line}")
    print()


if __name__ == "__main__":
    show(2, FGModule.free(QQ, 1), "Q")
    show(3, FGModule.free(QQ, 1), "Q")
    show(2, FGModule.free(GF(5), 1), "F5")
    show(3, FGModule.free(GF(5), 1), "F5")
