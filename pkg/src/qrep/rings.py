"""Coefficient rings for exact module arithmetic.

Three backends: the integers, the rationals, and prime fields F_p.  Scalars
are plain Python objects (int for Z and F_p, Fraction for Q), so every
computation downstream is arbitrary precision with no floating point.

Ring objects are stateless and immutable; all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


class RingMismatchError(ValueError):
    """Operands live over different coefficient rings."""


class CoefficientRing:
    """Base class for the three scalar backends.

    ``satisfies_A`` records that any direct sum of torsion-free injective
    modules is injective over this ring; ``is_prufer`` that flat and
    torsion-free modules coincide.  Both are documented metadata for the
    admitted rings, not decision procedures (they quantify over all
    modules).
    """

    kind: str
    is_field: bool
    satisfies_A: bool = True
    is_prufer: bool = True

    def element(self, x):
        raise NotImplementedError

    @property
    def zero(self):
        return self.element(0)

    @property
    def one(self):
        return self.element(1)

    def add(self, a, b):
        return self.element(a + b)

    def sub(self, a, b):
        return self.element(a - b)

    def mul(self, a, b):
        return self.element(a * b)

    def neg(self, a):
        return self.element(-a)

    def is_zero(self, a):
        return self.element(a) == self.zero

    def reduce(self, a):
        """Cheap post-arithmetic normalization (mod p over prime fields)."""
        return a

    def is_unit(self, a):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def scalar_to_doc(self, a):
        """JSON-friendly form of a scalar (int, or 'p/q' for fractions)."""
        return a

    def __repr__(self):
        return self.kind


class IntegerRing(CoefficientRing):
    kind = "Z"
    is_field = False

    def element(self, x):
        if isinstance(x, bool):
            raise TypeError("bool is not an integer scalar")
        if isinstance(x, int):
            return x
        if isinstance(x, Fraction) and x.denominator == 1:
            return int(x)
        if isinstance(x, str):
            return int(x)
        raise TypeError(f"not an integer scalar: {x!r}")

    def is_unit(self, a):
        return a in (1, -1)

    def inv(self, a):
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit of Z")
        return a

    def __eq__(self, other):
        return isinstance(other, IntegerRing)

    def __hash__(self):
        return hash("Z")


class RationalField(CoefficientRing):
    kind = "Q"
    is_field = True

    def element(self, x):
        if isinstance(x, bool):
            raise TypeError("bool is not a rational scalar")
        if isinstance(x, (int, Fraction)):
            return Fraction(x)
        if isinstance(x, str):
            return Fraction(x)
        raise TypeError(f"not a rational scalar: {x!r}")

    def is_unit(self, a):
        return a != 0

    def inv(self, a):
        return Fraction(1) / Fraction(a)

    def scalar_to_doc(self, a):
        a = Fraction(a)
        if a.denominator == 1:
            return int(a)
        return f"{a.numerator}/{a.denominator}"

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("Q")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


class PrimeField(CoefficientRing):
    is_field = True

    def __init__(self, p: int):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        self.p = p
        self.kind = f"F{p}"

    def element(self, x):
        if isinstance(x, bool):
            raise TypeError("bool is not a field scalar")
        if isinstance(x, int):
            return x % self.p
        if isinstance(x, Fraction):
            if x.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return (x.numerator * pow(x.denominator, -1, self.p)) % self.p
        if isinstance(x, str):
            return int(x) % self.p
        raise TypeError(f"not a scalar mod {self.p}: {x!r}")

    def reduce(self, a):
        return a % self.p

    def is_unit(self, a):
        return a % self.p != 0

    def inv(self, a):
        return pow(a % self.p, -1, self.p)

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))


ZZ = IntegerRing()
QQ = RationalField()


def GF(p: int) -> PrimeField:
    return PrimeField(p)


def ring_from_name(name: str) -> CoefficientRing:
    """Parse a ring name: 'Z', 'Q', or 'F<p>' (e.g. 'F5')."""
    name = name.strip()
    if name == "Z":
        return ZZ
    if name == "Q":
        return QQ
    if name.startswith("F") and name[1:].isdigit():
        return GF(int(name[1:]))
    raise ValueError(f"unknown coefficient ring {name!r}")


@dataclass(frozen=True)
class TorsionTheorySpec:
    """A hereditary faithful torsion theory admitted by the toolkit.

    ``classical`` and ``p_primary(p)`` make sense over the integers;
    ``trivial`` (torsion class = {0}) is the only spec admitted over the
    two field backends.
    """

    kind: str  # "classical" | "p_primary" | "trivial"
    p: int | None = None

    @staticmethod
    def classical() -> "TorsionTheorySpec":
        return TorsionTheorySpec("classical")

    @staticmethod
    def p_primary(p: int) -> "TorsionTheorySpec":
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        return TorsionTheorySpec("p_primary", p)

    @staticmethod
    def trivial() -> "TorsionTheorySpec":
        return TorsionTheorySpec("trivial")

    def validate_for(self, ring: CoefficientRing) -> None:
        if self.kind not in ("classical", "p_primary", "trivial"):
            raise ValueError(f"unknown torsion theory {self.kind!r}")
        if self.kind == "p_primary" and (self.p is None or not _is_prime(self.p)):
            raise ValueError("p-primary torsion theory needs a prime p")
        if ring.is_field and self.kind != "trivial":
            raise ValueError(
                f"torsion theory {self.describe()} is not admitted over the field {ring.kind}; "
                "only the trivial theory is"
            )
        if not ring.is_field and self.kind == "trivial":
            # Trivial over Z is fine mathematically but never what callers
            # mean; reject so that misconfigured documents fail loudly.
            raise ValueError("use the classical or p-primary theory over Z")

    def describe(self) -> str:
        if self.kind == "p_primary":
            return f"p-primary:{self.p}"
        return self.kind

    @staticmethod
    def from_name(name: str) -> "TorsionTheorySpec":
        name = name.strip()
        if name == "classical":
            return TorsionTheorySpec.classical()
        if name == "trivial":
            return TorsionTheorySpec.trivial()
        if name.startswith("p-primary:"):
            return TorsionTheorySpec.p_primary(int(name.split(":", 1)[1]))
        raise ValueError(f"unknown torsion theory {name!r}")
