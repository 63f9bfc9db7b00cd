"""Symbolic values of the spherical Bessel vector of a type IIb representation.

The values ``B_p(h(0, n))`` are kept as free generators, since only linear
identities between them are needed; ``BesselExpr`` is a rational linear
combination of them at one prime and ``BesselProductExpr`` a sum of products
across several primes.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import product

from .arith import divisors, factor, is_prime, ord_p

__all__ = [
    "BesselExpr",
    "BesselProductExpr",
    "iib_value",
    "maass_identity_sides",
    "maass_identity_check",
    "Kind",
    "Condition",
    "bessel_exists_lookup",
    "REPRESENTATION_TYPES",
]


def _clean(terms: dict) -> dict:
    return {k: Fraction(v) for k, v in terms.items() if v != 0}


class BesselExpr:
    """``sum_n coeff(n) * B_p(h(0, n))`` at a fixed prime ``p``."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms: dict[int, Fraction] | None = None):
        self.p = p
        self.terms = _clean(terms or {})

    @classmethod
    def generator(cls, p: int, n: int) -> BesselExpr:
        return cls(p, {n: 1})

    def __add__(self, other: BesselExpr) -> BesselExpr:
        if self.p != other.p:
            raise ValueError("cannot add Bessel values at different primes")
        out = dict(self.terms)
        for n, v in other.terms.items():
            out[n] = out.get(n, 0) + v
        return BesselExpr(self.p, out)

    def scale(self, x) -> BesselExpr:
        return BesselExpr(self.p, {n: v * x for n, v in self.terms.items()})

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, BesselExpr) and (self.p, self.terms) == (other.p, other.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{v}*B{self.p}(0,{n})" for n, v in sorted(self.terms.items()))


def iib_value(p: int, l: int, m: int) -> BesselExpr:
    """``B_p(h(l, m))`` for a type IIb spherical vector with trivial character.

    Zero when ``l < 0`` or ``m < 0``; otherwise ``sum_{i=0}^{l} p^-i B_p(h(0, l+m-i))``.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if l < 0 or m < 0:
        return BesselExpr(p)
    return BesselExpr(p, {l + m - i: Fraction(1, p**i) for i in range(l + 1)})


class BesselProductExpr:
    """Sum of products ``prod_p B_p(h(0, n_p))`` over a fixed tuple of primes."""

    __slots__ = ("primes", "terms")

    def __init__(self, primes: tuple[int, ...], terms: dict[tuple[int, ...], Fraction] | None = None):
        self.primes = tuple(primes)
        self.terms = _clean(terms or {})

    @classmethod
    def from_factors(cls, factors: list[BesselExpr]) -> BesselProductExpr:
        """Expand ``prod_i factors[i]`` (one factor per distinct prime)."""
        primes = tuple(f.p for f in factors)
        if len(set(primes)) != len(primes):
            raise ValueError("one factor per prime")
        terms: dict[tuple[int, ...], Fraction] = {}
        for combo in product(*(sorted(f.terms.items()) for f in factors)):
            key = tuple(n for n, _ in combo)
            coeff = Fraction(1)
            for _, v in combo:
                coeff *= v
            terms[key] = terms.get(key, 0) + coeff
        return cls(primes, terms)

    def __add__(self, other: BesselProductExpr) -> BesselProductExpr:
        if self.primes != other.primes:
            raise ValueError("prime supports differ")
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, 0) + v
        return BesselProductExpr(self.primes, out)

    def scale(self, x) -> BesselProductExpr:
        return BesselProductExpr(self.primes, {k: v * x for k, v in self.terms.items()})

    def __eq__(self, other):
        return isinstance(other, BesselProductExpr) and (self.primes, self.terms) == (other.primes, other.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for key, v in sorted(self.terms.items()):
            gens = "*".join(f"B{p}(0,{n})" for p, n in zip(self.primes, key)) or "1"
            parts.append(f"{v}*{gens}")
        return " + ".join(parts)


def _support(L: int, M: int, N2: int) -> tuple[int, ...]:
    return tuple(p for p, _ in factor(L * M) if N2 % p)


def maass_identity_sides(L: int, M: int, N2: int) -> tuple[BesselProductExpr, BesselProductExpr]:
    """Both sides of the local identity behind the level-N Maass relation.

    Left:  prod_{p | LM, p !| N2} B_p(h(l_p, m_p)), expanded with the IIb recursion.
    Right: sum_{r | L, gcd(r, N2) = 1} r^-1 prod_{p | LM, p !| N2} B_p(h(0, l_p + m_p - r_p)).
    """
    if min(L, M, N2) < 1:
        raise ValueError("L, M, N2 must be positive")
    primes = _support(L, M, N2)
    lm = {p: (ord_p(L, p), ord_p(M, p)) for p in primes}
    lhs = BesselProductExpr.from_factors([iib_value(p, *lm[p]) for p in primes])

    rhs = BesselProductExpr(primes)
    for r in divisors(L):
        if any(N2 % p == 0 for p, _ in factor(r)):
            continue
        key = tuple(lm[p][0] + lm[p][1] - ord_p(r, p) for p in primes)
        rhs = rhs + BesselProductExpr(primes, {key: Fraction(1, r)})
    return lhs, rhs


def maass_identity_check(L: int, M: int, N2: int) -> bool:
    lhs, rhs = maass_identity_sides(L, M, N2)
    return lhs == rhs


class Kind(Enum):
    ALL = "all"
    NONE = "none"
    EQUALS_NORM_TWIST = "equals_norm_twist"
    NOT_EQUALS_NORM_TWIST = "not_equals_norm_twist"
    PAIR_IN = "pair_in"


@dataclass(frozen=True)
class Condition:
    """One clause of a Bessel-existence condition on the character Lambda.

    ``EQUALS_NORM_TWIST('chi sigma')`` reads Lambda = (chi sigma) o Norm, and with
    several characters Lambda equals one of the listed twists; ``PAIR_IN`` lists the allowed pairs (chi_1, chi_2) of the split torus.
    A cell is the conjunction of its clauses.
    """

    kind: Kind
    characters: tuple = ()

    def __str__(self):
        if self.kind is Kind.ALL:
            return "all Lambda"
        if self.kind is Kind.NONE:
            return "none"
        if self.kind is Kind.EQUALS_NORM_TWIST:
            return " or ".join(f"Lambda = ({ch}) o N" for ch in self.characters)
        if self.kind is Kind.NOT_EQUALS_NORM_TWIST:
            return f"Lambda != ({self.characters[0]}) o N"
        pairs = ", ".join(f"({x}, {y})" for x, y in self.characters)
        return f"Lambda in {{{pairs}}}"


_ALL = (Condition(Kind.ALL),)
_NONE = (Condition(Kind.NONE),)


def _eq(*chars):
    return Condition(Kind.EQUALS_NORM_TWIST, chars)


def _ne(ch):
    return Condition(Kind.NOT_EQUALS_NORM_TWIST, (ch,))


# (split torus L = F + F, field extension L/F)
_TABLE = {
    "I": (_ALL, _ALL),
    "IIa": (_ALL, (_ne("chi sigma"),)),
    "IIb": ((_eq("chi sigma"),), (_eq("chi sigma"),)),
    "IIIa": (_ALL, _ALL),
    "IIIb": ((Condition(Kind.PAIR_IN, (("chi sigma", "sigma"), ("sigma", "chi sigma"))),), _NONE),
    "IVa": (_ALL, (_ne("sigma"),)),
    "IVb": ((_eq("sigma"),), (_eq("sigma"),)),
    "IVc": (
        (Condition(Kind.PAIR_IN, (("nu sigma", "nu^-1 sigma"), ("nu^-1 sigma", "nu sigma"))),),
        _NONE,
    ),
    "IVd": (_NONE, _NONE),
    "Va": (_ALL, (_ne("sigma"), _ne("xi sigma"))),
    "Vb": ((_eq("sigma"),), (_eq("sigma"), _ne("xi sigma"))),
    "Vc": ((_eq("xi sigma"),), (_ne("sigma"), _eq("xi sigma"))),
    "Vd": (_NONE, (_eq("sigma", "xi sigma"),)),
    "VIa": (_ALL, (_ne("sigma"),)),
    "VIb": (_NONE, (_eq("sigma"),)),
    "VIc": ((_eq("sigma"),), _NONE),
    "VId": ((_eq("sigma"),), _NONE),
}

REPRESENTATION_TYPES = tuple(_TABLE)


def bessel_exists_lookup(repr_type: str, l_case: str) -> tuple[Condition, ...]:
    """Characters Lambda admitting a (Lambda, theta)-Bessel functional, for the
    Borel-induced representation ``repr_type`` and torus ``l_case`` ('split' or 'field')."""
    if repr_type not in _TABLE:
        raise ValueError(f"unknown representation type {repr_type!r}")
    try:
        col = {"split": 0, "field": 1}[l_case]
    except KeyError:
        raise ValueError(f"l_case must be 'split' or 'field', got {l_case!r}") from None
    return _TABLE[repr_type][col]
