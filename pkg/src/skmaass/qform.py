"""Positive definite binary quadratic forms as half-integral 2x2 matrices.

A form ``QForm(a, b, c)`` stands for ``T = [[a, b/2], [b/2, c]]``, i.e.
``a x^2 + b x y + c y^2``. Matrices act on the right, ``T -> U^t T U``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .arith import (
    count_roots_minus_one,
    count_roots_omega,
    factor,
    fundamental_part,
    is_fundamental_discriminant,
    kronecker,
    prime_divisors,
    units_index,
)

__all__ = [
    "QForm",
    "UnimodularMatrix",
    "ClassSet",
    "ClassCountMismatch",
    "s_of_d",
    "reduce",
    "reduced_forms",
    "automorphism_group",
    "sl2_equivalent",
    "gamma0_equivalent",
    "in_gamma0",
    "coset_reps_gamma0",
    "gamma0_index",
    "enumerate_classes",
    "count_classes_formula",
    "h1_classes",
    "is_phi_surjective",
]


class ClassCountMismatch(ArithmeticError):
    """An enumerated class set disagrees with the cardinality it must have."""


@dataclass(frozen=True, order=True)
class QForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        if not (self.a > 0 and self.c > 0 and self.b * self.b - 4 * self.a * self.c < 0):
            raise ValueError(f"({self.a}, {self.b}, {self.c}) is not positive definite")

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def content(self) -> int:
        return gcd(self.a, self.b, self.c)

    def scaled(self, L: int) -> QForm:
        return QForm(L * self.a, L * self.b, L * self.c)

    def primitive(self) -> QForm:
        g = self.content
        return QForm(self.a // g, self.b // g, self.c // g)

    def transform(self, U: UnimodularMatrix | tuple) -> QForm:
        """``U^t T U``; ``U`` may be any integer matrix with nonzero determinant."""
        p, q, r, s = U
        a, b, c = self.a, self.b, self.c
        return QForm(
            a * p * p + b * p * r + c * r * r,
            2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s,
            a * q * q + b * q * s + c * s * s,
        )

    def value(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def is_reduced(self) -> bool:
        a, b, c = self.a, self.b, self.c
        if not (abs(b) <= a <= c):
            return False
        if (abs(b) == a or a == c) and b < 0:
            return False
        return True

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __str__(self):
        return f"({self.a}, {self.b}, {self.c})"


@dataclass(frozen=True)
class UnimodularMatrix:
    """``[[p, q], [r, s]]`` with ``p s - q r = 1``."""

    p: int
    q: int
    r: int
    s: int

    def __post_init__(self):
        if self.p * self.s - self.q * self.r != 1:
            raise ValueError(f"determinant of {self.rows()} is not 1")

    @classmethod
    def identity(cls) -> UnimodularMatrix:
        return cls(1, 0, 0, 1)

    def rows(self):
        return ((self.p, self.q), (self.r, self.s))

    def __iter__(self):
        return iter((self.p, self.q, self.r, self.s))

    def __matmul__(self, other: UnimodularMatrix) -> UnimodularMatrix:
        p, q, r, s = self
        P, Q, R, S = other
        return UnimodularMatrix(p * P + q * R, p * Q + q * S, r * P + s * R, r * Q + s * S)

    def __neg__(self):
        return UnimodularMatrix(-self.p, -self.q, -self.r, -self.s)

    def inverse(self) -> UnimodularMatrix:
        return UnimodularMatrix(self.s, -self.q, -self.r, self.p)

    def __str__(self):
        return f"[[{self.p}, {self.q}], [{self.r}, {self.s}]]"


_S = UnimodularMatrix(0, -1, 1, 0)


def _translation(k: int) -> UnimodularMatrix:
    return UnimodularMatrix(1, k, 0, 1)


def in_gamma0(U: UnimodularMatrix, N: int) -> bool:
    """Membership in Gamma^0(N): upper-right entry divisible by N."""
    return U.q % N == 0


def s_of_d(d: int) -> QForm:
    """The base form of a negative fundamental discriminant ``d``."""
    if d >= 0 or not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a negative fundamental discriminant")
    if d % 4 == 0:
        return QForm(-d // 4, 0, 1)
    return QForm((1 - d) // 4, 1, 1)


def reduce(T: QForm) -> tuple[QForm, UnimodularMatrix]:
    """Gauss reduction. Returns ``(R, U)`` with ``U^t T U = R`` and ``R`` reduced,
    where reduced means ``|b| <= a <= c`` and ``b >= 0`` if ``|b| == a`` or ``a == c``."""
    U = UnimodularMatrix.identity()
    R = T
    while True:
        a, b, c = R
        # bring b into (-a, a]
        k = (a - b) // (2 * a)
        if k:
            step = _translation(k)
            R, U = R.transform(step), U @ step
            a, b, c = R
        if a > c or (a == c and b < 0):
            R, U = R.transform(_S), U @ _S
            continue
        return R, U


def reduced_forms(D: int, primitive: bool = True) -> list[QForm]:
    """All reduced positive definite forms of discriminant ``D < 0``, sorted."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")
    out = []
    for a in range(1, isqrt(-D // 3) + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (a == c and b < 0):
                continue
            if primitive and gcd(a, b, c) != 1:
                continue
            out.append(QForm(a, b, c))
    return sorted(out)


def _xi(T: QForm) -> tuple:
    # xi = [[b/2, c], [-a, -b/2]] of the primitive part, scaled by 2 to stay integral
    a, b, c = T.primitive()
    return (b, 2 * c, -2 * a, -b)


def automorphism_group(T: QForm) -> list[UnimodularMatrix]:
    """``E(T) = {g in SL2(Z) : g^t T g = T}``: order 2, 4 (primitive disc -4) or 6 (primitive disc -3)."""
    d, M = fundamental_part(T.primitive().disc)
    one = UnimodularMatrix.identity()
    group = [one, -one]
    if M > 1 or d not in (-3, -4):
        return group
    x0, x1, x2, x3 = _xi(T)
    if d == -4:
        xi = UnimodularMatrix(x0 // 2, x1 // 2, x2 // 2, x3 // 2)
        return group + [xi, -xi]
    for sign in (1, -1):
        # sign/2 + xi, entries are integers because b is odd
        g = UnimodularMatrix((sign + x0) // 2, x1 // 2, x2 // 2, (sign + x3) // 2)
        group += [g, -g]
    return group


def sl2_equivalent(T1: QForm, T2: QForm) -> UnimodularMatrix | None:
    """A matrix ``U`` with ``U^t T1 U = T2`` or ``None``."""
    R1, U1 = reduce(T1)
    R2, U2 = reduce(T2)
    if R1 != R2:
        return None
    return U1 @ U2.inverse()


def _witnesses(T1: QForm, T2: QForm, red1=None, red2=None):
    R1, U1 = red1 or reduce(T1)
    R2, U2 = red2 or reduce(T2)
    if R1 != R2:
        return []
    U2inv = U2.inverse()
    return [U1 @ E @ U2inv for E in automorphism_group(R1)]


def gamma0_equivalent(T1: QForm, T2: QForm, N: int, red1=None, red2=None) -> UnimodularMatrix | None:
    """A witness ``A`` in Gamma^0(N) with ``A^t T1 A = T2``, or ``None``.

    Every solution of ``g^t T1 g = T2`` in SL2(Z) is ``U1 E U2^-1`` with ``E`` in the
    automorphism group of the common reduced form, so scanning that finite set decides
    the question. ``red1``/``red2`` accept precomputed reductions.
    """
    for g in _witnesses(T1, T2, red1, red2):
        if in_gamma0(g, N):
            return g
    return None


def _complete(u: int, v: int) -> UnimodularMatrix:
    # find x, y with x v - u y = 1
    g, s, t = _ext_gcd(v, -u)
    if g < 0:
        g, s, t = -g, -s, -t
    assert g == 1
    return UnimodularMatrix(s, u, t, v)


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def gamma0_index(N: int) -> int:
    idx = Fraction(N)
    for p in prime_divisors(N):
        idx *= Fraction(p + 1, p)
    return int(idx)


def coset_reps_gamma0(N: int) -> list[UnimodularMatrix]:
    """Left coset representatives ``A`` of SL2(Z)/Gamma^0(N).

    The second column ``(u, v)`` runs over ``v | N`` and classes ``u mod N/v``
    containing an integer prime to ``v``.
    """
    if N < 1:
        raise ValueError("N must be positive")
    reps = []
    for v in range(1, N + 1):
        if N % v:
            continue
        m = N // v
        for u0 in range(m):
            if gcd(u0, m, v) != 1:
                continue
            u = u0
            while gcd(u, v) != 1:
                u += m
            reps.append(_complete(u, v))
    return reps


@dataclass
class ClassSet:
    d: int
    M: int
    L: int
    N: int
    representatives: list[QForm] = field(default_factory=list)

    def __len__(self):
        return len(self.representatives)

    def __iter__(self):
        return iter(self.representatives)


def _check_tuple(d, M, L, N):
    if d >= 0 or not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a negative fundamental discriminant")
    for name, x in (("M", M), ("L", L), ("N", N)):
        if x < 1:
            raise ValueError(f"{name} must be a positive integer, got {x}")


def _dedupe(candidates: list[QForm], N: int) -> list[QForm]:
    """Keep one form per Gamma^0(N)-class, preserving first occurrence."""
    buckets: dict[QForm, list[tuple[QForm, tuple]]] = {}
    kept = []
    for T in candidates:
        red = reduce(T)
        bucket = buckets.setdefault(red[0], [])
        if any(gamma0_equivalent(S, T, N, red1=rs, red2=red) for S, rs in bucket):
            continue
        bucket.append((T, red))
        kept.append(T)
    return kept


def enumerate_classes(d: int, M: int, L: int, N: int) -> ClassSet:
    """Representatives of H(dM^2, L; Gamma^0(N)), built from the reduced forms of
    discriminant dM^2 and the coset representatives of Gamma^0(N)."""
    _check_tuple(d, M, L, N)
    cosets = coset_reps_gamma0(N)
    candidates = [S.scaled(L).transform(A) for S in reduced_forms(d * M * M) for A in cosets]
    return ClassSet(d, M, L, N, _dedupe(candidates, N))


def count_classes_formula(d: int, M: int, L: int, N: int) -> int:
    """Closed-form |H(dM^2, L; Gamma^0(N))|; independent of ``L``."""
    _check_tuple(d, M, L, N)
    r = gamma0_index(N)
    if (d, M) == (-4, 1):
        value = Fraction(r + count_roots_minus_one(N, check=False), 2)
    elif (d, M) == (-3, 1):
        value = Fraction(r + 2 * count_roots_omega(N, check=False), 3)
    else:
        h = len(reduced_forms(d))
        value = Fraction(h * M * N, units_index(d))
        for p in prime_divisors(M):
            value *= 1 - Fraction(kronecker(d, p), p)
        for p in prime_divisors(N):
            value *= Fraction(p + 1, p)
    if value.denominator != 1:
        raise ClassCountMismatch(f"class count for {(d, M, L, N)} is not an integer: {value}")
    return int(value)


def h1_classes(d: int, M: int, L: int, N: int, check: bool = True) -> ClassSet:
    """The Gamma^0(N)-classes of the forms ``L diag(M,1) S diag(M,1)``.

    ``S`` runs over primitive forms of discriminant ``d`` whose lower-right entry is
    prime to ``MN`` (the congruence the base form acquires under the diagonal-mod-MN
    compact subgroup). Such ``S`` are taken up to Gamma^0(MN), which is what the
    conjugation by diag(M, 1) turns Gamma^0(N) into. With ``check`` the result is
    compared to the ray class group order and a mismatch raises.
    """
    from .rayclass import raycl_size

    _check_tuple(d, M, L, N)
    MN = M * N
    candidates = []
    for S in reduced_forms(d):
        for A in coset_reps_gamma0(MN):
            a, b, c = S.transform(A)
            if gcd(c, MN) != 1:
                continue
            candidates.append(QForm(L * M * M * a, L * M * b, L * c))
    reps = _dedupe(candidates, N)
    if check:
        expected = raycl_size(d, MN, check=False)
        if len(reps) != expected:
            raise ClassCountMismatch(
                f"|H_1({d}*{M}^2, {L}; Gamma^0({N}))| = {len(reps)} but |Cl_{d}({MN})| = {expected}"
            )
    return ClassSet(d, M, L, N, reps)


def is_phi_surjective(d: int, M: int, N: int) -> bool:
    return all(kronecker(d * M * M, p) == -1 for p, _ in factor(N))
