"""Fourier coefficients of degree-2 Siegel cusp forms and the Maass relations.

The test object is Igusa's weight-10 cusp form, built here as the product of
the squares of the ten even genus-2 theta constants. Nothing in that
construction knows about Maass relations, so it is a fair oracle for them.

Theta exponents ``T = [[A/8, B/16], [B/16, C/8]]`` are stored as integer
triples ``(A, B, C)``: diagonal in units of 1/8 and the doubled off-diagonal
(the ``b`` of ``a x^2 + b x y + c y^2``) in units of 1/8 as well.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, prod
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

import numpy as np

from .arith import divisors, is_prime, kronecker, prime_divisors, smooth_part
from .qform import QForm

__all__ = [
    "EVEN_CHARACTERISTICS",
    "ThetaSeries",
    "theta_constant",
    "theta_product_region",
    "FourierTable",
    "OutOfBoundError",
    "MalformedFormError",
    "JacobiInconsistency",
    "ThetaConsistencyError",
    "SFCParseError",
    "igusa_chi10",
    "maass_rhs_classical",
    "maass_check_classical",
    "maass_rhs_levelN",
    "maass_check_levelN",
    "levelN_hypothesis",
    "extract_jacobi",
    "lift_from_jacobi",
    "verify_table",
    "VerificationReport",
    "read_sfc",
    "write_sfc",
    "format_sfc",
    "parse_sfc",
]


class OutOfBoundError(LookupError):
    """A coefficient outside the region the table is complete on was requested."""


class MalformedFormError(ValueError):
    pass


class JacobiInconsistency(ArithmeticError):
    pass


class ThetaConsistencyError(ArithmeticError):
    pass


class SFCParseError(ValueError):
    def __init__(self, lineno: int, msg: str):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


# ---------------------------------------------------------------- theta series

EVEN_CHARACTERISTICS = tuple(
    ((a1, a2), (b1, b2))
    for a1 in (0, 1)
    for a2 in (0, 1)
    for b1 in (0, 1)
    for b2 in (0, 1)
    if (a1 * b1 + a2 * b2) % 2 == 0
)


@dataclass
class ThetaSeries:
    """Sparse truncated series ``sum coeff * e(tr(T Z))`` keyed by ``(A, B, C)``.

    Complete for all exponents with ``A <= 8 * max_a`` and ``C <= 8 * max_c``.
    """

    coeffs: dict[tuple[int, int, int], int]
    max_a: int
    max_c: int

    def __mul__(self, other: ThetaSeries) -> ThetaSeries:
        ma, mc = min(self.max_a, other.max_a), min(self.max_c, other.max_c)
        lim_a, lim_c = 8 * ma, 8 * mc
        out: dict[tuple[int, int, int], int] = {}
        right = list(other.coeffs.items())
        for (A1, B1, C1), v1 in self.coeffs.items():
            for (A2, B2, C2), v2 in right:
                A, C = A1 + A2, C1 + C2
                if A > lim_a or C > lim_c:
                    continue
                key = (A, B1 + B2, C)
                out[key] = out.get(key, 0) + v1 * v2
        return ThetaSeries({k: v for k, v in out.items() if v}, ma, mc)

    def __getitem__(self, key):
        return self.coeffs.get(key, 0)


def _theta_terms(characteristic, max_a: int, max_c: int) -> list[tuple[int, int, int, int]]:
    (a1, a2), (b1, b2) = characteristic
    if (a1 * b1 + a2 * b2) % 2:
        raise ValueError(f"odd characteristic {characteristic}")
    lim1, lim2 = isqrt(8 * max_a), isqrt(8 * max_c)
    terms = []
    for w1 in range(-lim1, lim1 + 1):
        if (w1 - a1) % 2:
            continue
        for w2 in range(-lim2, lim2 + 1):
            if (w2 - a2) % 2:
                continue
            # phase i^(w.b); w.b is even for an even characteristic
            sign = -1 if ((w1 * b1 + w2 * b2) // 2) % 2 else 1
            terms.append((w1 * w1, 2 * w1 * w2, w2 * w2, sign))
    return terms


def theta_constant(characteristic, bound: int, bound_c: int | None = None) -> ThetaSeries:
    """Truncated expansion of the genus-2 theta constant with the given even
    characteristic ``((a1, a2), (b1, b2))``: all terms with diagonal entries
    ``<= bound`` (``<= bound_c`` for the lower-right entry if given)."""
    max_c = bound if bound_c is None else bound_c
    coeffs: dict[tuple[int, int, int], int] = {}
    for A, B, C, sign in _theta_terms(characteristic, bound, max_c):
        coeffs[(A, B, C)] = coeffs.get((A, B, C), 0) + sign
    return ThetaSeries({k: v for k, v in coeffs.items() if v}, bound, max_c)


def _primes_below(limit: int, count: int) -> list[int]:
    out, n = [], limit - 1
    while len(out) < count:
        if is_prime(n):
            out.append(n)
        n -= 1
    return out


# residues stay below 2**55, so sums of < 256 of them fit in int64
_MODULI_CAP = 2**55


def _dense_theta_product(max_a: int, max_c: int) -> dict[tuple[int, int, int], int]:
    """Exact coefficients of prod_m theta_m^2 on the region a <= max_a, c <= max_c.

    The product is evaluated densely modulo several 55-bit primes and recovered by
    the Chinese remainder theorem; the number of primes is chosen from the l1-norm
    bound prod ||theta_m||_1^2, so the recovery is exact. Since all exponents are
    positive semidefinite, truncating each factor to the region is harmless.
    """
    nA, nC = 8 * max_a + 1, 8 * max_c + 1
    bmax = 2 * isqrt(64 * max_a * max_c)
    nB = 2 * bmax + 1
    factors = [_theta_terms(ch, max_a, max_c) for ch in EVEN_CHARACTERISTICS]
    if max(len(t) for t in factors) >= 256:
        raise ValueError("region too large for the int64 accumulation scheme")
    l1 = prod(len(t) ** 2 for t in factors)
    moduli = []
    for p in _primes_below(_MODULI_CAP, 8):
        moduli.append(p)
        if prod(moduli) > 2 * l1:
            break
    P = len(moduli)
    mods = np.array(moduli, dtype=np.int64).reshape(P, 1, 1, 1)

    # axes (prime, A, C, B): the widest axis is contiguous
    arr = np.zeros((P, nA, nC, nB), dtype=np.int64)
    arr[:, 0, 0, bmax] = 1
    ext_a = ext_c = 0
    for terms in factors:
        step_a = max(t[0] for t in terms)
        step_c = max(t[2] for t in terms)
        for _ in range(2):
            out = np.zeros_like(arr)
            for A, B, C, sign in terms:
                ha = min(ext_a, nA - 1 - A) + 1
                hc = min(ext_c, nC - 1 - C) + 1
                if ha <= 0 or hc <= 0:
                    continue
                if B >= 0:
                    src_b, dst_b = slice(0, nB - B), slice(B, nB)
                else:
                    src_b, dst_b = slice(-B, nB), slice(0, nB + B)
                src = arr[:, :ha, :hc, src_b]
                dst = out[:, A : A + ha, C : C + hc, dst_b]
                if sign > 0:
                    dst += src
                else:
                    dst -= src
            out %= mods
            arr = out
            ext_a = min(nA - 1, ext_a + step_a)
            ext_c = min(nC - 1, ext_c + step_c)

    # entries at non-half-integral exponents must vanish
    stray = arr.copy()
    stray[:, ::8, ::8, bmax % 8 :: 8] = 0
    if np.any(stray):
        raise ThetaConsistencyError("theta product has coefficients at non-half-integral exponents")

    M = prod(moduli)
    crt_basis = [(M // p) * pow(M // p, -1, p) for p in moduli]
    sub = arr[:, ::8, ::8, bmax % 8 :: 8]
    b_first = (bmax % 8 - bmax) // 8
    result = {}
    for ia, ic, ib in zip(*np.nonzero(np.any(sub, axis=0))):
        x = sum(int(sub[j, ia, ic, ib]) * crt_basis[j] for j in range(P)) % M
        if x > M // 2:
            x -= M
        a, b, c = int(ia), int(ib) + b_first, int(ic)
        if b * b - 4 * a * c >= 0:
            raise ThetaConsistencyError(f"nonzero coefficient at singular exponent {(a, b, c)}")
        result[(a, b, c)] = x
    return result


def theta_product_region(max_a: int, max_c: int, method: str = "dense") -> dict[tuple[int, int, int], int]:
    """Raw coefficients of prod_m theta_m(Z)^2 at half-integral ``(a, b, c)`` with
    ``a <= max_a``, ``c <= max_c``. ``method='sparse'`` multiplies exact sparse
    series instead and is only practical for small regions."""
    if method == "dense":
        return _dense_theta_product(max_a, max_c)
    if method != "sparse":
        raise ValueError(f"unknown method {method!r}")
    series = None
    for ch in EVEN_CHARACTERISTICS:
        th = theta_constant(ch, max_a, max_c)
        sq = th * th
        series = sq if series is None else series * sq
    result = {}
    for (A, B, C), v in series.coeffs.items():
        if A % 8 or B % 8 or C % 8:
            raise ThetaConsistencyError(f"coefficient at non-half-integral exponent {(A, B, C)}")
        a, b, c = A // 8, B // 8, C // 8
        if b * b - 4 * a * c >= 0:
            raise ThetaConsistencyError(f"nonzero coefficient at singular exponent {(a, b, c)}")
        result[(a, b, c)] = v
    return result


# ---------------------------------------------------------------- coefficient tables


def box_forms(bound: int) -> Iterable[QForm]:
    """All positive definite ``(a, b, c)`` with ``max(a, c) <= bound``."""
    for a in range(1, bound + 1):
        for c in range(1, bound + 1):
            r = isqrt(4 * a * c - 1)
            for b in range(-r, r + 1):
                yield QForm(a, b, c)


@dataclass(frozen=True)
class FourierTable:
    """Exact Fourier coefficients ``a(F, T)`` of a weight-``k`` cusp form of level
    Gamma_0(N1, N2).

    The table is complete on the box ``max(a, c) <= bound`` (absent keys there are
    zero). Keys stored outside the box are known values too; any other lookup raises
    ``OutOfBoundError``.
    """

    k: int
    N1: int
    N2: int
    bound: int
    coeffs: Mapping[QForm, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.N1 < 1 or self.N2 < 1 or self.N2 % self.N1:
            raise ValueError(f"levels must satisfy N1 | N2, got N1={self.N1}, N2={self.N2}")
        frozen = {}
        for T, v in self.coeffs.items():
            if not isinstance(T, QForm):
                T = QForm(*T)
            frozen[T] = Fraction(v)
        object.__setattr__(self, "coeffs", MappingProxyType(frozen))

    def in_box(self, T: QForm) -> bool:
        return T.a <= self.bound and T.c <= self.bound

    def knows(self, T: QForm) -> bool:
        return self.in_box(T) or T in self.coeffs

    def __getitem__(self, T) -> Fraction:
        if not isinstance(T, QForm):
            T = QForm(*T)
        v = self.coeffs.get(T)
        if v is not None:
            return v
        if self.in_box(T):
            return Fraction(0)
        raise OutOfBoundError(f"coefficient at {T} is outside the table (bound {self.bound})")

    def known_forms(self) -> list[QForm]:
        return sorted(set(box_forms(self.bound)) | set(self.coeffs))

    def replace(self, T: QForm, value) -> FourierTable:
        new = dict(self.coeffs)
        new[T] = Fraction(value)
        return FourierTable(self.k, self.N1, self.N2, self.bound, new)

    @property
    def level(self) -> tuple[int, int]:
        return self.N1, self.N2


def igusa_chi10(bound: int, method: str = "dense") -> FourierTable:
    """Weight-10 level-one cusp form from the ten even theta constants, scaled so
    that the coefficient at ``(1, 1, 1)`` is 1.

    Besides the box ``max(a, c) <= bound`` the table holds every ``(n, r, 1)`` with
    ``n <= bound**2`` (zeros included), which is what the Maass relations of the
    box entries refer to.
    """
    if bound < 2:
        raise ValueError("bound must be at least 2")
    box = theta_product_region(bound, bound, method)
    strip = theta_product_region(bound * bound, 1, method)
    for key, v in strip.items():
        if key[0] <= bound and box.get(key, 0) != v:
            raise ThetaConsistencyError(f"box and strip disagree at {key}")
    for key, v in box.items():
        if key[2] <= 1 and strip.get(key, 0) != v:
            raise ThetaConsistencyError(f"box and strip disagree at {key}")
    scale = box.get((1, 1, 1), 0)
    if scale == 0:
        raise ThetaConsistencyError("theta product vanishes at (1, 1, 1)")
    coeffs = {QForm(*key): Fraction(v, scale) for key, v in box.items()}
    for n in range(bound + 1, bound * bound + 1):
        r = isqrt(4 * n - 1)
        for b in range(-r, r + 1):
            coeffs[QForm(n, b, 1)] = Fraction(strip.get((n, b, 1), 0), scale)
    return FourierTable(10, 1, 1, bound, coeffs)


# ---------------------------------------------------------------- Maass relations


def maass_rhs_classical(T: QForm, k: int) -> list[tuple[int, QForm]]:
    """Terms ``(r^(k-1), (ac/r^2, b/r, 1))`` for ``r | content(T)``."""
    a, b, c = T
    return [(r ** (k - 1), QForm(a * c // (r * r), b // r, 1)) for r in divisors(T.content)]


def maass_check_classical(table: FourierTable, T: QForm) -> bool:
    """a(T) == sum_{r | gcd(a,b,c)} r^(k-1) a((ac/r^2, b/r, 1)), exactly."""
    if table.level != (1, 1):
        raise ValueError(f"classical Maass relations need a level (1, 1) table, got {table.level}")
    rhs = sum((w * table[S] for w, S in maass_rhs_classical(T, table.k)), Fraction(0))
    return table[T] == rhs


def _split_level(T: QForm, N2: int, L: int | None) -> tuple[int, QForm]:
    if L is None:
        L = smooth_part(T.content, N2) if N2 > 1 else 1
    if L < 1 or T.a % L or T.b % L or T.c % L:
        raise MalformedFormError(f"{T} is not L * (a, b, c) for L = {L}")
    if (1 if N2 == 1 else smooth_part(L, N2)) != L:
        raise MalformedFormError(f"L = {L} has prime factors not dividing N2 = {N2}")
    T0 = QForm(T.a // L, T.b // L, T.c // L)
    if gcd(T0.content, N2) != 1:
        raise MalformedFormError(f"content of {T0} shares a factor with N2 = {N2}")
    return L, T0


def maass_rhs_levelN(T: QForm, k: int, N2: int, L: int | None = None) -> list[tuple[int, QForm]]:
    """Right side of the level-N relation for ``T = L * T0``:
    terms ``(r^(k-1), L * (a0 c0 / r^2, b0 / r, 1))`` for ``r | content(T0)``, ``gcd(r, N2) = 1``.

    ``L`` defaults to the N2-part of the content of ``T``.
    """
    L, T0 = _split_level(T, N2, L)
    a, b, c = T0
    terms = []
    for r in divisors(T0.content):
        if gcd(r, N2) != 1:
            continue
        terms.append((r ** (k - 1), QForm(L * (a * c // (r * r)), L * (b // r), L)))
    return terms


def levelN_hypothesis(T: QForm, N1: int, N2: int, L: int | None = None) -> bool:
    """Whether ``T = L * T0`` has (disc T0 / p) = -1 for every prime p | N1."""
    _, T0 = _split_level(T, N2, L)
    return all(kronecker(T0.disc, p) == -1 for p in prime_divisors(N1))


def maass_check_levelN(table: FourierTable, T: QForm, L: int | None = None) -> bool:
    terms = maass_rhs_levelN(T, table.k, table.N2, L)
    rhs = sum((w * table[S] for w, S in terms), Fraction(0))
    return table[T] == rhs


def _jacobi_rows(table: FourierTable) -> list[QForm]:
    rows = [T for T in table.coeffs if T.c == 1]
    rows += [QForm(n, b, 1) for n in range(1, table.bound + 1) for b in range(-isqrt(4 * n - 1), isqrt(4 * n - 1) + 1)]
    return sorted(set(rows))


def extract_jacobi(table: FourierTable) -> dict[int, Fraction]:
    """``C(D) = a((n, r, 1))`` for ``4n - r^2 = D``; raises if two representatives disagree."""
    if table.level != (1, 1):
        raise ValueError("Jacobi coefficients are read off level (1, 1) tables")
    out: dict[int, Fraction] = {}
    witness: dict[int, QForm] = {}
    for T in _jacobi_rows(table):
        D = -T.disc
        v = table[T]
        if D in out and out[D] != v:
            raise JacobiInconsistency(f"C({D}) is {out[D]} at {witness[D]} but {v} at {T}")
        out.setdefault(D, v)
        witness.setdefault(D, T)
    return dict(sorted(out.items()))


def lift_from_jacobi(C: Mapping[int, Fraction], k: int, bound: int) -> FourierTable:
    """Level-one table with a(T) = sum_{r | content T} r^(k-1) C(|disc T| / r^2), on the
    box ``max(a, c) <= bound`` plus the rows ``(n, r, 1)``, ``n <= bound**2``."""

    def value(T: QForm) -> Fraction:
        total = Fraction(0)
        for r in divisors(T.content):
            D = -T.disc // (r * r)
            if D not in C:
                raise KeyError(f"C({D}) is needed for {T} but missing")
            total += r ** (k - 1) * Fraction(C[D])
        return total

    coeffs = {}
    for T in box_forms(bound):
        v = value(T)
        if v:
            coeffs[T] = v
    for n in range(bound + 1, bound * bound + 1):
        r = isqrt(4 * n - 1)
        for b in range(-r, r + 1):
            T = QForm(n, b, 1)
            coeffs[T] = value(T)
    return FourierTable(k, 1, 1, bound, coeffs)


@dataclass
class VerificationReport:
    checked: int = 0
    passed: int = 0
    skipped: int = 0
    failures: list[QForm] = field(default_factory=list)
    jacobi_error: str | None = None

    @property
    def ok(self) -> bool:
        return not self.failures and self.jacobi_error is None

    @property
    def first_failure(self) -> QForm | None:
        return self.failures[0] if self.failures else None


def verify_table(table: FourierTable, level_n: bool = False) -> VerificationReport:
    """Check the Maass relation at every known ``T`` whose right side is in range.

    Classical mode (and level-N mode on level (1, 1) tables) also checks that the
    rows ``(n, r, 1)`` depend only on ``4n - r^2``. In level-N mode forms violating
    the Kronecker hypothesis at primes dividing N1 are skipped.
    """
    report = VerificationReport()
    classical = not level_n or table.level == (1, 1)
    if not level_n and table.level != (1, 1):
        raise ValueError(f"classical verification needs a level (1, 1) table, got {table.level}")
    for T in table.known_forms():
        if classical:
            terms = maass_rhs_classical(T, table.k)
        else:
            if not levelN_hypothesis(T, table.N1, table.N2):
                report.skipped += 1
                continue
            terms = maass_rhs_levelN(T, table.k, table.N2)
        if not all(table.knows(S) for _, S in terms):
            report.skipped += 1
            continue
        report.checked += 1
        rhs = sum((w * table[S] for w, S in terms), Fraction(0))
        if table[T] == rhs:
            report.passed += 1
        else:
            report.failures.append(T)
    if classical:
        try:
            extract_jacobi(table)
        except JacobiInconsistency as exc:
            report.jacobi_error = str(exc)
    return report


# ---------------------------------------------------------------- SFC files

_HEADER_KEYS = ("k", "N1", "N2", "bound")
_LINE_RE = re.compile(r"^\s*(-?\d+)\s+(-?\d+)\s+(-?\d+)\s+(-?\d+)/(\d+)\s*$")


def format_sfc(table: FourierTable) -> str:
    lines = ["SFC 1", f"k {table.k} N1 {table.N1} N2 {table.N2} bound {table.bound}"]
    for T in sorted(table.coeffs):
        v = table.coeffs[T]
        lines.append(f"{T.a} {T.b} {T.c} {v.numerator}/{v.denominator}")
    return "\n".join(lines) + "\n"


def parse_sfc(text: str) -> FourierTable:
    lines = text.splitlines()
    if not lines or lines[0].split() != ["SFC", "1"]:
        raise SFCParseError(1, "expected magic 'SFC 1'")
    if len(lines) < 2:
        raise SFCParseError(2, "missing header line")
    tok = lines[1].split()
    if len(tok) != 8 or tuple(tok[0::2]) != _HEADER_KEYS:
        raise SFCParseError(2, "expected 'k <weight> N1 <n1> N2 <n2> bound <B>'")
    try:
        k, N1, N2, bound = (int(x) for x in tok[1::2])
    except ValueError:
        raise SFCParseError(2, "header values must be integers") from None
    if N1 < 1 or N2 < 1 or N2 % N1 or bound < 0:
        raise SFCParseError(2, f"invalid levels or bound: N1={N1} N2={N2} bound={bound}")
    coeffs: dict[QForm, Fraction] = {}
    for lineno, line in enumerate(lines[2:], start=3):
        if not line.strip():
            continue
        m = _LINE_RE.match(line)
        if not m:
            raise SFCParseError(lineno, f"malformed coefficient line {line!r}")
        a, b, c, num, den = (int(x) for x in m.groups())
        if den == 0:
            raise SFCParseError(lineno, "zero denominator")
        try:
            T = QForm(a, b, c)
        except ValueError:
            raise SFCParseError(lineno, f"key ({a}, {b}, {c}) is not positive definite") from None
        if T in coeffs:
            raise SFCParseError(lineno, f"duplicate key {T}")
        coeffs[T] = Fraction(num, den)
    return FourierTable(k, N1, N2, bound, coeffs)


def write_sfc(table: FourierTable, path) -> None:
    Path(path).write_text(format_sfc(table))


def read_sfc(path) -> FourierTable:
    return parse_sfc(Path(path).read_text())
