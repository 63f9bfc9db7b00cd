"""Orders of the ray class groups Cl_d(N) of an imaginary quadratic field.

The closed formula is cross-checked against the count of primitive reduced
forms of discriminant d N^2, which is the same group in disguise.
"""

from dataclasses import dataclass
from fractions import Fraction

from .arith import is_fundamental_discriminant, kronecker, prime_divisors, units_index
from .qform import reduced_forms

__all__ = ["RayClassSize", "RayClassMismatch", "class_number", "raycl_size", "units_index", "ray_class_record"]


class RayClassMismatch(ArithmeticError):
    pass


@dataclass(frozen=True)
class RayClassSize:
    d: int
    N: int
    size: int


def class_number(D: int) -> int:
    """Number of reduced primitive positive definite forms of discriminant ``D``."""
    if D >= 0 or D % 4 not in (0, 1):
        raise ValueError(f"{D} is not a negative discriminant")
    return len(reduced_forms(D, primitive=True))


def raycl_size(d: int, N: int, check: bool = True) -> int:
    """|Cl_d(N)|. For ``N > 1`` the product formula is used and, with ``check``,
    compared against ``class_number(d * N**2)``."""
    if d >= 0 or not is_fundamental_discriminant(d):
        raise ValueError(f"{d} is not a negative fundamental discriminant")
    if N < 1:
        raise ValueError("N must be positive")
    h = class_number(d)
    if N == 1:
        return h
    value = Fraction(h * N, units_index(d))
    for p in prime_divisors(N):
        value *= 1 - Fraction(kronecker(d, p), p)
    if value.denominator != 1:
        raise RayClassMismatch(f"|Cl_{d}({N})| formula gave non-integer {value}")
    size = int(value)
    if check:
        oracle = class_number(d * N * N)
        if oracle != size:
            raise RayClassMismatch(f"|Cl_{d}({N})|: formula {size}, form count {oracle}")
    return size


def ray_class_record(d: int, N: int, check: bool = True) -> RayClassSize:
    return RayClassSize(d, N, raycl_size(d, N, check=check))
