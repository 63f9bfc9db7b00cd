"""Exact computations around Saito-Kurokawa lifts: Gamma^0(N)-classes of binary
quadratic forms, ray class group orders, type-IIb Bessel identities and Maass
relations checked against a theta-constant construction of Igusa's chi_10."""

from .arith import kronecker, smooth_part
from .bessel import bessel_exists_lookup, iib_value, maass_identity_check
from .qform import (
    QForm,
    UnimodularMatrix,
    count_classes_formula,
    enumerate_classes,
    gamma0_equivalent,
    h1_classes,
    is_phi_surjective,
    reduce,
)
from .rayclass import class_number, raycl_size
from .sklift import (
    FourierTable,
    OutOfBoundError,
    extract_jacobi,
    igusa_chi10,
    lift_from_jacobi,
    maass_check_classical,
    maass_check_levelN,
    read_sfc,
    verify_table,
    write_sfc,
)

__version__ = "0.1.0"
