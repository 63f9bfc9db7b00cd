import random
from fractions import Fraction

import pytest

from skmaass.qform import QForm
from skmaass.sklift import (
    EVEN_CHARACTERISTICS,
    FourierTable,
    JacobiInconsistency,
    MalformedFormError,
    OutOfBoundError,
    SFCParseError,
    box_forms,
    extract_jacobi,
    format_sfc,
    igusa_chi10,
    lift_from_jacobi,
    maass_check_classical,
    maass_check_levelN,
    maass_rhs_levelN,
    parse_sfc,
    read_sfc,
    theta_constant,
    theta_product_region,
    verify_table,
    write_sfc,
)

# Fourier-Jacobi coefficients c(4n - r^2) of the index-1 weight-10 Jacobi cusp form,
# normalized by c(3) = 1
PHI10_1 = {3: 1, 4: -2, 7: -16, 8: 36, 11: 99, 12: -272, 15: -240, 16: 1056}


def relabel(table, N1, N2):
    return FourierTable(table.k, N1, N2, table.bound, dict(table.coeffs))


def test_characteristics():
    assert len(EVEN_CHARACTERISTICS) == 10
    with pytest.raises(ValueError):
        theta_constant(((1, 0), (1, 0)), 2)


def test_theta_constant_terms():
    th = theta_constant(((0, 0), (0, 0)), 2)
    assert th[(0, 0, 0)] == 1
    # n = (1, 0) and (-1, 0) both give T = diag(1/2, 0)
    assert th[(4, 0, 0)] == 2
    assert th[(4, 8, 4)] == 2  # n = +-(1, 1)
    odd = theta_constant(((1, 1), (0, 0)), 2)
    assert odd[(0, 0, 0)] == 0
    assert odd[(1, 2, 1)] == 2
    assert all(A * C * 4 >= B * B for A, B, C in th.coeffs)


def test_theta_phase_signs():
    # a = (1, 0), b = (0, 1): w = (w1, w2) with w1 odd, w2 even, phase (-1)^(w2/2)
    th = theta_constant(((1, 0), (0, 1)), 2)
    assert th[(1, 0, 0)] == 2
    assert th[(1, 4, 4)] == -2  # w = +-(1, 2)
    assert th[(1, -4, 4)] == -2


def test_sparse_and_dense_products_agree():
    assert theta_product_region(3, 3) == theta_product_region(3, 3, "sparse")
    assert theta_product_region(9, 1) == theta_product_region(9, 1, "sparse")


def test_chi10_normalization_and_golden_values(chi10_small):
    T = chi10_small
    assert T.k == 10 and T.level == (1, 1)
    assert T[(1, 1, 1)] == 1
    assert T[(1, 0, 1)] == -2
    assert T[(1, -1, 1)] == 1
    assert T[(2, 2, 2)] == 240
    assert T[(2, 0, 2)] == PHI10_1[16] + 2**9 * PHI10_1[4]
    assert T[(2, 1, 2)] == PHI10_1[15]
    for D, c in PHI10_1.items():
        assert extract_jacobi(T)[D] == c


def test_chi10_small_bound_matches_sparse_construction():
    assert igusa_chi10(2, method="sparse") == igusa_chi10(2)


def test_chi10_support_positive_definite(chi10_small):
    assert all(T.disc < 0 for T in chi10_small.coeffs)
    with pytest.raises(ValueError):
        igusa_chi10(1)


def test_table_lookup_rules(chi10_small):
    T = chi10_small
    assert T[(3, 0, 4)] == T.coeffs.get(QForm(3, 0, 4), 0)
    assert T[(16, 7, 1)] == T[(4, 1, 1)]  # strip entry outside the box
    with pytest.raises(OutOfBoundError):
        T[(5, 0, 5)]
    with pytest.raises(OutOfBoundError):
        T[(17, 1, 1)]
    with pytest.raises(OutOfBoundError):
        maass_check_classical(T, QForm(5, 0, 5))
    with pytest.raises(ValueError):
        FourierTable(10, 2, 3, 2, {})
    with pytest.raises(TypeError):
        T.coeffs[QForm(1, 1, 1)] = 5


def test_maass_examples(chi10_small):
    T = chi10_small
    assert maass_check_classical(T, QForm(1, 1, 1))
    assert maass_check_classical(T, QForm(1, 0, 1))
    assert maass_check_classical(T, QForm(2, 2, 2))
    assert T[(2, 2, 2)] == T[(4, 2, 1)] + 2**9 * T[(1, 1, 1)]
    bad = T.replace(QForm(2, 2, 2), T[(2, 2, 2)] + 1)
    assert not maass_check_classical(bad, QForm(2, 2, 2))
    with pytest.raises(ValueError):
        maass_check_classical(relabel(T, 1, 2), QForm(1, 1, 1))


def test_gl2_invariance_small(chi10_small):
    T = chi10_small
    rng = random.Random(3)
    forms = list(box_forms(T.bound))
    mats = [(1, 1, 0, 1), (1, -1, 0, 1), (0, 1, 1, 0), (1, 0, 1, 1), (1, 0, -1, 1), (-1, 0, 0, 1)]
    checked = 0
    for _ in range(400):
        S = rng.choice(forms)
        U = rng.choice(mats)
        S2 = S.transform(U)
        if T.in_box(S2):
            checked += 1
            assert T[S] == T[S2]
    assert checked > 100


def test_jacobi_dependence(chi10_small):
    C = extract_jacobi(chi10_small)
    assert C[3] == 1 and C[4] == chi10_small[(1, 0, 1)]
    assert chi10_small[(3, 1, 1)] == chi10_small[(15, 7, 1)] == C[11]
    bad = chi10_small.replace(QForm(15, 7, 1), 5)
    with pytest.raises(JacobiInconsistency):
        extract_jacobi(bad)


def test_lift_roundtrip(chi10_small):
    C = extract_jacobi(chi10_small)
    assert lift_from_jacobi(C, 10, chi10_small.bound) == chi10_small


def test_lift_examples():
    C = {D: Fraction(D % 7) for D in range(1, 4 * 9 + 1)}
    table = lift_from_jacobi(C, 6, 3)
    assert table[(2, 1, 3)] == C[23]  # content 1
    assert table[(2, 2, 2)] == C[12] + 2**5 * C[3]
    zero = lift_from_jacobi({D: 0 for D in range(1, 37)}, 10, 3)
    assert all(v == 0 for v in zero.coeffs.values())
    assert zero[(3, 3, 3)] == 0
    with pytest.raises(KeyError):
        lift_from_jacobi({3: 1}, 10, 2)


def test_verify_small(chi10_small):
    report = verify_table(chi10_small)
    assert report.ok and report.skipped == 0 and report.checked > 0
    bad = verify_table(chi10_small.replace(QForm(2, 2, 2), 0))
    assert not bad.ok and bad.first_failure == QForm(2, 2, 2)


def test_levelN_degenerates(chi10_small):
    T = chi10_small
    for S in box_forms(T.bound):
        assert maass_check_levelN(T, S) == maass_check_classical(T, S)
    assert verify_table(T, level_n=True).ok


def test_levelN_single_term_when_L_is_N2_smooth():
    T = QForm(4, 2, 6)  # 2 * (2, 1, 3)
    assert maass_rhs_levelN(T, 10, 2) == [(1, QForm(12, 2, 2))]
    assert maass_rhs_levelN(QForm(2, 2, 2), 10, 2) == [(1, QForm(2, 2, 2))]


def test_levelN_rhs_and_errors():
    T = QForm(6, 6, 6)  # 6 * (1, 1, 1); N2 = 2 leaves r in {1, 3}
    assert maass_rhs_levelN(T, 10, 2) == [(1, QForm(18, 6, 2)), (3**9, QForm(2, 2, 2))]
    assert maass_rhs_levelN(T, 10, 2, L=2) == maass_rhs_levelN(T, 10, 2)
    with pytest.raises(MalformedFormError):
        maass_rhs_levelN(T, 10, 2, L=4)  # 4 does not divide T
    with pytest.raises(MalformedFormError):
        maass_rhs_levelN(T, 10, 2, L=3)  # 3 does not divide N2^oo
    with pytest.raises(MalformedFormError):
        maass_rhs_levelN(QForm(4, 4, 4), 10, 2, L=2)  # T0 content shares 2 with N2


@pytest.mark.parametrize("N1,N2", [(1, 2), (1, 6), (2, 2), (3, 6)])
def test_levelN_on_relabelled_lift(chi10_small, N1, N2):
    # a level-one lift also satisfies the level-N relations
    table = relabel(chi10_small, N1, N2)
    report = verify_table(table, level_n=True)
    assert report.ok and report.checked > 0
    bad = verify_table(table.replace(QForm(3, 3, 3), table[(3, 3, 3)] + 1), level_n=True)
    if N2 % 3:
        assert bad.failures == [QForm(3, 3, 3)]


def test_sfc_roundtrip(tmp_path, chi10_small):
    path = tmp_path / "t.sfc"
    write_sfc(chi10_small, path)
    assert read_sfc(path) == chi10_small
    text = format_sfc(chi10_small)
    assert text.splitlines()[:2] == ["SFC 1", "k 10 N1 1 N2 1 bound 4"]
    assert "1 1 1 1/1" in text.splitlines()


@pytest.mark.parametrize(
    "text,lineno",
    [
        ("", 1),
        ("SFC 2\nk 10 N1 1 N2 1 bound 2\n", 1),
        ("SFC 1\n", 2),
        ("SFC 1\nk 10 N1 1 N2 1\n", 2),
        ("SFC 1\nk 10 N1 2 N2 3 bound 2\n", 2),
        ("SFC 1\nk x N1 1 N2 1 bound 2\n", 2),
        ("SFC 1\nk 10 N1 1 N2 1 bound 2\n1 1 1 1/1\n1 1 1 2/1\n", 4),
        ("SFC 1\nk 10 N1 1 N2 1 bound 2\n1 2 1 1/1\n", 3),
        ("SFC 1\nk 10 N1 1 N2 1 bound 2\n1 1 1 1/0\n", 3),
        ("SFC 1\nk 10 N1 1 N2 1 bound 2\n1 1 1 1.5\n", 3),
        ("SFC 1\nk 10 N1 1 N2 1 bound 2\n1 1 1 1/-2\n", 3),
        ("SFC 1\nk 10 N1 1 N2 1 bound 2\n1 1 1\n", 3),
    ],
)
def test_sfc_parse_errors(text, lineno):
    with pytest.raises(SFCParseError) as err:
        parse_sfc(text)
    assert err.value.lineno == lineno
    assert str(err.value).startswith(f"line {lineno}:")


def test_sfc_accepts_unreduced_rationals():
    table = parse_sfc("SFC 1\nk 10 N1 1 N2 2 bound 1\n1 1 1 -4/2\n")
    assert table[(1, 1, 1)] == -2 and table.level == (1, 2)
