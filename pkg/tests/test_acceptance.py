"""Acceptance criteria, one test each. Every test prints a single PASS/FAIL line,
and the lines are repeated in the terminal summary of the pytest run.

    pytest tests/test_acceptance.py -v
"""

import random
import time
from contextlib import contextmanager

import pytest

from conftest import ACCEPTANCE_LINES, BUILD_SECONDS
from skmaass import cli
from skmaass.arith import count_roots_minus_one, count_roots_omega
from skmaass.bessel import maass_identity_check
from skmaass.qform import (
    QForm,
    count_classes_formula,
    enumerate_classes,
    gamma0_equivalent,
    h1_classes,
    is_phi_surjective,
    reduce,
)
from skmaass.rayclass import class_number, raycl_size
from skmaass.sklift import (
    box_forms,
    extract_jacobi,
    lift_from_jacobi,
    maass_check_classical,
    maass_check_levelN,
    verify_table,
    write_sfc,
)

SWEEP_D = (-3, -4, -7, -8, -11, -15, -19, -20, -23, -24)
GRID = [(d, M, L, N) for d in SWEEP_D for M in (1, 2, 3) for L in (1, 2) for N in range(1, 13)]


@contextmanager
def criterion(number, title):
    info = {}
    start = time.perf_counter()
    try:
        yield info
    except BaseException as exc:
        line = f"criterion {number}: FAIL  {title} ({type(exc).__name__}: {str(exc)[:120]})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    elapsed = time.perf_counter() - start
    detail = info.get("detail", "")
    line = f"criterion {number}: PASS  {title} [{detail}{'; ' if detail else ''}{elapsed:.1f}s]"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.fixture(scope="module")
def grid_data():
    start = time.perf_counter()
    rows = {}
    for d, M, L, N in GRID:
        H = enumerate_classes(d, M, L, N).representatives
        H1 = h1_classes(d, M, L, N, check=False).representatives
        rows[(d, M, L, N)] = {
            "H": H,
            "H1": H1,
            "formula": count_classes_formula(d, M, L, N),
        }
    return rows, time.perf_counter() - start


def _h1_in_h(H1, H, N):
    """Map each H_1 representative to the unique H class containing it."""
    reductions = [(S, reduce(S)) for S in H]
    image = set()
    for T in H1:
        rt = reduce(T)
        hits = [i for i, (S, rs) in enumerate(reductions) if rs[0] == rt[0] and gamma0_equivalent(S, T, N, rs, rt)]
        assert len(hits) == 1, f"{T} lies in {len(hits)} classes of H"
        image.add(hits[0])
    assert len(image) == len(H1), "two H_1 representatives share a class"
    return image


def test_criterion_1_counting_formulas(grid_data):
    rows, build = grid_data
    with criterion(1, "class counts: enumeration equals closed formula on the full grid") as info:
        bad = [k for k, r in rows.items() if len(r["H"]) != r["formula"]]
        assert not bad, f"mismatches at {bad[:5]}"
        assert build < 120, f"sweep took {build:.0f}s"
        info["detail"] = f"{len(rows)} points, enumeration {build:.1f}s"


def test_criterion_2_root_counts():
    with criterion(2, "root counts: closed forms equal brute force for n <= 10000") as info:
        start = time.perf_counter()
        for n in range(1, 10001):
            # check=True compares with brute force and raises on disagreement
            count_roots_minus_one(n, check=True)
            count_roots_omega(n, check=True)
        elapsed = time.perf_counter() - start
        assert elapsed < 60
        info["detail"] = "20000 comparisons"


def test_criterion_3_surjectivity_conditions_agree(grid_data):
    rows, _ = grid_data
    with criterion(3, "H_1 = H, Kronecker condition and level swap agree pairwise") as info:
        counts = {True: 0, False: 0}
        for (d, M, L, N), r in rows.items():
            _h1_in_h(r["H1"], r["H"], N)
            h1_is_h = len(r["H1"]) == len(r["H"])  # with the inclusion above
            kron = is_phi_surjective(d, M, N)
            swap = len(enumerate_classes(d, M * N, L, 1).representatives) == len(r["H"])
            assert h1_is_h == kron == swap, f"conditions disagree at {(d, M, L, N)}: {h1_is_h}, {kron}, {swap}"
            counts[kron] += 1
        info["detail"] = f"{counts[True]} surjective, {counts[False]} not"


def test_criterion_4_ray_class_sizes():
    with criterion(4, "ray class sizes equal class numbers of d N^2, 2 <= N <= 30") as info:
        n = 0
        for d in SWEEP_D:
            for N in range(2, 31):
                assert raycl_size(d, N, check=False) == class_number(d * N * N), (d, N)
                n += 1
        info["detail"] = f"{n} pairs"


def test_criterion_5_h1_cardinality(grid_data):
    rows, _ = grid_data
    with criterion(5, "|H_1(dM^2, L; N)| = |Cl_d(MN)| on the full grid") as info:
        bad = [k for k, r in rows.items() if len(r["H1"]) != raycl_size(k[0], k[1] * k[3])]
        assert not bad, f"mismatches at {bad[:5]}"
        info["detail"] = f"{len(rows)} points"


def test_criterion_6_bessel_identity():
    with criterion(6, "type-IIb Bessel identity for L*M <= 200, N2 in {1,2,3,4,6,12}") as info:
        start = time.perf_counter()
        n = 0
        for N2 in (1, 2, 3, 4, 6, 12):
            for L in range(1, 201):
                for M in range(1, 200 // L + 1):
                    assert maass_identity_check(L, M, N2), (L, M, N2)
                    n += 1
        assert time.perf_counter() - start < 60
        info["detail"] = f"{n} cases"


def test_criterion_7_maass_relations_on_chi10(chi10):
    with criterion(7, "chi_10 (bound 10) satisfies every classical Maass relation in the box") as info:
        assert chi10.bound >= 10
        build = BUILD_SECONDS.get(10, 0.0)
        assert build < 300, f"building the table took {build:.0f}s"
        forms = list(box_forms(chi10.bound))
        failures = [T for T in forms if not maass_check_classical(chi10, T)]
        assert not failures, f"relation fails at {failures[:5]}"
        assert lift_from_jacobi(extract_jacobi(chi10), 10, chi10.bound) == chi10
        info["detail"] = f"{len(forms)} forms, oracle built in {build:.1f}s, lift(extract) is the identity"


def _random_gl2(rng):
    U = (1, 0, 0, 1)
    for _ in range(rng.randint(1, 4)):
        g = rng.choice([(1, 1, 0, 1), (1, -1, 0, 1), (1, 0, 1, 1), (1, 0, -1, 1), (0, 1, 1, 0), (-1, 0, 0, 1), (1, 2, 0, 1), (1, 0, -2, 1)])
        p, q, r, s = U
        P, Q, R, S = g
        U = (p * P + q * R, p * Q + q * S, r * P + s * R, r * Q + s * S)
    return U


def test_criterion_8_oracle_consistency(chi10):
    with criterion(8, "chi_10 is GL2(Z)-invariant, PD-supported and index-1 Jacobi") as info:
        rng = random.Random(20261016)
        forms = list(box_forms(chi10.bound))
        pairs = 0
        while pairs < 100:
            T = rng.choice(forms)
            U = _random_gl2(rng)
            S = T.transform(U)
            if S == T or not chi10.in_box(S):
                continue
            assert chi10[T] == chi10[S], f"a({T}) != a({S})"
            pairs += 1
        for T in chi10.coeffs:
            assert isinstance(T, QForm) and T.disc < 0
        # every row (n, r, 1) in the table depends only on 4n - r^2
        C = extract_jacobi(chi10)
        rows = [T for T in chi10.known_forms() if T.c == 1]
        assert all(chi10[T] == C[-T.disc] for T in rows)
        info["detail"] = f"{pairs} conjugation pairs, {len(rows)} Jacobi rows"


def test_criterion_9_levelN_degenerates(chi10):
    with criterion(9, "level-N checker with N2 = 1 agrees with the classical one") as info:
        rng = random.Random(9)
        forms = list(box_forms(chi10.bound))
        for _ in range(1000):
            T = rng.choice(forms)
            assert maass_check_levelN(chi10, T) == maass_check_classical(chi10, T), T
        # agreement must also hold where the relation is violated
        flips = 0
        for _ in range(100):
            T = rng.choice([S for S in forms if S.content > 1])
            bad = chi10.replace(T, chi10[T] + 1)
            assert maass_check_levelN(bad, T) == maass_check_classical(bad, T) is False
            flips += 1
        info["detail"] = f"1000 random forms, {flips} mutated forms"


def test_criterion_10_mutation_sensitivity(chi10, tmp_path):
    with criterion(10, "verify-maass rejects every sampled single-coefficient mutation") as info:
        rng = random.Random(10)
        keys = sorted(chi10.coeffs)
        path = tmp_path / "mutated.sfc"
        for T in rng.sample(keys, 50):
            delta = rng.choice([-3, -2, -1, 1, 2, 3])
            write_sfc(chi10.replace(T, chi10[T] + delta), path)
            code = cli.main(["verify-maass", str(path)], out=open("/dev/null", "w"))
            assert code == 1, f"mutation at {T} went unnoticed"
            report = verify_table(chi10.replace(T, chi10[T] + delta))
            assert not report.ok
        info["detail"] = "50 mutations, all exit 1"


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
